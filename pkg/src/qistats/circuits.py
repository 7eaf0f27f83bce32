"""Random quantum circuits as gate sequences and their dense realizations.

Two circuit ensembles are built from universal gate sets: the unitary
circuit ensemble (UCE) draws each gate as either a Haar-random 2x2 unitary
on a random qubit (probability ``p``) or a CNOT on a random ordered pair of
distinct qubits; the orthogonal circuit ensemble (OCE) uses a Hadamard and
a Toffoli on a random ordered triple instead, so its circuits are real.

A circuit on ``n`` qubits realizes an ``N x N`` operator with ``N = 2**n``.
Basis-state convention: qubit ``q`` is bit ``n - 1 - q`` of the basis-state
index, i.e. qubit 0 is the most significant bit.  Realization multiplies
gate matrices onto an accumulator from the left (gate 1 applied first)
without ever materializing a full-size gate matrix: a single-qubit gate
mixes the row pairs that differ only in its target bit, and CNOT/Toffoli
swap the row pairs selected by their control bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .haar import draw_u2_angles, u2_from_angles

__all__ = [
    "MAX_QUBITS_DEFAULT",
    "U2Gate",
    "HadamardGate",
    "CnotGate",
    "ToffoliGate",
    "Gate",
    "CircuitSpec",
    "CircuitEnsembleConfig",
    "validate_gate",
    "draw_circuit",
    "apply_gate_in_place",
    "realize_circuit",
    "circuit_to_text",
    "circuit_from_text",
]

#: Default cap on the qubit count of realized circuits (memory is 2^n x 2^n).
MAX_QUBITS_DEFAULT = 12

_SQRT_HALF = float(np.sqrt(0.5))
_HADAMARD = np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]])


@dataclass(frozen=True)
class U2Gate:
    """Single-qubit unitary with the four-angle parametrization."""

    target: int
    alpha: float
    psi: float
    chi: float
    phi: float

    def matrix(self) -> np.ndarray:
        return u2_from_angles(self.alpha, self.psi, self.chi, self.phi)


@dataclass(frozen=True)
class HadamardGate:
    target: int

    def matrix(self) -> np.ndarray:
        return _HADAMARD


@dataclass(frozen=True)
class CnotGate:
    control: int
    target: int


@dataclass(frozen=True)
class ToffoliGate:
    control1: int
    control2: int
    target: int


Gate = U2Gate | HadamardGate | CnotGate | ToffoliGate


def validate_gate(gate: Gate, n: int) -> None:
    """Raise ``ValueError`` unless ``gate`` is well formed for ``n`` qubits."""
    if isinstance(gate, (U2Gate, HadamardGate)):
        indices = (gate.target,)
    elif isinstance(gate, CnotGate):
        indices = (gate.control, gate.target)
    elif isinstance(gate, ToffoliGate):
        indices = (gate.control1, gate.control2, gate.target)
    else:
        raise ValueError(f"unknown gate type {type(gate).__name__}")
    if len(set(indices)) != len(indices):
        raise ValueError(f"{type(gate).__name__} qubit indices must be distinct: {indices}")
    for q in indices:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")


@dataclass(frozen=True)
class CircuitSpec:
    """An ordered gate sequence on ``n`` qubits."""

    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            validate_gate(gate, self.n)

    @property
    def n_g(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class CircuitEnsembleConfig:
    """Parameters of a random circuit ensemble.

    ``kind`` is ``"uce"`` or ``"oce"``; ``p`` is the probability that a
    gate is a single-qubit gate; ``n_r`` and ``seed`` describe the
    realization count and master seed of an experiment using the ensemble.
    """

    kind: str
    n: int
    n_g: int
    p: float
    n_r: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("uce", "oce"):
            raise ValueError(f"kind must be 'uce' or 'oce', got {self.kind!r}")
        min_qubits = 2 if self.kind == "uce" else 3
        if self.n < min_qubits:
            raise ValueError(f"{self.kind} requires at least {min_qubits} qubits, got {self.n}")
        if self.n_g < 0:
            raise ValueError("gate count must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"single-qubit gate probability must be in [0, 1], got {self.p}")
        if self.n_r < 1:
            raise ValueError("realization count must be positive")


def _distinct_indices(stream: np.random.Generator, n: int, count: int) -> list[int]:
    """Uniform ordered sample of ``count`` distinct indices from ``range(n)``."""
    picked: list[int] = []
    for j in range(count):
        r = int(stream.integers(n - j))
        for q in sorted(picked):
            if r >= q:
                r += 1
        picked.append(r)
    return picked


def draw_circuit(config: CircuitEnsembleConfig, stream: np.random.Generator) -> CircuitSpec:
    """Draw one random circuit from the configured ensemble.

    Each of the ``n_g`` gates is chosen independently: with probability
    ``p`` a single-qubit gate on a uniformly random qubit (a fresh
    Haar-random 2x2 unitary for UCE, a Hadamard for OCE), otherwise a
    CNOT (UCE) or Toffoli (OCE) on uniformly random distinct qubits.
    """
    gates: list[Gate] = []
    coins = stream.random(config.n_g)
    for coin in coins:
        if coin < config.p:
            target = int(stream.integers(config.n))
            if config.kind == "uce":
                alpha, psi, chi, phi = draw_u2_angles(stream)
                gates.append(U2Gate(target, alpha, psi, chi, phi))
            else:
                gates.append(HadamardGate(target))
        elif config.kind == "uce":
            control, target = _distinct_indices(stream, config.n, 2)
            gates.append(CnotGate(control, target))
        else:
            c1, c2, target = _distinct_indices(stream, config.n, 3)
            gates.append(ToffoliGate(c1, c2, target))
    return CircuitSpec(config.n, tuple(gates))


@lru_cache(maxsize=None)
def _swap_slices(n: int, control_bits: tuple[int, ...], target_bit: int):
    """Reshape and index pair exchanging the rows of a controlled NOT (cached).

    Grouping the row axis as ``(..., 2, ...)`` blocks, one 2-axis per
    control/target bit, turns the swap into two disjoint basic slices.
    """
    special = sorted(control_bits + (target_bit,), reverse=True)
    shape: list[int] = []
    prev = n
    for bit in special:
        shape.extend((1 << (prev - 1 - bit), 2))
        prev = bit
    shape.extend((1 << prev, 1 << n))
    index0: list = [slice(None)] * len(shape)
    index1: list = [slice(None)] * len(shape)
    for pos, bit in enumerate(special):
        axis = 2 * pos + 1
        index0[axis] = 1
        index1[axis] = 1
        if bit == target_bit:
            index0[axis] = 0
    return tuple(shape), tuple(index0), tuple(index1)


def apply_gate_in_place(accumulator: np.ndarray, gate: Gate) -> np.ndarray:
    """Left-multiply ``accumulator`` by the full-space embedding of ``gate``.

    The accumulator must be ``2**n x 2**n``; it is updated in place and
    returned.  Single-qubit gates cost O(N^2) arithmetic (they mix the row
    pairs differing only in the target bit); CNOT and Toffoli are pure row
    swaps.
    """
    dim = accumulator.shape[0]
    n = dim.bit_length() - 1
    if accumulator.ndim != 2 or accumulator.shape != (dim, dim) or (1 << n) != dim:
        raise ValueError("accumulator must be a square matrix of dimension 2**n")
    if not accumulator.flags.c_contiguous:
        raise ValueError("accumulator must be C-contiguous for in-place updates")
    validate_gate(gate, n)
    if isinstance(gate, (U2Gate, HadamardGate)):
        u = gate.matrix()
        bit = n - 1 - gate.target
        view = accumulator.reshape(dim >> (bit + 1), 2, (1 << bit) * dim)
        a0 = view[:, 0]
        a1 = view[:, 1]
        new0 = u[0, 0] * a0 + u[0, 1] * a1
        new1 = u[1, 0] * a0 + u[1, 1] * a1
        view[:, 0] = new0
        view[:, 1] = new1
    else:
        if isinstance(gate, CnotGate):
            controls = (n - 1 - gate.control,)
        else:
            controls = (n - 1 - gate.control1, n - 1 - gate.control2)
        shape, index0, index1 = _swap_slices(n, controls, n - 1 - gate.target)
        view = accumulator.reshape(shape)
        swapped = view[index0].copy()
        view[index0] = view[index1]
        view[index1] = swapped
    return accumulator


def realize_circuit(
    circuit: CircuitSpec,
    dtype: np.dtype | None = None,
    max_qubits: int = MAX_QUBITS_DEFAULT,
) -> np.ndarray:
    """Dense ``2**n x 2**n`` operator ``G_ng ... G_2 G_1`` of a circuit.

    ``dtype`` defaults to ``float64`` when every gate is real (Hadamard,
    CNOT, Toffoli) and ``complex128`` otherwise; forcing ``complex128``
    for a real circuit yields exactly zero imaginary parts with real parts
    identical to the real-arithmetic path.
    """
    if circuit.n > max_qubits:
        raise ValueError(
            f"circuit on {circuit.n} qubits exceeds the {max_qubits}-qubit realization cap"
        )
    if dtype is None:
        dtype = complex if any(isinstance(g, U2Gate) for g in circuit.gates) else float
    accumulator = np.eye(1 << circuit.n, dtype=dtype)
    for gate in circuit.gates:
        apply_gate_in_place(accumulator, gate)
    return accumulator


def circuit_to_text(circuit: CircuitSpec) -> str:
    """Serialize a circuit, one gate per line, for debugging and replay.

    Lines are ``H q``, ``U2 q alpha psi chi phi``, ``CNOT c t`` or
    ``TOFF c1 c2 t``; angles are written with full round-trip precision.
    """
    lines = []
    for gate in circuit.gates:
        if isinstance(gate, HadamardGate):
            lines.append(f"H {gate.target}")
        elif isinstance(gate, U2Gate):
            lines.append(
                f"U2 {gate.target} {float(gate.alpha)!r} {float(gate.psi)!r} "
                f"{float(gate.chi)!r} {float(gate.phi)!r}"
            )
        elif isinstance(gate, CnotGate):
            lines.append(f"CNOT {gate.control} {gate.target}")
        else:
            lines.append(f"TOFF {gate.control1} {gate.control2} {gate.target}")
    return "\n".join(lines) + ("\n" if lines else "")


def circuit_from_text(text: str, n: int | None = None) -> CircuitSpec:
    """Parse the serialization produced by :func:`circuit_to_text`.

    When ``n`` is omitted it is inferred as one more than the largest
    qubit index present (at least 1).
    """
    gates: list[Gate] = []
    max_index = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "H" and len(fields) == 2:
                gate: Gate = HadamardGate(int(fields[1]))
            elif fields[0] == "U2" and len(fields) == 6:
                gate = U2Gate(int(fields[1]), *(float(x) for x in fields[2:]))
            elif fields[0] == "CNOT" and len(fields) == 3:
                gate = CnotGate(int(fields[1]), int(fields[2]))
            elif fields[0] == "TOFF" and len(fields) == 4:
                gate = ToffoliGate(int(fields[1]), int(fields[2]), int(fields[3]))
            else:
                raise ValueError(f"unrecognized gate line {lineno}: {line!r}")
        except ValueError as err:
            raise ValueError(f"bad gate on line {lineno}: {line!r}") from err
        gates.append(gate)
        indices = [getattr(gate, f) for f in ("control", "control1", "control2", "target") if hasattr(gate, f)]
        max_index = max(max_index, *indices)
    if n is None:
        n = max(max_index + 1, 1)
    return CircuitSpec(n, tuple(gates))

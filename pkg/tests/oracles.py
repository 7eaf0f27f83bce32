"""Brute-force references used only by the tests.

Circuit realization is cross-checked against explicit Kronecker-product
gate matrices multiplied together, a deliberately independent (and slow)
code path.
"""

from functools import reduce

import numpy as np

from qistats.circuits import CircuitSpec, CnotGate, HadamardGate, U2Gate


def gate_matrix(gate, n: int) -> np.ndarray:
    """Explicit ``2**n x 2**n`` matrix of a single gate (qubit 0 = MSB)."""
    if isinstance(gate, (U2Gate, HadamardGate)):
        mats = [gate.matrix() if q == gate.target else np.eye(2) for q in range(n)]
        return reduce(np.kron, mats)
    if isinstance(gate, CnotGate):
        controls, target = (gate.control,), gate.target
    else:
        controls, target = (gate.control1, gate.control2), gate.target
    dim = 1 << n
    m = np.zeros((dim, dim))
    for col in range(dim):
        row = col
        if all((col >> (n - 1 - c)) & 1 for c in controls):
            row = col ^ (1 << (n - 1 - target))
        m[row, col] = 1.0
    return m


def realize_by_kron(circuit: CircuitSpec) -> np.ndarray:
    """Realize a circuit by explicit full-size matrix multiplication."""
    m = np.eye(1 << circuit.n, dtype=complex)
    for gate in circuit.gates:
        m = gate_matrix(gate, circuit.n) @ m
    return m

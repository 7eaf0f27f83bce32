"""Command-line experiment runner.

Subcommands: ``moments`` (exact ensemble statistics), ``sample``
(per-realization interference or spacing values), ``hist`` (bin a value
CSV), ``distance`` (distance between histograms or against an analytic
law), ``converge`` (distance curves over gate counts plus a rate fit) and
``pscan`` (rate against single-qubit gate probability).

All randomness is keyed by ``(seed, tag, [gate count,] realization)``, so
outputs are byte-identical for a fixed configuration regardless of the
``--threads`` value; the seed flag is mandatory, never defaulted from the
clock.  Every output CSV embeds its configuration as ``# key=value``
comment lines.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np

from .circuits import CircuitEnsembleConfig, draw_circuit, realize_circuit
from .convergence import (
    DEFAULT_BINS,
    EXPONENTIAL_WINDOW,
    GAUSSIAN_WINDOW,
    DistanceCurve,
    cdf_bin_masses,
    fit_exponential_rate,
    fit_gaussian_rate,
    hellinger_sq,
    hellinger_sq_stderr,
    spacing_distance,
    interference_distance,
)
from .haar import sample_cue, sample_hoe
from .interference import analytic_cdf_n2, exact_mean, exact_variance, interference, second_moment_s
from .spectral import Histogram, eigenphases, spacings, wigner_cdf
from .streams import substream

__all__ = [
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_IO",
    "ConfigError",
    "collect_observable",
    "reference_histogram",
    "distance_curve",
    "build_parser",
    "main",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

# Substream namespaces: circuit/matrix realizations vs. reference baselines.
TAG_SAMPLE = 0
TAG_REFERENCE = 1

MATRIX_KINDS = ("cue", "hoe")
CIRCUIT_KINDS = ("uce", "oce")


class ConfigError(Exception):
    """Inconsistent flags or malformed input data."""


# ----------------------------------------------------------------------
# sampling engine


def _draw_operator(kind, stream, dim=None, circuit_config=None):
    if kind == "cue":
        return sample_cue(dim, stream)
    if kind == "hoe":
        return sample_hoe(dim, stream)
    return realize_circuit(draw_circuit(circuit_config, stream))


def _realization(index, kind, observable, seed, key, dim=None, circuit_config=None):
    stream = substream(seed, *key, index)
    op = _draw_operator(kind, stream, dim=dim, circuit_config=circuit_config)
    if observable == "interference":
        return np.array([interference(op)])
    return spacings(eigenphases(op))


def collect_observable(
    kind: str,
    observable: str,
    n_r: int,
    seed: int,
    key: tuple[int, ...],
    *,
    dim: int | None = None,
    circuit_config: CircuitEnsembleConfig | None = None,
    threads: int = 1,
) -> list[np.ndarray]:
    """Per-realization observable arrays, ordered by realization index.

    Each realization ``i`` draws from ``substream(seed, *key, i)``, so the
    result is independent of ``threads`` and of scheduling.
    """
    work = partial(
        _realization,
        kind=kind,
        observable=observable,
        seed=seed,
        key=key,
        dim=dim,
        circuit_config=circuit_config,
    )
    if threads <= 1:
        return [work(i) for i in range(n_r)]
    bounds = np.linspace(0, n_r, 4 * threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = pool.map(
            lambda span: [work(i) for i in range(span[0], span[1])],
            zip(bounds[:-1], bounds[1:]),
        )
        out: list[np.ndarray] = []
        for chunk in chunks:
            out.extend(chunk)
    return out


def reference_histogram(
    circuit_kind: str,
    dim: int,
    bins: int,
    n_r: int,
    seed: int,
    cache_dir: str | None = None,
    threads: int = 1,
) -> Histogram:
    """Interference histogram of the circular ensemble matching a circuit kind.

    UCE is referenced against CUE and OCE against HOE.  When ``cache_dir``
    is given the histogram is cached on disk keyed by
    ``(ensemble, dim, bins, n_r, seed)``.
    """
    ref_kind = "cue" if circuit_kind == "uce" else "hoe"
    path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"{ref_kind}-N{dim}-b{bins}-r{n_r}-s{seed}.csv")
        if os.path.exists(path):
            return Histogram.from_csv(path)
    values = collect_observable(
        ref_kind, "interference", n_r, seed, (TAG_REFERENCE,), dim=dim, threads=threads
    )
    hist = Histogram(0.0, dim - 1.0, bins)
    hist.add(np.concatenate(values))
    if path is not None:
        hist.to_csv(
            path,
            {"ensemble": ref_kind, "dim": dim, "realizations": n_r, "seed": seed},
        )
    return hist


def distance_curve(
    kind: str,
    observable: str,
    *,
    qubits: int,
    gates: list[int],
    p: float,
    n_r: int,
    seed: int,
    bins: int = DEFAULT_BINS,
    threads: int = 1,
    reference: Histogram | None = None,
    cache_dir: str | None = None,
) -> DistanceCurve:
    """Distance-to-reference curve ``F(n_g)`` for a circuit ensemble.

    Spacing curves are measured against the Wigner surmise; interference
    curves against an empirical circular-ensemble histogram (supplied, or
    auto-generated with 10x the circuit realization count).
    """
    dim = 1 << qubits
    if observable == "interference" and reference is None:
        reference = reference_histogram(kind, dim, bins, 10 * n_r, seed, cache_dir, threads)
    points: list[tuple[int, float]] = []
    stderrs: list[float] = []
    for n_g in gates:
        config = CircuitEnsembleConfig(kind, qubits, n_g, p, n_r, seed)
        values = collect_observable(
            kind, observable, n_r, seed, (TAG_SAMPLE, n_g),
            circuit_config=config, threads=threads,
        )
        pooled = np.concatenate(values)
        if observable == "spacings":
            f = spacing_distance(pooled, bins=bins)
            hist = Histogram(0.0, 5.0, bins).add(pooled)
            err = hellinger_sq_stderr(
                hist.probabilities(), cdf_bin_masses(wigner_cdf, hist.edges), pooled.size
            )
        else:
            hist = Histogram(0.0, dim - 1.0, bins).add(pooled)
            f = interference_distance(hist, reference)
            err = hellinger_sq_stderr(
                hist.probabilities(), reference.probabilities(), pooled.size, reference.total
            )
        points.append((n_g, f))
        stderrs.append(err)
    metadata = {
        "ensemble": kind,
        "observable": observable,
        "qubits": qubits,
        "gates": ",".join(str(g) for g in gates),
        "prob": p,
        "realizations": n_r,
        "seed": seed,
        "bins": bins,
    }
    return DistanceCurve(points, metadata, stderrs)


# ----------------------------------------------------------------------
# output helpers


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_csv(path, comments: dict, header: str, rows) -> None:
    lines = [f"# {key}={_fmt(value)}" for key, value in comments.items()]
    lines.append(header)
    lines.extend(rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _fit_output_path(out_path: str) -> str:
    stem, ext = os.path.splitext(out_path)
    return stem + ".fit" + (ext or ".csv")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected an integer or comma list, got {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected a number or comma list, got {text!r}") from None


def _single(values: list, flag: str):
    if len(values) != 1:
        raise ConfigError(f"{flag} takes a single value here, got {len(values)}")
    return values[0]


def _circuit_config(kind, qubits, n_g, p, n_r, seed) -> CircuitEnsembleConfig:
    try:
        return CircuitEnsembleConfig(kind, qubits, n_g, p, n_r, seed)
    except ValueError as err:
        raise ConfigError(str(err)) from None


# ----------------------------------------------------------------------
# subcommand handlers


def run_moments(args) -> int:
    if args.ensemble not in MATRIX_KINDS:
        raise ConfigError("moments is defined for the cue and hoe ensembles")
    if args.dim is None or args.dim < 2:
        raise ConfigError("moments requires --dim of at least 2")
    kind, dim = args.ensemble, args.dim
    mean = exact_mean(kind, dim)
    variance = exact_variance(kind, dim)
    comments = {"command": "moments", "ensemble": kind, "dim": dim}
    header = "ensemble,dim,mean,variance,std,second_moment_s"
    row = (
        f"{kind},{dim},{mean!r},{variance!r},"
        f"{float(np.sqrt(variance))!r},{second_moment_s(kind, dim)!r}"
    )
    _write_csv(args.out, comments, header, [row])
    return EXIT_OK


def _sample_values(args):
    """Shared sampling setup for the sample command; returns (values, comments)."""
    kind, observable = args.ensemble, args.observable
    comments = {"command": "sample", "ensemble": kind, "observable": observable}
    if kind in MATRIX_KINDS:
        if args.dim is None:
            raise ConfigError(f"{kind} requires --dim")
        if observable == "spacings" and args.dim < 2:
            raise ConfigError("spacings need dimension at least 2")
        comments["dim"] = args.dim
        values = collect_observable(
            kind, observable, args.realizations, args.seed, (TAG_SAMPLE,),
            dim=args.dim, threads=args.threads,
        )
    else:
        if args.qubits is None or args.gates is None or args.prob is None:
            raise ConfigError(f"{kind} requires --qubits, --gates and --prob")
        n_g = _single(_parse_int_list(args.gates), "--gates")
        p = _single(_parse_float_list(args.prob), "--prob")
        config = _circuit_config(kind, args.qubits, n_g, p, args.realizations, args.seed)
        comments.update({"qubits": args.qubits, "gates": n_g, "prob": p})
        values = collect_observable(
            kind, observable, args.realizations, args.seed, (TAG_SAMPLE,),
            circuit_config=config, threads=args.threads,
        )
    comments.update({"realizations": args.realizations, "seed": args.seed})
    return values, comments


def run_sample(args) -> int:
    values, comments = _sample_values(args)
    column = "interference" if args.observable == "interference" else "spacing"
    rows = []
    for index, arr in enumerate(values):
        for value in arr:
            rows.append(f"{index},{float(value)!r}")
    _write_csv(args.out, comments, f"index,{column}", rows)
    return EXIT_OK


def _read_values(path) -> np.ndarray:
    """Last-column floats of a CSV, skipping comments and one header line."""
    values = []
    header_allowed = True
    with open(path, newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            token = line.split(",")[-1]
            try:
                value = float(token)
            except ValueError:
                if header_allowed:
                    header_allowed = False
                    continue
                raise ConfigError(f"line {lineno}: cannot parse {line!r}") from None
            header_allowed = False
            values.append(value)
    if not values:
        raise ConfigError(f"no data rows in {path}")
    return np.array(values)


def run_hist(args) -> int:
    values = _read_values(args.input)
    if args.range is not None:
        bounds = _parse_float_list(args.range)
        if len(bounds) != 2 or bounds[0] >= bounds[1]:
            raise ConfigError("--range expects LOW,HIGH with LOW < HIGH")
        lower, upper = bounds
    else:
        lower, upper = float(values.min()), float(values.max())
        if lower == upper:
            upper = lower + 1.0
    hist = Histogram(lower, upper, args.bins)
    hist.add(values)
    metadata = {"command": "hist", "input": args.input, "range": f"{lower!r}:{upper!r}"}
    hist.to_csv(sys.stdout if args.out is None else args.out, metadata)
    return EXIT_OK


_LAWS = ("wigner", "cue-n2", "hoe-n2")


def run_distance(args) -> int:
    try:
        hist = Histogram.from_csv(args.hist)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    comments = {"command": "distance", "hist": args.hist}
    try:
        if args.reference is not None:
            reference = Histogram.from_csv(args.reference)
            value = hellinger_sq(hist, reference)
            comments["reference"] = args.reference
        elif args.law is not None:
            if args.law == "wigner":
                masses = cdf_bin_masses(wigner_cdf, hist.edges)
            else:
                ensemble = args.law.split("-")[0]
                masses = cdf_bin_masses(lambda x: analytic_cdf_n2(ensemble, x), hist.edges)
            value = hellinger_sq(hist, masses)
            comments["law"] = args.law
        else:
            raise ConfigError("distance needs --reference or --law")
    except ValueError as err:
        raise ConfigError(str(err)) from None
    _write_csv(args.out, comments, "F", [repr(float(value))])
    return EXIT_OK


def run_converge(args) -> int:
    if args.out is None:
        raise ConfigError("converge requires --out")
    observable = args.observable
    if args.curve is not None:
        curve = DistanceCurve.from_csv(args.curve)
        comments = {"command": "converge", "curve": args.curve, "observable": observable}
    else:
        if args.ensemble not in CIRCUIT_KINDS:
            raise ConfigError("converge runs on the uce and oce ensembles")
        if args.qubits is None or args.gates is None or args.prob is None:
            raise ConfigError("converge requires --qubits, --gates and --prob")
        gates = _parse_int_list(args.gates)
        if len(gates) < 2:
            raise ConfigError("converge needs at least two gate counts")
        if any(b <= a for a, b in zip(gates, gates[1:])):
            raise ConfigError("gate counts must be strictly increasing")
        p = _single(_parse_float_list(args.prob), "--prob")
        _circuit_config(args.ensemble, args.qubits, gates[0], p, args.realizations, args.seed)
        reference = None
        if args.reference is not None:
            reference = Histogram.from_csv(args.reference)
        curve = distance_curve(
            args.ensemble,
            observable,
            qubits=args.qubits,
            gates=gates,
            p=p,
            n_r=args.realizations,
            seed=args.seed,
            bins=args.bins,
            threads=args.threads,
            reference=reference,
            cache_dir=args.cache_dir,
        )
        comments = {"command": "converge", "observable": observable}
    curve.to_csv(args.out, comments)
    fitter = fit_exponential_rate if observable == "spacings" else fit_gaussian_rate
    window = EXPONENTIAL_WINDOW if observable == "spacings" else GAUSSIAN_WINDOW
    fit_path = _fit_output_path(args.out)
    fit_comments = dict(curve.metadata)
    fit_comments.update(comments)
    try:
        fit = fitter(curve)
    except ValueError as err:
        print(f"qistats: fit not performed: {err}", file=sys.stderr)
        distances = curve.distances()
        in_window = int(np.sum((distances >= window[1]) & (distances <= window[0])))
        kind = "exponential" if observable == "spacings" else "gaussian"
        fit_comments["fit_error"] = "insufficient in-window points"
        _write_csv(
            fit_path,
            fit_comments,
            "kind,param1,param2,residual,points_used,F_high,F_low",
            [f"{kind},nan,nan,nan,{in_window},{window[0]!r},{window[1]!r}"],
        )
        return EXIT_OK
    fit.to_csv(fit_path, fit_comments)
    return EXIT_OK


def run_pscan(args) -> int:
    if args.ensemble not in CIRCUIT_KINDS:
        raise ConfigError("pscan runs on the uce and oce ensembles")
    if args.qubits is None or args.gates is None or args.prob is None:
        raise ConfigError("pscan requires --qubits, --gates and --prob")
    gates = _parse_int_list(args.gates)
    if len(gates) < 2:
        raise ConfigError("pscan needs at least two gate counts")
    probs = _parse_float_list(args.prob)
    if any(not 0.0 < p < 1.0 for p in probs):
        raise ConfigError("pscan probabilities must lie strictly between 0 and 1")
    fitter = fit_exponential_rate if args.observable == "spacings" else fit_gaussian_rate
    rows = []
    for p in probs:
        curve = distance_curve(
            args.ensemble,
            args.observable,
            qubits=args.qubits,
            gates=gates,
            p=p,
            n_r=args.realizations,
            seed=args.seed,
            bins=args.bins,
            threads=args.threads,
            cache_dir=args.cache_dir,
        )
        try:
            fit = fitter(curve)
            rate, stderr = fit.rate, fit.rate_stderr
        except ValueError as err:
            print(f"qistats: fit not performed at p={p}: {err}", file=sys.stderr)
            rate, stderr = float("nan"), float("nan")
        rows.append(f"{p!r},{rate!r},{stderr!r}")
    comments = {
        "command": "pscan",
        "ensemble": args.ensemble,
        "observable": args.observable,
        "qubits": args.qubits,
        "gates": ",".join(str(g) for g in gates),
        "prob": ",".join(repr(p) for p in probs),
        "realizations": args.realizations,
        "seed": args.seed,
        "bins": args.bins,
    }
    _write_csv(args.out, comments, "p,rate,stderr", rows)
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing


def _add_common(parser, *, seeded: bool) -> None:
    parser.add_argument("--ensemble", choices=MATRIX_KINDS + CIRCUIT_KINDS)
    parser.add_argument("--dim", type=int, help="matrix dimension N (cue/hoe)")
    parser.add_argument("--qubits", type=int, help="qubit count n (uce/oce)")
    parser.add_argument("--gates", help="gate count, or comma list for converge/pscan")
    parser.add_argument("--prob", help="single-qubit gate probability, or comma list for pscan")
    parser.add_argument("--realizations", type=int, default=1000)
    parser.add_argument("--seed", type=int, required=seeded, help="master seed (mandatory)")
    parser.add_argument("--bins", type=int, default=DEFAULT_BINS)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--observable", choices=("interference", "spacings"), default="interference"
    )
    parser.add_argument("--out", help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qistats",
        description="Interference and spacing statistics of random quantum circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    moments = sub.add_parser("moments", help="exact mean/variance of the interference")
    _add_common(moments, seeded=False)
    moments.set_defaults(func=run_moments)

    sample = sub.add_parser("sample", help="per-realization interference or spacing values")
    _add_common(sample, seeded=True)
    sample.set_defaults(func=run_sample)

    hist = sub.add_parser("hist", help="bin a value CSV into a histogram CSV")
    hist.add_argument("--input", required=True, help="CSV whose last column holds the values")
    hist.add_argument("--bins", type=int, default=DEFAULT_BINS)
    hist.add_argument("--range", help="LOW,HIGH binning range (default: data extent)")
    hist.add_argument("--out")
    hist.set_defaults(func=run_hist)

    distance = sub.add_parser("distance", help="squared Hellinger distance between histograms")
    distance.add_argument("--hist", required=True, help="empirical histogram CSV")
    distance.add_argument("--reference", help="reference histogram CSV")
    distance.add_argument("--law", choices=_LAWS, help="analytic reference law")
    distance.add_argument("--out")
    distance.set_defaults(func=run_distance)

    converge = sub.add_parser("converge", help="distance curve over gate counts, plus rate fit")
    _add_common(converge, seeded=True)
    converge.add_argument("--reference", help="reference histogram CSV (default: auto-generated)")
    converge.add_argument("--curve", help="fit an existing curve CSV instead of sampling")
    converge.add_argument("--cache-dir", default=".qistats-cache")
    converge.set_defaults(func=run_converge)

    pscan = sub.add_parser("pscan", help="convergence rate as a function of probability")
    _add_common(pscan, seeded=True)
    pscan.add_argument("--cache-dir", default=".qistats-cache")
    pscan.set_defaults(func=run_pscan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"qistats: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"qistats: I/O failure: {err}", file=sys.stderr)
        return EXIT_IO
    except np.linalg.LinAlgError as err:
        print(f"qistats: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FloatingPointError) as err:
        print(f"qistats: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

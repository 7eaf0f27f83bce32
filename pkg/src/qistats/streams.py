"""Deterministic, hierarchically keyed random streams.

Every sampling routine in this package takes an explicit
:class:`numpy.random.Generator`; there is no module-level global state.
Streams are created from a user seed plus an integer key path, so that
independent pieces of work (realization 17 of a scan at gate count 40, say)
own independent generators regardless of how the work is scheduled across
threads.  Identical ``(seed, key...)`` arguments reproduce the exact same
bit stream on every platform.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream"]


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return the generator identified by ``seed`` and an integer key path.

    Parameters
    ----------
    seed : int
        Non-negative master seed shared by a whole experiment.
    *key : int
        Optional non-negative integers selecting a substream, e.g.
        ``substream(seed, tag, realization)``.  Distinct key paths give
        statistically independent streams.

    Returns
    -------
    numpy.random.Generator
        Generator with a reproducible state; supplies uniforms in ``[0, 1)``
        via ``.random()`` and standard normals via ``.standard_normal()``.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if any(k < 0 for k in key):
        raise ValueError("stream key entries must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))

"""Shared fixtures: large sampled batches reused across test modules."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from qistats.haar import sample_cue, sample_hoe
from qistats.spectral import eigenphases, spacings
from qistats.streams import substream

BATCH_SEED = 20240811
SPACING_SEED = 20240812
BATCH_SIZE = 100_000
WORKERS = 2


def _parallel_fill(count, fill):
    bounds = np.linspace(0, count, 4 * WORKERS + 1).astype(int)
    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        list(pool.map(lambda span: fill(*span), zip(bounds[:-1], bounds[1:])))


def _entry_stats(kind, dim, count, seed):
    """Per-sample |U_11|^2, an off-center |U_ij|^2, and sum_ik |U_ik|^4."""
    sampler = sample_cue if kind == "cue" else sample_hoe
    entry2 = np.empty(count)
    entry2_alt = np.empty(count)
    sum4 = np.empty(count)
    row_alt, col_alt = min(2, dim - 1), min(3, dim - 1)

    def fill(lo, hi):
        for i in range(lo, hi):
            u = sampler(dim, substream(seed, i))
            if kind == "cue":
                m2 = u.real * u.real + u.imag * u.imag
            else:
                m2 = u * u
            entry2[i] = m2[0, 0]
            entry2_alt[i] = m2[row_alt, col_alt]
            sum4[i] = np.sum(m2 * m2)

    _parallel_fill(count, fill)
    return {"entry2": entry2, "entry2_alt": entry2_alt, "sum4": sum4}


@pytest.fixture(scope="session")
def ensemble_batches():
    """Factory: cached per-sample statistics of the circular ensembles.

    ``get(kind, dim, count)`` returns arrays ``entry2`` (squared modulus of
    the 1,1 entry), ``entry2_alt`` (another fixed entry) and ``sum4``
    (summed fourth powers; interference is ``dim - sum4``).
    """
    cache = {}

    def get(kind, dim, count=BATCH_SIZE):
        key = (kind, dim, count)
        if key not in cache:
            cache[key] = _entry_stats(kind, dim, count, BATCH_SEED)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def cue16_spacings():
    """Pooled unit-mean spacings of 10^4 CUE matrices at N=16."""
    count = 10_000
    out = np.empty((count, 16))

    def fill(lo, hi):
        for i in range(lo, hi):
            u = sample_cue(16, substream(SPACING_SEED, i))
            out[i] = spacings(eigenphases(u))

    _parallel_fill(count, fill)
    return out.ravel()

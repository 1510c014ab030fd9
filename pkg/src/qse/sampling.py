"""Random test instances: unitaries, states, spectra, and per-trial generators."""
from __future__ import annotations

import numpy as np


def trial_rng(seed: int, index: int = 0, stream: int = 0) -> np.random.Generator:
    """Independent generator for trial ``index`` of a run seeded with ``seed``.

    Any trial can be regenerated on its own, so batches may be split across
    workers and merged in any order.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream), int(index)]))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``k x k`` unitary (QR of a Ginibre matrix with phase fix)."""
    q, r = np.linalg.qr(ginibre(k, k, rng))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_unitaries(count: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return np.stack([random_unitary(k, rng) for _ in range(count)]) if count else np.zeros((0, k, k), complex)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^dagger / tr`` with ``G`` of shape ``d x rank``."""
    rank = d if rank is None else rank
    g = ginibre(d, rank, rng)
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_pure_density(d: int, rng: np.random.Generator) -> np.ndarray:
    return random_density(d, rng, rank=1)


def random_spectrum(n: int, rng: np.random.Generator, zeros: int = 0) -> np.ndarray:
    """Random probability vector of length ``n`` with ``zeros`` exact zero entries."""
    p = rng.exponential(size=n)
    if zeros:
        p[rng.choice(n, size=min(zeros, n - 1), replace=False)] = 0.0
    return p / p.sum()

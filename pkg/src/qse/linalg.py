"""Dense complex linear algebra used throughout the package.

Everything here works on plain :class:`numpy.ndarray` objects. Norms are
always computed from singular values so that every Schatten order gets the
same accuracy.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionError, InvalidParameterError, SymmetryError

HERMITIAN_RTOL = 1e-10
SUPPORT_RTOL = 1e-12
# eigenvalues below this fraction of the trace are rounding noise; for q < 1 they
# would otherwise contribute p**q, e.g. (1e-16)**0.3 ~ 2e-5
SPECTRUM_CUTOFF = 1e-12


class HermitianSpectrum(NamedTuple):
    """Eigenvalues (descending) and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(x) -> np.ndarray:
    """Return ``x`` as a finite 2-D complex array."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError("matrix has non-finite entries")
    return a


def hs_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product ``tr(x^dagger y)``."""
    x = as_matrix(x)
    y = as_matrix(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return complex(np.vdot(x, y))


def singular_values(x) -> np.ndarray:
    """Singular values in descending order, ``min(rows, cols)`` of them."""
    return np.linalg.svd(as_matrix(x), compute_uv=False)


def _check_order(p: float) -> float:
    p = float(p)
    if np.isnan(p) or p < 1.0:
        raise InvalidParameterError(f"Schatten order must be >= 1 or inf, got {p}")
    return p


def schatten_norm(x, p: float) -> float:
    """Schatten ``p``-norm, ``p >= 1`` or ``np.inf``."""
    p = _check_order(p)
    sv = singular_values(x)
    if sv.size == 0:
        return 0.0
    if np.isinf(p):
        return float(sv[0])
    top = sv[0]
    if top == 0.0:
        return 0.0
    # scale by the largest value to avoid overflow for large p
    return float(top * np.sum((sv / top) ** p) ** (1.0 / p))


def q_mean(values, q: float) -> float:
    """Power mean ``((1/n) sum x_j^q)^(1/q)`` of nonnegative values."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise InvalidParameterError("q_mean of an empty list")
    if np.any(v < 0):
        raise InvalidParameterError("q_mean needs nonnegative values")
    q = _check_order(q)
    if np.isinf(q):
        return float(v.max())
    return float(np.mean(v**q) ** (1.0 / q))


def _phase_fix(vecs: np.ndarray) -> np.ndarray:
    # first significant component of each column made positive real
    out = vecs.copy()
    mags = np.abs(out)
    for j in range(out.shape[1]):
        col = mags[:, j]
        idx = int(np.argmax(col > SUPPORT_RTOL * col.max()))
        ph = out[idx, j] / mags[idx, j]
        out[:, j] *= np.conj(ph)
    return out


def hermitian_eig(h) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix with deterministic ordering.

    Eigenvalues are sorted descending; each eigenvector is rotated so that its
    first significant component is real and positive. The input is symmetrized
    before the decomposition.

    Raises:
        SymmetryError: if ``||h - h^dagger||`` exceeds ``1e-10 * ||h||`` in
            spectral norm.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {h.shape}")
    if h.size == 0:
        return HermitianSpectrum(np.zeros(0), np.zeros((0, 0), dtype=complex))
    scale = np.linalg.norm(h, 2)
    asym = np.linalg.norm(h - h.conj().T, 2)
    if asym > HERMITIAN_RTOL * max(scale, 1e-300) and asym > 0.0:
        raise SymmetryError(f"matrix is not Hermitian (asymmetry {asym:.3e}, norm {scale:.3e})")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    order = np.argsort(-w, kind="stable")
    return HermitianSpectrum(w[order], _phase_fix(v[:, order]))


def eigvalsh_desc(h) -> np.ndarray:
    """Eigenvalues of a (symmetrized) Hermitian matrix, descending."""
    h = as_matrix(h)
    return np.linalg.eigvalsh(0.5 * (h + h.conj().T))[::-1]


def clean_spectrum(values, cutoff: float = SPECTRUM_CUTOFF) -> np.ndarray:
    """Set entries below ``cutoff`` times the positive mass to exactly zero."""
    v = np.asarray(values, dtype=float).copy()
    mass = v[v > 0].sum()
    v[v <= cutoff * mass] = 0.0
    return v


def kron(x, y) -> np.ndarray:
    """Kronecker product ``x (x) y``."""
    return np.kron(as_matrix(x), as_matrix(y))


def partial_trace(x, keep: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``H_A (x) H_B``.

    Args:
        x: square matrix of size ``dims[0] * dims[1]``.
        keep: ``"A"`` to keep the first factor (trace out B) or ``"B"``.
        dims: ``(d_A, d_B)``.
    """
    x = as_matrix(x)
    da, db = (int(dims[0]), int(dims[1]))
    if da < 1 or db < 1 or x.shape != (da * db, da * db):
        raise DimensionError(f"matrix of shape {x.shape} does not factor as {da}x{db}")
    t = x.reshape(da, db, da, db)
    if keep.upper() == "A":
        return np.einsum("ajbj->ab", t)
    if keep.upper() == "B":
        return np.einsum("iaib->ab", t)
    raise InvalidParameterError(f"keep must be 'A' or 'B', got {keep!r}")


def support_dimension(x) -> int:
    """Number of singular values above ``1e-12 * sigma_max``."""
    sv = singular_values(x)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > SUPPORT_RTOL * sv[0]))


def is_scaled_unitary_on_support(x, rtol: float = 1e-9) -> bool:
    """True when all nonzero singular values coincide (``x`` is ``c U`` on its support)."""
    sv = singular_values(x)
    r = support_dimension(x)
    if r == 0:
        return False
    s = sv[:r]
    return bool(s[0] - s[-1] <= rtol * s[0])


def schatten_bound_factor(d: int, p: float, q: float) -> float:
    """Factor ``F`` with ``||x||_p <= F ||x||_{pq}`` on a ``d``-dimensional support.

    ``F = d^((q-1)/(pq))``, and ``d^(1/p)`` when ``q`` is infinite.
    """
    if int(d) != d or d < 1:
        raise InvalidParameterError(f"support dimension must be a positive integer, got {d}")
    p = _check_order(p)
    q = _check_order(q)
    if np.isinf(p):
        raise InvalidParameterError("p must be finite")
    if np.isinf(q):
        return float(d) ** (1.0 / p)
    return float(d) ** ((q - 1.0) / (p * q))


def is_unitary(u, atol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2) <= atol)

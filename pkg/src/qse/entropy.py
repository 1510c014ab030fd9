"""Unified (q,s)-entropies of probability vectors and density operators.

The family is

    E_q^s(p) = [(sum_i p_i^q)^s - 1] / ((1 - q) s)

with the Shannon/von Neumann entropy at ``q = 1`` and the Renyi entropy at
``s = 0``. Both limits are selected by exact parameter equality; values near
the limits go through the generic formula, evaluated with ``expm1`` so that it
stays accurate while ``|1-q|*s`` is above roughly 1e-8.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidParameterError, ValidationError
from .linalg import HERMITIAN_RTOL, as_matrix, clean_spectrum, eigvalsh_desc

PROB_SUM_TOL = 1e-10
PROB_CLIP = 1e-12
DENSITY_CLIP = 1e-10
DENSITY_TRACE_TOL = 1e-10


class EntropyMode(str, enum.Enum):
    GENERIC = "generic"
    VON_NEUMANN = "von_neumann"
    RENYI = "renyi"
    TSALLIS = "tsallis"


@dataclass(frozen=True)
class EntropyParams:
    """The pair ``(q, s)``; ``mode`` names the special member of the family, if any."""

    q: float
    s: float = 1.0

    def __post_init__(self):
        q = float(self.q)
        s = float(self.s)
        if not math.isfinite(q) or q <= 0.0:
            raise InvalidParameterError(f"entropy parameter q must be > 0, got {self.q}")
        if not math.isfinite(s):
            raise InvalidParameterError(f"entropy parameter s must be finite, got {self.s}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", s)

    @property
    def mode(self) -> EntropyMode:
        if self.q == 1.0:
            return EntropyMode.VON_NEUMANN
        if self.s == 0.0:
            return EntropyMode.RENYI
        if self.s == 1.0:
            return EntropyMode.TSALLIS
        return EntropyMode.GENERIC

    def to_dict(self) -> dict:
        return {"q": self.q, "s": self.s, "mode": self.mode.value}


def as_params(params) -> EntropyParams:
    """Accept an :class:`EntropyParams`, a ``(q, s)`` pair or a bare ``q`` (Tsallis)."""
    if isinstance(params, EntropyParams):
        return params
    if isinstance(params, (tuple, list)):
        return EntropyParams(*params)
    return EntropyParams(float(params))


def validate_probabilities(p) -> np.ndarray:
    """Return a clean probability vector, clipping entries in ``[-1e-12, 0)`` to zero."""
    v = np.asarray(p, dtype=float).ravel()
    if v.size == 0:
        raise ValidationError("empty probability vector")
    if not np.all(np.isfinite(v)):
        raise ValidationError("probability vector has non-finite entries")
    if np.any(v < -PROB_CLIP):
        raise ValidationError(f"negative probability {v.min():.3e}")
    if abs(v.sum() - 1.0) > PROB_SUM_TOL:
        raise ValidationError(f"probabilities sum to {v.sum():.15g}, not 1")
    return np.clip(v, 0.0, None)


def validate_density(rho) -> np.ndarray:
    """Check that ``rho`` is a density operator and return it symmetrized.

    Raises:
        ValidationError: not Hermitian within 1e-10, an eigenvalue below
            -1e-10, or trace off by more than 1e-10.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density operator must be square, got {rho.shape}")
    asym = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if asym > HERMITIAN_RTOL:
        raise ValidationError(f"density operator not Hermitian (asymmetry {asym:.3e})")
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValidationError(f"density operator has trace {tr:.15g}")
    lo = eigvalsh_desc(rho)[-1]
    if lo < -DENSITY_CLIP:
        raise ValidationError(f"density operator has negative eigenvalue {lo:.3e}")
    return rho


def density_spectrum(rho) -> np.ndarray:
    """Eigenvalues of a validated density operator, descending, with rounding noise zeroed."""
    return clean_spectrum(eigvalsh_desc(validate_density(rho)))


def q_log(x: float, q: float) -> float:
    """The q-logarithm ``(x^(1-q) - 1)/(1-q)``; ``ln x`` at ``q = 1``."""
    x = float(x)
    q = float(q)
    if not x > 0.0:
        raise DomainError(f"q_log needs x > 0, got {x}")
    if q == 1.0:
        return math.log(x)
    return math.expm1((1.0 - q) * math.log(x)) / (1.0 - q)


def eta_q(x: float, q: float) -> float:
    """``(x^q - x)/(1 - q)`` on ``[0, 1]``; ``-x ln x`` at ``q = 1``."""
    x = float(x)
    q = float(q)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"eta_q needs 0 <= x <= 1, got {x}")
    if q <= 0.0:
        raise InvalidParameterError(f"eta_q needs q > 0, got {q}")
    if x == 0.0:
        return 0.0
    if q == 1.0:
        return -x * math.log(x)
    return (x**q - x) / (1.0 - q)


def binary_tsallis(t: float, q: float) -> float:
    """Tsallis entropy of the distribution ``(t, 1-t)``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"binary_tsallis needs 0 <= t <= 1, got {t}")
    return eta_q(t, q) + eta_q(1.0 - t, q)


def renyi_tsallis_bridge(tsallis_value: float, q: float) -> float:
    """Renyi entropy from the Tsallis entropy of the same distribution."""
    q = float(q)
    if q == 1.0 or q <= 0.0:
        raise InvalidParameterError(f"bridge needs q > 0 and q != 1, got {q}")
    arg = (1.0 - q) * float(tsallis_value)
    if not 1.0 + arg > 0.0:
        raise DomainError(f"nonpositive logarithm argument {1.0 + arg}")
    return math.log1p(arg) / (1.0 - q)


def _entropies(p: np.ndarray, qs, ss) -> np.ndarray:
    out = _kernels.unified_entropy_grid(p, np.atleast_1d(qs), np.atleast_1d(ss))
    # entropy is nonnegative; only rounding noise can push it below zero
    return np.where((out < 0.0) & (out > -1e-12), 0.0, out)


def unified_entropy_spectrum(p, params) -> float:
    """Unified entropy of a probability vector."""
    params = as_params(params)
    return float(_entropies(validate_probabilities(p), [params.q], [params.s])[0])


def unified_entropy_grid(p, qs, ss) -> np.ndarray:
    """Unified entropies of one probability vector at parameter points ``zip(qs, ss)``."""
    qs = np.asarray(qs, dtype=float)
    ss = np.asarray(ss, dtype=float)
    if qs.shape != ss.shape:
        raise InvalidParameterError("qs and ss must have the same length")
    if np.any(qs <= 0.0):
        raise InvalidParameterError("all q must be > 0")
    return _entropies(validate_probabilities(p), qs, ss)


def unified_entropy(rho, params) -> float:
    """Unified entropy of a density operator, computed from its spectrum."""
    return unified_entropy_spectrum(density_spectrum(rho), params)


def von_neumann_entropy(rho) -> float:
    return unified_entropy(rho, EntropyParams(1.0, 1.0))


def tsallis_entropy(rho, q: float) -> float:
    return unified_entropy(rho, EntropyParams(q, 1.0))


def renyi_entropy(rho, q: float) -> float:
    return unified_entropy(rho, EntropyParams(q, 0.0))

"""Map (q,s)-entropies, their tensor-product identity, and continuity bounds.

The map entropy of a channel is the unified entropy of its rescaled Choi
matrix ``sigma``. The continuity bounds below are state-level bounds applied
to ``sigma``, which lives on ``D = d^2`` dimensions; every evaluator takes the
channel dimension ``d`` and uses ``space_dim = d**2`` unless told otherwise.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channels import ChoiMatrix, KrausSet, apply_kraus, as_choi, as_kraus, tensor_choi_sigma
from .entropy import EntropyParams, as_params, binary_tsallis, eta_q, q_log, unified_entropy_grid
from .errors import DimensionError, NotApplicableError
from .linalg import clean_spectrum, eigvalsh_desc, q_mean, schatten_norm

ADDITIVITY_TOL = 1e-9


def _spectrum(sigma: np.ndarray) -> np.ndarray:
    p = clean_spectrum(eigvalsh_desc(sigma))
    return p / p.sum()


def map_entropy(choi, params) -> float:
    """Unified entropy of the rescaled dynamical matrix."""
    params = as_params(params)
    choi = as_choi(choi)
    return float(unified_entropy_grid(choi.spectrum(), [params.q], [params.s])[0])


def map_entropy_grid(choi, qs, ss) -> np.ndarray:
    return unified_entropy_grid(as_choi(choi).spectrum(), qs, ss)


def tensor_map_entropy_grid(choi1, choi2, qs, ss) -> np.ndarray:
    """Map entropies of ``Phi1 (x) Phi2`` from the full reshuffled Choi matrix."""
    c1, c2 = as_choi(choi1), as_choi(choi2)
    sigma = tensor_choi_sigma(c1.sigma, c1.d, c2.sigma, c2.d)
    return unified_entropy_grid(_spectrum(sigma), qs, ss)


def additivity_residuals(choi1, choi2, qs, ss) -> np.ndarray:
    """``M(Phi1 (x) Phi2) - [M1 + M2 + (1-q) s M1 M2]`` at each ``(q, s)``."""
    qs = np.asarray(qs, dtype=float)
    ss = np.asarray(ss, dtype=float)
    m1 = map_entropy_grid(choi1, qs, ss)
    m2 = map_entropy_grid(choi2, qs, ss)
    m12 = tensor_map_entropy_grid(choi1, choi2, qs, ss)
    cross = np.where(qs == 1.0, 0.0, (1.0 - qs) * ss) * m1 * m2
    return m12 - (m1 + m2 + cross)


def additivity_residual(choi1, choi2, params) -> float:
    params = as_params(params)
    return float(additivity_residuals(choi1, choi2, [params.q], [params.s])[0])


class AdditivityClass(str, enum.Enum):
    ADDITIVE = "additive"
    STRICTLY_SUBADDITIVE = "strictly_subadditive"
    STRICTLY_SUPERADDITIVE = "strictly_superadditive"
    IDENTITY_ONLY = "identity_only"


def classify_additivity(choi1, choi2, params) -> AdditivityClass:
    """Sub/superadditivity of the map entropy for a pair of channels.

    A rank-one factor (unitary channel) or ``s = 0`` gives plain additivity.
    With both Choi ranks at least two the sign of ``(1-q) s`` decides; ``q = 1``
    is reported as ``identity_only``. The result is checked against the sign of
    the computed gap ``M1 + M2 - M(Phi1 (x) Phi2)``.
    """
    params = as_params(params)
    c1, c2 = as_choi(choi1), as_choi(choi2)
    q, s = params.q, params.s
    if c1.rank() == 1 or c2.rank() == 1 or s == 0.0:
        label = AdditivityClass.ADDITIVE
    elif q == 1.0:
        label = AdditivityClass.IDENTITY_ONLY
    elif (q < 1.0 and s < 0.0) or (q > 1.0 and s > 0.0):
        label = AdditivityClass.STRICTLY_SUBADDITIVE
    else:
        label = AdditivityClass.STRICTLY_SUPERADDITIVE

    gap = map_entropy(c1, params) + map_entropy(c2, params) - float(
        tensor_map_entropy_grid(c1, c2, [q], [s])[0]
    )
    if label is AdditivityClass.STRICTLY_SUBADDITIVE and gap < -ADDITIVITY_TOL:
        raise ArithmeticError(f"expected strict subadditivity, computed gap {gap}")
    if label is AdditivityClass.STRICTLY_SUPERADDITIVE and gap > ADDITIVITY_TOL:
        raise ArithmeticError(f"expected strict superadditivity, computed gap {gap}")
    if label in (AdditivityClass.ADDITIVE, AdditivityClass.IDENTITY_ONLY) and abs(gap) > ADDITIVITY_TOL:
        raise ArithmeticError(f"expected additivity, computed gap {gap}")
    return label


# -- continuity bounds -----------------------------------------------------------------


class ParameterRange(str, enum.Enum):
    LOW = "0<q<1, s in (-inf,-1] U [0,1]"
    HIGH = "q>1, s in [-1,0] U [1,inf)"


def parameter_range(params) -> ParameterRange:
    """Which of the two proven parameter ranges ``(q, s)`` falls in.

    Raises:
        NotApplicableError: outside both ranges.
    """
    params = as_params(params)
    q, s = params.q, params.s
    if 0.0 < q < 1.0 and (s <= -1.0 or 0.0 <= s <= 1.0):
        return ParameterRange.LOW
    if q > 1.0 and (-1.0 <= s <= 0.0 or s >= 1.0):
        return ParameterRange.HIGH
    raise NotApplicableError(f"no continuity bound is stated for q={q}, s={s}")


def kappa(params, space_dim: int) -> float:
    """``D^(2(q-1))`` for ``s`` in ``[-1, 0]``, ``1`` for ``s >= 1`` (high range only)."""
    params = as_params(params)
    if -1.0 <= params.s <= 0.0:
        return float(space_dim) ** (2.0 * (params.q - 1.0))
    if params.s >= 1.0:
        return 1.0
    raise NotApplicableError(f"kappa is not defined for s={params.s}")


@dataclass(frozen=True)
class BoundResult:
    bound_value: float
    valid: bool
    validity_condition: str
    distance_used: float
    norm_kind: str
    bound_kind: str
    space_dim: int

    def holds_for(self, observed: float, tol: float = 1e-9) -> bool:
        """Soundness: an invalid bound makes no claim, so it always holds."""
        return (not self.valid) or observed <= self.bound_value + tol


def _space_dim(d: int, space_dim: int | None) -> int:
    dim = int(d) ** 2 if space_dim is None else int(space_dim)
    if dim < 2:
        raise DimensionError(f"bounds need a space of dimension >= 2, got {dim}")
    return dim


def fannes_trace_bound(params, d: int, t: float, space_dim: int | None = None) -> BoundResult:
    """Fannes-type bound in terms of ``t = ||sigma(Phi) - sigma(Psi)||_1 / 2``."""
    params = as_params(params)
    rng = parameter_range(params)
    dim = _space_dim(d, space_dim)
    q = params.q
    t = float(t)
    if rng is ParameterRange.LOW:
        limit = q ** (1.0 / (1.0 - q))
        valid = 2.0 * t <= limit
        value = (2.0 * t) ** q * q_log(dim, q) + eta_q(2.0 * t, q) if 2.0 * t <= 1.0 else math.nan
        cond = f"2t <= q^(1/(1-q)) = {limit:.12g}"
    else:
        limit = (dim - 1.0) / dim
        valid = t <= limit
        value = kappa(params, dim) * (t**q * q_log(dim - 1.0, q) + binary_tsallis(min(t, 1.0), q))
        cond = f"t <= (D-1)/D = {limit:.12g}"
    return BoundResult(float(value), bool(valid), cond, t, "trace", "trace", dim)


def fannes_frobenius_small_bound(params, d: int, tau: float, space_dim: int | None = None) -> BoundResult:
    """The trace-norm bound with ``t`` replaced by ``sqrt(D) tau``, ``tau = ||.||_2 / 2``."""
    params = as_params(params)
    rng = parameter_range(params)
    dim = _space_dim(d, space_dim)
    q = params.q
    tau = float(tau)
    root = math.sqrt(dim)
    if rng is ParameterRange.LOW:
        limit = q ** (1.0 / (1.0 - q)) / root
        valid = 2.0 * tau <= limit
        x = root * 2.0 * tau
        value = dim ** (q / 2.0) * (2.0 * tau) ** q * q_log(dim, q) + eta_q(x, q) if x <= 1.0 else math.nan
        cond = f"2tau <= q^(1/(1-q)) D^(-1/2) = {limit:.12g}"
    else:
        limit = (dim - 1.0) * dim ** -1.5
        valid = tau <= limit
        x = root * tau
        value = (
            kappa(params, dim) * (dim ** (q / 2.0) * tau**q * q_log(dim - 1.0, q) + binary_tsallis(x, q))
            if x <= 1.0
            else math.nan
        )
        cond = f"tau <= (D-1) D^(-3/2) = {limit:.12g}"
    return BoundResult(float(value), bool(valid), cond, tau, "frobenius", "frobenius_small", dim)


def fannes_frobenius_global_bound(params, d: int, tau: float, space_dim: int | None = None) -> BoundResult:
    """Frobenius bound valid for every distance ``tau <= sqrt(2)/2``."""
    params = as_params(params)
    rng = parameter_range(params)
    dim = _space_dim(d, space_dim)
    q = params.q
    tau = float(tau)
    root = math.sqrt(dim)
    if rng is ParameterRange.LOW:
        value = (dim ** (1.0 - q / 2.0) * (dim - 1.0) ** (1.0 - q) * tau**q - q * root * tau) / (1.0 - q)
    else:
        value = kappa(params, dim) * (q * root * tau - (dim - 1.0) ** (1.0 - q) * dim ** (q / 2.0) * tau**q) / (q - 1.0)
    limit = math.sqrt(2.0) / 2.0
    valid = tau <= limit + 1e-12
    return BoundResult(float(value), bool(valid), f"tau <= sqrt(2)/2", tau, "frobenius", "frobenius_global", dim)


BOUND_EVALUATORS = {
    "trace": fannes_trace_bound,
    "frobenius_small": fannes_frobenius_small_bound,
    "frobenius_global": fannes_frobenius_global_bound,
}


def choi_distances(choi1, choi2) -> tuple[float, float]:
    """``(t, tau)``: half the trace-norm and half the Frobenius distance of the Choi matrices."""
    c1, c2 = as_choi(choi1), as_choi(choi2)
    if c1.d != c2.d:
        raise DimensionError(f"channels act on different dimensions {c1.d} and {c2.d}")
    diff = c1.sigma - c2.sigma
    return 0.5 * schatten_norm(diff, 1), 0.5 * schatten_norm(diff, 2)


def evaluate_bounds(params, choi1, choi2, space_dim: int | None = None) -> list[tuple[BoundResult, float]]:
    """All bound evaluators for a channel pair, with the observed map entropy gap.

    Returns an empty list when ``params`` is outside both proven ranges.
    """
    params = as_params(params)
    try:
        parameter_range(params)
    except NotApplicableError:
        return []
    c1, c2 = as_choi(choi1), as_choi(choi2)
    t, tau = choi_distances(c1, c2)
    observed = abs(map_entropy(c1, params) - map_entropy(c2, params))
    return [
        (fannes_trace_bound(params, c1.d, t, space_dim), observed),
        (fannes_frobenius_small_bound(params, c1.d, tau, space_dim), observed),
        (fannes_frobenius_global_bound(params, c1.d, tau, space_dim), observed),
    ]


def frobenius_distance_as_2mean(channel1, channel2) -> float:
    """Power-2 mean over matrix units ``|m><n|`` of ``||(Phi - Psi)(|m><n|)||_2``.

    Equals ``||sigma(Phi) - sigma(Psi)||_2`` without forming either Choi matrix.
    """
    k1, k2 = as_kraus(channel1), as_kraus(channel2)
    if k1.d != k2.d:
        raise DimensionError(f"channels act on different dimensions {k1.d} and {k2.d}")
    d = k1.d
    norms = []
    for m in range(d):
        for n in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[m, n] = 1.0
            diff = apply_kraus(k1.operators, unit) - apply_kraus(k2.operators, unit)
            norms.append(schatten_norm(diff, 2))
    return q_mean(norms, 2)

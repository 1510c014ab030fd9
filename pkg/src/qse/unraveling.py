"""Effect probabilities of channel unravelings and the extremal unraveling.

For an unraveling ``{A_i}`` and input ``rho`` the Hermitian PSD matrix
``Pi_ij = tr(A_i^dagger A_j rho)`` has the effect probabilities on its diagonal.
Remixing the unraveling by a unitary ``U`` maps ``Pi`` to ``U^dagger Pi U``.
Mixing with the diagonalizer of ``Pi`` gives the extremal unraveling, whose
effect probabilities are the eigenvalues of ``Pi``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channels import KrausSet, kraus_to_choi, transform_unraveling, _check_density_dim
from .entropy import EntropyParams, as_params, unified_entropy, unified_entropy_grid
from .linalg import clean_spectrum, hermitian_eig
from .reports import Report
from .sampling import random_unitaries, trial_rng

GRAM_TOL = 1e-10
CONDITION_TOL = 1e-8
VIOLATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EffectGram:
    pi: np.ndarray
    rho: np.ndarray
    kraus_label: str = ""

    @property
    def probabilities(self) -> np.ndarray:
        return clean_spectrum(np.diag(self.pi).real)


@dataclass(frozen=True, eq=False)
class ExtremalUnraveling:
    kraus: KrausSet
    lambdas: np.ndarray
    diagonalizer: np.ndarray


def effect_gram(kraus: KrausSet, rho) -> EffectGram:
    """Matrix of Hilbert-Schmidt products ``<A_i sqrt(rho), A_j sqrt(rho)>``.

    Computed as ``tr(A_i^dagger A_j rho)`` so no square root is needed.
    """
    rho = _check_density_dim(rho, kraus.d)
    pi = _kernels.effect_gram(kraus.operators, rho)
    pi = 0.5 * (pi + pi.conj().T)
    return EffectGram(pi, rho, kraus.label)


def effect_probabilities(kraus: KrausSet, rho) -> np.ndarray:
    return effect_gram(kraus, rho).probabilities


def _normalized(p: np.ndarray) -> np.ndarray:
    # effect probabilities sum to tr(rho) = 1 up to rounding
    return p / p.sum()


def unraveling_entropy(kraus: KrausSet, rho, params) -> float:
    """Unified entropy of the effect probabilities of an unraveling."""
    params = as_params(params)
    p = _normalized(effect_probabilities(kraus, rho))
    return float(unified_entropy_grid(p, [params.q], [params.s])[0])


def extremal_unraveling(kraus: KrausSet, rho) -> ExtremalUnraveling:
    """Remix ``kraus`` by the unitary that diagonalizes its effect Gram matrix.

    Zero eigenvalues are kept so the operator count is unchanged.
    """
    gram = effect_gram(kraus, rho)
    spec = hermitian_eig(gram.pi)
    v = spec.eigenvectors
    ex = transform_unraveling(kraus, v)
    ex = KrausSet(ex.operators, label=f"extremal({kraus.label})", validate=False)
    lambdas = clean_spectrum(spec.eigenvalues)
    return ExtremalUnraveling(ex, lambdas, v)


def extremal_entropy(kraus: KrausSet, rho, params) -> float:
    params = as_params(params)
    ex = extremal_unraveling(kraus, rho)
    return float(unified_entropy_grid(_normalized(ex.lambdas), [params.q], [params.s])[0])


def asserted_region(params: EntropyParams) -> bool:
    """Both unraveling inequalities are asserted for ``s != 0`` or ``q <= 1``.

    Renyi entropies (``s = 0``) of order ``q > 1`` are only searched for
    counterexamples.
    """
    return params.s != 0.0 or params.q <= 1.0


def check_theorem1(kraus: KrausSet, rho, params, trials: int = 100, seed: int = 0,
                   tol: float = VIOLATION_TOL, pad: int = 0) -> Report:
    """Compare the extremal unraveling entropy with ``trials`` random remixings.

    Each remixing is a Haar unitary on ``len(kraus) + pad`` operators. Outside
    the asserted parameter region the check is exploratory: violations are
    recorded but ``pass`` stays true.
    """
    params = as_params(params)
    ex = extremal_unraveling(kraus, rho)
    h_ex = float(unified_entropy_grid(_normalized(ex.lambdas), [params.q], [params.s])[0])
    gram = effect_gram(kraus, rho).pi
    k = len(kraus) + int(pad)
    if pad:
        gram = np.pad(gram, ((0, pad), (0, pad)))
    rng = trial_rng(seed, 0, stream=1)
    us = random_unitaries(int(trials), k, rng)
    diags = _kernels.gram_diagonals(gram, us) if trials else np.zeros((0, k))
    # the input unraveling itself is one of the competitors
    diags = np.vstack([np.pad(effect_probabilities(kraus, rho), (0, pad))[None], diags])
    worst = -np.inf
    for row in diags:
        p = _normalized(clean_spectrum(row))
        h = float(unified_entropy_grid(p, [params.q], [params.s])[0])
        worst = max(worst, h_ex - h)
    applicable = asserted_region(params)
    return Report(
        theorem="theorem1",
        params=params.to_dict(),
        trials=int(trials),
        max_violation=float(worst),
        applicable=applicable,
        passed=(worst <= tol) if applicable else True,
        details={"extremal_entropy": h_ex, "exploratory": not applicable},
    )


def extremal_trace_condition(ex: ExtremalUnraveling) -> np.ndarray:
    """``tr(A_i^dagger A_i)`` for each extremal Kraus operator."""
    ops = ex.kraus.operators
    return np.einsum("iab,iab->i", ops.conj(), ops).real


def check_theorem2(kraus: KrausSet, rho, params, tol: float = 1e-9) -> Report:
    """Input entropy versus extremal unraveling entropy.

    Applicable when every extremal operator has ``tr(A^dagger A) = 1`` within
    1e-8 and the parameters are in the asserted region. Margin is
    ``H(extremal) - H(rho)``; a violation is a negative margin.
    """
    params = as_params(params)
    ex = extremal_unraveling(kraus, rho)
    traces = extremal_trace_condition(ex)
    condition = bool(np.all(np.abs(traces - 1.0) <= CONDITION_TOL))
    h_rho = unified_entropy(rho, params)
    h_ex = float(unified_entropy_grid(_normalized(ex.lambdas), [params.q], [params.s])[0])
    applicable = condition and asserted_region(params)
    violation = h_rho - h_ex
    return Report(
        theorem="theorem2",
        params=params.to_dict(),
        trials=0,
        max_violation=float(violation),
        applicable=applicable,
        passed=(violation <= tol) if applicable else True,
        details={
            "condition_holds": condition,
            "extremal_traces": traces.tolist(),
            "input_entropy": h_rho,
            "extremal_entropy": h_ex,
            "status": "checked" if applicable else "not applicable",
        },
    )


def same_channel(k1: KrausSet, k2: KrausSet) -> float:
    """Max-entry distance between the Choi matrices of two unravelings."""
    return float(np.max(np.abs(kraus_to_choi(k1).sigma - kraus_to_choi(k2).sigma)))

"""Entropy exchange and the inequalities built on it.

The exchange entropy of ``rho`` under a channel is the entropy of the joint
output ``(Phi (x) id)(|psi><psi|)`` for a purification ``psi`` of ``rho``. The
same nonzero spectrum belongs to the environment state
``W_ij = tr(A_i rho A_j^dagger)`` of a Stinespring dilation; ``W`` is only
``k x k`` and is the primary route here, with the joint state as a check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    KrausSet,
    apply_channel,
    apply_kraus,
    kraus_to_choi,
    maximally_entangled_state,
    tensor_kraus,
    _check_density_dim,
)
from .entropy import as_params, unified_entropy, validate_density
from .errors import DimensionError
from .linalg import clean_spectrum, eigvalsh_desc, hermitian_eig, partial_trace
from .mapentropy import map_entropy
from .reports import Margin, Report

ROUTE_TOL = 1e-9
VIOLATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Purification:
    """Unit vector on ``H_Q (x) H_R`` (index ``a*d + r``) whose ``Q`` marginal is ``source``."""

    vector: np.ndarray
    source: np.ndarray

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def marginal(self) -> np.ndarray:
        d = self.source.shape[0]
        return partial_trace(self.projector, keep="A", dims=(d, d))


def purify(rho) -> Purification:
    """Canonical purification ``sum_j sqrt(lambda_j) |e_j> (x) |j>``."""
    rho = validate_density(rho)
    spec = hermitian_eig(rho)
    lam = clean_spectrum(spec.eigenvalues)
    psi = (spec.eigenvectors * np.sqrt(lam)).reshape(-1)
    return Purification(psi / np.linalg.norm(psi), rho)


def joint_output_state(rho, kraus: KrausSet, purification: Purification | None = None) -> np.ndarray:
    """``(Phi (x) id_R)(|psi><psi|)`` on ``d^2`` dimensions."""
    pur = purification if purification is not None else purify(_check_density_dim(rho, kraus.d))
    ops = np.einsum("jab,rs->jarbs", kraus.operators, np.eye(kraus.d)).reshape(len(kraus), kraus.d**2, kraus.d**2)
    return apply_kraus(ops, pur.projector)


def environment_state(rho, kraus: KrausSet) -> np.ndarray:
    """``W_ij = tr(A_i rho A_j^dagger)``, the final environment state."""
    rho = _check_density_dim(rho, kraus.d)
    ops = kraus.operators
    w = np.einsum("iab,bc,jac->ij", ops, rho, ops.conj())
    return 0.5 * (w + w.conj().T)


def stinespring_isometry(kraus: KrausSet) -> np.ndarray:
    """``V = sum_j |e_j> (x) A_j`` as a ``(k d) x d`` matrix, environment index first."""
    return kraus.operators.reshape(len(kraus) * kraus.d, kraus.d)


def dilated_state(rho, kraus: KrausSet) -> np.ndarray:
    """``V rho V^dagger`` on ``H_E (x) H_Q``."""
    v = stinespring_isometry(kraus)
    return v @ _check_density_dim(rho, kraus.d) @ v.conj().T


def entropy_exchange(rho, kraus: KrausSet, params, cross_check: bool = False) -> float:
    """Unified entropy exchange, from the environment matrix ``W``.

    With ``cross_check=True`` the joint-output route is also evaluated and a
    disagreement above 1e-9 raises ``ArithmeticError``.
    """
    params = as_params(params)
    value = unified_entropy(environment_state(rho, kraus), params)
    if cross_check:
        other = unified_entropy(joint_output_state(rho, kraus), params)
        if abs(other - value) > ROUTE_TOL:
            raise ArithmeticError(f"exchange routes disagree: W gives {value}, joint state gives {other}")
    return value


def exchange_spectra(rho, kraus: KrausSet) -> tuple[np.ndarray, np.ndarray]:
    """Descending spectra of the joint output and of ``W``, zero-padded to equal length."""
    a = eigvalsh_desc(joint_output_state(rho, kraus))
    b = eigvalsh_desc(environment_state(rho, kraus))
    n = max(a.size, b.size)
    return np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size))


def lindblad_region(params) -> bool:
    params = as_params(params)
    return params.q > 1.0 and params.s >= 1.0 / params.q


def _triangle_margins(a: float, b: float, c: float, names=("input", "output", "exchange")) -> list[Margin]:
    na, nb, nc = names
    return [
        Margin(f"|{na}-{nc}|<={nb}<={na}+{nc}", abs(a - c), b, a + c),
        Margin(f"|{nb}-{nc}|<={na}<={nb}+{nc}", abs(b - c), a, b + c),
        Margin(f"|{na}-{nb}|<={nc}<={na}+{nb}", abs(a - b), c, a + b),
    ]


def check_lindblad_extension(rho, kraus: KrausSet, params, tol: float = VIOLATION_TOL) -> Report:
    """Triangle and subadditivity relations among input, output and exchange entropies.

    Asserted for ``q > 1`` and ``s >= 1/q``; elsewhere the margins are
    recorded in exploratory mode.
    """
    params = as_params(params)
    rho = _check_density_dim(rho, kraus.d)
    a = unified_entropy(rho, params)
    b = unified_entropy(apply_channel(kraus, rho), params)
    c = entropy_exchange(rho, kraus, params)
    margins = _triangle_margins(a, b, c)
    worst = max(-m.slack for m in margins)
    applicable = lindblad_region(params)
    return Report(
        theorem="theorem4",
        params=params.to_dict(),
        trials=1,
        max_violation=float(worst),
        applicable=applicable,
        passed=(worst <= tol) if applicable else True,
        margins=margins,
        details={"tight": [m.name for m in margins if m.tight], "exploratory": not applicable},
    )


def entangled_output_state(k1: KrausSet, k2: KrausSet) -> np.ndarray:
    """``(Phi1 (x) Phi2)(|psi+><psi+|)`` for channels on the same dimension."""
    if k1.d != k2.d:
        raise DimensionError(f"channels act on different dimensions {k1.d} and {k2.d}")
    return apply_kraus(tensor_kraus(k1, k2).operators, maximally_entangled_state(k1.d))


def factorized_output_state(k1: KrausSet, k2: KrausSet) -> np.ndarray:
    """Same output computed as ``(Phi1 (x) id)((id (x) Phi2)(|psi+><psi+|))``."""
    d = k1.d
    eye = np.eye(d, dtype=complex)[None]
    id_phi2 = tensor_kraus(KrausSet(eye, validate=False), k2)
    phi1_id = tensor_kraus(k1, KrausSet(eye, validate=False))
    inner = apply_kraus(id_phi2.operators, maximally_entangled_state(d))
    return apply_kraus(phi1_id.operators, inner)


def check_entangled_output_bounds(k1: KrausSet, k2: KrausSet, params, tol: float = VIOLATION_TOL) -> Report:
    """Map entropies bound the output entropy of a maximally entangled input.

    ``|M1 - M2| <= H_out <= M1 + M2`` plus the two permutations. Asserted for
    ``q > 1``, ``s >= 1/q``.
    """
    params = as_params(params)
    out = entangled_output_state(k1, k2)
    fact = factorized_output_state(k1, k2)
    consistency = float(np.max(np.abs(out - fact)))
    m1 = map_entropy(kraus_to_choi(k1), params)
    m2 = map_entropy(kraus_to_choi(k2), params)
    h_out = unified_entropy(out, params)
    # first relation reads |M1 - M2| <= H_out <= M1 + M2
    margins = _triangle_margins(m1, h_out, m2, names=("M1", "H_out", "M2"))
    worst = max(-m.slack for m in margins)
    applicable = lindblad_region(params)
    return Report(
        theorem="theorem5",
        params=params.to_dict(),
        trials=1,
        max_violation=float(worst),
        applicable=applicable,
        passed=((worst <= tol) if applicable else True) and consistency <= 1e-9,
        margins=margins,
        details={"M1": m1, "M2": m2, "H_out": h_out, "factorization_residual": consistency},
    )

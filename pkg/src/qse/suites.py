"""Randomized verification suites.

Every suite draws its instances from :func:`qse.sampling.trial_rng`, so a run
is fully determined by ``(seed, d, trials)`` and individual trials can be
replayed. A suite counts a violation only for checks in assertion mode;
exploratory checks are recorded but never fail the run.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernels
from .channels import (
    KrausSet,
    as_choi,
    basis_pinching,
    identity_channel,
    kraus_to_choi,
    mix_channels,
    random_channel,
    standard_channel,
)
from .entropy import EntropyParams, unified_entropy_grid
from .exchange import (
    check_entangled_output_bounds,
    check_lindblad_extension,
    entropy_exchange,
    exchange_spectra,
)
from .linalg import clean_spectrum, is_scaled_unitary_on_support, schatten_bound_factor, schatten_norm, support_dimension
from .mapentropy import (
    BOUND_EVALUATORS,
    additivity_residuals,
    choi_distances,
    frobenius_distance_as_2mean,
    map_entropy,
    map_entropy_grid,
    parameter_range,
)
from .errors import NotApplicableError
from .sampling import ginibre, random_density, random_spectrum, random_unitaries, random_unitary, trial_rng
from .unraveling import (
    CONDITION_TOL,
    asserted_region,
    effect_gram,
    extremal_trace_condition,
    extremal_unraveling,
)

GRID_Q = (0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0)
GRID_S = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
LINDBLAD_PARAMS = ((1.5, 1.0), (2.0, 0.5), (2.0, 1.0), (3.0, 1.0), (1.25, 0.8))

DEFAULT_TOL = 1e-9


def default_tolerance() -> float:
    """Assertion tolerance, overridable through ``QSE_TOLERANCE``."""
    return float(os.environ.get("QSE_TOLERANCE", DEFAULT_TOL))


def default_grid(qs=GRID_Q, ss=GRID_S) -> list[tuple[float, float]]:
    return [(float(q), float(s)) for q, s in product(qs, ss)]


@dataclass
class SuiteResult:
    suite: str
    checks: int = 0
    violations: int = 0
    max_violation: float = -math.inf
    tolerance: float = DEFAULT_TOL
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def add(self, violation: float, asserted: bool = True, **record) -> None:
        """Record one check; ``violation > tolerance`` counts only when asserted."""
        violation = float(violation)
        if asserted:
            self.checks += 1
            self.max_violation = max(self.max_violation, violation)
            if not violation <= self.tolerance:
                self.violations += 1
                record["violated"] = True
        record["violation"] = violation
        record["asserted"] = asserted
        self.records.append(record)

    def to_dict(self, with_records: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "checks": self.checks,
            "violations": self.violations,
            "max_violation": self.max_violation if math.isfinite(self.max_violation) else None,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "summary": self.summary,
        }
        if with_records:
            out["records"] = self.records
        return out


def _tol(tol, fallback):
    return fallback if tol is None else float(tol)


def _random_kraus(d: int, rng: np.random.Generator) -> KrausSet:
    return random_channel(d, int(rng.integers(1, d * d + 1)), rng)


def _random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    return random_density(d, rng, rank=int(rng.integers(1, d + 1)))


# -- unravelings ---------------------------------------------------------------------


def theorem1_suite(ds=(2, 3), trials: int = 50, remixes: int = 100, seed: int = 0, tol=None,
                   renyi_scan: bool = False) -> SuiteResult:
    """Extremal unraveling entropy against random unitary remixings.

    Asserted on grid points with ``s != 0`` or ``q <= 1``; with
    ``renyi_scan`` the Renyi orders ``q > 1`` are searched in exploratory mode.
    """
    res = SuiteResult("theorem1", tolerance=_tol(tol, 1e-10))
    grid = [(q, s) for q, s in default_grid() if asserted_region(EntropyParams(q, s))]
    explore = [(q, 0.0) for q in GRID_Q if q > 1.0] if renyi_scan else []
    points = grid + explore
    qs = np.array([p[0] for p in points])
    ss = np.array([p[1] for p in points])
    n_assert = len(grid)
    for d in ds:
        for i in range(trials):
            rng = trial_rng(seed, i, stream=100 + d)
            kraus = _random_kraus(d, rng)
            rho = _random_state(d, rng)
            pad = i % 2
            ex = extremal_unraveling(kraus, rho)
            lam = np.pad(ex.lambdas, (0, pad))
            h_ex = unified_entropy_grid(lam / lam.sum(), qs, ss)
            gram = np.pad(effect_gram(kraus, rho).pi, ((0, pad), (0, pad)))
            diags = _kernels.gram_diagonals(gram, random_unitaries(remixes, len(kraus) + pad, rng))
            diags = np.vstack([np.diag(gram).real[None], diags])
            worst = np.full(len(points), -np.inf)
            for row in diags:
                row = clean_spectrum(row)
                worst = np.maximum(worst, h_ex - unified_entropy_grid(row / row.sum(), qs, ss))
            for j, (q, s) in enumerate(points):
                res.add(worst[j], asserted=j < n_assert, d=d, trial=i, q=q, s=s, rank=len(kraus), pad=pad)
    res.summary = {"grid_points": n_assert, "remixes": remixes, "renyi_scan_points": len(explore),
                   "renyi_scan_max_violation": max((r["violation"] for r in res.records if not r["asserted"]),
                                                   default=None)}
    return res


def weyl_operator(d: int, a: int, b: int) -> np.ndarray:
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)


def condition_channel(d: int, rng: np.random.Generator) -> KrausSet:
    """A channel whose extremal unravelings always satisfy ``tr(A^dagger A) = 1``.

    Either a rank-one pinching in a random basis, or ``{V W_j / sqrt(d)}`` for
    ``d`` distinct Weyl operators ``W_j`` and a random unitary ``V``.
    """
    if rng.random() < 0.5:
        return basis_pinching(random_unitary(d, rng))
    pairs = rng.choice(d * d, size=d, replace=False)
    v = random_unitary(d, rng)
    ops = np.stack([v @ weyl_operator(d, int(p) // d, int(p) % d) for p in pairs]) / np.sqrt(d)
    return KrausSet(ops, label="weyl_mixture")


def theorem2_suite(ds=(2, 3), trials: int = 50, seed: int = 0, tol=None, generic_fraction: float = 0.2) -> SuiteResult:
    """Input entropy is a lower bound for the extremal unraveling entropy.

    Most instances are built to satisfy the trace condition; a fraction are
    generic channels, which are reported as not applicable unless they happen
    to satisfy it.
    """
    res = SuiteResult("theorem2", tolerance=_tol(tol, 1e-9))
    points = [(q, s) for q, s in default_grid() if asserted_region(EntropyParams(q, s))]
    qs = np.array([p[0] for p in points])
    ss = np.array([p[1] for p in points])
    applicable = not_applicable = 0
    for d in ds:
        for i in range(trials):
            rng = trial_rng(seed, i, stream=200 + d)
            kraus = _random_kraus(d, rng) if rng.random() < generic_fraction else condition_channel(d, rng)
            rho = _random_state(d, rng)
            ex = extremal_unraveling(kraus, rho)
            traces = extremal_trace_condition(ex)
            if not np.all(np.abs(traces - 1.0) <= CONDITION_TOL):
                not_applicable += 1
                continue
            applicable += 1
            lam = ex.lambdas / ex.lambdas.sum()
            h_ex = unified_entropy_grid(lam, qs, ss)
            spec = clean_spectrum(np.linalg.eigvalsh(rho))
            h_rho = unified_entropy_grid(spec / spec.sum(), qs, ss)
            for j, (q, s) in enumerate(points):
                res.add(h_rho[j] - h_ex[j], d=d, trial=i, q=q, s=s, label=kraus.label)
    res.summary = {"applicable_instances": applicable, "not_applicable_instances": not_applicable}
    return res


# -- exchange -------------------------------------------------------------------------


def theorem4_suite(ds=(2, 3), trials=(500, 100), seed: int = 0, params=LINDBLAD_PARAMS, tol=None) -> SuiteResult:
    """Triangle and subadditivity relations for input, output and exchange entropies."""
    res = SuiteResult("theorem4", tolerance=_tol(tol, 1e-9))
    counts = dict(zip(ds, trials if isinstance(trials, (tuple, list)) else [trials] * len(ds)))
    tight = 0
    for d in ds:
        for i in range(counts[d]):
            rng = trial_rng(seed, i, stream=400 + d)
            kraus = _random_kraus(d, rng)
            rho = _random_state(d, rng)
            for q, s in params:
                rep = check_lindblad_extension(rho, kraus, (q, s), tol=res.tolerance)
                tight += len(rep.details["tight"])
                res.add(rep.max_violation, asserted=rep.applicable, d=d, trial=i, q=q, s=s,
                        margins=[m.to_dict() for m in rep.margins])
    res.summary = {"tight_relations": tight}
    return res


def theorem5_suite(d: int = 2, trials: int = 200, seed: int = 0, params=LINDBLAD_PARAMS, tol=None) -> SuiteResult:
    """Output entropy of ``Phi1 (x) Phi2`` on a maximally entangled input.

    Also checks the tight case ``Phi1 = id``, where the output entropy equals
    the map entropy of ``Phi2``.
    """
    res = SuiteResult("theorem5", tolerance=_tol(tol, 1e-9))
    max_tight_gap = 0.0
    for i in range(trials):
        rng = trial_rng(seed, i, stream=500 + d)
        k1, k2 = _random_kraus(d, rng), _random_kraus(d, rng)
        for q, s in params:
            rep = check_entangled_output_bounds(k1, k2, (q, s), tol=res.tolerance)
            viol = max(rep.max_violation, rep.details["factorization_residual"] - res.tolerance)
            res.add(viol, asserted=rep.applicable, trial=i, q=q, s=s, margins=[m.to_dict() for m in rep.margins])
            tight = check_entangled_output_bounds(identity_channel(d), k2, (q, s), tol=res.tolerance)
            gap = abs(tight.details["H_out"] - tight.details["M2"])
            max_tight_gap = max(max_tight_gap, gap)
            res.add(gap, trial=i, q=q, s=s, case="identity_first")
    res.summary = {"max_identity_gap": max_tight_gap}
    return res


def exchange_suite(ds=(2, 3), trials: int = 50, seed: int = 0, params=None, tol=None) -> SuiteResult:
    """Joint-output and environment spectra agree; exchange at ``I/d`` is the map entropy."""
    res = SuiteResult("exchange", tolerance=_tol(tol, 1e-9))
    points = default_grid() if params is None else list(params)
    for d in ds:
        for i in range(trials):
            rng = trial_rng(seed, i, stream=900 + d)
            kraus = _random_kraus(d, rng)
            rho = _random_state(d, rng)
            joint, env = exchange_spectra(rho, kraus)
            res.add(float(np.max(np.abs(joint - env))), d=d, trial=i, check="spectra")
            mixed = np.eye(d) / d
            choi = kraus_to_choi(kraus)
            gap = max(abs(entropy_exchange(mixed, kraus, p) - map_entropy(choi, p)) for p in points)
            res.add(gap, d=d, trial=i, check="maximally_mixed")
    return res


# -- map entropies ----------------------------------------------------------------------


def additivity_suite(ds=(2, 3), trials=(100, 25), seed: int = 0, tol=None) -> SuiteResult:
    """Residual of the tensor-product identity for map entropies over the grid."""
    res = SuiteResult("additivity", tolerance=_tol(tol, 1e-9))
    counts = dict(zip(ds, trials if isinstance(trials, (tuple, list)) else [trials] * len(ds)))
    points = default_grid()
    qs = np.array([p[0] for p in points])
    ss = np.array([p[1] for p in points])
    for d in ds:
        for i in range(counts[d]):
            rng = trial_rng(seed, i, stream=600 + d)
            c1 = kraus_to_choi(_random_kraus(d, rng))
            c2 = kraus_to_choi(_random_kraus(d, rng))
            r = np.abs(additivity_residuals(c1, c2, qs, ss))
            j = int(np.argmax(r))
            res.add(float(r[j]), d=d, trial=i, worst_q=points[j][0], worst_s=points[j][1],
                    ranks=[c1.rank(), c2.rank()])
    return res


def fannes_pair(d: int, i: int, rng: np.random.Generator) -> tuple[KrausSet, KrausSet]:
    """Channel pairs at a spread of distances: independent, nearby mixtures, and equal."""
    kind = i % 4
    k1 = _random_kraus(d, rng)
    if kind == 0:
        return k1, _random_kraus(d, rng)
    if kind == 3:
        return k1, k1
    weight = 10.0 ** rng.uniform(-4, -0.5) if kind == 1 else rng.uniform(0.0, 0.3)
    return k1, mix_channels(k1, _random_kraus(d, rng), weight)


def fannes_suite(d: int = 2, trials: int = 200, seed: int = 0, tol=None, space_dim: int | None = None) -> SuiteResult:
    """Soundness of all continuity bounds over the grid.

    ``space_dim`` defaults to ``d**2`` (the dimension of the Choi matrices);
    any other value is run in exploratory mode.
    """
    res = SuiteResult("fannes", tolerance=_tol(tol, 1e-9))
    asserted = space_dim is None or space_dim == d * d
    points = []
    for q, s in default_grid():
        try:
            parameter_range((q, s))
            points.append((q, s))
        except NotApplicableError:
            pass
    qs = np.array([p[0] for p in points])
    ss = np.array([p[1] for p in points])
    valid_counts = {k: 0 for k in BOUND_EVALUATORS}
    tighter = {"frobenius_small": 0, "frobenius_global": 0}
    for i in range(trials):
        rng = trial_rng(seed, i, stream=700 + d)
        k1, k2 = fannes_pair(d, i, rng)
        c1, c2 = kraus_to_choi(k1), kraus_to_choi(k2)
        t, tau = choi_distances(c1, c2)
        observed = np.abs(map_entropy_grid(c1, qs, ss) - map_entropy_grid(c2, qs, ss))
        for j, (q, s) in enumerate(points):
            results = {}
            for name, fn in BOUND_EVALUATORS.items():
                b = fn((q, s), d, t if name == "trace" else tau, space_dim)
                results[name] = b
                if b.valid:
                    valid_counts[name] += 1
                    res.add(observed[j] - b.bound_value, asserted=asserted, trial=i, q=q, s=s,
                            bound_kind=name, bound=b.bound_value, distance=b.distance_used,
                            observed=float(observed[j]))
            small, glob = results["frobenius_small"], results["frobenius_global"]
            if small.valid and glob.valid:
                tighter["frobenius_small" if small.bound_value <= glob.bound_value else "frobenius_global"] += 1
    res.summary = {"valid_evaluations": valid_counts, "tighter_frobenius_bound": tighter,
                   "space_dim": space_dim or d * d, "asserted": asserted}
    return res


def two_mean_suite(ds=(2, 3), trials: int = 50, seed: int = 0, tol=None) -> SuiteResult:
    """Frobenius Choi distance against its power-mean expression over matrix units."""
    res = SuiteResult("twomean", tolerance=_tol(tol, 1e-10))
    for d in ds:
        for i in range(trials):
            rng = trial_rng(seed, i, stream=800 + d)
            k1, k2 = _random_kraus(d, rng), _random_kraus(d, rng)
            direct = schatten_norm(kraus_to_choi(k1).sigma - kraus_to_choi(k2).sigma, 2)
            res.add(abs(frobenius_distance_as_2mean(k1, k2) - direct), d=d, trial=i, distance=direct)
    return res


# -- norms and limits -------------------------------------------------------------------


def schatten_sample(i: int, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
    """Random test matrix and whether it is a multiple of a unitary on its support."""
    n = int(rng.integers(2, 7))
    kind = i % 4
    if kind == 0:
        return ginibre(n, n, rng), False
    if kind == 1:
        r = int(rng.integers(1, n))
        return ginibre(n, r, rng) @ ginibre(r, n, rng), r == 1
    r = int(rng.integers(1, n + 1))
    u, w = random_unitary(n, rng), random_unitary(n, rng)
    c = float(rng.uniform(0.1, 3.0))
    x = c * u[:, :r] @ w[:, :r].conj().T
    if kind == 2:
        return x, True
    # perturb one singular value: no longer a scaled unitary unless rank one
    if r == 1:
        return x, True
    return x + 0.5 * c * np.outer(u[:, 0], w[:, 0].conj()), False


def schatten_suite(trials: int = 200, seed: int = 0, tol=None, ps=(1.0, 2.0), qs=(2.0, 3.0, math.inf)) -> SuiteResult:
    """Norm comparison on the support, with the equality case on scaled unitaries."""
    res = SuiteResult("schatten", tolerance=_tol(tol, 1e-10))
    eq_tol = 1e-9
    equality_mismatch = 0
    for i in range(trials):
        rng = trial_rng(seed, i, stream=1000)
        x, scaled_unitary = schatten_sample(i, rng)
        r = support_dimension(x)
        for p, q in product(ps, qs):
            lhs = schatten_norm(x, p)
            rhs = schatten_bound_factor(r, p, q) * schatten_norm(x, p * q if math.isfinite(q) else math.inf)
            res.add(lhs - rhs, trial=i, p=p, q=q, support=r, scaled_unitary=scaled_unitary)
            equal = abs(lhs - rhs) <= eq_tol * max(1.0, rhs)
            if equal != scaled_unitary:
                equality_mismatch += 1
        if is_scaled_unitary_on_support(x) != scaled_unitary:
            equality_mismatch += 1
    res.summary = {"equality_mismatches": equality_mismatch}
    if equality_mismatch:
        res.violations += equality_mismatch
    return res


def limits_suite(trials: int = 50, seed: int = 0, eps: float = 1e-6, tol: float = 1e-4) -> SuiteResult:
    """Continuity of the generic formula at ``q = 1`` and ``s = 0``."""
    res = SuiteResult("limits", tolerance=tol)
    q_off = [q for q in GRID_Q if q != 1.0]
    for i in range(trials):
        rng = trial_rng(seed, i, stream=1100)
        p = random_spectrum(int(rng.integers(2, 10)), rng, zeros=int(rng.integers(0, 2)))
        for s in GRID_S:
            h1 = unified_entropy_grid(p, [1.0], [s])[0]
            near = unified_entropy_grid(p, [1.0 - eps, 1.0 + eps], [s, s])
            res.add(float(np.max(np.abs(near - h1))), trial=i, s=s, limit="q->1")
        for q in q_off:
            renyi = unified_entropy_grid(p, [q], [0.0])[0]
            near = unified_entropy_grid(p, [q, q], [-eps, eps])
            res.add(float(np.max(np.abs(near - renyi))), trial=i, q=q, limit="s->0")
    return res


SUITES = {
    "theorem1": theorem1_suite,
    "theorem2": theorem2_suite,
    "theorem4": theorem4_suite,
    "theorem5": theorem5_suite,
    "additivity": additivity_suite,
    "fannes": fannes_suite,
    "schatten": schatten_suite,
    "exchange": exchange_suite,
    "twomean": two_mean_suite,
    "limits": limits_suite,
}

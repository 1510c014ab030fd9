"""Quantum channels as Kraus sets and rescaled Choi matrices.

Conventions
-----------
For a channel on a ``d``-dimensional space the rescaled dynamical matrix is

    sigma(Phi) = (Phi (x) id)(|phi+><phi+|),   |phi+> = d^(-1/2) sum_v |v>|v>,

so the channel acts on the first tensor factor and the reference on the
second. Entry-wise,

    sigma[(a, m), (b, n)] = Phi(|m><n|)[a, b] / d,

with composite index ``(a, m) -> a*d + m``. A Kraus operator ``A`` enters as
the vector ``vec(A)[a*d + m] = A[a, m]``, i.e. ``(A (x) I) sum_v |v>|v>``,
which is ``A.reshape(-1)`` in C order; ``sigma = (1/d) sum_j vec(A_j) vec(A_j)^dagger``.
"""
from __future__ import annotations

import json
from dataclasses import InitVar, dataclass
from pathlib import Path

import numpy as np

from .entropy import validate_density
from .errors import DimensionError, InvalidParameterError, ValidationError
from .linalg import as_matrix, clean_spectrum, eigvalsh_desc, hermitian_eig, is_unitary, partial_trace
from .sampling import ginibre

COMPLETENESS_TOL = 1e-10
TP_TOL = 1e-8
CHOI_RANK_CUTOFF = 1e-10
UNITARY_TOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class KrausSet:
    """An ordered unraveling ``{A_j}`` of a channel, stored as a ``(k, d, d)`` array.

    The completeness relation ``sum_j A_j^dagger A_j = I`` is checked to 1e-10
    unless ``validate=False``.
    """

    operators: np.ndarray
    label: str = ""
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        ops = np.asarray(self.operators, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise DimensionError(f"Kraus operators must form a (k, d, d) stack, got {ops.shape}")
        if ops.shape[1] != ops.shape[2]:
            raise DimensionError(f"only square Kraus operators are supported, got {ops.shape[1:]}")
        if not np.all(np.isfinite(ops)):
            raise ValidationError("Kraus operators have non-finite entries")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        if validate:
            dev = self.completeness_deviation()
            if dev > COMPLETENESS_TOL:
                raise ValidationError(f"Kraus set {self.label!r} is not trace preserving (deviation {dev:.3e})")

    @property
    def d(self) -> int:
        return self.operators.shape[1]

    def __len__(self) -> int:
        return self.operators.shape[0]

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    def completeness_deviation(self) -> float:
        ops = self.operators
        s = np.einsum("jba,jbc->ac", ops.conj(), ops)
        return float(np.max(np.abs(s - np.eye(self.d))))


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Rescaled dynamical matrix ``sigma(Phi)`` of a channel on dimension ``d``."""

    sigma: np.ndarray
    d: int
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        sigma = as_matrix(self.sigma)
        d = int(self.d)
        if sigma.shape != (d * d, d * d):
            raise DimensionError(f"Choi matrix of a d={d} channel must be {d * d}x{d * d}, got {sigma.shape}")
        object.__setattr__(self, "d", d)
        if validate:
            sigma = validate_density(sigma)
            dev = tp_deviation(sigma, d)
            if dev > TP_TOL:
                raise ValidationError(f"Choi matrix is not trace preserving (deviation {dev:.3e})")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dynamical(self) -> np.ndarray:
        return self.d * self.sigma

    def spectrum(self) -> np.ndarray:
        return clean_spectrum(eigvalsh_desc(self.sigma))

    def rank(self) -> int:
        return int(np.count_nonzero(self.spectrum() > CHOI_RANK_CUTOFF))


@dataclass(frozen=True)
class CPTPReport:
    min_eigenvalue: float
    trace: float
    tp_deviation: float
    completely_positive: bool
    trace_preserving: bool

    @property
    def passed(self) -> bool:
        return self.completely_positive and self.trace_preserving

    def to_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "trace": self.trace,
            "tp_deviation": self.tp_deviation,
            "completely_positive": self.completely_positive,
            "trace_preserving": self.trace_preserving,
            "pass": self.passed,
        }


def tp_deviation(sigma, d: int) -> float:
    """``||tr_1(d sigma) - I||`` in spectral norm (first factor is the output)."""
    reduced = partial_trace(d * as_matrix(sigma), keep="B", dims=(d, d))
    return float(np.linalg.norm(reduced - np.eye(d), 2))


def _check_density_dim(rho, d: int) -> np.ndarray:
    rho = validate_density(rho)
    if rho.shape != (d, d):
        raise DimensionError(f"state of shape {rho.shape} does not fit a d={d} channel")
    return rho


def apply_channel(kraus: KrausSet, rho) -> np.ndarray:
    """``sum_j A_j rho A_j^dagger`` for a density operator ``rho``."""
    rho = _check_density_dim(rho, kraus.d)
    return apply_kraus(kraus.operators, rho)


def apply_kraus(ops: np.ndarray, x) -> np.ndarray:
    """Operator-sum action on an arbitrary matrix (no validation)."""
    x = np.asarray(x, dtype=complex)
    return np.einsum("jab,bc,jdc->ad", ops, x, ops.conj())


def kraus_to_choi(kraus: KrausSet) -> ChoiMatrix:
    vecs = kraus.operators.reshape(len(kraus), -1)
    sigma = np.einsum("ja,jb->ab", vecs, vecs.conj()) / kraus.d
    return ChoiMatrix(sigma, kraus.d)


def choi_to_kraus(choi: ChoiMatrix, label: str = "") -> KrausSet:
    """Minimal unraveling from the eigenvectors of the dynamical matrix.

    The number of operators equals the Choi rank (eigenvalues of ``sigma``
    above 1e-10).
    """
    if not isinstance(choi, ChoiMatrix):
        raise ValidationError("choi_to_kraus expects a validated ChoiMatrix")
    d = choi.d
    spec = hermitian_eig(choi.sigma)
    keep = spec.eigenvalues > CHOI_RANK_CUTOFF
    vals = spec.eigenvalues[keep]
    vecs = spec.eigenvectors[:, keep]
    ops = (vecs * np.sqrt(d * vals)).T.reshape(-1, d, d)
    return KrausSet(ops, label=label or "choi")


def reconstruct_action(choi: ChoiMatrix, x) -> np.ndarray:
    """``Phi(x) = tr_R(D (I (x) x^T))`` from the dynamical matrix ``D = d sigma``."""
    x = as_matrix(x)
    d = choi.d
    if x.shape != (d, d):
        raise DimensionError(f"operator of shape {x.shape} does not fit a d={d} channel")
    prod = choi.dynamical @ np.kron(np.eye(d), x.T)
    return partial_trace(prod, keep="A", dims=(d, d))


def validate_cptp(choi, d: int | None = None, tol: float = TP_TOL) -> CPTPReport:
    """Report complete positivity and trace preservation of a Choi matrix.

    Accepts a :class:`ChoiMatrix` or a raw ``d^2 x d^2`` array (with ``d``).
    Never raises on invariant violations; the report carries them.
    """
    if isinstance(choi, ChoiMatrix):
        sigma, d = choi.sigma, choi.d
    else:
        sigma = as_matrix(choi)
        if d is None:
            d = int(round(np.sqrt(sigma.shape[0])))
        if sigma.shape != (d * d, d * d):
            raise DimensionError(f"Choi matrix of shape {sigma.shape} does not fit d={d}")
    herm = 0.5 * (sigma + sigma.conj().T)
    lo = float(eigvalsh_desc(herm)[-1])
    dev = tp_deviation(herm, d)
    tr = float(np.trace(sigma).real)
    return CPTPReport(
        min_eigenvalue=lo,
        trace=tr,
        tp_deviation=dev,
        completely_positive=lo >= -tol,
        trace_preserving=dev <= tol and abs(tr - 1.0) <= tol,
    )


def tensor_choi_sigma(s1: np.ndarray, d1: int, s2: np.ndarray, d2: int) -> np.ndarray:
    """Reorder ``s1 (x) s2`` from ``(Q1 R1)(Q2 R2)`` to ``(Q1 Q2)(R1 R2)`` ordering."""
    big = np.kron(s1, s2).reshape(d1, d1, d2, d2, d1, d1, d2, d2)
    big = big.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = (d1 * d2) ** 2
    return big.reshape(n, n)


def tensor_channels(choi1: ChoiMatrix, choi2: ChoiMatrix) -> ChoiMatrix:
    """Choi matrix of ``Phi1 (x) Phi2`` by explicit index reshuffling."""
    sigma = tensor_choi_sigma(choi1.sigma, choi1.d, choi2.sigma, choi2.d)
    return ChoiMatrix(sigma, choi1.d * choi2.d)


def tensor_kraus(k1: KrausSet, k2: KrausSet) -> KrausSet:
    ops = np.einsum("iab,jcd->ijacbd", k1.operators, k2.operators)
    n = k1.d * k2.d
    return KrausSet(ops.reshape(-1, n, n), label=f"{k1.label}*{k2.label}")


def transform_unraveling(kraus: KrausSet, u) -> KrausSet:
    """Unitary remixing ``B_i = sum_j A_j u_ji``.

    If ``u`` is larger than the number of operators, the set is padded with
    zero operators first.
    """
    u = as_matrix(u)
    k = len(kraus)
    if u.shape[0] != u.shape[1] or u.shape[0] < k:
        raise DimensionError(f"mixing matrix of shape {u.shape} cannot remix {k} operators")
    if not is_unitary(u, UNITARY_TOL):
        raise ValidationError("mixing matrix is not unitary")
    ops = kraus.operators
    if u.shape[0] > k:
        ops = np.concatenate([ops, np.zeros((u.shape[0] - k, kraus.d, kraus.d), dtype=complex)])
    return KrausSet(np.einsum("jab,ji->iab", ops, u), label=kraus.label, validate=False)


def maximally_entangled_state(d: int) -> np.ndarray:
    """``|phi+><phi+|`` on ``d^2`` dimensions."""
    if int(d) != d or d < 2:
        raise InvalidParameterError(f"maximally entangled state needs d >= 2, got {d}")
    v = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return np.outer(v, v.conj())


# -- standard channels ----------------------------------------------------------------


def identity_channel(d: int) -> KrausSet:
    return KrausSet(np.eye(d, dtype=complex)[None], label="identity")


def unitary_channel(u) -> KrausSet:
    u = as_matrix(u)
    if not is_unitary(u, UNITARY_TOL):
        raise InvalidParameterError("unitary channel needs a unitary matrix")
    return KrausSet(u[None], label="unitary")


def depolarizing_channel(d: int, p: float) -> KrausSet:
    """``rho -> (1-p) rho + p I/d`` for ``0 <= p <= 1``.

    For ``d = 2`` the Pauli unraveling ``sqrt(1-3p/4) I, sqrt(p/4) X, Y, Z``
    is returned; otherwise the minimal unraveling of the Choi matrix
    ``(1-p)|phi+><phi+| + p I/d^2``.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"depolarizing strength must lie in [0, 1], got {p}")
    if d == 2:
        weights = [1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p]
        ops = [np.sqrt(w) * PAULI[n] for w, n in zip(weights, "IXYZ")]
        return KrausSet(np.stack(ops), label="depolarizing")
    sigma = (1.0 - p) * maximally_entangled_state(d) + p * np.eye(d * d) / (d * d)
    return choi_to_kraus(ChoiMatrix(sigma, d), label="depolarizing")


def pinching_channel(d: int, projectors=None) -> KrausSet:
    """``rho -> sum_j P_j rho P_j`` for orthogonal projectors summing to identity.

    Defaults to the rank-one projectors onto the computational basis.
    """
    if projectors is None:
        ops = np.stack([np.diag(row) for row in np.eye(d, dtype=complex)])
    else:
        ops = np.asarray(projectors, dtype=complex)
        for pj in ops:
            if np.max(np.abs(pj @ pj - pj)) > 1e-10 or np.max(np.abs(pj - pj.conj().T)) > 1e-10:
                raise InvalidParameterError("pinching needs orthogonal projectors")
    return KrausSet(ops, label="pinching")


def basis_pinching(u) -> KrausSet:
    """Pinching by the rank-one projectors onto the columns of unitary ``u``."""
    u = as_matrix(u)
    return pinching_channel(u.shape[0], [np.outer(c, c.conj()) for c in u.T])


def amplitude_damping_channel(d: int, gamma: float) -> KrausSet:
    """Decay of every level ``|k>``, ``k >= 1``, to ``|0>`` with probability ``gamma``."""
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise InvalidParameterError(f"damping gamma must lie in [0, 1], got {gamma}")
    k0 = np.diag([1.0] + [np.sqrt(1.0 - gamma)] * (d - 1)).astype(complex)
    ops = [k0]
    for k in range(1, d):
        a = np.zeros((d, d), dtype=complex)
        a[0, k] = np.sqrt(gamma)
        ops.append(a)
    return KrausSet(np.stack(ops), label="amplitude_damping")


def phase_damping_channel(d: int, lam: float) -> KrausSet:
    """Dephasing of levels ``k >= 1`` relative to ``|0>`` with strength ``lam``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidParameterError(f"phase damping lambda must lie in [0, 1], got {lam}")
    ops = [np.diag([1.0] + [np.sqrt(1.0 - lam)] * (d - 1)).astype(complex)]
    for k in range(1, d):
        a = np.zeros((d, d), dtype=complex)
        a[k, k] = np.sqrt(lam)
        ops.append(a)
    return KrausSet(np.stack(ops), label="phase_damping")


def standard_channel(kind: str, d: int, **params) -> KrausSet:
    """Build a named channel.

    ``kind`` is one of ``identity``, ``unitary`` (``u=``), ``depolarizing``
    (``p=``), ``pinching`` (optional ``projectors=``), ``amplitude_damping``
    (``gamma=``) or ``phase_damping`` (``lam=``).
    """
    if int(d) != d or d < 1:
        raise InvalidParameterError(f"dimension must be a positive integer, got {d}")
    d = int(d)
    if kind == "identity":
        return identity_channel(d)
    if kind == "unitary":
        u = as_matrix(params["u"])
        if u.shape != (d, d):
            raise DimensionError(f"unitary of shape {u.shape} for d={d}")
        return unitary_channel(u)
    if kind == "depolarizing":
        return depolarizing_channel(d, params.get("p", 1.0))
    if kind == "pinching":
        return pinching_channel(d, params.get("projectors"))
    if kind == "amplitude_damping":
        return amplitude_damping_channel(d, params.get("gamma", 1.0))
    if kind == "phase_damping":
        return phase_damping_channel(d, params.get("lam", 1.0))
    raise InvalidParameterError(f"unknown channel kind {kind!r}")


def random_channel(d: int, rank: int, seed=0) -> KrausSet:
    """Random channel with ``rank`` Kraus operators from a Gaussian isometry.

    A ``(d*rank) x d`` complex Gaussian ``G`` is isometrized as
    ``W = G (G^dagger G)^(-1/2)`` and sliced into ``rank`` blocks. ``seed`` may
    be an integer or a :class:`numpy.random.Generator`.
    """
    if int(rank) != rank or not 1 <= rank <= d * d:
        raise InvalidParameterError(f"rank must lie in [1, {d * d}], got {rank}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = ginibre(d * int(rank), d, rng)
    w, v = np.linalg.eigh(g.conj().T @ g)
    isometry = g @ (v / np.sqrt(w)) @ v.conj().T
    return KrausSet(isometry.reshape(int(rank), d, d), label=f"random(d={d},rank={rank})")


def mix_channels(k1: KrausSet, k2: KrausSet, weight: float) -> KrausSet:
    """Kraus set of ``(1-weight) Phi1 + weight Phi2``."""
    ops = np.concatenate([np.sqrt(1.0 - weight) * k1.operators, np.sqrt(weight) * k2.operators])
    return KrausSet(ops, label=f"mix({k1.label},{k2.label},{weight:g})")


# -- file formats -----------------------------------------------------------------------


def _encode(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return np.stack([m.real, m.imag], axis=-1).tolist()


def _decode(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.shape[-1] != 2:
        raise ValidationError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def channel_to_dict(channel) -> dict:
    if isinstance(channel, KrausSet):
        return {"d": channel.d, "kraus": _encode(channel.operators), "label": channel.label}
    if isinstance(channel, ChoiMatrix):
        return {"d": channel.d, "sigma": _encode(channel.sigma)}
    raise TypeError(f"cannot serialize {type(channel).__name__}")


def channel_from_dict(data: dict):
    """Inverse of :func:`channel_to_dict`; returns a KrausSet or a ChoiMatrix."""
    if "kraus" in data:
        ops = _decode(data["kraus"])
        k = KrausSet(ops, label=data.get("label", ""))
        if "d" in data and int(data["d"]) != k.d:
            raise DimensionError(f"declared d={data['d']} but operators are {k.d}x{k.d}")
        return k
    if "sigma" in data:
        return ChoiMatrix(_decode(data["sigma"]), int(data["d"]))
    raise ValidationError("channel file needs a 'kraus' or 'sigma' field")


def state_to_dict(rho, label: str = "") -> dict:
    rho = as_matrix(rho)
    return {"d": rho.shape[0], "rho": _encode(rho), "label": label}


def save_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def load_channel(path):
    return channel_from_dict(load_json(path))


def save_channel(channel, path) -> None:
    save_json(channel_to_dict(channel), path)


def as_choi(channel) -> ChoiMatrix:
    return channel if isinstance(channel, ChoiMatrix) else kraus_to_choi(channel)


def as_kraus(channel) -> KrausSet:
    return channel if isinstance(channel, KrausSet) else choi_to_kraus(channel)

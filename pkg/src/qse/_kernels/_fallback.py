"""Pure numpy implementations of the hot kernels.

These define the reference semantics; the compiled module must agree with
them to rounding.
"""
import math

import numpy as np


def unified_entropy_grid(p, qs, ss):
    """Unified entropies of one probability vector at many ``(q, s)`` points.

    ``q == 1`` gives Shannon and ``s == 0`` gives Renyi, by exact comparison.
    Nonpositive entries are dropped before powering. Power sums are
    accumulated with ``math.fsum``: at large ``|s|`` the entropy amplifies
    their relative error by the entropy value itself.
    """
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    qs = np.asarray(qs, dtype=float)
    ss = np.asarray(ss, dtype=float)
    out = np.empty(qs.shape[0])
    shannon = -math.fsum(p * np.log(p))
    for k in range(qs.shape[0]):
        q = qs[k]
        s = ss[k]
        if q == 1.0:
            out[k] = shannon
            continue
        log_power_sum = math.log(math.fsum(np.power(p, q)))
        if s == 0.0:
            out[k] = log_power_sum / (1.0 - q)
        else:
            out[k] = math.expm1(s * log_power_sum) / ((1.0 - q) * s)
    return out


def gram_diagonals(pi, us):
    """Real diagonals of ``U^dagger Pi U`` for a stack of matrices ``us``."""
    pi = np.asarray(pi, dtype=complex)
    us = np.asarray(us, dtype=complex)
    return np.einsum("tji,jl,tli->ti", us.conj(), pi, us).real


def effect_gram(kraus, rho):
    """Matrix ``[[tr(A_i^dagger A_j rho)]]`` for a stack of Kraus operators."""
    kraus = np.asarray(kraus, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    m = kraus @ rho
    return np.einsum("iab,jab->ij", kraus.conj(), m)

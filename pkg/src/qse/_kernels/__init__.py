"""Hot numerical kernels, compiled when available.

The Cython module ``_ckernels`` is used if it was built at install time;
otherwise the numpy versions in ``_fallback`` are used. Setting the
environment variable ``QSE_PURE_PYTHON=1`` forces the fallback.

Kernels
-------
unified_entropy_grid(p, qs, ss)
    Unified entropies of one probability vector at many parameter points.
gram_diagonals(pi, us)
    Diagonals of ``U^dagger Pi U`` for a stack of unitaries.
effect_gram(kraus, rho)
    Matrix of ``tr(A_i^dagger A_j rho)`` for Hermitian ``rho``.
"""
import os

from . import _fallback

fallback = _fallback
compiled = None

if os.environ.get("QSE_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as compiled  # noqa: F811
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else fallback
BACKEND = "cython" if compiled is not None else "python"

unified_entropy_grid = _impl.unified_entropy_grid
gram_diagonals = _impl.gram_diagonals
effect_gram = _impl.effect_gram

__all__ = ["BACKEND", "compiled", "fallback", "unified_entropy_grid", "gram_diagonals", "effect_gram"]

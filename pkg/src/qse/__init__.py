"""Unified (q,s)-entropies of quantum states and channels.

Submodules
----------
linalg      Hilbert-Schmidt products, Schatten norms, Hermitian eigensolver, partial traces.
entropy     The unified entropy family on spectra and density operators.
channels    Kraus sets, Choi matrices, standard and random channels, JSON files.
unraveling  Effect Gram matrices, extremal unravelings, unraveling inequalities.
exchange    Entropy exchange, Stinespring dilation, triangle-type inequalities.
mapentropy  Map entropies, the tensor-product identity, Fannes-type bounds.
suites      Randomized verification suites used by the CLI and the acceptance tests.
"""
from ._kernels import BACKEND
from .channels import (
    ChoiMatrix,
    KrausSet,
    apply_channel,
    choi_to_kraus,
    kraus_to_choi,
    maximally_entangled_state,
    random_channel,
    reconstruct_action,
    standard_channel,
    tensor_channels,
    transform_unraveling,
    validate_cptp,
)
from .entropy import EntropyParams, unified_entropy, unified_entropy_spectrum
from .exchange import entropy_exchange, purify, stinespring_isometry
from .mapentropy import additivity_residual, classify_additivity, map_entropy
from .unraveling import effect_gram, extremal_unraveling, unraveling_entropy

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChoiMatrix",
    "EntropyParams",
    "KrausSet",
    "additivity_residual",
    "apply_channel",
    "choi_to_kraus",
    "classify_additivity",
    "effect_gram",
    "entropy_exchange",
    "extremal_unraveling",
    "kraus_to_choi",
    "map_entropy",
    "maximally_entangled_state",
    "purify",
    "random_channel",
    "reconstruct_action",
    "standard_channel",
    "stinespring_isometry",
    "tensor_channels",
    "transform_unraveling",
    "unified_entropy",
    "unified_entropy_spectrum",
    "unraveling_entropy",
    "validate_cptp",
]

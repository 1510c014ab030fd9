import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qse.channels import (
    apply_channel,
    depolarizing_channel,
    identity_channel,
    kraus_to_choi,
    pinching_channel,
    random_channel,
    unitary_channel,
)
from qse.entropy import unified_entropy
from qse.errors import DimensionError
from qse.exchange import (
    check_entangled_output_bounds,
    check_lindblad_extension,
    dilated_state,
    entangled_output_state,
    entropy_exchange,
    environment_state,
    exchange_spectra,
    factorized_output_state,
    joint_output_state,
    lindblad_region,
    purify,
)
from qse.linalg import partial_trace
from qse.mapentropy import map_entropy
from qse.sampling import random_density, random_pure_density, random_unitary, trial_rng

PARAMS = [(1.5, 1.0), (2.0, 0.5), (2.0, 1.0), (3.0, 1.0), (1.25, 0.8)]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_purification_marginal(rank, rng):
    rho = random_density(3, rng, rank=rank)
    pur = purify(rho)
    assert np.linalg.norm(pur.vector) == pytest.approx(1.0)
    np.testing.assert_allclose(pur.marginal(), rho, atol=1e-13)


def test_pinching_exchange_on_plus_state():
    plus = np.full((2, 2), 0.5)
    assert entropy_exchange(plus, pinching_channel(2), (1, 1), cross_check=True) == pytest.approx(
        math.log(2), abs=1e-12
    )


@pytest.mark.parametrize("d,rank", [(2, 1), (2, 4), (3, 2), (3, 6)])
def test_joint_and_environment_spectra_agree(d, rank, rng):
    k = random_channel(d, rank, rng)
    a, b = exchange_spectra(random_density(d, rng), k)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_dilation_marginals(rng):
    k = random_channel(2, 3, rng)
    rho = random_density(2, rng)
    big = dilated_state(rho, k)
    np.testing.assert_allclose(partial_trace(big, "B", (3, 2)), apply_channel(k, rho), atol=1e-14)
    np.testing.assert_allclose(partial_trace(big, "A", (3, 2)), environment_state(rho, k), atol=1e-14)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("q,s", [(1.0, 1.0), (0.5, -2.0), (2.0, 0.0), (3.0, 2.0)])
def test_exchange_at_maximally_mixed_is_map_entropy(d, q, s, rng):
    k = random_channel(d, 3, rng)
    assert entropy_exchange(np.eye(d) / d, k, (q, s)) == pytest.approx(map_entropy(kraus_to_choi(k), (q, s)), abs=1e-12)


def test_joint_output_at_maximally_mixed_is_choi(rng):
    k = random_channel(3, 2, rng)
    np.testing.assert_allclose(joint_output_state(np.eye(3) / 3, k), kraus_to_choi(k).sigma, atol=1e-14)


def test_unitary_channel_has_no_exchange(rng):
    k = unitary_channel(random_unitary(3, rng))
    assert entropy_exchange(random_density(3, rng), k, (2, 1)) == 0.0


def test_pure_input_exchange_equals_output_entropy(rng):
    k = random_channel(2, 3, rng)
    rho = random_pure_density(2, rng)
    out = apply_channel(k, rho)
    assert entropy_exchange(rho, k, (1.5, 1)) == pytest.approx(unified_entropy(out, (1.5, 1)), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), params=st.sampled_from(PARAMS), d=st.sampled_from([2, 3]))
def test_triangle_relations(seed, params, d):
    rng = trial_rng(seed)
    k = random_channel(d, int(rng.integers(1, d * d + 1)), rng)
    rho = random_density(d, rng, rank=int(rng.integers(1, d + 1)))
    rep = check_lindblad_extension(rho, k, params)
    assert rep.applicable and rep.passed
    assert len(rep.margins) == 3
    assert all(m.slack >= -1e-9 for m in rep.margins)


def test_triangle_relations_outside_region_are_exploratory(rng):
    rep = check_lindblad_extension(random_density(2, rng), random_channel(2, 2, rng), (0.5, 1.0))
    assert not rep.applicable and rep.passed
    assert lindblad_region((2, 0.5)) and not lindblad_region((2, 0.4)) and not lindblad_region((1, 1))


@pytest.mark.parametrize("params", PARAMS)
def test_entangled_output_bounds(params, rng):
    k1, k2 = random_channel(2, 3, rng), random_channel(2, 2, rng)
    rep = check_entangled_output_bounds(k1, k2, params)
    assert rep.passed
    assert rep.details["factorization_residual"] < 1e-14


@pytest.mark.parametrize("params", PARAMS)
def test_identity_first_is_tight(params, rng):
    k2 = random_channel(2, 3, rng)
    rep = check_entangled_output_bounds(identity_channel(2), k2, params)
    assert rep.details["M1"] == 0.0
    assert rep.details["H_out"] == pytest.approx(rep.details["M2"], abs=1e-12)


def test_entangled_output_routes_agree(rng):
    k1, k2 = random_channel(2, 2, rng), depolarizing_channel(2, 0.4)
    np.testing.assert_allclose(entangled_output_state(k1, k2), factorized_output_state(k1, k2), atol=1e-15)
    with pytest.raises(DimensionError):
        entangled_output_state(k1, identity_channel(3))

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qse.channels import (
    PAULI,
    ChoiMatrix,
    KrausSet,
    amplitude_damping_channel,
    apply_channel,
    basis_pinching,
    channel_from_dict,
    channel_to_dict,
    choi_to_kraus,
    depolarizing_channel,
    identity_channel,
    kraus_to_choi,
    load_channel,
    maximally_entangled_state,
    mix_channels,
    phase_damping_channel,
    pinching_channel,
    random_channel,
    reconstruct_action,
    save_channel,
    standard_channel,
    tensor_channels,
    tensor_kraus,
    transform_unraveling,
    unitary_channel,
    validate_cptp,
)
from qse.errors import DimensionError, InvalidParameterError, ValidationError
from qse.sampling import random_density, random_unitary, trial_rng

from conftest import ginibre


def loop_choi(apply, d):
    """sigma[(a, m), (b, n)] = Phi(|m><n|)[a, b] / d, one matrix unit at a time."""
    sigma = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            unit = np.zeros((d, d))
            unit[m, n] = 1.0
            out = apply(unit)
            for a in range(d):
                for b in range(d):
                    sigma[a * d + m, b * d + n] = out[a, b] / d
    return sigma


def kraus_apply(ops):
    return lambda x: sum(a @ x @ a.conj().T for a in ops)


@pytest.mark.parametrize("d,rank", [(2, 1), (2, 3), (3, 2), (3, 9)])
def test_choi_matches_matrix_unit_definition(d, rank, rng):
    k = random_channel(d, rank, rng)
    np.testing.assert_allclose(kraus_to_choi(k).sigma, loop_choi(kraus_apply(k.operators), d), atol=1e-14)


def test_identity_choi_is_maximally_entangled():
    np.testing.assert_allclose(kraus_to_choi(identity_channel(3)).sigma, maximally_entangled_state(3), atol=1e-15)


def test_fully_depolarizing_qubit_choi():
    np.testing.assert_allclose(kraus_to_choi(depolarizing_channel(2, 1.0)).sigma, np.eye(4) / 4, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_depolarizing_action(d, p, rng):
    rho = random_density(d, rng)
    out = apply_channel(depolarizing_channel(d, p), rho)
    np.testing.assert_allclose(out, (1 - p) * rho + p * np.eye(d) / d, atol=1e-12)


def test_pinching_choi_and_action():
    sigma = kraus_to_choi(pinching_channel(2)).sigma
    np.testing.assert_allclose(sigma, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    k = pinching_channel(3)
    assert len(k) == 3
    for a in k:
        np.testing.assert_allclose(a @ a, a)
    rho = np.full((3, 3), 1 / 3)
    np.testing.assert_allclose(apply_channel(k, rho), np.eye(3) / 3, atol=1e-15)


def test_pinching_rejects_non_projectors():
    with pytest.raises(InvalidParameterError):
        pinching_channel(2, [np.eye(2) * 0.5, np.eye(2) * 0.5])


def test_amplitude_damping_full_decay(rng):
    out = apply_channel(amplitude_damping_channel(3, 1.0), random_density(3, rng))
    expected = np.zeros((3, 3))
    expected[0, 0] = 1
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_phase_damping_keeps_populations(rng):
    rho = random_density(3, rng)
    out = apply_channel(phase_damping_channel(3, 1.0), rho)
    np.testing.assert_allclose(out, np.diag(np.diag(rho)), atol=1e-14)
    partial = apply_channel(phase_damping_channel(2, 0.36), rho[:2, :2] / np.trace(rho[:2, :2]))
    assert abs(partial[0, 1]) == pytest.approx(0.8 * abs(rho[0, 1] / np.trace(rho[:2, :2])))


@pytest.mark.parametrize("kind,params", [
    ("identity", {}),
    ("depolarizing", {"p": 0.5}),
    ("pinching", {}),
    ("amplitude_damping", {"gamma": 0.2}),
    ("phase_damping", {"lam": 0.7}),
])
@pytest.mark.parametrize("d", [2, 3])
def test_standard_channels_are_cptp(kind, params, d):
    report = validate_cptp(kraus_to_choi(standard_channel(kind, d, **params)))
    assert report.passed
    assert report.to_dict()["pass"] is True


@pytest.mark.parametrize("kind,params", [("depolarizing", {"p": 1.5}), ("amplitude_damping", {"gamma": -0.1}),
                                         ("phase_damping", {"lam": 2}), ("nonsense", {})])
def test_standard_channel_rejects(kind, params):
    with pytest.raises(InvalidParameterError):
        standard_channel(kind, 2, **params)


def test_unitary_channel(rng):
    u = random_unitary(3, rng)
    k = standard_channel("unitary", 3, u=u)
    assert kraus_to_choi(k).rank() == 1
    with pytest.raises(InvalidParameterError):
        unitary_channel(2 * u)


def test_transpose_map_is_not_cp():
    # Choi of the transpose is the swap operator / d, with eigenvalue -1/d
    swap = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            swap[i * 2 + j, j * 2 + i] = 1
    report = validate_cptp(swap / 2, d=2)
    assert not report.completely_positive
    assert report.trace_preserving
    assert report.min_eigenvalue == pytest.approx(-0.5)


def test_non_trace_preserving_is_reported():
    sigma = np.zeros((4, 4))
    sigma[0, 0] = 1.0  # |0><0| (x) |0><0|: maps |1><1| to zero
    report = validate_cptp(sigma, d=2)
    assert report.completely_positive and not report.trace_preserving
    with pytest.raises(ValidationError):
        ChoiMatrix(sigma, 2)


def test_kraus_set_validation():
    with pytest.raises(ValidationError):
        KrausSet(np.stack([np.eye(2), np.eye(2)]))
    with pytest.raises(DimensionError):
        KrausSet(np.ones((1, 2, 3)))
    with pytest.raises(DimensionError):
        ChoiMatrix(np.eye(4) / 4, 3)
    k = KrausSet(np.eye(2))
    assert len(k) == 1 and k.d == 2
    with pytest.raises(ValueError):
        k.operators[0, 0, 0] = 2


@pytest.mark.parametrize("d,rank", [(2, 1), (2, 4), (3, 5)])
def test_choi_to_kraus_round_trip(d, rank, rng):
    choi = kraus_to_choi(random_channel(d, rank, rng))
    back = choi_to_kraus(choi)
    assert len(back) == rank
    np.testing.assert_allclose(kraus_to_choi(back).sigma, choi.sigma, atol=1e-13)


@pytest.mark.parametrize("d", [2, 3])
def test_reconstruct_action_on_arbitrary_operators(d, rng):
    k = random_channel(d, 3, rng)
    x = ginibre(d, d, rng)
    np.testing.assert_allclose(reconstruct_action(kraus_to_choi(k), x), kraus_apply(k.operators)(x), atol=1e-13)


def test_tensor_channels_matches_matrix_units(rng):
    k1, k2 = random_channel(2, 2, rng), random_channel(3, 2, rng)
    direct = loop_choi(kraus_apply(tensor_kraus(k1, k2).operators), 6)
    np.testing.assert_allclose(tensor_channels(kraus_to_choi(k1), kraus_to_choi(k2)).sigma, direct, atol=1e-14)


def test_tensor_kraus_action_on_products(rng):
    k1, k2 = random_channel(2, 3, rng), random_channel(2, 2, rng)
    r1, r2 = random_density(2, rng), random_density(2, rng)
    out = apply_channel(tensor_kraus(k1, k2), np.kron(r1, r2))
    np.testing.assert_allclose(out, np.kron(apply_channel(k1, r1), apply_channel(k2, r2)), atol=1e-14)


def test_transform_unraveling_preserves_channel(rng):
    k = random_channel(3, 3, rng)
    for size in (3, 5):
        remixed = transform_unraveling(k, random_unitary(size, rng))
        assert len(remixed) == size
        np.testing.assert_allclose(kraus_to_choi(remixed).sigma, kraus_to_choi(k).sigma, atol=1e-13)
    with pytest.raises(ValidationError):
        transform_unraveling(k, 2 * np.eye(3))
    with pytest.raises(DimensionError):
        transform_unraveling(k, np.eye(2))


def test_random_channel_rank_one_is_unitary(rng):
    k = random_channel(3, 1, rng)
    u = k.operators[0]
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
    with pytest.raises(InvalidParameterError):
        random_channel(2, 5, rng)


def test_random_channel_is_deterministic():
    a = random_channel(2, 3, seed=11).operators
    b = random_channel(2, 3, seed=11).operators
    np.testing.assert_array_equal(a, b)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), d=st.integers(2, 4), data=st.data())
def test_random_channels_are_cptp(seed, d, data):
    rank = data.draw(st.integers(1, d * d))
    choi = kraus_to_choi(random_channel(d, rank, trial_rng(seed)))
    report = validate_cptp(choi)
    assert report.passed and report.tp_deviation < 1e-12
    assert choi.rank() == rank


def test_mix_channels(rng):
    k1, k2 = random_channel(2, 2, rng), random_channel(2, 1, rng)
    mixed = mix_channels(k1, k2, 0.25)
    expected = 0.75 * kraus_to_choi(k1).sigma + 0.25 * kraus_to_choi(k2).sigma
    np.testing.assert_allclose(kraus_to_choi(mixed).sigma, expected, atol=1e-14)


def test_maximally_entangled_state():
    phi = maximally_entangled_state(2)
    np.testing.assert_allclose(phi, np.array([[1, 0, 0, 1], [0] * 4, [0] * 4, [1, 0, 0, 1]]) / 2)
    with pytest.raises(InvalidParameterError):
        maximally_entangled_state(1)


def test_json_round_trip(tmp_path, rng):
    k = random_channel(2, 3, rng)
    path = tmp_path / "ch.json"
    save_channel(k, path)
    back = load_channel(path)
    np.testing.assert_array_equal(back.operators, k.operators)
    data = json.loads(path.read_text())
    assert data["d"] == 2 and len(data["kraus"]) == 3
    choi = kraus_to_choi(k)
    back_choi = channel_from_dict(json.loads(json.dumps(channel_to_dict(choi))))
    np.testing.assert_array_equal(back_choi.sigma, choi.sigma)


def test_json_rejects_inconsistent_files():
    with pytest.raises(ValidationError):
        channel_from_dict({"d": 2})
    with pytest.raises(DimensionError):
        channel_from_dict({"d": 3, "kraus": channel_to_dict(identity_channel(2))["kraus"]})


def test_basis_pinching_in_hadamard_basis():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    out = apply_channel(basis_pinching(h), np.diag([1.0, 0.0]))
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-15)
    assert set(PAULI) == {"I", "X", "Y", "Z"}

"""Exit criteria, each run at its stated size and tolerance.

Every test prints one ``PASS``/``FAIL`` line; run ``pytest tests/test_acceptance.py -v``
to see them alongside the pytest verdicts.
"""
import math
import time

import numpy as np
import pytest

from qse import suites
from qse.channels import depolarizing_channel, kraus_to_choi, pinching_channel
from qse.exchange import entropy_exchange
from qse.mapentropy import map_entropy

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return emit


def worst(result):
    return f"checks={result.checks} violations={result.violations} max_violation={result.max_violation:.3e}"


def test_additivity_identity(report):
    start = time.perf_counter()
    res = suites.additivity_suite(ds=(2, 3), trials=(100, 25), seed=0, tol=1e-9)
    elapsed = time.perf_counter() - start
    ok = res.passed and res.checks == 125 and elapsed < 60
    assert report("1 additivity identity", ok, f"{worst(res)} runtime={elapsed:.2f}s")


def test_extremal_unraveling_minimizes_entropy(report):
    res = suites.theorem1_suite(ds=(2, 3), trials=50, remixes=100, seed=0, tol=1e-10)
    assert report("2 extremal unraveling minimal", res.passed and res.checks > 0, worst(res))


def test_input_entropy_lower_bound(report):
    res = suites.theorem2_suite(ds=(2, 3), trials=50, seed=0, tol=1e-9)
    applicable = res.summary["applicable_instances"]
    ok = res.passed and applicable > 0
    assert report("3 input entropy bounds extremal entropy", ok, f"{worst(res)} applicable={applicable}")


def test_exchange_triangle_relations(report):
    res = suites.theorem4_suite(ds=(2, 3), trials=(500, 100), seed=0, tol=1e-9)
    ok = res.passed and res.checks == 600 * 5
    assert report("4 input/output/exchange triangle relations", ok, worst(res))


def test_entangled_output_bounds(report):
    res = suites.theorem5_suite(d=2, trials=200, seed=0, tol=1e-9)
    gap = res.summary["max_identity_gap"]
    ok = res.passed and gap <= 1e-9
    assert report("5 entangled output bounds", ok, f"{worst(res)} identity_gap={gap:.3e}")


def test_continuity_bounds_sound(report):
    res = suites.fannes_suite(d=2, trials=200, seed=0, tol=1e-9)
    ok = res.passed and res.checks > 0
    # the alternative reading D = d is only recorded
    alt = suites.fannes_suite(d=2, trials=200, seed=0, tol=1e-9, space_dim=2)
    alt_violations = sum(1 for r in alt.records if r["violation"] > 1e-9)
    assert report("6 continuity bounds sound (D=d^2)", ok,
                  f"{worst(res)} valid={res.summary['valid_evaluations']}; D=d violations={alt_violations}")


def test_two_mean_identity(report):
    res = suites.two_mean_suite(ds=(2, 3), trials=50, seed=0, tol=1e-10)
    assert report("7 Frobenius distance as 2-mean", res.passed and res.checks == 100, worst(res))


def test_schatten_norm_comparison(report):
    res = suites.schatten_suite(trials=200, seed=0, tol=1e-10)
    mismatches = res.summary["equality_mismatches"]
    ok = res.passed and mismatches == 0
    assert report("8 Schatten norm comparison with equality case", ok, f"{worst(res)} equality_mismatches={mismatches}")


def test_exchange_spectral_identity(report):
    res = suites.exchange_suite(ds=(2, 3), trials=50, seed=0, tol=1e-9)
    assert report("9 exchange spectral identity", res.passed and res.checks == 200, worst(res))


def test_limit_continuity(report):
    res = suites.limits_suite(trials=50, seed=0, eps=1e-6, tol=1e-4)
    assert report("10 limit continuity", res.passed, worst(res))


def test_spot_values(report):
    choi = kraus_to_choi(depolarizing_channel(2, 1.0))
    values = {
        "depolarizing q=1": (map_entropy(choi, (1, 1)), math.log(4)),
        "depolarizing q=2,s=1": (map_entropy(choi, (2, 1)), 0.75),
        "pinching exchange |+>": (
            entropy_exchange(np.full((2, 2), 0.5), pinching_channel(2), (1, 1), cross_check=True),
            math.log(2),
        ),
    }
    errors = {k: abs(a - b) for k, (a, b) in values.items()}
    ok = all(e <= 1e-12 for e in errors.values())
    assert report("11 spot values", ok, ", ".join(f"{k} err={e:.1e}" for k, e in errors.items()))

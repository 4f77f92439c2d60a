import math

import numpy as np
import pytest

import orthosim


def test_run_roundtrip_decodes_message():
    report = orthosim.run("dsqc", n=2, copies=3, message=[1, 0, 1, 1, 0, 0], seed=7)
    assert report["aborted"] is False
    assert report["decoded_bits"] == "101100"
    assert (report["c"], report["q"], report["b"]) == (6, 12, 6)


def test_run_is_deterministic_for_a_seed():
    a = orthosim.run("qsdc", n=2, copies=2, message=[1, 1, 0, 0], basis="bell", seed=3)
    b = orthosim.run("qsdc", n=2, copies=2, message=[1, 1, 0, 0], basis="bell", seed=3)
    assert a == b


def test_experiment_interception_gets_detected():
    result = orthosim.run_experiment(
        "dsqc", n=1, copies=20, trials=200, attack="intercept_z", seed=11
    )
    assert result["detection_rate"] > 0.9


def test_efficiency_is_exact():
    assert orthosim.efficiency("dsqc", 3) == {
        "c": 3, "q": 6, "b": 3, "eta1": "1/2", "eta2": "1/3"
    }
    assert orthosim.efficiency("qsdc", 3)["eta2"] == "1/2"


def test_gram_schmidt_and_family_algebra():
    basis = orthosim.gram_schmidt([np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    ops = orthosim.hermitian_family(basis, anchor=0)
    assert orthosim.verify_orthogonal_family(ops, basis, anchor=0)
    np.testing.assert_allclose(ops[1] @ ops[1], np.eye(2), atol=1e-10)


def test_entanglement_diagnostics():
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
    assert orthosim.concurrence(np.outer(bell, bell.conj())) == pytest.approx(1.0)

    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1.0 / math.sqrt(2.0)
    assert orthosim.ckw_monogamy(ghz)["slack"] == pytest.approx(1.0)

    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    duality = orthosim.duality_tradeoff([np.eye(2), x])
    assert duality["sum_check"] == pytest.approx(1.0)
    assert duality["distinguishability"] == pytest.approx(1.0)


def test_leakage_limits():
    assert orthosim.eve_leakage("qsdc", n=2, basis="bell") == pytest.approx(0.0, abs=1e-9)
    assert orthosim.eve_leakage("dsqc", n=1) == pytest.approx(1.0)

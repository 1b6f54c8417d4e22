import json
import math

import numpy as np
import pytest

import irka_lab


def two_pole():
    return irka_lab.diagonal([-1.0, -2.0], [1.0, 1.0])


def test_transfer_and_norm():
    sys = two_pole()
    assert sys.n == 2
    assert sys.system_class() == "SSS"
    assert sys.transfer(1.0) == pytest.approx(0.5 + 1.0 / 3.0)
    assert irka_lab.h2_norm(sys) == pytest.approx(math.sqrt(17.0 / 12.0), rel=1e-13)


def test_system_from_numpy_round_trips_json():
    a = np.array([[-2.0, 1.0], [1.0, -3.0]])
    sys = irka_lab.System(a, np.ones(2), np.ones(2))
    back = irka_lab.parse_system(sys.to_json())
    np.testing.assert_array_equal(back.A, a)


def test_irka_certify_and_zeros():
    sys = two_pole()
    reduced, trace = irka_lab.irka(sys, 1, tol=1e-12)
    assert trace["converged"]
    shift = trace["final_shifts"][0][0]
    assert -reduced.A[0, 0] == pytest.approx(shift, rel=1e-9)
    cert = irka_lab.certify(sys, reduced)
    assert cert["verdict"] == "ATTRACTIVE_LOCAL_MIN"
    assert 0.0 < cert["spectral_radius"] < 1.0
    zeros = irka_lab.error_zeros(sys, reduced)
    assert zeros["rhp_count"] == 2 and zeros["lhp_count"] == 0
    err = irka_lab.h2_error(sys, reduced)
    assert err["cost_J"] == pytest.approx(0.0011522, rel=1e-4)


def test_interpolant_matches_hermite_data():
    sys = irka_lab.rc_ladder(12)
    shifts = [0.1, 1.0, 3.0]
    red = irka_lab.interpolant(sys, shifts)
    assert red.n == 3
    assert irka_lab.hermite_residual(sys, red, shifts) < 1e-10


def test_reduce_report_is_deterministic():
    text = irka_lab.random_sss(15, 4).to_json()
    first, code = irka_lab.reduce_report(text, 3, init="random", seed=2)
    second, _ = irka_lab.reduce_report(text, 3, init="random", seed=2)
    assert code == 0
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    assert first["input_digest"].startswith("sha256:")


def test_errors_carry_codes():
    with pytest.raises(irka_lab.IrkaLabError) as info:
        irka_lab.diagonal([-1.0, 2.0], [1.0, 1.0])
    assert info.value.code == "InvalidArgument"
    with pytest.raises(irka_lab.IrkaLabError) as info:
        irka_lab.parse_system('{"A": [[-1]], "b": [1, 2], "c": [1]}')
    assert info.value.code == "ParseError"
    with pytest.raises(irka_lab.IrkaLabError):
        irka_lab.irka(two_pole(), 2)

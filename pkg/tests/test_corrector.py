import csv

import numpy as np
import pytest

from nehari_shape.cases import case_field, separable_field
from nehari_shape.corrector import (
    ANALYTIC_OPTIMAL,
    analytic_optimal,
    eigenmode,
    fourier_coefficients,
    fourier_optimal,
    from_name,
    rhs_field,
    user,
    write_coefficients_csv,
    ww0_analytic,
    ww0_truncated,
    y_times_u,
)
from nehari_shape.errors import (
    ConfigError,
    DomainError,
    SingularityError,
    UnsupportedFieldError,
)
from nehari_shape.forms import ProblemSpec, inner0, q_functional
from nehari_shape.kinematics import DeformationField
from nehari_shape.shapederiv import second_order
from nehari_shape.spectral import eigenfunction

from conftest import eigen_setup

PI = np.pi


def test_rhs_example_case_ii():
    # f = x, theta = y: g = 2 u_xx y + 2 u_xy x, u = cos(pi y / 2a) sin(pi x)
    a = 1.1
    spec, rule = eigen_setup(a)
    g = rhs_field(spec, case_field("ii", a))
    x, y = 0.3, 0.4
    kx, ky = PI, PI / (2 * a)
    uxx = -kx ** 2 * np.sin(kx * x) * np.cos(ky * y)
    uxy = -kx * ky * np.cos(kx * x) * np.sin(ky * y)
    assert g.value(np.array([[x, y]]))[0] == pytest.approx(2 * uxx * y + 2 * uxy * x, rel=1e-13)


def test_rhs_requires_rectangle_eigen(le_solution):
    spec, rule = eigen_setup(1.0)
    with pytest.raises(UnsupportedFieldError):
        rhs_field(spec, DeformationField(lambda p: p, name="radial"))
    le = ProblemSpec.lane_emden(le_solution.field, le_solution.rule(), q=4)
    with pytest.raises(DomainError):
        rhs_field(le, case_field("i", 1.0))


@pytest.mark.parametrize("case", ["i", "iv", "vi"])
def test_coefficient_parity(case):
    # theta odd, so only modes even in y (k even) carry weight
    a = 1.05
    spec, rule = eigen_setup(a)
    coefs = fourier_coefficients(spec, case_field(case, a), rule, 4, 6)
    for m, k, c in coefs:
        if k % 2 == 1:
            assert abs(c) <= 1e-12
    assert max(abs(c) for _, _, c in coefs) > 1e-3


@pytest.mark.parametrize("case", ["ii", "v"])
def test_galerkin_identity(case):
    a = 1.05
    spec, rule = eigen_setup(a, panels=8)
    fld = case_field(case, a)
    w = fourier_optimal(spec, fld, rule, 6, 8).field
    for h in (eigenfunction(1, 2, a), eigenfunction(3, 4, a), w):
        assert inner0(spec, rule, w, h) == pytest.approx(-q_functional(spec, fld, rule, h),
                                                        abs=1e-9)
    ww = inner0(spec, rule, w, w)
    coefs = fourier_coefficients(spec, fld, rule, 6, 8)
    assert ww == pytest.approx(ww0_truncated(coefs, a), rel=1e-9)


def test_truncation_monotone_and_gamma_one():
    a = 1.05
    spec, rule = eigen_setup(a, panels=8)
    fld = case_field("iv", a)
    prev = -np.inf
    for M in (2, 4, 8, 12):
        corr = fourier_optimal(spec, fld, rule, M, M)
        ww = ww0_truncated(corr.coefficients, a)
        assert ww >= prev
        prev = ww
        rep = second_order(spec, fld, rule, corr)
        assert rep.gamma_star == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("case", ["iv", "v"])
def test_truncated_converges_to_analytic(case):
    a = 1.05
    spec, rule = eigen_setup(a, panels=8)
    fld = case_field(case, a)
    errs = {}
    for M in (10, 20):
        coefs = fourier_coefficients(spec, fld, rule, M, M)
        errs[M] = ww0_analytic(case, a) - ww0_truncated(coefs, a)
    assert 0 < errs[20] < 5e-4
    rate = np.log2(errs[10] / errs[20])
    assert 2.7 <= rate <= 3.3


@pytest.mark.parametrize("case", ["i", "iii", "v"])
def test_optimal_dominates_simple_correctors(case):
    a = 1.05
    spec, rule = eigen_setup(a, panels=8)
    fld = case_field(case, a)
    best = second_order(spec, fld, rule, fourier_optimal(spec, fld, rule, 4, 6)).second_order
    for corr in (y_times_u(spec), eigenmode(1, 2, a)):
        assert best <= second_order(spec, fld, rule, corr).second_order + 1e-12


def test_analytic_examples_and_errors():
    # a = 1: r = 1, cot(pi/2) = 0
    assert ww0_analytic("iv", 1.0) == pytest.approx(PI ** 3 / 64 * 4 * PI, rel=1e-12)
    assert ww0_analytic("v", 1.0) == pytest.approx(PI ** 2 / 64 * (11 + 2 * PI ** 2), rel=1e-12)
    with pytest.raises(DomainError):
        ww0_analytic("iv", 0.95)
    with pytest.raises(DomainError):
        ww0_analytic("ii", 1.0)
    # the cot argument tends to pi as a grows; sin(arg) ~ 3 pi / (8 a^2)
    with pytest.raises(SingularityError):
        ww0_analytic("iv", 1e5)
    assert np.isfinite(ww0_analytic("iv", 1e3))
    corr = analytic_optimal("iv", 1.02)
    assert corr.kind == ANALYTIC_OPTIMAL and corr.field is None
    with pytest.raises(UnsupportedFieldError):
        corr.scaled(2.0)


def test_analytic_corrector_value():
    a = 1.02
    spec, rule = eigen_setup(a, panels=8)
    fld = case_field("iv", a)
    ana = second_order(spec, fld, rule, analytic_optimal("iv", a))
    trunc = second_order(spec, fld, rule, fourier_optimal(spec, fld, rule, 20, 20))
    assert ana.second_order <= trunc.second_order
    assert ana.second_order == pytest.approx(trunc.second_order, abs=1e-3)


def test_coefficients_csv(tmp_path):
    spec, rule = eigen_setup(1.0)
    coefs = fourier_coefficients(spec, case_field("iv", 1.0), rule, 2, 3)
    path = tmp_path / "coef.csv"
    write_coefficients_csv(coefs, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["m", "k", "v_mk"]
    assert len(rows) == 1 + 5
    assert float(rows[1][2]) == pytest.approx(coefs[0][2], rel=1e-12)


def test_from_name():
    a = 1.03
    spec, rule = eigen_setup(a)
    fld = case_field("iv", a)
    assert from_name("yu", spec, fld, rule).label == "yu"
    assert from_name("phi12", spec, fld, rule).label == "phi_1,2"
    assert from_name("phi_1,2", spec, fld, rule).label == "phi_1,2"
    assert from_name("w46", spec, fld, rule).label == "w_4,6"
    assert from_name("w_4,6", spec, fld, rule).label == "w_4,6"
    assert from_name("w20x20", spec, fld, rule).label == "w_20,20"
    assert from_name("optimal_analytic", spec, fld, rule, case="iv").analytic_ww > 0
    with pytest.raises(ConfigError):
        from_name("optimal_analytic", spec, fld, rule)
    with pytest.raises(ConfigError):
        from_name("banana", spec, fld, rule)
    with pytest.raises(DomainError):
        fourier_coefficients(spec, fld, rule, 0, 3)
    assert user(eigenfunction(2, 2, a), "mine").label == "mine"

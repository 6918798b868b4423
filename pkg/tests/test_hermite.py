import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial.hermite import hermgauss

from gshermite import (HermiteIndex, ShapeError, deriv_coefficients, gauss_hermite,
                       hermite_deriv, hermite_eval, hermite_table, tensor_eval)

PI_M14 = math.pi ** -0.25


class TestEval:
    def test_base_values(self):
        assert hermite_eval(0, 0.0) == pytest.approx(PI_M14, rel=1e-15)
        assert hermite_eval(1, 0.0) == 0.0

    def test_frozen_oracle(self, frozen):
        for row in frozen["hermite_values"]:
            got = hermite_eval(row["n"], row["x"])
            ref = row["value"]
            if abs(ref) < 1e-300:
                assert abs(got) < 1e-290
            else:
                tol = 1e-12 if row["n"] <= 12 else 1e-10
                assert got == pytest.approx(ref, rel=tol, abs=1e-300), row

    def test_large_n_underflow_is_zero(self):
        assert hermite_eval(5, 60.0) == 0.0

    def test_large_n_near_turning_point(self):
        n = 100_000
        x = math.sqrt(2 * n + 1) - 0.5
        v = hermite_eval(n, x)
        assert math.isfinite(v) and 0 < abs(v) < 0.82

    def test_limit(self):
        with pytest.raises(ValueError):
            hermite_eval(100_001, 0.0)

    def test_table_matches_eval(self):
        x = np.linspace(-6, 6, 13)
        tab = hermite_table(30, x)
        for n in (0, 7, 30):
            assert np.allclose(tab[n], hermite_eval(n, x), rtol=0, atol=1e-15)

    def test_uniform_bound(self):
        x = np.linspace(-40, 40, 8001)
        tab = hermite_table(600, x)
        assert np.max(np.abs(tab[1:])) <= 0.9

    def test_parity(self):
        x = np.linspace(0.01, 9, 200)
        tab_p, tab_m = hermite_table(80, x), hermite_table(80, -x)
        signs = (-1.0) ** np.arange(81)
        assert np.array_equal(tab_m, signs[:, None] * tab_p)


class TestDeriv:
    def test_first_derivative_example(self):
        expect = math.sqrt(0.5) * PI_M14 - hermite_eval(2, 0.0)
        assert hermite_deriv(1, 0.0, 1) == pytest.approx(expect, rel=1e-14)
        h = 1e-5
        fd = (hermite_eval(1, h) - hermite_eval(1, -h)) / (2 * h)
        assert abs(fd - expect) < 1e-8

    def test_second_derivative_fd(self):
        h = 1e-4
        x = 0.7
        fd = (hermite_eval(5, x + h) - 2 * hermite_eval(5, x) + hermite_eval(5, x - h)) / h ** 2
        assert abs(hermite_deriv(5, x, 2) - fd) < 1e-6

    def test_zero_order(self):
        assert hermite_deriv(0, 0.4, 0) == hermite_eval(0, 0.4)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 60), st.floats(-8, 8))
    def test_first_derivative_fd(self, n, x):
        h = 1e-5
        fd = (hermite_eval(n, x + h) - hermite_eval(n, x - h)) / (2 * h)
        assert abs(hermite_deriv(n, x, 1) - fd) < 1e-6

    def test_fanout(self):
        c = deriv_coefficients(10, 4)
        assert set(c) <= set(range(-4, 5)) and len(c) <= 5

    def test_below_zero_index_is_dropped(self):
        assert set(deriv_coefficients(0, 3)) == {1, 3}

    def test_alpha_cap(self):
        with pytest.raises(ValueError):
            deriv_coefficients(3, 31)


class TestQuadrature:
    def test_two_point(self):
        r = gauss_hermite(2)
        assert np.allclose(r.nodes, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
        assert np.allclose(r.weights, [math.sqrt(math.pi) / 2] * 2, rtol=1e-14)

    @pytest.mark.parametrize("order", [5, 40, 160, 700, 1500, 2000])
    def test_weight_sum(self, order):
        r = gauss_hermite(order)
        assert math.fsum(r.weights) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
        assert np.all(np.diff(r.nodes) > 0)
        assert np.array_equal(r.nodes, -r.nodes[::-1])
        assert np.all(np.isfinite(r.log_weights))

    @pytest.mark.parametrize("key", ["gauss_hermite_10", "gauss_hermite_31"])
    def test_frozen_rule(self, frozen, key):
        ref = frozen[key]
        r = gauss_hermite(ref["order"])
        assert np.allclose(r.nodes, ref["nodes"], rtol=0, atol=1e-14)
        assert np.allclose(r.log_weights, ref["log_weights"], rtol=0, atol=1e-13)

    def test_against_numpy(self):
        x, w = hermgauss(120)
        r = gauss_hermite(120)
        assert np.allclose(r.nodes, x, atol=1e-13)
        assert np.allclose(r.weights, w, rtol=1e-12, atol=0)

    def test_monomial_exactness(self):
        N = 12
        r = gauss_hermite(N)
        for k in range(0, 2 * N):
            exact = 0.0 if k % 2 else math.gamma((k + 1) / 2)
            got = math.fsum(r.weights * r.nodes ** k)
            assert got == pytest.approx(exact, rel=1e-10, abs=1e-12)

    def test_orthonormality_examples(self):
        r20 = gauss_hermite(20)
        assert r20.integrate(hermite_eval(3, r20.nodes) ** 2) == pytest.approx(1, abs=1e-12)
        r60 = gauss_hermite(60)
        val = r60.integrate(hermite_eval(40, r60.nodes) * hermite_eval(38, r60.nodes))
        assert abs(val) < 1e-10

    def test_range(self):
        for bad in (1, 2001):
            with pytest.raises(ValueError):
                gauss_hermite(bad)

    def test_csv(self, tmp_path):
        r = gauss_hermite(4)
        path = tmp_path / "rule.csv"
        r.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "node,log_weight" and len(lines) == 5
        assert float(lines[1].split(",")[0]) == r.nodes[0]


class TestTensor:
    def test_examples(self):
        assert tensor_eval((0, 0), (0, 0)) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
        assert tensor_eval(HermiteIndex((1, 0)), (0.0, 0.37)) == 0.0
        assert tensor_eval((2, 3), (0.5, -0.5)) == hermite_eval(2, 0.5) * hermite_eval(3, -0.5)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            tensor_eval((1, 2), (0.1,))

    def test_index_validation(self):
        with pytest.raises(ValueError):
            HermiteIndex((1, -1))
        with pytest.raises(ValueError):
            HermiteIndex(())

import math

import numpy as np
import pytest

from gshermite import (HeadroomError, HermiteRep, WeightSequence, apply_expansion,
                       build_expansion, fit_normalization, hermite_envelope_check,
                       verify_bound_26, verify_bound_52)
from gshermite.opcalc import OperatorExpansion


def frozen_level(frozen, N):
    raw = frozen["oscillator_expansions"][str(N)]
    return {tuple(int(v) for v in k.split(",")): c for k, c in raw.items()}


class TestBuild:
    def test_base_case(self):
        # base case: expansion of 2(1 + x^2 - d^2)
        assert build_expansion(1).coeffs == {(0, 0): 2, (2, 0): 2, (0, 2): -2}

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_symbolic_oracle(self, frozen, N):
        assert build_expansion(N).coeffs == frozen_level(frozen, N)

    def test_n2_examples(self):
        c = build_expansion(2).coeffs
        assert c[(4, 0)] == 4 and c[(0, 4)] == 4 and c[(2, 2)] == -8
        assert c[(1, 1)] == -16

    @pytest.mark.parametrize("N", [1, 5, 17, 40, 64])
    def test_support_and_parity(self, N):
        e = build_expansion(N)
        assert all(p + q <= 2 * N and (p + q) % 2 == 0 for p, q in e.coeffs)
        assert e.coeffs[(2 * N, 0)] == 2 ** N
        assert all(isinstance(v, int) for v in e.coeffs.values())

    @pytest.mark.parametrize("N", range(1, 13))
    def test_float_build_within_one_ulp(self, N):
        exact, approx = build_expansion(N), build_expansion(N, exact=False)
        assert set(exact.coeffs) == set(approx.coeffs)
        for k, v in exact.coeffs.items():
            f = float(v)
            assert abs(approx.coeffs[k] - f) <= np.spacing(abs(f))

    def test_range(self):
        for bad in (0, 65):
            with pytest.raises(ValueError):
                build_expansion(bad)

    def test_csv_round_trip(self, tmp_path):
        e = build_expansion(6)
        path = tmp_path / "exp.csv"
        e.to_csv(path)
        assert path.read_text().splitlines()[0] == "N,p,q,c"
        assert OperatorExpansion.from_csv(path).coeffs == e.coeffs


class TestApply:
    def test_kappa(self):
        assert fit_normalization() == 4

    def test_examples(self):
        out = apply_expansion(build_expansion(1), HermiteRep.unit(3, 10))
        assert np.allclose(out.coeffs, 16 * HermiteRep.unit(3, 10).coeffs, atol=1e-12)
        out = apply_expansion(build_expansion(2), HermiteRep.unit(0, 10))
        assert np.allclose(out.coeffs, 16 * HermiteRep.unit(0, 10).coeffs, atol=1e-12)
        assert not np.any(apply_expansion(build_expansion(1), HermiteRep.zeros(6)).coeffs)

    def test_eigen_action(self):
        kappa = fit_normalization()
        for N in range(1, 6):
            e = build_expansion(N)
            for n in range(21):
                out = apply_expansion(e, HermiteRep.unit(n, n + 2 * N + 3)).coeffs
                lam = kappa ** N * (n + 1) ** N
                expect = np.zeros_like(out)
                expect[n] = lam
                assert np.max(np.abs(out - expect)) <= 1e-8 * lam

    def test_headroom(self):
        c = np.zeros(10)
        c[8] = 1.0
        with pytest.raises(HeadroomError):
            apply_expansion(build_expansion(1), HermiteRep(c))
        with pytest.raises(HeadroomError):
            apply_expansion(build_expansion(5), HermiteRep.unit(0, 10))

    def test_provenance(self):
        out = apply_expansion(build_expansion(1), HermiteRep.unit(0, 6))
        assert out.provenance == "operator-output" and out.truncation_loss == 0


class TestBounds:
    def test_bound_26_n1(self):
        r = verify_bound_26(1)
        assert r["entries"] == 3 and not r["violations"]
        # |2| <= 26 * 2 at (0,0); |2| <= 26 * 2^0 at (2,0); |-2| <= 26 * 0^0 at (0,2)
        assert r["min_log_slack"] == pytest.approx(math.log(13))
        assert r["max_log_slack"] == pytest.approx(math.log(26))

    def test_bound_26_up_to_8(self):
        for N in range(1, 9):
            assert not verify_bound_26(N)["violations"]

    def test_bound_26_gross_example(self):
        c = build_expansion(3).coeffs[(6, 0)]
        assert abs(c) == 8 <= 26 ** 3 * 6 ** 3

    def test_bound_52_half(self):
        seq = WeightSequence.gevrey_log(0.5, 0)
        r1 = verify_bound_52(1, seq)
        assert r1["MN2"]["holds"] and r1["M2N"]["holds"]
        for N in range(1, 9):
            assert verify_bound_52(N, seq)["M2N"]["holds"]

    def test_bound_52_slack_grows(self):
        seq = WeightSequence.gevrey_log(1, 0)
        slacks = [verify_bound_52(N, seq)["MN2"]["min_log_slack"] for N in range(1, 9)]
        assert all(b > a for a, b in zip(slacks, slacks[1:]))
        assert all(verify_bound_52(N, seq)["MN2"]["holds"] for N in range(1, 9))

    def test_range(self):
        with pytest.raises(ValueError):
            verify_bound_26(21)


class TestEnvelope:
    def test_zero_order_bound(self):
        seq = WeightSequence.gevrey_log(0.5, 0)
        r = hermite_envelope_check(seq, 1e-3, 2.0, 0, 0, 200, n_values=[0, 1, 10, 50, 200])
        assert max(r["C_by_n"].values()) <= 0.9

    def test_small_m_bounded(self):
        seq = WeightSequence.gevrey_log(0.5, 0)
        r = hermite_envelope_check(seq, 1 / 32, 2.0, 2, 2, 400,
                                   n_values=[1, 2, 4, 8, 16, 32, 50, 64, 128, 256, 400])
        assert r["bounded"]
        assert r["C"] < 1

    def test_large_m_reports_trend(self):
        seq = WeightSequence.gevrey_log(1, 0)
        r = hermite_envelope_check(seq, 8.0, 2.0, 4, 4, 200, n_values=[1, 25, 50, 100, 200])
        assert set(r) >= {"C", "bounded", "dyadic_trend", "C_running"}
        running = [r["C_running"][n] for n in sorted(r["C_running"])]
        assert running == sorted(running)

    def test_preconditions(self):
        seq = WeightSequence.gevrey_log(0.5, 0)
        with pytest.raises(ValueError):
            hermite_envelope_check(seq, 0.1, 2.0, 11, 0, 10)
        with pytest.raises(ValueError):
            hermite_envelope_check(seq, 0.1, 2.0, 0, 0, 401)

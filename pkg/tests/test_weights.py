import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gshermite import (AssociatedFunction, CapError, Condition, SequenceRangeError,
                       WeightSequence, assoc_asymptotic_check, assoc_eval, check_condition,
                       eval_Mp)


def brute_log(seq, rho, pmax):
    p = np.arange(pmax + 1)
    return float(np.max(p * math.log(rho) - seq.log_Mp(p)))


class TestEvalMp:
    def test_small_values(self):
        assert eval_Mp(WeightSequence.gevrey_log(1, 0), 3) == pytest.approx(27, rel=1e-15)
        assert eval_Mp(WeightSequence.gevrey_log(0.5, 0), 4) == pytest.approx(16, rel=1e-15)

    def test_log_factor(self):
        v = eval_Mp(WeightSequence.gevrey_log(1, 1), 10)
        assert v == pytest.approx(10.0 ** 10 * math.log(10) ** 10, rel=1e-13)

    def test_first_terms_are_one(self):
        seq = WeightSequence.gevrey_log(2, 3)
        assert eval_Mp(seq, 0) == 1.0 and eval_Mp(seq, 1) == 1.0

    def test_table_range(self):
        seq = WeightSequence.table([1, 2, 5])
        assert eval_Mp(seq, 2) == 5
        with pytest.raises(SequenceRangeError):
            eval_Mp(seq, 3)

    def test_table_requires_unit_start(self):
        with pytest.raises(ValueError):
            WeightSequence.table([2, 3])
        with pytest.raises(ValueError):
            WeightSequence.table([1, 0])

    def test_json_round_trip(self):
        for seq in (WeightSequence.gevrey_log(0.5, 1.0), WeightSequence.table([1, 1.5, 4.0])):
            back = WeightSequence.from_json(seq.to_json())
            assert back.to_dict() == seq.to_dict()
        d = WeightSequence.gevrey_log(0.5, 1.0).to_dict()
        assert d == {"kind": "gevrey_log", "s": 0.5, "t": 1.0}


class TestConditions:
    def test_m1_gevrey(self):
        assert check_condition(WeightSequence.gevrey_log(1, 0), "M1", 100).verdict == "holds_up_to_pmax"

    def test_m1_fails_with_witness(self):
        seq = WeightSequence.table([1, 1, 10, 11, 200, 5000])
        c = check_condition(seq, Condition.M1, 4)
        assert c.verdict == "fails" and c.witness is not None
        p = c.witness
        lm = seq.log_Mp
        assert 2 * lm(p) > lm(p - 1) + lm(p + 1)

    def test_m2_constants_certify(self):
        seq = WeightSequence.gevrey_log(0.5, 0)
        c = check_condition(seq, "M2", 200)
        assert c.verdict == "holds_up_to_pmax"
        H, A = c.constants["H"], c.constants["A"]
        lm = seq.log_Mp
        for p in range(0, 201):
            best = min(lm(q) + lm(p - q) for q in range(p + 1))
            assert lm(p) <= math.log(A) + p * math.log(H) + best + 1e-9

    def test_m3dprime_half(self):
        c = check_condition(WeightSequence.gevrey_log(0.5, 0), "M3dprime", 200)
        assert c.verdict == "holds_up_to_pmax"
        assert c.constants["L"] == 1.0 and c.constants["C"] == pytest.approx(1.0)

    def test_m3tprime_with_log_factor(self):
        c = check_condition(WeightSequence.gevrey_log(0.5, 1), "M3tprime", 200)
        assert c.verdict == "holds_up_to_pmax"

    def test_m3tprime_without_log_factor(self):
        assert check_condition(WeightSequence.gevrey_log(0.5, 0), "M3tprime", 200).verdict == "fails"

    def test_m3prime_half_diverges(self):
        c = check_condition(WeightSequence.gevrey_log(0.5, 0), "M3prime", 10_000)
        assert c.verdict == "fails" and c.details["trend"] == "diverge"
        assert c.witness is not None

    def test_m3prime_above_one_converges(self):
        c = check_condition(WeightSequence.gevrey_log(2, 0), "M3prime", 2000)
        assert c.details["trend"] == "converge"

    def test_pmax_precondition(self):
        with pytest.raises(ValueError):
            check_condition(WeightSequence.gevrey_log(1, 0), "M1", 3)

    def test_certificate_json(self):
        c = check_condition(WeightSequence.gevrey_log(0.5, 0), "M2", 50)
        d = c.to_dict()
        assert d["condition"] == "M2" and d["p_max"] == 50 and "H" in d["constants"]


class TestAssociatedFunction:
    def test_rho_one_is_zero(self):
        assert assoc_eval(AssociatedFunction(WeightSequence.gevrey_log(1, 0)), 1.0) == (0.0, 0)

    def test_e_squared(self):
        val, arg = assoc_eval(AssociatedFunction(WeightSequence.gevrey_log(1, 0)), math.e ** 2)
        assert abs(val - math.e) < 0.1 and abs(arg - math.e) <= 1

    def test_half_at_ten(self):
        val, _ = assoc_eval(AssociatedFunction(WeightSequence.gevrey_log(0.5, 0)), 10.0)
        assert abs(val - 100 / (2 * math.e)) < 1

    def test_frozen_bruteforce(self, frozen):
        for case in frozen["assoc_bruteforce"]:
            af = AssociatedFunction(WeightSequence.gevrey_log(case["s"], case["t"]))
            val, arg = af.evaluate(case["rho"])
            assert val == pytest.approx(case["M"], abs=1e-12 * max(1, case["M"]))
            assert arg == case["maximizer"]

    def test_negative_rho(self):
        with pytest.raises(ValueError):
            AssociatedFunction(WeightSequence.gevrey_log(1, 0)).evaluate(-1.0)

    def test_cap_error(self):
        af = AssociatedFunction(WeightSequence.gevrey_log(0.5, 0), hard_cap=1000)
        with pytest.raises(CapError):
            af.evaluate(1000.0)

    def test_table_sequence(self):
        seq = WeightSequence.table([1, 1, 2, 6, 24, 120])
        af = AssociatedFunction(seq)
        assert af(3.0) == pytest.approx(brute_log(seq, 3.0, 5))

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.01, 300.0), st.floats(0.01, 300.0))
    def test_monotone_value_and_maximizer(self, r1, r2):
        af = AssociatedFunction(WeightSequence.gevrey_log(0.5, 1))
        lo, hi = sorted((r1, r2))
        (v1, p1), (v2, p2) = af.evaluate(lo), af.evaluate(hi)
        assert v1 <= v2 + 1e-12 and p1 <= p2

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-6, 1.0))
    def test_zero_below_one(self, rho):
        assert AssociatedFunction(WeightSequence.gevrey_log(1, 0))(rho) == 0.0

    def test_concurrent_use(self):
        af = AssociatedFunction(WeightSequence.gevrey_log(1, 0))
        rhos = np.linspace(1, 500, 200)
        expect = [brute_log(af.seq, r, 2000) for r in rhos]
        results = {}

        def work(k):
            results[k] = [af(r) for r in rhos]

        threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for k in range(4):
            assert np.allclose(results[k], expect, rtol=0, atol=1e-9)


class TestAsymptotics:
    def test_s_one(self):
        af = AssociatedFunction(WeightSequence.gevrey_log(1, 0))
        r = assoc_asymptotic_check(af, 1, 0, [1e2, 1e4, 1e6])
        assert abs(r["rows"][-1]["ratio"] - 1) < 0.15

    def test_s_half(self):
        af = AssociatedFunction(WeightSequence.gevrey_log(0.5, 0))
        r = assoc_asymptotic_check(af, 0.5, 0, [1e3])
        assert abs(r["rows"][-1]["ratio"] - 1) < 0.15

    def test_log_correction(self):
        af = AssociatedFunction(WeightSequence.gevrey_log(1, 1))
        r = assoc_asymptotic_check(af, 1, 1, [1e2, 1e4, 1e6])
        assert abs(r["rows"][-1]["ratio"] - 1) < 0.3

    def test_grid_precondition(self):
        with pytest.raises(ValueError):
            assoc_asymptotic_check(AssociatedFunction(WeightSequence.gevrey_log(1, 0)), 1, 0, [10])

"""Tests for truncated, cancellation-aware series summation."""
import math
import threading

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdcsqueeze.errors import PrecisionError, TruncationError, ValidationError
from pdcsqueeze.summation import (
    FLOAT_CONTEXT,
    PRECISION_ENV,
    NeumaierSum,
    TruncationPolicy,
    mp_context,
    power_series_terms,
    sum_series,
)


def exp_series(x):
    return power_series_terms(lambda n, ctx: ctx.mpf(1), x)


class TestNeumaierSum:
    def test_recovers_small_terms_lost_by_naive_sum(self):
        """1 + 1e100 + 1 - 1e100 is 2, naive left-to-right summation gives 0"""
        acc = NeumaierSum()
        for v in (1.0, 1e100, 1.0, -1e100):
            acc.add(v)
        assert acc.value == 2.0

    def test_matches_fsum(self):
        values = [0.1 * (-1) ** k * k for k in range(1000)]
        acc = NeumaierSum()
        for v in values:
            acc.add(v)
        assert acc.value == pytest.approx(math.fsum(values), rel=1e-15, abs=1e-12)


class TestTruncationPolicy:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv(PRECISION_ENV, raising=False)
        pol = TruncationPolicy()
        assert pol.rel_tol == 1e-12
        assert pol.max_terms == 400
        assert pol.auto_precision

    def test_auto_digits(self, monkeypatch):
        monkeypatch.delenv(PRECISION_ENV, raising=False)
        assert TruncationPolicy().digits_for(30) == 20 + math.ceil(30 * math.log10(math.e))

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(PRECISION_ENV, "60")
        pol = TruncationPolicy()
        assert pol.precision_digits == 60
        assert not pol.auto_precision

    def test_env_garbage(self, monkeypatch):
        monkeypatch.setenv(PRECISION_ENV, "lots")
        with pytest.raises(ValidationError, match=PRECISION_ENV):
            TruncationPolicy()

    @pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"rel_tol": 1.0}, {"max_terms": 9},
                                        {"precision_digits": 10}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            TruncationPolicy(**kwargs)


class TestSumSeries:
    @pytest.mark.parametrize("x", [0.0, 0.5, -1.0, 5.0, -5.0, -15.0, -30.0, 30.0])
    def test_exponential(self, x):
        s = sum_series(exp_series(x), TruncationPolicy(), scale=x)
        assert s.value == pytest.approx(math.exp(x), rel=1e-12)
        assert s.est_rel_err < 1e-10

    def test_minimum_terms(self):
        s = sum_series(exp_series(0.0), TruncationPolicy(), scale=0.0)
        assert s.terms >= 10

    def test_cancellation_escalates_to_extended_precision(self):
        s = sum_series(exp_series(-30.0), TruncationPolicy(), scale=30.0)
        assert s.digits > 15

    def test_benign_series_stays_in_floats(self):
        s = sum_series(exp_series(3.0), TruncationPolicy(), scale=3.0)
        assert s.digits == 15

    def test_fixed_budget_too_small(self):
        with pytest.raises(PrecisionError):
            sum_series(exp_series(-30.0), TruncationPolicy(precision_digits=16), scale=30.0)

    def test_max_terms(self):
        with pytest.raises(TruncationError):
            sum_series(exp_series(20.0), TruncationPolicy(max_terms=10), scale=0.0)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=-25, max_value=25))
    def test_exponential_property(self, x):
        s = sum_series(exp_series(x), TruncationPolicy(), scale=x)
        assert s.value == pytest.approx(float(mpmath.exp(x)), rel=1e-11)


class TestContexts:
    def test_float_context(self):
        assert FLOAT_CONTEXT.mpf(2) == 2.0
        assert FLOAT_CONTEXT.sqrt(4.0) == 2.0

    def test_contexts_are_thread_private(self):
        seen = {}

        def grab(key):
            seen[key] = mp_context(40)

        threads = [threading.Thread(target=grab, args=(k,)) for k in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert seen[0] is not seen[1]
        assert seen[0].dps == 40
        assert mp_context(40) is mp_context(40)

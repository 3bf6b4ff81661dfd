import math

import numpy as np
import pytest

from zerodist.families import binomial_pow, lehmer, littlewood, roots_of_unity, shrunk_power
from zerodist.measures import (
    H_of,
    h_of,
    mahler,
    measure_report,
    script_M,
    theorem1_identity_residual,
)
from zerodist.poly import Polynomial, from_roots
from zerodist.rootfind import find_roots, roots_from_known

from conftest import random_mixed_poly, rng

LOG_PLUS_CIRCLE_CONSTANT = 0.3230659472194505


def unit_rootset(n):
    return roots_from_known(np.exp(2j * np.pi * np.arange(n) / n))


class TestHOf:
    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_unit_circle_family(self, n):
        res = h_of(roots_of_unity(n), unit_rootset(n))
        assert res.real == pytest.approx(LOG_PLUS_CIRCLE_CONSTANT,
                                         abs=1e-8 + res.error_estimate)

    @pytest.mark.parametrize("n", [2, 6, 12])
    def test_binomial_scales_linearly(self, n):
        res = h_of(binomial_pow(n), roots_from_known([1.0] * n))
        assert res.real == pytest.approx(n * LOG_PLUS_CIRCLE_CONSTANT,
                                         abs=1e-7 + res.error_estimate)

    def test_zero_constant_rejected(self):
        p = Polynomial([0, 0, 1])
        with pytest.raises(ValueError, match="deflate"):
            h_of(p, roots_from_known([0.0, 0.0]))

    def test_nonnegative(self):
        gen = rng(201)
        for _ in range(5):
            _, roots = random_mixed_poly(gen, 10)
            p = from_roots(roots)
            assert h_of(p, find_roots(p)).real >= 0.0


class TestHBig:
    @pytest.mark.parametrize("n", [1, 5, 11, 20])
    def test_binomial_peak(self, n):
        assert H_of(binomial_pow(n)) == pytest.approx(2.0 ** n, rel=1e-9)

    @pytest.mark.parametrize("c", [0.1, 0.5, 0.9])
    def test_shrunk_power(self, c):
        # max over the circle of |z^N - c| is 1 + c, scaled by sqrt(c)
        assert H_of(shrunk_power(6, c)) == pytest.approx((1 + c) / math.sqrt(c), rel=1e-9)

    def test_z2_minus_1(self):
        assert H_of(Polynomial([-1, 0, 1])) == pytest.approx(2.0, rel=1e-12)

    def test_at_least_one(self):
        gen = rng(203)
        for _ in range(10):
            _, roots = random_mixed_poly(gen, 8)
            assert H_of(from_roots(roots)) >= 1.0

    def test_zero_constant_rejected(self):
        with pytest.raises(ValueError):
            H_of(Polynomial([0, 1, 1]))


class TestScriptM:
    def test_unit_circle_zero(self):
        # |exp(i theta)| lands within one ulp of 1, so the log sum is ~1e-16
        assert abs(script_M(unit_rootset(6))) <= 1e-14

    def test_shrunk_power(self):
        r = find_roots(shrunk_power(8, 0.5 ** 8))
        assert script_M(r) == pytest.approx(8 * math.log(2.0), rel=1e-10)

    def test_lehmer_reciprocal_pairing(self):
        r = find_roots(lehmer())
        big = max(e.rho for e in r.entries)
        assert script_M(r) == pytest.approx(2 * math.log(big), abs=1e-9)

    def test_zero_modulus_rejected(self):
        with pytest.raises(ValueError):
            script_M(roots_from_known([0.0, 1.0]))


class TestMahler:
    def test_lehmer_value(self):
        r = find_roots(lehmer())
        assert mahler(r, 1.0) == pytest.approx(1.17628, abs=5e-5)

    def test_unit_circle_one(self):
        assert mahler(unit_rootset(9), 1.0) == 1.0

    def test_lead_factor(self):
        # 3z - 6 has the single root 2
        r = find_roots(Polynomial([-6, 3]))
        assert mahler(r, 3.0) == pytest.approx(6.0, rel=1e-12)

    def test_bad_lead(self):
        with pytest.raises(ValueError):
            mahler(unit_rootset(2), 0.0)


class TestTheorem1Identity:
    def test_roots_of_unity(self):
        assert theorem1_identity_residual(roots_of_unity(7), unit_rootset(7)) <= 1e-8

    def test_shrunk_power_both_sides(self):
        p = shrunk_power(6, 0.5 ** 6)
        r = find_roots(p)
        assert script_M(r) == pytest.approx(6 * math.log(2), rel=1e-9)
        assert theorem1_identity_residual(p, r) <= 1e-7

    def test_random_mixed(self):
        gen = rng(207)
        for _ in range(8):
            n = int(gen.integers(3, 31))
            _, roots = random_mixed_poly(gen, n)
            p = from_roots(roots)
            assert theorem1_identity_residual(p, find_roots(p)) <= 1e-7


class TestMeasureReport:
    def test_fields_consistent(self):
        gen = rng(211)
        _, roots = random_mixed_poly(gen, 14)
        p = from_roots(roots)
        r = find_roots(p)
        rep = measure_report(p, r)
        assert rep.h >= 0
        assert rep.H >= 1
        assert rep.log_script_M >= 0
        # radial-spread bound: log script_M <= 2h
        assert rep.log_script_M <= 2 * rep.h + 1e-7
        # h <= log H
        assert rep.h <= math.log(rep.H) + 2e-6
        # script_M consistency: log script_M = 2 log mahler - log|a_0| (monic)
        a0 = abs((p.coeffs / p.coeffs[-1])[0])
        assert rep.log_script_M == pytest.approx(
            2 * rep.log_mahler - math.log(a0), abs=1e-8)

    def test_littlewood_paper_style_bounds(self):
        # +-1 coefficients: H <= N+1 and script_M <= (N+1)^2
        for seed in (1, 2, 3):
            p = littlewood(60, seed)
            r = find_roots(p)
            n = p.degree
            assert H_of(p) <= n + 1 + 1e-9
            assert script_M(r) <= 2 * math.log(n + 1.0) + 1e-7

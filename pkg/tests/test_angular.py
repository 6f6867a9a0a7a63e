"""Angular-momentum algebra against an independent sympy oracle."""

import itertools
import math

import numpy as np
import pytest
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as sympy_cg
from sympy.physics.wigner import wigner_6j as sympy_6j

from singleatom import angular
from singleatom.constants import angular_frequency


def sy_cg(tj1, tm1, tj2, tm2, tJ, tM):
    return float(sympy_cg(Rational(tj1, 2), Rational(tj2, 2), Rational(tJ, 2),
                          Rational(tm1, 2), Rational(tm2, 2), Rational(tM, 2)))


def sy_6j(ts):
    try:
        return float(sympy_6j(*[Rational(t, 2) for t in ts]))
    except ValueError:
        return 0.0


class TestClebschGordan:
    def test_spot_values(self):
        assert angular.clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(
            1 / math.sqrt(2), abs=1e-15)
        assert angular.clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(
            math.sqrt(2 / 3), abs=1e-15)

    def test_m_selection_rule(self):
        assert angular.clebsch_gordan(1, 1, 1, 1, 1, 1) == 0.0

    def test_triangle_violation(self):
        assert angular.clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            angular.clebsch_gordan(0.3, 0, 1, 0, 1, 0)
        with pytest.raises(ValueError):
            angular.clebsch_gordan(-1, 0, 1, 0, 1, 0)
        with pytest.raises(ValueError):
            angular.clebsch_gordan(1, 2, 1, 0, 2, 2)  # |m| > j

    def test_oracle_equivalence_small(self):
        for tj1, tj2, tJ in itertools.product(range(6), repeat=3):
            for tm1 in range(-tj1, tj1 + 1, 2):
                for tm2 in range(-tj2, tj2 + 1, 2):
                    tM = tm1 + tm2
                    if abs(tM) > tJ:
                        continue
                    mine = angular.clebsch_gordan(
                        tj1 / 2, tm1 / 2, tj2 / 2, tm2 / 2, tJ / 2, tM / 2)
                    assert mine == pytest.approx(
                        sy_cg(tj1, tm1, tj2, tm2, tJ, tM), abs=1e-12)

    def test_orthogonality(self):
        # sum over (m1, m2) of CG(J, M) * CG(J', M') = delta_JJ' delta_MM'
        tj1, tj2 = 3, 4
        for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
            for tJp in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
                for tM in range(-min(tJ, tJp), min(tJ, tJp) + 1, 2):
                    total = sum(
                        angular.clebsch_gordan(tj1 / 2, tm1 / 2, tj2 / 2,
                                               (tM - tm1) / 2, tJ / 2, tM / 2)
                        * angular.clebsch_gordan(tj1 / 2, tm1 / 2, tj2 / 2,
                                                 (tM - tm1) / 2, tJp / 2, tM / 2)
                        for tm1 in range(-tj1, tj1 + 1, 2)
                        if abs(tM - tm1) <= tj2
                    )
                    expected = 1.0 if tJ == tJp else 0.0
                    assert total == pytest.approx(expected, abs=1e-12)


class TestWigner6j:
    def test_spot_values(self):
        assert angular.wigner_6j(0.5, 0.5, 1, 0.5, 0.5, 1) == pytest.approx(
            1 / 6, abs=1e-15)
        for j in (1, 2, 3):
            assert angular.wigner_6j(0, j, j, 0, j, j) == pytest.approx(
                1 / (2 * j + 1), abs=1e-15)

    def test_triangle_violation_gives_zero(self):
        assert angular.wigner_6j(1, 1, 3, 1, 1, 1) == 0.0

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            angular.wigner_6j(0.4, 1, 1, 1, 1, 1)
        with pytest.raises(ValueError):
            angular.wigner_6j(-1, 1, 1, 1, 1, 1)

    def test_oracle_equivalence_small(self):
        for ts in itertools.product(range(5), repeat=6):
            mine = angular.wigner_6j(*[t / 2 for t in ts])
            assert mine == pytest.approx(sy_6j(ts), abs=1e-12), ts

    def test_column_symmetries(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            ts = tuple(rng.integers(0, 7, size=6))
            base = angular.wigner_6j(*[t / 2 for t in ts])
            j1, j2, j3, j4, j5, j6 = ts
            # column permutations
            perms = [
                (j2, j1, j3, j5, j4, j6),
                (j3, j2, j1, j6, j5, j4),
                (j1, j3, j2, j4, j6, j5),
            ]
            # exchange of upper/lower pairs in two columns
            swaps = [
                (j4, j5, j3, j1, j2, j6),
                (j4, j2, j6, j1, j5, j3),
                (j1, j5, j6, j4, j2, j3),
            ]
            for other in perms + swaps:
                assert angular.wigner_6j(*[t / 2 for t in other]) == pytest.approx(
                    base, abs=1e-13)


class TestReducedME:
    def test_d2_matches_tabulated_value(self):
        me = angular.reduced_me_from_lifetime(
            26.24e-9, angular_frequency(780.246e-9), 0.5, 1.5)
        assert me.value == pytest.approx(3.584e-29, rel=5e-4)

    def test_lifetime_scaling(self):
        omega = angular_frequency(780.246e-9)
        half = angular.reduced_me_from_lifetime(26.24e-9, omega, 0.5, 1.5)
        full = angular.reduced_me_from_lifetime(2 * 26.24e-9, omega, 0.5, 1.5)
        assert full.value == pytest.approx(half.value / math.sqrt(2), rel=1e-12)

    def test_d1_regression(self):
        me = angular.reduced_me_from_lifetime(
            27.70e-9, angular_frequency(794.979e-9), 0.5, 0.5)
        assert me.value == pytest.approx(2.5367157603e-29, rel=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            angular.reduced_me_from_lifetime(0.0, 1e15, 0.5, 1.5)
        with pytest.raises(ValueError):
            angular.reduced_me_from_lifetime(1e-8, -1e15, 0.5, 1.5)


class TestEmissionAmplitude:
    def test_pi_light_dark_on_axis(self):
        assert angular.emission_amplitude(0, 0.0) == 0.0

    def test_sigma_on_axis(self):
        assert angular.emission_amplitude(1, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_sigma_perpendicular(self):
        assert angular.emission_amplitude(1, math.pi / 2) == pytest.approx(
            1 / math.sqrt(2), abs=1e-15)

    def test_rejects_bad_delta_m(self):
        with pytest.raises(ValueError):
            angular.emission_amplitude(2, 0.5)

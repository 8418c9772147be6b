import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zmc.angular import AngularData
from zmc.domain import (ExtensionDomain, FinitePoint, P_INFINITY, iota,
                        iota_inverse)
from zmc.errors import BelowOne, OutOfDisk

SCHERK2 = AngularData(2, (0.0, math.pi / 2, math.pi, 3 * math.pi / 2))
RNG = np.random.default_rng(7)


def test_iota_values():
    p = iota(1.0 + 0j)
    assert (p.u, p.theta) == (1.0, 0.0)
    p = iota(0.5 + 0j)
    assert abs(p.u - 1.25) < 1e-15 and p.theta == 0.0
    assert iota(0j) is P_INFINITY


def test_iota_rejects_outside():
    with pytest.raises(OutOfDisk):
        iota(1.5 + 0j)


def test_iota_inverse_values():
    assert abs(iota_inverse(FinitePoint(1.25, 0.0)) - 0.5) < 1e-15
    assert abs(iota_inverse(FinitePoint(1.0, math.pi)) + 1.0) < 1e-15
    assert iota_inverse(P_INFINITY) == 0


def test_iota_inverse_below_one():
    with pytest.raises(BelowOne):
        iota_inverse(FinitePoint(0.9, 0.0))


@given(st.floats(1e-3, 0.999), st.floats(0.0, 2 * math.pi, exclude_max=True))
@settings(max_examples=200, deadline=None)
def test_round_trip(r, theta):
    z = r * cmath.exp(1j * theta)
    p = iota(z)
    back = iota_inverse(p)
    assert abs(back - z) < 1e-12


def test_round_trip_near_circle():
    # u(r) is quadratic at the fold r = 1, so the inverse can only recover
    # r to sqrt(eps) precision in a thin band next to the circle
    for r in (0.9999, 0.999999, 1.0 - 1e-9, 1.0):
        z = r * cmath.exp(0.4j)
        assert abs(iota_inverse(iota(z)) - z) < 3e-8


def test_round_trip_through_infinity():
    assert iota(iota_inverse(P_INFINITY)) is P_INFINITY


def test_contains_examples():
    dom = ExtensionDomain(SCHERK2)
    assert dom.contains(FinitePoint(0.8, math.pi / 4))       # max cos = sqrt(2)/2
    assert not dom.contains(FinitePoint(1.0, 0.0))           # boundary is excluded
    assert dom.contains(P_INFINITY)


def test_contains_monotone_in_u():
    dom = ExtensionDomain(SCHERK2)
    for _ in range(64):
        th = RNG.uniform(0, 2 * math.pi)
        u = RNG.uniform(-1, 3)
        if dom.contains(FinitePoint(u, th)):
            assert dom.contains(FinitePoint(u + RNG.uniform(0, 3), th))


def test_unit_disk_image_lies_inside():
    # every iota image of the punctured disk off the ends lies in the domain
    dom = ExtensionDomain(SCHERK2)
    ends = [cmath.exp(1j * b) for b in SCHERK2.betas]
    for _ in range(128):
        z = RNG.uniform(0.05, 1.0) * cmath.exp(1j * RNG.uniform(0, 2 * math.pi))
        if min(abs(z - e) for e in ends) < 1e-6:
            continue
        assert dom.contains(iota(z))
    for _ in range(64):
        assert dom.contains(FinitePoint(RNG.uniform(1.0, 5.0) + 1e-9,
                                        RNG.uniform(0, 2 * math.pi)))


def test_active_interval_examples():
    dom = ExtensionDomain(SCHERK2)
    j, c = dom.active_interval(0.1)
    assert j == 0 and abs(c - math.cos(0.1)) < 1e-15
    j, _ = dom.active_interval(math.pi / 4)   # tie resolves to the lower index
    assert j == 0
    j, c = dom.active_interval(SCHERK2.betas[2])
    assert j == 2 and abs(c - 1.0) < 1e-15


def test_interval_lemma_inequality():
    # cos(theta - beta_i) >= cos(theta - beta_j) for theta in I_i
    for angular in (SCHERK2,
                    AngularData(3, (0.0, 0.3, 1.1, 2.0, 3.7, 5.9)),
                    AngularData(2, (0.0, 0.0, math.pi, math.pi))):
        dom = ExtensionDomain(angular)
        betas = np.asarray(angular.betas)
        N = len(betas)
        intervals = angular.intervals()
        for i in range(N):
            pieces = intervals[i] if i == 0 else (intervals[i],)
            for lo, hi in pieces:
                for th in np.linspace(lo, hi, 64):
                    ci = math.cos(th - betas[i])
                    for j in range(N):
                        if j != i:
                            assert ci >= math.cos(th - betas[j]) - 1e-12


def test_interval_lemma_equality_at_midpoints():
    g0 = SCHERK2.gammas[0]
    assert abs(math.cos(g0 - SCHERK2.betas[0]) - math.cos(g0 - SCHERK2.betas[1])) < 1e-15


def test_lower_bound_examples():
    assert abs(ExtensionDomain(SCHERK2).lower_bound() - math.cos(math.pi / 4)) < 1e-15
    jm2 = AngularData(2, (0.0, 0.0, math.pi, math.pi))
    assert abs(ExtensionDomain(jm2).lower_bound() - 0.0) < 1e-15
    alleq = AngularData(2, (0.0, 0.0, 0.0, 0.0))
    assert abs(ExtensionDomain(alleq).lower_bound() + 1.0) < 1e-15


def test_lower_bound_is_a_bound():
    for angular in (SCHERK2, AngularData(3, (0.0, 0.3, 1.1, 2.0, 3.7, 5.9))):
        dom = ExtensionDomain(angular)
        lb = dom.lower_bound()
        for _ in range(256):
            th = RNG.uniform(0, 2 * math.pi)
            u = RNG.uniform(-1.5, 3.0)
            if dom.contains(FinitePoint(u, th)):
                assert u > lb


def test_boundary_distance():
    dom = ExtensionDomain(SCHERK2)
    d = dom.boundary_distance(FinitePoint(0.8, math.pi / 4))
    assert abs(d - (0.8 - math.sqrt(2) / 2)) < 1e-12
    th = 0.37
    assert abs(dom.boundary_distance(FinitePoint(SCHERK2.max_cos(th), th))) < 1e-15
    assert dom.boundary_distance(FinitePoint(2.0, 1.234)) >= 1.0


def test_theta_normalized_mod_2pi():
    p = FinitePoint(1.5, 2 * math.pi + 0.3)
    assert abs(p.theta - 0.3) < 1e-12

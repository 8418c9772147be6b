import math

import numpy as np
import pytest

from zmc.analysis import (Condition, GraphInverter, check_conditions, classify,
                          graph_table, injectivity_scan, invert_graph,
                          jacobian_x1x2, jacobians_x0, psi_map, umbilics,
                          zmc_residual, zmc_residual_from_heights)
from zmc.angular import AngularData, BlaschkeParams
from zmc.errors import OutsideDomain, PreconditionUnmet
from zmc.polycheb import cheb_U
from zmc.surface import SurfaceEvaluator
from zmc.weierstrass import build

RNG = np.random.default_rng(123)


def make(n, alphas, b=()):
    return build(AngularData(n, tuple(alphas)), BlaschkeParams(tuple(b)))


SCHERK2 = make(2, tuple(math.pi * j / 2 for j in range(4)))
SCHERK3 = make(3, tuple(math.pi * j / 3 for j in range(6)))
GEN3 = make(3, (0.0, 0.9, 2.0, 3.1, 4.2, 5.2), b=(0.1,))
J2 = make(2, (0.0, 0.0, math.pi, math.pi))


def domain_points(data, count, rng=RNG):
    th = rng.uniform(0, 2 * math.pi, count)
    lo = np.asarray(data.angular.max_cos(th))
    return lo + rng.uniform(0.1, 1.5, size=count), th


# ---------------------------------------------------------------- conditions

def test_conditions_scherk_any_order():
    for n in range(2, 7):
        ang = AngularData(n, tuple(math.pi * j / n for j in range(2 * n)))
        rep = check_conditions(ang)
        assert rep.graph_condition is Condition.STRICTLY_SATISFIED
        assert rep.witness is None


def test_conditions_jorge_meeks3():
    ang = AngularData.from_fractions(3, [__import__("fractions").Fraction(2 * (j // 2), 3)
                                         for j in range(6)])
    rep = check_conditions(ang)
    assert rep.graph_condition is Condition.VIOLATED
    assert rep.immersion_condition is Condition.STRICTLY_SATISFIED
    assert rep.witness is not None
    assert rep.arithmetic == "rational"


def test_conditions_boundary_case_rational():
    # n = 3 with one gap exactly pi/2
    from fractions import Fraction
    fr = [Fraction(0), Fraction(1, 2), Fraction(1, 1), Fraction(4, 3),
          Fraction(5, 3), Fraction(11, 6)]
    rep = check_conditions(AngularData.from_fractions(3, fr))
    assert rep.graph_condition is Condition.BOUNDARY_CASE
    assert rep.arithmetic == "rational"


def test_conditions_n2_immersion_unrestricted():
    for alphas in ((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0, math.pi),
                   (0.0, 1.0, 2.0, 3.0)):
        rep = check_conditions(AngularData(2, alphas))
        assert rep.immersion_condition is not Condition.VIOLATED


# ---------------------------------------------------------------- jacobians

def test_jacobian_scherk2_value():
    assert abs(jacobian_x1x2(SCHERK2, 2.0, 0.0) - 1.0 / 24.0) < 1e-14


def test_jacobian_against_finite_differences():
    for data in (SCHERK2, SCHERK3, GEN3):
        ev = SurfaceEvaluator(data)
        u, th = domain_points(data, 64)
        h = 1e-5
        for ui, ti in zip(u, th):
            J = jacobian_x1x2(data, ui, ti)
            vals = ev.eval_batch(np.array([ui + h, ui - h, ui, ui]),
                                 np.array([ti, ti, ti + h, ti - h]))
            fu = (vals[:, 0] - vals[:, 1]) / (2 * h)
            ft = (vals[:, 2] - vals[:, 3]) / (2 * h)
            Jfd = fu[1] * ft[2] - ft[1] * fu[2]
            assert abs(J - Jfd) <= 1e-6 * max(abs(Jfd), 1e-8)


def test_jacobian_positive_under_strict_condition():
    for data in (SCHERK2, SCHERK3):
        u, th = domain_points(data, 256)
        for ui, ti in zip(u, th):
            assert jacobian_x1x2(data, ui, ti) > 0


def test_jacobian_witness_zero():
    ang = AngularData(3, (0.0, 0.0, 2 * math.pi / 3, 2 * math.pi / 3,
                          4 * math.pi / 3, 4 * math.pi / 3))
    rep = check_conditions(ang)
    assert rep.graph_condition is Condition.VIOLATED
    u0, th0 = rep.witness
    data = make(3, ang.alphas)
    assert abs(jacobian_x1x2(data, u0, th0)) < 1e-10


def test_jacobians_x0_formulas():
    j01, j02 = jacobians_x0(SCHERK2, 2.0, 0.0)
    assert abs(j01) < 1e-14 and abs(j02 + 1.0 / 48.0) < 1e-14
    ev = SurfaceEvaluator(SCHERK3)
    u, th = domain_points(SCHERK3, 16)
    h = 1e-5
    for ui, ti in zip(u, th):
        a, b = jacobians_x0(SCHERK3, ui, ti)
        vals = ev.eval_batch(np.array([ui + h, ui - h, ui, ui]),
                             np.array([ti, ti, ti + h, ti - h]))
        fu = (vals[:, 0] - vals[:, 1]) / (2 * h)
        ft = (vals[:, 2] - vals[:, 3]) / (2 * h)
        afd = fu[0] * ft[1] - ft[0] * fu[1]
        bfd = fu[0] * ft[2] - ft[0] * fu[2]
        assert abs(a - afd) <= 1e-6 * max(abs(afd), 1e-8)
        assert abs(b - bfd) <= 1e-6 * max(abs(bfd), 1e-8)


def test_jacobians_x0_never_both_zero_n2():
    # U_0 = 1: the pair is proportional to (sin theta, -cos theta)
    u, th = domain_points(J2, 64)
    for ui, ti in zip(u, th):
        a, b = jacobians_x0(J2, ui, ti)
        assert math.hypot(a, b) > 1e-12


def test_immersion_under_condB():
    # at every sampled domain point at least one Jacobian is nonzero
    for data in (J2, SCHERK3):
        u, th = domain_points(data, 128)
        for ui, ti in zip(u, th):
            j12 = jacobian_x1x2(data, ui, ti)
            j01, j02 = jacobians_x0(data, ui, ti)
            assert max(abs(j12), abs(j01), abs(j02)) > 1e-15


def test_immersion_witness_all_jacobians_vanish():
    # one gap above 2 pi/(n-1): all three Jacobians vanish at the witness
    ang = AngularData(4, (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 3.0))
    rep = check_conditions(ang)
    assert rep.immersion_condition is Condition.VIOLATED
    u0, th0 = rep.immersion_witness
    data = make(4, ang.alphas)
    assert abs(cheb_U(len(ang.alphas) // 2 - 2, u0)) < 1e-10
    j01, j02 = jacobians_x0(data, u0, th0)
    assert abs(j01) < 1e-10 and abs(j02) < 1e-10
    assert abs(jacobian_x1x2(data, u0, th0)) < 1e-10


def test_jacobian_outside_domain():
    with pytest.raises(OutsideDomain):
        jacobian_x1x2(SCHERK2, 0.3, 0.0)


# ---------------------------------------------------------------- inversion

def test_invert_round_trip():
    inv = GraphInverter(SCHERK2)
    ev = SurfaceEvaluator(SCHERK2)
    vals = ev.eval_batch(np.array([1.5]), np.array([0.9]))
    u, th, lam = inv.invert(float(vals[1, 0]), float(vals[2, 0]))
    assert abs(u - 1.5) < 1e-8 and abs(th - 0.9) < 1e-8
    assert abs(lam - vals[0, 0]) < 1e-10


def test_invert_scherk_identity_grid():
    inv = GraphInverter(SCHERK2)
    for x in np.linspace(-1.2, 1.2, 10):
        for y in np.linspace(-1.2, 1.2, 10):
            _, _, lam = inv.invert(x, y)
            # identity in doubled coordinates
            assert abs(math.cosh(2 * x) - math.exp(2 * lam) * math.cosh(2 * y)) < 1e-8


def test_invert_j2_identity():
    inv = GraphInverter(J2)
    for x in np.linspace(-1.5, 1.5, 10):
        for y in np.linspace(-1.5, 1.5, 10):
            _, _, lam = inv.invert(x, y)
            assert abs(lam - (-x) * math.tanh(2 * y)) < 1e-8


def test_invert_rejects_violated():
    data = make(3, (0.0, 0.0, 2 * math.pi / 3, 2 * math.pi / 3,
                    4 * math.pi / 3, 4 * math.pi / 3))
    with pytest.raises(PreconditionUnmet):
        invert_graph(data, 0.3, 0.4)


def test_invert_general_type():
    inv = GraphInverter(GEN3)
    ev = SurfaceEvaluator(GEN3)
    vals = ev.eval_batch(np.array([1.2]), np.array([2.4]))
    u, th, _ = inv.invert(float(vals[1, 0]), float(vals[2, 0]))
    assert abs(u - 1.2) < 1e-8 and abs(th - 2.4) < 1e-8


def test_invert_grid_and_table():
    inv = GraphInverter(SCHERK3)
    xs = np.linspace(-1.5, 1.5, 9)
    ys = np.linspace(-1.5, 1.5, 9)
    lam, lx, ly, resid, ok = graph_table(inv, xs, ys, h=1e-3)
    assert ok.all()
    assert np.max(np.abs(resid)) < 1e-4
    # gradients from the table match analytic graph gradients
    from zmc.surface import build_oneforms, graph_gradient
    forms = build_oneforms(SCHERK3)
    u, th, _, cok, _ = inv.invert_grid(xs, ys)
    assert cok.all()
    gx, gy = graph_gradient(forms, u[4, 6], th[4, 6])
    assert abs(gx - lx[4, 6]) < 1e-5 and abs(gy - ly[4, 6]) < 1e-5


# ---------------------------------------------------------------- PDE residual

def test_zmc_residual_scherk():
    assert abs(zmc_residual(SCHERK2, 0.5, 0.3)) < 1e-4


def test_zmc_residual_synthetic_plane():
    L = np.zeros((3, 3))
    assert zmc_residual_from_heights(L, 1e-3) == 0.0


def test_zmc_residual_synthetic_timelike_graph():
    # t = y + arctan x solves the equation exactly
    h = 1e-3
    x0, y0 = 0.4, -0.7
    L = np.empty((3, 3))
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            L[i + 1, j + 1] = (y0 + j * h) + math.atan(x0 + i * h)
    assert abs(zmc_residual_from_heights(L, h)) < 1e-9


# ---------------------------------------------------------------- psi map

def test_psi_map_values():
    assert np.allclose(psi_map(2.0, 0.0), (1.0, 0.0))
    xi, eta = psi_map(1.0, math.pi / 2)
    assert abs(xi) < 1e-15 and abs(eta - 1.0) < 1e-12


def test_psi_map_precondition():
    with pytest.raises(OutsideDomain):
        psi_map(0.5, 0.0)


def test_psi_map_injectivity_sample():
    ang = AngularData(2, (0.0, 1.1, 2.9, 4.4))
    dom_u, dom_th = domain_points(make(2, ang.alphas), 10_000)
    xi = np.cos(dom_th) / (dom_u - np.cos(dom_th))
    eta = np.sin(dom_th) / (dom_u - np.cos(dom_th))
    order = np.lexsort((eta, xi))
    xs, es = xi[order], eta[order]
    us, ts = dom_u[order], dom_th[order]
    for i in range(len(xs) - 1):
        j = i + 1
        while j < len(xs) and xs[j] - xs[i] < 1e-8:
            if abs(es[j] - es[i]) < 1e-8:
                du = abs(us[j] - us[i])
                dth = abs(ts[j] - ts[i]) % (2 * math.pi)
                dth = min(dth, 2 * math.pi - dth)
                assert math.hypot(du, dth) < 1e-6
            j += 1


# ---------------------------------------------------------------- scans / classify

def test_injectivity_scan_entire_graphs_clean():
    for data in (SCHERK3, J2):
        assert injectivity_scan(data, grid_resolution=120) == []


def test_injectivity_scan_detects_crossings():
    fb = make(4, tuple(math.pi * j / 4 for j in range(8)), b=(-0.75, 0.0, 0.0))
    hits = injectivity_scan(fb, grid_resolution=200)
    assert hits
    assert all(c.distance < 1e-8 for c in hits)
    n3 = make(3, (0.0, 3 * math.pi / 4, 3 * math.pi / 2, 5 * math.pi / 3,
                  7 * math.pi / 4, 11 * math.pi / 6))
    assert injectivity_scan(n3, grid_resolution=200)


def test_umbilics_examples():
    scherk4 = make(4, tuple(math.pi * j / 4 for j in range(8)))
    assert umbilics(scherk4) == ((0j, 2),)
    assert umbilics(SCHERK2) == ()
    um = umbilics(GEN3)
    assert sum(m for _, m in um) == 1


def test_classify_reports():
    rep = classify(SCHERK2)
    assert rep.entire_graph_certified and rep.fold.is_fold_type
    assert rep.period_residual < 1e-10
    assert rep.conditions.umbilics == ()
    rep3 = classify(make(3, (0.0, 0.0, 2 * math.pi / 3, 2 * math.pi / 3,
                             4 * math.pi / 3, 4 * math.pi / 3)))
    assert rep3.conditions.graph_condition is Condition.VIOLATED
    assert not rep3.entire_graph_certified
    assert rep3.hopf_orders == (6, 2)
    fb = make(4, tuple(math.pi * j / 4 for j in range(8)), b=(-0.75, 0.0, 0.0))
    repfb = classify(fb)
    assert not repfb.entire_graph_certified          # general type: no certificate
    assert repfb.conditions.witness is None
    assert sum(m for _, m in repfb.conditions.umbilics) == 2


def test_invert_parabolic_entire_graph():
    # boundary-case repeated angles at order 2 still invert; the height
    # solves the surface's implicit equation
    data = make(2, (0.0, 0.0, 0.0, math.pi))
    inv = GraphInverter(data)
    for x in np.linspace(-0.8, 0.8, 5):
        for y in np.linspace(-0.8, 0.8, 5):
            _, _, lam = inv.invert(x, y)
            phi = 0.5 * (math.exp(4 * (lam + x)) - 1) + 2 * (lam - x) - 4 * y * y
            assert abs(phi) < 1e-8

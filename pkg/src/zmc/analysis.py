"""Graph / immersion criteria, Newton inversion, PDE residuals, scans.

The two gap conditions on the angular data decide everything: gaps up to
pi/(n-1) make (x1, x2) a diffeomorphism onto the plane (an entire graph),
gaps up to 2 pi/(n-1) still give an immersion.  Violations are witnessed
by explicit critical points where the Chebyshev factors vanish.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import numpy as np
import numpy.polynomial.polynomial as npoly

from .angular import TWO_PI, AngularData
from .errors import NoConvergence, OutsideDomain, PreconditionUnmet
from .polycheb import cheb_U, cluster_roots, reduce_anti_coeffs
from .surface import SurfaceEvaluator, build_oneforms
from .weierstrass import (KobayashiData, FoldTypeReport, dg_numerator,
                          hopf_zero_pole_orders, period_check, verify_fold_type)

_GAP_TOL = 1e-12


class Condition(Enum):
    STRICTLY_SATISFIED = "strict"
    BOUNDARY_CASE = "boundary"
    VIOLATED = "violated"


@dataclass(frozen=True)
class ConditionReport:
    graph_condition: Condition
    immersion_condition: Condition
    witness: tuple[float, float] | None
    immersion_witness: tuple[float, float] | None
    distinct_angles: bool
    arithmetic: str  # "rational" when gaps were compared exactly
    umbilics: tuple[tuple[complex, int], ...] | None = None


def _classify_gaps(gaps, bound, gap_fracs, bound_frac) -> tuple[Condition, int | None]:
    """Worst gap against the bound; returns (condition, index of first violation)."""
    state = Condition.STRICTLY_SATISFIED
    first_violated = None
    for j, g in enumerate(gaps):
        if gap_fracs is not None:
            f = gap_fracs[j]
            over = f > bound_frac
            boundary = f == bound_frac
        else:
            over = g > bound + _GAP_TOL
            boundary = abs(g - bound) <= _GAP_TOL
        if over:
            if first_violated is None:
                first_violated = j
            state = Condition.VIOLATED
        elif boundary and state is not Condition.VIOLATED:
            state = Condition.BOUNDARY_CASE
    return state, first_violated


def check_conditions(angular: AngularData) -> ConditionReport:
    """Gap conditions for graph (pi/(n-1)) and immersion (2 pi/(n-1)).

    Rational-multiple-of-pi input is compared exactly; otherwise within
    1e-12.  A violated gap yields the critical point (u_0, gap midpoint)
    at which the corresponding Jacobians vanish for principal data.
    """
    n = angular.n
    gaps = angular.gaps()
    gap_fracs = angular.gap_fracs()
    bound = math.pi / (n - 1)
    bound_frac = Fraction(1, n - 1) if gap_fracs is not None else None
    graph, jg = _classify_gaps(gaps, bound, gap_fracs, bound_frac)
    imm, ji = _classify_gaps(
        gaps, 2 * bound, gap_fracs,
        2 * bound_frac if bound_frac is not None else None)

    ext = angular.alphas + (TWO_PI,)
    witness = None
    if jg is not None:
        witness = (math.cos(math.pi / (2 * (n - 1))), (ext[jg] + ext[jg + 1]) / 2.0)
    immersion_witness = None
    if ji is not None:
        immersion_witness = (math.cos(math.pi / (n - 1)), (ext[ji] + ext[ji + 1]) / 2.0)

    return ConditionReport(
        graph_condition=graph,
        immersion_condition=imm,
        witness=witness,
        immersion_witness=immersion_witness,
        distinct_angles=angular.is_distinct,
        arithmetic="rational" if gap_fracs is not None else "float",
    )


# ---------------------------------------------------------------------------
# Jacobian formulas
# ---------------------------------------------------------------------------

def _domain_product(angular: AngularData, u: float, theta: float) -> float:
    D = u - np.cos(theta - np.asarray(angular.alphas))
    if np.min(D) <= 0:
        raise OutsideDomain(f"({u}, {theta}) outside the extension domain")
    return float(np.prod(D))


def jacobian_x1x2(data: KobayashiData, u: float, theta: float) -> float:
    """d(x1, x2)/d(u, theta) of the extension.

    Principal type reduces to U_{2n-3}(u) over 2^{2n-1} prod (u - cos);
    general type uses the degree-(2n-3) polynomial obtained by reducing
    prod |conj(b) z - 1|^4 - prod |z - b|^4.
    """
    n = data.n
    prod = _domain_product(data.angular, u, theta)
    if data.principal:
        return float(cheb_U(2 * n - 3, u)) / (2 ** (2 * n - 1) * prod)
    plus = np.array([1.0])
    minus = np.array([1.0])
    for b in data.blaschke.b:
        mid = -2.0 * (b.conjugate() * cmath.exp(1j * theta)).real
        f1 = np.array([1.0, mid, abs(b) ** 2])
        f2 = np.array([abs(b) ** 2, mid, 1.0])
        plus = npoly.polymul(plus, npoly.polymul(f1, f1))
        minus = npoly.polymul(minus, npoly.polymul(f2, f2))
    size = 4 * (n - 1) + 1
    coeffs = np.zeros(size)
    coeffs[: plus.size] += plus.real
    coeffs[: minus.size] -= minus.real
    w = reduce_anti_coeffs(coeffs, 2 * n - 2)
    Y = sum(w[i] * cheb_U(i, u) for i in range(len(w)))
    return float(-Y) / (4**n * prod)


def jacobians_x0(data: KobayashiData, u: float, theta: float) -> tuple[float, float]:
    """(d(x0,x1)/d(u,theta), d(x0,x2)/d(u,theta)) for principal data."""
    if not data.principal:
        raise PreconditionUnmet("x0 Jacobian closed forms hold for principal type")
    n = data.n
    prod = _domain_product(data.angular, u, theta)
    common = float(cheb_U(n - 2, u)) / (2 ** (2 * n - 2) * prod)
    k = n - 1
    return common * math.sin(k * theta), -common * math.cos(k * theta)


# ---------------------------------------------------------------------------
# Newton inversion of (x1, x2)
# ---------------------------------------------------------------------------

class GraphInverter:
    """Damped Newton solver for (x1, x2)(u, theta) = (x, y).

    Valid when the graph condition is not violated.  Internally works in
    the chart (l, theta) with u = maxcos(theta) + e^l, which removes the
    domain constraint, keeps the boundary logarithm exact, and makes the
    map well conditioned arbitrarily close to the boundary.
    """

    L_CAP = 30.0

    def __init__(self, data: KobayashiData):
        report = check_conditions(data.angular)
        if report.graph_condition is Condition.VIOLATED:
            raise PreconditionUnmet(
                "graph condition violated: some gap exceeds pi/(n-1)")
        if data.n > 2 and not data.angular.is_distinct:
            raise PreconditionUnmet(
                "entire-graph certification needs distinct angles for n > 2")
        self.data = data
        self.evaluator = SurfaceEvaluator(data)
        self.angular = data.angular
        self._betas = np.asarray(data.angular.betas)
        self._log_mode = self.evaluator._mode == "log"
        if self._log_mode:
            self._W = self.evaluator._weights
            self._alphas = self.evaluator._alphas
        else:
            self._forms = build_oneforms(data)
            self._alphas = np.asarray(data.angular.alphas)
        th = np.linspace(0.0, TWO_PI, 64, endpoint=False)
        seeds_l, seeds_th = [], []
        for dl in (-2.0, -0.5, 0.7, 2.5, 7.0, 14.0, 21.0):
            seeds_l.append(np.full(th.size, dl))
            seeds_th.append(th)
        self._seed_l = np.concatenate(seeds_l)
        self._seed_th = np.concatenate(seeds_th)
        vals, _, _ = self._chart_values(self._seed_l, self._seed_th, partials=False)
        self._seed_xy = vals[1:, :]

    def _active(self, th):
        cosines = np.cos(th[None, :] - self._betas[:, None])
        a = np.argmax(cosines, axis=0)
        mc = cosines[a, np.arange(th.size)]
        return a, mc

    def _chart_values(self, l, th, partials=True):
        """Values of f~ and (d/dl, d/dtheta) of (x1, x2) in the chart."""
        l = np.asarray(l, dtype=float)
        th = np.asarray(th, dtype=float)
        a, mc = self._active(th)
        delta = np.exp(l)
        beta_a = self._betas[a]
        if self._log_mode:
            al = self._alphas[:, None]
            # cos(th - beta_a) - cos(th - alpha_j), evaluated without
            # cancellation via the product formula; >= 0 since beta_a is
            # the active maximum, so rounding may only be clipped upward
            dcos = -2.0 * np.sin(th[None, :] - (beta_a[None, :] + al) / 2.0) \
                * np.sin((al - beta_a[None, :]) / 2.0)
            D = delta[None, :] + np.maximum(dcos, 0.0)
            vals = self._W @ np.log(D)
            if not partials:
                return vals, None, None
            invD = 1.0 / D
            du = self._W @ invD
            dth_u = self._W @ (np.sin(th[None, :] - al) * invD)
            dl = du * delta[None, :]
            dth = dth_u - du * np.sin(th - beta_a)[None, :]
            return vals, dl[1:], dth[1:]
        u = mc + delta
        vals = self.evaluator.eval_batch(u, th)
        if not partials:
            return vals, None, None
        du, dth_u = self._forms.partials(u, th)
        dl = du * delta[None, :]
        dth = dth_u - du * np.sin(th - beta_a)[None, :]
        return vals, dl[1:], dth[1:]

    def _to_chart(self, u, th):
        u = np.asarray(u, dtype=float).ravel()
        th = np.asarray(th, dtype=float).ravel()
        _, mc = self._active(th)
        return np.log(np.maximum(u - mc, 1e-300)), th

    def _unkink(self, th, eps=3e-9):
        """Shift theta off the boundary corners, where the chart Jacobian
        is one-sided and can poison the Newton direction."""
        g = np.asarray(self.angular.gammas)
        d = np.abs((th[:, None] - g[None, :] + math.pi) % TWO_PI - math.pi)
        out = th.copy()
        out[(d < 1e-9).any(axis=1)] += eps
        return out

    def _from_chart(self, l, th):
        _, mc = self._active(th)
        return mc + np.exp(l), th % TWO_PI

    def newton_batch(self, X, Y, u0, th0, maxiter: int = 60, atol: float = 1e-13):
        """Solve for every target.

        Returns (u, theta, lambda, converged, residual); the residual is
        measured in the numerically exact boundary chart.
        """
        X = np.asarray(X, dtype=float).ravel()
        Y = np.asarray(Y, dtype=float).ravel()
        target = np.vstack([X, Y])
        scale = 1.0 + np.abs(target).max(axis=0)
        l, th = self._to_chart(u0, th0)
        th = self._unkink(th)

        vals, _, _ = self._chart_values(l, th, partials=False)
        R = vals[1:] - target
        rn = np.hypot(R[0], R[1])

        # fall back to the seed bank wherever the warm start is poor
        d2 = (self._seed_xy[0][:, None] - X[None, :]) ** 2 \
            + (self._seed_xy[1][:, None] - Y[None, :]) ** 2
        best = np.argmin(d2, axis=0)
        srn = np.sqrt(d2[best, np.arange(X.size)])
        swap = srn < rn
        if swap.any():
            l[swap] = self._seed_l[best[swap]]
            th[swap] = self._seed_th[best[swap]]
            vals, _, _ = self._chart_values(l, th, partials=False)
            R = vals[1:] - target
            rn = np.hypot(R[0], R[1])

        for _ in range(maxiter):
            active = rn > atol * scale
            if not active.any():
                break
            la, tha = l[active], th[active]
            _, dl, dth = self._chart_values(la, tha)
            det = dl[0] * dth[1] - dth[0] * dl[1]
            Ra = R[:, active]
            sl = -(dth[1] * Ra[0] - dth[0] * Ra[1]) / det
            sth = -(-dl[1] * Ra[0] + dl[0] * Ra[1]) / det
            step = np.hypot(sl, sth)
            shrink = np.minimum(1.0, 8.0 / np.maximum(step, 1e-300))
            sl *= shrink
            sth *= shrink
            alpha = np.ones_like(sl)
            best_l, best_th = la.copy(), tha.copy()
            best_rn = rn[active].copy()
            undone = np.ones(sl.shape, dtype=bool)
            for _try in range(40):
                cl = np.minimum(la + alpha * sl, self.L_CAP)
                cth = tha + alpha * sth
                v, _, _ = self._chart_values(cl, cth, partials=False)
                rr = v[1:] - target[:, active]
                crn = np.hypot(rr[0], rr[1])
                improved = undone & (crn <= best_rn * (1 - 1e-4 * alpha))
                best_l[improved] = cl[improved]
                best_th[improved] = cth[improved]
                best_rn[improved] = crn[improved]
                undone &= ~improved
                if not undone.any():
                    break
                alpha[undone] /= 2.0
            # points that accepted no step are usually parked on a corner;
            # shove them off it and let the next sweep retry
            best_th[undone] = self._unkink(best_th[undone], eps=1e-7)
            l[active], th[active] = best_l, best_th
            vals, _, _ = self._chart_values(l, th, partials=False)
            R = vals[1:] - target
            rn = np.hypot(R[0], R[1])
        lam = vals[0]
        u, th_out = self._from_chart(l, th)
        return u, th_out, lam, rn <= 1e-10 * scale, rn

    def _cold_start(self, X, Y):
        X = np.asarray(X, dtype=float).ravel()
        Y = np.asarray(Y, dtype=float).ravel()
        d2 = (self._seed_xy[0][:, None] - X[None, :]) ** 2 \
            + (self._seed_xy[1][:, None] - Y[None, :]) ** 2
        best = np.argmin(d2, axis=0)
        return self._from_chart(self._seed_l[best], self._seed_th[best])

    def invert(self, x: float, y: float) -> tuple[float, float, float]:
        """Unique preimage of (x, y) plus the graph height lambda = x0."""
        u0, th0 = self._cold_start([x], [y])
        u, th, lam, ok, _ = self.newton_batch([x], [y], u0, th0)
        if not ok[0]:
            u, th, lam, ok = self._homotopy(x, y, u0[0], th0[0])
        if not ok[0]:
            raise NoConvergence(f"inversion failed at ({x}, {y})",
                                x=x, y=y, last=(float(u[0]), float(th[0])))
        return float(u[0]), float(th[0]), float(lam[0])

    def _homotopy(self, x, y, u0, th0):
        vals = self._values(np.array([u0]), np.array([th0]))
        x0, y0 = float(vals[1, 0]), float(vals[2, 0])
        u, th = np.array([u0]), np.array([th0])
        ok = np.array([True])
        lam = vals[:1]
        for t in np.linspace(0.0, 1.0, 33)[1:]:
            xt, yt = x0 + t * (x - x0), y0 + t * (y - y0)
            u, th, lam, ok, _ = self.newton_batch([xt], [yt], u, th)
            if not ok[0]:
                return u, th, lam, ok
        return u, th, lam, ok

    def invert_grid(self, xs, ys):
        """Row-wise warm-started grid inversion.

        Returns (u, theta, lam, converged, residual) arrays of shape
        (len(ys), len(xs)).
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        nu = np.empty((ys.size, xs.size))
        nth = np.empty_like(nu)
        nlam = np.empty_like(nu)
        nok = np.empty(nu.shape, dtype=bool)
        nrn = np.empty_like(nu)
        u_row = th_row = None
        for i, y in enumerate(ys):
            if u_row is None:
                u_row, th_row = self._cold_start(xs, np.full(xs.size, y))
            u_row, th_row, lam, ok, rn = self.newton_batch(
                xs, np.full(xs.size, y), u_row, th_row)
            if not ok.all():
                for j in np.nonzero(~ok)[0]:
                    try:
                        u_row[j], th_row[j], lam[j] = self.invert(xs[j], y)
                        ok[j] = True
                        rn[j] = 0.0
                    except NoConvergence:
                        pass
            nu[i], nth[i], nlam[i], nok[i], nrn[i] = u_row, th_row, lam, ok, rn
        return nu, nth, nlam, nok, nrn


def invert_graph(data: KobayashiData, x: float, y: float) -> tuple[float, float, float]:
    """One-shot inversion; build a GraphInverter directly for repeated use."""
    return GraphInverter(data).invert(x, y)


def zmc_residual(data_or_inverter, x: float, y: float, h: float = 1e-3) -> float:
    """Central-difference residual of (1-ly^2) lxx + 2 lx ly lxy + (1-lx^2) lyy.

    Zero mean curvature makes this O(h^2) small wherever the graph height
    lambda is smooth.
    """
    inv = data_or_inverter if isinstance(data_or_inverter, GraphInverter) \
        else GraphInverter(data_or_inverter)
    uc, thc, _ = inv.invert(x, y)
    dx = np.array([-1, -1, -1, 0, 0, 0, 1, 1, 1]) * h
    dy = np.array([-1, 0, 1, -1, 0, 1, -1, 0, 1]) * h
    u, th, lam, ok, _ = inv.newton_batch(x + dx, y + dy,
                                         np.full(9, uc), np.full(9, thc))
    if not ok.all():
        raise NoConvergence(f"stencil inversion failed near ({x}, {y})", x=x, y=y)
    L = lam.reshape(3, 3)  # L[i, j] at (x + (i-1) h, y + (j-1) h)
    return float(zmc_residual_from_heights(L, h))


def zmc_residual_from_heights(L: np.ndarray, h: float):
    """PDE residual from a 3x3 stencil of graph heights; L[i, j] sits at
    (x + (i-1) h, y + (j-1) h).  Vectorizes over trailing axes."""
    lx = (L[2, 1] - L[0, 1]) / (2 * h)
    ly = (L[1, 2] - L[1, 0]) / (2 * h)
    lxx = (L[2, 1] - 2 * L[1, 1] + L[0, 1]) / h**2
    lyy = (L[1, 2] - 2 * L[1, 1] + L[1, 0]) / h**2
    lxy = (L[2, 2] - L[2, 0] - L[0, 2] + L[0, 0]) / (4 * h**2)
    return (1 - ly**2) * lxx + 2 * lx * ly * lxy + (1 - lx**2) * lyy


def graph_table(inverter: GraphInverter, xs, ys, h: float = 1e-3,
                with_residual: bool = True):
    """Tabulate lambda(x, y) over a grid, with gradients and PDE residuals.

    Returns (lam, lx, ly, resid, ok), each shaped (len(ys), len(xs));
    rows are warm-started from their neighbors.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ny, nx = ys.size, xs.size
    lam = np.empty((ny, nx))
    lx = np.empty_like(lam)
    ly = np.empty_like(lam)
    resid = np.zeros_like(lam)
    okall = np.empty(lam.shape, dtype=bool)
    u_row = th_row = None
    offsets = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
    for i, y in enumerate(ys):
        yy = np.full(nx, y)
        if u_row is None:
            u_row, th_row = inverter._cold_start(xs, yy)
        u_row, th_row, lam_row, ok, _ = inverter.newton_batch(xs, yy, u_row, th_row)
        L = np.empty((3, 3, nx))
        L[1, 1] = lam_row
        for dx, dy in offsets:
            _, _, lam_s, ok_s, _ = inverter.newton_batch(
                xs + dx * h, yy + dy * h, u_row, th_row)
            ok &= ok_s
            L[dx + 1, dy + 1] = lam_s
        lam[i] = lam_row
        lx[i] = (L[2, 1] - L[0, 1]) / (2 * h)
        ly[i] = (L[1, 2] - L[1, 0]) / (2 * h)
        if with_residual:
            resid[i] = zmc_residual_from_heights(L, h)
        okall[i] = ok
    return lam, lx, ly, resid, okall


def psi_map(u: float, theta: float) -> tuple[float, float]:
    """(cos theta, sin theta) / (u - cos theta); injective on each domain."""
    c = math.cos(theta)
    if u <= c:
        raise OutsideDomain(f"psi map needs u > cos(theta), got ({u}, {theta})")
    return c / (u - c), math.sin(theta) / (u - c)


# ---------------------------------------------------------------------------
# collision sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Collision:
    p1: tuple[float, float]
    p2: tuple[float, float]
    distance: float


def _chart(u, th):
    """Compactified parameter chart: identifies the p_infinity funnel."""
    return np.exp(1j * th) / (u + 2.0)


def injectivity_scan(data: KobayashiData, grid_resolution: int = 200,
                     u_max: float = 3.0, margin: float = 0.01,
                     tol_param: float = 0.05,
                     max_reports: int = 200) -> list[Collision]:
    """Sampled self-intersection detection over the extension domain.

    Grid points that land close in the (x1, x2) plane with well-separated
    parameters seed a Gauss-Newton solve of f(q1) = f(q2); confirmed
    coincidences are genuine crossings up to solver precision, but a miss
    only means the grid never straddled one.  Sampling evidence, not a
    certification.  u-samples cluster quadratically towards the boundary,
    where the interesting geometry lives.
    """
    ev = SurfaceEvaluator(data)
    forms = build_oneforms(data)
    res = grid_resolution
    th = np.linspace(0.0, TWO_PI, res, endpoint=False)
    lo = np.asarray(data.angular.max_cos(th)) + margin
    s = (np.arange(res) / (res - 1.0)) ** 2
    u = lo[None, :] + s[:, None] * (u_max - lo)[None, :]
    U = u.ravel()
    TH = np.tile(th, res)
    vals = ev.eval_batch(U, TH)  # (3, N)
    plane = vals[1:]
    mu = _chart(U, TH)

    # local plane-resolution of the grid at each sample (step to u/theta neighbors)
    px = plane[0].reshape(res, res)
    py = plane[1].reshape(res, res)
    su_ = np.hypot(np.diff(px, axis=0), np.diff(py, axis=0))
    sth_ = np.hypot(px - np.roll(px, -1, axis=1), py - np.roll(py, -1, axis=1))
    local = np.maximum(np.pad(su_, ((0, 1), (0, 0)), mode="edge"), sth_).ravel()
    cell = 2.5 * float(np.median(local))

    cells: dict[tuple[int, int], list[int]] = {}
    keys = np.floor(plane.T / cell).astype(np.int64)
    for i, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(i)
    groups = {}
    for k, v in cells.items():
        arr = np.asarray(v)
        if arr.size > 800:
            arr = arr[:: (arr.size + 799) // 800]
        groups[k] = arr

    cand_i, cand_j = [], []
    forward = [(0, 0), (1, 0), (0, 1), (1, 1), (1, -1)]
    for key, A in groups.items():
        for oi, oj in forward:
            B = groups.get((key[0] + oi, key[1] + oj))
            if B is None:
                continue
            d2 = np.hypot(plane[0, A][:, None] - plane[0, B][None, :],
                          plane[1, A][:, None] - plane[1, B][None, :])
            near = (d2 < cell) \
                & (np.abs(mu[A][:, None] - mu[B][None, :]) > tol_param) \
                & (np.maximum(local[A][:, None], local[B][None, :]) > 0.15 * cell) \
                & (d2 < 2.5 * np.maximum(local[A][:, None], local[B][None, :]))
            if (oi, oj) == (0, 0):
                near &= A[:, None] < B[None, :]
            ia, jb = np.nonzero(near)
            cand_i.extend(A[ia])
            cand_j.extend(B[jb])
    if not cand_i:
        return []

    # dedupe candidates on the quantized parameter chart
    h = 0.5 * tol_param
    uniq: dict[tuple, int] = {}
    for k in range(len(cand_i)):
        i, j = cand_i[k], cand_j[k]
        ka = (round(mu[i].real / h), round(mu[i].imag / h))
        kb = (round(mu[j].real / h), round(mu[j].imag / h))
        uniq.setdefault((min(ka, kb), max(ka, kb)), k)
    picks = list(uniq.values())
    I = np.asarray([cand_i[k] for k in picks])
    J = np.asarray([cand_j[k] for k in picks])

    # Gauss-Newton on f(q2) - f(q1) = 0 over the four parameters
    u1, t1 = U[I].copy(), TH[I].copy()
    u2, t2 = U[J].copy(), TH[J].copy()
    alive = np.ones(I.size, dtype=bool)

    def residual(a1, b1, a2, b2):
        return ev.eval_batch(a2, b2) - ev.eval_batch(a1, b1)

    F = residual(u1, t1, u2, t2)
    rn = np.linalg.norm(F, axis=0)
    for _ in range(30):
        todo = alive & (rn > 1e-12)
        if not todo.any():
            break
        idx = np.nonzero(todo)[0]
        d1u, d1t = forms.partials(u1[idx], t1[idx])
        d2u, d2t = forms.partials(u2[idx], t2[idx])
        Jm = np.stack([-d1u, -d1t, d2u, d2t], axis=1)  # (3, 4, n)
        M = np.einsum("akn,bkn->nab", Jm, Jm)
        try:
            y = np.linalg.solve(M, F[:, idx].T[..., None])[..., 0]  # (n, 3)
        except np.linalg.LinAlgError:
            alive[idx] = False
            break
        step = -np.einsum("akn,na->kn", Jm, y)  # (4, n)
        alpha = np.ones(idx.size)
        best = (u1[idx].copy(), t1[idx].copy(), u2[idx].copy(), t2[idx].copy())
        best_rn = rn[idx].copy()
        undone = np.ones(idx.size, dtype=bool)
        for _try in range(12):
            c1u = u1[idx] + alpha * step[0]
            c1t = t1[idx] + alpha * step[1]
            c2u = u2[idx] + alpha * step[2]
            c2t = t2[idx] + alpha * step[3]
            inside = (c1u > np.asarray(data.angular.max_cos(c1t)) + 1e-12) \
                & (c2u > np.asarray(data.angular.max_cos(c2t)) + 1e-12) \
                & (c1u < 1e6) & (c2u < 1e6) \
                & (np.abs(_chart(c1u, c1t) - _chart(c2u, c2t)) > 0.5 * tol_param)
            crn = np.full(idx.size, np.inf)
            if inside.any():
                rr = residual(c1u[inside], c1t[inside], c2u[inside], c2t[inside])
                crn[inside] = np.linalg.norm(rr, axis=0)
            improved = undone & (crn < best_rn)
            for arr, cand in zip(best, (c1u, c1t, c2u, c2t)):
                arr[improved] = cand[improved]
            best_rn[improved] = crn[improved]
            undone &= ~improved
            if not undone.any():
                break
            alpha[undone] /= 2.0
        alive[idx[undone]] = False
        u1[idx], t1[idx], u2[idx], t2[idx] = best
        rn[idx] = best_rn
        F[:, idx] = residual(u1[idx], t1[idx], u2[idx], t2[idx])

    f1 = ev.eval_batch(u1, t1)
    scale = 1.0 + np.abs(f1).max(axis=0)
    confirmed = alive & (rn <= 1e-9 * scale) \
        & (np.abs(_chart(u1, t1) - _chart(u2, t2)) > tol_param)

    out: list[Collision] = []
    seen: list[tuple[complex, complex]] = []
    for k in np.nonzero(confirmed)[0]:
        m1, m2 = _chart(u1[k], t1[k]), _chart(u2[k], t2[k])
        dup = False
        for a, b in seen:
            if (abs(m1 - a) < h and abs(m2 - b) < h) or \
               (abs(m1 - b) < h and abs(m2 - a) < h):
                dup = True
                break
        if dup:
            continue
        seen.append((m1, m2))
        out.append(Collision((float(u1[k]), float(t1[k])),
                             (float(u2[k]), float(t2[k])), float(rn[k])))
        if len(out) >= max_reports:
            break
    return out


# ---------------------------------------------------------------------------
# aggregate classification
# ---------------------------------------------------------------------------

def umbilics(data: KobayashiData) -> tuple[tuple[complex, int], ...]:
    """Zeros of dg inside the open unit disk, with multiplicities."""
    N = dg_numerator(data)
    if N.degree == 0:
        return ()
    roots = N.roots()
    inside = [r for r in roots if abs(r) < 1.0 - 1e-9]
    return tuple(cluster_roots(inside, 1e-6))


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    principal: bool
    fold: FoldTypeReport
    period_residual: float
    conditions: ConditionReport
    ends: tuple[tuple[complex, int], ...]
    hopf_orders: tuple[int, int]
    entire_graph_certified: bool


def classify(data: KobayashiData) -> ClassificationReport:
    """Aggregate report: fold conditions, periods, gap criteria, umbilics, ends."""
    fold = verify_fold_type(data)
    period = period_check(data)
    cond = check_conditions(data.angular)
    cond = replace(cond, umbilics=umbilics(data))
    if not data.principal:
        # the rotation trick behind the witness construction needs b = 0
        cond = replace(cond, witness=None, immersion_witness=None)
    certified = (fold.is_fold_type and period < 1e-10 and data.principal
                 and cond.graph_condition is not Condition.VIOLATED
                 and (data.angular.is_distinct or data.n == 2))
    return ClassificationReport(
        n=data.n,
        principal=data.principal,
        fold=fold,
        period_residual=period,
        conditions=cond,
        ends=data.ends,
        hopf_orders=hopf_zero_pole_orders(data),
        entire_graph_certified=certified,
    )

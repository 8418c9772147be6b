import cmath
import math

import numpy as np
import pytest

from zmc.angular import AngularData, BlaschkeParams
from zmc.errors import BlaschkeOutOfDisk, AngularOrderError, InputError, PoleHit, RepeatedAngles
from zmc.gallery import elliptic_catenoid_negative, helicoid_negative
from zmc.polycheb import contour_residue
from zmc.weierstrass import (GeneralCoeffs, PrincipalCoeffs, build, coefficients,
                             dg_numerator, gauss_eval, hopf_differential,
                             hopf_zero_pole_orders, period_check,
                             principal_coefficients, verify_fold_type)

RNG = np.random.default_rng(42)


def scherk(n=2):
    return build(AngularData(n, tuple(math.pi * j / n for j in range(2 * n))),
                 BlaschkeParams(()))


def jorge_meeks(n):
    a = []
    for j in range(n):
        a += [2 * math.pi * j / n] * 2
    return build(AngularData(n, tuple(a)), BlaschkeParams(()))


def random_principal(n, rng=RNG, max_gap=None):
    bound = max_gap if max_gap is not None else 2 * math.pi
    while True:
        gaps = rng.uniform(0.05, 1.0, size=2 * n)
        gaps *= 2 * math.pi / gaps.sum()
        if gaps.max() < bound:
            alphas = np.concatenate([[0.0], np.cumsum(gaps[:-1])])
            return build(AngularData(n, tuple(alphas)), BlaschkeParams(()))


# ---------------------------------------------------------------- build

def test_build_scherk2():
    data = scherk(2)
    # omega = dz/(z^4 - 1) and g = z
    zs = RNG.standard_normal(8) + 1j * RNG.standard_normal(8)
    assert np.allclose([data.omega(z) for z in zs], 1.0 / (zs**4 - 1))
    assert np.allclose([gauss_eval(data, z) for z in zs], zs)
    assert data.principal
    assert abs(data.lambda_phase - (-1j)) < 1e-14


def test_build_jorge_meeks2_sign_convention():
    # assembling the product form verbatim gives omega = -i dz/(z^2-1)^2 for
    # angles (0, 0, pi, pi); the i dz/(z^n-1)^2 display differs by the
    # inversion f -> -f, which the normalized gallery entry absorbs
    data = jorge_meeks(2)
    zs = 0.4 * np.exp(1j * RNG.uniform(0, 2 * math.pi, 8))
    assert np.allclose([data.omega(z) for z in zs], -1j / (zs**2 - 1) ** 2)


def test_build_parabolic_example():
    data = build(AngularData(2, (0.0, 0.0, 0.0, math.pi)), BlaschkeParams(()))
    zs = 0.3 * np.exp(1j * RNG.uniform(0, 2 * math.pi, 8))
    assert np.allclose([data.omega(z) for z in zs],
                       -1.0 / ((zs - 1) ** 3 * (zs + 1)))


def test_build_rejects_bad_input():
    with pytest.raises(BlaschkeOutOfDisk):
        BlaschkeParams((1.2,))
    with pytest.raises(AngularOrderError):
        AngularData(2, (0.0, 2.0, 1.0, 3.0))
    with pytest.raises(AngularOrderError):
        AngularData(2, (0.1, 0.5, 1.0, 3.0))
    with pytest.raises(InputError):
        build(AngularData(2, (0.0, 1.0, 2.0, 3.0)), BlaschkeParams((0.3,)))


def test_principal_identity_with_single_product_form():
    # prod (e^{-ia/2} z - e^{ia/2}) = conj(Lambda) prod (z - e^{ia})
    data = random_principal(3)
    lam = data.lambda_phase
    zs = RNG.standard_normal(16) + 1j * RNG.standard_normal(16)
    direct = np.array([np.prod([cmath.exp(-0.5j * a) * z - cmath.exp(0.5j * a)
                                for a in data.angular.alphas]) for z in zs])
    viaends = lam.conjugate() * np.array(
        [np.prod([z - cmath.exp(1j * a) for a in data.angular.alphas]) for z in zs])
    assert np.max(np.abs(direct - viaends)) < 1e-10 * np.max(np.abs(direct))
    assert np.allclose(data.omega_den(zs), direct)


def test_gauss_eval_blaschke():
    data = build(AngularData(3, (0.0, 0.7, 1.4, 2.8, 4.0, 5.5)),
                 BlaschkeParams((0.3, 0.0)))
    assert abs(gauss_eval(data, 0.3)) < 1e-14          # zero of the product
    z = cmath.exp(1j * math.pi / 5)
    assert abs(abs(gauss_eval(data, z)) - 1.0) < 1e-12  # modulus 1 on the circle
    with pytest.raises(PoleHit):
        gauss_eval(data, 1 / 0.3)


def test_gauss_modulus_on_circle_everywhere():
    data = build(AngularData(4, tuple(math.pi * j / 4 for j in range(8))),
                 BlaschkeParams((0.2 + 0.1j, -0.4, 0.1j)))
    th = RNG.uniform(0, 2 * math.pi, 128)
    vals = np.array([gauss_eval(data, cmath.exp(1j * t)) for t in th])
    assert np.max(np.abs(np.abs(vals) - 1)) < 1e-12


# ---------------------------------------------------------------- phi forms

def test_nullity_of_phi_forms():
    for data in (scherk(2), scherk(4), jorge_meeks(3),
                 build(AngularData(3, (0.0, 0.7, 1.4, 2.8, 4.0, 5.5)),
                       BlaschkeParams((0.25, -0.1j)))):
        zs = RNG.standard_normal(64) + 1j * RNG.standard_normal(64)
        v = np.array([[data.phi[k](z) for z in zs] for k in range(3)])
        null = -v[0] ** 2 + v[1] ** 2 + v[2] ** 2
        scale = np.maximum(1.0, np.abs(v[0]) ** 2)
        assert np.max(np.abs(null) / scale) < 1e-10


# ---------------------------------------------------------------- Hopf differential

def test_hopf_scherk2():
    data = scherk(2)
    Q = hopf_differential(data)
    zs = 0.5 * np.exp(1j * RNG.uniform(0, 2 * math.pi, 8))
    assert np.allclose(Q(zs), 1.0 / (zs**4 - 1))
    assert {round(abs(p), 6) for p, _ in Q.poles} == {1.0}
    assert hopf_zero_pole_orders(data) == (4, 0)


def test_hopf_jorge_meeks3():
    data = jorge_meeks(3)
    Q = hopf_differential(data)
    zs = 0.5 * np.exp(1j * RNG.uniform(0, 2 * math.pi, 8))
    assert np.allclose(Q(zs), 2j * zs / (zs**3 - 1) ** 2)
    poles, zeros = hopf_zero_pole_orders(data)
    assert poles == 6 and zeros == 2
    assert poles - zeros == 4  # -2 chi(S^2)


def test_hopf_no_umbilics_at_order_two():
    data = scherk(2)
    assert dg_numerator(data).degree == 0


def test_hopf_degree_bookkeeping_random():
    for n in (2, 3, 4, 5):
        data = random_principal(n)
        poles, zeros = hopf_zero_pole_orders(data)
        assert poles == 2 * n and zeros == 2 * n - 4


def test_hopf_zero_multiset_inversion_symmetric():
    data = build(AngularData(4, tuple(math.pi * j / 4 for j in range(8))),
                 BlaschkeParams((-0.75, 0.0, 0.0)))
    roots = dg_numerator(data).roots()
    finite = [r for r in roots if abs(r) > 1e-8]
    for r in finite:
        assert min(abs(1 / r.conjugate() - s) for s in finite) < 1e-6


# ---------------------------------------------------------------- fold type

def test_fold_type_scherk_normalized_example():
    # example-normalized pair g = z, omega = 2 dz/(z^4-1): dg/(g^2 omega)
    # equals i sin(2 theta) on the circle
    rep = verify_fold_type(scherk(2))
    assert rep.is_fold_type
    assert rep.max_re_condition < 1e-12


def test_fold_type_helicoid_fails_ends():
    rep = verify_fold_type(helicoid_negative().pair)
    assert not rep.ends_on_circle
    assert not rep.is_fold_type
    assert rep.max_re_condition < 1e-12  # it does admit only folds


def test_fold_type_elliptic_catenoid_fails_ends():
    rep = verify_fold_type(elliptic_catenoid_negative().pair)
    assert not rep.ends_on_circle
    assert not rep.is_fold_type


def test_fold_type_general_blaschke():
    data = build(AngularData(3, (0.0, 0.7, 1.4, 2.8, 4.0, 5.5)),
                 BlaschkeParams((0.25, -0.1j)))
    rep = verify_fold_type(data)
    assert rep.is_fold_type and rep.interior_ok


def test_fold_type_sample_count_guard():
    with pytest.raises(InputError):
        verify_fold_type(scherk(2), samples=4)


# ---------------------------------------------------------------- periods

def test_period_residues_scherk():
    data = scherk(2)
    assert abs(data.phi[1].residue(1.0) - 0.5) < 1e-13
    assert abs(data.phi[2].residue(1.0)) < 1e-13
    assert period_check(data) < 1e-10


def test_period_parabolic_contour_oracle():
    data = build(AngularData(2, (0.0, 0.0, 0.0, math.pi)), BlaschkeParams(()))
    assert period_check(data) < 1e-10
    for k in range(3):
        for pole in (1.0, -1.0):
            ora = contour_residue(data.phi[k], pole, 0.02)
            assert abs(ora.imag) < 1e-8


def test_period_random_data():
    for n in (2, 3, 4):
        data = random_principal(n)
        assert period_check(data) < 1e-10


# ---------------------------------------------------------------- coefficients

def test_coefficients_scherk2():
    c = coefficients(scherk(2))
    assert isinstance(c, PrincipalCoeffs)
    assert np.allclose(c.A, [0.25, -0.25, 0.25, -0.25])


def test_coefficients_sum_rules_and_signs():
    for n in (2, 3, 4, 5, 6):
        data = random_principal(n)
        c = coefficients(data)
        W = c.weights()
        assert np.max(np.abs(W.sum(axis=1))) < 1e-12
        A = np.asarray(c.A)
        # adjacent log-coefficients alternate in sign
        assert np.all(A[:-1] * A[1:] < 0)
        assert A[1] * A[2] < 0


def test_coefficients_general_match_principal_limit():
    data = scherk(3)
    cp = principal_coefficients(data.angular)
    B = []
    for k in range(3):
        B.append([data.phi[k].residue(cmath.exp(1j * a)).real
                  for a in data.angular.alphas])
    ref = np.vstack([-2 * np.asarray(cp.A),
                     2 * np.asarray(cp.A) * np.cos(2 * np.asarray(cp.alphas)),
                     2 * np.asarray(cp.A) * np.sin(2 * np.asarray(cp.alphas))])
    assert np.max(np.abs(np.asarray(B) - ref)) < 1e-12


def test_coefficients_general_type():
    data = build(AngularData(3, (0.0, 0.7, 1.4, 2.8, 4.0, 5.5)),
                 BlaschkeParams((0.25, -0.1j)))
    c = coefficients(data)
    assert isinstance(c, GeneralCoeffs)
    B = np.asarray(c.B)
    assert np.max(np.abs(B.sum(axis=1))) < 1e-10


def test_coefficients_repeated_angles_rejected():
    with pytest.raises(RepeatedAngles):
        coefficients(jorge_meeks(2))


def test_ends_with_multiplicity():
    data = jorge_meeks(3)
    ends = data.ends
    assert len(ends) == 3
    assert all(m == 2 for _, m in ends)
    assert all(abs(abs(e) - 1) < 1e-14 for e, _ in ends)


def test_angle_hugging_two_pi_merges_with_zero_end():
    # an end at 2*pi - eps coincides with the end at 0 to working precision
    ang = AngularData(2, (0.0, 1.5, 3.0, 2 * math.pi - 1e-13))
    assert ang.num_distinct == 3
    assert ang.multiplicities[0] == 2
    data = build(ang, BlaschkeParams(()))
    assert period_check(data) < 1e-9

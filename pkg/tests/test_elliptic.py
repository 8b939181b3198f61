import cmath
import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wkmoduli.elliptic import (
    RADICAND_ROOTS,
    EllipticPoint,
    ParamPair,
    ab_from_z,
    identity_residuals,
    lm_from_z,
    psi,
    psi_limits_at_flat_point,
    psi_ramification_scan,
    psi_z_derivatives,
    radicand,
    z_preimages,
)
from wkmoduli.errors import PoleAtZero, PoleOfPsi
from wkmoduli.moduli import ab_coords, q_poly, solve_L_given_M
from wkmoduli.space import ModuliParams

SQ5 = math.sqrt(5.0)
PHI = (1 + SQ5) / 2

zs = st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False)


def _away(z, d=1e-2):
    return abs(z) > d and all(abs(z - r) > d for r in RADICAND_ROOTS)


def test_radicand_values_and_roots():
    assert radicand(0.5) == pytest.approx(2.0625, abs=1e-15)
    assert radicand(1) == 0
    assert abs(radicand(2 + SQ5)) < 1e-12
    assert abs(radicand(2 - SQ5)) < 1e-12
    ref = sorted(np.roots(np.polymul([1, 1], [1, -5, 3, 1])).real)
    assert ref == pytest.approx(sorted(RADICAND_ROOTS), abs=1e-12)
    for r in RADICAND_ROOTS:
        assert abs(radicand(r)) < 1e-12


def test_radicand_factorisation_symbolic():
    z = sp.symbols("z")
    assert sp.expand(radicand(z) - (z + 1) * (z - 1) * (z - 2 - sp.sqrt(5)) * (z - 2 + sp.sqrt(5))) == 0
    # the identities for L - M and L M force R = (z - 1)^4 - 8 z (z - 1)
    # the identity behind the corrected M(z)
    assert sp.expand((z - 1) ** 4 - radicand(z) - 8 * z * (z - 1)) == 0


def test_lm_example_half():
    lm = lm_from_z(EllipticPoint(0.5, 1))
    assert lm.L.real == pytest.approx(-1.26461, abs=1e-5)
    assert lm.M.real == pytest.approx(-0.88961, abs=1e-5)
    a, _ = ab_coords(lm.L, lm.M)
    assert a == pytest.approx(-0.75, abs=1e-12)
    assert max(identity_residuals(EllipticPoint(0.5, 1))) < 1e-12


def test_lm_at_one_and_minus_one():
    lm = lm_from_z(EllipticPoint(1.0, 1))
    assert lm.L == 0 and lm.M == 0
    pt = EllipticPoint(-1.0, 1)
    lm = lm_from_z(pt)
    assert lm.L - lm.M == 0 and lm.L * lm.M == 0


def test_identity_complex_point():
    assert max(identity_residuals(EllipticPoint(2 + 0.5j, 1))) < 1e-10
    assert max(identity_residuals(EllipticPoint(2 + 0.5j, -1))) < 1e-10


def test_pole_at_zero():
    with pytest.raises(PoleAtZero):
        lm_from_z(EllipticPoint(0.0, 1))
    with pytest.raises(ValueError):
        EllipticPoint(1.0, 0)


@settings(max_examples=200)
@given(zs, st.sampled_from([1, -1]))
def test_membership_and_identities(z, sheet):
    assume(_away(z))
    pt = EllipticPoint(z, sheet)
    lm = lm_from_z(pt)
    assert lm.q_residual < 1e-9
    d, p = identity_residuals(pt)
    scale = max(1.0, abs(z) ** 2, 1 / abs(z))
    assert d < 1e-10 * scale and p < 1e-10 * scale
    a, b = ab_coords(lm.L, lm.M)
    a_z, b_z = ab_from_z(z)
    assert abs(a - a_z) < 1e-12 * max(1.0, abs(a_z))
    assert abs(b - b_z) < 1e-10 * max(1.0, abs(b_z))


def test_membership_against_mpmath():
    # evaluate Q(1, L(z), M(z)) at 50 digits
    mpmath.mp.dps = 50
    for z in (0.5, 2 + 0.5j, -0.3 + 1.1j, 3.7):
        zm = mpmath.mpc(z)
        w = mpmath.sqrt((zm + 1) * (1 + 3 * zm - 5 * zm ** 2 + zm ** 3))
        L = -(1 + zm) * ((zm - 1) ** 2 + w) / (4 * zm)
        M = (1 + zm) * ((zm - 1) ** 2 - w) / (4 * zm)
        assert abs(q_poly(1, L, M)) < mpmath.mpf(10) ** -40
        ours = lm_from_z(EllipticPoint(z, 1))
        assert abs(complex(L) - ours.L) < 1e-12 * max(1, abs(ours.L))


@pytest.mark.parametrize("branch", ["plus", "minus"])
def test_z_preimages_of_real_curve(branch):
    for M in (0.2, 1.0, 3.5):
        L = solve_L_given_M(M, branch)
        pre = z_preimages(L, M)
        assert pre
        for pt in pre:
            lm = lm_from_z(pt)
            assert lm.L == pytest.approx(L, abs=1e-9) and lm.M == pytest.approx(M, abs=1e-9)


def test_sasakian_preimages():
    a = 1 - 2 * (1 - SQ5) / 4
    assert 1 + a == pytest.approx((3 + SQ5) / 2)
    zs_minus = {round(pt.z.real, 9) for pt in z_preimages((1 - SQ5) / 4, 1.0)}
    zs_plus = {round(pt.z.real, 9) for pt in z_preimages((1 + SQ5) / 4, 1.0)}
    assert round(-PHI, 9) in zs_minus
    assert round(1 / PHI, 9) in zs_plus


def test_psi_values():
    for L in ((1 - SQ5) / 4, (1 + SQ5) / 4):
        assert psi(ModuliParams(1.0, L, 1.0)) == pytest.approx(L ** 2)
    assert psi((2.0, 1.0, 3.0)) == pytest.approx(1 / 6)
    with pytest.raises(PoleOfPsi):
        psi(ModuliParams(0.0, 1.0, 0.0))


def _cauchy_derivatives(z0, w0, r=1e-2, n=64):
    """Psi', Psi'' by the trapezoidal Cauchy integral on a small circle."""
    ts = np.arange(n) * 2 * np.pi / n
    vals = []
    w = w0
    # continue the square root around the circle starting next to z0
    prev = w0
    for t in ts:
        zz = z0 + r * cmath.exp(1j * t)
        w = cmath.sqrt(radicand(zz))
        if abs(w - prev) > abs(w + prev):
            w = -w
        prev = w
        lm = lm_from_z(EllipticPoint(zz, 1), w)
        vals.append(lm.L ** 2 / lm.M)
    vals = np.array(vals)
    e = np.exp(-1j * ts)
    d1 = np.mean(vals * e) / r
    d2 = 2 * np.mean(vals * e ** 2) / r ** 2
    return d1, d2


@pytest.mark.parametrize("z0,sheet", [(0.5, 1), (2 + 0.5j, -1), (-0.7 + 0.8j, 1), (-PHI, -1), (1 / PHI, -1)])
def test_psi_derivatives_against_cauchy_integral(z0, sheet):
    w0 = EllipticPoint(z0, sheet).w
    f, f1, f2 = psi_z_derivatives(z0, w0)
    lm = lm_from_z(EllipticPoint(z0, sheet))
    assert f == pytest.approx(lm.L ** 2 / lm.M, rel=1e-12)
    c1, c2 = _cauchy_derivatives(z0, w0)
    assert abs(f1 - c1) < 1e-9 * max(1, abs(f1))
    assert abs(f2 - c2) < 1e-8 * max(1, abs(f2))


def test_psi_second_derivative_symbolic_at_sasakian():
    z = sp.symbols("z")
    w = -sp.sqrt(radicand(z))  # sheet -1 at these real points
    L = -(1 + z) * ((z - 1) ** 2 + w) / (4 * z)
    M = (1 + z) * ((z - 1) ** 2 - w) / (4 * z)
    f = L ** 2 / M
    for z0 in (-(1 + sp.sqrt(5)) / 2, (sp.sqrt(5) - 1) / 2):
        d1 = sp.N(sp.diff(f, z).subs(z, z0), 30)
        d2 = sp.N(sp.diff(f, z, 2).subs(z, z0), 30)
        ours = psi_z_derivatives(complex(sp.N(z0)), EllipticPoint(float(z0), -1).w)
        assert abs(d1) < 1e-25
        assert abs(complex(d2) - ours[2]) < 1e-9


def test_psi_limits_at_flat_point():
    value, deriv = psi_limits_at_flat_point()
    assert abs(value) < 1e-6
    assert abs(deriv - 1) < 1e-6


def test_ramification_scan_finds_sasakian_critical_points():
    found = psi_ramification_scan()
    for z0 in (-PHI, 1 / PHI):
        hits = [c for c in found if abs(c.z - z0) < 1e-8]
        assert len(hits) == 1
        c = hits[0]
        assert abs(c.dpsi) < 1e-6
        assert abs(c.M - 1) < 1e-9
    # every reported point really is critical and not an excluded point
    for c in found:
        assert abs(c.dpsi) < 1e-6
        assert min(abs(c.z - e) for e in [0, *RADICAND_ROOTS]) > 1e-3
        assert c.order in (1, 2)


def test_ramification_scan_classification_contract():
    found = psi_ramification_scan()
    generic = [c for c in found if abs(c.z + PHI) > 1e-6 and abs(c.z - 1 / PHI) > 1e-6]
    assert generic
    for c in generic:
        assert c.order == 1 and abs(c.d2psi) > 1e-6


def test_ramification_scan_region_without_critical_points():
    assert psi_ramification_scan(region=(2.0, 2.5, 1.0, 1.5), grid=(4, 4)) == []


def test_param_pair_residual():
    assert ParamPair(0.0, 0.0).q_residual == 0.0
    assert ParamPair(-1.0, 1.0).q_residual == pytest.approx(5 / 27)

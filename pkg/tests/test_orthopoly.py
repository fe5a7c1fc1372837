"""Special functions and polynomial families against independent oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal
from scipy.special import iv

from multiboson import orthopoly as op
from multiboson.errors import NumericalFailureError


# ---------------------------------------------------------------------------
# scalar special functions

def test_ln_gamma_trivial():
    assert op.ln_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert op.ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-13)


def test_ln_gamma_frozen_high_precision():
    # 30-digit series oracle
    assert op.ln_gamma(0.3) == pytest.approx(1.09579799481807552167716814237, rel=1e-12)


def test_ln_gamma_domain():
    with pytest.raises(ValueError):
        op.ln_gamma(0.0)
    with pytest.raises(ValueError):
        op.ln_gamma(-2.0)


def test_gamma_abs_sq():
    assert op.gamma_abs_sq(0.5, 0.0) == pytest.approx(math.pi, rel=1e-12)
    assert op.gamma_abs_sq(1.0, 0.0) == pytest.approx(1.0, rel=1e-12)
    # |Gamma(1/2 + i)|^2 = pi / cosh(pi)
    assert op.gamma_abs_sq(0.5, 1.0) == pytest.approx(math.pi / math.cosh(math.pi),
                                                      rel=1e-10)
    with pytest.raises(ValueError):
        op.gamma_abs_sq(0.0, 1.0)


def test_hyp0f1_trivial_and_bessel_oracle():
    assert op.hyp0f1(0.7, 0.0) == pytest.approx(1.0, abs=1e-15)
    # 0F1(; 1; x) = I_0(2 sqrt(x))
    assert op.hyp0f1(1.0, 1.0) == pytest.approx(float(iv(0, 2.0)), rel=1e-13)


def test_hyp0f1_direct_summation_oracle():
    total, term = 1.0, 1.0
    for k in range(200):
        term *= 4.0 / ((k + 1.0) * (2.0 + k))
        total += term
    assert op.hyp0f1(2.0, 4.0) == pytest.approx(total, rel=1e-14)
    assert op.hyp0f1(2.0, 4.0) == pytest.approx(4.87973257685222495, rel=1e-13)


def test_hyp0f1_complex_and_domain():
    z = 1.0 + 2.0j
    val = op.hyp0f1(1.5, z)
    assert isinstance(val, complex)
    with pytest.raises(ValueError):
        op.hyp0f1(-1.0, 1.0)


def test_hyp3f2_terminating():
    assert op.hyp3f2_terminating(0, 5.0, -3.0, 7.7, 0.1) == 1.0
    b, c, d, e = 2.0, 3.0, 5.0, 7.0
    assert op.hyp3f2_terminating(1, b, c, d, e) == pytest.approx(
        1.0 - b * c / (d * e), rel=1e-14)
    # exact rational oracle
    total, term = Fraction(1), Fraction(1)
    for k in range(3):
        term *= Fraction((-3 + k) * (-2 + k) * (4 + k), (2 + k) * (-3 + k) * (k + 1))
        total += term
    assert op.hyp3f2_terminating(3, -2.0, 4.0, 2.0, -3.0) == pytest.approx(
        float(total), rel=1e-14)


@given(st.floats(0.1, 5.0), st.floats(-4.0, 4.0), st.floats(0.1, 5.0),
       st.floats(0.1, 5.0))
def test_hyp3f2_degree_zero_is_one(b, c, d, e):
    assert op.hyp3f2_terminating(0, b, c, d, e) == 1.0


def test_hyp3f2_lower_parameter_pole():
    with pytest.raises(ValueError):
        op.hyp3f2_terminating(3, 1.0, 1.0, -1.0, 2.0)
    # a lower parameter at -n exactly is fine: the zero sits past the last term
    op.hyp3f2_terminating(3, 1.0, 1.0, -3.0, 2.0)


def _bessel_k_quadrature(nu, x):
    f = lambda t: math.exp(-x * math.cosh(t)) * math.cosh(nu * t)
    val = quad(f, 0, 30, limit=400)[0]
    return val


@pytest.mark.parametrize("nu,x", [(1.5, 2.0), (0.0, 1.0)])
def test_bessel_k_integral_oracle(nu, x):
    assert op.bessel_k(nu, x) == pytest.approx(_bessel_k_quadrature(nu, x), rel=1e-10)


def test_bessel_k_half_integer_closed_form():
    assert op.bessel_k(0.5, 1.0) == pytest.approx(
        math.sqrt(math.pi / 2.0) * math.exp(-1.0), rel=1e-12)
    with pytest.raises(ValueError):
        op.bessel_k(0.5, 0.0)


def test_bessel_k_derivative_identity():
    # K_{nu-1}(x) + K_{nu+1}(x) = -2 dK_nu/dx
    for nu, x in ((0.7, 1.3), (2.0, 0.8)):
        h = 1e-6
        dk = (op.bessel_k(nu, x + h) - op.bessel_k(nu, x - h)) / (2 * h)
        lhs = op.bessel_k(nu - 1, x) + op.bessel_k(nu + 1, x)
        assert lhs == pytest.approx(-2.0 * dk, rel=1e-6)


# ---------------------------------------------------------------------------
# families: construction contracts

def test_family_validation():
    with pytest.raises(ValueError):
        op.Laguerre(-1.0)
    with pytest.raises(ValueError):
        op.Meixner(0.0, 0.5)
    with pytest.raises(ValueError):
        op.Meixner(1.0, 1.0)
    with pytest.raises(ValueError):
        op.MeixnerPollaczek(1.0, math.pi)
    with pytest.raises(ValueError):
        op.DualHahn(-1.5, 0.0, 3)
    with pytest.raises(ValueError):
        op.ContinuousDualHahn(-0.6, 0.5, 0.5)  # u + v <= 0


def test_orthonormal_degree_zero_is_one():
    for fam in (op.Laguerre(0.3), op.Meixner(1.0, 0.2),
                op.MeixnerPollaczek(0.5, 1.0), op.DualHahn(0.0, 0.0, 2),
                op.ContinuousDualHahn(0.3, 0.4, 0.5)):
        assert op.eval_orthonormal(fam, 0, 1.234) == 1.0


def test_meixner_degree_one_by_hand():
    # a_0 = (1+c)/(1-c) beta = 1.25, b_0 = 2 sqrt(c)/(1-c) = 0.75 for beta=1, c=1/9
    fam = op.Meixner(1.0, 1.0 / 9.0)
    x = 3.0  # first excited atom, 2*1 + beta
    assert op.eval_orthonormal(fam, 1, x) == pytest.approx((x - 1.25) / 0.75, rel=1e-14)


def test_dual_hahn_two_point_gram_by_hand():
    fam = op.DualHahn(0.0, 0.0, 1)
    meas = fam.measure(normalize=True)
    locs = meas.atom_locations()
    ws = meas.atom_weights()
    assert np.allclose(locs, [0.0, 2.0])
    assert np.allclose(ws, [0.5, 0.5])
    p1 = [op.eval_orthonormal(fam, 1, x) for x in locs]
    assert p1 == pytest.approx([-1.0, 1.0], rel=1e-14)
    assert ws @ np.square(p1) == pytest.approx(1.0, rel=1e-14)
    assert ws @ p1 == pytest.approx(0.0, abs=1e-14)


def test_dual_hahn_degree_overflow():
    with pytest.raises(ValueError):
        op.eval_orthonormal(op.DualHahn(0.0, 0.0, 2), 3, 1.0)


def test_meixner_measure_normalization():
    fam = op.Meixner(0.7, 1.0 / 9.0)
    printed = fam.measure()
    assert printed.atom_weights()[0] == pytest.approx(1.0)  # (beta)_0 c^0 / 0!
    assert printed.total_mass() == pytest.approx((1 - 1 / 9.0) ** (-0.7), rel=1e-12)
    normalized = fam.measure(normalize=True)
    assert normalized.atom_mass() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(normalized.atom_locations()[:3], [0.7, 2.7, 4.7])


def test_cdh_atom_count():
    assert op.ContinuousDualHahn(-0.2, 0.5, 0.5).n_atoms() == 1
    assert op.ContinuousDualHahn(-1.3, 2.0, 1.7).n_atoms() == 2
    assert op.ContinuousDualHahn(0.5, 0.5, 1.0).n_atoms() == 0
    atoms = op.ContinuousDualHahn(-1.3, 2.0, 1.7).measure().atoms
    assert [a[0] for a in atoms] == pytest.approx([1.69, 0.09])


def test_measure_mapped_affine():
    fam = op.Meixner(1.0, 0.25)
    meas = fam.measure(n_atoms=5).mapped(shift=1.0, scale=-2.0)
    assert meas.atom_locations()[0] == pytest.approx(-2.0 * 1.0 + 1.0)
    assert meas.scale == -2.0 and meas.shift == 1.0
    lag = op.Laguerre(0.5).measure().mapped(scale=0.5)
    lo, hi = lag.continuous.support
    assert lo == 0.0 and math.isinf(hi)
    # pushforward density: mass on a window is preserved
    raw = op.Laguerre(0.5).measure()
    m1 = quad(raw.continuous.density, 0, 2, limit=200)[0]
    m2 = quad(lag.continuous.density, 0, 1, limit=200)[0]
    assert m1 == pytest.approx(m2, rel=1e-9)


def test_spectral_measure_invariants():
    with pytest.raises(ValueError):
        op.SpectralMeasure(atoms=((0.0, -1.0),))
    with pytest.raises(ValueError):
        op.SpectralMeasure(scale=0.0)


# ---------------------------------------------------------------------------
# orthonormality suites

def test_gram_discrete_families():
    assert op.gram_check(op.DualHahn(0.0, 0.0, 3), 3) <= 1e-10
    assert op.gram_check(op.Meixner(1.0, 1.0 / 9.0), 8) <= 1e-10


def test_gram_continuous_families():
    assert op.gram_check(op.Laguerre(-0.5), 10) <= 1e-7
    assert op.gram_check(op.MeixnerPollaczek(0.75, math.pi / 2), 6) <= 1e-7


def test_gram_cdh_both_regimes():
    assert op.gram_check(op.ContinuousDualHahn(-0.2, 0.5, 0.5), 8) <= 1e-6
    assert op.gram_check(op.ContinuousDualHahn(0.5, 0.5, 1.0), 8) <= 1e-6
    assert op.gram_check(op.ContinuousDualHahn(-1.3, 2.0, 1.7), 6) <= 1e-6


@pytest.mark.parametrize("fam,n", [
    (op.Laguerre(0.0), 10),
    (op.Meixner(2.7, 0.4), 10),
    (op.MeixnerPollaczek(1.35, 2.2), 8),
])
def test_gram_wider_parameters(fam, n):
    assert op.gram_check(fam, n) <= 1e-7


def test_dual_hahn_atoms_match_jacobi_eigenvalues():
    # the K+1 atoms are the eigenvalues of the (K+1)x(K+1) Jacobi matrix
    for gamma, delta, K in ((0.0, 0.0, 3), (-0.5, 1.7, 5), (1.7, -0.5, 6)):
        fam = op.DualHahn(gamma, delta, K)
        d = np.array([fam.recurrence(k)[0] for k in range(K + 1)])
        e = np.array([fam.recurrence(k)[1] for k in range(K)])
        w = eigh_tridiagonal(d, e, eigvals_only=True) if K else d
        locs = np.sort(fam.measure().atom_locations())
        assert np.abs(np.sort(w) - locs).max() <= 1e-10


def test_three_term_consistency_random_points():
    rng = np.random.default_rng(7)
    for fam in (op.Laguerre(0.3), op.Meixner(1.5, 0.3),
                op.MeixnerPollaczek(0.6, 1.2), op.ContinuousDualHahn(0.4, 0.8, 1.1)):
        for x in rng.uniform(-5, 5, size=20):
            table = op.poly_table(fam, 11, x)
            for k in range(1, 10):
                ak, bk = fam.recurrence(k)
                _, bkm = fam.recurrence(k - 1)
                resid = x * table[k] - (bkm * table[k - 1] + ak * table[k]
                                        + bk * table[k + 1])
                assert abs(resid) <= 1e-9 * max(1.0, abs(x * table[k]))

"""Coherent states of the lowering generator and the holomorphic picture.

A coherent state |zeta> has amplitudes zeta^k / sqrt(k! (alpha0)_k) over a
sector basis, squared norm 0F1(; alpha0; |zeta|^2), and reproducing kernel
K(conj(eta), zeta) = 0F1(; alpha0; conj(eta) zeta).

The radial weight making the monomials zeta^k / sqrt(k! (alpha0)_k) an
orthonormal system must satisfy the moment identity

    integral |zeta|^{2k} dmu = k! (alpha0)_k,   k = 0, 1, 2, ...

The weight shipping here is the one derived from that identity,

    dmu = [2 rho^{alpha0 - 1} K_{alpha0 - 1}(2 rho) / (pi Gamma(alpha0))]
          rho drho dphi,

verified against quadrature at construction.  A weight with both indices
raised by one (rho^{alpha0} K_{alpha0}(2 rho) / (2 pi Gamma(alpha0))) is
kept as ``reference_weight`` for comparison: its k-th moment overshoots by
the factor (alpha0 + k)/4, so no constant rescale can repair it.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, kv

from .errors import NumericalFailureError
from .orthopoly import hyp0f1, ln_pochhammer
from .rep import StateVector

__all__ = [
    "CoherentState",
    "coherent_amplitudes",
    "kernel",
    "RadialMeasure",
    "radial_measure",
    "holo_apply",
    "SU11Element",
    "su11_flow",
    "disc_eigenfunction",
]

TAIL_EPS = 1e-16


def _amp_array(zeta: complex, alpha0: float, n: int) -> np.ndarray:
    # zeta^k / sqrt(k! (alpha0)_k), the k! (alpha0)_k factor in log space
    k = np.arange(n)
    lg = np.array([0.5 * (gammaln(j + 1) + ln_pochhammer(alpha0, j))
                   for j in range(n)])
    return np.asarray(zeta, dtype=complex) ** k * np.exp(-lg)


@dataclass(frozen=True)
class CoherentState:
    """Eigenvector data of the lowering generator at eigenvalue zeta.

    The truncation must swallow the amplitude tail: the N-th squared term
    |zeta|^{2N} / (N! (alpha0)_N) has to stay below 1e-16 of the accumulated
    squared norm.
    """

    zeta: complex
    alpha0: float
    n: int

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        amps = _amp_array(self.zeta, self.alpha0, self.n + 1)
        norm2 = float(np.sum(np.abs(amps[:-1]) ** 2))
        if abs(amps[-1]) ** 2 > TAIL_EPS * norm2:
            raise ValueError(
                f"truncation {self.n} too small for |zeta| = {abs(self.zeta)}"
            )

    def state(self) -> StateVector:
        return StateVector(_amp_array(self.zeta, self.alpha0, self.n))


def required_levels(zeta: complex, alpha0: float) -> int:
    """Smallest truncation meeting the tail criterion."""
    n = 8
    while n < 100_000:
        amps = _amp_array(zeta, alpha0, n + 1)
        if abs(amps[-1]) ** 2 <= TAIL_EPS * float(np.sum(np.abs(amps[:-1]) ** 2)):
            return n
        n *= 2
    raise NumericalFailureError(f"no adequate truncation for zeta = {zeta}")


def coherent_amplitudes(zeta: complex, alpha0: float, n: int) -> StateVector:
    """Unnormalized amplitudes zeta^k / sqrt(k! (alpha0)_k), k < n."""
    if alpha0 <= 0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    return StateVector(_amp_array(zeta, alpha0, n))


def kernel(z: complex, alpha0: float) -> complex:
    """Reproducing kernel 0F1(; alpha0; z) evaluated at z = conj(eta) zeta."""
    return hyp0f1(alpha0, z)


@dataclass(frozen=True)
class RadialMeasure:
    """Rotation-invariant weight w(rho) with dmu = w(rho) rho drho dphi."""

    alpha0: float
    k_checked: int = 8

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        worst = max(self.moment_error(k) for k in range(self.k_checked + 1))
        if worst > 1e-6:
            raise NumericalFailureError(
                f"moment identity violated at construction: rel err {worst:.2e}"
            )

    def weight(self, rho: float) -> float:
        a = self.alpha0
        if rho <= 0:
            return 0.0
        return (2.0 * rho ** (a - 1.0) * kv(a - 1.0, 2.0 * rho)
                / (math.pi * math.exp(gammaln(a))))

    def reference_weight(self, rho: float) -> float:
        """Weight with both indices raised; fails the moment identity."""
        a = self.alpha0
        if rho <= 0:
            return 0.0
        return rho ** a * kv(a, 2.0 * rho) / (2.0 * math.pi * math.exp(gammaln(a)))

    def moment(self, k: int, weight=None) -> float:
        """integral rho^{2k} w(rho) 2 pi rho drho by quadrature."""
        w = self.weight if weight is None else weight
        f = lambda r: w(r) * r ** (2 * k) * 2.0 * math.pi * r
        val = 0.0
        for a, b in ((0.0, 1.0), (1.0, 5.0), (5.0, 15.0), (15.0, 40.0 + 4.0 * k)):
            val += quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=300)[0]
        return val

    def target_moment(self, k: int) -> float:
        """k! (alpha0)_k."""
        return math.exp(gammaln(k + 1) + ln_pochhammer(self.alpha0, k))

    def moment_error(self, k: int) -> float:
        t = self.target_moment(k)
        return abs(self.moment(k) - t) / t


def radial_measure(alpha0: float, k_checked: int = 8) -> RadialMeasure:
    """Moment-matched radial measure for the holomorphic representation."""
    return RadialMeasure(alpha0, k_checked)


def holo_apply(which: str, coeffs, alpha0: float) -> np.ndarray:
    """Generator action on holomorphic polynomial coefficients.

    A0 = 2 z d/dz + alpha0, A+ = multiplication by z,
    A- = (alpha0 + z d/dz) d/dz; exact on coefficient lists.
    """
    if alpha0 <= 0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    c = np.asarray(coeffs, dtype=complex)
    if which == "A0":
        k = np.arange(c.size)
        return (2.0 * k + alpha0) * c
    if which == "Aplus":
        return np.concatenate([np.zeros(1, dtype=complex), c])
    if which == "Aminus":
        if c.size <= 1:
            return np.zeros(max(c.size - 1, 1), dtype=complex)
        k = np.arange(1, c.size)
        return k * (alpha0 + k - 1.0) * c[1:]
    raise ValueError(f"which must be 'A0', 'Aplus' or 'Aminus', got {which!r}")


@dataclass(frozen=True)
class SU11Element:
    """Matrix [[a, b], [conj(b), conj(a)]] with |a|^2 - |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        det = abs(self.a) ** 2 - abs(self.b) ** 2
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"determinant {det} too far from 1")

    def det(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    def multiply(self, other: "SU11Element") -> "SU11Element":
        a = self.a * other.a + self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        return SU11Element(a, b)


def su11_flow(mu: float, nu: float, t: float) -> SU11Element:
    """Disc-model flow element at time t for labels (mu, nu).

    a(t) = cos(sqrt(mu nu) t) + i (mu+nu)/2 * sinc,  b(t) = i (nu-mu)/2 * sinc,
    where sinc = sin(sqrt(mu nu) t)/sqrt(mu nu) continues to sinh/x for
    mu nu < 0 and to t at mu nu = 0.
    """
    if mu == 0 and nu == 0:
        raise ValueError("label pair (0, 0) is excluded")
    p = mu * nu
    if p > 0:
        om = math.sqrt(p)
        cos_t = math.cos(om * t)
        sinc_t = math.sin(om * t) / om
    elif p < 0:
        om = math.sqrt(-p)
        cos_t = math.cosh(om * t)
        sinc_t = math.sinh(om * t) / om
    else:
        cos_t = 1.0
        sinc_t = t
    a = complex(cos_t, 0.5 * (mu + nu) * sinc_t)
    b = complex(0.0, 0.5 * (nu - mu) * sinc_t)
    return SU11Element(a, b)


def disc_eigenfunction(lam: float, mu: float, nu: float, alpha0: float,
                       z: complex) -> complex:
    """Eigenfunction of the first-order disc generator at eigenvalue lam.

    phi(z) = (z - z1)^A (z - z2)^B with z1 = -(sqrt(mu)-sqrt(nu))^2/(mu-nu),
    z2 = -(sqrt(mu)+sqrt(nu))^2/(mu-nu), A = lam/(2 sqrt(mu nu)) - alpha0/2,
    B = -lam/(2 sqrt(mu nu)) - alpha0/2 (so A + B = -alpha0).  Principal
    branches; requires mu > nu > 0 and |z| < 1, and z at least 1e-8 away
    from each branch point.
    """
    if not (mu > nu > 0):
        raise ValueError(f"requires mu > nu > 0, got mu={mu}, nu={nu}")
    if alpha0 <= 0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    if abs(z) >= 1:
        raise ValueError(f"requires |z| < 1, got |z| = {abs(z)}")
    rm = math.sqrt(mu)
    rn = math.sqrt(nu)
    z1 = -((rm - rn) ** 2) / (mu - nu)
    z2 = -((rm + rn) ** 2) / (mu - nu)
    if abs(z - z1) < 1e-8 or abs(z - z2) < 1e-8:
        raise ValueError(f"z = {z} too close to a branch point")
    p = lam / (2.0 * rm * rn)
    a_exp = p - alpha0 / 2.0
    b_exp = -p - alpha0 / 2.0
    return complex(z - z1) ** a_exp * complex(z - z2) ** b_exp

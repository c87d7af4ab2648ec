"""Thermodynamic limit for real a and eta = i*gamma, 0 < gamma < pi.

Ground-state root density and energy density, and the energy and
quasi-momentum of the three excitation branches as functions of the
rapidity lambda.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ChainError, DomainError, PoleError
from .linalg import integrate

log = logging.getLogger(__name__)

PI = np.pi


@dataclass(frozen=True)
class ThermoParams:
    a: float
    gamma: float
    quad_tol: float = 1e-10

    def __post_init__(self):
        if not 0 < self.gamma < PI:
            raise DomainError(f"gamma must lie in (0, pi), got {self.gamma}")

    @property
    def x(self) -> float:
        return PI / (PI - self.gamma)

    @property
    def prefactor(self) -> float:
        """(cosh 4a - cos 2 gamma) / sin gamma."""
        return (np.cosh(4 * self.a) - np.cos(2 * self.gamma)) / np.sin(self.gamma)


# ---------------------------------------------------------------------------
# kernels


def kernel_a(n, x, gamma):
    return np.sin(n * gamma) / (PI * (np.cosh(2 * x) - np.cos(n * gamma)))


def kernel_b(n, x, gamma):
    return np.sinh(2 * x) / (PI * (np.cosh(2 * x) - np.cos(n * gamma)))


def alpha(n, x, gamma):
    """-i ln sinh(x - n eta/2) + i ln sinh(x + n eta/2) at eta = i gamma (real for real x)."""
    h = 0.5j * n * gamma
    return np.real(-1j * np.log(np.sinh(x - h)) + 1j * np.log(np.sinh(x + h)))


def beta(n, x, gamma):
    h = 0.5j * n * gamma
    return np.real(np.log(np.sinh(x - h)) + np.log(np.sinh(x + h)))


def frac_part(n, gamma):
    """delta_n: fractional part of n gamma / 2 pi."""
    v = n * gamma / (2 * PI)
    return v - np.floor(v)


def wrapped_y(n, gamma):
    """y_n = pi - 2 pi delta_n, in (-pi, pi]."""
    return PI - 2 * PI * frac_part(n, gamma)


def cosh_over_sinh(b, tau):
    """cosh(b tau) / sinh(pi tau) for tau > 0 without overflow."""
    return (np.exp((b - PI) * tau) + np.exp((-b - PI) * tau)) / (-np.expm1(-2 * PI * tau))


def _weight(bs, gamma):
    """tau -> sum_b cosh(b tau) tanh((pi-gamma) tau) / sinh(pi tau), even in tau."""
    zero = len(bs) * (PI - gamma) / PI

    def g(tau):
        t = abs(tau)
        if t < 1e-12:
            return zero
        return sum(cosh_over_sinh(b, t) for b in bs) * np.tanh((PI - gamma) * t)

    return g


def _tau_integral(bs, t: ThermoParams, lam=None, squared=False, kind="full"):
    g = _weight(bs, t.gamma)
    a = t.a
    if squared:
        def f(tau):
            return np.cos(2 * a * tau) ** 2 * g(tau)
    else:
        def f(tau):
            return np.cos(2 * a * tau) * np.cos(2 * lam * tau) * g(tau)
    if kind == "half":
        return 2 * integrate(f, "half", t.quad_tol / 2)
    return integrate(f, "full", t.quad_tol)


# ---------------------------------------------------------------------------
# ground state


def ground_density(z, t: ThermoParams):
    """rho(z) + rho_h(z) of the ground-state z-roots."""
    x, th = t.x, t.x * t.gamma
    pref = np.sin(th / 2) / (PI - t.gamma)
    out = 0.0
    for s in (1, -1):
        y = x * (z + s * t.a)
        out = out + np.cosh(y) / (np.cosh(2 * y) - np.cos(th))
    return pref * out


def ground_energy_density(t: ThermoParams, kind: str = "full") -> float:
    g, a = t.gamma, t.a
    integral = _tau_integral([PI - 2 * g], t, squared=True, kind=kind)
    return float((np.cos(2 * g) - np.cosh(4 * a)) / np.sin(g) * integral
                 + np.cos(g) * (np.cosh(2 * a) ** 2 - np.cos(2 * g)) / (2 * np.sin(g) ** 2))


# ---------------------------------------------------------------------------
# excitations


def wrap_momentum(k):
    k = float(np.mod(k + PI, 2 * PI) - PI)
    return PI if k <= -PI + 1e-13 else k


def _log_ratio(z, t: ThermoParams):
    """ln[sinh(a + z - i gamma/2) / sinh(a - z - i gamma/2)], principal branch per point."""
    h = 0.5j * t.gamma
    return np.log(np.sinh(t.a + z - h) / np.sinh(t.a - z - h))


def _momentum_kernel(c, x):
    """cosh(x s) cos(c/2) / (cosh(2 x s) + cos c)."""
    def k(s):
        return np.cosh(x * s) * np.cos(c / 2) / (np.cosh(2 * x * s) + np.cos(c))
    return k


def _momentum_integral(lam, cs, t: ThermoParams):
    x = t.x
    kernels = [_momentum_kernel(c, x) for c in cs]

    def kern(z):
        return sum(k(z - lam) for k in kernels)

    re = integrate(lambda z: kern(z) * _log_ratio(z, t).real, "full", t.quad_tol, center=lam)
    im = integrate(lambda z: kern(z) * _log_ratio(z, t).imag, "full", t.quad_tol, center=lam)
    return 2j / (PI - t.gamma) * complex(re, im)


def _finish_momentum(k: complex, what: str) -> float:
    if abs(k.imag) > 1e-7:
        log.warning("%s: imaginary momentum residue %.2e", what, k.imag)
    return wrap_momentum(k.real)


def excitation1(lam: float, t: ThermoParams):
    """(delta_e, k) of the branch with one z-root at lambda - i pi/2."""
    g, a = t.gamma, t.a
    c = t.prefactor
    integral = _tau_integral([g], t, lam)
    bracket = sum(np.sin(g) / (np.cosh(2 * lam + s * 2 * a) + np.cos(g)) for s in (1, -1))
    de = c * integral + c / 2 * bracket
    h = 0.5j * g
    disc = -1j * np.log(np.sinh(a + lam - 0.5j * PI - h) / np.sinh(a - lam + 0.5j * PI - h))
    k = _momentum_integral(lam, [t.x * g], t) + disc
    return float(de), _finish_momentum(k, "k1")


def excitation2(lam: float, t: ThermoParams):
    """(delta_e, k) of the branch with a z-pair lambda +/- i gamma."""
    g, a = t.gamma, t.a
    if g >= 2 * PI / 3:
        raise DomainError("type-II excitation needs gamma < 2 pi/3 so that cosh((pi - 3 gamma) tau)/sinh(pi tau) decays")
    c = t.prefactor
    integral = _tau_integral([PI - 3 * g], t, lam)
    bracket = 0.0
    for s in (1, -1):
        ch = np.cosh(2 * lam + s * 2 * a)
        bracket += 2 * np.sin(g) / (ch - np.cos(g)) - np.sin(3 * g) / (ch - np.cos(3 * g))
    de = c * integral + c / 2 * bracket
    h = 0.5j * g
    S = np.sinh
    disc = 1j * np.log(S(a + lam - h) * S(a - lam + h) * S(a - lam - 3 * h)
                       / (S(a - lam - h) * S(a + lam + h) * S(a + lam - 3 * h)))
    k = _momentum_integral(lam, [t.x * (PI - 3 * g)], t) + disc
    return float(de), _finish_momentum(k, "k2")


def excitation3(lam: float, n: int, t: ThermoParams):
    """(delta_e, k) of the branch with a z-pair lambda +/- n i gamma/2, n >= 3."""
    if n < 3:
        raise DomainError("type-III excitation needs n >= 3")
    g, a = t.gamma, t.a
    ys = [wrapped_y(n - 1, g), wrapped_y(n + 1, g)]
    if max(abs(y) for y in ys) >= PI - 1e-9:
        raise DomainError(f"(n +/- 1) gamma is a multiple of 2 pi; the n={n} integrand does not decay")
    c = t.prefactor
    bracket = 0.0
    for s in (1, -1):
        ch = np.cosh(2 * lam + s * 2 * a)
        for m, sign in ((n - 1, 1), (n + 1, -1)):
            den = ch - np.cos(m * g)
            if abs(den) < 1e-10:
                raise PoleError(f"cosh(2 lambda +/- 2a) = cos({m} gamma) at lambda = {lam}")
            bracket += sign * np.sin(m * g) / den
    integral = _tau_integral(ys, t, lam)
    de = c * integral + c / 2 * bracket
    S = np.sinh
    ig = 1j * g
    disc = -1j * np.log(S(a + lam + (n - 1) / 2 * ig) * S(a + lam - (n + 1) / 2 * ig)
                        / (S(a - lam + (n - 1) / 2 * ig) * S(a - lam - (n + 1) / 2 * ig)))
    k = _momentum_integral(lam, [t.x * y for y in ys], t) + disc
    return float(de), _finish_momentum(k, "k3")


@dataclass(frozen=True)
class DispersionSample:
    kind: str  # I | II | III
    n: int | None
    lam: float
    delta_e: float
    k: float

    def row(self, t: ThermoParams):
        return [self.kind, "" if self.n is None else self.n, self.lam, self.delta_e, self.k, t.a, t.gamma]


def check_domain(kind: str, t: ThermoParams, n: int | None = None):
    """Raise DomainError when a branch is undefined for the whole parameter cell."""
    kind = {"1": "I", "2": "II", "3": "III"}.get(str(kind), str(kind).upper())
    if kind == "II" and t.gamma >= 2 * PI / 3:
        raise DomainError("type-II excitation needs gamma < 2 pi/3 so that cosh((pi - 3 gamma) tau)/sinh(pi tau) decays")
    if kind == "III":
        if n is None or n < 3:
            raise DomainError("type-III excitation needs n >= 3")
        if max(abs(wrapped_y(n - 1, t.gamma)), abs(wrapped_y(n + 1, t.gamma))) >= PI - 1e-9:
            raise DomainError(f"(n +/- 1) gamma is a multiple of 2 pi; the n={n} integrand does not decay")
    if kind not in ("I", "II", "III"):
        raise DomainError(f"unknown excitation type {kind!r}")


def excitation(kind: str, lam: float, t: ThermoParams, n: int | None = None):
    kind = str(kind).upper()
    if kind in ("I", "1"):
        return excitation1(lam, t)
    if kind in ("II", "2"):
        return excitation2(lam, t)
    if kind in ("III", "3"):
        if n is None:
            raise DomainError("type-III excitation needs n")
        return excitation3(lam, n, t)
    raise DomainError(f"unknown excitation type {kind!r}")


def dispersion_curve(kind: str, t: ThermoParams, lambda_grid, n: int | None = None):
    """Samples sorted by k; failing grid points are returned separately as (lambda, error)."""
    label = {"1": "I", "2": "II", "3": "III"}.get(str(kind), str(kind).upper())
    samples, errors = [], []
    for lam in lambda_grid:
        try:
            de, k = excitation(label, float(lam), t, n)
        except ChainError as exc:
            errors.append((float(lam), exc))
            continue
        samples.append(DispersionSample(label, n if label == "III" else None, float(lam), de, k))
    samples.sort(key=lambda s: (s.k, s.lam))
    return samples, errors

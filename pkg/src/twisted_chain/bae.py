"""Bethe-ansatz equations in zero-root form and observables computed from roots."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .chain import ModelParams, momentum_grid
from .errors import DegenerateError, DomainError, PoleError
from .linalg import fold_strip, newton_solve
from .spectrum import EigenvalueFunction, d_function

log = logging.getLogger(__name__)

SOLVER_TOL = 1e-11
ACCEPT_TOL = 1e-9
TABLE_TOL = 5e-4


@dataclass
class RootSet:
    z: np.ndarray
    w: np.ndarray
    lambda0_sq: complex
    w0: complex = 1.0
    residual_norm: float = np.nan
    source: str = "table"
    lambda0: complex | None = None  # carries the sign when known from ED
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex)
        self.w = np.asarray(self.w, dtype=complex)
        self.lambda0_sq = complex(self.lambda0_sq)
        self.w0 = complex(self.w0)

    @classmethod
    def from_eigenfunction(cls, ef: EigenvalueFunction) -> "RootSet":
        return cls(ef.z_roots.copy(), ef.w_roots.copy(), ef.lambda0**2, ef.w0, source="ed-seeded",
                   lambda0=ef.lambda0)

    def to_dict(self):
        def cplx(x):
            return [float(np.real(x)), float(np.imag(x))]

        out = {
            "z": [cplx(x) for x in self.z],
            "w": [cplx(x) for x in self.w],
            "lambda0_sq": cplx(self.lambda0_sq),
            "w0": cplx(self.w0),
            "residual_norm": float(self.residual_norm),
            "source": self.source,
        }
        if self.lambda0 is not None:
            out["lambda0"] = cplx(self.lambda0)
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, d) -> "RootSet":
        def c(x):
            if isinstance(x, (list, tuple)):
                return complex(x[0], x[1])
            return complex(x)

        return cls(
            [c(x) for x in d["z"]],
            [c(x) for x in d["w"]],
            c(d["lambda0_sq"]),
            c(d.get("w0", 1.0)),
            float(d.get("residual_norm", np.nan)),
            d.get("source", "file"),
            c(d["lambda0"]) if d.get("lambda0") is not None else None,
        )


def _check_shape(r: RootSet, p: ModelParams):
    if r.z.size != p.sites - 1 or r.w.size != p.sites:
        raise DomainError(f"need {p.sites - 1} z-roots and {p.sites} w-roots, got {r.z.size} and {r.w.size}")


def _ratio(lhs, rhs):
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    if np.any(scale < 1e-300) or not np.all(np.isfinite(scale)):
        raise DegenerateError("both sides of a Bethe equation vanish; roots collide with a factor zero")
    return (lhs - rhs) / scale


def bae_residuals(r: RootSet, p: ModelParams, check: bool = True) -> np.ndarray:
    """Normalized residuals ordered BA0 (+,-), BA1 (2N-1), BA2 (2N), BA3 (1)."""
    _check_shape(r, p)
    n, a, eta = p.half_size, p.a, p.eta
    z, w = r.z, r.w
    if check and w.size > 1:
        diff = fold_strip(w[:, None] - w[None, :])
        np.fill_diagonal(diff, 1.0)
        if np.abs(diff).min() < 1e-10:
            raise DegenerateError("coincident w-roots")
    sw = np.sum(w)
    ba0 = np.array([r.w0 * np.exp(sw) - 1, r.w0 * np.exp(-sw) - 1])

    lhs1 = (np.sinh(z + eta / 2 + a) * np.sinh(z + eta / 2 - a) * np.sinh(z - 1.5 * eta + a)
            * np.sinh(z - 1.5 * eta - a)) ** n
    rhs1 = (r.w0 * (np.sinh(z - eta / 2 + a) * np.sinh(z - eta / 2 - a)) ** n
            * np.prod(np.sinh(z[:, None] - eta / 2 - w[None, :]), axis=1))
    ba1 = _ratio(lhs1, rhs1)

    lhs2 = -np.sinh(eta) ** (-4 * n) * (np.sinh(w + eta + a) * np.sinh(w + eta - a) * np.sinh(w - eta + a)
                                        * np.sinh(w - eta - a)) ** n
    rhs2 = r.lambda0_sq * np.prod(
        np.sinh(w[:, None] - z[None, :] + eta / 2) * np.sinh(w[:, None] - z[None, :] - eta / 2), axis=1)
    ba2 = _ratio(lhs2, rhs2)

    lhs3 = r.lambda0_sq * np.prod(np.sinh(a - z + eta / 2) * np.sinh(a - z - eta / 2))
    rhs3 = (-1) ** (n - 1) * np.sinh(eta) ** (-2 * n) * (np.sinh(2 * a + eta) * np.sinh(2 * a - eta)) ** n
    ba3 = _ratio(np.array([lhs3]), np.array([rhs3]))
    return np.concatenate([ba0, ba1, ba2, ba3])


def residual_norm(r: RootSet, p: ModelParams) -> float:
    return float(np.abs(bae_residuals(r, p)).max())


def _pack(r: RootSet) -> np.ndarray:
    c = np.concatenate([r.z, r.w, [r.lambda0_sq, r.w0]])
    return np.concatenate([c.real, c.imag])


def _unpack(x, p: ModelParams):
    m = x.size // 2
    c = x[:m] + 1j * x[m:]
    nz = p.sites - 1
    return c[:nz], c[nz:nz + p.sites], c[-2], c[-1]


def _conjugate_partner_average(roots, tol=1e-8):
    """Average each root with the conjugate of its partner (mod i*pi) when they differ by < tol."""
    out = roots.copy()
    used = set()
    for i, r in enumerate(roots):
        if i in used:
            continue
        d = [abs(fold_strip(r - np.conj(s))) for s in roots]
        j = int(np.argmin(d))
        if d[j] >= tol:
            continue
        shift = 1j * np.pi * np.round((r - np.conj(roots[j])).imag / np.pi)
        mid = (r + np.conj(roots[j]) + shift) / 2
        out[i] = mid
        out[j] = np.conj(mid - shift)
        used.update((i, j))
    return out


def conjugation_closed(roots, tol=1e-6) -> bool:
    roots = np.asarray(roots, dtype=complex)
    left = list(range(roots.size))
    while left:
        i = left.pop(0)
        c = np.conj(roots[i])
        dist = [abs(fold_strip(roots[j] - c)) for j in left]
        if abs(fold_strip(roots[i] - c)) < tol:
            continue
        if not dist or min(dist) >= tol:
            return False
        left.pop(int(np.argmin(dist)))
    return True


def solve_bae(seed: RootSet, p: ModelParams, tol: float = SOLVER_TOL, max_iter: int = 200) -> RootSet:
    """Refine a seed by damped Gauss-Newton on the real and imaginary parts."""
    _check_shape(seed, p)

    def f(x):
        z, w, l2, w0 = _unpack(x, p)
        res = bae_residuals(RootSet(z, w, l2, w0), p, check=False)
        return np.concatenate([res.real, res.imag])

    sol = newton_solve(f, _pack(seed), tol=tol, max_iter=max_iter)
    z, w, l2, w0 = _unpack(sol.x, p)
    z = np.asarray(z)
    diff = fold_strip(z[:, None] - z[None, :])
    np.fill_diagonal(diff, 1.0)
    if np.abs(diff).min() < 1e-8:
        raise DegenerateError("Newton converged onto coincident z-roots")
    if p.hermitian and abs(p.a.imag) < 1e-14:
        z = _conjugate_partner_average(np.asarray(z))
        w = _conjugate_partner_average(np.asarray(w))
    lam0 = seed.lambda0
    if lam0 is not None:
        # keep the seed's sign branch for the refined Lambda0
        root = np.sqrt(complex(l2))
        lam0 = root if abs(root - lam0) <= abs(root + lam0) else -root
    out = RootSet(z, w, l2, w0, source="newton", lambda0=lam0, iterations=sol.iterations)
    out.residual_norm = residual_norm(out, p)
    return out


# ---------------------------------------------------------------------------
# observables


def _guard(arg, what):
    if np.any(np.abs(np.sinh(arg)) < 1e-10):
        raise PoleError(f"{what}: argument sits on a pole (mod i*pi)")


def energy_from_roots(z, p: ModelParams, complex_value: bool = False):
    """E = -phi(2a) sinh(eta) sum_j [coth(a - z_j + eta/2) - coth(a + z_j - eta/2)] + E0."""
    z = np.asarray(z, dtype=complex)
    if z.size != p.sites - 1:
        raise DomainError(f"need {p.sites - 1} z-roots, got {z.size}")
    a, eta = p.a, p.eta
    x1 = a - z + eta / 2
    x2 = a + z - eta / 2
    _guard(x1, "energy")
    _guard(x2, "energy")
    e = -p.phi2a * np.sinh(eta) * np.sum(1 / np.tanh(x1) - 1 / np.tanh(x2)) + p.e0
    if complex_value:
        return complex(e)
    if p.hermitian and abs(e.imag) > 1e-8 * max(1.0, abs(e)):
        log.debug("energy has imaginary residue %.2e", e.imag)
    return float(e.real)


def wrap_angle(k):
    """Reduce to (-pi, pi]."""
    k = np.mod(np.asarray(k, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(k <= -np.pi + 1e-15, np.pi, k)


def grid_distance(k, half_size: int) -> float:
    grid = momentum_grid(half_size)
    d = np.abs(wrap_angle(k - grid))
    return float(d.min())


def momentum_from_roots(z, p: ModelParams, snap: bool = True, snap_tol: float = 1e-6) -> float:
    """k = -i sum_j ln[sinh(a + z_j - eta/2) / sinh(a - z_j - eta/2)] mod 2 pi."""
    z = np.asarray(z, dtype=complex)
    a, eta = p.a, p.eta
    num = np.sinh(a + z - eta / 2)
    den = np.sinh(a - z - eta / 2)
    _guard(a + z - eta / 2, "momentum")
    _guard(a - z - eta / 2, "momentum")
    k = complex(-1j * np.sum(np.log(num / den)))
    kr = float(wrap_angle(k.real))
    if snap:
        grid = momentum_grid(p.half_size)
        d = np.abs(wrap_angle(kr - grid))
        i = int(np.argmin(d))
        if d[i] < snap_tol:
            kr = float(wrap_angle(grid[i]))
    return kr


def charge_from_roots(z, lambda0, p: ModelParams) -> complex:
    """q = sinh^{2N-1}(eta) Lambda0 exp(-sum z) / 4."""
    if lambda0 is None:
        raise DomainError("the charge needs Lambda0 with its sign; take it from an ED extraction")
    z = np.asarray(z, dtype=complex)
    return complex(np.sinh(p.eta) ** (p.sites - 1) * lambda0 * np.exp(-np.sum(z)) / 4)


def closure_residual(r: RootSet, p: ModelParams) -> float:
    """Lambda(a)Lambda(a - eta) + d(a + eta)d(a - eta) rebuilt from (Lambda0^2, z), relative."""
    a, eta = p.a, p.eta
    lhs = r.lambda0_sq * np.prod(np.sinh(a - r.z + eta / 2) * np.sinh(a - r.z - eta / 2))
    rhs = d_function(a + eta, p) * d_function(a - eta, p)
    return float(abs(lhs + rhs) / max(abs(lhs), abs(rhs)))


# ---------------------------------------------------------------------------
# classification of root patterns


@dataclass(frozen=True)
class RootClassification:
    kind: str  # ground | type-I | type-II | type-III | unclassified
    lam: float | None = None
    string_params: tuple | None = None
    n: int | None = None

    def to_dict(self):
        return {"kind": self.kind, "lambda": self.lam, "string_params": self.string_params, "n": self.n}


def _complex_pairs(roots, tol):
    """Upper members of conjugate pairs, or None if some complex root is unpaired."""
    roots = fold_strip(roots)
    cplx = [r for r in roots if abs(r.imag) > tol]
    upper = [r for r in cplx if r.imag > 0]
    for r in upper:
        if not any(abs(fold_strip(s - np.conj(r))) < tol for s in cplx if s.imag < 0):
            return None
    if 2 * len(upper) != len(cplx):
        return None
    return upper


def classify_roots(r: RootSet, p: ModelParams, rel: float = 0.1, floor: float = 0.5) -> RootClassification:
    """Match the z- and w-root pattern against the ground state and the three excitation types."""
    gamma = p.gamma
    if gamma is None or abs(p.a.imag) > 1e-14:
        raise DomainError("classification needs real a and imaginary eta")
    tol = 0.05 * gamma
    z = fold_strip(r.z)
    w = fold_strip(r.w)
    zc = [x for x in z if abs(x.imag) > tol]
    none = RootClassification("unclassified")
    if not zc:
        return RootClassification("ground", 0.0)
    wp = _complex_pairs(w, tol)
    if wp is None:
        return none

    if len(zc) == 1:
        x = zc[0]
        if abs(abs(x.imag) - np.pi / 2) >= tol or len(wp) != 1:
            return none
        lam_z = float(x.real)
        lam1 = float(wp[0].real)
        m = 2 * wp[0].imag / gamma
        m_expected = np.pi / gamma - 1
        if abs(lam1 - lam_z) > rel * max(abs(lam_z), floor) or abs(m - m_expected) > rel * m_expected:
            return none
        return RootClassification("type-I", float(np.mean([lam_z, lam1])), (lam1, float(m)))

    if len(zc) != 2:
        return none
    up, dn = sorted(zc, key=lambda x: x.imag, reverse=True)
    h = up.imag
    if abs(up.real - dn.real) > tol or abs(up.imag + dn.imag) > tol or h > np.pi / 2 - tol:
        return none
    n = int(round(2 * h / gamma))
    if abs(h - n * gamma / 2) > tol:
        return none
    centres = [float(up.real)] + [float(x.real) for x in wp]
    if n == 2:
        if len(wp) != 1 or abs(wp[0].imag - 1.5 * gamma) > tol:
            return none
        return RootClassification("type-II", float(np.mean(centres)), (2,), 2)
    if n >= 3 and len(wp) == 2:
        return RootClassification("type-III", float(np.mean(centres)), (n,), n)
    return none


def with_classification(r: RootSet, p: ModelParams) -> RootSet:
    c = classify_roots(r, p)
    return replace(r, extra={**r.extra, "classification": c.to_dict()})

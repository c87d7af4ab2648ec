"""Dense linear algebra, trigonometric polynomials, Newton iteration and quadrature.

Everything here is a pure function of its inputs.  Matrices are plain
``numpy`` arrays of ``complex128``; no wrapper type is introduced.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate as _spi

from .errors import (
    ConvergenceError,
    DecompositionError,
    DegenerateError,
    DivergenceError,
    DomainError,
    FitError,
    IllConditionedFitError,
    RankError,
    SizeLimitError,
)

MAX_DIM = 2**14


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product with a cap on the resulting dimension."""
    a = np.asarray(a)
    b = np.asarray(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise SizeLimitError(f"kron result {rows}x{cols} exceeds dimension cap {max_dim}")
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T))) < atol


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray  # columns are eigenvectors
    residual: float


def eig(m: np.ndarray, hermitian: bool = False) -> EigenDecomposition:
    """Full eigendecomposition, sorted ascending by real part (then imaginary part).

    Raises DecompositionError when max_j ||M v_j - lambda_j v_j|| exceeds
    1e-9 * ||M||.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"eig needs a square matrix, got shape {m.shape}")
    if hermitian:
        if not is_hermitian(m):
            raise DomainError("matrix flagged Hermitian is not Hermitian to 1e-12")
        values, vectors = np.linalg.eigh(m)
        values = values.astype(complex)
    else:
        try:
            values, vectors = np.linalg.eig(m)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise DecompositionError(f"eigensolver failed: {exc}") from exc
        order = np.lexsort((values.imag, values.real))
        values = values[order]
        vectors = vectors[:, order]
    scale = max(np.linalg.norm(m, 2) if m.shape[0] <= 512 else np.linalg.norm(m), 1e-300)
    resid = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    residual = float(resid.max()) if resid.size else 0.0
    if residual > 1e-9 * scale:
        raise DecompositionError(
            f"eigendecomposition residual {residual:.3e} exceeds 1e-9*||M||", residual=residual
        )
    return EigenDecomposition(values, vectors, residual)


# ---------------------------------------------------------------------------
# trigonometric polynomials in the variable x = exp(2u)


def fold_strip(u):
    """Map roots to the strip -pi/2 < Im u <= pi/2 (sinh has quasi-period i*pi)."""
    u = np.asarray(u, dtype=complex)
    im = np.mod(u.imag + np.pi / 2, np.pi) - np.pi / 2
    # mod puts -pi/2 at the bottom; the strip is open there
    im = np.where(np.isclose(im, -np.pi / 2, rtol=0, atol=1e-12), np.pi / 2, im)
    return u.real + 1j * im


@dataclass(frozen=True)
class TrigPolynomial:
    """f(u) = exp(-d u) * sum_k coeffs[k] * exp(2 k u), degree d = len(coeffs) - 1.

    Such an f satisfies f(u + i pi) = (-1)^d f(u).
    """

    coeffs: np.ndarray
    cond: float = 1.0
    residual: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def parity(self) -> int:
        return -1 if self.degree % 2 else 1

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        x = np.exp(2 * u)
        return np.exp(-self.degree * u) * np.polyval(self.coeffs[::-1], x)

    @classmethod
    def from_roots(cls, roots, scale: complex = 1.0) -> "TrigPolynomial":
        """scale * prod_j sinh(u - r_j)."""
        c = np.array([complex(scale)])
        for r in np.asarray(roots, dtype=complex):
            # sinh(u - r) = exp(-u) * (exp(-r) x - exp(r)) / 2
            c = np.convolve(c, np.array([-np.exp(r), np.exp(-r)]) / 2)
        return cls(c)


def trig_fit(nodes, values, degree: int, parity: Optional[int] = None, rtol: float = 1e-8) -> TrigPolynomial:
    """Least-squares fit of a degree-``degree`` trigonometric polynomial to samples.

    The design matrix columns are rescaled to unit max-norm before solving;
    its condition number after rescaling is stored on the result.
    """
    nodes = np.asarray(nodes, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if parity is not None and parity != (-1) ** degree:
        raise DomainError(f"parity {parity} incompatible with degree {degree}")
    if nodes.size < degree + 1:
        raise DegenerateError(f"need at least {degree + 1} samples, got {nodes.size}")
    powers = 2 * np.arange(degree + 1) - degree
    a = np.exp(np.outer(nodes, powers))
    scale = np.abs(a).max(axis=0)
    a_s = a / scale
    sv = np.linalg.svd(a_s, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedFitError(f"sampling nodes give condition number {cond:.3e}")
    sol, *_ = np.linalg.lstsq(a_s, values, rcond=None)
    coeffs = sol / scale
    ref = max(float(np.abs(values).max()), 1e-300)
    residual = float(np.abs(a @ coeffs - values).max() / ref)
    if rtol is not None and residual > rtol:
        raise FitError(f"trig fit residual {residual:.3e} exceeds {rtol:.1e}", norm=residual)
    return TrigPolynomial(coeffs, cond=cond, residual=residual)


def trig_roots(p: TrigPolynomial, polish: int = 3) -> np.ndarray:
    """All ``p.degree`` zeros of ``p`` in the strip -pi/2 < Im u <= pi/2."""
    c = np.asarray(p.coeffs, dtype=complex)
    d = p.degree
    cmax = float(np.abs(c).max())
    if abs(c[-1]) <= 1e-13 * cmax:
        raise DegenerateError("leading coefficient vanishes; degree is lower than declared")
    if abs(c[0]) <= 1e-13 * cmax:
        raise DegenerateError("constant coefficient vanishes; a zero escapes to Re u = -inf")
    if d == 0:
        return np.zeros(0, dtype=complex)
    companion = np.zeros((d, d), dtype=complex)
    companion[1:, :-1] = np.eye(d - 1)
    companion[:, -1] = -c[:-1] / c[-1]
    x = eig(companion).values
    poly = c[::-1]
    dpoly = np.polyder(poly)
    for _ in range(polish):
        step = np.polyval(poly, x) / np.polyval(dpoly, x)
        x = x - np.where(np.isfinite(step), step, 0)
    u = fold_strip(np.log(x) / 2)
    mags = np.polyval(np.abs(poly), np.abs(x))
    resid = np.abs(np.polyval(poly, x)) / mags
    if resid.max() > 1e-8:
        raise FitError(f"root re-evaluation residual {resid.max():.3e} exceeds 1e-8", norm=float(resid.max()))
    return u


# ---------------------------------------------------------------------------
# Newton iteration


@dataclass(frozen=True)
class NewtonResult:
    x: np.ndarray
    norm: float
    iterations: int


def fd_jacobian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float = 1e-7) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        h = step * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h))
    return np.column_stack(cols)


def newton_solve(
    residual: Callable[[np.ndarray], np.ndarray],
    seed,
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    tol: float = 1e-11,
    max_iter: int = 200,
    fd_step: float = 1e-7,
    max_halvings: int = 40,
) -> NewtonResult:
    """Damped Newton iteration on a real residual vector.

    With more equations than unknowns the step is the least-squares
    (Gauss-Newton) step, which is exact Newton for consistent systems.
    Steps are halved until the residual 2-norm decreases.  Only points with
    ``max|F| < tol`` are returned; anything else raises.
    """
    x = np.array(seed, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("newton seed is not finite")
    f = np.asarray(residual(x), dtype=float)
    if f.size < x.size:
        raise DomainError(f"{f.size} equations for {x.size} unknowns")
    best_x, best_norm = x.copy(), float(np.abs(f).max())
    for it in range(max_iter + 1):
        norm = float(np.abs(f).max())
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
        if norm < tol:
            return NewtonResult(x, norm, it)
        if it == max_iter:
            break
        jac = jacobian(x) if jacobian is not None else fd_jacobian(residual, x, fd_step)
        u, s, vt = np.linalg.svd(jac, full_matrices=False)
        if s[-1] <= 1e-14 * s[0]:
            raise RankError(
                f"singular Jacobian (s_min/s_max = {s[-1] / s[0]:.2e}); reseed", best=best_x, norm=best_norm
            )
        dx = -(vt.T @ ((u.T @ f) / s))
        f2 = float(f @ f)
        t = 1.0
        for _ in range(max_halvings):
            x_try = x + t * dx
            f_try = np.asarray(residual(x_try), dtype=float)
            if np.all(np.isfinite(f_try)) and float(f_try @ f_try) < f2:
                break
            t /= 2
        else:
            raise ConvergenceError(
                f"line search stalled at residual {norm:.3e}", best=best_x, norm=best_norm
            )
        x, f = x_try, f_try
    raise ConvergenceError(f"no convergence after {max_iter} iterations (best {best_norm:.3e})", best=best_x, norm=best_norm)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    cutoff: float


def _envelope(f, center, t, sides):
    # sample a short window just inside the cut so oscillating factors cannot hide the tail
    width = min(0.2 * t, 4.0)
    pts = [center + s * (t - width * r) for s in sides for r in np.linspace(0.0, 1.0, 9)]
    return max(abs(f(p)) for p in pts)


def quadrature(
    f: Callable[[float], float],
    kind: str = "full",
    tol: float = 1e-10,
    center: float = 0.0,
    start: float = 8.0,
    max_cutoff: float = 64.0,
    decay: float = 1e-15,
    hard_cutoff: float = 1024.0,
) -> QuadResult:
    """Adaptive Gauss-Kronrod integral over the real line or the half line.

    The infinite range is truncated at ``center +/- T`` with T doubled from
    ``start`` until |f| < ``decay`` near the cut.  Past ``max_cutoff`` the
    doubling continues only while the tail keeps shrinking by at least a
    factor 10 per doubling (slow but genuine exponential decay), up to
    ``hard_cutoff``; otherwise DivergenceError.
    """
    if kind not in ("full", "half"):
        raise DomainError(f"unknown integration kind {kind!r}")
    sides = (1, -1) if kind == "full" else (1,)
    t = start
    env = _envelope(f, center, t, sides)
    while env >= decay:
        t *= 2
        prev, env = env, _envelope(f, center, t, sides)
        if t > max_cutoff and (env > prev / 10 or t > hard_cutoff):
            raise DivergenceError(f"integrand not below {decay:g} by |tau| = {t / 2:g} ({env:.1e} there)")
    pieces = [(center, center + t)] if kind == "half" else [(center - t, center), (center, center + t)]
    value = 0.0
    error = 0.0
    for lo, hi in pieces:
        v, e = _spi.quad(f, lo, hi, epsabs=tol / 10, epsrel=0.0, limit=2000)
        value += v
        error += e
    if error >= tol:
        raise ConvergenceError(f"quadrature error bound {error:.2e} not below {tol:.1e}", best=value, norm=error)
    return QuadResult(value, error, t)


def integrate(f: Callable[[float], float], kind: str = "full", tol: float = 1e-10, **kw) -> float:
    return quadrature(f, kind, tol, **kw).value

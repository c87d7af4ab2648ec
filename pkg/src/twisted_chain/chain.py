"""Model parameters, transfer matrices, Hamiltonian and conserved operators.

Basis order is the tensor order site 1 (x) ... (x) site 2N with |0> = spin up,
so site j (1-based) is bit ``2N - j`` of a basis index.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, SingularParameterError, SizeLimitError
from .linalg import MAX_DIM, is_hermitian
from .rmatrix import local_blocks, phi, r_matrix, r_matrix_derivative

log = logging.getLogger(__name__)

MAX_SITES = 12

# The printed J3^z carries 4 sinh(eta) in the denominator; the transfer-matrix
# Hamiltonian and the published spectra require 2 sinh(eta).
J3Z_DENOMINATOR = 2
PRINTED_J3Z_DENOMINATOR = 4


def _is_real(x, tol=1e-14):
    return abs(complex(x).imag) <= tol * max(1.0, abs(x))


def _is_imag(x, tol=1e-14):
    return abs(complex(x).real) <= tol * max(1.0, abs(x))


@dataclass(frozen=True)
class ModelParams:
    """Chain of 2N sites with model parameter ``a`` and crossing parameter ``eta``."""

    half_size: int
    a: complex
    eta: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "eta", complex(self.eta))
        if int(self.half_size) != self.half_size or self.half_size < 2:
            raise DomainError(f"need an even chain of at least 4 sites, got 2N = {2 * self.half_size}")
        if abs(np.sinh(self.eta)) < 1e-12:
            raise SingularParameterError("eta must be nonzero (mod i*pi)")
        if abs(phi(2 * self.a, self.eta)) < 1e-12:
            raise SingularParameterError("phi(2a) vanishes (eta = +/-2a mod i*pi)")

    @property
    def sites(self) -> int:
        return 2 * self.half_size

    @property
    def dim(self) -> int:
        return 2**self.sites

    @property
    def hermitian(self) -> bool:
        a, eta = self.a, self.eta
        return (_is_real(a) and _is_imag(eta)) or (_is_imag(a) and _is_real(eta))

    @property
    def gamma(self):
        """gamma = -i eta when eta is purely imaginary, else None."""
        if _is_imag(self.eta):
            return float((-1j * self.eta).real)
        return None

    @property
    def phi2a(self) -> complex:
        return complex(phi(2 * self.a, self.eta))

    @property
    def e0(self) -> complex:
        a, eta, n = self.a, self.eta, self.half_size
        return complex(-n * np.cosh(eta) * (np.cosh(2 * a) ** 2 - np.cosh(2 * eta)) / np.sinh(eta) ** 2)

    def require_size(self, limit: int = MAX_SITES):
        if self.sites > limit or self.dim > MAX_DIM:
            raise SizeLimitError(f"2N = {self.sites} exceeds the dense limit 2N <= {limit}")


@dataclass(frozen=True)
class CouplingConstants:
    j1x: complex
    j1y: complex
    j1z: complex
    j2: complex
    j3x: complex
    j3y: complex
    j3z: complex
    e0: complex
    phi2a: complex


def couplings(p: ModelParams, j3z_denominator: int = J3Z_DENOMINATOR) -> CouplingConstants:
    a, eta = p.a, p.eta
    sh, ch = np.sinh(eta), np.cosh(eta)
    j3xy = 1j * np.sinh(2 * a) * ch / (2 * sh)
    return CouplingConstants(
        j1x=np.cosh(2 * a),
        j1y=np.cosh(2 * a),
        j1z=ch,
        j2=-np.sinh(2 * a) ** 2 * ch / (2 * sh**2),
        j3x=j3xy,
        j3y=j3xy,
        j3z=1j * np.sinh(2 * a) * np.cosh(2 * a) / (j3z_denominator * sh),
        e0=p.e0,
        phi2a=p.phi2a,
    )


# ---------------------------------------------------------------------------
# Pauli strings as (permutation, phase) pairs


def pauli_action(sites: int, ops):
    """Action of a Pauli string on every basis state.

    ``ops`` maps 0-based site -> 'x' | 'y' | 'z'.  Returns (image, phase) with
    P|s> = phase[s] |image[s]>.
    """
    states = np.arange(2**sites)
    flip = 0
    phase = np.ones(states.size, dtype=complex)
    for site, op in ops.items():
        bit = sites - 1 - site
        occ = (states >> bit) & 1
        if op in "xy":
            flip |= 1 << bit
        if op == "y":
            phase *= 1j * (1 - 2 * occ)
        elif op == "z":
            phase *= 1 - 2 * occ
    return states ^ flip, phase


def pauli_matrix(sites: int, ops, coef=1.0) -> np.ndarray:
    image, phase = pauli_action(sites, ops)
    m = np.zeros((2**sites, 2**sites), dtype=complex)
    m[image, np.arange(2**sites)] = coef * phase
    return m


def _twisted(site_1based, alpha, sites):
    """Pauli operator at a possibly wrapped site -> (0-based site, sign).

    sigma_{2N+n}^alpha = sigma_n^x sigma_n^alpha sigma_n^x flips the sign of y and z.
    """
    if site_1based <= sites:
        return site_1based - 1, 1
    return site_1based - sites - 1, (1 if alpha == "x" else -1)


_CYCLIC = {"x": ("y", "z"), "y": ("z", "x"), "z": ("x", "y")}


def hamiltonian_terms(p: ModelParams, j3z_denominator: int = J3Z_DENOMINATOR):
    """Yield (coefficient, {site: op}) for every Pauli string of H."""
    c = couplings(p, j3z_denominator)
    j1 = {"x": c.j1x, "y": c.j1y, "z": c.j1z}
    j3 = {"x": c.j3x, "y": c.j3y, "z": c.j3z}
    L = p.sites
    for j in range(1, L + 1):
        for al in "xyz":
            s0, g0 = _twisted(j, al, L)
            s1, g1 = _twisted(j + 1, al, L)
            s2, g2 = _twisted(j + 2, al, L)
            yield -j1[al] * g0 * g1, {s0: al, s1: al}
            yield -c.j2 * g0 * g2, {s0: al, s2: al}
            # sigma_{j+1}^al (sigma_j x sigma_{j+2})^al, right-handed cross product
            b, d = _CYCLIC[al]
            sign = (-1) ** j
            for first, second, s in ((b, d, 1), (d, b, -1)):
                t0, h0 = _twisted(j, first, L)
                t2, h2 = _twisted(j + 2, second, L)
                yield -sign * j3[al] * s * g1 * h0 * h2, {s1: al, t0: first, t2: second}


def hamiltonian_direct(p: ModelParams, j3z_denominator: int = J3Z_DENOMINATOR) -> np.ndarray:
    """Dense H assembled term by term from the spin-operator expression."""
    p.require_size()
    dim = p.dim
    h = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for coef, ops in hamiltonian_terms(p, j3z_denominator):
        image, phase = pauli_action(p.sites, ops)
        h[image, cols] += coef * phase
    if p.hermitian:
        err = float(np.abs(h - h.conj().T).max())
        if err > 1e-12:
            raise DomainError(f"Hamiltonian not Hermitian ({err:.2e}) in a Hermitian regime")
    else:
        log.info("non-Hermitian parameter regime; Hermiticity check skipped")
    return h


# ---------------------------------------------------------------------------
# transfer matrices by auxiliary-space sweep


def _site_shift(p: ModelParams, k: int, reverse: bool) -> complex:
    # forward: +a on odd sites; reversed: +a on even sites
    odd = k % 2 == 1
    return p.a if odd != reverse else -p.a


def _sweep(u, p: ModelParams, reverse: bool, derivative: bool):
    p.require_size()
    one = np.ones((1, 1), dtype=complex)
    zero = np.zeros((1, 1), dtype=complex)
    mono = [[one, zero], [zero, one]]
    dmono = [[zero, zero], [zero, zero]] if derivative else None
    L = p.sites
    for k in range(1, L + 1):
        arg = u + _site_shift(p, k, reverse)
        blk = local_blocks(r_matrix(arg, p.eta))
        dblk = local_blocks(r_matrix_derivative(arg, p.eta)) if derivative else None
        last = k == L
        # on the last site only the twisted trace (entries 01 and 10) is needed
        wanted = ((0, 1), (1, 0)) if last else ((0, 0), (0, 1), (1, 0), (1, 1))
        new = {}
        dnew = {}
        for al, be in wanted:
            if not reverse:
                terms = [(mono[al][g], blk[g, be]) for g in range(2)]
                dterms = (
                    [(dmono[al][g], blk[g, be]) for g in range(2)] + [(mono[al][g], dblk[g, be]) for g in range(2)]
                    if derivative
                    else []
                )
            else:
                terms = [(mono[g][be], blk[al, g]) for g in range(2)]
                dterms = (
                    [(dmono[g][be], blk[al, g]) for g in range(2)] + [(mono[g][be], dblk[al, g]) for g in range(2)]
                    if derivative
                    else []
                )
            new[al, be] = sum(np.kron(x, y) for x, y in terms)
            if derivative:
                dnew[al, be] = sum(np.kron(x, y) for x, y in dterms)
        if last:
            t = new[0, 1] + new[1, 0]
            dt = dnew[0, 1] + dnew[1, 0] if derivative else None
            return t, dt
        mono = [[new[0, 0], new[0, 1]], [new[1, 0], new[1, 1]]]
        if derivative:
            dmono = [[dnew[0, 0], dnew[0, 1]], [dnew[1, 0], dnew[1, 1]]]
    raise AssertionError("unreachable")


def transfer_matrix(u, p: ModelParams, reverse: bool = False) -> np.ndarray:
    """t(u) (or t-hat(u) with ``reverse=True``) as a dense matrix."""
    return _sweep(complex(u), p, reverse, derivative=False)[0]


def transfer_matrix_derivative(u, p: ModelParams, reverse: bool = False):
    """(t(u), dt/du) with the derivative summed over single-site insertions."""
    return _sweep(complex(u), p, reverse, derivative=True)


def hamiltonian_from_transfer(p: ModelParams) -> np.ndarray:
    """-phi^{1-N}(2a) sinh(eta) {t^(-a) t'(a) + t^(a) t'(-a)} + E0."""
    ph = p.phi2a
    if abs(ph) < 1e-12:
        raise SingularParameterError("phi(2a) = 0")
    _, dt_plus = transfer_matrix_derivative(p.a, p)
    _, dt_minus = transfer_matrix_derivative(-p.a, p)
    th_minus = transfer_matrix(-p.a, p, reverse=True)
    th_plus = transfer_matrix(p.a, p, reverse=True)
    h = -(ph ** (1 - p.half_size)) * np.sinh(p.eta) * (th_minus @ dt_plus + th_plus @ dt_minus)
    h += p.e0 * np.eye(p.dim)
    return h


# ---------------------------------------------------------------------------
# conserved operators


def shift_operator(p: ModelParams, method: str = "transfer") -> np.ndarray:
    """U = phi^{-N}(2a) t(a) t(-a), or its explicit permutation-and-twist form."""
    if method == "transfer":
        return p.phi2a ** (-p.half_size) * transfer_matrix(p.a, p) @ transfer_matrix(-p.a, p)
    if method != "permutation":
        raise DomainError(f"unknown shift-operator method {method!r}")
    p.require_size()
    L = p.sites
    states = np.arange(p.dim)

    def bit(site):  # 1-based site -> bit position
        return L - site

    def flip(s, site):
        return s ^ (1 << bit(site))

    def swap(s, i, j):
        bi = (s >> bit(i)) & 1
        bj = (s >> bit(j)) & 1
        diff = bi ^ bj
        return s ^ ((diff << bit(i)) | (diff << bit(j)))

    # sigma^x_{2N} P_{2,2N} P_{4,2N} ... P_{2N-2,2N} P_{1,3} ... P_{1,2N-1} sigma^x_1, rightmost first
    s = flip(states, 1)
    for k in range(L - 1, 2, -2):
        s = swap(s, 1, k)
    for k in range(L - 2, 1, -2):
        s = swap(s, k, L)
    s = flip(s, L)
    u = np.zeros((p.dim, p.dim), dtype=complex)
    u[s, states] = 1
    return u


def momentum_grid(half_size: int) -> np.ndarray:
    """Allowed eigenvalues pi*l/N, l = -N..N-1, of K = -i log U."""
    return np.pi * np.arange(-half_size, half_size) / half_size


def charge_operator(p: ModelParams) -> np.ndarray:
    """Q = (Q^+ + Q^-)/4 built from the staggered twisted ladder sums."""
    p.require_size()
    L, eta = p.sites, p.eta
    states = np.arange(p.dim)
    z = np.stack([1 - 2 * ((states >> (L - j)) & 1) for j in range(1, L + 1)])  # sigma^z eigenvalues
    before = np.cumsum(z, axis=0) - z  # sum over k < j
    after = z.sum(axis=0) - np.cumsum(z, axis=0)  # sum over k > j
    q = np.zeros((p.dim, p.dim), dtype=complex)
    for j in range(1, L + 1):
        w = np.exp((-1) ** j * p.a)
        occ = (states >> (L - j)) & 1
        i = j - 1
        # sigma^+ |1> = |0> ; sigma^- |0> = |1>
        up = occ == 1
        src = states[up]
        q[src ^ (1 << (L - j)), src] += w * np.exp(-eta / 2 * before[i, up] + eta / 2 * after[i, up])
        dn = ~up
        src = states[dn]
        q[src ^ (1 << (L - j)), src] += w * np.exp(eta / 2 * before[i, dn] - eta / 2 * after[i, dn])
    return q / 4


def charge_from_asymptotics(p: ModelParams, u: float = 20.0) -> np.ndarray:
    """(2 sinh eta)^{2N-1} / (4 e^{(2N-1) eta/2}) * e^{-(2N-1) u} t(u) at large real u."""
    m = p.sites - 1
    pref = (2 * np.sinh(p.eta)) ** m / (4 * np.exp(m * p.eta / 2)) * np.exp(-m * u)
    return pref * transfer_matrix(u, p)


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def hermitian_conjugation_residual(u, p: ModelParams) -> float:
    """t^dagger(u) + t(u* - eta); zero for imaginary eta."""
    t = transfer_matrix(u, p)
    return float(np.abs(t.conj().T + transfer_matrix(np.conj(u) - p.eta, p)).max())


__all__ = [
    "ModelParams",
    "CouplingConstants",
    "couplings",
    "hamiltonian_direct",
    "hamiltonian_from_transfer",
    "transfer_matrix",
    "transfer_matrix_derivative",
    "shift_operator",
    "charge_operator",
    "charge_from_asymptotics",
    "momentum_grid",
    "pauli_matrix",
    "is_hermitian",
]

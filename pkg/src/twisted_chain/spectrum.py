"""Exact diagonalization and per-state eigenvalue functions Lambda(u), W(u)."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .chain import ModelParams, hamiltonian_direct, transfer_matrix
from .errors import DegenerateError, DomainError, ExtractionError, FitError
from .linalg import TrigPolynomial, eig, trig_fit, trig_roots

log = logging.getLogger(__name__)

LEVEL_GAP = 1e-9
T_GAP = 1e-8
LEAK_TOL = 1e-8
FIT_TOL = 1e-7


def d_function(u, p: ModelParams):
    """d(u) = sinh^N(u+a) sinh^N(u-a) / sinh^{2N}(eta)."""
    n = p.half_size
    return (np.sinh(u + p.a) * np.sinh(u - p.a)) ** n / np.sinh(p.eta) ** (2 * n)


@dataclass(frozen=True)
class SpectrumRecord:
    level: int
    energy: float
    degeneracy: int
    eigenvector_ids: tuple

    def to_dict(self):
        return {"level": self.level, "energy": self.energy, "degeneracy": self.degeneracy,
                "eigenvector_ids": list(self.eigenvector_ids)}


@dataclass
class Spectrum:
    params: ModelParams
    energies: np.ndarray
    vectors: np.ndarray
    records: list


def group_levels(energies, gap=LEVEL_GAP):
    """Split sorted energies into runs whose consecutive spacing is below ``gap``."""
    groups = []
    start = 0
    for i in range(1, len(energies) + 1):
        if i == len(energies) or energies[i] - energies[i - 1] >= gap:
            groups.append(list(range(start, i)))
            start = i
    return groups


def diagonalize_model(p: ModelParams, gap: float = LEVEL_GAP) -> Spectrum:
    if not p.hermitian:
        raise DomainError("exact diagonalization needs a Hermitian regime (a real & eta imaginary, or vice versa)")
    h = hamiltonian_direct(p)
    dec = eig(h, hermitian=True)
    energies = dec.values.real
    records = [
        SpectrumRecord(level=n, energy=float(energies[g[0]]), degeneracy=len(g), eigenvector_ids=tuple(g))
        for n, g in enumerate(group_levels(energies, gap))
    ]
    return Spectrum(p, energies, dec.vectors, records)


# ---------------------------------------------------------------------------


@dataclass
class JointBasis:
    """Common eigenvectors of H and t(u); column s belongs to ``levels[s]``."""

    params: ModelParams
    u0: complex
    energies: np.ndarray
    levels: np.ndarray
    vectors: np.ndarray
    leakage: float = 0.0


def _draw_u0(rng):
    return complex(rng.uniform(0.05, 0.6), rng.uniform(0.1, 1.4))


def _cluster(values, tol):
    """Indices of ``values`` grouped by closeness (single linkage along the sorted order)."""
    order = np.lexsort((values.imag, values.real))
    groups = [[order[0]]]
    for i in order[1:]:
        if np.min(np.abs(values[groups[-1]] - values[i])) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _split_blocks(t0, spec: Spectrum, groups):
    scale = max(np.abs(t0).max(), 1.0)
    split = []
    pattern = []
    for g in groups:
        b = spec.vectors[:, g]
        dec = eig(b.conj().T @ t0 @ b)
        clusters = _cluster(dec.values, T_GAP * scale)
        pattern.append(tuple(sorted(len(c) for c in clusters)))
        split.append((b, dec, clusters))
    return split, tuple(pattern)


def joint_eigenbasis(p: ModelParams, u0=None, spectrum: Spectrum | None = None, seed: int = 0,
                     redraws: int = 5, check_points: int = 5) -> JointBasis:
    """Diagonalize t(u0) inside every degenerate eigenspace of H.

    u0 is redrawn until t(u0) has distinct eigenvalues inside every H block.
    """
    spec = spectrum or diagonalize_model(p)
    rng = np.random.default_rng(seed)
    groups = [list(r.eigenvector_ids) for r in spec.records]
    u = complex(u0) if u0 is not None else _draw_u0(rng)
    for _attempt in range(redraws + 1):
        t0 = transfer_matrix(u, p)
        split, pattern = _split_blocks(t0, spec, groups)
        if all(size == 1 for sizes in pattern for size in sizes):
            break
        log.info("t(u0) degenerate inside an H block at u0=%s; redrawing", u)
        u = _draw_u0(rng)
    else:
        raise DegenerateError(f"t(u0) stays degenerate inside an H block after {redraws} redraws")

    vecs, energies, levels, lam0 = [], [], [], []
    for lvl, (g, (b, dec, clusters)) in enumerate(zip(groups, split)):
        cols = []
        for c in sorted(clusters, key=lambda c: (dec.values[c[0]].real, dec.values[c[0]].imag)):
            q, _ = np.linalg.qr(b @ dec.vectors[:, c])
            cols.append(q)
            lam0.extend([dec.values[c[0]]] * len(c))
        block = np.hstack(cols)
        vecs.append(block)
        energies.extend([spec.energies[g[0]]] * block.shape[1])
        levels.extend([lvl] * block.shape[1])
    v = np.hstack(vecs)
    jb = JointBasis(p, u, np.array(energies), np.array(levels), v)

    if check_points:
        leak = 0.0
        for _ in range(check_points):
            t = transfer_matrix(_draw_u0(rng) + 0.3j, p)
            tv = t @ v
            lam = np.einsum("ij,ij->j", v.conj(), tv)
            res = np.linalg.norm(tv - v * lam, axis=0)
            leak = max(leak, float(res.max() / max(np.abs(lam).max(), 1e-300)))
        jb.leakage = leak
        if leak > LEAK_TOL:
            raise DegenerateError(f"joint basis does not diagonalize t(u): leakage {leak:.2e}")
    return jb


# ---------------------------------------------------------------------------


def sampling_nodes(p: ModelParams, count: int | None = None, offset: float = 0.3):
    """Nodes on the vertical line Re u = |Re a| + offset, evenly spaced over one period."""
    m = count or 2 * p.sites + 4
    c = abs(p.a.real) + offset
    return c + 1j * np.pi * np.arange(m) / m


def sample_lambda(basis: JointBasis, nodes) -> np.ndarray:
    """Lambda_s(u_k) = v_s^dagger t(u_k) v_s for all states; shape (states, nodes)."""
    v = basis.vectors
    out = np.empty((v.shape[1], len(nodes)), dtype=complex)
    for k, u in enumerate(nodes):
        out[:, k] = np.einsum("ij,ij->j", v.conj(), transfer_matrix(u, basis.params) @ v)
    return out


@dataclass
class EigenvalueFunction:
    state_id: int
    level: int
    energy: float
    lambda_poly: TrigPolynomial
    z_roots: np.ndarray
    lambda0: complex
    w_poly: TrigPolynomial | None = None
    w_roots: np.ndarray | None = None
    w0: complex | None = None
    residuals: dict = field(default_factory=dict)

    @property
    def lambda0_sq(self) -> complex:
        return self.lambda0**2

    def lam(self, u, p: ModelParams):
        """Lambda(u) rebuilt from (Lambda0, z)."""
        return TrigPolynomial.from_roots(self.z_roots - p.eta / 2, self.lambda0)(u)

    def w(self, u, p: ModelParams):
        return TrigPolynomial.from_roots(self.w_roots, self.w0 / np.sinh(p.eta) ** p.sites)(u)

    def to_dict(self):
        def cplx(x):
            return [float(np.real(x)), float(np.imag(x))]

        return {
            "state": self.state_id,
            "level": self.level,
            "energy": float(self.energy),
            "z": [cplx(x) for x in self.z_roots],
            "w": [cplx(x) for x in self.w_roots] if self.w_roots is not None else None,
            "lambda0": cplx(self.lambda0),
            "lambda0_sq": cplx(self.lambda0_sq),
            "w0": cplx(self.w0) if self.w0 is not None else None,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }


def extract_lambda(samples, nodes, p: ModelParams, state_id=0, level=0, energy=0.0) -> EigenvalueFunction:
    deg = p.sites - 1
    try:
        poly = trig_fit(nodes, samples, deg, parity=(-1) ** deg, rtol=FIT_TOL)
        r = trig_roots(poly)
    except FitError as exc:
        raise ExtractionError(f"Lambda fit failed for state {state_id}: {exc}", norm=exc.norm) from exc
    lambda0 = poly.coeffs[-1] * 2**deg * np.exp(np.sum(r))
    ef = EigenvalueFunction(state_id, level, float(energy), poly, r + p.eta / 2, complex(lambda0))
    ef.residuals["lambda_fit"] = poly.residual
    rebuilt = ef.lam(nodes, p)
    ef.residuals["lambda_rebuild"] = float(np.abs(rebuilt - samples).max() / np.abs(samples).max())
    return ef


def canonical_w0(w_roots, w0):
    """Shift one w-root by -i*pi when that turns W0 from -1 into +1."""
    w = np.array(w_roots, dtype=complex)
    if abs(w0 + 1) < 1e-6:
        i = max(range(len(w)), key=lambda k: (round(w[k].imag, 8), -w[k].real))
        w[i] -= 1j * np.pi
        w0 = -w0
    return w, w0


def extract_w(ef: EigenvalueFunction, samples, shifted, nodes, p: ModelParams) -> EigenvalueFunction:
    """Fill the W part from Lambda(u) and Lambda(u - eta) samples at ``nodes``."""
    dd = d_function(nodes, p)
    keep = np.abs(dd) > 1e-6
    if keep.sum() < p.sites + 1:
        raise ExtractionError("too few sampling nodes away from the zeros of d(u)")
    u = nodes[keep]
    wv = (samples[keep] * shifted[keep] + d_function(u + p.eta, p) * d_function(u - p.eta, p)) / dd[keep]
    deg = p.sites
    try:
        poly = trig_fit(u, wv, deg, parity=1, rtol=FIT_TOL)
        r = trig_roots(poly)
    except FitError as exc:
        raise ExtractionError(f"W fit failed for state {ef.state_id}: {exc}", norm=exc.norm) from exc
    w0 = poly.coeffs[-1] * 2**deg * np.exp(np.sum(r)) * np.sinh(p.eta) ** deg
    ef.w_roots, ef.w0 = canonical_w0(r, complex(w0))
    ef.w_poly = poly
    ef.residuals["w_fit"] = poly.residual
    return ef


def t_w_residual(ef: EigenvalueFunction, p: ModelParams, us) -> float:
    """Relative residual of Lambda(u)Lambda(u-eta) + d(u+eta)d(u-eta) - d(u)W(u)."""
    us = np.asarray(us, dtype=complex)
    lhs = ef.lam(us, p) * ef.lam(us - p.eta, p)
    dd = d_function(us + p.eta, p) * d_function(us - p.eta, p)
    dw = d_function(us, p) * ef.w(us, p)
    scale = np.maximum.reduce([np.abs(lhs), np.abs(dd), np.abs(dw)])
    return float(np.max(np.abs(lhs + dd - dw) / scale))


def closure_residual(ef: EigenvalueFunction, p: ModelParams) -> float:
    """Lambda(a)Lambda(a-eta) + d(a+eta)d(a-eta), relative to its larger term."""
    lhs = ef.lam(p.a, p) * ef.lam(p.a - p.eta, p)
    rhs = d_function(p.a + p.eta, p) * d_function(p.a - p.eta, p)
    return float(abs(lhs + rhs) / max(abs(lhs), abs(rhs), 1e-300))


def extract_states(p: ModelParams, basis: JointBasis | None = None, with_w: bool = True,
                   states=None, seed: int = 0) -> list:
    """EigenvalueFunction for every (or the selected) joint eigenstate."""
    basis = basis or joint_eigenbasis(p, seed=seed)
    sel = np.arange(basis.vectors.shape[1]) if states is None else np.asarray(states)
    sub = JointBasis(p, basis.u0, basis.energies[sel], basis.levels[sel], basis.vectors[:, sel])
    nodes = sampling_nodes(p)
    lam = sample_lambda(sub, nodes)
    lam_sh = sample_lambda(sub, nodes - p.eta) if with_w else None
    out = []
    for i, s in enumerate(sel):
        ef = extract_lambda(lam[i], nodes, p, int(s), int(sub.levels[i]), sub.energies[i])
        if with_w:
            extract_w(ef, lam[i], lam_sh[i], nodes, p)
            ef.residuals["closure"] = closure_residual(ef, p)
        out.append(ef)
    return out

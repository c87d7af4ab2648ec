"""Numerical verification of the algebraic identities of the model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rmatrix as rm
from .chain import (
    ModelParams,
    charge_from_asymptotics,
    charge_operator,
    commutator,
    hamiltonian_direct,
    hamiltonian_from_transfer,
    hermitian_conjugation_residual,
    shift_operator,
    transfer_matrix,
    transfer_matrix_derivative,
)
from .spectrum import closure_residual, extract_states, t_w_residual


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def ok(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.threshold)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name:<34s} residual {self.residual:.3e}  (< {self.threshold:.0e})"


def faulty_r_matrix(u, eta):
    """R-matrix with a sign error in one off-diagonal entry (negative control)."""
    r = rm.r_matrix(u, eta)
    r[1, 2] = -r[1, 2]
    return r


def _norm(m):
    return float(np.linalg.norm(m, 2))


def _rand_u(rng):
    return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))


def local_checks(eta, rng, samples: int = 5, r_matrix=rm.r_matrix):
    """Identities of the R-matrix alone; worst residual over random spectral parameters."""
    us = [[_rand_u(rng) for _ in range(3)] for _ in range(samples)]
    out = [
        Check("Yang-Baxter", max(rm.check_ybe(*u, eta, r=r_matrix) for u in us), 1e-12),
        Check("Yang-Baxter at u1=u2", max(rm.check_ybe(u[0], u[0], u[2], eta, r=r_matrix) for u in us), 1e-12),
        Check("initial condition R(0)=P", rm.check_initial(eta), 1e-12),
        Check("unitarity", max(rm.check_unitarity(u[0], eta) for u in us), 1e-12),
        Check("phi(0)=1", abs(rm.phi(0.0, eta) - 1), 1e-12),
        Check("crossing", max(rm.check_crossing(u[0], eta) for u in us), 1e-12),
        Check("PT symmetry", max(rm.check_pt(u[0], eta) for u in us), 1e-12),
        Check("Z2 symmetry", max(rm.check_z2(u[0], eta) for u in us), 1e-12),
        Check("quasi-periodicity", max(rm.check_quasi_periodicity(u[0], eta) for u in us), 1e-12),
        Check("fusion point R(-eta)=-2P-", rm.check_fusion(eta), 1e-12),
    ]
    return out


def chain_checks(p: ModelParams, rng, with_states: bool = True):
    u, v = _rand_u(rng), _rand_u(rng)
    tu, tv = transfer_matrix(u, p), transfer_matrix(v, p)
    nt = _norm(tu)
    out = [
        Check("[t(u), t(v)] = 0", _norm(commutator(tu, tv)) / (nt * _norm(tv)), 1e-10),
        Check("[t(u), t^(u)] = 0", _norm(commutator(tu, transfer_matrix(u, p, reverse=True))) / nt**2, 1e-10),
        Check("t(u) = -t^(-u-eta)", _norm(tu + transfer_matrix(-u - p.eta, p, reverse=True)) / nt, 1e-10),
        Check("t(u+i pi) = -t(u)", _norm(transfer_matrix(u + 1j * np.pi, p) + tu) / nt, 1e-10),
    ]
    h = 1e-6
    _, dt = transfer_matrix_derivative(u, p)
    fd = (transfer_matrix(u + h, p) - transfer_matrix(u - h, p)) / (2 * h)
    out.append(Check("t'(u) vs central difference", _norm(dt - fd) / max(_norm(dt), 1.0), 1e-6))
    if p.gamma is not None:
        out.append(Check("t^dagger(u) = -t(u*-eta)", hermitian_conjugation_residual(u, p) / nt, 1e-10))

    hd = hamiltonian_direct(p)
    ht = hamiltonian_from_transfer(p)
    nh = _norm(hd)
    out.append(Check("H direct = H from transfer", float(np.abs(hd - ht).max()), 1e-8))
    us = shift_operator(p)
    out.append(Check("U transfer = U permutation", float(np.abs(us - shift_operator(p, "permutation")).max()), 1e-10))
    out.append(Check("U^(2N) = 1", float(np.abs(np.linalg.matrix_power(us, p.sites) - np.eye(p.dim)).max()), 1e-9))
    out.append(Check("[U, H] = 0", _norm(commutator(us, hd)) / nh, 1e-9))
    q = charge_operator(p)
    out.append(Check("[Q, t(u)] = 0", _norm(commutator(q, tu)) / (_norm(q) * nt), 1e-9))
    out.append(Check("Q from t(u) asymptotics", float(np.abs(q - charge_from_asymptotics(p)).max()), 1e-6))
    out.append(Check("[H, t(u)] = 0", _norm(commutator(hd, tu)) / (nh * nt), 1e-10))

    if with_states and p.hermitian:
        efs = extract_states(p)
        pts = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1.5, 1.5, 20)
        out.append(Check("t-W identity, all states", max(t_w_residual(ef, p, pts) for ef in efs), 1e-8))
        out.append(Check("closure at u=a, all states", max(closure_residual(ef, p) for ef in efs), 1e-9))
    return out


def run_suite(p: ModelParams, seed: int = 0, fault: str | None = None, with_states: bool = True):
    rng = np.random.default_rng(seed)
    r = faulty_r_matrix if fault == "sign" else rm.r_matrix
    return local_checks(p.eta, rng, r_matrix=r) + chain_checks(p, rng, with_states)

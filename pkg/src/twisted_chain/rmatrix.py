"""Six-vertex R-matrix and the local identities it satisfies.

Two-qubit basis order is |00>, |01>, |10>, |11> with |0> = spin up.  Every
``check_*`` function returns the max-abs residual of the identity it tests.
"""
from __future__ import annotations

import numpy as np

from .errors import SingularParameterError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
P_MINUS = (np.eye(4) - SWAP) / 2


def _sinh_eta(eta):
    s = np.sinh(complex(eta))
    if abs(s) < 1e-14:
        raise SingularParameterError("sinh(eta) vanishes; the R-matrix is undefined")
    return s


def r_matrix(u, eta) -> np.ndarray:
    se = _sinh_eta(eta)
    c = np.sinh(u + eta) / se
    b = np.sinh(u) / se
    return np.array([[c, 0, 0, 0], [0, b, 1, 0], [0, 1, b, 0], [0, 0, 0, c]], dtype=complex)


def r_matrix_derivative(u, eta) -> np.ndarray:
    se = _sinh_eta(eta)
    c = np.cosh(u + eta) / se
    b = np.cosh(u) / se
    return np.diag([c, b, b, c]).astype(complex)


def phi(u, eta):
    """-sinh(u+eta) sinh(u-eta) / sinh^2(eta)."""
    return -np.sinh(u + eta) * np.sinh(u - eta) / np.sinh(eta) ** 2


def local_blocks(r: np.ndarray) -> np.ndarray:
    """Split a 4x4 operator on V0 (x) Vj into 2x2 blocks L[alpha, beta] acting on Vj.

    R = sum_{alpha,beta} E_0^{alpha beta} (x) L[alpha, beta].
    """
    return r.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)


def _embed3(r, pair):
    """Place a two-site operator on the given pair of a three-site space."""
    i, j = pair
    k = 3 - i - j
    # operator on (i, j) ⊗ k, then permute the tensor legs into 0,1,2 order
    full = np.kron(r, ID2).reshape(2, 2, 2, 2, 2, 2)
    order = [i, j, k]
    inv = np.argsort(order)
    return full.transpose(*inv, *(3 + inv)).reshape(8, 8)


def check_ybe(u1, u2, u3, eta, r=r_matrix) -> float:
    """R_{0j}(u1-u2) R_{0l}(u1-u3) R_{jl}(u2-u3) = R_{jl}(u2-u3) R_{0l}(u1-u3) R_{0j}(u1-u2)."""
    a = _embed3(r(u1 - u2, eta), (0, 1))
    b = _embed3(r(u1 - u3, eta), (0, 2))
    c = _embed3(r(u2 - u3, eta), (1, 2))
    return float(np.abs(a @ b @ c - c @ b @ a).max())


def check_initial(eta) -> float:
    return float(np.abs(r_matrix(0, eta) - SWAP).max())


def check_unitarity(u, eta) -> float:
    """R_{0j}(u) R_{j0}(-u) = phi(u) id, with R_{j0} = P R_{0j} P."""
    lhs = r_matrix(u, eta) @ SWAP @ r_matrix(-u, eta) @ SWAP
    return float(np.abs(lhs - phi(u, eta) * np.eye(4)).max())


def partial_transpose(r: np.ndarray, site: int) -> np.ndarray:
    t = r.reshape(2, 2, 2, 2)  # [a, j, b, k]
    t = t.transpose(0, 3, 2, 1) if site == 1 else t.transpose(2, 1, 0, 3)
    return t.reshape(4, 4)


def check_crossing(u, eta) -> float:
    """R(u) = V_0 R^{t_j}(-u-eta) V_0 with V = -i sigma^y."""
    v = np.kron(-1j * SY, ID2)
    rhs = v @ partial_transpose(r_matrix(-u - eta, eta), 1) @ v
    return float(np.abs(r_matrix(u, eta) - rhs).max())


def check_pt(u, eta) -> float:
    r = r_matrix(u, eta)
    return float(max(np.abs(r - SWAP @ r @ SWAP).max(), np.abs(r - r.T).max()))


def check_z2(u, eta) -> float:
    r = r_matrix(u, eta)
    out = 0.0
    for s in (SX, SY, SZ):
        ss = np.kron(s, s)
        out = max(out, float(np.abs(ss @ r - r @ ss).max()))
    return out


def check_quasi_periodicity(u, eta) -> float:
    z0 = np.kron(SZ, ID2)
    return float(np.abs(r_matrix(u + 1j * np.pi, eta) + z0 @ r_matrix(u, eta) @ z0).max())


def check_fusion(eta) -> float:
    return float(np.abs(r_matrix(-eta, eta) + 2 * P_MINUS).max())

import numpy as np
import pytest

from oracles import xxz_antiperiodic
from twisted_chain.chain import ModelParams, transfer_matrix
from twisted_chain.errors import DomainError
from twisted_chain.linalg import fold_strip
from twisted_chain.spectrum import (
    closure_residual,
    d_function,
    diagonalize_model,
    extract_states,
    group_levels,
    joint_eigenbasis,
    sampling_nodes,
    t_w_residual,
)
from twisted_chain.tables import table_energies

TABLE1 = sorted(table_energies("real-a"))


def _match_modulo_ipi(got, want, tol):
    got = list(got)
    for w in want:
        d = [abs(fold_strip(g - w)) for g in got]
        i = int(np.argmin(d))
        if d[i] > tol:
            return False
        got.pop(i)
    return True


def test_group_levels():
    assert group_levels(np.array([0.0, 1e-12, 1.0, 2.0, 2.0])) == [[0, 1], [2], [3, 4]]


def test_table1_levels(real_a):
    spec = diagonalize_model(real_a)
    assert [r.degeneracy for r in spec.records] == [2, 4, 2, 2, 4, 2]
    levels = [r.energy for r in spec.records]
    assert np.allclose(levels, sorted(set(TABLE1)), atol=1e-3)


def test_table2_lowest_levels(imag_a):
    e = diagonalize_model(imag_a).energies
    assert np.allclose(e[::2][:4], [-4.6408, -3.3343, -3.3343, -3.1881], atol=1e-3)


def test_zero_a_matches_xxz():
    spec = diagonalize_model(ModelParams(2, 0.0, 0.6j))
    ref = np.linalg.eigvalsh(xxz_antiperiodic(4, np.cos(0.6)))
    assert np.abs(spec.energies - ref).max() < 1e-12


def test_non_hermitian_regime_rejected():
    with pytest.raises(DomainError):
        diagonalize_model(ModelParams(2, 0.2, 0.6))


def test_joint_basis_diagonalizes_family(real_a, real_a_basis):
    v = real_a_basis.vectors
    assert np.abs(v.conj().T @ v - np.eye(16)).max() < 1e-12
    assert real_a_basis.leakage < 1e-8
    for rev in (False, True):
        t = transfer_matrix(real_a_basis.u0, real_a, reverse=rev)
        m = v.conj().T @ t @ v
        assert np.abs(m - np.diag(np.diag(m))).max() < 1e-8 * np.abs(m).max()


def test_every_level_splits(real_a, real_a_basis):
    # each degenerate H level splits into t-eigenstates with distinct Lambda(u0)
    t = transfer_matrix(real_a_basis.u0, real_a)
    v = real_a_basis.vectors
    lam = np.einsum("ij,ij->j", v.conj(), t @ v)
    for lvl in set(real_a_basis.levels):
        sel = np.where(real_a_basis.levels == lvl)[0]
        d = np.abs(lam[sel][:, None] - lam[sel][None, :]) + np.eye(len(sel))
        assert d.min() > 1e-6


def test_persistent_degeneracy_raises(real_a, monkeypatch):
    from twisted_chain import spectrum
    from twisted_chain.errors import DegenerateError

    monkeypatch.setattr(spectrum, "T_GAP", 1e6)
    with pytest.raises(DegenerateError):
        joint_eigenbasis(real_a)


def test_sampling_nodes_avoid_d_zeros(real_a):
    nodes = sampling_nodes(real_a)
    assert np.abs(d_function(nodes, real_a)).min() > 1e-6


def test_table1_ground_roots(real_a_states):
    ground = [ef for ef in real_a_states if ef.energy < -5]
    assert len(ground) == 2
    for ef in ground:
        assert np.allclose(np.sort(ef.z_roots.real), [-0.3477, 0.0, 0.3477], atol=5e-5)
        assert abs(ef.lambda0_sq - (-399.7321)) < 1e-3
        assert np.allclose(np.sort(ef.w_roots.real), [-1.2826, -0.2473, 0.2473, 1.2826], atol=5e-5)
        assert abs(ef.w0 - 1) < 1e-8


def test_table2_ground_roots(imag_a_states):
    ground = [ef for ef in imag_a_states if ef.energy < -4.6]
    for ef in ground:
        assert _match_modulo_ipi(ef.z_roots, [-0.369j, 0, 0.369j], 5e-5)
        assert abs(ef.lambda0_sq - 308.1505) < 1e-3
        assert _match_modulo_ipi(ef.w_roots, [-1.6145 - 1.5708j, -0.2869j, 0.2869j, 1.6145 + 1.5708j], 5e-5)


@pytest.mark.parametrize("which", ["real_a", "imag_a"])
def test_t_w_identity_and_closure(which, request):
    p = request.getfixturevalue(which)
    states = request.getfixturevalue(which + "_states")
    rng = np.random.default_rng(3)
    us = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1.5, 1.5, 20)
    for ef in states:
        assert t_w_residual(ef, p, us) < 1e-8
        assert closure_residual(ef, p) < 1e-9
        sw = np.sum(ef.w_roots)
        assert abs(ef.w0 * np.exp(sw) - 1) < 1e-8 and abs(ef.w0 * np.exp(-sw) - 1) < 1e-8


def test_degenerate_partners_differ_by_sign(real_a_states, real_a):
    # the two states of a doubly degenerate pair share their roots; Lambda0 flips sign
    for ef in real_a_states:
        partners = [o for o in real_a_states
                    if abs(o.energy - ef.energy) < 1e-9 and abs(o.lambda0 + ef.lambda0) < 1e-6]
        assert any(_match_modulo_ipi(o.z_roots, ef.z_roots, 1e-8) for o in partners)


def test_two_hermitian_regimes_larger_chain():
    p = ModelParams(3, 0.2j, 0.6)
    states = extract_states(p)
    assert len(states) == 64
    assert max(ef.residuals["closure"] for ef in states) < 1e-9


def test_reproducible_with_seed(real_a):
    a = joint_eigenbasis(real_a, seed=5)
    b = joint_eigenbasis(real_a, seed=5)
    assert a.u0 == b.u0
    assert np.abs(a.vectors - b.vectors).max() == 0

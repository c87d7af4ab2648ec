import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_chain.bae import (
    RootSet,
    bae_residuals,
    charge_from_roots,
    classify_roots,
    closure_residual,
    conjugation_closed,
    energy_from_roots,
    grid_distance,
    momentum_from_roots,
    residual_norm,
    solve_bae,
)
from twisted_chain.chain import ModelParams, charge_operator, shift_operator
from twisted_chain.errors import DegenerateError, DomainError
from twisted_chain.tables import table_params, table_rootsets

R = 1.5708j


def _row(name, level):
    return next(r for r, e, n in table_rootsets(name) if n == level)


def test_residual_layout(real_a):
    r = _row("real-a", 1)
    assert bae_residuals(r, real_a).shape == (4 * real_a.half_size + 2,)


def test_table1_ground_residual(real_a):
    assert residual_norm(_row("real-a", 1), real_a) < 1e-3


def test_table2_level8_residual(imag_a):
    assert residual_norm(_row("imag-a", 8), imag_a) < 1e-3


def test_perturbed_roots_fail(real_a):
    r = _row("real-a", 1)
    bad = RootSet(r.z + np.array([0.05, 0, 0]), r.w, r.lambda0_sq)
    assert residual_norm(bad, real_a) > 1e-2


def test_wrong_shape(real_a):
    with pytest.raises(DomainError):
        residual_norm(RootSet([0.1, 0.2], [0, 1, 2, 3], 1.0), real_a)


def test_coincident_w(real_a):
    with pytest.raises(DegenerateError):
        residual_norm(RootSet([0.1, 0.2, 0.3], [0.5, 0.5, 1, 2], 1.0), real_a)


def test_refine_table1_ground(real_a):
    seed = _row("real-a", 1)
    sol = solve_bae(seed, real_a)
    assert sol.residual_norm < 1e-11
    assert sol.iterations <= 3
    assert abs(energy_from_roots(sol.z, real_a) - (-5.2630)) < 1e-4
    assert np.abs(sol.z - seed.z).max() < 5e-4


def test_exact_solution_is_fixed_point(real_a):
    sol = solve_bae(_row("real-a", 1), real_a)
    again = solve_bae(sol, real_a)
    assert again.iterations <= 2
    assert np.abs(again.z - sol.z).max() < 1e-10


@pytest.mark.parametrize("name", ["real-a", "imag-a"])
def test_table_energies_from_roots(name):
    p = table_params(name)
    for r, e, _ in table_rootsets(name):
        assert abs(energy_from_roots(r.z, p) - e) < 1e-3


def test_level8_energy(real_a):
    assert abs(energy_from_roots([-R, -0.6474j, 0.6474j], real_a) - 7.05) < 1e-3


def test_table2_ground_energy(imag_a):
    assert abs(energy_from_roots([-0.369j, 0, 0.369j], imag_a) - (-4.6408)) < 1e-3


def test_energy_pole(real_a):
    from twisted_chain.errors import PoleError

    z = np.array([real_a.a + real_a.eta / 2, 0.1, 0.2])
    with pytest.raises(PoleError):
        energy_from_roots(z, real_a)


@settings(max_examples=20, deadline=None)
@given(st.permutations(range(3)), st.sampled_from(["real-a", "imag-a"]), st.integers(1, 8))
def test_observables_symmetric_in_roots(perm, name, level):
    p = table_params(name)
    r = _row(name, level)
    z = r.z[list(perm)]
    assert abs(energy_from_roots(z, p) - energy_from_roots(r.z, p)) < 1e-12
    assert abs(momentum_from_roots(z, p, snap=False) - momentum_from_roots(r.z, p, snap=False)) < 1e-12


# round trip from exact diagonalization


@pytest.mark.parametrize("which", ["real_a", "imag_a"])
def test_ed_round_trip_all_states(which, request):
    p = request.getfixturevalue(which)
    states = request.getfixturevalue(which + "_states")
    basis = request.getfixturevalue(which + "_basis")
    u = shift_operator(p)
    q = charge_operator(p)
    for ef in states:
        sol = solve_bae(RootSet.from_eigenfunction(ef), p)
        assert sol.residual_norm < 1e-11
        assert abs(energy_from_roots(sol.z, p) - ef.energy) < 1e-8
        v = basis.vectors[:, ef.state_id]
        k = momentum_from_roots(sol.z, p)
        assert grid_distance(k, p.half_size) < 1e-6
        assert abs(np.exp(1j * k) - np.vdot(v, u @ v)) < 1e-8
        assert abs(charge_from_roots(sol.z, sol.lambda0, p) - np.vdot(v, q @ v)) < 1e-6
        assert closure_residual(sol, p) < 1e-9


def test_ground_momentum_zero(real_a_states, real_a):
    for ef in real_a_states[:2]:
        assert momentum_from_roots(ef.z_roots, real_a) == 0.0


def test_conjugate_states_have_conjugate_charge(real_a_states, real_a):
    # the real-a Hamiltonian is real-symmetric up to a basis change; pairs related by
    # complex conjugation carry conjugate q
    qs = [charge_from_roots(ef.z_roots, ef.lambda0, real_a) for ef in real_a_states]
    for q in qs:
        assert min(abs(np.conj(q) - o) for o in qs) < 1e-8


def test_charge_needs_sign(real_a):
    with pytest.raises(DomainError):
        charge_from_roots([0, 0.1, 0.2], None, real_a)


def test_charge_small_parameters_half_integer_spin():
    from twisted_chain.spectrum import extract_states

    p = ModelParams(2, 1e-4, 1e-4j)
    qs = [charge_from_roots(ef.z_roots, ef.lambda0, p) for ef in extract_states(p)]
    # eigenvalues of sum sigma^x / 4 for four spins: 0, +-1/2, +-1
    for q in qs:
        assert min(abs(q - v) for v in (-1, -0.5, 0, 0.5, 1)) < 1e-3


def test_rootset_json_round_trip(real_a_states):
    r = RootSet.from_eigenfunction(real_a_states[3])
    back = RootSet.from_dict(r.to_dict())
    assert np.allclose(back.z, r.z) and np.allclose(back.w, r.w)
    assert back.lambda0 == pytest.approx(r.lambda0)


def test_conjugation_closed():
    assert conjugation_closed([0.1, 0.2 + 0.3j, 0.2 - 0.3j])
    assert not conjugation_closed([0.1, 0.2 + 0.3j, 0.4])


# classification


def test_classify_small_chain_ground(real_a):
    assert classify_roots(solve_bae(_row("real-a", 1), real_a), real_a).kind == "ground"


def test_classify_requires_real_a(imag_a):
    with pytest.raises(DomainError):
        classify_roots(_row("imag-a", 1), imag_a)


def test_classification_at_eight_sites(shadow_states):
    kinds = {}
    for ef, roots, c in shadow_states:
        kinds.setdefault(c.kind, []).append((ef, roots, c))
    e0 = min(ef.energy for ef, _, _ in shadow_states)
    # the all-real pattern covers the ground level and its real-root hole excitations
    ground = kinds["ground"]
    assert any(abs(ef.energy - e0) < 1e-9 for ef, _, _ in ground)
    assert all(np.abs(r.z.imag).max() < 0.03 for _, r, _ in ground)
    for ef, r, c in kinds["type-I"]:
        assert sum(abs(abs(x.imag) - np.pi / 2) < 0.03 for x in r.z) == 1
    for ef, r, c in kinds["type-II"]:
        assert c.n == 2
        up = [x for x in r.z if x.imag > 0.03]
        assert len(up) == 1 and abs(up[0].imag - 0.6) < 0.03
    assert kinds["type-III"] and all(c.n >= 3 for _, _, c in kinds["type-III"])


def test_eight_site_ground_real_roots(shadow_states):
    e0 = min(ef.energy for ef, _, _ in shadow_states)
    for ef, r, c in shadow_states:
        if abs(ef.energy - e0) < 1e-9:
            assert r.residual_norm < 1e-11
            assert np.abs(r.z.imag).max() < 1e-8
            assert momentum_from_roots(r.z, ModelParams(4, 0.2, 0.6j)) == 0.0

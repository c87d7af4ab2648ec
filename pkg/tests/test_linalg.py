import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import SX, kron_loop
from twisted_chain.errors import (
    ConvergenceError,
    DegenerateError,
    DivergenceError,
    IllConditionedFitError,
    RankError,
    SizeLimitError,
)
from twisted_chain.linalg import (
    TrigPolynomial,
    eig,
    fold_strip,
    integrate,
    kron,
    newton_solve,
    quadrature,
    trig_fit,
    trig_roots,
)

rng = np.random.default_rng(7)


def _cmat(r, c, seed):
    g = np.random.default_rng(seed)
    return g.normal(size=(r, c)) + 1j * g.normal(size=(r, c))


# kron


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_pauli_flips_both_spins():
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(kron(SX, SX) @ ket00, [0, 0, 0, 1])


def test_kron_matches_index_loop():
    a, b = _cmat(3, 3, 1), _cmat(2, 2, 2)
    assert np.allclose(kron(a, b), kron_loop(a, b), atol=0)


def test_kron_size_cap():
    with pytest.raises(SizeLimitError):
        kron(np.eye(2**8), np.eye(2**7))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_kron_associative(n1, n2, n3, seed):
    a, b, c = _cmat(n1, n1, seed), _cmat(n2, n2, seed + 1), _cmat(n3, n3, seed + 2)
    assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


# eig


def test_eig_diagonal_sorted():
    dec = eig(np.diag([3.0, 1.0, 2.0]), hermitian=True)
    assert np.allclose(dec.values, [1, 2, 3])


def test_eig_pauli_x():
    dec = eig(SX, hermitian=True)
    assert np.allclose(dec.values, [-1, 1])
    for k, sign in enumerate((-1, 1)):
        v = dec.vectors[:, k]
        ref = np.array([1, sign]) / np.sqrt(2)
        assert abs(abs(np.vdot(ref, v)) - 1) < 1e-12


def test_eig_reconstructs_hermitian():
    m = _cmat(64, 64, 3)
    m = m + m.conj().T
    dec = eig(m, hermitian=True)
    rec = dec.vectors @ np.diag(dec.values) @ dec.vectors.conj().T
    assert np.abs(rec - m).max() < 1e-9


def test_eig_non_hermitian_residual():
    m = _cmat(20, 20, 4)
    dec = eig(m)
    assert dec.residual < 1e-9 * np.linalg.norm(m, 2)
    assert np.all(np.diff(dec.values.real) >= 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10**6))
def test_eig_trace_and_spectrum_property(n, seed):
    m = _cmat(n, n, seed)
    m = m + m.conj().T
    dec = eig(m, hermitian=True)
    assert abs(dec.values.sum() - np.trace(m)) < 1e-9 * max(1, np.abs(m).max() * n)
    assert np.all(np.diff(dec.values.real) >= -1e-12)


# trigonometric polynomials


def test_trig_fit_single_sinh():
    nodes = np.array([0.1, 0.4 + 0.3j, -0.7 + 1.1j])
    poly = trig_fit(nodes, np.sinh(nodes), 1)
    assert np.allclose(poly.coeffs, [-0.5, 0.5], atol=1e-14)


def test_trig_roots_single_zero():
    assert np.allclose(trig_roots(TrigPolynomial.from_roots([0.3])), [0.3], atol=1e-14)


def test_trig_roots_strip_boundary():
    roots = np.sort_complex(trig_roots(TrigPolynomial.from_roots([0.0, 0.5j * np.pi])))
    assert np.allclose(roots, [0.0, 0.5j * np.pi], atol=1e-12)


def test_fold_strip_open_bottom():
    assert np.isclose(fold_strip(-0.5j * np.pi), 0.5j * np.pi)
    assert np.isclose(fold_strip(1 + 2.5j), 1 + (2.5 - np.pi) * 1j)


def test_trig_fit_recovers_degree5_product():
    zeros = rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1.2, 1.2, 5)
    nodes = 0.5 + 1j * np.pi * np.arange(12) / 12
    vals = TrigPolynomial.from_roots(zeros, 0.7 - 0.2j)(nodes)
    got = trig_roots(trig_fit(nodes, vals, 5))
    for z in zeros:
        assert np.abs(fold_strip(got - z)).min() < 1e-8


def test_trig_roots_degree7_evaluation():
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    p = TrigPolynomial(c)
    r = trig_roots(p)
    scale = np.abs(p(r + 0.1)).max()
    assert np.abs(p(r)).max() < 1e-9 * scale


def test_trig_fit_ground_state_lambda(real_a_states, real_a):
    ef = min(real_a_states, key=lambda e: e.energy)
    roots = np.sort(ef.z_roots.real)
    assert np.allclose(roots, [-0.3477, 0.0, 0.3477], atol=5e-5)
    assert np.allclose(ef.z_roots.imag, 0, atol=1e-8)


def test_trig_fit_bad_nodes():
    with pytest.raises(IllConditionedFitError):
        trig_fit(np.array([0.1, 0.1 + 1j * np.pi, 0.1 + 2j * np.pi]), np.ones(3), 2)


def test_trig_roots_vanishing_leading():
    with pytest.raises(DegenerateError):
        trig_roots(TrigPolynomial(np.array([1.0, 2.0, 0.0])))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.integers(0, 10**6))
def test_trig_round_trip(degree, seed):
    g = np.random.default_rng(seed)
    zeros = g.uniform(-1.5, 1.5, degree) + 1j * g.uniform(-1.4, 1.4, degree)
    # keep zeros apart so the round trip is well conditioned
    d = np.abs(fold_strip(zeros[:, None] - zeros[None, :])) + np.eye(degree)
    if d.min() < 0.1:
        return
    m = 2 * degree + 2
    nodes = 0.3 + 1j * np.pi * np.arange(m) / m
    vals = TrigPolynomial.from_roots(zeros)(nodes)
    poly = trig_fit(nodes, vals, degree, rtol=1e-9)
    got = trig_roots(poly)
    # backward accuracy: the recovered roots rebuild the samples
    scale = poly.coeffs[-1] * 2**degree * np.exp(np.sum(got))
    rebuilt = TrigPolynomial.from_roots(got, scale)(nodes)
    assert np.abs(rebuilt - vals).max() < 1e-9 * np.abs(vals).max()
    # forward accuracy, limited by root conditioning at high degree
    for z in zeros:
        assert np.abs(fold_strip(got - z)).min() < 1e-5


# Newton


def test_newton_scalar_quadratic():
    sol = newton_solve(lambda x: x**2 - 4, [1.0])
    assert abs(sol.x[0] - 2) < 1e-11


def test_newton_linear_one_step():
    a = rng.normal(size=(5, 5)) + 5 * np.eye(5)
    b = rng.normal(size=5)
    sol = newton_solve(lambda x: a @ x - b, np.zeros(5), jacobian=lambda x: a)
    assert sol.iterations == 1
    assert np.allclose(sol.x, np.linalg.solve(a, b), atol=1e-12)


def test_newton_overdetermined_consistent():
    sol = newton_solve(lambda x: np.array([x[0] - 1, 2 * x[0] - 2, x[0] ** 2 - 1]), [3.0])
    assert abs(sol.x[0] - 1) < 1e-11


def test_newton_singular_jacobian():
    with pytest.raises(RankError):
        newton_solve(lambda x: np.array([x[0] + x[1] - 1, 2 * x[0] + 2 * x[1] - 2]), [0.0, 0.0],
                     jacobian=lambda x: np.array([[1.0, 1.0], [2.0, 2.0]]))


def test_newton_no_root_raises_with_best():
    with pytest.raises(ConvergenceError) as info:
        newton_solve(lambda x: x**2 + 1, [0.5], max_iter=30)
    assert info.value.best is not None


# quadrature


def test_gaussian_integral():
    assert abs(integrate(lambda t: np.exp(-t * t)) - np.sqrt(np.pi)) < 1e-10


def test_sech_integral():
    assert abs(integrate(lambda t: 1 / np.cosh(t)) - np.pi) < 1e-10


def test_half_line():
    assert abs(integrate(lambda t: np.exp(-t), "half") - 1) < 1e-10


def test_truncation_self_consistency():
    from twisted_chain.thermo import ThermoParams, _weight

    t = ThermoParams(0.2, 0.6)
    g = _weight([np.pi - 2 * t.gamma], t.gamma)

    def f(tau):
        return np.cos(2 * t.a * tau) ** 2 * g(tau)

    r1 = quadrature(f, start=8.0)
    r2 = quadrature(f, start=2 * r1.cutoff)
    assert abs(r1.value - r2.value) < 1e-10


def test_non_decaying_integrand():
    with pytest.raises(DivergenceError):
        integrate(lambda t: 1.0 / (1 + abs(t)) ** 0.5)

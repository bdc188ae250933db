import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from pomquant import (
    FockState,
    GeneratingOperator,
    PhaseGrid,
    PhasePoint,
    TailMassError,
    displaced_density,
    displacement_matrix,
    generalized_distribution,
    husimi,
    weyl_operator,
    wigner_transform,
)
from pomquant._numerics import hermite_functions
from pomquant.measurement import make_rng
from pomquant.phase_space import covering_radius

from conftest import blockdiff

PTS = [(1.0, 0.0), (0.0, -1.0), (2.0, -1.0), (-1.5, 2.5), (3.0, 3.0)]


def test_phase_point_must_be_finite():
    with pytest.raises(ValueError):
        PhasePoint(math.nan, 0.0)
    assert PhasePoint(1.0, 1.0).alpha == pytest.approx((1 + 1j) / math.sqrt(2))


@pytest.mark.parametrize(
    "kwargs", [dict(q_min=1.0, q_max=0.0), dict(n_q=0), dict(rule="simpson")]
)
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        PhaseGrid(**kwargs)


@pytest.mark.parametrize("rule", ["midpoint-uniform", "gauss-legendre-tensor"])
def test_grid_weights_cover_the_rectangle(rule):
    g = PhaseGrid(-2.0, 3.0, -1.0, 1.5, 40, 33, rule)
    q, p, w = g.nodes()
    assert q.size == 40 * 33
    assert w.sum() == pytest.approx(5.0 * 2.5, rel=1e-12)
    assert q[0] == q[1] and p[0] != p[1]


def test_gauss_legendre_grid_is_exact_on_polynomials():
    g = PhaseGrid(-1.0, 2.0, 0.0, 1.0, 32, 16, "gauss-legendre-tensor")
    q, p, w = g.nodes()
    assert w @ (q ** 5 * p ** 3) == pytest.approx((2.0 ** 6 - 1.0) / 6 / 4, rel=1e-12)


def test_covering_grid_and_round_trip():
    g = PhaseGrid.covering(64)
    assert g.q_max == pytest.approx(covering_radius(64))
    assert g.rule == "gauss-legendre-tensor"
    assert PhaseGrid.from_dict(g.to_dict()) == g


@pytest.mark.parametrize(
    "matrix",
    [np.diag([1.2, -0.2]), np.diag([0.5, 0.6]), np.array([[0.5, 0.5j], [0.5j, 0.5]])],
)
def test_generating_operator_validation(matrix):
    with pytest.raises(ValueError):
        GeneratingOperator(matrix)


def test_generating_operator_components():
    t = GeneratingOperator.fock_diagonal([0.6, 0.4], 8)
    w, eta = t.components()
    assert sorted(w) == pytest.approx([0.4, 0.6])
    assert t.support == 2
    assert GeneratingOperator.fock_projector(3, 8).support == 4


def test_weyl_identity_and_inverse(cfg):
    np.testing.assert_allclose(weyl_operator(PhasePoint(0, 0), cfg), np.eye(64), atol=1e-14)
    for q, p in PTS:
        w = weyl_operator(PhasePoint(q, p), cfg)
        winv = weyl_operator(PhasePoint(-q, -p), cfg)
        assert np.abs(w @ winv - np.eye(64)).max() <= 1e-8


@pytest.mark.parametrize("q, p", [(6.0, 6.0), (-6.0, 2.0), (0.5, -6.0)])
def test_weyl_unitary(cfg, q, p):
    w = weyl_operator(PhasePoint(q, p), cfg)
    assert np.abs(w.conj().T @ w - np.eye(64)).max() <= 1e-8


@pytest.mark.parametrize("q, p", PTS)
def test_weyl_product_form_agrees_on_the_block(cfg, q, p):
    pt = PhasePoint(q, p)
    a = weyl_operator(pt, cfg)
    assert blockdiff(a, weyl_operator(pt, cfg, "product")) <= 1e-8
    assert blockdiff(a, displacement_matrix(pt, 64)) <= 1e-8


def test_weyl_unknown_method(cfg):
    with pytest.raises(ValueError):
        weyl_operator(PhasePoint(0, 0), cfg, "series")


def test_weyl_shift_sign(cfg, Q):
    w = weyl_operator(PhasePoint(1.0, 0.0), cfg)
    shift = w.conj().T @ Q @ w - Q
    assert blockdiff(shift, np.eye(64)) <= 1e-10
    # oracle: W(1,0) h_0 is h_0(x - 1) up to phase, whose mean position is +1
    x = np.linspace(-12, 12, 20001)
    oracle = trapezoid(x * hermite_functions(1, x - 1.0)[0] ** 2, x)
    assert shift[0, 0].real == pytest.approx(oracle, abs=1e-10)


@pytest.mark.parametrize("a, b", [((1.0, 0.5), (-0.5, 1.0)), ((2.0, -1.0), (0.3, 0.7))])
def test_weyl_relation(cfg, a, b):
    wa = weyl_operator(PhasePoint(*a), cfg)
    wb = weyl_operator(PhasePoint(*b), cfg)
    wab = weyl_operator(PhasePoint(a[0] + b[0], a[1] + b[1]), cfg)
    m = (wa @ wb @ wab.conj().T)[:16, :16]
    phase = m[0, 0]
    assert abs(abs(phase) - 1) <= 1e-6
    assert np.abs(m - phase * np.eye(16)).max() <= 1e-6
    # D(x) D(y) = exp(i Im(x conj(y))) D(x + y) gives exp(i (p q' - q p') / 2)
    assert phase == pytest.approx(np.exp(0.5j * (a[1] * b[0] - a[0] * b[1])), abs=1e-6)


def test_displaced_density_basics():
    t = GeneratingOperator.fock_diagonal([0.6, 0.4], 64)
    np.testing.assert_allclose(displaced_density(t, PhasePoint(0, 0)), t.matrix, atol=1e-15)
    rho = displaced_density(t, PhasePoint(2.0, -1.0))
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho).min() >= -1e-12


@pytest.mark.parametrize("q, p", [(0.5, 0.0), (2.0, -1.0), (-1.0, 3.0)])
def test_displaced_ground_state_overlap(q, p):
    rho = displaced_density(GeneratingOperator.fock_projector(0, 64), PhasePoint(q, p))
    # oracle: |<h_0|W h_0>|^2 with (W h_0)(x) = e^{i p x} h_0(x - q) up to phase
    x = np.linspace(-15, 15, 30001)
    h = hermite_functions(1, x)[0]
    overlap = trapezoid(h * np.exp(1j * p * x) * hermite_functions(1, x - q)[0], x)
    assert rho[0, 0].real == pytest.approx(abs(overlap) ** 2, abs=1e-10)
    assert rho[0, 0].real == pytest.approx(math.exp(-(q * q + p * p) / 2), abs=1e-14)


def test_displaced_density_tail_error():
    t = GeneratingOperator.fock_projector(0, 4)
    with pytest.raises(TailMassError) as info:
        displaced_density(t, PhasePoint(2.0, -1.0))
    assert info.value.tail > 0.1


def test_husimi_point_values():
    grid = PhaseGrid(-1.0, 1.0, -1.0, 1.0, 3, 3)
    h0 = husimi(FockState.basis(0, 64), grid, tail_tol=None)
    h1 = husimi(FockState.basis(1, 64), grid, tail_tol=None)
    assert h0[1, 1] == pytest.approx(1.0, abs=1e-14)
    assert h1[1, 1] == pytest.approx(0.0, abs=1e-14)


def test_husimi_normalization_on_default_grid(rng):
    state = FockState.random(64, rng, 8)
    vals = husimi(state)
    _, _, w = PhaseGrid().nodes()
    assert w @ vals.ravel() / (2 * np.pi) == pytest.approx(1.0, abs=1e-6)
    assert vals.min() >= -1e-10


def test_generalized_distribution_positive_for_mixed_generator(rng):
    t = GeneratingOperator.fock_diagonal([0.2, 0.5, 0.3], 64)
    vals = generalized_distribution(t, FockState.random(64, rng, 6), PhaseGrid(n_q=65, n_p=65))
    assert vals.min() >= -1e-10


def test_generalized_distribution_small_grid_raises():
    with pytest.raises(TailMassError):
        husimi(FockState.basis(4, 64), PhaseGrid(-1.0, 1.0, -1.0, 1.0, 21, 21))


def test_generalized_distribution_dimension_mismatch():
    with pytest.raises(ValueError):
        generalized_distribution(GeneratingOperator.fock_projector(0, 8), FockState.basis(0, 6))


def test_wigner_origin_is_parity():
    grid = PhaseGrid(-1.0, 1.0, -1.0, 1.0, 3, 3)
    for n in range(4):
        w = wigner_transform(FockState.basis(n, 64), grid, tail_tol=None)
        assert w[1, 1] == pytest.approx((-1) ** n, abs=1e-13)


def test_wigner_ground_state():
    vals = wigner_transform(FockState.basis(0, 64))
    q, p, w = PhaseGrid().nodes()
    assert vals.min() >= -1e-10
    np.testing.assert_allclose(vals.ravel(), np.exp(-(q * q + p * p)), atol=1e-13)
    assert w @ vals.ravel() == pytest.approx(math.pi, abs=1e-6)


def test_wigner_first_excited_state_is_negative():
    assert wigner_transform(FockState.basis(1, 64)).min() <= -0.5


def test_wigner_covariance(rng):
    state = FockState.random(64, rng, 5)
    q0, p0 = 0.75, -0.5
    d = displacement_matrix(PhasePoint(q0, p0), 64)
    shifted = FockState.from_amplitudes(d @ state.coeffs)
    grid = PhaseGrid(-3.0, 3.0, -3.0, 3.0, 31, 31)
    moved = PhaseGrid(-3.0 - q0, 3.0 - q0, -3.0 - p0, 3.0 - p0, 31, 31)
    a = wigner_transform(shifted, grid, tail_tol=None)
    b = wigner_transform(state, moved, tail_tol=None)
    np.testing.assert_allclose(a, b, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.floats(-4, 4), st.floats(-4, 4))
def test_husimi_pointwise_nonnegative(seed, q, p):
    state = FockState.random(32, make_rng(seed), 12)
    grid = PhaseGrid(q - 0.1, q + 0.1, p - 0.1, p + 0.1, 2, 2)
    assert husimi(state, grid, tail_tol=None).min() >= -1e-10

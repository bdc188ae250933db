import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import sqrtm

from pomquant import (
    BorelSet1D,
    DiscretePOM,
    FockState,
    assemble_binned_observable,
    bin_labels,
    is_noiseless,
    noise_operator,
    pom_moment,
    probabilities,
    projection_defect,
    spectral_measure,
    spectral_pom,
    two_valued_pom,
    variance_decomposition,
)
from pomquant.measurement import make_rng

EYE4 = np.eye(4)


def test_two_valued_half_identity():
    pom = two_valued_pom(0.5 * EYE4)
    assert all(np.allclose(pom_moment(pom, k), 0.5 * EYE4) for k in range(1, 7))
    np.testing.assert_array_equal(pom_moment(pom, 0), EYE4)
    v = variance_decomposition(pom, FockState.basis(2, 4))
    assert v == pytest.approx((0.25, 0.0, 0.25))
    np.testing.assert_allclose(probabilities(pom, FockState.basis(0, 4)), [0.5, 0.5])
    assert not is_noiseless(pom)


def test_three_outcome_moments():
    pom = DiscretePOM(np.array([-1.0, 0.0, 1.0]), np.array([0.25 * EYE4, 0.5 * EYE4, 0.25 * EYE4]))
    np.testing.assert_allclose(pom_moment(pom, 1), 0 * EYE4)
    np.testing.assert_allclose(pom_moment(pom, 2), 0.5 * EYE4)
    with pytest.raises(ValueError):
        pom_moment(pom, -1)


def test_noise_of_two_valued_pom_is_a_minus_a_squared(rng):
    u, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    a = (u * [0.1, 0.3, 0.8, 0.95]) @ u.conj().T
    np.testing.assert_allclose(noise_operator(two_valued_pom(a)), a - a @ a, atol=1e-14)


def test_projection_pom_is_noiseless(cfg, Q):
    pom = two_valued_pom(spectral_measure(Q, BorelSet1D.parse("[0,inf)")))
    assert np.linalg.norm(noise_operator(pom), 2) <= 1e-8
    assert is_noiseless(pom)
    assert variance_decomposition(pom, FockState.basis(3, 64)).noise == pytest.approx(0.0, abs=1e-12)


def test_spectral_pom_is_noiseless(Q):
    pom = spectral_pom(Q, np.linspace(-3, 3, 7))
    assert is_noiseless(pom, 1e-8)
    assert all(projection_defect(e) <= 1e-7 for e in pom.effects)
    assert pom.metadata["kind"] == "spectral"


def test_unsharp_binned_position(type_a):
    pom = assemble_binned_observable(type_a("h0"), "position", np.linspace(-2, 2, 9))
    assert not is_noiseless(pom)
    h0 = FockState.basis(0, 64)
    # oracle: |h_0|^2 * |h_0|^2 is the unit-variance normal density
    cuts = np.concatenate([[-np.inf], np.linspace(-2, 2, 9), [np.inf]])
    cdf = 0.5 * (1 + np.array([math.erf(c / math.sqrt(2)) for c in cuts]))
    np.testing.assert_allclose(probabilities(pom, h0), np.diff(cdf), atol=1e-6)
    v = variance_decomposition(pom, h0)
    assert abs(v.total - v.sharp - v.noise) <= 1e-8


def test_coarsening_does_not_reduce_noise(type_a, rng):
    qa = type_a("h0")
    fine = assemble_binned_observable(qa, "position", np.linspace(-2, 2, 9))
    mid = assemble_binned_observable(qa, "position", np.linspace(-2, 2, 5))
    coarse = assemble_binned_observable(qa, "position", [-2.0, 0.0, 2.0])
    for _ in range(20):
        s = FockState.random(64, rng, 8)
        n = [variance_decomposition(p, s).noise for p in (fine, mid, coarse)]
        assert n[0] <= n[1] + 1e-12 <= n[2] + 2e-12


def test_bin_labels():
    np.testing.assert_array_equal(bin_labels([0.0]), [-1.0, 1.0])
    np.testing.assert_array_equal(bin_labels([-1.0, 1.0, 2.0]), [-2.0, 0.0, 1.5, 3.0])
    for bad in ([], [1.0, 1.0], [0.0, np.inf]):
        with pytest.raises(ValueError):
            bin_labels(bad)


@pytest.mark.parametrize(
    "labels, effects",
    [
        ([0.0, 1.0], [0.5 * EYE4, 0.6 * EYE4]),
        ([0.0, 1.0], [1.2 * EYE4, -0.2 * EYE4]),
        ([1.0, 1.0], [0.5 * EYE4, 0.5 * EYE4]),
        ([0.0], [EYE4[:3]]),
        ([0.0, 1.0], [EYE4 - np.triu(np.ones((4, 4)), 1) * 0.1, np.triu(np.ones((4, 4)), 1) * 0.1]),
    ],
)
def test_invalid_poms(labels, effects):
    with pytest.raises(ValueError):
        DiscretePOM(np.array(labels), np.array(effects))


def test_pom_is_frozen():
    pom = two_valued_pom(0.5 * EYE4)
    with pytest.raises(ValueError):
        pom.effects[0, 0, 0] = 1


def test_variance_decomposition_dimension_check():
    with pytest.raises(ValueError):
        variance_decomposition(two_valued_pom(0.5 * EYE4), FockState.basis(0, 5))


@st.composite
def random_poms(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    m = draw(st.integers(1, 5))
    dim = draw(st.integers(2, 6))
    rng = make_rng(seed)
    raw = []
    for _ in range(m):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        raw.append(g @ g.conj().T)
    s_inv = np.linalg.inv(sqrtm(sum(raw)))
    effects = np.array([s_inv @ r @ s_inv.conj().T for r in raw])
    effects = 0.5 * (effects + effects.conj().transpose(0, 2, 1))
    labels = np.sort(rng.choice(np.arange(-20, 21), size=m, replace=False) / 4.0)
    return DiscretePOM(labels, effects), rng


@settings(max_examples=40, deadline=None)
@given(random_poms())
def test_noise_operator_is_positive(pom_rng):
    pom, _ = pom_rng
    assert np.linalg.eigvalsh(noise_operator(pom)).min() >= -1e-8


@settings(max_examples=40, deadline=None)
@given(random_poms())
def test_variance_identity_and_mean(pom_rng):
    pom, rng = pom_rng
    state = FockState.random(pom.dim, rng)
    v = variance_decomposition(pom, state)
    assert abs(v.total - v.sharp - v.noise) <= 1e-8
    prob = probabilities(pom, state)
    assert prob.min() >= -1e-8 and prob.sum() == pytest.approx(1.0, abs=1e-8)
    assert state.expect(pom_moment(pom, 1)).real == pytest.approx(prob @ pom.labels, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(random_poms())
def test_noiseless_implies_projections(pom_rng):
    pom, _ = pom_rng
    if is_noiseless(pom, 1e-8):
        assert all(projection_defect(e) <= 1e-7 for e in pom.effects)

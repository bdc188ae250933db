import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from pomquant import (
    BorelSet1D,
    ConfigError,
    Disc,
    FockState,
    GeneratingOperator,
    GridSampled,
    HalfPlane,
    Indicator,
    Monomial,
    PhaseGrid,
    PhasePoint,
    QuantizerA,
    QuantizerWeyl,
    Rectangle,
    Sector,
    SpectrumOutsideUnitInterval,
    TailMassError,
    UnboundedFunctionError,
    ArrivalTime,
    assemble_binned_observable,
    commutation_defect,
    displacement_matrix,
    effect_report,
    gamma_a,
    gamma_a_cylinder,
    gamma_weyl,
    momentum_measure,
    momentum_question,
    moment_sequence,
    pom_moment,
    position_measure,
    position_question,
    probabilities,
    quantize,
    quantize_question,
    spectral_measure,
)
from pomquant._numerics import hermite_functions

from conftest import DIM, blockdiff

HALF = BorelSet1D.parse("[0,inf)")
EYE = np.eye(DIM)


def smeared_moment(k, n, eta=0):
    # oracle: int x^k (|h_eta|^2 * |h_n|^2)(x) dx as a double integral over (u, s), x = u + s
    x = np.linspace(-14, 14, 2801)
    ru = hermite_functions(eta + 1, x)[eta] ** 2
    rs = hermite_functions(n + 1, x)[n] ** 2
    xx = x[:, None] + x[None, :]
    return trapezoid(trapezoid(xx ** k * ru[:, None] * rs[None, :], x, axis=1), x)


@pytest.mark.parametrize("name", ["h0", "h1", "mix"])
def test_type_a_constant_is_identity(type_a, name):
    assert np.abs(gamma_a(type_a(name), Monomial(0, 0)) - EYE).max() <= 1e-6


def test_type_a_tail_mass_is_small(type_a):
    assert type_a("h0").tail_mass <= 1e-9


def test_type_a_half_plane_ground_state(type_a):
    a = gamma_a(type_a("h0"), Indicator(HalfPlane(0.0, 0.0)))
    assert a[0, 0].real == pytest.approx(0.5, abs=1e-12)


def test_type_a_position_moments(type_a, Q):
    qa = type_a("h0")
    x1 = gamma_a(qa, Monomial(1, 0))
    x2 = gamma_a(qa, Monomial(2, 0))
    assert blockdiff(x1, Q) <= 1e-6
    assert blockdiff(x2, Q @ Q + 0.5 * EYE) <= 1e-6
    for n in range(3):
        assert x2[n, n].real == pytest.approx(smeared_moment(2, n), abs=1e-6)


def test_type_a_h1_second_moment_oracle(type_a):
    x2 = gamma_a(type_a("h1"), Monomial(2, 0))
    # |h_1|^2 has variance 3/2
    assert x2[0, 0].real == pytest.approx(smeared_moment(2, 0, eta=1), abs=1e-6)
    assert x2[0, 0].real == pytest.approx(0.5 + 1.5, abs=1e-9)


def test_type_a_momentum_moment(type_a, P):
    assert blockdiff(gamma_a(type_a("h0"), Monomial(0, 2)), P @ P + 0.5 * EYE) <= 1e-6


@pytest.mark.parametrize(
    "f", [Indicator(HalfPlane(0.3, 0.5)), Indicator(Sector(0.4, 2.9)), position_question(BorelSet1D.parse("[-1,2]"))]
)
def test_type_a_complementation(type_a, f):
    qa = type_a("h0")
    assert np.abs(gamma_a(qa, f) + gamma_a(qa, f.complement()) - EYE).max() <= 1e-6


@pytest.mark.parametrize("q0, p0", [(1.0, -0.5), (-2.0, 2.0)])
def test_type_a_covariance(type_a, q0, p0):
    qa = type_a("mix")
    f = Indicator(Disc((0.3, 0.2), 1.5))
    w = displacement_matrix(PhasePoint(q0, p0), DIM)
    moved = gamma_a(qa, f.translated(q0, p0))
    assert blockdiff(moved, w @ gamma_a(qa, f) @ w.conj().T) <= 1e-5


@pytest.mark.parametrize("name", ["h0", "h1", "mix"])
@pytest.mark.parametrize(
    "region",
    [HalfPlane(1.2, -0.3), Rectangle(BorelSet1D.parse("[0,1]"), BorelSet1D.parse("[-2,2]")),
     Disc((0.0, 0.0), 0.8), Sector(0.0, 0.6)],
)
def test_type_a_questions_are_unsharp_effects(type_a, name, region):
    rep = effect_report(gamma_a(type_a(name), Indicator(region)))
    assert rep.min_eig >= -1e-8 and rep.max_eig <= 1 + 1e-8
    assert rep.proj_defect >= 1e-3


def test_cylinder_fast_path(type_a):
    qa = type_a("h1")
    b = BorelSet1D.parse("[-1,1]")
    assert np.abs(gamma_a_cylinder(qa, "position", b) - gamma_a(qa, position_question(b))).max() <= 1e-6
    assert np.abs(gamma_a_cylinder(qa, "momentum", b) - gamma_a(qa, momentum_question(b))).max() <= 1e-6


def test_cylinder_basics(type_a):
    qa = type_a("h0")
    np.testing.assert_allclose(gamma_a_cylinder(qa, "position", BorelSet1D.real_line()), EYE, atol=1e-12)
    assert gamma_a_cylinder(qa, "position", HALF)[0, 0].real == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        gamma_a_cylinder(qa, "energy", HALF)


def test_cylinder_with_general_generator():
    # a non-diagonal T exercises the eigendecomposed form
    v = np.zeros(16, dtype=complex)
    v[:3] = [0.6, 0.64j, -0.48]
    t = GeneratingOperator(0.7 * np.outer(v, v.conj()) + 0.3 * np.diag(np.eye(16)[2]))
    qa = QuantizerA(t)
    b = BorelSet1D.parse("(-inf,0.25]")
    for axis, f in (("position", position_question(b)), ("momentum", momentum_question(b))):
        assert np.abs(gamma_a_cylinder(qa, axis, b) - gamma_a(qa, f)).max() <= 1e-6


def test_weyl_calibration_and_identity(weyl):
    assert weyl.calibration == pytest.approx(1 / math.pi, rel=1e-12)
    assert weyl.tail_mass <= 1e-9
    assert np.abs(gamma_weyl(weyl, Monomial(0, 0)) - EYE).max() <= 1e-6


def test_weyl_marginals_and_monomials(weyl, cfg, Q, P):
    b = BorelSet1D.parse("[-1,2]")
    assert blockdiff(gamma_weyl(weyl, position_question(b)), position_measure(cfg, b)) <= 1e-5
    assert blockdiff(gamma_weyl(weyl, momentum_question(b)), momentum_measure(cfg, b)) <= 1e-5
    assert blockdiff(gamma_weyl(weyl, Monomial(1, 0)), Q) <= 1e-5
    assert blockdiff(gamma_weyl(weyl, Monomial(2, 0)), Q @ Q) <= 1e-5


def test_weyl_mixed_monomial_is_symmetrized(weyl, Q, P):
    assert blockdiff(gamma_weyl(weyl, Monomial(1, 1)), 0.5 * (Q @ P + P @ Q)) <= 1e-5


def test_weyl_sector_escapes_unit_interval(weyl):
    rep = effect_report(gamma_weyl(weyl, Indicator(Sector(math.pi / 2, math.pi))))
    assert rep.max_eig > 1 or rep.min_eig < 0
    assert rep.min_eig < -0.05


def test_quantize_dispatch(weyl, type_a):
    f = Indicator(HalfPlane(0.0, 0.0))
    np.testing.assert_array_equal(quantize(weyl, f), gamma_weyl(weyl, f))
    np.testing.assert_array_equal(quantize(type_a("h0"), f), gamma_a(type_a("h0"), f))


def test_quantizer_errors(type_a):
    qa = type_a("h0")
    with pytest.raises(ConfigError):
        gamma_a(qa, Monomial(3, 2))
    with pytest.raises(UnboundedFunctionError):
        gamma_a(qa, ArrivalTime())
    with pytest.raises(UnboundedFunctionError):
        gamma_a(qa, GridSampled(PhaseGrid(n_q=3, n_p=3), np.full((3, 3), np.nan)))
    assert QuantizerA(qa.T, max_degree=5).max_degree == 5


def test_small_grid_reports_tail_mass():
    small = PhaseGrid(-3.0, 3.0, -3.0, 3.0, 72, 72, "gauss-legendre-tensor")
    qa = QuantizerA(GeneratingOperator.fock_projector(0, 16), small)
    assert qa.tail_mass > 1e-6
    with pytest.raises(TailMassError):
        gamma_a(qa, Indicator(HalfPlane(0.0, 0.0)))
    with pytest.raises(TailMassError):
        gamma_weyl(QuantizerWeyl(16, small), Monomial(1, 0))


def test_grid_sampled_quantization(type_a):
    grid = PhaseGrid.covering(DIM, density=6)
    f = GridSampled.sample(Monomial(0, 0), grid)
    assert np.abs(gamma_a(type_a("h0"), f) - EYE).max() <= 1e-6


def test_quantize_question_constant():
    pom = quantize_question(0.5 * EYE)
    assert list(pom.labels) == [0.0, 1.0]
    for k in range(1, 6):
        np.testing.assert_array_equal(pom_moment(pom, k), 0.5 * EYE)


def test_quantize_question_projection(Q):
    a = spectral_measure(Q, HALF)
    pom = quantize_question(a)
    assert np.abs(pom_moment(pom, 2) - pom_moment(pom, 1) @ pom_moment(pom, 1)).max() <= 1e-8


@pytest.mark.parametrize("scale", [1.2, -0.1])
def test_quantize_question_refuses(scale):
    with pytest.raises(SpectrumOutsideUnitInterval) as info:
        quantize_question(scale * EYE)
    assert info.value.min_eig == pytest.approx(scale)


def test_quantize_question_requires_hermitian():
    with pytest.raises(ValueError):
        quantize_question(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_moment_sequence_indicator_is_constant(type_a, weyl):
    f = Indicator(Disc((0.0, 1.0), 1.0))
    for quantizer in (type_a("h0"), weyl):
        seq = moment_sequence(quantizer, f, 4)
        for a in seq[1:]:
            assert np.abs(a - seq[0]).max() <= 1e-8


def test_moment_sequence_monomials(type_a, weyl, Q):
    w1, w2, w3 = moment_sequence(weyl, Monomial(1, 0), 3)
    for got, k in ((w1, 1), (w2, 2), (w3, 3)):
        assert blockdiff(got, np.linalg.matrix_power(Q, k)) <= 1e-5
    a1, a2 = moment_sequence(type_a("h0"), Monomial(1, 0), 2)
    assert blockdiff(a1, Q) <= 1e-6
    assert blockdiff(a2, Q @ Q + 0.5 * EYE) <= 1e-6


def test_binned_observable(type_a):
    qa = type_a("h0")
    split = assemble_binned_observable(qa, "position", [0.0])
    prob = probabilities(split, FockState.basis(0, DIM))
    np.testing.assert_allclose(prob, [0.5, 0.5], atol=1e-12)
    assert list(split.labels) == [-1.0, 1.0]
    edges = np.linspace(-2, 2, 9)
    ten = assemble_binned_observable(qa, "momentum", edges)
    assert len(ten) == 10
    assert np.abs(ten.effects.sum(axis=0) - EYE).max() <= 1e-6
    assert ten.metadata["kind"] == "unsharp-momentum"


def test_binned_observable_refine_then_coarsen(type_a):
    qa = type_a("h1")
    coarse = assemble_binned_observable(qa, "position", [-1.0, 1.0])
    fine = assemble_binned_observable(qa, "position", [-1.0, 0.0, 1.0])
    merged = fine.effects[1] + fine.effects[2]
    assert np.abs(merged - coarse.effects[1]).max() <= 1e-12


def test_binned_observable_needs_edges(type_a):
    with pytest.raises(ValueError):
        assemble_binned_observable(type_a("h0"), "position", [])
    with pytest.raises(ValueError):
        assemble_binned_observable(type_a("h0"), "position", [1.0, 0.0])


def test_effect_report_examples(type_a, Q):
    assert effect_report(spectral_measure(Q, HALF)).proj_defect <= 1e-8
    assert effect_report(0.5 * EYE).proj_defect == pytest.approx(0.25)
    assert effect_report(gamma_a(type_a("h0"), position_question(HALF))).proj_defect >= 0.1
    d = effect_report(0.5 * EYE).to_dict()
    assert set(d) == {"min_eig", "max_eig", "proj_defect", "hermiticity_defect"}


def test_commutation_defect_examples(cfg, type_a, Q, P):
    a = gamma_a(type_a("h0"), position_question(HALF))
    assert commutation_defect(a, a) == 0
    assert commutation_defect(spectral_measure(Q, HALF), spectral_measure(P, HALF)) > 0.1
    assert commutation_defect(position_measure(cfg, HALF), momentum_measure(cfg, HALF)) > 0.1
    assert commutation_defect(a, gamma_a(type_a("h0"), momentum_question(HALF))) > 0.05

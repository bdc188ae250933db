"""Named invariant checks run by ``pomquant verify``.

Each check returns ``(passed, value, threshold, detail)``. A check that
raises :class:`TailMassError` is reported as a failed ``tail`` check, which
is how an undersized basis shows up.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .borel import BorelSet1D
from .exceptions import PomQuantError, SpectrumOutsideUnitInterval, TailMassError
from .fock import (
    FockState,
    TruncationConfig,
    build_fourier,
    build_momentum,
    build_parity,
    build_position,
    hermiticity_defect,
    momentum_measure,
    position_measure,
)
from .functions import Disc, HalfPlane, Indicator, Monomial, Rectangle, Sector, momentum_question, position_question
from .measurement import make_rng, moment_transfer_check
from .phase_space import (
    GeneratingOperator,
    PhasePoint,
    displaced_density,
    husimi,
    weyl_operator,
    wigner_transform,
)
from .pom import noise_operator, pom_moment, variance_decomposition
from .quantizer import (
    QuantizerA,
    QuantizerWeyl,
    commutation_defect,
    effect_report,
    gamma_a,
    gamma_a_cylinder,
    gamma_weyl,
    quantize_question,
)

__all__ = ["CHECKS", "CheckResult", "run_checks"]

MARGINAL_SETS = ("[0,inf)", "[-1,2]", "(-inf,-0.5]u[1,3]")


def sample_regions():
    """One region of each kind, none symmetric about the origin."""
    return {
        "half-plane": HalfPlane(0.3, 0.5),
        "rectangle": Rectangle(BorelSet1D.parse("[-1,2]"), BorelSet1D.parse("[0,1.5]")),
        "disc": Disc((0.5, -0.3), 2.0),
        "sector": Sector(math.pi / 2, math.pi),
    }


class Context:
    """Lazily built operators shared by the checks of one run."""

    def __init__(self, dim: int = 64, tail_tol: float = 1e-6):
        self.cfg = TruncationConfig(dim, tail_tol)
        self.dim = dim
        self.k = self.cfg.block
        self.tail_tol = tail_tol
        self._a: dict = {}

    @cached_property
    def q(self):
        return build_position(self.cfg)

    @cached_property
    def p(self):
        return build_momentum(self.cfg)

    @cached_property
    def weyl(self) -> QuantizerWeyl:
        return QuantizerWeyl(self.dim, tail_tol=self.tail_tol)

    def type_a(self, name: str) -> QuantizerA:
        if name not in self._a:
            self._a[name] = QuantizerA(self.generator(name), tail_tol=self.tail_tol)
        return self._a[name]

    def generator(self, name: str) -> GeneratingOperator:
        if name == "mix":
            return GeneratingOperator.fock_diagonal([0.6, 0.4], self.dim)
        return GeneratingOperator.fock_projector(int(name[1:]), self.dim)

    def blockdiff(self, a, b) -> float:
        return float(np.abs(a - b)[: self.k, : self.k].max())


def _canonical(ctx: Context):
    k = ctx.dim - 2
    ccr = ctx.q @ ctx.p - ctx.p @ ctx.q
    herm = max(hermiticity_defect(ctx.q), hermiticity_defect(ctx.p))
    par = float(np.abs(build_fourier(ctx.cfg) @ build_fourier(ctx.cfg) - build_parity(ctx.cfg)).max())
    val = max(float(np.linalg.norm(ccr[:k, :k] - 1j * np.eye(k), 2)), herm, par)
    return val <= 1e-10, val, 1e-10, "[Q,P] = iI below the top two levels; Q, P Hermitian; Par = F^2"


def _fourier(ctx: Context):
    f = build_fourier(ctx.cfg)
    val = float(np.abs(f.conj().T @ ctx.q @ f - ctx.p).max())
    b = BorelSet1D.parse("[-1,2]")
    phi = FockState.random(ctx.dim, make_rng(3), min(ctx.dim, 8)).coeffs
    lhs = np.vdot(phi, momentum_measure(ctx.cfg, b) @ phi)
    rhs = np.vdot(f @ phi, position_measure(ctx.cfg, b) @ (f @ phi))
    val = max(val, abs(lhs - rhs))
    return val <= 1e-10, val, 1e-10, "P = F* Q F and <phi|E^P(B) phi> = <F phi|E^Q(B) F phi>"


def _weyl(ctx: Context):
    worst = 0.0
    for pt in [PhasePoint(1.0, 0.0), PhasePoint(2.0, -1.0), PhasePoint(-1.5, 2.5)]:
        w = weyl_operator(pt, ctx.cfg)
        worst = max(worst, float(np.abs(w.conj().T @ w - np.eye(ctx.dim)).max()))
        worst = max(worst, ctx.blockdiff(w, weyl_operator(pt, ctx.cfg, "product")))
    w = weyl_operator(PhasePoint(1.0, 0.0), ctx.cfg)
    worst = max(worst, ctx.blockdiff(w.conj().T @ ctx.q @ w - ctx.q, np.eye(ctx.dim)))
    return worst <= 1e-8, worst, 1e-8, "unitarity, product form agreement and W*QW = Q + I on the block"


def _displaced_tail(ctx: Context):
    worst = 0.0
    for name, pt in (("h0", PhasePoint(2.0, -1.0)), ("h1", PhasePoint(-1.5, 2.0))):
        rho = displaced_density(ctx.generator(name), pt, ctx.tail_tol)
        worst = max(worst, abs(1.0 - np.trace(rho).real))
    return worst <= ctx.tail_tol, worst, ctx.tail_tol, "trace kept by displaced generating operators"


def _grid_tail(ctx: Context):
    val = max(ctx.weyl.tail_mass, ctx.type_a("h0").tail_mass)
    return val <= ctx.tail_tol, val, ctx.tail_tol, "kernel weight missed by the quantization grid"


def _marginals(ctx: Context):
    worst = 0.0
    for text in MARGINAL_SETS:
        b = BorelSet1D.parse(text)
        worst = max(worst, ctx.blockdiff(gamma_weyl(ctx.weyl, position_question(b)), position_measure(ctx.cfg, b)))
        worst = max(worst, ctx.blockdiff(gamma_weyl(ctx.weyl, momentum_question(b)), momentum_measure(ctx.cfg, b)))
    return worst <= 1e-5, worst, 1e-5, "Weyl quantized cylinders equal E^Q(B), E^P(B)"


def _monomials(ctx: Context):
    worst = 0.0
    for k in (1, 2, 3):
        worst = max(worst, ctx.blockdiff(gamma_weyl(ctx.weyl, Monomial(k, 0)), np.linalg.matrix_power(ctx.q, k)))
        worst = max(worst, ctx.blockdiff(gamma_weyl(ctx.weyl, Monomial(0, k)), np.linalg.matrix_power(ctx.p, k)))
    return worst <= 1e-5, worst, 1e-5, "Weyl quantized x^k, y^k equal Q^k, P^k"


def _effects(ctx: Context):
    out_of_range, min_proj = 0.0, math.inf
    for name in ("h0", "h1", "mix"):
        for region in sample_regions().values():
            rep = effect_report(gamma_a(ctx.type_a(name), Indicator(region)))
            out_of_range = max(out_of_range, -rep.min_eig, rep.max_eig - 1.0)
            min_proj = min(min_proj, rep.proj_defect)
    ok = out_of_range <= 1e-8 and min_proj >= 1e-3
    return ok, out_of_range, 1e-8, f"type-(a) questions are effects; smallest projection defect {min_proj:.3g}"


def _sector(ctx: Context):
    rep = effect_report(gamma_weyl(ctx.weyl, Indicator(Sector(math.pi / 2, math.pi))))
    escape = max(rep.max_eig - 1.0, -rep.min_eig)
    return escape >= 0.05, escape, 0.05, f"Weyl quarter-plane spectrum [{rep.min_eig:.4f}, {rep.max_eig:.4f}]"


def _questions(ctx: Context):
    worst = 0.0
    for region in sample_regions().values():
        a = gamma_a(ctx.type_a("h0"), Indicator(region))
        pom = quantize_question(a)
        for k in range(1, 6):
            worst = max(worst, float(np.abs(pom_moment(pom, k) - a).max()))
    try:
        quantize_question(gamma_weyl(ctx.weyl, Indicator(Sector(math.pi / 2, math.pi))))
        refused = False
    except SpectrumOutsideUnitInterval:
        refused = True
    return worst == 0.0 and refused, worst, 0.0, "E^A[k] = A exactly; the Weyl sector has no POM"


def _noise(ctx: Context):
    a = gamma_a(ctx.type_a("h0"), position_question(BorelSet1D.parse("[0,inf)")))
    n_norm = float(np.linalg.norm(noise_operator(quantize_question(a)), 2))
    proj = quantize_question(np.diag([1.0, 0.0] * (ctx.dim // 2) + [1.0] * (ctx.dim % 2)).astype(complex))
    n_proj = float(np.linalg.norm(noise_operator(proj), 2))
    rng = make_rng(11)
    pom = quantize_question(a)
    resid = 0.0
    for _ in range(20):
        v = variance_decomposition(pom, FockState.random(ctx.dim, rng, min(ctx.dim, 8)))
        resid = max(resid, abs(v.total - v.sharp - v.noise))
    x1 = gamma_a(ctx.type_a("h0"), Monomial(1, 0))
    x2 = gamma_a(ctx.type_a("h0"), Monomial(2, 0))
    half = ctx.blockdiff(x2 - x1 @ x1, 0.5 * np.eye(ctx.dim))
    ok = n_norm >= 0.1 and n_proj <= 1e-8 and resid <= 1e-8 and half <= 1e-5
    detail = f"|N| unsharp {n_norm:.3g}, projection {n_proj:.2g}; decomposition {resid:.2g}; x-moment noise {half:.2g}"
    return ok, n_norm, 0.1, detail


def _distributions(ctx: Context):
    h0 = wigner_transform(FockState.basis(0, ctx.dim), tail_tol=ctx.tail_tol)
    h1 = wigner_transform(FockState.basis(1, ctx.dim), tail_tol=ctx.tail_tol)
    rng = make_rng(5)
    hmin = math.inf
    for _ in range(5):
        hmin = min(hmin, float(husimi(FockState.random(ctx.dim, rng, min(ctx.dim, 8)), tail_tol=ctx.tail_tol).min()))
    ok = h0.min() >= -1e-10 and h1.min() <= -0.5 and hmin >= -1e-10
    detail = f"min W[h0] {h0.min():.3g}, min W[h1] {h1.min():.4f}, min Husimi {hmin:.3g}"
    return bool(ok), float(h1.min()), -0.5, detail


def _fast_path(ctx: Context):
    worst = 0.0
    for name, text in (("h0", "[0,inf)"), ("h1", "[-1,1]"), ("mix", "(-inf,-0.5]u[1,3]")):
        b = BorelSet1D.parse(text)
        qa = ctx.type_a(name)
        worst = max(worst, float(np.abs(gamma_a_cylinder(qa, "position", b) - gamma_a(qa, position_question(b))).max()))
    return worst <= 1e-6, worst, 1e-6, "one-dimensional cylinder path equals the two-dimensional quadrature"


def _transfer(ctx: Context):
    rep = moment_transfer_check(
        ctx.type_a("h0"), Indicator(HalfPlane(0.0, 0.0)), FockState.basis(0, ctx.dim), 3, 100_000, 2024
    )
    return rep.passed(5.0), rep.max_deviation, 5.0, "sampled moments against <phi|Gamma(f^k) phi>, in std errors"


def _noncommutative(ctx: Context):
    b = BorelSet1D.parse("[0,inf)")
    qa = ctx.type_a("h0")
    da = commutation_defect(gamma_a(qa, position_question(b)), gamma_a(qa, momentum_question(b)))
    dw = commutation_defect(gamma_weyl(ctx.weyl, position_question(b)), gamma_weyl(ctx.weyl, momentum_question(b)))
    val = min(da, dw)
    return val >= 0.05, val, 0.05, f"|[E(q>=0), E(p>=0)]|: type (a) {da:.3f}, Weyl {dw:.3f}"


CHECKS = {
    "canonical-operators": _canonical,
    "fourier-convention": _fourier,
    "weyl-operators": _weyl,
    "basis-tail": _displaced_tail,
    "grid-tail": _grid_tail,
    "marginal-identities": _marginals,
    "weyl-monomials": _monomials,
    "effect-property": _effects,
    "sector-spectrum": _sector,
    "question-quantization": _questions,
    "noise": _noise,
    "distributions": _distributions,
    "cylinder-fast-path": _fast_path,
    "moment-transfer": _transfer,
    "noncommutativity": _noncommutative,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float | None
    threshold: float | None
    detail: str
    kind: str = "check"
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
            "kind": self.kind,
        }


def run_checks(dim: int = 64, tail_tol: float = 1e-6, only=None) -> list[CheckResult]:
    """Run the named checks (all by default) in registry order."""
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}; available: {list(CHECKS)}")
    ctx = Context(dim, tail_tol)
    results = []
    for name in CHECKS:
        if name not in names:
            continue
        t0 = time.perf_counter()
        try:
            ok, val, thr, detail = CHECKS[name](ctx)
            res = CheckResult(name, bool(ok), _num(val), _num(thr), detail)
        except TailMassError as exc:
            res = CheckResult(name, False, _num(exc.tail), ctx.tail_tol, str(exc), "tail")
        except (PomQuantError, ValueError) as exc:
            res = CheckResult(name, False, None, None, f"{type(exc).__name__}: {exc}", "error")
        results.append(CheckResult(**{**res.__dict__, "seconds": time.perf_counter() - t0}))
    return results


def _num(x):
    if x is None:
        return None
    x = float(np.real(x))
    return x if math.isfinite(x) else None

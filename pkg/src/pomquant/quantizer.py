"""The two phase-space quantization maps and question quantization.

Type (a), ``gamma_a``::

    Gamma^T(f) = 1/(2 pi) int f(q,p) W(q,p) T W(q,p)* dq dp

Weyl, ``gamma_weyl``::

    Gamma^Par(f) = c int f(q,p) W(q,p) Par W(q,p)* dq dp

where the constant ``c`` is fixed by requiring Gamma^Par(1) = I (it comes
out as 1/pi). Both integrals are evaluated with closed-form kernel matrix
elements, so the returned matrices are compressions of the exact operators
to the first ``dim`` oscillator levels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _numerics
from .borel import BorelSet1D
from .exceptions import ConfigError, SpectrumOutsideUnitInterval, TailMassError, UnboundedFunctionError
from .fock import hermiticity_defect
from ._numerics import composite_gauss_legendre, hermite_functions
from .functions import GridSampled, Monomial, PhaseSpaceFunction
from .phase_space import GeneratingOperator, PhaseGrid
from .pom import DiscretePOM, bin_labels, projection_defect, two_valued_pom

__all__ = [
    "QuantizerA",
    "QuantizerWeyl",
    "EffectReport",
    "gamma_a",
    "gamma_a_cylinder",
    "gamma_weyl",
    "quantize",
    "quantize_question",
    "moment_sequence",
    "assemble_binned_observable",
    "effect_report",
    "commutation_defect",
]


@dataclass(frozen=True)
class EffectReport:
    """Diagnostics for membership of an operator in the effect interval [O, I]."""

    min_eig: float
    max_eig: float
    proj_defect: float
    hermiticity_defect: float

    def is_effect(self, tol: float = 1e-8) -> bool:
        return self.min_eig >= -tol and self.max_eig <= 1 + tol

    def to_dict(self) -> dict:
        return {
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "proj_defect": self.proj_defect,
            "hermiticity_defect": self.hermiticity_defect,
        }


def effect_report(a: np.ndarray) -> EffectReport:
    lam = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    return EffectReport(float(lam[0]), float(lam[-1]), projection_defect(a), hermiticity_defect(a))


def commutation_defect(a: np.ndarray, b: np.ndarray) -> float:
    """Operator norm of the commutator AB - BA."""
    return float(np.linalg.norm(a @ b - b @ a, 2))


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


class _Quantizer:
    grid: PhaseGrid
    dim: int
    tail_tol: float
    max_degree: int
    tail_mass: float

    def _check(self, f: PhaseSpaceFunction):
        if isinstance(f, Monomial):
            if f.degree > self.max_degree:
                raise ConfigError(
                    f"monomial degree {f.degree} exceeds the cap {self.max_degree}; "
                    "raise max_degree to accept the larger truncation error"
                )
        elif not f.bounded:
            raise UnboundedFunctionError(f"{type(f).__name__} is not bounded on the grid")
        if self.tail_mass > self.tail_tol:
            raise TailMassError(
                f"{self.tail_mass:.3g} of the kernel weight of the lowest {self.dim} levels "
                f"lies outside the integration grid (tail_tol {self.tail_tol:g})",
                self.tail_mass,
            )

    def _rule(self, f: PhaseSpaceFunction):
        if isinstance(f, GridSampled):
            return f.rule()
        return f.rule(self.grid)


class QuantizerA(_Quantizer):
    """Type-(a) map Gamma^T for a generating operator T.

    ``grid`` sets the integration extent and node density (default: a
    Gauss-Legendre grid covering every kernel of the basis). The weight the
    grid misses is measured once, as max_m |1 - Gamma^T(1)_mm| over the first
    ``tail_levels`` levels, and every quantization raises
    :class:`TailMassError` if it exceeds ``tail_tol``.
    """

    def __init__(
        self,
        T: GeneratingOperator,
        grid: PhaseGrid | None = None,
        tail_tol: float = 1e-6,
        tail_levels: int | None = None,
        max_degree: int = 4,
    ):
        self.T = T
        self.dim = T.dim
        self.grid = PhaseGrid.covering(self.dim) if grid is None else grid
        self.tail_tol = tail_tol
        self.max_degree = max_degree
        self.tail_levels = self.dim if tail_levels is None else tail_levels
        self._support = T.support
        q, p, w = self.grid.nodes()
        diag = np.diag(self._integrate(q, p, w)).real
        self.tail_mass = float(np.abs(1.0 - diag[: self.tail_levels]).max())

    def _integrate(self, q, p, g) -> np.ndarray:
        j = self._support
        tj = self.T.matrix[:j, :j]
        alpha = (np.asarray(q) + 1j * np.asarray(p)) / math.sqrt(2.0)
        g = np.asarray(g, dtype=complex)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        chunk = max(512, 4_000_000 // (self.dim * j))
        for s in range(0, alpha.size, chunk):
            d = _numerics.displacement_elements(alpha[s:s + chunk], self.dim, j)
            x = (d @ tj) * g[s:s + chunk, None, None]
            # sum_i x_i d_i^dag, contracted over node and column index
            out += np.tensordot(x, d.conj(), axes=([0, 2], [0, 2]))
        return out / (2.0 * math.pi)


class QuantizerWeyl(_Quantizer):
    """Weyl map Gamma^Par on a ``dim``-level basis.

    The normalization constant is computed on the grid from the ground-state
    kernel, ``1 / sum w exp(-(q^2 + p^2))``, which makes Gamma^Par(1) = I.
    """

    def __init__(
        self,
        dim: int = 64,
        grid: PhaseGrid | None = None,
        tail_tol: float = 1e-6,
        tail_levels: int | None = None,
        max_degree: int = 4,
    ):
        self.dim = dim
        self.grid = PhaseGrid.covering(dim) if grid is None else grid
        self.tail_tol = tail_tol
        self.max_degree = max_degree
        self.tail_levels = dim if tail_levels is None else tail_levels
        q, p, w = self.grid.nodes()
        self.calibration = 1.0 / float(w @ np.exp(-(q * q + p * p)))
        beta = math.sqrt(2.0) * (q + 1j * p)
        x = (beta * beta.conjugate()).real
        diag = self.calibration * (_numerics._laguerre_diagonal(x, np.log(np.where(x > 0, x, 1.0)), 0, dim) @ w)
        diag *= (-1.0) ** np.arange(dim)
        self.tail_mass = float(np.abs(1.0 - diag[: self.tail_levels]).max())

    def _integrate(self, q, p, g) -> np.ndarray:
        beta = math.sqrt(2.0) * (np.asarray(q) + 1j * np.asarray(p))
        k = _numerics.integrate_displacement(beta, g, self.dim)
        return self.calibration * k * ((-1.0) ** np.arange(self.dim))[None, :]


def gamma_a(quantizer: QuantizerA, f: PhaseSpaceFunction) -> np.ndarray:
    """Gamma^T(f) by two-dimensional quadrature."""
    quantizer._check(f)
    q, p, w, vals = quantizer._rule(f)
    return _hermitize(quantizer._integrate(q, p, w * vals))


def gamma_weyl(quantizer: QuantizerWeyl, f: PhaseSpaceFunction) -> np.ndarray:
    """Gamma^Par(f); matrix elements are the Wigner pairings of basis pairs.

    For indicator functions the result need not be an effect.
    """
    quantizer._check(f)
    q, p, w, vals = quantizer._rule(f)
    return _hermitize(quantizer._integrate(q, p, w * vals))


def quantize(quantizer: QuantizerA | QuantizerWeyl, f: PhaseSpaceFunction) -> np.ndarray:
    if isinstance(quantizer, QuantizerWeyl):
        return gamma_weyl(quantizer, f)
    return gamma_a(quantizer, f)


def _marginal_density(T: GeneratingOperator, axis: str):
    # u -> sum_n t_n |eta_n(u)|^2, or the same for F eta_n on the momentum axis
    t, eta = T.components()
    if axis == "momentum":
        eta = ((-1j) ** np.arange(T.dim))[:, None] * eta
    j = max(1, _numerics.support_size(eta.T))
    eta = eta[:j]

    def density(u):
        amp = eta.T @ hermite_functions(j, u.ravel())
        return (t @ np.abs(amp) ** 2).reshape(u.shape)

    return density, math.sqrt(2.0 * j + 1.0) + 10.0


def gamma_a_cylinder(quantizer: QuantizerA, axis: str, borel: BorelSet1D, density: float = 24.0) -> np.ndarray:
    """Gamma^T of the question chi_B(x) (axis="position") or chi_B(y) (axis="momentum").

    The phase-space integral collapses to a one-dimensional convolution: the
    result is multiplication by g(x) = sum_n t_n int_B |eta_n(x - s)|^2 ds
    (in the momentum representation for ``axis="momentum"``).
    """
    if axis not in ("position", "momentum"):
        raise ValueError("axis must be 'position' or 'momentum'")
    rho, spread = _marginal_density(quantizer.T, axis)
    dim = quantizer.dim
    ext = math.sqrt(2.0 * dim + 1.0) + 10.0
    x, wx = composite_gauss_legendre(-ext, ext, density)
    inner_x, inner_w = np.polynomial.legendre.leggauss(96)
    g = np.zeros_like(x)
    for a, b in borel.clipped(-math.inf, math.inf):
        # u = x - s runs over [x - b, x - a], clipped to the support of rho
        lo = np.maximum(x - b, -spread)
        hi = np.minimum(x - a, spread)
        ok = hi > lo
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        u = mid[:, None] + half[:, None] * inner_x
        g += np.where(ok, half * (rho(u) @ inner_w), 0.0)
    h = hermite_functions(dim, x)
    mult = ((h * (wx * g)) @ h.T).astype(complex)
    if axis == "momentum":
        f = (-1j) ** np.arange(dim)
        mult = f.conj()[:, None] * mult * f[None, :]
    return _hermitize(mult)


def quantize_question(a: np.ndarray, tol: float = 1e-8) -> DiscretePOM:
    """Solve the constant moment problem E[k] = A for k = 1, 2, ...

    The solution exists exactly when A is an effect and is then the two-valued
    POM {0: I - A, 1: A}. Otherwise :class:`SpectrumOutsideUnitInterval`.
    """
    if hermiticity_defect(a) > tol:
        raise ValueError("question operator must be Hermitian")
    rep = effect_report(a)
    if not rep.is_effect(tol):
        raise SpectrumOutsideUnitInterval(rep.min_eig, rep.max_eig, tol)
    return two_valued_pom(a, tol)


def moment_sequence(quantizer, f: PhaseSpaceFunction, k_max: int) -> list[np.ndarray]:
    """[Gamma(f), Gamma(f^2), ..., Gamma(f^k_max)].

    Powers that coincide (f^k = f for indicators) are quantized once.
    """
    cache: dict = {}
    out = []
    for k in range(1, k_max + 1):
        fk = f.power(k)
        key = fk if not isinstance(fk, GridSampled) else id(fk)
        if key not in cache:
            cache[key] = quantize(quantizer, fk)
        out.append(cache[key])
    return out


def assemble_binned_observable(quantizer: QuantizerA, axis: str, bin_edges, tol: float = 1e-6) -> DiscretePOM:
    """Unsharp position or momentum observable binned at ``bin_edges``.

    Bins are (-inf, e_0), [e_0, e_1), ..., [e_last, inf); each effect is the
    type-(a) quantization of the corresponding cylinder question.
    """
    edges = np.asarray(bin_edges, dtype=float)
    labels = bin_labels(edges)
    bounds = np.concatenate([[-math.inf], edges, [math.inf]])
    effects = [
        gamma_a_cylinder(quantizer, axis, BorelSet1D.half_open(lo, hi)) for lo, hi in zip(bounds[:-1], bounds[1:])
    ]
    meta = {
        "kind": "unsharp-" + axis,
        "edges": edges.tolist(),
        "outer_labels": "outer bins are labeled edge - 1 and edge + 1",
    }
    return DiscretePOM(labels, np.array(effects), tol, meta)

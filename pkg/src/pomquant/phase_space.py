"""Weyl operators, displaced densities and phase-space distributions.

``W(q, p) = exp(i(pQ - qP))`` equals the displacement operator ``D(alpha)``
with ``alpha = (q + ip)/sqrt(2)``; it shifts position by ``q`` and momentum
by ``p``. Field evaluations use the closed-form matrix elements of
``D(alpha)``, so displacing a low-lying operator never loses weight to the
basis cut.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _numerics
from .exceptions import TailMassError
from .fock import FockState, TruncationConfig, build_momentum, build_position, spectral_decomposition

__all__ = [
    "PhasePoint",
    "PhaseGrid",
    "GeneratingOperator",
    "covering_radius",
    "weyl_operator",
    "displacement_matrix",
    "displaced_density",
    "generalized_distribution",
    "husimi",
    "wigner_transform",
]

RULES = ("midpoint-uniform", "gauss-legendre-tensor")


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError(f"phase point must be finite, got ({self.q}, {self.p})")

    @property
    def alpha(self) -> complex:
        return complex(self.q, self.p) / math.sqrt(2.0)


def covering_radius(dim: int) -> float:
    """Radius outside which every kernel involving levels < dim is negligible.

    The Wigner and Husimi functions of h_n live inside the classical orbit of
    radius sqrt(2n + 1); the margin covers their tails to roughly 1e-15.
    """
    return math.sqrt(2.0 * dim + 1.0) + 4.5


def _composite_exact(a: float, b: float, n: int, order: int = 16):
    # composite Gauss-Legendre with exactly n nodes
    panels = max(1, round(n / order))
    sizes = [n // panels + (1 if i < n % panels else 0) for i in range(panels)]
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for k, size in enumerate(sizes):
        x, w = np.polynomial.legendre.leggauss(size)
        half = 0.5 * (edges[k + 1] - edges[k])
        xs.append(0.5 * (edges[k + 1] + edges[k]) + half * x)
        ws.append(half * w)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class PhaseGrid:
    """Tensor quadrature grid on a phase-space rectangle.

    ``midpoint-uniform`` places nodes at cell centers (used for field output);
    ``gauss-legendre-tensor`` uses composite Gauss-Legendre panels (used for
    integration). The node density also sets the resolution of the
    region-adapted rules built by indicator functions.
    """

    q_min: float = -8.0
    q_max: float = 8.0
    p_min: float = -8.0
    p_max: float = 8.0
    n_q: int = 257
    n_p: int = 257
    rule: str = "midpoint-uniform"

    def __post_init__(self):
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise ValueError("grid bounds must satisfy q_min < q_max and p_min < p_max")
        if self.n_q < 1 or self.n_p < 1:
            raise ValueError("grid needs at least one node per axis")
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {RULES}")

    @classmethod
    def covering(cls, dim: int, density: float = 12.0) -> "PhaseGrid":
        """Symmetric Gauss-Legendre grid holding every kernel of a dim-level basis."""
        r = covering_radius(dim)
        n = int(math.ceil(2 * r * density))
        return cls(-r, r, -r, r, n, n, "gauss-legendre-tensor")

    @property
    def density(self) -> float:
        """Nodes per unit length (the finer of the two axes)."""
        return max(self.n_q / (self.q_max - self.q_min), self.n_p / (self.p_max - self.p_min))

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_q, self.n_p

    def axis(self, which: str):
        lo, hi, n = (
            (self.q_min, self.q_max, self.n_q) if which == "q" else (self.p_min, self.p_max, self.n_p)
        )
        if self.rule == "midpoint-uniform":
            h = (hi - lo) / n
            return lo + h * (np.arange(n) + 0.5), np.full(n, h)
        return _composite_exact(lo, hi, n)

    def nodes(self):
        """Flattened ``(q, p, w)`` with q varying slowest."""
        q, wq = self.axis("q")
        p, wp = self.axis("p")
        qq, pp = np.meshgrid(q, p, indexing="ij")
        return qq.ravel(), pp.ravel(), np.outer(wq, wp).ravel()

    def corners(self):
        return [(self.q_min, self.p_min), (self.q_min, self.p_max), (self.q_max, self.p_min), (self.q_max, self.p_max)]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseGrid":
        return cls(**d)


@dataclass(frozen=True)
class GeneratingOperator:
    """Positive unit-trace operator defining a type-(a) quantization map."""

    matrix: np.ndarray
    tol: float = field(default=1e-10, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("generating operator must be a square matrix")
        sd = spectral_decomposition(m, self.tol)
        if sd.eigenvalues[0] < -self.tol:
            raise ValueError(f"generating operator is not positive (min eigenvalue {sd.eigenvalues[0]:.3g})")
        if abs(np.trace(m).real - 1.0) > self.tol:
            raise ValueError(f"generating operator must have unit trace, got {np.trace(m).real:.12g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def fock_projector(cls, n: int, dim: int) -> "GeneratingOperator":
        m = np.zeros((dim, dim), dtype=complex)
        m[n, n] = 1.0
        return cls(m)

    @classmethod
    def fock_diagonal(cls, weights, dim: int) -> "GeneratingOperator":
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        m = np.zeros((dim, dim), dtype=complex)
        m[np.arange(weights.size), np.arange(weights.size)] = weights
        return cls(m)

    @classmethod
    def pure(cls, state: FockState) -> "GeneratingOperator":
        return cls(state.density())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def support(self) -> int:
        """Number of low levels carrying the operator."""
        return _numerics.support_size(self.matrix)

    def components(self):
        """``(t_n, eta_n)`` with T = sum_n t_n |eta_n><eta_n|, zero weights dropped."""
        sd = spectral_decomposition(self.matrix, self.tol)
        keep = sd.eigenvalues > self.tol
        return sd.eigenvalues[keep], sd.eigenvectors[:, keep]


# Weyl operators ----------------------------------------------------------

def _expi(h: np.ndarray, scale: float = 1.0) -> np.ndarray:
    # exp(i * scale * h) for Hermitian h, via its eigendecomposition
    lam, u = np.linalg.eigh(h)
    return (u * np.exp(1j * scale * lam)) @ u.conj().T


def weyl_operator(pt: PhasePoint, cfg: TruncationConfig, method: str = "generator") -> np.ndarray:
    """Unitary Weyl operator built from the truncated Q and P.

    ``method="generator"`` exponentiates the Hermitian generator pQ - qP once;
    ``method="product"`` uses exp(iqp/2) exp(-iqP) exp(ipQ). The two agree on
    low levels and differ near the cut, where truncated Q and P stop
    satisfying the canonical commutation relation.
    """
    q_op, p_op = build_position(cfg), build_momentum(cfg)
    if method == "generator":
        return _expi(pt.p * q_op - pt.q * p_op)
    if method == "product":
        return np.exp(0.5j * pt.q * pt.p) * _expi(p_op, -pt.q) @ _expi(q_op, pt.p)
    raise ValueError(f"unknown method {method!r}")


def displacement_matrix(pt: PhasePoint, dim: int, cols: int | None = None) -> np.ndarray:
    """Exact matrix elements <m|W(q,p)|n>, m < dim, n < cols (default dim).

    Not unitary once truncated; it is the compression of the true operator.
    """
    return _numerics.displacement_elements([pt.alpha], dim, dim if cols is None else cols)[0]


def displaced_density(T: GeneratingOperator, pt: PhasePoint, tail_tol: float | None = 1e-6) -> np.ndarray:
    """Return W(q,p) T W(q,p)* on the truncated basis.

    Raises :class:`TailMassError` when more than ``tail_tol`` of the trace is
    pushed above the top basis level.
    """
    j = T.support
    d = displacement_matrix(pt, T.dim, j)
    rho = d @ T.matrix[:j, :j] @ d.conj().T
    tail = 1.0 - np.trace(rho).real
    if tail_tol is not None and tail > tail_tol:
        raise TailMassError(
            f"displaced operator leaves {tail:.3g} of its trace above level {T.dim}", tail
        )
    return rho


# distributions -----------------------------------------------------------

def _check_state_tail(total: float, expected: float, tail_tol: float | None, what: str):
    tail = abs(expected - total)
    if tail_tol is not None and tail > tail_tol:
        raise TailMassError(
            f"{what} integrates to {total:.10g} on the grid instead of {expected:g}; "
            "the grid does not hold the state's phase-space support",
            tail,
        )


def generalized_distribution(
    T: GeneratingOperator, state: FockState, grid: PhaseGrid | None = None, tail_tol: float | None = 1e-6
) -> np.ndarray:
    """Sample <phi|W(q,p) T W(q,p)* phi> on ``grid``; returns shape ``grid.shape``.

    The field is a probability density with respect to dq dp / 2 pi.
    """
    grid = PhaseGrid() if grid is None else grid
    if T.dim != state.dim:
        raise ValueError("generating operator and state dimensions differ")
    q, p, w = grid.nodes()
    alpha = (q + 1j * p) / math.sqrt(2.0)
    j = T.support
    tj = T.matrix[:j, :j]
    phi = state.coeffs
    out = np.empty(q.size)
    chunk = max(256, 4_000_000 // (state.dim * j))
    for s in range(0, q.size, chunk):
        d = _numerics.displacement_elements(alpha[s:s + chunk], state.dim, j)
        u = np.einsum("m,imj->ij", phi.conj(), d)
        out[s:s + chunk] = np.einsum("ij,jk,ik->i", u, tj, u.conj()).real
    _check_state_tail(float(w @ out) / (2 * np.pi), 1.0, tail_tol, "P^T_phi / 2pi")
    return out.reshape(grid.shape)


def husimi(state: FockState, grid: PhaseGrid | None = None, tail_tol: float | None = 1e-6) -> np.ndarray:
    """Husimi distribution: the generalized distribution for T = |h_0><h_0|."""
    return generalized_distribution(GeneratingOperator.fock_projector(0, state.dim), state, grid, tail_tol)


def wigner_transform(state: FockState, grid: PhaseGrid | None = None, tail_tol: float | None = 1e-6) -> np.ndarray:
    """Sample <phi|W(q,p) Par W(q,p)* phi> on ``grid``.

    Uses W Par W* = D(2 alpha) Par. The value at the origin is the parity
    expectation; the integral over the plane is pi.
    """
    grid = PhaseGrid() if grid is None else grid
    q, p, w = grid.nodes()
    beta = math.sqrt(2.0) * (q + 1j * p)
    parity = (-1.0) ** np.arange(state.dim)
    # Tr[rho D Par] = Tr[(Par rho) D]
    rho = parity[:, None] * state.density()
    vals = _numerics.expect_displacement(beta, rho).real
    _check_state_tail(float(w @ vals), np.pi, tail_tol, "Wigner function")
    return vals.reshape(grid.shape)

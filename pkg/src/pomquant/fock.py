"""Truncated oscillator basis: states, canonical operators, spectral measures.

Conventions (hbar = 1): ``Q = (a + a^dag)/sqrt(2)``, ``P = i(a^dag - a)/sqrt(2)``
so that ``P`` acts as ``-i d/dx`` on Hermite functions, and the Fourier
operator is ``F h_n = (-i)^n h_n``, the unitary transform with kernel
``exp(-ipx)/sqrt(2 pi)``. With these choices ``P = F* Q F``.

Operators are plain ``(dim, dim)`` complex numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numerics import composite_gauss_legendre, hermite_functions
from .borel import BorelSet1D
from .exceptions import NotHermitianError

__all__ = [
    "TruncationConfig",
    "FockState",
    "SpectralDecomposition",
    "annihilation",
    "build_position",
    "build_momentum",
    "build_parity",
    "build_fourier",
    "spectral_decomposition",
    "spectral_measure",
    "position_measure",
    "momentum_measure",
    "position_wavefunction",
    "hermiticity_defect",
    "block",
]


@dataclass(frozen=True)
class TruncationConfig:
    """Size of the truncated basis and the tolerances that go with it.

    ``block`` is the number of low levels on which operator identities are
    asserted; the top levels are corrupted by the cut and are never compared.
    """

    dim: int = 64
    tail_tol: float = 1e-6
    eig_tol: float = 1e-10
    block: int | None = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")
        for name in ("tail_tol", "eig_tol"):
            val = getattr(self, name)
            if not 0 <= val < 1:
                raise ValueError(f"{name} must lie in [0, 1), got {val!r}")
        if self.block is None:
            object.__setattr__(self, "block", max(1, self.dim // 4))
        elif not 1 <= self.block <= self.dim // 2:
            raise ValueError(f"block must lie in [1, dim/2], got {self.block!r}")


@dataclass(frozen=True)
class FockState:
    """Pure state given by its amplitudes on h_0, h_1, ..."""

    coeffs: np.ndarray
    tol: float = field(default=1e-10, repr=False, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("coeffs must be a vector of length >= 2")
        if abs(np.linalg.norm(c) - 1.0) > self.tol:
            raise ValueError(f"state is not normalized: |phi| = {np.linalg.norm(c):.12g}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    @classmethod
    def basis(cls, n: int, dim: int) -> "FockState":
        c = np.zeros(dim, dtype=complex)
        c[n] = 1.0
        return cls(c)

    @classmethod
    def from_amplitudes(cls, amps, dim: int | None = None) -> "FockState":
        """Normalize ``amps`` and pad with zeros up to ``dim``."""
        amps = np.asarray(amps, dtype=complex)
        dim = amps.size if dim is None else dim
        c = np.zeros(dim, dtype=complex)
        c[: amps.size] = amps
        return cls(c / np.linalg.norm(c))

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, levels: int | None = None) -> "FockState":
        """Haar-random state supported on the lowest ``levels`` basis vectors."""
        levels = dim if levels is None else levels
        z = rng.standard_normal(levels) + 1j * rng.standard_normal(levels)
        return cls.from_amplitudes(z, dim)

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.vdot(self.coeffs, op @ self.coeffs))

    def density(self) -> np.ndarray:
        return np.outer(self.coeffs, self.coeffs.conj())


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def build_position(cfg: TruncationConfig) -> np.ndarray:
    a = annihilation(cfg.dim)
    return (a + a.T) / np.sqrt(2.0)


def build_momentum(cfg: TruncationConfig) -> np.ndarray:
    a = annihilation(cfg.dim)
    return 1j * (a.T - a) / np.sqrt(2.0)


def build_parity(cfg: TruncationConfig) -> np.ndarray:
    return np.diag((-1.0) ** np.arange(cfg.dim)).astype(complex)


def build_fourier(cfg: TruncationConfig) -> np.ndarray:
    """Fourier-Plancherel operator; unitary, not Hermitian."""
    return np.diag((-1j) ** np.arange(cfg.dim))


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def block(a: np.ndarray, k: int) -> np.ndarray:
    """Lower-left k x k block, i.e. the k lowest basis levels."""
    return a[:k, :k]


def spectral_decomposition(a: np.ndarray, tol: float = 1e-10) -> SpectralDecomposition:
    if hermiticity_defect(a) > tol:
        raise NotHermitianError(f"operator is not Hermitian (defect {hermiticity_defect(a):.3g})")
    lam, u = np.linalg.eigh(0.5 * (a + a.conj().T))
    return SpectralDecomposition(lam, u)


def spectral_measure(a: np.ndarray, borel: BorelSet1D, tol: float = 1e-10) -> np.ndarray:
    """Sum of the eigenprojections of the matrix ``a`` with eigenvalue in ``borel``.

    This is the spectral measure of the finite matrix. For the truncated
    ``Q`` its eigenvalues are Gauss-Hermite nodes, so the result is a quadrature
    of the true ``E^Q(B)`` and not its compression; use
    :func:`position_measure` for the latter.
    """
    sd = spectral_decomposition(a, tol)
    u = sd.eigenvectors[:, borel.contains(sd.eigenvalues)]
    return u @ u.conj().T


def _position_extent(dim: int) -> float:
    # beyond the classical turning point sqrt(2n+1) the h_n decay like exp(-x^2/2)
    return np.sqrt(2.0 * dim + 1.0) + 10.0


def position_measure(cfg: TruncationConfig, borel: BorelSet1D, density: float = 24.0) -> np.ndarray:
    """Compression of the spectral measure of Q to the basis span.

    Entries are ``int_B h_m(x) h_n(x) dx``, evaluated by composite
    Gauss-Legendre quadrature on each interval of ``borel``. Unlike
    :func:`spectral_measure` this is exact up to quadrature error, but it is
    not idempotent: the compression of a projection is not a projection.
    """
    ext = _position_extent(cfg.dim)
    out = np.zeros((cfg.dim, cfg.dim))
    for a, b in borel.clipped(-ext, ext):
        x, w = composite_gauss_legendre(a, b, density)
        h = hermite_functions(cfg.dim, x)
        out += (h * w) @ h.T
    return out.astype(complex)


def momentum_measure(cfg: TruncationConfig, borel: BorelSet1D, density: float = 24.0) -> np.ndarray:
    """Compression of the spectral measure of P, ``F* E^Q(B) F``."""
    f = build_fourier(cfg)
    return f.conj().T @ position_measure(cfg, borel, density) @ f


def position_wavefunction(state: FockState, grid) -> np.ndarray:
    """Position-space wavefunction sum_n c_n h_n(x) at the points ``grid``."""
    grid = np.asarray(grid, dtype=float)
    h = hermite_functions(state.dim, grid.ravel())
    return (state.coeffs @ h).reshape(grid.shape)

"""Low-level kernels shared by the phase-space and quantizer modules.

Everything here works on plain arrays. Displacement matrix elements are
evaluated in closed form (normalized associated Laguerre functions), so the
entries of a truncated operator are the exact compression of the
infinite-dimensional one and never depend on where the basis is cut.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gammaln

# Nodes processed per batch in the kernel contractions; bounds peak memory.
CHUNK = 32768


def hermite_functions(nmax: int, x) -> np.ndarray:
    """Return h_0..h_{nmax-1} sampled at ``x``, shape ``(nmax, len(x))``.

    Uses the normalized three-term recurrence, which stays finite far out in
    the tails where the plain Hermite polynomials overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def composite_gauss_legendre(a: float, b: float, density: float, order: int = 16):
    """Composite Gauss-Legendre nodes and weights on [a, b].

    ``density`` is the target number of nodes per unit length; panels carry
    ``order`` nodes each. Returns empty arrays for a degenerate interval.
    """
    if not b > a:
        return np.empty(0), np.empty(0)
    x, w = np.polynomial.legendre.leggauss(order)
    panels = max(1, int(np.ceil((b - a) * density / order)))
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def _laguerre_diagonal(x: np.ndarray, logx: np.ndarray, d: int, length: int) -> np.ndarray:
    """Normalized Laguerre functions ell_n^(d)(x) for n < length, shape (length, N).

    ell_n^(d)(x) = sqrt(n!/(n+d)!) x^(d/2) e^(-x/2) L_n^(d)(x), i.e. the modulus
    of <n+d|D(beta)|n> with x = |beta|^2.
    """
    seq = np.empty((length, x.size))
    if d == 0:
        seq[0] = np.exp(-0.5 * x)
    else:
        seq[0] = np.where(x > 0, np.exp(0.5 * d * logx - 0.5 * x - 0.5 * gammaln(d + 1.0)), 0.0)
    if length > 1:
        seq[1] = (1.0 + d - x) * seq[0] / np.sqrt(1.0 + d)
    for n in range(1, length - 1):
        seq[n + 1] = (
            (2 * n + 1 + d - x) * seq[n] - np.sqrt(n * (n + d)) * seq[n - 1]
        ) / np.sqrt((n + 1) * (n + 1 + d))
    return seq


def _polar(beta):
    beta = np.asarray(beta, dtype=complex).ravel()
    x = (beta * beta.conjugate()).real
    logx = np.log(np.where(x > 0, x, 1.0))
    return x, logx, np.angle(beta)


def displacement_elements(beta, rows: int, cols: int) -> np.ndarray:
    """Matrix elements <m|D(beta)|n> for m < rows, n < cols at every beta.

    Returns an array of shape ``(len(beta), rows, cols)``. Intended for thin
    slices (few columns) or few points; full square blocks at many points
    should go through :func:`integrate_displacement` instead.
    """
    x, logx, theta = _polar(beta)
    out = np.zeros((x.size, rows, cols), dtype=complex)
    for d in range(rows):
        length = min(rows - d, cols)
        if length <= 0:
            break
        seq = _laguerre_diagonal(x, logx, d, length)
        i = np.arange(length)
        out[:, i + d, i] = (seq * np.exp(1j * d * theta)).T
    for d in range(1, cols):
        length = min(cols - d, rows)
        if length <= 0:
            break
        seq = _laguerre_diagonal(x, logx, d, length)
        i = np.arange(length)
        out[:, i, i + d] = (seq * ((-1) ** d * np.exp(-1j * d * theta))).T
    return out


def integrate_displacement(beta, g, dim: int) -> np.ndarray:
    """Return sum_i g_i D(beta_i) restricted to the first ``dim`` levels.

    The sum is accumulated diagonal by diagonal in a fixed order, so the
    result is reproducible bit for bit.
    """
    beta = np.asarray(beta, dtype=complex).ravel()
    g = np.asarray(g, dtype=complex).ravel()
    out = np.zeros((dim, dim), dtype=complex)
    for start in range(0, beta.size, CHUNK):
        x, logx, theta = _polar(beta[start:start + CHUNK])
        gc = g[start:start + CHUNK]
        rot = np.exp(1j * theta)
        phase = np.ones_like(rot)
        for d in range(dim):
            length = dim - d
            seq = _laguerre_diagonal(x, logx, d, length)
            i = np.arange(length)
            out[i + d, i] += seq @ (gc * phase)
            if d:
                out[i, i + d] += seq @ (gc * (-1) ** d * phase.conjugate())
            phase = phase * rot
    return out


def expect_displacement(beta, rho: np.ndarray) -> np.ndarray:
    """Return Tr[rho D(beta_i)] for every point, with rho a dim x dim matrix."""
    beta = np.asarray(beta, dtype=complex).ravel()
    dim = rho.shape[0]
    out = np.zeros(beta.size, dtype=complex)
    for start in range(0, beta.size, CHUNK):
        x, logx, theta = _polar(beta[start:start + CHUNK])
        rot = np.exp(1j * theta)
        phase = np.ones_like(rot)
        acc = np.zeros(x.size, dtype=complex)
        for d in range(dim):
            length = dim - d
            i = np.arange(length)
            # Tr[rho D] = sum_mn rho[n, m] D[m, n]
            lower = rho[i, i + d]
            upper = rho[i + d, i]
            if not (lower.any() or (d and upper.any())):
                phase = phase * rot
                continue
            seq = _laguerre_diagonal(x, logx, d, length)
            acc += (lower @ seq) * phase
            if d:
                acc += (upper @ seq) * (-1) ** d * phase.conjugate()
            phase = phase * rot
        out[start:start + CHUNK] = acc
    return out


def support_size(matrix: np.ndarray, tol: float = 1e-15) -> int:
    """Number of leading basis levels outside which ``matrix`` vanishes (at least 1)."""
    mag = np.abs(matrix)
    rows = np.nonzero(mag.max(axis=1) > tol)[0]
    cols = np.nonzero(mag.max(axis=0) > tol)[0]
    if rows.size == 0 and cols.size == 0:
        return 1
    top = max(rows.max() if rows.size else 0, cols.max() if cols.size else 0)
    return int(top) + 1

"""Finitely supported POMs, their moment operators and the noise operator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .fock import FockState, hermiticity_defect, spectral_decomposition

__all__ = [
    "DiscretePOM",
    "VarianceDecomposition",
    "pom_moment",
    "noise_operator",
    "variance_decomposition",
    "is_noiseless",
    "probabilities",
    "two_valued_pom",
    "spectral_pom",
    "projection_defect",
    "bin_labels",
]


def projection_defect(a: np.ndarray) -> float:
    """Operator norm of A^2 - A."""
    return float(np.linalg.norm(a @ a - a, 2))


@dataclass(frozen=True)
class DiscretePOM:
    """Outcome labels with one effect each; the effects sum to the identity.

    Validity is checked on construction: every effect must have spectrum in
    [-tol, 1 + tol] and the effects must add up to I within ``tol``.
    """

    labels: np.ndarray
    effects: np.ndarray
    tol: float = 1e-8
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=float)
        effects = np.array(self.effects, dtype=complex)
        if labels.ndim != 1 or effects.ndim != 3 or effects.shape[0] != labels.size:
            raise ValueError("need one (dim, dim) effect per label")
        if labels.size < 1:
            raise ValueError("a POM needs at least one outcome")
        if np.unique(labels).size != labels.size:
            raise ValueError("outcome labels must be distinct")
        dim = effects.shape[1]
        for lab, e in zip(labels, effects):
            if hermiticity_defect(e) > self.tol:
                raise ValueError(f"effect for label {lab:g} is not Hermitian")
            lam = np.linalg.eigvalsh(0.5 * (e + e.conj().T))
            if lam[0] < -self.tol or lam[-1] > 1 + self.tol:
                raise ValueError(
                    f"effect for label {lab:g} has spectrum [{lam[0]:.3g}, {lam[-1]:.3g}] outside [0, 1]"
                )
        total = np.abs(effects.sum(axis=0) - np.eye(dim)).max()
        if total > self.tol:
            raise ValueError(f"effects do not sum to the identity (deviation {total:.3g})")
        labels.setflags(write=False)
        effects.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "effects", effects)

    @classmethod
    def from_outcomes(cls, outcomes, tol: float = 1e-8, metadata=None) -> "DiscretePOM":
        labels, effects = zip(*outcomes)
        return cls(np.array(labels), np.array(effects), tol, dict(metadata or {}))

    @property
    def outcomes(self):
        return list(zip(self.labels.tolist(), self.effects))

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    def __len__(self):
        return self.labels.size


def pom_moment(pom: DiscretePOM, k: int) -> np.ndarray:
    """Moment operator E[k] = sum_i label_i^k E_i; E[0] is the identity."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k == 0:
        return np.eye(pom.dim, dtype=complex)
    return np.tensordot(pom.labels ** k, pom.effects, axes=1)


def noise_operator(pom: DiscretePOM) -> np.ndarray:
    """N(E) = E[2] - E[1]^2."""
    first = pom_moment(pom, 1)
    return pom_moment(pom, 2) - first @ first


class VarianceDecomposition(NamedTuple):
    total: float
    sharp: float
    noise: float


def probabilities(pom: DiscretePOM, state: FockState) -> np.ndarray:
    """Outcome distribution <phi|E_i phi>."""
    phi = state.coeffs
    return np.einsum("m,imn,n->i", phi.conj(), pom.effects, phi).real


def variance_decomposition(pom: DiscretePOM, state: FockState) -> VarianceDecomposition:
    """Split the outcome variance into the spread of E[1] plus the noise term."""
    if state.dim != pom.dim:
        raise ValueError("state and POM dimensions differ")
    prob = probabilities(pom, state)
    mean = prob @ pom.labels
    total = float(prob @ (pom.labels - mean) ** 2)
    first = pom_moment(pom, 1)
    phi = state.coeffs
    e1 = np.vdot(phi, first @ phi).real
    e1sq = np.vdot(first @ phi, first @ phi).real
    noise = np.vdot(phi, noise_operator(pom) @ phi).real
    return VarianceDecomposition(total, float(e1sq - e1 * e1), float(noise))


def is_noiseless(pom: DiscretePOM, tol: float = 1e-8) -> bool:
    return float(np.linalg.norm(noise_operator(pom), 2)) <= tol


def bin_labels(edges) -> np.ndarray:
    """Labels for the bins cut by ``edges``: interior midpoints, outer bins edge -/+ 1.

    Outer bins extend to infinity; labeling them one unit beyond the nearest
    edge keeps every label finite so moments exist.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 1:
        raise ValueError("need at least one bin edge (two bins)")
    if not np.all(np.isfinite(edges)) or np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be finite and strictly increasing")
    mids = 0.5 * (edges[1:] + edges[:-1])
    return np.concatenate([[edges[0] - 1.0], mids, [edges[-1] + 1.0]])


def two_valued_pom(a: np.ndarray, tol: float = 1e-8) -> DiscretePOM:
    """The POM on {0, 1} with E({0}) = I - A and E({1}) = A."""
    eye = np.eye(a.shape[0], dtype=complex)
    return DiscretePOM(np.array([0.0, 1.0]), np.array([eye - a, a]), tol)


def spectral_pom(a: np.ndarray, edges, tol: float = 1e-8) -> DiscretePOM:
    """Bin the eigenvalues of the Hermitian matrix ``a`` into a sharp POM.

    Bins are (-inf, e_0), [e_0, e_1), ..., [e_last, inf), labeled like
    :func:`bin_labels`.
    """
    edges = np.asarray(edges, dtype=float)
    sd = spectral_decomposition(a, tol)
    idx = np.searchsorted(edges, sd.eigenvalues, side="right")
    effects = []
    for b in range(edges.size + 1):
        u = sd.eigenvectors[:, idx == b]
        effects.append(u @ u.conj().T)
    return DiscretePOM(bin_labels(edges), np.array(effects), tol, {"kind": "spectral", "edges": edges.tolist()})

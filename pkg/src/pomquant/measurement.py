"""Monte-Carlo sampling of POM outcome statistics.

Sampling uses numpy's counter-based Philox bit generator, so a seed fixes the
draws on every platform. Sharded runs derive one child seed per shard with
:class:`numpy.random.SeedSequence` and add the shard counts in shard order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError
from .fock import FockState
from .functions import ArrivalTime, Indicator, PhaseSpaceFunction
from .phase_space import PhasePoint
from .pom import DiscretePOM, pom_moment, probabilities
from .quantizer import moment_sequence, quantize_question

__all__ = [
    "SampleReport",
    "MomentTransferReport",
    "make_rng",
    "sample_outcomes",
    "classical_moment",
    "moment_transfer_check",
]


def _in_std_errors(diff: np.ndarray, stderr: np.ndarray) -> np.ndarray:
    # a zero standard error only arises from a degenerate sample
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(stderr > 0, diff / stderr, np.where(diff > 1e-12, np.inf, 0.0))


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class SampleReport:
    """Outcome counts of ``n`` draws and the first ``k_max`` label moments.

    ``std_errors[k-1]`` is the standard error of the empirical k-th moment,
    estimated from the same sample.
    """

    counts: dict
    empirical_moments: np.ndarray
    predicted_moments: np.ndarray
    std_errors: np.ndarray
    seed: int
    n: int

    def deviations(self) -> np.ndarray:
        """|empirical - predicted| in units of the standard error."""
        return _in_std_errors(np.abs(self.empirical_moments - self.predicted_moments), self.std_errors)

    def to_dict(self) -> dict:
        return {
            "counts": [{"label": lab, "count": c} for lab, c in self.counts.items()],
            "empirical_moments": self.empirical_moments.tolist(),
            "predicted_moments": self.predicted_moments.tolist(),
            "std_errors": self.std_errors.tolist(),
            "seed": self.seed,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleReport":
        return cls(
            {float(c["label"]): int(c["count"]) for c in d["counts"]},
            np.asarray(d["empirical_moments"], dtype=float),
            np.asarray(d["predicted_moments"], dtype=float),
            np.asarray(d["std_errors"], dtype=float),
            int(d["seed"]),
            int(d["n"]),
        )


def _outcome_distribution(pom: DiscretePOM, state: FockState) -> np.ndarray:
    if state.dim != pom.dim:
        raise ValueError(f"state has dimension {state.dim}, POM has {pom.dim}")
    prob = probabilities(pom, state)
    if prob.min() < -pom.tol or abs(prob.sum() - 1.0) > max(pom.tol, 1e-10):
        raise ValueError("POM and state do not give a probability distribution")
    prob = np.clip(prob, 0.0, None)
    return prob / prob.sum()


def sample_outcomes(
    pom: DiscretePOM, state: FockState, n: int, seed: int, k_max: int = 3, shards: int = 1
) -> SampleReport:
    """Draw ``n`` i.i.d. outcomes of ``pom`` in ``state``.

    Parameters
    ----------
    pom, state
        Observable and vector state of equal dimension.
    n
        Number of draws, at least 1.
    seed
        Nonnegative integer seed; equal seeds and inputs give identical counts.
    k_max
        Highest label moment reported.
    shards
        Split the draws over this many independent streams. The result depends
        on ``shards`` but is deterministic for each value.
    """
    if n < 1:
        raise ValueError("need at least one draw")
    if shards < 1:
        raise ValueError("need at least one shard")
    prob = _outcome_distribution(pom, state)
    counts = np.zeros(len(pom), dtype=np.int64)
    if shards == 1:
        streams = [(make_rng(seed), n)]
    else:
        children = np.random.SeedSequence(seed).spawn(shards)
        sizes = [n // shards + (1 if i < n % shards else 0) for i in range(shards)]
        streams = [(make_rng(c), m) for c, m in zip(children, sizes)]
    for rng, m in streams:
        if m:
            counts += np.bincount(rng.choice(len(pom), size=m, p=prob), minlength=len(pom))

    labels = pom.labels
    ks = np.arange(1, k_max + 1)
    powers = labels[None, :] ** ks[:, None]
    emp = powers @ counts / n
    second = powers ** 2 @ counts / n
    var = np.clip(second - emp ** 2, 0.0, None) * (n / (n - 1) if n > 1 else 0.0)
    stderr = np.sqrt(var / n)
    phi = state.coeffs
    pred = np.array([np.vdot(phi, pom_moment(pom, int(k)) @ phi).real for k in ks])
    return SampleReport(
        {float(lab): int(c) for lab, c in zip(labels, counts)}, emp, pred, stderr, int(seed), int(n)
    )


def classical_moment(f: PhaseSpaceFunction, pt: PhasePoint, k: int) -> float:
    """k-th moment of the point measure at ``pt`` pushed forward by f, i.e. f(pt)^k."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if isinstance(f, ArrivalTime) and pt.p == 0:
        raise ConfigError("the arrival time is undefined at p = 0")
    value = float(np.asarray(f(pt.q, pt.p)))
    if not math.isfinite(value):
        raise ConfigError(f"{type(f).__name__} is undefined at ({pt.q}, {pt.p})")
    return value ** k


@dataclass(frozen=True)
class MomentTransferReport:
    """Sampled two-valued POM of a quantized question against the moments of Gamma(f^k)."""

    sample: SampleReport
    transfer_moments: np.ndarray
    deviations: np.ndarray
    effect: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(self.deviations.max())

    def passed(self, sigmas: float = 5.0) -> bool:
        return self.max_deviation <= sigmas

    def to_dict(self) -> dict:
        return {
            "sample": self.sample.to_dict(),
            "transfer_moments": self.transfer_moments.tolist(),
            "deviations_in_std_errors": self.deviations.tolist(),
            "max_deviation": self.max_deviation,
        }


def moment_transfer_check(
    quantizer, f: Indicator, state: FockState, k_max: int, n: int, seed: int, tol: float = 1e-8
) -> MomentTransferReport:
    """Sample the POM of the question Gamma(f) and compare with <phi|Gamma(f^k) phi>.

    Raises :class:`SpectrumOutsideUnitInterval` when Gamma(f) is not an
    effect, since the question then has no POM.
    """
    if not isinstance(f, Indicator):
        raise ConfigError("moment transfer is checked for indicator functions only")
    powers = moment_sequence(quantizer, f, k_max)
    pom = quantize_question(powers[0], tol)
    rep = sample_outcomes(pom, state, n, seed, k_max)
    phi = state.coeffs
    transfer = np.array([np.vdot(phi, a @ phi).real for a in powers])
    dev = _in_std_errors(np.abs(rep.empirical_moments - transfer), rep.std_errors)
    return MomentTransferReport(rep, transfer, dev, powers[0])

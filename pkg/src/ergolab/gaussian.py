"""Stationary Gaussian sequences driven by a finite orthogonal operator.

The sequence is X_i = <U^i f, xi> with xi a standard normal vector, so every
finite block of X values is an exact linear image of a Gaussian: sampling is
exact by construction and the covariance E[X_0 X_n] equals <U^n f, f> to
machine precision.  Hermite polynomials in the X's then have closed-form
cross moments, which the Monte-Carlo estimators here are tested against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import hermite_e

from .mc import EstimateWithError, batch_estimate
from .operators import (
    CesaroDefect,
    FiniteRankPerturbation,
    conjugate_defect,
    operator_correlation,
    require_orthogonal,
)

__all__ = [
    "GaussianModel",
    "hermite_value",
    "HermiteCorrelation",
    "gaussian_hermite_correlation",
    "orthant_probability",
    "TripleMixingEntry",
    "triple_correlation_weakmix_check",
    "GaussianWhResult",
    "gaussian_wh_experiment",
]

MIN_SAMPLES = 10**4


@dataclass(frozen=True)
class GaussianModel:
    """Orthogonal operator plus a unit cyclic vector."""

    operator: np.ndarray
    vector: np.ndarray

    def __post_init__(self):
        require_orthogonal(self.operator)
        vec = np.asarray(self.vector, dtype=float)
        if vec.ndim != 1 or vec.shape[0] != self.operator.shape[0]:
            raise ValueError("vector does not match the operator dimension")
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise ValueError("cyclic vector must have unit norm")

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    def rho(self, n: int) -> float:
        """Covariance E[X_0 X_n] = <U^n f, f>, exact up to roundoff."""
        return operator_correlation(self.operator, self.vector, n)

    def orbit_rows(self, shifts: Sequence[int]) -> np.ndarray:
        """Rows U^s f for the requested shifts (repeats allowed)."""
        wanted = [int(s) for s in shifts]
        cache = {}
        rows = []
        for s in wanted:
            if s not in cache:
                g = self.vector
                step = self.operator if s >= 0 else self.operator.T
                for _ in range(abs(s)):
                    g = step @ g
                cache[s] = g
            rows.append(cache[s])
        return np.stack(rows)

    def block_sampler(self, shifts: Sequence[int]):
        """Batch sampler returning an (n_shifts, size) array of X values."""
        rows = self.orbit_rows(shifts)

        def sample(rng: np.random.Generator, size: int) -> np.ndarray:
            latent = rng.standard_normal((self.dim, size))
            return rows @ latent

        return sample


def hermite_value(k: int, x: np.ndarray) -> np.ndarray:
    """Probabilists' Hermite polynomial He_k evaluated elementwise."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    return hermite_e.hermeval(x, coeffs)


def _batch_layout(samples: int, n_batches: int) -> int:
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    batch_size = samples // n_batches
    if batch_size < 1:
        raise ValueError("more batches than samples")
    return batch_size


@dataclass(frozen=True)
class HermiteCorrelation:
    degree: int
    shift: int
    estimate: EstimateWithError
    prediction: float
    rho: float

    @property
    def within_five_se(self) -> bool:
        return self.estimate.within(self.prediction)


def gaussian_hermite_correlation(
    model: GaussianModel,
    k: int,
    n: int,
    samples: int,
    *,
    seed: int = 0,
    n_batches: int = 40,
    jobs: int = 1,
) -> HermiteCorrelation:
    """Monte-Carlo E[He_k(X_0) He_k(X_n)] against the k! rho^n closed form."""
    if k not in (1, 2, 3):
        raise ValueError("degree must be 1, 2 or 3")
    batch_size = _batch_layout(samples, n_batches)
    block = model.block_sampler([0, n])

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        x = block(rng, size)
        return hermite_value(k, x[0]) * hermite_value(k, x[1])

    estimate = batch_estimate(
        sampler, batch_size=batch_size, n_batches=n_batches, seed=seed, jobs=jobs
    )
    rho = model.rho(n)
    return HermiteCorrelation(
        degree=k,
        shift=int(n),
        estimate=estimate,
        prediction=math.factorial(k) * rho**k,
        rho=rho,
    )


def orthant_probability(r12: float, r13: float, r23: float) -> float:
    """P(X<=0, Y<=0, Z<=0) for standard trivariate normals, closed form."""
    clipped = []
    for r in (r12, r13, r23):
        if abs(r) > 1.0 + 1e-9:
            raise ValueError("correlations must lie in [-1, 1]")
        clipped.append(min(1.0, max(-1.0, r)))
    return 0.125 + sum(math.asin(r) for r in clipped) / (4 * math.pi)


@dataclass(frozen=True)
class TripleMixingEntry:
    m: int
    n: int
    rho_m: float
    rho_n: float
    rho_gap: float
    condition_met: bool
    failed_pairs: tuple
    estimate: EstimateWithError
    product: float
    exact: float

    @property
    def deviation(self) -> float:
        return self.estimate.value - self.product

    @property
    def within_five_se(self) -> bool:
        return abs(self.deviation) <= 5.0 * self.estimate.stderr


def triple_correlation_weakmix_check(
    model: GaussianModel,
    ms: Sequence[int],
    ns: Sequence[int],
    *,
    threshold: float = 0.02,
    samples: int = 10**5,
    seed: int = 0,
    n_batches: int = 40,
    jobs: int = 1,
    full_b: bool = False,
    full_c: bool = False,
) -> list[TripleMixingEntry]:
    """Triple-correlation deviations for events {X <= 0} at shifted times.

    For each pair (m, n) the three pairwise covariances are computed exactly
    from the operator; entries where any exceeds the threshold are flagged
    rather than dropped, since large pairwise correlation voids the premise
    that the triple correlation should factor.  The closed-form orthant
    probability is attached as the oracle for the estimate itself.  Setting
    full_b or full_c replaces that event by the whole space.
    """
    if len(ms) != len(ns):
        raise ValueError("shift sequences must have equal length")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    batch_size = _batch_layout(samples, n_batches)
    entries = []
    for idx, (m, n) in enumerate(zip(ms, ns)):
        rho_m, rho_n, rho_gap = model.rho(m), model.rho(n), model.rho(n - m)
        failed = tuple(
            label
            for label, r in (("m", rho_m), ("n", rho_n), ("n-m", rho_gap))
            if abs(r) > threshold
        )
        block = model.block_sampler([0, m, n])

        def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
            x = block(rng, size)
            inside = x[0] <= 0.0
            if not full_b:
                inside &= x[1] <= 0.0
            if not full_c:
                inside &= x[2] <= 0.0
            return inside.astype(float)

        estimate = batch_estimate(
            sampler,
            batch_size=batch_size,
            n_batches=n_batches,
            seed=seed + idx,
            jobs=jobs,
        )
        marginals = [0.5, 1.0 if full_b else 0.5, 1.0 if full_c else 0.5]
        if full_b and full_c:
            exact = 0.5
        elif full_b:
            exact = 0.25 + math.asin(rho_n) / (2 * math.pi)
        elif full_c:
            exact = 0.25 + math.asin(rho_m) / (2 * math.pi)
        else:
            exact = orthant_probability(rho_m, rho_n, rho_gap)
        entries.append(
            TripleMixingEntry(
                m=int(m),
                n=int(n),
                rho_m=rho_m,
                rho_n=rho_n,
                rho_gap=rho_gap,
                condition_met=not failed,
                failed_pairs=failed,
                estimate=estimate,
                product=float(np.prod(marginals)),
                exact=exact,
            )
        )
    return entries


@dataclass(frozen=True)
class GaussianWhResult:
    """Cesaro-averaged degree-k moment gap between conjugated and plain orbits.

    The conjugated observable is Y_i = <U^i f, S xi>; the statistic averages
    E[He_k(Y_i) He_k(X_i)] - E[He_k(X_i)^2] over i = 1..N.  Its exact value is
    the average of k!((c_i)^k - 1) with c_i = <U^i f, S U^i f>, and for k = 1
    Cauchy-Schwarz bounds the distance by the conjugation defect itself.
    """

    degree: int
    n_terms: int
    estimate: EstimateWithError
    exact: float
    majorant: float
    operator_defect: CesaroDefect

    @property
    def distance(self) -> float:
        return abs(self.estimate.value)

    @property
    def tracks_exact(self) -> bool:
        return abs(self.estimate.value - self.exact) <= 5.0 * self.estimate.stderr

    @property
    def below_majorant(self) -> bool:
        return self.distance <= self.majorant + 5.0 * self.estimate.stderr


def gaussian_wh_experiment(
    model: GaussianModel,
    pert: FiniteRankPerturbation,
    k: int,
    n_terms: int,
    samples: int,
    *,
    seed: int = 0,
    n_batches: int = 40,
    jobs: int = 1,
) -> GaussianWhResult:
    if k not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if pert.dim != model.dim:
        raise ValueError("perturbation dimension does not match the model")
    batch_size = _batch_layout(samples, n_batches)
    rows = model.orbit_rows(range(1, n_terms + 1))
    conj_rows = rows @ pert.matrix()

    c_series = np.einsum("ij,ij->i", rows, conj_rows)
    exact = float(np.mean(math.factorial(k) * (c_series**k - 1.0)))

    defect = conjugate_defect(model.operator, pert, model.vector, n_terms)
    if k == 1:
        majorant = defect.defect
    else:
        majorant = math.factorial(k) * k * defect.majorant1

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        latent = rng.standard_normal((model.dim, size))
        x = rows @ latent
        y = conj_rows @ latent
        hx = hermite_value(k, x)
        return np.mean(hermite_value(k, y) * hx - hx**2, axis=0)

    estimate = batch_estimate(
        sampler, batch_size=batch_size, n_batches=n_batches, seed=seed, jobs=jobs
    )
    return GaussianWhResult(
        degree=k,
        n_terms=int(n_terms),
        estimate=estimate,
        exact=exact,
        majorant=majorant,
        operator_defect=defect,
    )

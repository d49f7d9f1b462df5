"""Monte Carlo moment checks (z-scores) and chi-square goodness of fit."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import stats as sps

from .complex_core import vertices_of
from .enumeration import ExactDistribution
from .generators import ComplexBatch, GeneralParams, KahleParams, complex_code
from .measures import expected_a, expected_b, expected_f, expected_phi

__all__ = ["z_score", "MomentRow", "kahle_moments", "general_moments", "chi_square_check"]


def z_score(samples: np.ndarray, expected: float) -> float:
    """``(mean - expected) / standard error`` of a sample of counts.

    A constant sample has no usable spread, so its standard error falls back
    to the Poisson value ``sqrt(expected / N)``; with ``expected == 0`` too the
    score is 0 on agreement and infinite otherwise.
    """
    samples = np.asarray(samples, dtype=float)
    diff = samples.mean() - expected
    se = samples.std(ddof=1) / math.sqrt(len(samples)) if len(samples) > 1 else 0.0
    if se == 0.0 and expected > 0:
        se = math.sqrt(expected / len(samples))
    if se == 0.0:
        return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(expected)) else math.copysign(math.inf, diff)
    return float(diff / se)


@dataclass(frozen=True)
class MomentRow:
    key: str
    mean_mc: float
    expected: float
    mean_mc_2: float
    expected_2: float
    z: float
    z_2: float

    @property
    def z_max(self) -> float:
        return max(abs(self.z), abs(self.z_2))


def kahle_moments(params: KahleParams, batch: ComplexBatch) -> list[MomentRow]:
    """Per-dimension MC means of ``f_d`` and ``phi_d`` against the closed forms."""
    f = batch.f_counts()
    phi = batch.phi_counts
    rows = []
    for d in range(1, params.n):
        ef, ep = expected_f(params, d), expected_phi(params, d)
        rows.append(
            MomentRow(str(d), f[:, d].mean(), ef, phi[:, d].mean(), ep, z_score(f[:, d], ef), z_score(phi[:, d], ep))
        )
    return rows


def general_moments(params: GeneralParams, batch: ComplexBatch, simplices: Iterable | None = None) -> list[MomentRow]:
    """Per-simplex MC frequencies of presence ``a`` and full boundary ``b``."""
    if simplices is None:
        simplices = [s for k in range(1, params.n + 1) for s in combinations(range(params.n), k)]
    rows = []
    for s in simplices:
        a = batch.indicator(s)
        b = batch.boundary_indicator(s)
        ea, eb = expected_a(s, params), expected_b(s, params)
        key = "-".join(map(str, s if isinstance(s, tuple) else vertices_of(s)))
        rows.append(MomentRow(key, a.mean(), ea, b.mean(), eb, z_score(a, ea), z_score(b, eb)))
    return rows


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    outside_support: int

    def passed(self, alpha: float = 0.001) -> bool:
        return self.outside_support == 0 and self.p_value > alpha


def chi_square_check(dist: ExactDistribution, codes: np.ndarray) -> ChiSquareResult:
    """Pearson test of sampled complex codes against an exact distribution.

    ``codes`` come from :meth:`ComplexBatch.codes`.  Samples landing on
    members of zero probability, or outside the space, are counted separately
    and fail the test.
    """
    lookup = {complex_code(C): j for j, C in enumerate(dist.space.members)}
    uniq, cnt = np.unique(codes, return_counts=True)
    observed = np.zeros(len(dist.space))
    outside = 0
    for u, c in zip(uniq.tolist(), cnt.tolist()):
        j = lookup.get(int(u))
        if j is None or dist.probs[j] == 0.0:
            outside += c
        else:
            observed[j] = c
    live = dist.probs > 0
    expected = dist.probs[live] * observed[live].sum()
    if live.sum() < 2:
        return ChiSquareResult(0.0, 0, 1.0, outside)
    stat, p = sps.chisquare(observed[live], expected)
    return ChiSquareResult(float(stat), int(live.sum() - 1), float(p), outside)

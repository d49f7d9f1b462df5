"""Exhaustive enumeration of small complex spaces and exact distributions on them."""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import null_space
from scipy.special import logsumexp, rel_entr

from .complex_core import SimplicialComplex, _candidates, lex_key, mask_of
from .generators import GeneralParams, KahleParams, flag_complex
from .measures import NotInSampleSpace, log_prob_general, log_prob_kahle
from .observables import Observable, observable_matrix

__all__ = [
    "KINDS",
    "ComplexSpace",
    "ExactDistribution",
    "enumerate_space",
    "exact_distribution",
    "log_partition_function",
    "partition_function",
    "entropy",
    "kl_divergence",
    "feasible_perturbations",
]

KINDS = ("C_n", "C_le_n", "Y_d", "flag", "graphs")
_MAX_N = {"C_n": 5, "C_le_n": 5, "Y_d": 5, "flag": 7, "graphs": 7}


def _sort_key(C: SimplicialComplex):
    return tuple(C.simplices())


@dataclass(frozen=True)
class ComplexSpace:
    kind: str
    n: int
    members: tuple[SimplicialComplex, ...]
    d: int | None = None
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._index.update({C: i for i, C in enumerate(self.members)})
        if len(self._index) != len(self.members):
            raise ValueError("duplicate members in complex space")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def index(self, C: SimplicialComplex) -> int:
        return self._index[C]

    def __contains__(self, C: object) -> bool:
        return C in self._index

    def matrix(self, observables: Sequence[Observable | Callable]) -> np.ndarray:
        return observable_matrix(observables, self.members)


def _extend(n: int, faces: frozenset[int], prev: Sequence[int], out: list[frozenset[int]]) -> None:
    cands = sorted(_candidates(n, faces, prev), key=lex_key) if prev else []
    if not cands:
        out.append(faces)
        return
    for pick in range(1 << len(cands)):
        chosen = [c for j, c in enumerate(cands) if pick >> j & 1]
        if chosen:
            _extend(n, faces | frozenset(chosen), chosen, out)
        else:
            out.append(faces)


def enumerate_space(kind: str, n: int, d: int | None = None) -> ComplexSpace:
    """List every complex of the requested family on ``n`` labeled vertices.

    ``C_n``: all vertices present.  ``C_le_n``: any vertex subset, the empty
    complex included.  ``graphs``: complexes of dimension <= 1 with all
    vertices.  ``flag``: clique complexes of those graphs.  ``Y_d``: complete
    d-skeleton plus any set of (d+1)-simplices.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown space kind {kind!r}; choose from {KINDS}")
    if n < 1 or n > _MAX_N[kind]:
        raise ValueError(f"{kind} enumeration supports 1 <= n <= {_MAX_N[kind]}, got {n}")
    vertices = [1 << i for i in range(n)]
    found: list[frozenset[int]] = []
    if kind == "C_n":
        _extend(n, frozenset(vertices), vertices, found)
    elif kind == "C_le_n":
        for size in range(n + 1):
            for vs in combinations(vertices, size):
                _extend(n, frozenset(vs), list(vs), found)
    elif kind in ("graphs", "flag"):
        edges = [mask_of(e) for e in combinations(range(n), 2)]
        for pick in range(1 << len(edges)):
            found.append(frozenset(vertices + [e for j, e in enumerate(edges) if pick >> j & 1]))
        if kind == "flag":
            found = [flag_complex(SimplicialComplex(n, g)).faces for g in found]
    else:
        if d is None or not 1 <= d <= n - 2:
            raise ValueError(f"Y_d needs 1 <= d <= n-2, got d={d}")
        base = frozenset(mask_of(s) for k in range(1, d + 2) for s in combinations(range(n), k))
        tops = [mask_of(s) for s in combinations(range(n), d + 2)]
        for pick in range(1 << len(tops)):
            found.append(base | frozenset(t for j, t in enumerate(tops) if pick >> j & 1))
    members = sorted((SimplicialComplex(n, f) for f in found), key=_sort_key)
    return ComplexSpace(kind, n, tuple(members), d if kind == "Y_d" else None)


@dataclass(frozen=True)
class ExactDistribution:
    space: ComplexSpace
    probs: np.ndarray

    def prob(self, C: SimplicialComplex) -> float:
        return float(self.probs[self.space.index(C)])

    def entropy(self) -> float:
        return entropy(self)

    def expect(self, observables: Sequence[Observable | Callable] | np.ndarray) -> np.ndarray:
        X = observables if isinstance(observables, np.ndarray) else self.space.matrix(observables)
        return self.probs @ X


def _model_log_prob(model) -> Callable[[SimplicialComplex], float]:
    if isinstance(model, KahleParams):
        return lambda C: log_prob_kahle(C, model)
    if isinstance(model, GeneralParams):
        return lambda C: log_prob_general(C, model)
    return model


def exact_distribution(model, space: ComplexSpace, tol: float = 1e-10) -> ExactDistribution:
    """Evaluate a model's probability on every member of ``space``.

    ``model`` is a ``KahleParams``, ``GeneralParams`` or a callable returning a
    log-probability.  Members the model cannot produce get probability 0.
    Raises ``ValueError`` if the mass found differs from 1 by more than ``tol``,
    which means the space does not cover the model's support.
    """
    log_prob = _model_log_prob(model)
    lp = np.empty(len(space))
    for j, C in enumerate(space.members):
        try:
            lp[j] = log_prob(C)
        except NotInSampleSpace:
            lp[j] = -np.inf
    probs = np.exp(lp)
    total = probs.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"model mass on {space.kind}(n={space.n}) is {total!r}, not 1")
    return ExactDistribution(space, probs / total)


def log_partition_function(theta: Sequence[float], observables, space: ComplexSpace) -> float:
    """``log sum_C exp(-theta . x(C))``; ``observables`` may be a precomputed matrix."""
    X = observables if isinstance(observables, np.ndarray) else space.matrix(observables)
    val = float(logsumexp(-X @ np.asarray(theta, dtype=float)))
    if not math.isfinite(val):
        raise OverflowError(f"log partition function is {val} at theta={list(theta)}")
    return val


def partition_function(theta: Sequence[float], observables, space: ComplexSpace) -> float:
    val = math.exp(log_partition_function(theta, observables, space))
    if math.isinf(val):
        raise OverflowError("partition function overflows; use log_partition_function")
    return val


def _probs(d) -> np.ndarray:
    return d.probs if isinstance(d, ExactDistribution) else np.asarray(d, dtype=float)


def entropy(dist) -> float:
    """Shannon entropy in nats with ``0 log 0 = 0``."""
    p = _probs(dist)
    nz = p > 0
    return float(-(p[nz] * np.log(p[nz])).sum())


def kl_divergence(p, q) -> float:
    """``sum p log(p / q)``; ``inf`` when ``p`` charges a point ``q`` does not."""
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise ValueError("distributions are not aligned")
    return float(rel_entr(p, q).sum())


def feasible_perturbations(
    p_star: ExactDistribution,
    observables,
    count: int,
    magnitude: float = 0.5,
    seed: int = 0,
) -> list[ExactDistribution]:
    """Random distributions with the same observable means as ``p_star``.

    Each one moves ``p_star`` along a random direction of the null space of
    the constraint matrix (observables plus normalisation), restricted to the
    support of ``p_star``, by ``magnitude`` times the distance to the
    nonnegativity boundary along that direction.
    """
    if not 0.0 < magnitude <= 1.0:
        raise ValueError("magnitude must lie in (0, 1]")
    X = observables if isinstance(observables, np.ndarray) else p_star.space.matrix(observables)
    support = np.flatnonzero(p_star.probs > 0)
    A = np.vstack([X[support].T, np.ones(len(support))])
    N = null_space(A)
    if N.shape[1] == 0:
        warnings.warn("constraints pin the distribution down; no perturbations exist", stacklevel=2)
        return []
    rng = np.random.default_rng(seed)
    base = p_star.probs[support]
    out = []
    while len(out) < count:
        v = N @ rng.standard_normal(N.shape[1])
        neg = v < 0
        if not neg.any():
            continue
        t = magnitude * np.min(base[neg] / -v[neg])
        q = p_star.probs.copy()
        q[support] = np.clip(base + t * v, 0.0, None)
        out.append(ExactDistribution(p_star.space, q / q.sum()))
    return out

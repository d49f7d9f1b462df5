"""Named observables on complexes: ``f_d``, ``phi_d``, ``a:<simplex>``, ``b:<simplex>``."""

from __future__ import annotations

import re
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complex_core import SimplicialComplex, a_value, b_value, counts, make_simplex

__all__ = ["Observable", "parse_observable", "f_obs", "phi_obs", "a_obs", "b_obs", "observable_matrix", "simplex_observables"]


@dataclass(frozen=True)
class Observable:
    name: str
    fn: Callable[[SimplicialComplex], float]

    def __call__(self, C: SimplicialComplex) -> float:
        return self.fn(C)


def f_obs(d: int) -> Observable:
    return Observable(f"f_{d}", lambda C: counts(C).f[d] if d < C.n else 0)


def phi_obs(d: int) -> Observable:
    return Observable(f"phi_{d}", lambda C: counts(C).phi[d] if d < C.n else 0)


def a_obs(s: Iterable[int]) -> Observable:
    s = make_simplex(s)
    return Observable("a:" + ",".join(map(str, s)), lambda C: a_value(C, s))


def b_obs(s: Iterable[int]) -> Observable:
    s = make_simplex(s)
    return Observable("b:" + ",".join(map(str, s)), lambda C: b_value(C, s))


_PATTERN = re.compile(r"^(f|phi)_(\d+)$|^(a|b):(\d+(?:,\d+)*)$")


def parse_observable(name: str) -> Observable:
    """Resolve a built-in observable name such as ``f_1``, ``phi_2`` or ``a:0,1``."""
    m = _PATTERN.match(name.strip())
    if not m:
        raise ValueError(f"unknown observable {name!r}; expected f_d, phi_d, a:<simplex> or b:<simplex>")
    if m.group(1):
        d = int(m.group(2))
        return f_obs(d) if m.group(1) == "f" else phi_obs(d)
    s = [int(v) for v in m.group(4).split(",")]
    return a_obs(s) if m.group(3) == "a" else b_obs(s)


def simplex_observables(n: int) -> list[Observable]:
    """Presence of every simplex on ``n`` vertices followed by boundary presence of every simplex of size >= 2."""
    simplices = [s for size in range(1, n + 1) for s in combinations(range(n), size)]
    return [a_obs(s) for s in simplices] + [b_obs(s) for s in simplices if len(s) >= 2]


def observable_matrix(observables: Sequence[Observable | Callable], members: Sequence[SimplicialComplex]) -> np.ndarray:
    """``X[j, i] = observables[i](members[j])``."""
    X = np.empty((len(members), len(observables)))
    for j, C in enumerate(members):
        for i, obs in enumerate(observables):
            X[j, i] = obs(C)
    return X

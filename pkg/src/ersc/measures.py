"""Exact log-probabilities, Hamiltonians and closed-form moments.

All probabilities are handled on the natural-log scale with ``-inf`` for
impossible outcomes; ``0 * log 0`` is taken to be 0.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations
from math import comb, log

from .complex_core import (
    SimplicialComplex,
    _candidates,
    _proper_faces,
    counts,
    make_simplex,
    mask_of,
    vertices_of,
)
from .generators import GeneralParams, KahleParams, flag_complex, flag_params, gnp_params, lm_params

__all__ = [
    "NotInSampleSpace",
    "MultiplierSet",
    "log_prob_kahle",
    "log_prob_general",
    "log_prob_gnp",
    "log_prob_flag",
    "log_prob_lm",
    "hamiltonian_general",
    "expected_f",
    "expected_phi",
    "expected_a",
    "expected_b",
    "conditional_probability",
]

NEG_INF = -math.inf


class NotInSampleSpace(ValueError):
    """The complex cannot be produced by the model at all (e.g. missing vertices)."""


def _xlog(k: int, p: float) -> float:
    """``k * log(p)`` with ``0 * log(0) = 0``."""
    if k == 0:
        return 0.0
    if p == 0.0:
        return NEG_INF
    return k * log(p)


def _require_all_vertices(C: SimplicialComplex, n: int) -> None:
    if C.n != n:
        raise NotInSampleSpace(f"complex lives on {C.n} vertices, model on {n}")
    if len(C.vertex_set) != n:
        raise NotInSampleSpace("model keeps every vertex; complex is missing some")


def log_prob_kahle(C: SimplicialComplex, params: KahleParams) -> float:
    """log of prod_d p_d^f_d (1 - p_d)^(phi_d - f_d)."""
    _require_all_vertices(C, params.n)
    c = counts(C)
    total = 0.0
    for d in range(1, params.n):
        p = params.p[d - 1]
        f, phi = c.f[d], c.phi[d]
        total += _xlog(f, p) + _xlog(phi - f, 1.0 - p)
        if total == NEG_INF:
            break
    return total


def log_prob_gnp(C: SimplicialComplex, n: int, p: float) -> float:
    """Erdos-Renyi log-probability; ``-inf`` for complexes of dimension > 1."""
    _require_all_vertices(C, n)
    if C.dim > 1:
        return NEG_INF
    f1 = len(C.by_dim[1]) if C.dim == 1 else 0
    return _xlog(f1, p) + _xlog(comb(n, 2) - f1, 1.0 - p)


def log_prob_flag(C: SimplicialComplex, n: int, p: float) -> float:
    """Random flag complex: G(n,p) probability of the 1-skeleton if ``C`` is a clique complex."""
    _require_all_vertices(C, n)
    graph = SimplicialComplex(C.n, frozenset(m for m in C.faces if m.bit_count() <= 2))
    if flag_complex(graph) != C:
        return NEG_INF
    return log_prob_gnp(graph, n, p)


def log_prob_lm(C: SimplicialComplex, n: int, d: int, p: float) -> float:
    """Linial-Meshulam ``Y_d(n, p)``: needs a complete d-skeleton and dimension <= d+1."""
    lm_params(n, d, p)  # validates d
    _require_all_vertices(C, n)
    c = counts(C)
    if C.dim > d + 1 or any(c.f[k] != comb(n, k + 1) for k in range(d + 1)):
        return NEG_INF
    f = c.f[d + 1] if d + 1 < n else 0
    return _xlog(f, p) + _xlog(comb(n, d + 2) - f, 1.0 - p)


def _boundary_complete(C: SimplicialComplex) -> list[int]:
    """Every simplex of ``{0..n-1}`` with b = 1, vertices included."""
    out = [1 << i for i in range(C.n)]
    for group in C.by_dim:
        out.extend(_candidates(C.n, C.faces, group))
    return out


def log_prob_general(C: SimplicialComplex, params: GeneralParams) -> float:
    """log of prod over simplices of p^a (1 - p)^(b - a).

    Only simplices with b = 1 contribute, so the sum runs over the vertices and
    the full-boundary cofaces of the faces of ``C``.
    """
    if C.n != params.n:
        raise ValueError(f"complex lives on {C.n} vertices, parameters on {params.n}")
    total = 0.0
    for m in _boundary_complete(C):
        p = params.prob(m)
        if m in C.faces:
            total += _xlog(1, p)
        else:
            total += _xlog(1, 1.0 - p)
        if total == NEG_INF:
            return NEG_INF
    return total


@dataclass(frozen=True)
class MultiplierSet:
    """Lagrange multipliers of the per-simplex model.

    ``alpha`` couples to simplex presence, ``beta`` to boundary presence and
    ``xi`` is the additive constant (a sum over vertices).
    """

    params: GeneralParams
    xi: float

    def alpha(self, s: Iterable[int] | int) -> float:
        p = self.params.prob(s)
        return log((1.0 - p) / p)

    def beta(self, s: Iterable[int] | int) -> float:
        return -math.log1p(-self.params.prob(s))

    def as_dicts(self) -> tuple[dict, dict]:
        """Explicit ``(alpha, beta)`` maps keyed by simplex; beta only for size >= 2."""
        n = self.params.n
        alpha, beta = {}, {}
        for size in range(1, n + 1):
            for s in combinations(range(n), size):
                alpha[s] = self.alpha(s)
                if size >= 2:
                    beta[s] = self.beta(s)
        return alpha, beta


def hamiltonian_general(C: SimplicialComplex, params: GeneralParams) -> tuple[float, MultiplierSet]:
    """``H(C) = sum alpha a + sum beta b + xi``; equals ``-log_prob_general``."""
    if any(not 0.0 < p < 1.0 for p in params.values()):
        raise ValueError("multipliers are undefined when a probability is 0 or 1")
    xi = sum(-math.log1p(-params.prob(1 << i)) for i in range(params.n))
    mult = MultiplierSet(params, xi)
    h = xi
    for m in _boundary_complete(C):
        if m & (m - 1):
            h += mult.beta(m)
        if m in C.faces:
            h += mult.alpha(m)
    return h, mult


def _check_dim(params: KahleParams, d: int) -> None:
    if not 1 <= d <= params.n - 1:
        raise ValueError(f"dimension {d} outside 1..{params.n - 1}")


def expected_phi(params: KahleParams, d: int) -> float:
    """Mean number of d-simplices of the filled (d-1)-skeleton under the Kahle model."""
    _check_dim(params, d)
    prod = 1.0
    for k in range(1, d):
        prod *= params.p[k - 1] ** comb(d + 1, d - k)
    return comb(params.n, d + 1) * prod


def expected_f(params: KahleParams, d: int) -> float:
    """Mean number of d-simplices under the Kahle model; equals ``p_d * expected_phi``."""
    _check_dim(params, d)
    return params.p[d - 1] * expected_phi(params, d)


def expected_b(s: Iterable[int] | int, params: GeneralParams) -> float:
    """Probability that the whole boundary of ``s`` is present: product over proper faces."""
    m = s if isinstance(s, int) else mask_of(make_simplex(s))
    prod = 1.0
    for face in _proper_faces(m):
        prod *= params.prob(face)
    return prod


def expected_a(s: Iterable[int] | int, params: GeneralParams) -> float:
    """Probability that ``s`` is present: ``p_s`` times :func:`expected_b`."""
    m = s if isinstance(s, int) else mask_of(make_simplex(s))
    return params.prob(m) * expected_b(m, params)


def conditional_probability(dist, s: Iterable[int] | int) -> float:
    """``P(a_s = 1) / P(b_s = 1)`` under an exact distribution over complexes."""
    m = s if isinstance(s, int) else mask_of(make_simplex(s))
    pa = pb = 0.0
    for C, q in zip(dist.space.members, dist.probs):
        if m in C.faces:
            pa += q
        if m & (m - 1) == 0 or all((m ^ (1 << v)) in C.faces for v in vertices_of(m)):
            pb += q
    if pb == 0.0:
        raise ZeroDivisionError(f"boundary of {vertices_of(m)} has probability 0")
    return pa / pb


def kahle_for(model: str, n: int, p: float, d: int | None = None) -> KahleParams:
    """Kahle parameters realising ``gnp``, ``flag`` or ``lm`` (needs ``d``)."""
    if model == "gnp":
        return gnp_params(n, p)
    if model == "flag":
        return flag_params(n, p)
    if model == "lm":
        if d is None:
            raise ValueError("lm needs d")
        return lm_params(n, d, p)
    raise ValueError(f"no Kahle embedding for model {model!r}")

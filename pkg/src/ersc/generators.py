"""Seeded samplers for G(n,p), random flag, Linial-Meshulam, Kahle and
per-simplex (general) random simplicial complexes.

Every sampler grows the complex dimension by dimension.  At dimension ``k``
the candidates are the (k+1)-subsets whose whole boundary is present; they are
visited in lexicographic order and each candidate with a probability strictly
between 0 and 1 consumes exactly one uniform draw from the stream reserved for
dimension ``k``.  Probabilities of exactly 0 or 1 never touch the stream.

Two entry points share those rules:

* ``sample_*`` functions return one :class:`SimplicialComplex` and work for
  any ``n``.
* :func:`sample_batch` returns a :class:`ComplexBatch` of boolean indicator
  layers, vectorised with numpy; used for Monte Carlo work at moderate ``n``.

A batch of size 1 reproduces the single sample drawn from the same
:class:`RngState`.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np
from scipy import sparse

from .complex_core import (
    SimplicialComplex,
    _candidates,
    _facets,
    lex_key,
    make_simplex,
    mask_of,
    vertices_of,
)

__all__ = [
    "RngState",
    "KahleParams",
    "GeneralParams",
    "ComplexBatch",
    "sample_gnp",
    "flag_complex",
    "sample_flag",
    "sample_linial_meshulam",
    "sample_kahle",
    "sample_general_delta",
    "sample_batch",
    "gnp_params",
    "flag_params",
    "lm_params",
]

# Above this candidate-space size the dense (numpy table) discovery is not used.
DENSE_LIMIT = 2_000_000
# Lower-dimensional density below which cofaces are enumerated directly.
SPARSE_DENSITY = 0.1


@dataclass(frozen=True)
class RngState:
    """Seed plus stream counter.  Each dimension gets its own Philox stream."""

    seed: int
    stream: int = 0

    def generator(self, dim: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, dim))
        return np.random.Generator(np.random.Philox(ss))


def as_state(rng: RngState | int) -> RngState:
    if isinstance(rng, RngState):
        return rng
    return RngState(int(rng))


def _check_prob(p: float, what: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what}={p} is not a probability")
    return p


@dataclass(frozen=True)
class KahleParams:
    """Per-dimension probabilities ``p[d-1]`` for d-simplices, d = 1..n-1."""

    n: int
    p: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "p", tuple(_check_prob(x, "p_d") for x in self.p))
        if len(self.p) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} probabilities, got {len(self.p)}")

    @classmethod
    def from_prefix(cls, n: int, p: Sequence[float]) -> KahleParams:
        """Pad ``p`` with zeros up to length ``n - 1``."""
        p = list(p)
        if len(p) > n - 1:
            raise ValueError(f"{len(p)} probabilities given for n={n}")
        return cls(n, tuple(p) + (0.0,) * (n - 1 - len(p)))

    def p_dim(self, d: int) -> float:
        """Probability governing d-simplices (1 for vertices)."""
        return 1.0 if d == 0 else self.p[d - 1]


def gnp_params(n: int, p: float) -> KahleParams:
    return KahleParams.from_prefix(n, [_check_prob(p)] if n > 1 else [])


def flag_params(n: int, p: float) -> KahleParams:
    return KahleParams(n, (_check_prob(p),) + (1.0,) * (n - 2) if n > 1 else ())


def lm_params(n: int, d: int, p: float) -> KahleParams:
    if not 1 <= d <= n - 2:
        raise ValueError(f"Linial-Meshulam dimension d={d} must satisfy 1 <= d <= n-2")
    return KahleParams.from_prefix(n, [1.0] * d + [_check_prob(p)])


@dataclass(frozen=True)
class GeneralParams:
    """Per-simplex appearance probabilities, vertices included.

    ``p`` maps simplices (any iterable of labels) to probabilities; anything not
    listed falls back to ``default``, which is either one number or a sequence
    indexed by simplex dimension ``0..n-1``.
    """

    n: int
    p: Mapping[Sequence[int], float] = field(default_factory=dict)
    default: float | Sequence[float] = 1.0

    def __post_init__(self) -> None:
        table = {}
        for s, v in self.p.items():
            s = make_simplex(s)
            if s[-1] >= self.n:
                raise ValueError(f"simplex {s} has a label outside 0..{self.n - 1}")
            table[mask_of(s)] = _check_prob(v)
        if isinstance(self.default, (int, float)):
            defaults = (_check_prob(self.default),) * self.n
        else:
            defaults = tuple(_check_prob(x, "default") for x in self.default)
            if len(defaults) != self.n:
                raise ValueError(f"per-dimension default needs {self.n} entries")
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_defaults", defaults)
        per_dim = Counter(m.bit_count() - 1 for m in table)
        object.__setattr__(self, "_override_dims", frozenset(per_dim))
        # dimensions whose default is never consulted
        covered = frozenset(d for d, k in per_dim.items() if k == comb(self.n, d + 1))
        object.__setattr__(self, "_covered_dims", covered)

    def prob(self, s: Iterable[int] | int) -> float:
        m = s if isinstance(s, int) else mask_of(make_simplex(s))
        got = self._table.get(m)  # type: ignore[attr-defined]
        if got is not None:
            return got
        return self._defaults[m.bit_count() - 1]  # type: ignore[attr-defined]

    def uniform_at(self, d: int) -> float | None:
        """The common probability of all d-simplices, or None if they differ."""
        if d in self._override_dims:  # type: ignore[attr-defined]
            return None
        return self._defaults[d]  # type: ignore[attr-defined]

    def values(self) -> Iterator[float]:
        """Every probability in use (explicit entries and defaults)."""
        yield from self._table.values()  # type: ignore[attr-defined]
        for d, v in enumerate(self._defaults):  # type: ignore[attr-defined]
            if d not in self._covered_dims:  # type: ignore[attr-defined]
                yield v

    @classmethod
    def from_kahle(cls, params: KahleParams) -> GeneralParams:
        return cls(params.n, {}, (1.0,) + params.p)

    @classmethod
    def random(cls, n: int, low: float, high: float, seed: int) -> GeneralParams:
        """Independent uniform ``[low, high]`` probability for every simplex."""
        rng = np.random.default_rng(seed)
        table = {}
        for size in range(1, n + 1):
            for s in combinations(range(n), size):
                table[s] = float(rng.uniform(low, high))
        return cls(n, table, 0.0)

    def to_json(self) -> str:
        items = sorted(self._table.items(), key=lambda kv: (kv[0].bit_count(), lex_key(kv[0])))  # type: ignore[attr-defined]
        return json.dumps(
            {
                "n": self.n,
                "default": list(self._defaults),  # type: ignore[attr-defined]
                "simplices": [[list(vertices_of(m)), v] for m, v in items],
            }
        )

    @classmethod
    def from_json(cls, text: str | dict) -> GeneralParams:
        obj = json.loads(text) if isinstance(text, str) else text
        unknown = set(obj) - {"n", "default", "simplices"}
        if unknown:
            raise ValueError(f"unknown fields in parameter file: {sorted(unknown)}")
        table = {tuple(s): v for s, v in obj.get("simplices", [])}
        return cls(int(obj["n"]), table, obj.get("default", 1.0))


# --- probability levels ---------------------------------------------------

class _Levels:
    """Adapter giving per-dimension probabilities for the growth engines."""

    def __init__(self, n: int, kahle: KahleParams | None = None, general: GeneralParams | None = None):
        self.n = n
        self.kahle = kahle
        self.general = general
        self.random_vertices = general is not None

    def uniform(self, d: int) -> float | None:
        if self.kahle is not None:
            return self.kahle.p_dim(d)
        return self.general.uniform_at(d)  # type: ignore[union-attr]

    def prob(self, d: int, mask: int) -> float:
        u = self.uniform(d)
        return u if u is not None else self.general.prob(mask)  # type: ignore[union-attr]

    def column_probs(self, d: int) -> np.ndarray:
        t = _table(self.n, d + 1)
        u = self.uniform(d)
        if u is not None:
            return np.full(len(t.masks), u)
        return np.array([self.general.prob(int(m)) for m in t.masks])  # type: ignore[union-attr]


@dataclass(frozen=True)
class _Table:
    masks: np.ndarray       # lexicographic list of size-k subsets as int64 masks
    index: dict            # mask -> row
    facet_rows: np.ndarray  # (rows, k) indices into the size-(k-1) table


@lru_cache(maxsize=256)
def _table(n: int, size: int) -> _Table:
    combos = list(combinations(range(n), size))
    masks = np.array([mask_of(c) for c in combos], dtype=np.int64)
    index = {int(m): i for i, m in enumerate(masks)}
    if size >= 2:
        lower = _table(n, size - 1).index
        facet_rows = np.array(
            [[lower[mask_of(c[:j] + c[j + 1:])] for j in range(size)] for c in combos], dtype=np.intp
        ).reshape(len(combos), size)
    else:
        facet_rows = np.zeros((len(combos), 0), dtype=np.intp)
    return _Table(masks, index, facet_rows)


def _dense_ok(n: int, d: int) -> bool:
    return n <= 62 and comb(n, d + 1) <= DENSE_LIMIT


def _discover_dense(n: int, d: int, prev: Sequence[int]) -> list[int]:
    lower = _table(n, d)
    present = np.zeros(len(lower.masks), dtype=bool)
    present[[lower.index[m] for m in prev]] = True
    t = _table(n, d + 1)
    b = present[t.facet_rows].all(axis=1)
    return [int(m) for m in t.masks[b]]


def _discover_sparse(n: int, prev: Sequence[int], faces: set[int]) -> list[int]:
    return sorted(_candidates(n, faces, prev), key=lex_key)


def _discover(n: int, d: int, prev: Sequence[int], faces: set[int]) -> list[int]:
    """Lexicographically ordered d-simplex candidates (full boundary present)."""
    density = len(prev) / comb(n, d)
    if density >= SPARSE_DENSITY and _dense_ok(n, d):
        return _discover_dense(n, d, prev)
    return _discover_sparse(n, prev, faces)


def _accept(cands: list[int], d: int, levels: _Levels, state: RngState) -> list[int]:
    u = levels.uniform(d)
    if u is not None:
        if u == 0.0:
            return []
        if u == 1.0:
            return cands
        draws = state.generator(d).random(len(cands))
        return [c for c, x in zip(cands, draws) if x < u]
    probs = [levels.prob(d, c) for c in cands]
    nfrac = sum(1 for q in probs if 0.0 < q < 1.0)
    draws = iter(state.generator(d).random(nfrac)) if nfrac else iter(())
    out = []
    for c, q in zip(cands, probs):
        if q == 1.0 or (q > 0.0 and next(draws) < q):
            out.append(c)
    return out


def _grow(levels: _Levels, state: RngState) -> SimplicialComplex:
    n = levels.n
    vertices = [1 << i for i in range(n)]
    if levels.random_vertices:
        prev = _accept(vertices, 0, levels, state)
    else:
        prev = vertices
    faces = set(prev)
    for d in range(1, n):
        if not prev:
            break
        cands = _discover(n, d, prev, faces)
        if not cands:
            break
        prev = _accept(cands, d, levels, state)
        faces.update(prev)
    return SimplicialComplex(n, frozenset(faces))


# --- public single-sample API ----------------------------------------------

def sample_kahle(params: KahleParams, rng: RngState | int) -> SimplicialComplex:
    """One draw from the multi-parameter Kahle model (all n vertices present)."""
    return _grow(_Levels(params.n, kahle=params), as_state(rng))


def sample_general_delta(params: GeneralParams, rng: RngState | int) -> SimplicialComplex:
    """One draw from the per-simplex model; vertices are random too."""
    return _grow(_Levels(params.n, general=params), as_state(rng))


def sample_gnp(n: int, p: float, rng: RngState | int) -> SimplicialComplex:
    """Erdos-Renyi graph on ``n`` vertices as a 1-dimensional complex."""
    return sample_kahle(gnp_params(n, p), rng)


def flag_complex(G: SimplicialComplex) -> SimplicialComplex:
    """Clique complex of a graph given as a complex of dimension <= 1."""
    if G.dim > 1:
        raise ValueError(f"flag_complex expects a graph, got dimension {G.dim}")
    faces = set(G.faces)
    prev: Sequence[int] = G.by_dim[1] if G.dim == 1 else ()
    while prev:
        prev = _candidates(G.n, faces, prev)
        faces.update(prev)
    return SimplicialComplex(G.n, frozenset(faces))


def sample_flag(n: int, p: float, rng: RngState | int) -> SimplicialComplex:
    """Random flag complex: the clique complex of ``sample_gnp(n, p, rng)``."""
    return flag_complex(sample_gnp(n, p, rng))


def sample_linial_meshulam(n: int, d: int, p: float, rng: RngState | int) -> SimplicialComplex:
    """Full d-skeleton plus independent (d+1)-simplices with probability ``p``."""
    return sample_kahle(lm_params(n, d, p), rng)


# --- vectorised batches ------------------------------------------------------

@dataclass
class ComplexBatch:
    """``size`` sampled complexes stored as sparse indicator layers.

    ``layers[d]`` is a ``(size, comb(n, d+1))`` boolean CSR matrix whose columns
    are the d-simplices in lexicographic order; dimensions past ``len(layers)``
    are empty in every sample.  ``phi_counts[:, d]`` is the number of
    d-candidates (full boundary present) per sample.
    """

    n: int
    layers: list[sparse.csr_array]
    phi_counts: np.ndarray

    @property
    def size(self) -> int:
        return self.phi_counts.shape[0]

    def __len__(self) -> int:
        return self.size

    def f_counts(self) -> np.ndarray:
        out = np.zeros((self.size, self.n), dtype=np.int64)
        for d, layer in enumerate(self.layers):
            out[:, d] = np.diff(layer.indptr)
        return out

    def indicator(self, s: Iterable[int] | int) -> np.ndarray:
        """Per-sample presence of simplex ``s``."""
        m = s if isinstance(s, int) else mask_of(make_simplex(s))
        d = m.bit_count() - 1
        if d >= len(self.layers):
            return np.zeros(self.size, dtype=bool)
        col = _table(self.n, d + 1).index[m]
        return self.layers[d][:, [col]].toarray().ravel().astype(bool)

    def boundary_indicator(self, s: Iterable[int] | int) -> np.ndarray:
        """Per-sample indicator that the whole boundary of ``s`` is present."""
        m = s if isinstance(s, int) else mask_of(make_simplex(s))
        out = np.ones(self.size, dtype=bool)
        if m.bit_count() > 1:
            for f in _facets(m):
                out &= self.indicator(f)
        return out

    def complex(self, i: int) -> SimplicialComplex:
        faces = []
        for d, layer in enumerate(self.layers):
            cols = layer.indices[layer.indptr[i]:layer.indptr[i + 1]]
            faces.extend(int(m) for m in _table(self.n, d + 1).masks[cols])
        return SimplicialComplex(self.n, frozenset(faces))

    def __iter__(self) -> Iterator[SimplicialComplex]:
        for i in range(self.size):
            yield self.complex(i)

    def codes(self) -> np.ndarray:
        """Pack every sample into one integer; see :func:`complex_code`.  Needs ``n <= 6``."""
        if self.n > 6:
            raise ValueError("codes() needs n <= 6")
        out = np.zeros(self.size, dtype=np.uint64)
        for d, layer in enumerate(self.layers):
            weights = np.left_shift(np.uint64(1), (_table(self.n, d + 1).masks - 1).astype(np.uint64))
            coo = layer.tocoo()
            np.bitwise_or.at(out, coo.row, weights[coo.col])
        return out


def complex_code(C: SimplicialComplex) -> int:
    """Bit ``m - 1`` set iff the simplex with vertex mask ``m`` is in ``C``."""
    return sum(1 << (m - 1) for m in C.faces)


def _batch_chunk(levels: _Levels, size: int, gens: dict[int, np.random.Generator], state: RngState):
    n = levels.n
    layers: list[sparse.csr_array] = []
    phi = np.zeros((size, n), dtype=np.int64)
    prev = None
    for d in range(n):
        width = comb(n, d + 1)
        if d == 0:
            cols = np.arange(n)
            b = np.ones((size, n), dtype=bool)
        else:
            if not _dense_ok(n, d):
                raise ValueError(f"batch sampling at n={n} needs dimension {d} tables; use single samples")
            rows = _table(n, d + 1).facet_rows
            # only columns whose facets all occur somewhere in the chunk
            cols = np.flatnonzero(prev.any(axis=0)[rows].all(axis=1))
            sub = rows[cols]
            b = prev[:, sub[:, 0]]
            for j in range(1, d + 1):
                b &= prev[:, sub[:, j]]
        phi[:, d] = b.sum(axis=1)
        probs = levels.column_probs(d)[cols]
        a = b & (probs == 1.0)
        frac = b & (probs > 0.0) & (probs < 1.0)
        k = int(frac.sum())
        if k:
            if d not in gens:
                gens[d] = state.generator(d)
            thresholds = np.broadcast_to(probs, b.shape)[frac]
            a[frac] = gens[d].random(k) < thresholds
        if not a.any():
            break
        full = np.zeros((size, width), dtype=bool)
        full[:, cols] = a
        layers.append(sparse.csr_array(full))
        prev = full
    if n:
        phi[:, 0] = n
    return layers, phi


def sample_batch(
    params: KahleParams | GeneralParams,
    size: int,
    rng: RngState | int,
    chunk: int | None = None,
) -> ComplexBatch:
    """Draw ``size`` complexes at once.

    Within each dimension the draws are consumed sample by sample, candidates
    in lexicographic order, so the result does not depend on ``chunk``.
    """
    state = as_state(rng)
    if isinstance(params, KahleParams):
        levels = _Levels(params.n, kahle=params)
    else:
        levels = _Levels(params.n, general=params)
    n = params.n
    if chunk is None:
        top = 0
        while top < n - 1 and levels.uniform(top) != 0.0:
            top += 1
        widest = max((comb(n, k + 1) * (k + 1) for k in range(top + 1)), default=1)
        chunk = max(1, min(size, 20_000_000 // widest))
    gens: dict[int, np.random.Generator] = {}
    parts = [
        _batch_chunk(levels, min(chunk, size - start), gens, state) for start in range(0, size, chunk)
    ]
    depth = max((len(layers) for layers, _ in parts), default=0)
    layers = []
    for d in range(depth):
        width = comb(n, d + 1)
        layers.append(
            sparse.vstack(
                [ls[d] if d < len(ls) else sparse.csr_array((p.shape[0], width), dtype=bool) for ls, p in parts],
                format="csr",
            )
        )
    phi = np.concatenate([p for _, p in parts]) if parts else np.zeros((0, n), dtype=np.int64)
    return ComplexBatch(n, layers, phi)

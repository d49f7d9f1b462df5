"""Labeled simplicial complexes, adjacency indicators and skeleton operations.

Simplices are exposed as strictly increasing tuples of 0-based vertex labels
and stored internally as integer bitmasks (bit ``i`` set iff vertex ``i`` is in
the simplex).  Python integers are unbounded, so the mask encoding works for
any ambient size.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "ObservableCounts",
    "make_simplex",
    "mask_of",
    "vertices_of",
    "lex_key",
    "closure",
    "a_value",
    "b_value",
    "skeleton",
    "filled_skeleton",
    "counts",
    "full_simplex",
    "to_json",
    "from_json",
]

Simplex = tuple[int, ...]


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> Simplex:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def lex_key(mask: int) -> Simplex:
    """Sort key putting masks in lexicographic order of their vertex tuples."""
    return vertices_of(mask)


def make_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalise ``vertices`` into a strictly increasing tuple.

    Raises ``ValueError`` on an empty input, repeated or negative labels.
    """
    vs = sorted(int(v) for v in vertices)
    if not vs:
        raise ValueError("a simplex must have at least one vertex")
    if vs[0] < 0:
        raise ValueError(f"negative vertex label in {vs}")
    for a, b in zip(vs, vs[1:]):
        if a == b:
            raise ValueError(f"repeated vertex {a} in {vs}")
    return tuple(vs)


def _facets(mask: int) -> Iterator[int]:
    m = mask
    while m:
        low = m & -m
        yield mask ^ low
        m ^= low


def _proper_faces(mask: int) -> Iterator[int]:
    """All non-empty proper subsets of ``mask``."""
    sub = (mask - 1) & mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


@dataclass(frozen=True, eq=True)
class SimplicialComplex:
    """Immutable downward-closed family of simplices on ``{0, ..., n-1}``.

    ``faces`` holds every simplex (all faces explicitly) as a bitmask.  Use
    :func:`closure` or :meth:`from_masks` to build instances; the raw
    constructor validates unless ``check=False`` is passed to
    :meth:`from_masks`.
    """

    n: int
    faces: frozenset[int]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("ambient size must be non-negative")

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], check: bool = True) -> SimplicialComplex:
        C = cls(n, frozenset(masks))
        if check:
            C.validate()
        return C

    @classmethod
    def from_simplices(cls, n: int, simplices: Iterable[Iterable[int]]) -> SimplicialComplex:
        """Build from an explicit face list, rejecting lists that are not closed."""
        return cls.from_masks(n, (mask_of(make_simplex(s)) for s in simplices))

    def validate(self) -> None:
        limit = 1 << self.n
        for m in self.faces:
            if m <= 0 or m >= limit:
                raise ValueError(f"simplex {vertices_of(m)} has a label outside 0..{self.n - 1}")
            if m & (m - 1):
                for f in _facets(m):
                    if f not in self.faces:
                        raise ValueError(
                            f"not downward closed: {vertices_of(m)} present, face {vertices_of(f)} missing"
                        )

    @cached_property
    def by_dim(self) -> tuple[tuple[int, ...], ...]:
        """Face masks grouped by dimension, each group in lexicographic order."""
        groups: dict[int, list[int]] = {}
        for m in self.faces:
            groups.setdefault(m.bit_count() - 1, []).append(m)
        top = max(groups, default=-1)
        return tuple(tuple(sorted(groups.get(d, ()), key=lex_key)) for d in range(top + 1))

    @property
    def dim(self) -> int:
        """Dimension of the complex; -1 for the empty complex."""
        return len(self.by_dim) - 1

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for m in self.faces if m & (m - 1) == 0 for v in vertices_of(m))

    def simplices(self, d: int | None = None) -> list[Simplex]:
        """Faces as vertex tuples, sorted by (dimension, lexicographic)."""
        if d is not None:
            return [vertices_of(m) for m in self.by_dim[d]] if 0 <= d < len(self.by_dim) else []
        return [vertices_of(m) for group in self.by_dim for m in group]

    def __contains__(self, s: object) -> bool:
        if isinstance(s, int):
            return s in self.faces
        return mask_of(s) in self.faces  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, simplices={self.simplices()})"


@dataclass(frozen=True)
class ObservableCounts:
    """Per-dimension simplex counts.

    ``f[d]`` is the number of d-simplices.  ``phi[d]`` (d >= 1) is the number of
    d-simplices of the filled (d-1)-skeleton, i.e. (d+1)-subsets whose whole
    boundary is present.  ``phi[0]`` is set to the ambient size by convention.
    """

    f: tuple[int, ...]
    phi: tuple[int, ...]


def closure(generators: Iterable[Iterable[int]], n: int) -> SimplicialComplex:
    """Smallest complex on ``n`` vertices containing every generator simplex."""
    faces: set[int] = set()
    for g in generators:
        s = make_simplex(g)
        if s[-1] >= n:
            raise ValueError(f"vertex label {s[-1]} out of range for n={n}")
        m = mask_of(s)
        if m in faces:
            continue
        faces.add(m)
        faces.update(_proper_faces(m))
    return SimplicialComplex(n, frozenset(faces))


def full_simplex(n: int) -> SimplicialComplex:
    """The complete (n-1)-simplex with all of its faces."""
    return SimplicialComplex(n, frozenset(range(1, 1 << n)))


def _as_mask(s: Iterable[int] | int) -> int:
    return s if isinstance(s, int) else mask_of(make_simplex(s))


def a_value(C: SimplicialComplex, s: Iterable[int] | int) -> int:
    """1 iff simplex ``s`` belongs to ``C``."""
    return int(_as_mask(s) in C.faces)


def b_value(C: SimplicialComplex, s: Iterable[int] | int) -> int:
    """1 iff every codimension-1 face of ``s`` is in ``C``; 1 for vertices."""
    m = _as_mask(s)
    if m & (m - 1) == 0:
        return 1
    return int(all(f in C.faces for f in _facets(m)))


def skeleton(C: SimplicialComplex, d: int) -> SimplicialComplex:
    if d < 0:
        raise ValueError("skeleton dimension must be >= 0")
    if d >= C.dim:
        return C
    return SimplicialComplex(C.n, frozenset(m for m in C.faces if m.bit_count() <= d + 1))


def _candidates(n: int, faces: frozenset[int] | set[int], lower: Iterable[int]) -> list[int]:
    """(k+1)-subsets of ``{0..n-1}`` all of whose facets are in ``faces``.

    ``lower`` enumerates the k-vertex masks present.  Each candidate is produced
    once, from the facet obtained by dropping its largest vertex.
    """
    out = []
    for m in lower:
        top = m.bit_length()
        for v in range(top, n):
            c = m | (1 << v)
            if all(f in faces for f in _facets(c)):
                out.append(c)
    return out


def filled_skeleton(C: SimplicialComplex, d: int) -> SimplicialComplex:
    """``C^(d)`` plus every (d+1)-simplex whose d-boundary lies in ``C^(d)``.

    The result need not be a subcomplex of ``C``.
    """
    base = skeleton(C, d)
    lower = base.by_dim[d] if d < len(base.by_dim) else ()
    added = _candidates(C.n, base.faces, lower)
    return SimplicialComplex(C.n, base.faces | frozenset(added))


def counts(C: SimplicialComplex) -> ObservableCounts:
    """f- and phi-vectors indexed by dimension ``0..n-1``."""
    n = C.n
    f = [0] * max(n, 1)
    phi = [0] * max(n, 1)
    phi[0] = n
    groups = C.by_dim
    for d, g in enumerate(groups):
        f[d] = len(g)
    for d in range(1, n):
        lower = groups[d - 1] if d - 1 < len(groups) else ()
        if not lower:
            break
        phi[d] = len(_candidates(n, C.faces, lower))
    return ObservableCounts(tuple(f[:n]), tuple(phi[:n]))


def to_json(C: SimplicialComplex) -> str:
    return json.dumps({"n": C.n, "simplices": [list(s) for s in C.simplices()]}, separators=(",", ":"))


def from_json(line: str | dict) -> SimplicialComplex:
    """Parse the canonical JSON object, validating labels, ordering and closure."""
    obj = json.loads(line) if isinstance(line, str) else line
    n = int(obj["n"])
    simplices = obj["simplices"]
    for s in simplices:
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError(f"simplex {s} is not strictly increasing")
        if s and (s[0] < 0 or s[-1] >= n):
            raise ValueError(f"simplex {s} has a label outside 0..{n - 1}")
    return SimplicialComplex.from_simplices(n, simplices)

"""Simplicial complexes on [n]: closure, f-vectors, minimal non-faces,
shiftedness, joins with simplices, reduced homology over F_p.

Faces are stored as a frozen set of bitmasks with memoized per-cardinality
buckets.  Complexes are immutable after construction; every constructor
validates (or guarantees) downward-closure, so an ill-formed face set cannot
circulate.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable

from .errors import NotShifted, ParseError
from .exterior import mask_from_vertices, subset_key, vertices_of_mask
from .linalg import MatrixFp, PrimeField, rank

MAX_COMPLEX_VARS = 20  # face enumeration is 2**n; acceptance targets n <= 12


class SimplicialComplex:
    """A downward-closed family of subsets of [n], containing the empty set."""

    def __init__(self, n: int, faces: Iterable[int]):
        if not 0 <= n <= MAX_COMPLEX_VARS:
            raise ValueError(f"vertex count must be in [0, {MAX_COMPLEX_VARS}]")
        fs = frozenset(faces) | {0}
        for f in fs:
            if f < 0 or f >> n:
                raise ValueError("face outside the vertex set")
            m = f
            while m:
                low = m & -m
                if f ^ low not in fs:
                    raise ValueError("face set is not downward closed")
                m ^= low
        self.n = n
        self.faces = fs

    @classmethod
    def closure(cls, n: int, generators: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Downward closure of the given faces (vertices 1-based)."""
        return cls.closure_masks(n, (mask_from_vertices(g, n) for g in generators))

    @classmethod
    def closure_masks(cls, n: int, generators: Iterable[int]) -> "SimplicialComplex":
        if not 0 <= n <= MAX_COMPLEX_VARS:
            raise ValueError(f"vertex count must be in [0, {MAX_COMPLEX_VARS}]")
        faces = {0}
        for g in generators:
            if g < 0 or g >> n:
                raise ValueError("face outside the vertex set")
            _close_into(g, faces)
        cx = cls.__new__(cls)
        cx.n = n
        cx.faces = frozenset(faces)
        return cx

    @classmethod
    def full_simplex(cls, n: int) -> "SimplicialComplex":
        return cls.closure_masks(n, [(1 << n) - 1])

    # -- basic structure ----------------------------------------------------

    def __contains__(self, mask: int) -> bool:
        return mask in self.faces

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.n == other.n and self.faces == other.faces

    def __hash__(self):
        return hash((self.n, self.faces))

    def __repr__(self):
        fac = ",".join("{" + ",".join(map(str, vertices_of_mask(f))) + "}"
                       for f in self.facets())
        return f"SimplicialComplex(n={self.n}, facets=[{fac}])"

    @cached_property
    def faces_by_card(self) -> tuple[tuple[int, ...], ...]:
        """Faces bucketed by cardinality, each bucket in ascending set order."""
        buckets: list[list[int]] = [[] for _ in range(self.n + 1)]
        for f in self.faces:
            buckets[f.bit_count()].append(f)
        for b in buckets:
            b.sort(key=subset_key)
        return tuple(tuple(b) for b in buckets)

    @property
    def dim(self) -> int:
        for c in range(self.n, -1, -1):
            if self.faces_by_card[c]:
                return c - 1
        return -1

    @property
    def has_full_support(self) -> bool:
        return len(self.faces_by_card[1]) == self.n

    def f_vector(self) -> tuple[int, ...]:
        """(f_-1, f_0, ..., f_dim); always starts with 1 for the empty face."""
        return tuple(len(self.faces_by_card[c]) for c in range(self.dim + 2))

    def facets(self) -> tuple[int, ...]:
        out = []
        for f in self.faces:
            if not any((f | (1 << v)) in self.faces
                       for v in range(self.n) if not f >> v & 1):
                out.append(f)
        return tuple(sorted(out, key=subset_key))

    def minimal_nonfaces(self) -> tuple[int, ...]:
        """Inclusion-minimal non-faces; their monomials generate the face ideal."""
        out = []
        for m in range(1, 1 << self.n):
            if m in self.faces:
                continue
            mm = m
            minimal = True
            while mm:
                low = mm & -mm
                if m ^ low not in self.faces:
                    minimal = False
                    break
                mm ^= low
            if minimal:
                out.append(m)
        return tuple(sorted(out, key=lambda f: (f.bit_count(), subset_key(f))))

    def is_shifted(self) -> bool:
        """Exchange condition: F in faces, i in F, j < i  =>  F - i + j in faces."""
        for f in self.faces:
            m = f
            while m:
                low = m & -m
                i = low.bit_length()
                for j in range(1, i):
                    bj = 1 << (j - 1)
                    if not f & bj and (f ^ low) | bj not in self.faces:
                        return False
                m ^= low
        return True

    # -- cone structure ------------------------------------------------------

    def is_cone_over_first_vertex(self) -> bool:
        if self.n == 0 or 1 not in self.faces:
            return False
        return all(f & 1 for f in self.facets())

    def delete_first_vertex(self) -> "SimplicialComplex":
        """Faces avoiding vertex 1, relabelled down to [n-1]."""
        cx = SimplicialComplex.__new__(SimplicialComplex)
        cx.n = self.n - 1
        cx.faces = frozenset(f >> 1 for f in self.faces if not f & 1)
        return cx

    def split_cone_part(self) -> tuple[int, "SimplicialComplex"]:
        """Largest r with self = 2^[r] * Gamma; Gamma relabelled to [n-r].

        Valid for shifted complexes only: there a cone vertex can always be
        taken to be vertex 1, so the greedy peel below is maximal.
        """
        if not self.is_shifted():
            raise NotShifted("split_cone_part requires a shifted complex")
        r = 0
        cur = self
        while cur.n > 0 and cur.is_cone_over_first_vertex():
            cur = cur.delete_first_vertex()
            r += 1
        return r, cur

    @staticmethod
    def join_with_simplex(r: int, gamma: "SimplicialComplex") -> "SimplicialComplex":
        """2^[r] * Gamma with Gamma relabelled up to vertices r+1..r+n."""
        if r < 0:
            raise ValueError("r must be >= 0")
        low = (1 << r) - 1
        faces = set()
        for f in gamma.faces:
            shifted = f << r
            for s in range(low + 1):
                faces.add(shifted | s)
        cx = SimplicialComplex.__new__(SimplicialComplex)
        cx.n = r + gamma.n
        cx.faces = frozenset(faces)
        return cx


def _close_into(g: int, faces: set) -> None:
    if g in faces:
        return
    stack = [g]
    while stack:
        f = stack.pop()
        if f in faces:
            continue
        faces.add(f)
        m = f
        while m:
            low = m & -m
            sub = f ^ low
            if sub not in faces:
                stack.append(sub)
            m ^= low


# ---------------------------------------------------------------------------
# reduced homology
# ---------------------------------------------------------------------------


def boundary_matrix(cx: SimplicialComplex, k: int, field: PrimeField) -> MatrixFp:
    """Boundary map from k-faces to (k-1)-faces (cardinalities k+1 -> k).

    Bases are the per-cardinality buckets in ascending set order; the sign of
    dropping the t-th smallest vertex is (-1)^t.
    """
    p = field.p
    dom = cx.faces_by_card[k + 1] if 0 <= k + 1 <= cx.n else ()
    cod = cx.faces_by_card[k] if 0 <= k <= cx.n else ()
    cod_index = {f: i for i, f in enumerate(cod)}
    m = MatrixFp.zeros(len(cod), len(dom), p)
    a = m.a
    for j, f in enumerate(dom):
        mm = f
        t = 0
        while mm:
            low = mm & -mm
            a[cod_index[f ^ low], j] = 1 if t % 2 == 0 else p - 1
            mm ^= low
            t += 1
    return m


def reduced_homology_dims(cx: SimplicialComplex, field: PrimeField) -> tuple[int, ...]:
    """dim H~_k for k = -1..dim, over F_p.

    H~_{-1} is nonzero exactly for the complex {emptyset}; including it makes
    the cone-structure characterisation below hold verbatim when the shifted
    complex is a full simplex.
    """
    d = cx.dim
    ranks = [rank(boundary_matrix(cx, k, field)) for k in range(0, d + 2)]
    dims = []
    for k in range(-1, d + 1):
        dom = len(cx.faces_by_card[k + 1])
        rk = ranks[k] if k >= 0 else 0  # the map out of degree -1 is zero
        rk1 = ranks[k + 1] if k + 1 <= d else 0
        dims.append(dom - rk - rk1)
    return tuple(dims)


def is_nonacyclic(cx: SimplicialComplex, field: PrimeField) -> bool:
    """True iff some reduced homology group in degrees -1..dim is nonzero."""
    return any(h != 0 for h in reduced_homology_dims(cx, field))


# ---------------------------------------------------------------------------
# file format: "n <int>" then "f <v1> <v2> ..." generator lines, '#' comments
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> SimplicialComplex:
    n = None
    gens: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate n line")
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'n <int>'")
            n = int(parts[1])
        elif parts[0] == "f":
            try:
                gens.append([int(x) for x in parts[1:]])
            except ValueError:
                raise ParseError(f"line {lineno}: bad vertex in face line") from None
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    if n is None:
        raise ParseError("missing 'n <int>' line")
    try:
        return SimplicialComplex.closure(n, gens)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_complex_file(path) -> SimplicialComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex(fh.read())


def format_complex(cx: SimplicialComplex) -> str:
    lines = [f"n {cx.n}"]
    for f in cx.facets():
        if f:
            lines.append("f " + " ".join(str(v) for v in vertices_of_mask(f)))
    return "\n".join(lines) + "\n"

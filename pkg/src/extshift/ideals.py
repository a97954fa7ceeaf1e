"""Monomial ideals in the exterior algebra E and the polynomial ring S.

Generators are bitmask supports (ring "E", and squarefree ideals in "S") or
exponent vectors (general monomials in "S").  Stability predicates follow the
reversed-order, min-based convention throughout; no max-based variant exists
here, so conventions cannot silently mix.

The closed-form invariants for (squarefree) stable ideals live next to a
brute-force Tor computation through the Koszul complex, which serves as the
independent oracle for every Betti table the closed forms produce.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, NamedTuple, Optional

from .complexes import SimplicialComplex
from .errors import ParseError, SizeLimit, StabilityViolation
from .exterior import degree_masks, mask_from_vertices, subset_key, vertices_of_mask
from .linalg import PrimeField, rank_rows

RING_E = "E"
RING_S = "S"

KOSZUL_MAX_VARS = 6


def exp_from_vertices(vertices: Iterable[int], n: int) -> tuple[int, ...]:
    e = [0] * n
    for v in vertices:
        if not 1 <= v <= n:
            raise ValueError(f"variable {v} outside [1, {n}]")
        e[v - 1] += 1
    return tuple(e)


def exp_expansion(exp: tuple[int, ...]) -> tuple[int, ...]:
    """Ascending variable list with multiplicity; the monomial-order key."""
    out = []
    for v, e in enumerate(exp, start=1):
        out.extend([v] * e)
    return tuple(out)


def exp_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def degree_exps(n: int, d: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    """All degree-d exponent vectors on n variables, descending in the
    reverse lexicographic order (x_1 < ... < x_n), with an index map."""
    exps = []
    for expansion in combinations_with_replacement(range(1, n + 1), d):
        e = [0] * n
        for v in expansion:
            e[v - 1] += 1
        exps.append(tuple(e))
    exps.sort(key=exp_expansion, reverse=True)
    return tuple(exps), {e: i for i, e in enumerate(exps)}


class MonomialIdeal:
    """A proper monomial ideal given by its minimal generators."""

    __slots__ = ("ring", "n", "gens", "_members")

    def __init__(self, ring: str, n: int, gens: Iterable):
        if ring not in (RING_E, RING_S):
            raise ValueError(f"unknown ring flavour {ring!r}")
        self.ring = ring
        self.n = n
        if ring == RING_E:
            norm = []
            for g in gens:
                g = int(g)
                if g <= 0 or g >> n:
                    raise ValueError("generator support outside [n] or empty")
                norm.append(g)
            norm.sort(key=lambda m: (m.bit_count(), subset_key(m)))
            self.gens: tuple = tuple(norm)
            for a, b in combinations_pairs(self.gens):
                if a & b == a:
                    raise ValueError("generators are not divisibility-minimal")
        else:
            norm = []
            for g in gens:
                g = tuple(int(x) for x in g)
                if len(g) != n or any(x < 0 for x in g):
                    raise ValueError("bad exponent vector")
                if sum(g) == 0:
                    raise ValueError("unit generator (degree 0)")
                norm.append(g)
            norm.sort(key=lambda e: (sum(e), exp_expansion(e)))
            self.gens = tuple(norm)
            for a, b in combinations_pairs(self.gens):
                if exp_divides(a, b):
                    raise ValueError("generators are not divisibility-minimal")
        self._members: dict = {}

    @classmethod
    def minimalize(cls, ring: str, n: int, gens: Iterable) -> "MonomialIdeal":
        """Divisibility-minimal subset of the given monomials; the result does
        not depend on input order."""
        if ring == RING_E:
            masks = sorted({int(g) for g in gens}, key=lambda m: m.bit_count())
            if any(m == 0 for m in masks):
                raise ValueError("unit generator (degree 0)")
            kept: list[int] = []
            for m in masks:
                if not any(k & m == k for k in kept):
                    kept.append(m)
            return cls(RING_E, n, kept)
        exps = sorted({tuple(int(x) for x in g) for g in gens}, key=sum)
        if any(sum(e) == 0 for e in exps):
            raise ValueError("unit generator (degree 0)")
        kept_e: list[tuple[int, ...]] = []
        for e in exps:
            if not any(exp_divides(k, e) for k in kept_e):
                kept_e.append(e)
        return cls(RING_S, n, kept_e)

    @classmethod
    def from_vertex_lists(cls, ring: str, n: int, gens: Iterable[Iterable[int]]) -> "MonomialIdeal":
        if ring == RING_E:
            return cls.minimalize(ring, n, (mask_from_vertices(g, n) for g in gens))
        return cls.minimalize(ring, n, (exp_from_vertices(g, n) for g in gens))

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_squarefree(self) -> bool:
        if self.ring == RING_E:
            return True
        return all(all(x <= 1 for x in g) for g in self.gens)

    def gen_degrees(self) -> tuple[int, ...]:
        if self.ring == RING_E:
            return tuple(g.bit_count() for g in self.gens)
        return tuple(sum(g) for g in self.gens)

    def squarefree_masks(self) -> tuple[int, ...]:
        """Generators as supports; only valid for squarefree ideals."""
        if self.ring == RING_E:
            return self.gens
        if not self.is_squarefree:
            raise ValueError("ideal has non-squarefree generators")
        out = []
        for g in self.gens:
            m = 0
            for v, e in enumerate(g):
                if e:
                    m |= 1 << v
            out.append(m)
        return tuple(out)

    def contains_mask(self, mask: int) -> bool:
        if self.ring != RING_E:
            raise ValueError("mask membership is an exterior-ring operation")
        return any(g & mask == g for g in self.gens)

    def members_of_degree(self, d: int) -> frozenset:
        """Degree-d monomials lying in the ideal (masks for E, exps for S)."""
        cached = self._members.get(d)
        if cached is not None:
            return cached
        if self.ring == RING_E:
            masks, _ = degree_masks(self.n, d)
            out = frozenset(m for m in masks if any(g & m == g for g in self.gens))
        else:
            exps, _ = degree_exps(self.n, d)
            out = frozenset(e for e in exps if any(exp_divides(g, e) for g in self.gens))
        self._members[d] = out
        return out

    def contains_exp(self, exp: tuple[int, ...]) -> bool:
        if self.ring != RING_S:
            raise ValueError("exponent membership is a polynomial-ring operation")
        return any(exp_divides(g, exp) for g in self.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return (self.ring, self.n, self.gens) == (other.ring, other.n, other.gens)

    def __hash__(self):
        return hash((self.ring, self.n, self.gens))

    def __repr__(self):
        if self.ring == RING_E:
            gens = ", ".join("".join(f"e{v}" for v in vertices_of_mask(g)) for g in self.gens)
        else:
            gens = ", ".join(
                "*".join(f"x{v}" for v in exp_expansion(g)) for g in self.gens
            )
        return f"MonomialIdeal({self.ring}, n={self.n}, ({gens}))"


def combinations_pairs(items):
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            yield a, b


# ---------------------------------------------------------------------------
# stability predicates (generator-level checks; equivalent to quantifying
# over all monomials of the ideal, since exchanges factor through generators)
# ---------------------------------------------------------------------------


class StabilityFlags(NamedTuple):
    stable: bool
    strongly_stable: bool
    squarefree_stable: bool


def _mask_stable(gens: tuple[int, ...], n: int) -> bool:
    def member(m):
        return any(g & m == g for g in gens)

    for g in gens:
        low = g & -g
        rest = g ^ low
        for i in range(low.bit_length() + 1, n + 1):
            bit = 1 << (i - 1)
            if g & bit:
                continue
            if not member(rest | bit):
                return False
    return True


def _mask_strongly_stable(gens: tuple[int, ...], n: int) -> bool:
    def member(m):
        return any(g & m == g for g in gens)

    for g in gens:
        m = g
        while m:
            low = m & -m
            j = low.bit_length()
            for i in range(j + 1, n + 1):
                bit = 1 << (i - 1)
                if g & bit:
                    continue
                if not member((g ^ low) | bit):
                    return False
            m ^= low
    return True


def _exp_stable(ideal: MonomialIdeal) -> bool:
    for g in ideal.gens:
        mn = next(v for v, e in enumerate(g) if e)
        for i in range(mn + 1, ideal.n):
            ex = list(g)
            ex[mn] -= 1
            ex[i] += 1
            if not ideal.contains_exp(tuple(ex)):
                return False
    return True


def _exp_strongly_stable(ideal: MonomialIdeal) -> bool:
    for g in ideal.gens:
        for j, e in enumerate(g):
            if not e:
                continue
            for i in range(j + 1, ideal.n):
                ex = list(g)
                ex[j] -= 1
                ex[i] += 1
                if not ideal.contains_exp(tuple(ex)):
                    return False
    return True


def stability_flags(ideal: MonomialIdeal) -> StabilityFlags:
    """(stable, strongly_stable, squarefree_stable), min-based convention."""
    if ideal.is_zero:
        return StabilityFlags(True, True, True)
    if ideal.ring == RING_E or ideal.is_squarefree:
        masks = ideal.squarefree_masks()
        st = _mask_stable(masks, ideal.n)
        sst = _mask_strongly_stable(masks, ideal.n)
        return StabilityFlags(st, sst, st)
    st = _exp_stable(ideal)
    sst = _exp_strongly_stable(ideal)
    return StabilityFlags(st, sst, False)


class StableInvariants(NamedTuple):
    depth_E: Optional[int] = None
    depth_S: Optional[int] = None
    reg_S: Optional[int] = None


def stable_invariants(ideal: MonomialIdeal) -> StableInvariants:
    """Closed-form depth/regularity for (squarefree) stable ideals.

    Exterior flavour: depth of E/J is  min{min(u) : u in G(J)} - 1.
    Squarefree flavour in S:
        depth of S/I is  min{min(u) + deg(u) : u in G(I)} - 2,
        regularity of S/I is  max{deg u : u in G(I)} - 1.
    The zero ideal has depth n and regularity 0 by convention.
    """
    n = ideal.n
    if ideal.is_zero:
        if ideal.ring == RING_E:
            return StableInvariants(depth_E=n)
        return StableInvariants(depth_S=n, reg_S=0)
    flags = stability_flags(ideal)
    if ideal.ring == RING_E:
        if not flags.stable:
            raise StabilityViolation("ideal is not stable")
        mins = [(g & -g).bit_length() for g in ideal.gens]
        return StableInvariants(depth_E=min(mins) - 1)
    if not flags.squarefree_stable:
        raise StabilityViolation("ideal is not squarefree stable")
    masks = ideal.squarefree_masks()
    mins = [(g & -g).bit_length() for g in masks]
    degs = [g.bit_count() for g in masks]
    return StableInvariants(
        depth_S=min(m + d for m, d in zip(mins, degs)) - 2,
        reg_S=max(degs) - 1,
    )


# ---------------------------------------------------------------------------
# Betti tables
# ---------------------------------------------------------------------------


class BettiTable:
    """Sparse graded Betti numbers; the value at key (i, j) is beta_{i, i+j}."""

    __slots__ = ("data",)

    def __init__(self, entries=()):
        data = dict(entries)
        self.data = {k: int(v) for k, v in data.items() if v}

    def entry(self, i: int, j: int) -> int:
        return self.data.get((i, j), 0)

    def items_sorted(self):
        return sorted(self.data.items())

    def projdim(self) -> int:
        if not self.data:
            raise ValueError("empty Betti table")
        return max(i for i, _ in self.data)

    def reg(self) -> int:
        if not self.data:
            raise ValueError("empty Betti table")
        return max(j for _, j in self.data)

    def total(self, i: int) -> int:
        return sum(v for (ii, _), v in self.data.items() if ii == i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.data == other.data

    def __hash__(self):
        return hash(frozenset(self.data.items()))

    def __repr__(self):
        return f"BettiTable({self.items_sorted()})"

    def render(self) -> str:
        """Macaulay-style diagram: rows are j, columns are i."""
        if not self.data:
            return "(empty table)"
        imax = self.projdim()
        jmax = self.reg()
        head = "      " + "".join(f"{i:>6}" for i in range(imax + 1))
        lines = [head]
        for j in range(jmax + 1):
            row = [f"{j:>4}: "]
            for i in range(imax + 1):
                v = self.entry(i, j)
                row.append(f"{v if v else '.':>6}")
            lines.append("".join(row))
        return "\n".join(lines)

    def machine(self) -> list[list[int]]:
        return [[i, j, v] for (i, j), v in self.items_sorted()]


def betti_S_eliahou_kervaire(ideal: MonomialIdeal) -> BettiTable:
    """Betti table of S/I for squarefree stable I, in closed form.

    beta_{i,i+j}(S/I) = sum over degree-(j+1) generators u of
    C(n - min(u) - j, i - 1), for i >= 1; beta_{0,0} = 1.

    Exterior ideals are accepted and read as their squarefree twin in S.
    """
    n = ideal.n
    entries: dict = {(0, 0): 1}
    if ideal.is_zero:
        return BettiTable(entries)
    if not stability_flags(ideal).squarefree_stable:
        raise StabilityViolation("Eliahou-Kervaire needs a squarefree stable ideal")
    for g in ideal.squarefree_masks():
        j = g.bit_count() - 1
        mn = (g & -g).bit_length()
        top = n - mn - j
        for i in range(1, top + 2):
            c = comb(top, i - 1) if 0 <= i - 1 <= top else 0
            if c:
                entries[(i, j)] = entries.get((i, j), 0) + c
    return BettiTable(entries)


def depth_S_via_auslander_buchsbaum(table: BettiTable, n: int) -> int:
    """n minus the projective dimension read off a full Betti table of S/I."""
    return n - table.projdim()


# ---------------------------------------------------------------------------
# Koszul oracle: Tor ranks degree by degree, multigraded block decomposition
# ---------------------------------------------------------------------------


def koszul_betti_oracle(
    ideal: MonomialIdeal, field: PrimeField, i_max: int, d_max: int
) -> BettiTable:
    """beta_{i,i+j}(S/I) for i <= i_max and i+j <= d_max, by brute force.

    Tensors the Koszul complex on x_1..x_n with S/I and takes ranks of the
    differentials.  Everything is N^n-graded, so each multidegree gives an
    independent small block; ranks are summed across blocks.
    """
    if ideal.ring != RING_S:
        raise ValueError("the Koszul oracle runs over the polynomial ring")
    n = ideal.n
    if n > KOSZUL_MAX_VARS:
        raise SizeLimit(f"Koszul oracle capped at {KOSZUL_MAX_VARS} variables")
    p = field.p
    std = {}
    for d in range(d_max + 1):
        exps, _ = degree_exps(n, d)
        std[d] = [e for e in exps if not any(exp_divides(g, e) for g in ideal.gens)]
    std_sets = {d: set(v) for d, v in std.items()}

    entries: dict = {}
    for q in range(d_max + 1):
        # group the basis (T, m) of the whole strand by multidegree
        blocks: dict = {}
        top_i = min(i_max + 1, n, q)
        for i in range(top_i + 1):
            if q - i > d_max:
                continue
            for m in std[q - i]:
                for tverts in _subset_masks(n, i):
                    c = list(m)
                    t = tverts
                    while t:
                        low = t & -t
                        c[low.bit_length() - 1] += 1
                        t ^= low
                    blocks.setdefault(tuple(c), []).append((i, tverts, m))
        ranks_at_q: dict = {}
        cols_at_q: dict = {}
        for c, elems in blocks.items():
            by_i: dict = {}
            for i, t, m in elems:
                by_i.setdefault(i, []).append((t, m))
            for i, cols in by_i.items():
                cols_at_q[i] = cols_at_q.get(i, 0) + len(cols)
                rows = by_i.get(i - 1)
                if not rows or i == 0:
                    continue
                row_index = {tm: k for k, tm in enumerate(rows)}
                mat = []
                for t, m in cols:
                    col = [0] * len(rows)
                    tt = t
                    while tt:
                        low = tt & -tt
                        v = low.bit_length() - 1
                        m2 = list(m)
                        m2[v] += 1
                        m2 = tuple(m2)
                        if m2 in std_sets[sum(m2)]:
                            pos = (t & (low - 1)).bit_count()
                            sign = 1 if pos % 2 == 0 else p - 1
                            col[row_index[(t ^ low, m2)]] = sign
                        tt ^= low
                    mat.append(col)
                r = rank_rows(mat, len(rows), p)
                ranks_at_q[i] = ranks_at_q.get(i, 0) + r
        for i in range(min(i_max, n, q) + 1):
            h = cols_at_q.get(i, 0) - ranks_at_q.get(i, 0) - ranks_at_q.get(i + 1, 0)
            if h:
                entries[(i, q - i)] = h
    return BettiTable(entries)


@lru_cache(maxsize=None)
def _subset_masks(n: int, k: int) -> tuple[int, ...]:
    from itertools import combinations

    return tuple(
        sum(1 << (v - 1) for v in c) for c in combinations(range(1, n + 1), k)
    )


# ---------------------------------------------------------------------------
# graded quotient dimensions
# ---------------------------------------------------------------------------


def quotient_dim_degree(
    ideal: MonomialIdeal, coordinate_prefix: Iterable[int], d: int
) -> int:
    """Number of degree-d monomials outside the ideal avoiding the prefix
    variables (squarefree monomials for E, multisets for S)."""
    raw = list(coordinate_prefix)
    prefix = set(raw)
    if len(prefix) != len(raw):
        raise ValueError("prefix indices must be distinct")
    if ideal.ring == RING_E:
        if d > ideal.n:
            return 0
        pmask = 0
        for v in prefix:
            pmask |= 1 << (v - 1)
        members = ideal.members_of_degree(d)
        masks, _ = degree_masks(ideal.n, d)
        return sum(1 for m in masks if not m & pmask and m not in members)
    allowed = [v for v in range(1, ideal.n + 1) if v not in prefix]
    count = 0
    for expansion in combinations_with_replacement(allowed, d):
        e = [0] * ideal.n
        for v in expansion:
            e[v - 1] += 1
        if not ideal.contains_exp(tuple(e)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# bridges between complexes and squarefree ideals
# ---------------------------------------------------------------------------


def face_ideal(cx: SimplicialComplex, ring: str = RING_E) -> MonomialIdeal:
    """The (exterior or Stanley-Reisner) face ideal: minimal non-faces."""
    masks = cx.minimal_nonfaces()
    if ring == RING_E:
        return MonomialIdeal(RING_E, cx.n, masks)
    return MonomialIdeal(RING_S, cx.n, [_mask_to_exp(m, cx.n) for m in masks])


def as_symmetric_squarefree(ideal: MonomialIdeal) -> MonomialIdeal:
    """Reread a squarefree ideal in the polynomial ring (same supports)."""
    if ideal.ring == RING_S:
        return ideal
    return MonomialIdeal(
        RING_S, ideal.n, [_mask_to_exp(m, ideal.n) for m in ideal.gens]
    )


def _mask_to_exp(mask: int, n: int) -> tuple[int, ...]:
    return tuple(1 if mask >> v & 1 else 0 for v in range(n))


def complex_of_ideal(ideal: MonomialIdeal) -> SimplicialComplex:
    """Faces are the squarefree monomials outside the ideal."""
    if ideal.ring != RING_E:
        raise ValueError("complexes correspond to exterior face ideals")
    faces = [
        m for m in range(1 << ideal.n)
        if not any(g & m == g for g in ideal.gens)
    ]
    return SimplicialComplex(ideal.n, faces)


# ---------------------------------------------------------------------------
# file format: "ring E|S", "n <int>", then "g <i1> <i2> ..." generator lines
# ---------------------------------------------------------------------------


def parse_ideal(text: str) -> MonomialIdeal:
    ring = None
    n = None
    gens: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "ring":
            if ring is not None:
                raise ParseError(f"line {lineno}: duplicate ring line")
            if len(parts) != 2 or parts[1] not in (RING_E, RING_S):
                raise ParseError(f"line {lineno}: expected 'ring E' or 'ring S'")
            ring = parts[1]
        elif parts[0] == "n":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate n line")
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'n <int>'")
            n = int(parts[1])
        elif parts[0] == "g":
            try:
                vs = [int(x) for x in parts[1:]]
            except ValueError:
                raise ParseError(f"line {lineno}: bad variable index") from None
            if not vs:
                raise ParseError(f"line {lineno}: unit generator (degree 0)")
            gens.append(vs)
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    if ring is None or n is None:
        raise ParseError("ideal file needs both a ring line and an n line")
    try:
        if ring == RING_E:
            for vs in gens:
                if len(set(vs)) != len(vs):
                    raise ParseError("repeated variable in an exterior generator")
        return MonomialIdeal.from_vertex_lists(ring, n, gens)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_ideal_file(path) -> MonomialIdeal:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ideal(fh.read())


def format_ideal(ideal: MonomialIdeal) -> str:
    lines = [f"ring {ideal.ring}", f"n {ideal.n}"]
    for g in ideal.gens:
        if ideal.ring == RING_E:
            lines.append("g " + " ".join(str(v) for v in vertices_of_mask(g)))
        else:
            lines.append("g " + " ".join(str(v) for v in exp_expansion(g)))
    return "\n".join(lines) + "\n"

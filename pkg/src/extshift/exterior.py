"""Squarefree exterior monomials on [n] and the two orders used everywhere.

Supports are machine-word bitmasks: bit ``i-1`` set means variable ``e_i``
divides the monomial.  Wedge signs are inversion counts computed with masked
popcounts, which dominate span construction and therefore stay branch-light.

Both comparisons below reduce to one key: for equal-cardinality subsets the
graded reverse lexicographic order on monomials (with e_1 < ... < e_n) and
the set order "A < B iff min(A xor B) lies in A" induce the *same* total
order, realised by comparing ascending vertex tuples lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple, Optional

MAX_VARS = 63  # supports are single machine words


def mask_from_vertices(vertices: Iterable[int], n: int) -> int:
    m = 0
    for v in vertices:
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} outside [1, {n}]")
        m |= 1 << (v - 1)
    return m


def vertices_of_mask(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def mask_str(mask: int) -> str:
    """Set rendering ``{i,j,...}`` used by the CLI."""
    return "{" + ",".join(str(v) for v in vertices_of_mask(mask)) + "}"


@dataclass(frozen=True)
class ExtMonomial:
    """A squarefree exterior monomial e_F, F a subset of [n]."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise ValueError(f"n must be in [0, {MAX_VARS}]")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError("support outside [n]")

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return vertices_of_mask(self.mask)

    def min_index(self) -> int:
        """min(u); raises on the unit monomial."""
        if self.mask == 0:
            raise ValueError("unit monomial has no minimal variable")
        return (self.mask & -self.mask).bit_length()

    def __str__(self):
        if self.mask == 0:
            return "1"
        return "".join(f"e{v}" for v in self.support)


class SignedMonomial(NamedTuple):
    sign: int
    monomial: Optional[ExtMonomial]


def wedge_sign(mask_a: int, mask_b: int) -> int:
    """Sign of e_A ^ e_B: 0 on overlap, else (-1)^{inversions}."""
    if mask_a & mask_b:
        return 0
    inv = 0
    b = mask_b
    while b:
        low = b & -b
        inv += (mask_a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if inv & 1 else 1


def wedge(a: ExtMonomial, b: ExtMonomial) -> SignedMonomial:
    """Signed product e_A ^ e_B, normalised to ascending index order."""
    if a.n != b.n:
        raise ValueError(f"ambient mismatch: {a.n} != {b.n}")
    s = wedge_sign(a.mask, b.mask)
    if s == 0:
        return SignedMonomial(0, None)
    return SignedMonomial(s, ExtMonomial(a.n, a.mask | b.mask))


def subset_key(mask: int) -> tuple[int, ...]:
    """Sort key: larger key = larger monomial in both orders below."""
    return vertices_of_mask(mask)


def cmp_rlex(a: ExtMonomial, b: ExtMonomial) -> int:
    """Compare equal-degree monomials in reverse lex with e_1 < ... < e_n.

    Returns -1, 0 or 1.  For A != B:  e_A > e_B  iff  min(A xor B) in B.
    """
    if a.n != b.n:
        raise ValueError("ambient mismatch")
    if a.degree != b.degree:
        raise ValueError("cmp_rlex compares equal degrees only")
    ka, kb = subset_key(a.mask), subset_key(b.mask)
    return (ka > kb) - (ka < kb)


def cmp_lex_sets(a: Iterable[int], b: Iterable[int]) -> int:
    """Set order: A < B iff min of the symmetric difference lies in A."""
    ta, tb = tuple(sorted(a)), tuple(sorted(b))
    if len(ta) != len(tb):
        raise ValueError("cmp_lex_sets compares equal sizes only")
    return (ta > tb) - (ta < tb)


@lru_cache(maxsize=None)
def degree_masks(n: int, d: int) -> tuple[tuple[int, ...], dict]:
    """All degree-d supports, descending in the monomial order, plus the
    mask -> column index map.  This fixed enumeration is the column order of
    every span matrix."""
    if not 0 <= d <= n:
        raise ValueError(f"degree {d} outside [0, {n}]")
    masks = [mask_from_vertices(c, n) for c in combinations(range(1, n + 1), d)]
    masks.sort(key=subset_key, reverse=True)
    return tuple(masks), {m: i for i, m in enumerate(masks)}


def monomials_of_degree(n: int, d: int) -> tuple[ExtMonomial, ...]:
    """Degree-d monomials, strictly descending in cmp_rlex."""
    masks, _ = degree_masks(n, d)
    return tuple(ExtMonomial(n, m) for m in masks)


def subsets_ascending(n: int, d: int) -> tuple[int, ...]:
    """Degree-d supports in ascending set order (shifting processes these)."""
    masks, _ = degree_masks(n, d)
    return tuple(reversed(masks))

"""Cartan complexes with values in a squarefree quotient E/J.

The homological basis at degree i is divided-power multi-indices a with
|a| = i paired with standard monomials of the quotient; the differential
sends x^(a) (x) m to the sum over positive slots l of x^(a - e_l) (x) v_l m.
Divided-power binomials never enter the differential, so all matrices have
entries that are products of sequence coefficients and wedge signs.

Betti numbers over E are full-sequence Cartan homology dimensions.  The
public ``betti_E`` draws random transforms under the trials protocol; the
coordinate-sequence table below computes the same numbers (any basis of the
degree-one part resolves the residue field), block-decomposed along the fine
grading so that desk-scale sweeps stay fast.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import DependentSequence, GenericityFailure, SizeLimit
from .generic import GenericContext
from .exterior import degree_masks, wedge_sign
from .ideals import RING_E, BettiTable, MonomialIdeal
from .linalg import MatrixFp, PrimeField, rank, rank_rows

BETTI_MAX_VARS = 6
BETTI_MAX_I = 6
BETTI_MAX_CELLS = 250_000


class QuotientBasis:
    """Coordinates for one graded piece of E/J (J a monomial ideal) or of
    E/(J + span of explicit forms), via the echelon form of the span."""

    __slots__ = ("n", "degree", "p", "masks", "index", "_pivot_rows", "_pivot_cols")

    def __init__(self, n, degree, p, masks, index, pivot_rows=None, pivot_cols=None):
        self.n = n
        self.degree = degree
        self.p = p
        self.masks = masks            # standard monomials, descending order
        self.index = index            # mask -> coordinate position
        self._pivot_rows = pivot_rows  # echelon rows of the span (None: monomial)
        self._pivot_cols = pivot_cols

    @classmethod
    def monomial(cls, ideal: MonomialIdeal, d: int, field: PrimeField) -> "QuotientBasis":
        members = ideal.members_of_degree(d)
        all_masks, _ = degree_masks(ideal.n, d)
        std = tuple(m for m in all_masks if m not in members)
        return cls(ideal.n, d, field.p, std, {m: i for i, m in enumerate(std)})

    @classmethod
    def from_span(cls, n: int, d: int, field: PrimeField, rows: Sequence[Sequence[int]]) -> "QuotientBasis":
        all_masks, _ = degree_masks(n, d)
        width = len(all_masks)
        if rows:
            from .linalg import rref

            r, pivots = rref(MatrixFp(list(rows), field.p))
            prow = [r.a[k].tolist() for k in range(len(pivots))]
        else:
            pivots, prow = (), []
        pivset = set(pivots)
        std_pos = tuple(c for c in range(width) if c not in pivset)
        std = tuple(all_masks[c] for c in std_pos)
        return cls(
            n, d, field.p, std, {m: i for i, m in enumerate(std)},
            pivot_rows=prow, pivot_cols=tuple(pivots),
        )

    @property
    def dim(self) -> int:
        return len(self.masks)

    def coords(self, vec: Sequence[int]) -> list[int]:
        """Quotient coordinates of a full degree-d coefficient vector."""
        _, full_index = degree_masks(self.n, self.degree)
        v = list(vec)
        if self._pivot_rows is not None:
            p = self.p
            for pc, row in zip(self._pivot_cols, self._pivot_rows):
                c = v[pc]
                if c:
                    v = [(x - c * y) % p for x, y in zip(v, row)]
        return [v[full_index[m]] for m in self.masks]


def quotient_basis(ideal: MonomialIdeal, d: int, field: PrimeField) -> QuotientBasis:
    """Standard-monomial coordinates of (E/J)_d."""
    if ideal.ring != RING_E:
        raise ValueError("Cartan machinery lives over the exterior algebra")
    if not 0 <= d <= ideal.n:
        raise ValueError(f"degree {d} outside [0, {ideal.n}]")
    return QuotientBasis.monomial(ideal, d, field)


@lru_cache(maxsize=None)
def compositions(r: int, total: int) -> tuple[tuple[int, ...], ...]:
    """All a in N^r with |a| = total, in a fixed deterministic order."""
    if r == 0:
        return ((),) if total == 0 else ()
    if r == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(r - 1, total - first):
            out.append((first,) + rest)
    return tuple(out)


def _check_sequence(vs: Sequence[Sequence[int]], n: int, p: int) -> None:
    if not 1 <= len(vs) <= n:
        raise ValueError("sequence length must be in [1, n]")
    if any(len(v) != n for v in vs):
        raise ValueError("sequence entries must be coefficient vectors of length n")
    if rank(MatrixFp([list(v) for v in vs], p)) != len(vs):
        raise DependentSequence("sequence of linear forms is K-linearly dependent")


def _mult_columns(
    ideal: MonomialIdeal, form: Sequence[int], d: int, field: PrimeField,
    qb_from: QuotientBasis, qb_to: QuotientBasis,
) -> list[list[tuple[int, int]]]:
    """Sparse columns of multiplication by a form: (E/J)_d -> (E/J)_{d+1}."""
    p = field.p
    cols = []
    for m in qb_from.masks:
        col = []
        for l, c in enumerate(form):
            if not c:
                continue
            bit = 1 << l
            if m & bit:
                continue
            tgt = qb_to.index.get(m | bit)
            if tgt is None:  # image lies in J
                continue
            s = -c if (m & (bit - 1)).bit_count() & 1 else c
            col.append((tgt, s % p))
        cols.append(col)
    return cols


def cartan_differential(
    ideal: MonomialIdeal, vs: Sequence[Sequence[int]], i: int, j: int, field: PrimeField
) -> MatrixFp:
    """Matrix of the i-th differential in internal degree j, in the divided
    power basis; columns are C_i, rows are C_{i-1}."""
    _check_sequence(vs, ideal.n, field.p)
    r = len(vs)
    if i < 1:
        raise ValueError("the differential starts at homological degree 1")
    qb_from = quotient_basis(ideal, j - i, field) if 0 <= j - i <= ideal.n else None
    qb_to = quotient_basis(ideal, j - i + 1, field) if 0 <= j - i + 1 <= ideal.n else None
    dom_comp = compositions(r, i)
    cod_comp = compositions(r, i - 1)
    dom_dim = len(dom_comp) * (qb_from.dim if qb_from else 0)
    cod_dim = len(cod_comp) * (qb_to.dim if qb_to else 0)
    mat = MatrixFp.zeros(cod_dim, dom_dim, field.p)
    if dom_dim == 0 or cod_dim == 0:
        return mat
    cod_index = {a: k for k, a in enumerate(cod_comp)}
    mults = [
        _mult_columns(ideal, v, j - i, field, qb_from, qb_to) for v in vs
    ]
    a_arr = mat.a
    qdim_to = qb_to.dim
    for ai, a in enumerate(dom_comp):
        base_col = ai * qb_from.dim
        for l in range(r):
            if a[l] == 0:
                continue
            a2 = a[:l] + (a[l] - 1,) + a[l + 1:]
            base_row = cod_index[a2] * qdim_to
            cols = mults[l]
            for s, col in enumerate(cols):
                for tgt, c in col:
                    a_arr[base_row + tgt, base_col + s] = (
                        a_arr[base_row + tgt, base_col + s] + c
                    ) % field.p
    return mat


def cartan_homology_dim(
    ideal: MonomialIdeal, vs: Sequence[Sequence[int]], i: int, j: int, field: PrimeField
) -> int:
    """dim of the i-th Cartan homology of the sequence in internal degree j."""
    _check_sequence(vs, ideal.n, field.p)
    r = len(vs)
    qb = quotient_basis(ideal, j - i, field) if 0 <= j - i <= ideal.n else None
    dim_ci = len(compositions(r, i)) * (qb.dim if qb else 0)
    if dim_ci == 0:
        return 0
    rank_in = rank(cartan_differential(ideal, vs, i, j, field)) if i >= 1 else 0
    rank_out = rank(cartan_differential(ideal, vs, i + 1, j, field))
    return dim_ci - rank_in - rank_out


def betti_E(
    ideal: MonomialIdeal,
    ctx: GenericContext,
    i: int,
    j: int,
    *,
    max_cells: int = BETTI_MAX_CELLS,
) -> int:
    """Graded Betti number of E/J at homological degree i, internal degree j.

    Computed as full-sequence Cartan homology of random transform columns,
    recomputed per trial; disagreement raises GenericityFailure.
    """
    n = ideal.n
    if n > BETTI_MAX_VARS or i > BETTI_MAX_I:
        raise SizeLimit(
            f"betti_E guarded at n <= {BETTI_MAX_VARS}, i <= {BETTI_MAX_I}"
        )
    if i < 0 or j < 0:
        return 0
    if i == 0:
        return 1 if j == 0 else 0
    qdim = quotient_basis(ideal, j - i, ctx.field).dim if 0 <= j - i <= n else 0
    if comb(i + n - 1, i) * max(qdim, 1) > max_cells:
        raise SizeLimit("Cartan strand exceeds the configured cell budget")
    vals = []
    for t in range(ctx.trials):
        gamma = ctx.transform("betti-e", t, n)
        vs = [gamma.column(k) for k in range(n)]
        vals.append(cartan_homology_dim(ideal, vs, i, j, ctx.field))
    if any(v != vals[0] for v in vals[1:]):
        raise GenericityFailure("Cartan homology differs across trials")
    return vals[0]


# ---------------------------------------------------------------------------
# coordinate-sequence Betti table along the fine grading
# ---------------------------------------------------------------------------


def betti_E_table_coords(
    ideal: MonomialIdeal, i_max: int, j_max: int, field: PrimeField
) -> BettiTable:
    """beta^E_{i,i+j}(E/J) for i <= i_max, j <= j_max via the coordinate
    sequence e_1..e_n.

    The full-sequence Cartan complex computes Tor against the residue field
    for any basis, and with coordinates it splits into blocks indexed by the
    multidegree a + supp(F), each a small elimination.
    """
    if ideal.ring != RING_E:
        raise ValueError("exterior ideals only")
    n = ideal.n
    p = field.p
    std = {
        d: tuple(m for m in degree_masks(n, d)[0] if m not in ideal.members_of_degree(d))
        for d in range(n + 1)
    }
    entries = {}
    if i_max >= 0 and j_max >= 0:
        entries[(0, 0)] = 1  # cyclic quotient
    for q in range(1, i_max + j_max + 1):
        blocks: dict = {}
        top_i = min(i_max + 1, q)
        for i in range(max(0, q - n), top_i + 1):
            for a in compositions(n, i):
                for f in std[q - i]:
                    c = list(a)
                    mm = f
                    while mm:
                        low = mm & -mm
                        c[low.bit_length() - 1] += 1
                        mm ^= low
                    blocks.setdefault(tuple(c), {}).setdefault(i, []).append((a, f))
        cols_q: dict = {}
        ranks_q: dict = {}
        for by_i in blocks.values():
            for i, cols in by_i.items():
                cols_q[i] = cols_q.get(i, 0) + len(cols)
                if i == 0:
                    continue
                rows = by_i.get(i - 1)
                if not rows:
                    continue
                row_index = {af: k for k, af in enumerate(rows)}
                mat = []
                for a, f in cols:
                    col = [0] * len(rows)
                    for l in range(n):
                        if a[l] == 0:
                            continue
                        bit = 1 << l
                        if f & bit:
                            continue
                        a2 = a[:l] + (a[l] - 1,) + a[l + 1:]
                        k = row_index.get((a2, f | bit))
                        if k is None:  # image lands in J
                            continue
                        s = wedge_sign(bit, f)
                        col[k] = (col[k] + s) % p
                    mat.append(col)
                r = rank_rows(mat, len(rows), p)
                ranks_q[i] = ranks_q.get(i, 0) + r
        for i in range(min(i_max, q) + 1):
            j = q - i
            if j > j_max:
                continue
            h = cols_q.get(i, 0) - ranks_q.get(i, 0) - ranks_q.get(i + 1, 0)
            if h and not (i == 0 and j == 0):
                entries[(i, j)] = h
    return BettiTable(entries)


# ---------------------------------------------------------------------------
# transfer from symmetric Betti numbers, and complexity
# ---------------------------------------------------------------------------


def betti_E_from_betti_S(table_s: BettiTable, i: int, j: int) -> int:
    """beta^E_{i,i+j} of the exterior twin of a squarefree quotient, from the
    symmetric Betti table:  sum_k C(i+j-1, j+k-1) beta^S_{k,k+j}.

    For i = 0 the generator row carries over unchanged.
    """
    if i < 0 or j < 0:
        return 0
    if i == 0:
        return table_s.entry(0, j)
    total = 0
    for k in range(i + 1):
        b = j + k - 1
        if b < 0 or b > i + j - 1:
            continue
        total += comb(i + j - 1, b) * table_s.entry(k, j)
    return total


def betti_E_transfer_table(table_s: BettiTable, i_max: int, j_max: int) -> BettiTable:
    entries = {}
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            v = betti_E_from_betti_S(table_s, i, j)
            if v:
                entries[(i, j)] = v
    return BettiTable(entries)


def complexity_E(depth_e: int, n: int) -> int:
    """Polynomial growth rate of the exterior Betti numbers: n - depth."""
    if not 0 <= depth_e <= n:
        raise ValueError(f"depth {depth_e} outside [0, {n}]")
    return n - depth_e

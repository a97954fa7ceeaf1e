"""Annihilator numbers with respect to explicit and generic sequences, their
combinatorial descriptions, transfers to Betti numbers, the Cartan bound,
the non-minimality constructions and the depth-chain verifier.

Exterior annihilator numbers are computed two ways whenever a single entry is
requested: by the dimension arithmetic of graded quotients and by the direct
kernel-modulo-image of multiplication by the sequence element.  The two
derivations come from different parts of the theory and cross-validate sign
and convention choices; a mismatch is an internal hard error, never a value.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from math import comb
from typing import Optional, Sequence, Union

from .cartan import (
    QuotientBasis,
    betti_E_table_coords,
    cartan_differential,
    cartan_homology_dim,
    complexity_E,
    compositions,
    quotient_basis,
)
from .complexes import SimplicialComplex, is_nonacyclic
from .errors import (
    ConsistencyFailure,
    GenericityFailure,
    ParameterInfeasible,
    SizeLimit,
    StabilityViolation,
    VerificationFailure,
)
from .exterior import degree_masks, mask_from_vertices, vertices_of_mask
from .generic import GenericContext, exterior_shift, gin_rlex
from .ideals import (
    RING_E,
    RING_S,
    BettiTable,
    MonomialIdeal,
    as_symmetric_squarefree,
    betti_S_eliahou_kervaire,
    depth_S_via_auslander_buchsbaum,
    face_ideal,
    quotient_dim_degree,
    stability_flags,
    stable_invariants,
)
from .linalg import MatrixFp, PrimeField, RowReducer, rank, rank_rows


# ---------------------------------------------------------------------------
# sequence specifications and tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardPermutation:
    """The coordinate sequence e_{perm[0]}, e_{perm[1]}, ..."""

    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError("perm must be a permutation of 1..n")


@dataclass(frozen=True)
class TransformColumns:
    """The sequence read off the columns of an invertible transform."""

    gamma: MatrixFp


SequenceSpec = Union[StandardPermutation, TransformColumns]


def identity_perm(n: int) -> StandardPermutation:
    return StandardPermutation(tuple(range(1, n + 1)))


def adjacent_swap_perm(n: int, i: int) -> StandardPermutation:
    """1, ..., i-2, i, i-1, i+1, ..., n (positions i-1 and i exchanged)."""
    if not 2 <= i <= n:
        raise ValueError("swap needs 2 <= i <= n")
    order = list(range(1, n + 1))
    order[i - 2], order[i - 1] = order[i - 1], order[i - 2]
    return StandardPermutation(tuple(order))


class AnnihilatorTable:
    """Sparse map (i, j) -> alpha_{i,j}; rows i = 1..n (exterior) or
    1..n+1 (symmetric, last row carrying the generator degrees)."""

    __slots__ = ("ring", "n", "data")

    def __init__(self, ring: str, n: int, entries=()):
        self.ring = ring
        self.n = n
        self.data = {k: int(v) for k, v in dict(entries).items() if v}

    def entry(self, i: int, j: int) -> int:
        return self.data.get((i, j), 0)

    def row_total(self, i: int) -> int:
        return sum(v for (ii, _), v in self.data.items() if ii == i)

    def items_sorted(self):
        return sorted(self.data.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnnihilatorTable):
            return NotImplemented
        return (self.ring, self.n, self.data) == (other.ring, other.n, other.data)

    def __hash__(self):
        return hash((self.ring, self.n, frozenset(self.data.items())))

    def __repr__(self):
        return f"AnnihilatorTable({self.ring}, n={self.n}, {self.items_sorted()})"

    def render(self) -> str:
        if not self.data:
            return "(all annihilator numbers vanish)"
        imax = max(i for i, _ in self.data)
        jmax = max(j for _, j in self.data)
        head = "      " + "".join(f"{j:>6}" for j in range(jmax + 1))
        lines = [head]
        for i in range(1, imax + 1):
            row = [f"i={i:<3} "]
            for j in range(jmax + 1):
                v = self.entry(i, j)
                row.append(f"{v if v else '.':>6}")
            lines.append("".join(row))
        return "\n".join(lines)

    def machine(self) -> list[list[int]]:
        return [[i, j, v] for (i, j), v in self.items_sorted()]


# ---------------------------------------------------------------------------
# graded dimensions of prefix quotients
# ---------------------------------------------------------------------------


def _dims_coords_E(ideal: MonomialIdeal, perm: tuple[int, ...]) -> list[list[int]]:
    """dims[k][d] of E/(J + first k coordinates of the permutation)."""
    n = ideal.n
    dims = []
    for k in range(n + 1):
        prefix = perm[:k]
        dims.append([quotient_dim_degree(ideal, prefix, d) for d in range(n + 1)] + [0])
    return dims


def _form_row(n: int, bmask: int, form: Sequence[int], p: int, width: int, index) -> list[int]:
    """Coefficient row of e_B ^ (sum_l form_l e_l)."""
    row = [0] * width
    for l in range(n):
        c = form[l]
        if not c:
            continue
        bit = 1 << l
        if bmask & bit:
            continue
        if (bmask >> (l + 1)).bit_count() & 1:
            row[index[bmask | bit]] = (-c) % p
        else:
            row[index[bmask | bit]] = c % p
    return row


def _dims_transform_E(
    ideal: MonomialIdeal,
    gamma: MatrixFp,
    field: PrimeField,
    order: Optional[tuple[int, ...]] = None,
) -> list[list[int]]:
    """dims[k][d] of E/(J + first k transform columns), by span ranks.

    One elimination per degree: the member monomials seed unit pivots, then
    the multiples of each successive column are inserted and the rank is read
    after every segment.
    """
    n = ideal.n
    p = field.p
    cols = list(order) if order is not None else list(range(1, n + 1))
    forms = [gamma.column(c - 1) for c in cols]
    dims = [[0] * (n + 2) for _ in range(n + 1)]
    for k in range(n + 1):
        dims[k][0] = 1  # proper ideal plus linear forms has unit degree zero
    for d in range(1, n + 1):
        masks, index = degree_masks(n, d)
        width = len(masks)
        red = RowReducer(width, p)
        for m in ideal.members_of_degree(d):
            red.add_unit(index[m])
        dims[0][d] = width - red.rank
        below = degree_masks(n, d - 1)[0]
        for k in range(1, n + 1):
            for b in below:
                red.add(_form_row(n, b, forms[k - 1], p, width, index))
            dims[k][d] = width - red.rank
    return dims


def _alpha_from_dims(dims, i: int, j: int) -> int:
    return dims[i][j] - dims[i - 1][j + 1] + dims[i][j + 1]


def _table_from_dims(n: int, dims, j_max: int) -> AnnihilatorTable:
    entries = {}
    for i in range(1, n + 1):
        for j in range(j_max + 1):
            v = _alpha_from_dims(dims, i, j)
            if v:
                entries[(i, j)] = v
    return AnnihilatorTable(RING_E, n, entries)


def alpha_table_coords(
    ideal: MonomialIdeal, seq: Optional[StandardPermutation] = None
) -> AnnihilatorTable:
    """Exterior annihilator table for a coordinate sequence, by counting."""
    perm = seq.perm if seq is not None else tuple(range(1, ideal.n + 1))
    return _table_from_dims(ideal.n, _dims_coords_E(ideal, perm), ideal.n)


def alpha_table_transform(
    ideal: MonomialIdeal,
    gamma: MatrixFp,
    field: PrimeField,
    order: Optional[tuple[int, ...]] = None,
) -> AnnihilatorTable:
    """Exterior annihilator table for transform columns, by span ranks."""
    return _table_from_dims(
        ideal.n, _dims_transform_E(ideal, gamma, field, order), ideal.n
    )


# ---------------------------------------------------------------------------
# single entries with the independent homology cross-check
# ---------------------------------------------------------------------------


def _mult_map_dims_coords(
    ideal: MonomialIdeal, prefix: tuple[int, ...], v: int, j: int, p: int
) -> tuple[int, int]:
    """(kernel dim at j, image rank into degree j) of multiplication by e_v
    on E/(J + coordinate prefix)."""
    n = ideal.n
    pmask = mask_from_vertices(prefix, n)
    vbit = 1 << (v - 1)

    def basis(d):
        if not 0 <= d <= n:
            return []
        members = ideal.members_of_degree(d)
        return [m for m in degree_masks(n, d)[0] if not m & pmask and m not in members]

    def mult_rank(d):
        dom = basis(d)
        cod = basis(d + 1)
        if not dom or not cod:
            return 0, len(dom)
        idx = {m: k for k, m in enumerate(cod)}
        rows = []
        for m in dom:
            row = [0] * len(cod)
            if not m & vbit:
                tgt = idx.get(m | vbit)
                if tgt is not None:
                    row[tgt] = 1  # sign irrelevant for rank
            rows.append(row)
        return rank_rows(rows, len(cod), p), len(dom)

    r_j, dim_j = mult_rank(j)
    r_prev, _ = mult_rank(j - 1)
    return dim_j - r_j, r_prev


def alpha_E_sequence(
    ideal: MonomialIdeal, seq: SequenceSpec, i: int, j: int, field: PrimeField
) -> int:
    """alpha_{i,j} of E/J with respect to an explicit sequence.

    Dimension arithmetic and the direct homology of multiplication by the
    i-th element are both evaluated; they must agree.
    """
    n = ideal.n
    if not 1 <= i <= n:
        raise ValueError(f"sequence index {i} outside [1, {n}]")
    if isinstance(seq, StandardPermutation):
        if not 0 <= j <= n:
            return 0
        dims = _dims_coords_E(ideal, seq.perm)
        arith = _alpha_from_dims(dims, i, j)
        kdim, img = _mult_map_dims_coords(
            ideal, seq.perm[: i - 1], seq.perm[i - 1], j, field.p
        )
        direct = kdim - img
    else:
        gamma = seq.gamma
        if rank(gamma) != n:
            raise ValueError("transform is singular")
        if not 0 <= j <= n:
            return 0
        dims = _dims_transform_E(ideal, gamma, field)
        arith = _alpha_from_dims(dims, i, j)
        direct = _alpha_direct_transform(ideal, gamma, i, j, field)
    if arith != direct:
        raise ConsistencyFailure(
            f"annihilator routes disagree at (i={i}, j={j}): "
            f"dimension arithmetic {arith}, direct homology {direct}"
        )
    return arith


def _span_rows_prefix(
    ideal: MonomialIdeal, forms: Sequence[Sequence[int]], d: int, p: int
) -> list[list[int]]:
    n = ideal.n
    masks, index = degree_masks(n, d)
    width = len(masks)
    rows = []
    for m in ideal.members_of_degree(d):
        row = [0] * width
        row[index[m]] = 1
        rows.append(row)
    if d >= 1:
        for b in degree_masks(n, d - 1)[0]:
            for f in forms:
                rows.append(_form_row(n, b, f, p, width, index))
    return rows


def _alpha_direct_transform(
    ideal: MonomialIdeal, gamma: MatrixFp, i: int, j: int, field: PrimeField
) -> int:
    """ker/im of multiplication by column i on E/(J + first i-1 columns)."""
    n = ideal.n
    p = field.p
    forms = [gamma.column(k) for k in range(i - 1)]
    v = gamma.column(i - 1)

    bases = {}
    for d in (j - 1, j, j + 1):
        if 0 <= d <= n:
            bases[d] = QuotientBasis.from_span(
                n, d, field, _span_rows_prefix(ideal, forms, d, p)
            )

    def mult_rank(d):
        qb_from = bases.get(d)
        qb_to = bases.get(d + 1)
        if qb_from is None or not qb_from.dim:
            return 0, 0
        if qb_to is None or not qb_to.dim:
            return 0, qb_from.dim
        masks, index = degree_masks(n, d + 1)
        rows = []
        for m in qb_from.masks:
            rows.append(qb_to.coords(_form_row(n, m, v, p, len(masks), index)))
        return rank_rows(rows, qb_to.dim, p), qb_from.dim

    r_j, dim_j = mult_rank(j)
    r_prev, _ = mult_rank(j - 1)
    return (dim_j - r_j) - r_prev


# ---------------------------------------------------------------------------
# generic annihilator numbers
# ---------------------------------------------------------------------------


def alpha_E_generic(ideal: MonomialIdeal, ctx: GenericContext) -> AnnihilatorTable:
    """Generic exterior annihilator table.

    Computed on the generic initial ideal with the coordinate sequence, then
    recomputed on the ideal itself with independent random transform columns;
    all results must coincide.
    """
    gin = gin_rlex(ideal, ctx)
    table = alpha_table_coords(gin)
    for t in range(ctx.trials):
        gamma = ctx.transform("alpha-generic", t, ideal.n)
        redo = alpha_table_transform(ideal, gamma, ctx.field)
        if redo != table:
            raise GenericityFailure(
                "transform-column annihilator table differs from "
                "the coordinate table on the generic initial ideal"
            )
    return table


def alpha_from_standard_monomials(gin: MonomialIdeal, i: int, j: int) -> int:
    """Count of monomials e_F with deg F = j, min F > i, e_F outside the
    ideal and e_i e_F inside it.  Requires a strongly stable input."""
    if not stability_flags(gin).strongly_stable:
        raise StabilityViolation("standard-monomial description needs a "
                                 "strongly stable ideal")
    n = gin.n
    if not 1 <= i <= n:
        raise ValueError(f"index {i} outside [1, {n}]")
    if not 0 <= j <= n:
        return 0
    low = (1 << i) - 1
    bit = 1 << (i - 1)
    members_j = gin.members_of_degree(j)
    members_j1 = gin.members_of_degree(j + 1) if j + 1 <= n else frozenset()
    count = 0
    for m in degree_masks(n, j)[0]:
        if m & low:
            continue
        if m in members_j:
            continue
        if (m | bit) in members_j1:
            count += 1
    return count


def alpha_standard_monomials_table(gin: MonomialIdeal) -> AnnihilatorTable:
    n = gin.n
    entries = {}
    for i in range(1, n + 1):
        for j in range(n + 1):
            v = alpha_from_standard_monomials(gin, i, j)
            if v:
                entries[(i, j)] = v
    return AnnihilatorTable(RING_E, n, entries)


def alpha_complex(cx: SimplicialComplex, ctx: GenericContext) -> AnnihilatorTable:
    """Combinatorial annihilator table of a complex: faces F of the shifted
    complex with F disjoint from [i] and F + {i} not a face."""
    shifted = exterior_shift(cx, ctx)
    return alpha_complex_from_shifted(shifted)


def alpha_complex_from_shifted(shifted: SimplicialComplex) -> AnnihilatorTable:
    n = shifted.n
    entries = {}
    for i in range(1, n + 1):
        low = (1 << i) - 1
        bit = 1 << (i - 1)
        for f in shifted.faces:
            if f & low:
                continue
            if (f | bit) not in shifted.faces:
                j = f.bit_count()
                entries[(i, j)] = entries.get((i, j), 0) + 1
    return AnnihilatorTable(RING_E, n, entries)


def depth_from_alpha(table: AnnihilatorTable, n: int) -> int:
    """Largest r such that rows 1..r of the table vanish."""
    if table.ring != RING_E:
        raise ValueError("exterior tables only")
    r = 0
    while r < n and table.row_total(r + 1) == 0:
        r += 1
    return r


def betti_S_from_alpha(cx: SimplicialComplex, ctx: GenericContext) -> BettiTable:
    """Symmetric Betti table of the shifted Stanley-Reisner ring as a binomial
    combination of annihilator numbers; checked entrywise against the
    Eliahou-Kervaire table of the shifted face ideal."""
    shifted = exterior_shift(cx, ctx)
    gin = face_ideal(shifted)
    alpha = alpha_standard_monomials_table(gin)
    n = cx.n
    entries = {(0, 0): 1}
    for (l, j), a in alpha.data.items():
        top = n - l - j
        for i in range(1, top + 2):
            c = comb(top, i - 1) if 0 <= i - 1 <= top else 0
            if c:
                entries[(i, j)] = entries.get((i, j), 0) + c * a
    table = BettiTable(entries)
    ek = betti_S_eliahou_kervaire(gin)
    if table != ek:
        raise ConsistencyFailure(
            "annihilator combination and Eliahou-Kervaire tables disagree: "
            f"{table!r} vs {ek!r}"
        )
    return table


# ---------------------------------------------------------------------------
# Cartan-Betti upper bound
# ---------------------------------------------------------------------------


@dataclass
class BoundCheckEntry:
    i: int
    j: int
    r: int
    homology: int
    bound: int

    @property
    def equal(self) -> bool:
        return self.homology == self.bound


@dataclass
class BoundCheckReport:
    n: int
    entries: list[BoundCheckEntry]

    @property
    def all_equal(self) -> bool:
        return all(e.equal for e in self.entries)

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            tag = "equal" if e.equal else "strict"
            out.append(
                f"h_{{{e.i},{e.i + e.j}}}({e.r}) = {e.homology} <= {e.bound}  [{tag}]"
            )
        out.append(f"bound holds everywhere; equality everywhere: {self.all_equal}")
        return out

    def machine(self) -> dict:
        return {
            "entries": [[e.i, e.j, e.r, e.homology, e.bound] for e in self.entries],
            "all_equal": self.all_equal,
        }


def cartan_betti_bound_check(
    ideal: MonomialIdeal,
    ctx: GenericContext,
    i_max: int,
    j_max: int,
    r_values: Optional[Sequence[int]] = None,
) -> BoundCheckReport:
    """Check h_{i,i+j}(r) <= sum_k C(r+i-k-1, i-1) alpha_{k,j} over a window.

    The homology side uses random transform columns under the trials
    protocol for partial sequences; the full sequence is basis-independent
    and is computed with coordinates.  A bound violation is a hard error.
    """
    n = ideal.n
    alpha = alpha_E_generic(ideal, ctx)
    rs = list(r_values) if r_values is not None else list(range(1, n + 1))
    entries = []
    full_table = None
    for r in rs:
        if not 1 <= r <= n:
            raise ValueError(f"sequence length {r} outside [1, {n}]")
        if r == n:
            if full_table is None:
                full_table = betti_E_table_coords(ideal, i_max, j_max, ctx.field)
            h_of = lambda i, j: full_table.entry(i, j)  # noqa: E731
        else:
            h_of = _partial_homology_fn(ideal, ctx, r, i_max, j_max)
        for i in range(1, i_max + 1):
            for j in range(j_max + 1):
                h = h_of(i, j)
                bound = sum(
                    comb(r + i - k - 1, i - 1) * alpha.entry(k, j)
                    for k in range(1, r + 1)
                )
                if h > bound:
                    raise VerificationFailure(
                        f"Cartan bound violated at (i={i}, j={j}, r={r}): "
                        f"{h} > {bound}"
                    )
                entries.append(BoundCheckEntry(i, j, r, h, bound))
    return BoundCheckReport(n, entries)


def _partial_homology_fn(ideal, ctx, r, i_max, j_max):
    n = ideal.n
    tables = []
    for t in range(ctx.trials):
        gamma = ctx.transform("cartan-betti", t, n)
        vs = [gamma.column(k) for k in range(r)]
        vals = {}
        for i in range(1, i_max + 1):
            for j in range(j_max + 1):
                vals[(i, j)] = cartan_homology_dim(ideal, vs, i, i + j, ctx.field)
        tables.append(vals)
    if any(tb != tables[0] for tb in tables[1:]):
        raise GenericityFailure("partial Cartan homology differs across trials")
    return lambda i, j: tables[0][(i, j)]


# ---------------------------------------------------------------------------
# symmetric annihilator numbers
# ---------------------------------------------------------------------------


def _dims_coords_S(
    ideal: MonomialIdeal, perm: tuple[int, ...], d_top: int
) -> list[list[int]]:
    n = ideal.n
    dims = []
    for k in range(n + 1):
        prefix = perm[:k]
        dims.append([quotient_dim_degree(ideal, prefix, d) for d in range(d_top + 1)])
    return dims


def alpha_S_sequence(
    ideal: MonomialIdeal,
    seq: SequenceSpec,
    i: int,
    j: int,
    degree_cap: int,
    field: Optional[PrimeField] = None,
) -> int:
    """Symmetric annihilator number for an explicit sequence.

    Row n+1 returns the generator degrees of the module (for a cyclic
    quotient: 1 in degree zero).  Coordinate sequences count monomials;
    transform columns run span ranks under the degree cap.
    """
    n = ideal.n
    if ideal.ring != RING_S:
        raise ValueError("symmetric annihilator numbers live over S")
    if not 1 <= i <= n + 1:
        raise ValueError(f"sequence index {i} outside [1, {n + 1}]")
    if i == n + 1:
        return 1 if j == 0 else 0
    if j + 1 > degree_cap:
        raise ValueError("degree cap too small for the requested entry")
    if isinstance(seq, StandardPermutation):
        pre = seq.perm[: i - 1]
        pre_i = seq.perm[:i]
        dim_j = quotient_dim_degree(ideal, pre, j)
        dim_j1 = quotient_dim_degree(ideal, pre, j + 1)
        dim_mod = quotient_dim_degree(ideal, pre_i, j + 1)
        return dim_j - dim_j1 + dim_mod
    if field is None:
        raise ValueError("transform sequences need the field")
    dims = _dims_transform_S(ideal, seq.gamma, field, j + 1)
    return dims[i - 1][j] - dims[i - 1][j + 1] + dims[i][j + 1]


def _dims_transform_S(
    ideal: MonomialIdeal, gamma: MatrixFp, field: PrimeField, d_top: int
) -> list[list[int]]:
    from .ideals import degree_exps

    n = ideal.n
    p = field.p
    forms = [gamma.column(c) for c in range(n)]
    dims = [[0] * (d_top + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        dims[k][0] = 1
    for d in range(1, d_top + 1):
        exps, index = degree_exps(n, d)
        width = len(exps)
        members = ideal.members_of_degree(d)
        red = RowReducer(width, p)
        for m in members:
            red.add_unit(index[m])
        dims[0][d] = width - red.rank
        below = degree_exps(n, d - 1)[0]
        for k in range(1, n + 1):
            form = forms[k - 1]
            for b in below:
                row = [0] * width
                for l in range(n):
                    c = form[l]
                    if not c:
                        continue
                    e2 = b[:l] + (b[l] + 1,) + b[l + 1:]
                    row[index[e2]] = (row[index[e2]] + c) % p
                red.add(row)
            dims[k][d] = width - red.rank
    return dims


def alpha_S_table_coords(
    ideal: MonomialIdeal, seq: Optional[StandardPermutation], degree_cap: int
) -> AnnihilatorTable:
    n = ideal.n
    perm = seq.perm if seq is not None else tuple(range(1, n + 1))
    dims = _dims_coords_S(ideal, perm, degree_cap)
    entries = {(n + 1, 0): 1}
    for i in range(1, n + 1):
        for j in range(degree_cap):
            v = dims[i - 1][j] - dims[i - 1][j + 1] + dims[i][j + 1]
            if v:
                entries[(i, j)] = v
    return AnnihilatorTable(RING_S, n, entries)


def alpha_S_generic(
    ideal: MonomialIdeal, ctx: GenericContext, degree_cap: Optional[int] = None
) -> AnnihilatorTable:
    """Symmetric generic annihilator table: coordinate sequence on the
    (trials-validated) generic initial ideal, truncated at the degree cap.

    Beyond the cap only finitely many entries could be nonzero because a
    generic sequence is almost regular; the default cap of one past the
    largest generator degree of the initial ideal covers every entry the
    stable structure can produce."""
    if ideal.ring != RING_S:
        raise ValueError("symmetric tables live over S")
    if ideal.is_zero:
        cap = degree_cap if degree_cap is not None else 1
        return alpha_S_table_coords(ideal, None, cap)
    cap = degree_cap if degree_cap is not None else max(ideal.gen_degrees()) + 1
    gin = gin_rlex(ideal, ctx, degree_cap=cap)
    return alpha_S_table_coords(gin, None, cap)


# ---------------------------------------------------------------------------
# non-minimality constructions
# ---------------------------------------------------------------------------


@dataclass
class CounterexampleReport:
    ring: str
    n: int
    i: int
    j: int
    generic_at_i: int
    sequence_at_i: int
    generic_at_prev: int
    sequence_at_prev: int

    @property
    def ok(self) -> bool:
        return (
            self.generic_at_i > self.sequence_at_i
            and self.generic_at_prev < self.sequence_at_prev
        )

    def lines(self) -> list[str]:
        return [
            f"ring {self.ring}, n={self.n}, swap at position {self.i}, degree j={self.j}",
            f"alpha_({self.i},{self.j})  generic {self.generic_at_i}  >  "
            f"swapped {self.sequence_at_i}",
            f"alpha_({self.i - 1},{self.j})  generic {self.generic_at_prev}  <  "
            f"swapped {self.sequence_at_prev}",
            f"strict in both directions: {self.ok}",
        ]

    def machine(self) -> dict:
        return {
            "ring": self.ring,
            "n": self.n,
            "i": self.i,
            "j": self.j,
            "generic_at_i": self.generic_at_i,
            "sequence_at_i": self.sequence_at_i,
            "generic_at_prev": self.generic_at_prev,
            "sequence_at_prev": self.sequence_at_prev,
            "ok": self.ok,
        }


def counterexample_E(n: int, i: int, j: int, ctx: GenericContext) -> CounterexampleReport:
    """Generic annihilator numbers are not minimal: the ideal of all
    squarefree degree-(j+1) monomials in the top variables beats the generic
    sequence at position i-1 and loses at position i after one adjacent swap.
    """
    if i < 2:
        raise ParameterInfeasible("the adjacent swap needs i >= 2")
    if j < 1 or i + j > n:
        raise ParameterInfeasible(
            "need j >= 1 and i + j <= n for a nonzero construction"
        )
    gens = [
        mask_from_vertices(c, n)
        for c in _combinations(range(i, n + 1), j + 1)
    ]
    ideal = MonomialIdeal(RING_E, n, gens)
    generic = alpha_E_generic(ideal, ctx)
    swapped_seq = adjacent_swap_perm(n, i)
    swapped = alpha_table_coords(ideal, swapped_seq)
    # cross-check the four relevant entries by the dual-route evaluator
    for (ii, tab, seqspec) in (
        (i, generic, identity_perm(n)),
        (i - 1, generic, identity_perm(n)),
        (i, swapped, swapped_seq),
        (i - 1, swapped, swapped_seq),
    ):
        direct = alpha_E_sequence(ideal, seqspec, ii, j, ctx.field)
        if direct != tab.entry(ii, j):
            raise ConsistencyFailure(
                f"table and direct evaluation disagree at i={ii}, j={j}"
            )
    report = CounterexampleReport(
        RING_E, n, i, j,
        generic.entry(i, j), swapped.entry(i, j),
        generic.entry(i - 1, j), swapped.entry(i - 1, j),
    )
    if not report.ok:
        raise VerificationFailure(
            f"expected strict inequalities failed: {report.lines()}"
        )
    return report


def counterexample_S(n: int, i: int, j: int, ctx: GenericContext) -> CounterexampleReport:
    """Symmetric version: all degree-(j+1) monomials in the top variables."""
    if i < 2:
        raise ParameterInfeasible("the adjacent swap needs i >= 2")
    if not i <= j <= n:
        raise ParameterInfeasible("the construction assumes i <= j <= n")
    gens = []
    for c in combinations_with_replacement(range(i, n + 1), j + 1):
        e = [0] * n
        for v in c:
            e[v - 1] += 1
        gens.append(tuple(e))
    ideal = MonomialIdeal(RING_S, n, gens)
    cap = j + 2
    generic = alpha_S_generic(ideal, ctx, degree_cap=cap)
    swapped = alpha_S_table_coords(ideal, adjacent_swap_perm(n, i), cap)
    report = CounterexampleReport(
        RING_S, n, i, j,
        generic.entry(i, j), swapped.entry(i, j),
        generic.entry(i - 1, j), swapped.entry(i - 1, j),
    )
    if not report.ok:
        raise VerificationFailure(
            f"expected strict inequalities failed: {report.lines()}"
        )
    return report


def _combinations(rng, k):
    from itertools import combinations as _c

    return _c(rng, k)


# ---------------------------------------------------------------------------
# order invariance of generic sequences
# ---------------------------------------------------------------------------


@dataclass
class PermutationReport:
    n: int
    permutations_checked: int
    table: AnnihilatorTable
    note: str = (
        "generic order invariance verified over a finite prime field: "
        "the check is probabilistic, exact-field genericity is not certified"
    )

    def lines(self) -> list[str]:
        return [
            f"all {self.permutations_checked} orderings of one generic sequence "
            f"give the same annihilator table",
            self.note,
        ]

    def machine(self) -> dict:
        return {
            "n": self.n,
            "permutations_checked": self.permutations_checked,
            "table": self.table.machine(),
        }


def permutation_invariance_check(
    ideal: MonomialIdeal, ctx: GenericContext, n_cap: int = 5
) -> PermutationReport:
    """Every ordering of one generic sequence yields the generic table.

    Dimensions of prefix quotients depend only on the prefix as a set, so the
    2^n subset dimensions are computed once and the n! tables assembled from
    them.
    """
    n = ideal.n
    if n > n_cap:
        raise SizeLimit(f"permutation sweep capped at n <= {n_cap}")
    reference = alpha_E_generic(ideal, ctx)
    gamma = ctx.transform("perm-invariance", 0, n)
    forms = [gamma.column(k) for k in range(n)]
    p = ctx.field.p

    # subset -> per-degree quotient dimensions
    dims_by_subset: dict[int, list[int]] = {}
    for smask in range(1 << n):
        dims = [1] + [0] * n + [0]
        for d in range(1, n + 1):
            masks, index = degree_masks(n, d)
            width = len(masks)
            red = RowReducer(width, p)
            for m in ideal.members_of_degree(d):
                red.add_unit(index[m])
            below = degree_masks(n, d - 1)[0]
            for l in range(n):
                if smask >> l & 1:
                    for b in below:
                        red.add(_form_row(n, b, forms[l], p, width, index))
            dims[d] = width - red.rank
        dims_by_subset[smask] = dims

    count = 0
    for sigma in permutations(range(n)):
        entries = {}
        pref = 0
        chain = [0]
        for l in sigma:
            pref |= 1 << l
            chain.append(pref)
        for i in range(1, n + 1):
            da = dims_by_subset[chain[i]]
            db = dims_by_subset[chain[i - 1]]
            for j in range(n + 1):
                v = da[j] - db[j + 1] + da[j + 1]
                if v:
                    entries[(i, j)] = v
        if AnnihilatorTable(RING_E, n, entries) != reference:
            raise VerificationFailure(
                f"ordering {sigma} of the generic sequence changes the table"
            )
        count += 1
    return PermutationReport(n, count, reference)


# ---------------------------------------------------------------------------
# the three-invariant construction
# ---------------------------------------------------------------------------


@dataclass
class StrComplexReport:
    s: int
    t: int
    r: int
    n: int
    depth_S: int
    depth_E: int
    reg_S: int
    chain: "DepthChainReport"

    @property
    def ok(self) -> bool:
        return (self.depth_S, self.depth_E, self.reg_S) == (self.s, self.t, self.r)

    def lines(self) -> list[str]:
        return [
            f"target (depth_S, depth_E, reg_S) = ({self.s}, {self.t}, {self.r}) on n={self.n}",
            f"formulas give ({self.depth_S}, {self.depth_E}, {self.reg_S}); "
            f"pipeline agrees: {self.ok}",
        ]

    def machine(self) -> dict:
        return {
            "s": self.s, "t": self.t, "r": self.r, "n": self.n,
            "depth_S": self.depth_S, "depth_E": self.depth_E, "reg_S": self.reg_S,
            "ok": self.ok,
        }


def str_complex(
    s: int, t: int, r: int, ctx: GenericContext
) -> tuple[SimplicialComplex, StrComplexReport]:
    """Complex with prescribed symmetric depth s, exterior depth t and
    regularity r, for r >= s - t >= 1.

    s = t is unattainable for complexes with every vertex present: the depth
    formulas for the (always stable) shifted face ideal force
    depth_S >= depth_E + 1 whenever the ideal is nonzero, because every
    generator has degree at least two.  Requesting it raises
    ParameterInfeasible rather than returning a complex that cannot verify.
    """
    if min(s, t, r) < 0:
        raise ParameterInfeasible("s, t, r must be natural numbers")
    if r < 1:
        raise ParameterInfeasible(
            "r = 0 forces degree-one non-faces, i.e. missing vertices"
        )
    if not 0 <= s - t <= r:
        raise ParameterInfeasible("need r >= s - t >= 0")
    if s == t:
        raise ParameterInfeasible(
            "no full-support complex has depth_S = depth_E with nonzero face "
            "ideal: generators of the shifted ideal have degree >= 2, so "
            "depth_S >= depth_E + 1"
        )
    n = t + r + 3
    top = set(range(n - (s - t) + 1, n + 1))
    fam1 = [sorted(top | {i}) for i in range(t + 1, n - (s - t) + 1)]
    block = list(range(n - r - 1, n))
    fam2 = [block]
    fam3 = [
        sorted((set(block) - {j}) | {n}) for j in range(n - (s - t) + 1, n)
    ]
    masks = [mask_from_vertices(f, n) for f in fam1 + fam2 + fam3]
    ideal = MonomialIdeal(RING_E, n, masks)
    from .ideals import complex_of_ideal

    cx = complex_of_ideal(ideal)
    if face_ideal(cx) != ideal:
        raise VerificationFailure("listed families are not the minimal non-faces")
    flags = stability_flags(ideal)
    if not (flags.stable and flags.squarefree_stable):
        raise VerificationFailure("construction failed to be stable")
    inv_e = stable_invariants(ideal).depth_E
    inv_s = stable_invariants(as_symmetric_squarefree(ideal))
    chain = verify_depth_chain(cx, ctx)
    if not (
        inv_e == chain.depth_E
        and inv_s.depth_S == chain.depth_S
        and inv_s.reg_S == chain.reg_S
    ):
        raise VerificationFailure("formula and pipeline invariants disagree")
    report = StrComplexReport(
        s, t, r, n, depth_S=chain.depth_S, depth_E=chain.depth_E,
        reg_S=chain.reg_S, chain=chain,
    )
    if not report.ok:
        raise VerificationFailure(
            f"construction missed its targets: {report.lines()}"
        )
    return cx, report


# ---------------------------------------------------------------------------
# the depth chain verifier
# ---------------------------------------------------------------------------


@dataclass
class DepthChainReport:
    n: int
    dim: int
    f_vector: tuple[int, ...]
    depth_E: int
    depth_S: int
    reg_S: int
    cx_E: int
    projdim_S: int
    cohen_macaulay: bool
    linear_resolution: bool
    gap_equals_reg: bool
    shifted: SimplicialComplex
    gin: MonomialIdeal
    alpha: AnnihilatorTable
    betti_S: BettiTable

    def lines(self) -> list[str]:
        gap = self.depth_S - self.depth_E
        out = [
            f"depth_E = {self.depth_E}   depth_S = {self.depth_S}   "
            f"reg_S = {self.reg_S}",
            f"cx_E = {self.cx_E}   projdim_S = {self.projdim_S}",
            f"chain: 0 <= {gap} = {self.cx_E - self.projdim_S} <= {self.reg_S}",
        ]
        if self.cohen_macaulay:
            out.append("Cohen-Macaulay detected; gap equals regularity")
        if self.linear_resolution:
            out.append("linear resolution detected; gap equals regularity")
        return out

    def machine(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "f_vector": list(self.f_vector),
            "depth_E": self.depth_E,
            "depth_S": self.depth_S,
            "reg_S": self.reg_S,
            "cx_E": self.cx_E,
            "projdim_S": self.projdim_S,
            "cohen_macaulay": self.cohen_macaulay,
            "linear_resolution": self.linear_resolution,
            "gap_equals_reg": self.gap_equals_reg,
            "alpha": self.alpha.machine(),
            "betti_S": self.betti_S.machine(),
        }


def verify_depth_chain(cx: SimplicialComplex, ctx: GenericContext) -> DepthChainReport:
    """Compute all depth-type invariants through independent routes and
    assert the inequality chain between them.

    depth_E comes from the stable formula on the generic initial ideal, from
    the vanishing rows of the generic annihilator table, and from the cone
    part of the shifted complex (whose remainder must be non-acyclic of the
    right dimension); depth_S and the regularity come off the
    Eliahou-Kervaire table of the shifted Stanley-Reisner ideal.
    """
    if not cx.has_full_support:
        raise ValueError("the chain verifier expects every vertex present")
    n = cx.n
    shifted = exterior_shift(cx, ctx)
    gin = face_ideal(shifted)

    depth_formula = stable_invariants(gin).depth_E
    alpha = alpha_E_generic(face_ideal(cx), ctx)
    depth_alpha = depth_from_alpha(alpha, n)
    r, gamma_rest = shifted.split_cone_part()
    if depth_formula != depth_alpha or depth_formula != r:
        raise VerificationFailure(
            f"depth routes disagree: formula {depth_formula}, "
            f"annihilators {depth_alpha}, cone part {r}"
        )
    if not is_nonacyclic(gamma_rest, ctx.field):
        raise VerificationFailure("cone complement is acyclic")
    if gamma_rest.dim != cx.dim - r:
        raise VerificationFailure("cone complement has the wrong dimension")

    betti = betti_S_from_alpha(cx, ctx)
    projdim = betti.projdim()
    depth_s = depth_S_via_auslander_buchsbaum(betti, n)
    reg = betti.reg()
    sym = stable_invariants(as_symmetric_squarefree(gin))
    if sym.depth_S != depth_s or sym.reg_S != reg:
        raise VerificationFailure("closed forms and Betti table disagree")
    cx_e = complexity_E(depth_formula, n)

    gap = depth_s - depth_formula
    if gap < 0:
        raise VerificationFailure("depth_S below depth_E")
    if gap != cx_e - projdim:
        raise VerificationFailure("complexity/projdim difference mismatch")
    if gap > reg:
        raise VerificationFailure("depth gap exceeds the regularity")

    cm = depth_s == cx.dim + 1
    degs = set(gin.gen_degrees())
    linear = bool(degs) and len(degs) == 1 and reg == next(iter(degs)) - 1
    if (cm or linear) and gap != reg:
        raise VerificationFailure(
            "equality case detected but the chain is strict"
        )
    return DepthChainReport(
        n=n, dim=cx.dim, f_vector=cx.f_vector(),
        depth_E=depth_formula, depth_S=depth_s, reg_S=reg,
        cx_E=cx_e, projdim_S=projdim,
        cohen_macaulay=cm, linear_resolution=linear,
        gap_equals_reg=gap == reg,
        shifted=shifted, gin=gin, alpha=alpha, betti_S=betti,
    )

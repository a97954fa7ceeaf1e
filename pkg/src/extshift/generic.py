"""Generic coordinate changes, per-degree spans, initial ideals and exterior
algebraic shifting.

Genericity over F_p is probabilistic: every generic quantity is computed with
``trials`` independent random invertible transforms (at least two) and the
results must coincide, otherwise GenericityFailure is raised.  Per-trial RNG
streams are derived deterministically from (seed, purpose tag, trial index),
so runs replay exactly regardless of call order.

Degree-d coefficient vectors are plain lists of residues indexed by the fixed
descending monomial enumeration of that degree; with that column order the
pivot columns of an echelon form read off leading monomials directly.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .complexes import SimplicialComplex
from .errors import GenericityFailure, ShiftMismatch
from .exterior import degree_masks, subsets_ascending, wedge_sign
from .ideals import (
    RING_E,
    RING_S,
    MonomialIdeal,
    complex_of_ideal,
    degree_exps,
    face_ideal,
    stability_flags,
)
from .linalg import MatrixFp, PrimeField, RowReducer, random_invertible, rank

MAX_TRANSFORM_VARS = 12  # wedge tables enumerate subsets of [n]


@dataclass(frozen=True)
class GenericContext:
    """Prime field, seed and trial count governing all generic computations."""

    field: PrimeField
    seed: int = 0
    trials: int = 2

    def __post_init__(self):
        if self.trials < 2:
            raise ValueError("trials must be >= 2: generic results are only "
                             "accepted when independent transforms agree")

    def rng(self, tag: str, trial: int) -> np.random.Generator:
        h = zlib.crc32(tag.encode("utf-8"))
        ss = np.random.SeedSequence([self.seed % 2**64, h, trial])
        return np.random.Generator(np.random.PCG64(ss))

    def transform(self, tag: str, trial: int, n: int) -> MatrixFp:
        return random_invertible(n, self.field, self.rng(tag, trial))


# ---------------------------------------------------------------------------
# exterior coefficient vectors
# ---------------------------------------------------------------------------


def fold_form(n: int, d: int, vec: Sequence[int], form: Sequence[int], p: int) -> list[int]:
    """vec (degree d) wedged on the right with a linear form; degree d+1."""
    src_masks, _ = degree_masks(n, d)
    _, dst_index = degree_masks(n, d + 1)
    out = [0] * len(dst_index)
    for idx, a in enumerate(vec):
        if not a:
            continue
        m = idx_mask = src_masks[idx]
        for l in range(n):
            bit = 1 << l
            if m & bit:
                continue
            c = form[l]
            if not c:
                continue
            # sign of e_m ^ e_l: variables of m above l each contribute -1
            if (m >> (l + 1)).bit_count() & 1:
                out[dst_index[m | bit]] = (out[dst_index[m | bit]] - a * c) % p
            else:
                out[dst_index[m | bit]] = (out[dst_index[m | bit]] + a * c) % p
    return out


def wedge_monomial(n: int, mask_b: int, vec: Sequence[int], d: int, p: int) -> list[int]:
    """e_B wedged with a degree-d vector; degree d + |B|."""
    src_masks, _ = degree_masks(n, d)
    _, dst_index = degree_masks(n, d + mask_b.bit_count())
    out = [0] * len(dst_index)
    for idx, a in enumerate(vec):
        if not a:
            continue
        m = src_masks[idx]
        s = wedge_sign(mask_b, m)
        if s == 0:
            continue
        out[dst_index[mask_b | m]] = (out[dst_index[mask_b | m]] + s * a) % p
    return out


class WedgeTable:
    """Lazy table of the wedge products f_A of transformed variables.

    f_i is column i of the transform; f_A for A = {i_1 < ... < i_r} is the
    left fold f_{A minus max} ^ f_max, renormalised mod p at every step.
    """

    def __init__(self, gamma: MatrixFp):
        self.n = gamma.rows
        if self.n > MAX_TRANSFORM_VARS:
            raise ValueError(f"wedge tables support n <= {MAX_TRANSFORM_VARS}")
        self.p = gamma.p
        self.forms = [gamma.column(i) for i in range(self.n)]
        self._memo: dict[int, list[int]] = {0: [1]}

    def vector(self, mask: int) -> list[int]:
        got = self._memo.get(mask)
        if got is not None:
            return got
        top = 1 << (mask.bit_length() - 1)
        parent = self.vector(mask ^ top)
        vec = fold_form(
            self.n, mask.bit_count() - 1, parent, self.forms[top.bit_length() - 1], self.p
        )
        self._memo[mask] = vec
        return vec


def apply_transform(gamma: MatrixFp, ideal: MonomialIdeal) -> list[tuple[int, list[int]]]:
    """Images of the generators under the coordinate change, as degree-tagged
    coefficient vectors.  The transform must be invertible."""
    if ideal.ring != RING_E:
        raise ValueError("apply_transform expands exterior generators")
    if gamma.rows != gamma.cols or gamma.rows != ideal.n:
        raise ValueError("transform size does not match the ambient algebra")
    if rank(gamma) != gamma.rows:
        raise ValueError("transform is singular")
    wt = WedgeTable(gamma)
    return [(g.bit_count(), wt.vector(g)) for g in ideal.gens]


class DegreeSpan(NamedTuple):
    degree: int
    matrix: MatrixFp


def _span_rows_E(
    n: int, gen_vecs: Sequence[tuple[int, Sequence[int]]], d: int, p: int
) -> list[list[int]]:
    rows = []
    for gd, gv in gen_vecs:
        if gd > d:
            continue
        if gd == d:
            rows.append(list(gv))
            continue
        for b in degree_masks(n, d - gd)[0]:
            rows.append(wedge_monomial(n, b, gv, gd, p))
    return rows


def ideal_degree_span(
    n: int, gen_vecs: Sequence[tuple[int, Sequence[int]]], d: int, field: PrimeField
) -> DegreeSpan:
    """Rows spanning the ideal's degree-d component, columns in the fixed
    descending monomial order."""
    rows = _span_rows_E(n, gen_vecs, d, field.p)
    width = len(degree_masks(n, d)[0])
    if rows:
        m = MatrixFp(rows, field.p)
    else:
        m = MatrixFp.zeros(0, width, field.p)
    return DegreeSpan(d, m)


def initial_ideal(n: int, gen_vecs: Sequence[tuple[int, Sequence[int]]], p: int) -> MonomialIdeal:
    """Leading monomials of the span, degree by degree, minimalised.

    With columns sorted descending, the pivot columns of the echelon form of
    the degree-d span are exactly the degree-d monomials of the initial ideal.
    """
    if not gen_vecs:
        return MonomialIdeal(RING_E, n, [])
    mindeg = min(gd for gd, _ in gen_vecs)
    found: list[int] = []
    for d in range(mindeg, n + 1):
        masks, _ = degree_masks(n, d)
        red = RowReducer(len(masks), p)
        for row in _span_rows_E(n, gen_vecs, d, p):
            red.add(row)
        found.extend(masks[c] for c in red.pivot_cols)
    return MonomialIdeal.minimalize(RING_E, n, found)


# ---------------------------------------------------------------------------
# symmetric-ring analogues (used by the degree-capped symmetric gin)
# ---------------------------------------------------------------------------


def mult_form_S(n: int, d: int, vec: Sequence[int], form: Sequence[int], p: int) -> list[int]:
    src, _ = degree_exps(n, d)
    _, dst_index = degree_exps(n, d + 1)
    out = [0] * len(dst_index)
    for idx, a in enumerate(vec):
        if not a:
            continue
        e = src[idx]
        for l in range(n):
            c = form[l]
            if not c:
                continue
            e2 = e[:l] + (e[l] + 1,) + e[l + 1:]
            out[dst_index[e2]] = (out[dst_index[e2]] + a * c) % p
    return out


def mult_monomial_S(n: int, exp_b: tuple[int, ...], vec: Sequence[int], d: int, p: int) -> list[int]:
    src, _ = degree_exps(n, d)
    _, dst_index = degree_exps(n, d + sum(exp_b))
    out = [0] * len(dst_index)
    for idx, a in enumerate(vec):
        if not a:
            continue
        e = src[idx]
        e2 = tuple(x + y for x, y in zip(e, exp_b))
        out[dst_index[e2]] = (out[dst_index[e2]] + a) % p
    return out


def apply_transform_S(gamma: MatrixFp, ideal: MonomialIdeal) -> list[tuple[int, list[int]]]:
    if ideal.ring != RING_S:
        raise ValueError("apply_transform_S expands polynomial generators")
    if rank(gamma) != gamma.rows:
        raise ValueError("transform is singular")
    n = ideal.n
    p = gamma.p
    forms = [gamma.column(i) for i in range(n)]
    out = []
    for g in ideal.gens:
        vec = [1]
        d = 0
        for v, e in enumerate(g):
            for _ in range(e):
                vec = mult_form_S(n, d, vec, forms[v], p)
                d += 1
        out.append((d, vec))
    return out


def initial_ideal_S(
    n: int, gen_vecs: Sequence[tuple[int, Sequence[int]]], p: int, degree_cap: int
) -> MonomialIdeal:
    if not gen_vecs:
        return MonomialIdeal(RING_S, n, [])
    mindeg = min(gd for gd, _ in gen_vecs)
    found: list[tuple[int, ...]] = []
    for d in range(mindeg, degree_cap + 1):
        exps, _ = degree_exps(n, d)
        red = RowReducer(len(exps), p)
        rows = []
        for gd, gv in gen_vecs:
            if gd > d:
                continue
            if gd == d:
                rows.append(list(gv))
                continue
            for b in degree_exps(n, d - gd)[0]:
                rows.append(mult_monomial_S(n, b, gv, gd, p))
        for row in rows:
            red.add(row)
        found.extend(exps[c] for c in red.pivot_cols)
    return MonomialIdeal.minimalize(RING_S, n, found)


# ---------------------------------------------------------------------------
# generic initial ideals and exterior shifting
# ---------------------------------------------------------------------------


def gin_rlex(
    ideal: MonomialIdeal, ctx: GenericContext, degree_cap: Optional[int] = None
) -> MonomialIdeal:
    """Generic initial ideal in reverse lex (e_1 < ... < e_n convention).

    Runs ``ctx.trials`` independent transforms; the resulting initial ideals
    must coincide and be strongly stable.  The symmetric flavour is computed
    only up to ``degree_cap`` (default: max generator degree + 1), which is a
    documented truncation of an infinite computation.
    """
    if ideal.is_zero:
        return ideal
    results = []
    if ideal.ring == RING_E:
        for t in range(ctx.trials):
            gamma = ctx.transform("gin", t, ideal.n)
            results.append(initial_ideal(ideal.n, apply_transform(gamma, ideal), ctx.field.p))
    else:
        cap = degree_cap if degree_cap is not None else max(ideal.gen_degrees()) + 1
        if cap < max(ideal.gen_degrees()):
            raise ValueError("degree cap below the maximal generator degree")
        for t in range(ctx.trials):
            gamma = ctx.transform("gin", t, ideal.n)
            results.append(
                initial_ideal_S(ideal.n, apply_transform_S(gamma, ideal), ctx.field.p, cap)
            )
    first = results[0]
    if any(r != first for r in results[1:]):
        raise GenericityFailure(
            "independent transforms produced different initial ideals; "
            "raise trials or the prime"
        )
    if not stability_flags(first).strongly_stable:
        raise GenericityFailure(
            "generic initial ideal is not strongly stable; the transforms "
            "were not generic enough"
        )
    return first


def exterior_shift_spans(cx: SimplicialComplex, ctx: GenericContext) -> SimplicialComplex:
    """Shifted complex via rank growth of generic wedge rows.

    For each cardinality the candidate sets are processed in ascending set
    order; a set enters the shifted complex exactly when its projected wedge
    row strictly increases the running rank.
    """
    if not cx.has_full_support:
        raise ValueError("shifting expects every vertex to be a face")
    results = []
    for t in range(ctx.trials):
        gamma = ctx.transform("shift", t, cx.n)
        wt = WedgeTable(gamma)
        accepted: list[int] = []
        for card in range(cx.dim + 2):
            faces = cx.faces_by_card[card]
            if not faces:
                continue
            _, col_index = degree_masks(cx.n, card)
            cols = [col_index[f] for f in faces]
            red = RowReducer(len(cols), ctx.field.p)
            for a in subsets_ascending(cx.n, card):
                vec = wt.vector(a)
                if red.add([vec[c] for c in cols]):
                    accepted.append(a)
        try:
            results.append(SimplicialComplex(cx.n, accepted))
        except ValueError as exc:
            raise GenericityFailure(f"span route produced a non-complex: {exc}") from None
    first = results[0]
    if any(r != first for r in results[1:]):
        raise GenericityFailure("independent span-route trials disagree")
    return first


def exterior_shift(cx: SimplicialComplex, ctx: GenericContext) -> SimplicialComplex:
    """Exterior algebraic shifting, computed by two independent routes.

    Route one processes generic wedge rows in the face coordinates of the
    quotient; route two reads the complement of the generic initial ideal of
    the face ideal.  The routes must agree, the result must be shifted and
    the f-vector must be preserved.
    """
    spans = exterior_shift_spans(cx, ctx)
    gin = gin_rlex(face_ideal(cx), ctx)
    from_gin = complex_of_ideal(gin)
    if spans != from_gin:
        raise ShiftMismatch(
            "span route and initial-ideal route disagree "
            f"({spans!r} vs {from_gin!r})"
        )
    if not spans.is_shifted():
        raise GenericityFailure("shifted image fails the exchange condition")
    if spans.f_vector() != cx.f_vector():
        raise GenericityFailure("shifting did not preserve the f-vector")
    return spans

"""Groebner strata of monomial ideals.

Pipeline: generic basis -> S-pair reductions -> stratum ideal A in the
parameter ring -> linear part and a maximal eliminable set -> elimination
-> dimensions.

Everything downstream of the generic basis is graded by *level*: the
parameter attached to tail monomial ``b`` of generator ``a`` has level
``a - b`` in Z^n, ordered by the active term order.  Generators of A are
level-homogeneous, and a monomial of degree >= 2 and level ``l`` only
involves parameters of level strictly below ``l``.  Processing levels in
increasing order therefore turns elimination into substitution: every
linear relation found at level ``l`` expresses a pivot parameter through
parameters that are already known to be free.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyStratum, VariableMismatch
from .exact_poly import (
    GenericPolynomial,
    Monomial,
    ParamPoly,
    ParamRing,
    Rational,
    add_into,
    divides,
    mono_div,
    mono_str,
    norm,
    qdiv,
    substitute_dict,
)
from .groebner import (
    MonomialIdeal,
    SPair,
    _s_raw,
    all_pairs,
    buchberger_Q,
    eliminate,
    krull_dimension,
    reduce_raw,
    syzygy_pairs,
)
from .term_orders import (
    HOMOGENEOUS,
    Allowed,
    TailSpec,
    TermOrder,
    _excluder,
    elimination_order,
    htail,
    tail,
)


@dataclass(frozen=True)
class Parameter:
    name: str
    generator: int
    tail: Monomial
    level: Tuple[int, ...]


@dataclass(frozen=True)
class GenericBasis:
    J: MonomialIdeal
    order: TermOrder
    tails: TailSpec
    params: Tuple[Parameter, ...]
    ring: ParamRing
    polys: Tuple[GenericPolynomial, ...]

    @property
    def xnames(self) -> Tuple[str, ...]:
        return self.order.variables

    def param_index(self, name: str) -> int:
        return self.ring.index[name]

    def tail_monomials(self, i: int) -> List[Monomial]:
        return [p.tail for p in self.params if p.generator == i]


@dataclass
class ParamIdeal:
    """Ideal of k[C] together with the level of every parameter."""

    generators: List[ParamPoly]
    params: Tuple[Parameter, ...]
    ring: ParamRing

    def level_of_key(self, key: int) -> Tuple[int, ...]:
        n = len(self.params[0].level) if self.params else 0
        out = [0] * n
        for i, e in self.ring.fields(key):
            lv = self.params[i].level
            for j in range(n):
                out[j] += e * lv[j]
        return tuple(out)

    def levels(self, f: ParamPoly) -> set:
        return {self.level_of_key(k) for k in f.terms}

    def nonzero(self) -> List[ParamPoly]:
        return [g for g in self.generators if g.terms]


@dataclass
class Elimination:
    """Triangular presentation ``A = (c' - value(c'), relations)``.

    ``values`` maps each pivot (eliminable parameter) to a polynomial in the
    free parameters; ``relations`` generate ``A`` intersected with the ring
    of free parameters.
    """

    ring: ParamRing
    pivots: List[int]
    values: Dict[int, ParamPoly]
    relations: List[ParamPoly]

    @property
    def free(self) -> List[int]:
        piv = set(self.pivots)
        return [i for i in range(len(self.ring)) if i not in piv]

    def generators(self) -> List[ParamPoly]:
        ring = self.ring
        out = [ring.var(p) - self.values[p] for p in self.pivots]
        return out + list(self.relations)


@dataclass
class StratumReport:
    params: int
    rank: int
    ed: int
    dim: int
    smooth: bool
    generators: List[ParamPoly]
    levels: Dict[str, Tuple[int, ...]]
    eliminated: List[str] = field(default_factory=list)
    millis: int = 0

    def generator_strings(self) -> List[str]:
        return [g.primitive().to_str() for g in self.generators]

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "rank": self.rank,
            "ed": self.ed,
            "dim": self.dim,
            "smooth": self.smooth,
            "generators": self.generator_strings(),
            "levels": {k: list(v) for k, v in self.levels.items()},
            "millis": self.millis,
        }


# ---------------------------------------------------------------------------
# generic basis
# ---------------------------------------------------------------------------


def _check_exclusions(J: MonomialIdeal, tails: TailSpec) -> None:
    ex = tails.exclude
    if ex is None:
        return
    gens = getattr(ex, "gens", None)
    if gens is None:
        return
    for g in gens:
        for a in J.gens:
            if divides(g, a):
                raise EmptyStratum(
                    f"excluded monomial {g} divides basis monomial {a}; the stratum is empty")


def build_generic_basis(J: MonomialIdeal, tails: TailSpec, order: TermOrder) -> GenericBasis:
    if J.nvars != len(order.variables):
        raise VariableMismatch("ideal and order have different variable counts")
    if not J.gens:
        raise ValueError("the zero ideal has no generic basis")
    if J.is_unit():
        raise ValueError("the unit ideal has no stratum")
    _check_exclusions(J, tails)
    shared = _excluder(tails.exclude)
    key = order.key
    homogeneous = tails.mode == HOMOGENEOUS

    raw_params = []
    for i, a in enumerate(J.gens):
        r = tails.restriction(i)
        if isinstance(r, Allowed):
            ka = key(a)
            chosen = [b for b in r.monomials
                      if len(b) == len(a) and key(b) < ka and not J.contains(b)
                      and not shared(b) and (not homogeneous or sum(b) == sum(a))]
        else:
            own = _excluder(r)

            def excl(b, own=own):
                return J.contains(b) or shared(b) or own(b)

            chosen = (htail if homogeneous else tail)(order, a, excl)
        for b in chosen:
            level = tuple(x - y for x, y in zip(a, b))
            raw_params.append((i, tuple(b), level))

    zero_key = key((0,) * J.nvars)
    raw_params.sort(key=lambda t: (key(t[2]), t[0], _desc(key(t[1]))))
    params = []
    for idx, (i, b, level) in enumerate(raw_params):
        if not key(level) > zero_key:
            raise AssertionError(f"level {level} is not positive")
        params.append(Parameter(f"c{idx + 1}", i, b, level))
    ring = ParamRing(p.name for p in params)

    polys = []
    for i, a in enumerate(J.gens):
        terms = {a: ring.one()}
        for idx, p in enumerate(params):
            if p.generator == i:
                terms[p.tail] = ring.var(idx)
        polys.append(GenericPolynomial(ring, J.nvars, terms, a))
    return GenericBasis(J, order, tails, tuple(params), ring, tuple(polys))


def _desc(k: tuple) -> tuple:
    return tuple(-x for x in k)


def _pairs(J: MonomialIdeal, use_all: bool) -> List[SPair]:
    return all_pairs(J) if use_all else syzygy_pairs(J)


# ---------------------------------------------------------------------------
# linear part
# ---------------------------------------------------------------------------


def _s_poly_raw(basis: GenericBasis, p: SPair):
    F = basis.polys
    return _s_raw(F[p.i].raw(), F[p.i].lm, F[p.j].raw(), F[p.j].lm, p.lcm)


def linear_part(J: MonomialIdeal, tails: TailSpec, order: TermOrder,
                all_pairs: bool = False, basis: Optional[GenericBasis] = None) -> List[ParamPoly]:
    """Linear forms spanning L(A): coefficients of the S-polynomials modulo J."""
    basis = basis or build_generic_basis(J, tails, order)
    ring = basis.ring
    out = []
    for p in _pairs(basis.J, all_pairs):
        s = _s_poly_raw(basis, p)
        for m in sorted(s, key=order.key, reverse=True):
            if not basis.J.contains(m) and s[m]:
                out.append(ParamPoly(ring, dict(s[m])))
    return out


def eliminable_set(forms: Sequence[ParamPoly], ring: Optional[ParamRing] = None) -> Tuple[List[int], int]:
    """Pivot parameters of the reduced row echelon form of linear forms.

    Columns follow the ring order, so the pivot of each row is its first
    parameter.  Returns ``(pivot indices, rank)``.
    """
    if ring is None:
        if not forms:
            return [], 0
        ring = forms[0].ring
    rows: List[Dict[int, Rational]] = []
    pivots: List[int] = []
    for f in forms:
        row = {i: c for k, c in f.terms.items() for i, e in ring.fields(k) if e == 1
               and k == ring.var_key(i)}
        if len(row) != len(f.terms):
            raise ValueError("eliminable_set expects linear forms")
        _echelon_insert(rows, pivots, row)
    return sorted(pivots), len(pivots)


def _echelon_insert(rows, pivots, row):
    for r, p in zip(rows, pivots):
        c = row.get(p)
        if c:
            for k, v in r.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = norm(nv)
                else:
                    row.pop(k, None)
    if not row:
        return
    p = min(row)
    lc = row[p]
    row = {k: qdiv(v, lc) for k, v in row.items()}
    for r in rows:
        c = r.get(p)
        if c:
            for k, v in row.items():
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = norm(nv)
                else:
                    r.pop(k, None)
    rows.append(row)
    pivots.append(p)


# ---------------------------------------------------------------------------
# level-wise triangularization
# ---------------------------------------------------------------------------


class _Triangulator:
    """Absorbs level-homogeneous generators one level at a time."""

    def __init__(self, ring: ParamRing):
        self.ring = ring
        self.values: Dict[int, Dict[int, Rational]] = {}
        self.pivots: List[int] = []
        self.relations: List[Dict[int, Rational]] = []
        self.mask = 0
        self._cache: dict = {}

    def substitute(self, terms: Dict[int, Rational]) -> Dict[int, Rational]:
        if not self.mask:
            return terms
        if not any(k & self.mask for k in terms):
            return terms
        return substitute_dict(self.ring, terms, self.values, self.mask, self._cache)

    def _is_linear(self, k: int) -> bool:
        return k and not (k & (k - 1)) and (k.bit_length() - 1) % self.ring.width == 0

    def absorb(self, rows: Sequence[Dict[int, Rational]], substituted: bool = False) -> None:
        ring = self.ring
        w = ring.width
        level_rows: List[Dict[int, Rational]] = []
        level_piv: List[int] = []  # packed key of pivot variable
        for row in rows:
            row = dict(row if substituted else self.substitute(row))
            for prow, pk in zip(level_rows, level_piv):
                c = row.get(pk)
                if c:
                    add_into(row, prow, -c)
            if not row:
                continue
            lin = [k for k in row if self._is_linear(k)]
            if not lin:
                self.relations.append({k: norm(v) for k, v in row.items()})
                continue
            pk = min(lin)
            lc = row[pk]
            row = {k: qdiv(v, lc) for k, v in row.items()}
            for prow in level_rows:
                c = prow.get(pk)
                if c:
                    add_into(prow, row, -c)
                    for k in [k for k, v in prow.items() if type(v) is not int]:
                        prow[k] = norm(prow[k])
            level_rows.append(row)
            level_piv.append(pk)
        fm = ring.field_mask
        for prow, pk in zip(level_rows, level_piv):
            i = (pk.bit_length() - 1) // w
            value = {k: norm(-v) for k, v in prow.items() if k != pk}
            self.values[i] = value
            self.pivots.append(i)
            self.mask |= fm << (i * w)

    def result(self) -> Elimination:
        ring = self.ring
        return Elimination(
            ring,
            list(self.pivots),
            {i: ParamPoly(ring, dict(v)) for i, v in self.values.items()},
            [ParamPoly(ring, dict(r)) for r in self.relations],
        )


def _level_groups(ideal: ParamIdeal, order: TermOrder):
    groups: Dict[tuple, list] = {}
    for g in ideal.generators:
        if not g.terms:
            continue
        lv = ideal.levels(g)
        if len(lv) != 1:
            raise ValueError("generator is not level-homogeneous")
        lvl = next(iter(lv))
        groups.setdefault(order.key(lvl), []).append(g)
    return [groups[k] for k in sorted(groups)]


def triangularize(ideal: ParamIdeal, order: TermOrder) -> Elimination:
    """Triangular presentation of a level-homogeneous ideal."""
    tri = _Triangulator(ideal.ring)
    for group in _level_groups(ideal, order):
        tri.absorb([dict(g.terms) for g in group])
    return tri.result()


# ---------------------------------------------------------------------------
# stratum ideal
# ---------------------------------------------------------------------------


def _raw_generators(basis: GenericBasis, pairs: Sequence[SPair]) -> List[ParamPoly]:
    order = basis.order
    ring = basis.ring
    marked = [(F.lm, F.raw()) for F in basis.polys]
    gens: List[Tuple[tuple, int, tuple, ParamPoly]] = []
    for pi, p in enumerate(pairs):
        s = _s_poly_raw(basis, p)
        h = reduce_raw(s, marked, order)
        for m, c in h.items():
            if c:
                lvl = tuple(a - b for a, b in zip(p.lcm, m))
                gens.append((order.key(lvl), pi, _desc(order.key(m)), ParamPoly(ring, dict(c))))
    gens.sort(key=lambda t: t[:3])
    return [g for *_, g in gens]


def _sweep(basis: GenericBasis, pairs: Sequence[SPair]) -> Elimination:
    """All pairs reduced together in increasing level, pivots substituted on the fly.

    The coefficient of X^g in the reduction of the pair with lcm ``L`` has
    level ``L - g``; it receives contributions only from monomials of
    strictly lower level, so it is final when its level comes up.  At that
    point every parameter of lower level is classified and the pivots among
    them are replaced by their values, which keeps the coefficients inside
    the ring of free parameters.
    """
    order = basis.order
    key = order.key
    J = basis.J
    tri = _Triangulator(basis.ring)
    tails = []
    for F in basis.polys:
        tails.append([(m, next(iter(c.terms))) for m, c in F.terms.items() if m != F.lm])
    lms = [F.lm for F in basis.polys]

    work: List[Dict[Monomial, Dict[int, Rational]]] = []
    heap = []
    for pi, p in enumerate(pairs):
        s = _s_poly_raw(basis, p)
        work.append(s)
        for m in s:
            lvl = tuple(a - b for a, b in zip(p.lcm, m))
            heap.append((key(lvl), pi, _desc(key(m)), m))
    heapq.heapify(heap)
    reducer: Dict[Monomial, Optional[int]] = {}

    while heap:
        lk = heap[0][0]
        batch = []
        while heap and heap[0][0] == lk:
            batch.append(heapq.heappop(heap))
        rows = []
        for _, pi, _, m in batch:
            coeff = work[pi].pop(m, None)
            if not coeff:
                continue
            coeff = tri.substitute(coeff)
            if not coeff:
                continue
            k = reducer.get(m, -1)
            if k == -1:
                k = next((i for i, lm in enumerate(lms) if divides(lm, m)), None)
                reducer[m] = k
            if k is None:
                rows.append(coeff)
                continue
            u = mono_div(m, lms[k])
            lcm = pairs[pi].lcm
            dest = work[pi]
            for t, ck in tails[k]:
                target = tuple(a + b for a, b in zip(t, u))
                d = dest.get(target)
                if d is None:
                    d = dest[target] = {}
                    lvl = tuple(a - b for a, b in zip(lcm, target))
                    heapq.heappush(heap, (key(lvl), pi, _desc(key(target)), target))
                add_into(d, coeff, -1, ck)
        if rows:
            tri.absorb(rows, substituted=True)
    return tri.result()


def stratum_ideal(J: MonomialIdeal, tails: TailSpec, order: TermOrder,
                  level_by_level: bool = False, all_pairs: bool = False,
                  basis: Optional[GenericBasis] = None) -> ParamIdeal:
    """Generators of the stratum ideal A.

    Without ``level_by_level`` these are the coefficients of the fully
    reduced S-polynomials.  With it, the triangular generating set produced
    by the level sweep is returned; both generate the same ideal.
    """
    basis = basis or build_generic_basis(J, tails, order)
    pairs = _pairs(basis.J, all_pairs)
    if level_by_level:
        gens = _sweep(basis, pairs).generators()
    else:
        gens = _raw_generators(basis, pairs)
    return ParamIdeal(gens, basis.params, basis.ring)


def elimination_of(basis: GenericBasis, level_by_level: bool = True,
                   all_pairs: bool = False) -> Elimination:
    pairs = _pairs(basis.J, all_pairs)
    if level_by_level:
        return _sweep(basis, pairs)
    ideal = ParamIdeal(_raw_generators(basis, pairs), basis.params, basis.ring)
    return triangularize(ideal, basis.order)


def check_lambda_homogeneous(ideal: ParamIdeal) -> bool:
    return all(len(ideal.levels(g)) <= 1 for g in ideal.generators)


def reduced_gb(ideal_or_elim, pivots: Optional[Sequence[int]] = None) -> List[ParamPoly]:
    """Reduced Groebner basis of A for the elimination order of the pivots.

    Canonical for the ideal (given the pivot set), so it is the comparison
    key between different ways of computing A.
    """
    if isinstance(ideal_or_elim, Elimination):
        gens = ideal_or_elim.generators()
        ring = ideal_or_elim.ring
        pivots = ideal_or_elim.pivots if pivots is None else pivots
    else:
        gens = ideal_or_elim.generators
        ring = ideal_or_elim.ring
        pivots = pivots or []
    nz = [g for g in gens if g.terms]
    if not nz:
        return []
    order = elimination_order(TermOrder.revlex(ring.names), pivots)
    return buchberger_Q(nz, order, ring)


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------


def restrict(polys: Sequence[ParamPoly], keep: Sequence[int], ring: ParamRing) -> Tuple[ParamRing, List[ParamPoly]]:
    """Move polynomials that only use ``keep`` variables into the smaller ring."""
    sub = ParamRing(ring.names[i] for i in keep)
    pos = {i: j for j, i in enumerate(keep)}
    out = []
    for f in polys:
        terms = {}
        for k, c in f.terms.items():
            nk = 0
            for i, e in ring.fields(k):
                if i not in pos:
                    raise ValueError(f"{ring.names[i]} is not among the kept variables")
                nk |= e << (pos[i] * sub.width)
            terms[nk] = c
        out.append(ParamPoly(sub, terms))
    return sub, out


def analyze(J: MonomialIdeal, tails: TailSpec, order: TermOrder,
            level_by_level: bool = True, all_pairs: bool = False) -> StratumReport:
    start = time.perf_counter()
    basis = build_generic_basis(J, tails, order)
    elim = elimination_of(basis, level_by_level=level_by_level, all_pairs=all_pairs)
    ring = basis.ring
    n = len(ring)
    rank = len(elim.pivots)
    free = elim.free
    tri = elim.generators()
    reduced = eliminate(tri, elim.pivots, ring) if any(g.terms for g in tri) else []
    sub, reduced_sub = restrict(reduced, free, ring)
    dim = krull_dimension(reduced_sub, sub)
    ed = n - rank
    levels = {ring.names[i]: basis.params[i].level for i in free}
    millis = int((time.perf_counter() - start) * 1000)
    return StratumReport(
        params=n,
        rank=rank,
        ed=ed,
        dim=dim,
        smooth=not reduced_sub,
        generators=reduced_sub,
        levels=levels,
        eliminated=[ring.names[i] for i in sorted(elim.pivots)],
        millis=millis,
    )

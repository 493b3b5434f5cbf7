"""Reduction machinery and a Buchberger engine over Q.

Two different kinds of reduction happen here.  Generic polynomials (X-part
with parameter coefficients) are reduced by a monic marked basis; nothing is
ever divided by a parameter, so the loop is a plain largest-first sweep.
Parameter-ring ideals are handled by a classical Buchberger completion with
the Gebauer-Moller pair update and sugar selection.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import UnitIdeal, VariableMismatch
from .exact_poly import (
    GenericPolynomial,
    Monomial,
    ParamPoly,
    ParamRing,
    Rational,
    add_into,
    divides,
    mono_div,
    mono_lcm,
    mono_str,
    norm,
    qdiv,
)
from .term_orders import TermOrder, elimination_order


# ---------------------------------------------------------------------------
# monomial ideals and pairs
# ---------------------------------------------------------------------------


class MonomialIdeal:
    """Monomial ideal given by its minimal generators (input order kept)."""

    __slots__ = ("gens", "nvars")

    def __init__(self, gens: Iterable[Monomial], nvars: Optional[int] = None):
        gens = [tuple(g) for g in gens]
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for the zero ideal")
            nvars = len(gens[0])
        if any(len(g) != nvars for g in gens):
            raise VariableMismatch("generators over different variable counts")
        minimal: List[Monomial] = []
        for i, g in enumerate(gens):
            if g in minimal:
                continue
            if any(divides(h, g) and h != g for h in gens):
                continue
            minimal.append(g)
        self.gens = tuple(minimal)
        self.nvars = nvars

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MonomialIdeal) and self.nvars == other.nvars
                and set(self.gens) == set(other.gens))

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.gens)))

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.nvars)]
        return "MonomialIdeal(" + ", ".join(mono_str(g, names) for g in self.gens) + ")"

    def contains(self, m: Monomial) -> bool:
        return any(divides(g, m) for g in self.gens)

    __contains__ = contains

    def is_unit(self) -> bool:
        return any(not any(g) for g in self.gens)

    def support(self) -> set:
        return {j for g in self.gens for j, e in enumerate(g) if e}

    def to_str(self, names: Sequence[str]) -> str:
        return ", ".join(mono_str(g, names) for g in self.gens)


class SPair(NamedTuple):
    i: int
    j: int
    lcm: Monomial


def all_pairs(J: MonomialIdeal) -> List[SPair]:
    return [SPair(i, j, mono_lcm(J.gens[i], J.gens[j]))
            for i, j in combinations(range(len(J.gens)), 2)]


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def syzygy_pairs(J: MonomialIdeal, coprime: bool = True) -> List[SPair]:
    """Pairs whose S-polynomials suffice for the stratum ideal.

    Pairs are totally ordered by ``(deg lcm, lcm, i, j)``.  A pair is dropped
    when some third generator divides its lcm and both connecting pairs
    come earlier: its syzygy is then a combination of theirs, and by
    induction on the ordering of those.  With ``coprime`` set, pairs with
    coprime leading monomials are dropped as well.
    """
    gens = J.gens
    pairs = all_pairs(J)

    def rank(i, j):
        if i > j:
            i, j = j, i
        l = mono_lcm(gens[i], gens[j])
        return (sum(l), l, i, j)

    kept = []
    for p in pairs:
        if coprime and _coprime(gens[p.i], gens[p.j]):
            continue
        me = rank(p.i, p.j)
        redundant = False
        for k in range(len(gens)):
            if k in (p.i, p.j) or not divides(gens[k], p.lcm):
                continue
            if rank(p.i, k) < me and rank(p.j, k) < me:
                redundant = True
                break
        if not redundant:
            kept.append(p)
    return kept


# ---------------------------------------------------------------------------
# generic polynomials
# ---------------------------------------------------------------------------


def s_polynomial(f: GenericPolynomial, g: GenericPolynomial) -> GenericPolynomial:
    """(lcm/LM f) f - (lcm/LM g) g for marked monic f and g."""
    if f.lm is None or g.lm is None:
        raise ValueError("S-polynomials need marked leading monomials")
    f._check(g)
    l = mono_lcm(f.lm, g.lm)
    raw = _s_raw(f.raw(), f.lm, g.raw(), g.lm, l)
    return GenericPolynomial.from_raw(f.ring, f.nvars, raw)


def _s_raw(fr, flm, gr, glm, l):
    out: Dict[Monomial, Dict[int, Rational]] = {}
    for poly, lm, sign in ((fr, flm, 1), (gr, glm, -1)):
        u = mono_div(l, lm)
        for m, c in poly.items():
            t = tuple(a + b for a, b in zip(m, u))
            d = out.get(t)
            if d is None:
                d = out[t] = {}
            add_into(d, c, sign)
            if not d:
                del out[t]
    return out


def reduce_mod_monomials(p: GenericPolynomial, J: MonomialIdeal) -> GenericPolynomial:
    """Delete every term whose X-monomial lies in J."""
    return GenericPolynomial(p.ring, p.nvars,
                             {m: c for m, c in p.terms.items() if not J.contains(m)})


def reduce_full(p: GenericPolynomial, basis: Sequence[GenericPolynomial],
                order: TermOrder) -> GenericPolynomial:
    """Fully reduce p by a monic marked basis, largest reducible monomial first."""
    for b in basis:
        if b.lm is None:
            raise ValueError("basis elements must be marked")
        p._check(b)
    raw = reduce_raw(p.raw(), [(b.lm, b.raw()) for b in basis], order)
    return GenericPolynomial.from_raw(p.ring, p.nvars, raw)


def reduce_raw(p: Dict[Monomial, Dict[int, Rational]],
               basis: Sequence[Tuple[Monomial, Dict[Monomial, Dict[int, Rational]]]],
               order: TermOrder) -> Dict[Monomial, Dict[int, Rational]]:
    """Raw kernel of :func:`reduce_full`.

    Subtracting ``P * (m / LM) * F`` only touches monomials strictly below
    ``m``, so each monomial is popped from the heap exactly once and its
    coefficient is final at that moment.
    """
    key = order.key
    work = {m: dict(c) for m, c in p.items() if c}
    heap = [(_neg(key(m)), m) for m in work]
    heapq.heapify(heap)
    out: Dict[Monomial, Dict[int, Rational]] = {}
    reducer_cache: Dict[Monomial, Optional[int]] = {}
    while heap:
        _, m = heapq.heappop(heap)
        coeff = work.pop(m, None)
        if not coeff:
            continue
        k = reducer_cache.get(m, -1)
        if k == -1:
            k = next((i for i, (lm, _) in enumerate(basis) if divides(lm, m)), None)
            reducer_cache[m] = k
        if k is None:
            out[m] = coeff
            continue
        lm, poly = basis[k]
        u = mono_div(m, lm)
        for t, c in poly.items():
            if t == lm:
                continue
            target = tuple(a + b for a, b in zip(t, u))
            d = work.get(target)
            if d is None:
                d = work[target] = {}
                heapq.heappush(heap, (_neg(key(target)), target))
            for kc, vc in c.items():
                add_into(d, coeff, -vc, kc)
    return out


def _neg(k: tuple) -> tuple:
    return tuple(-x for x in k)


# ---------------------------------------------------------------------------
# Buchberger over Q
# ---------------------------------------------------------------------------


class _Engine:
    """Leading-term bookkeeping for one (ring, order) pair."""

    def __init__(self, ring: ParamRing, order: TermOrder):
        if len(order.variables) != len(ring):
            raise VariableMismatch("order and ring have different variable counts")
        self.ring = ring
        self.order = order
        self._keys: Dict[int, tuple] = {}

    def key(self, k: int) -> tuple:
        v = self._keys.get(k)
        if v is None:
            v = self._keys[k] = self.order.key(self.ring.unpack(k))
        return v

    def lead(self, terms: Dict[int, Rational]) -> int:
        return max(terms, key=self.key)

    def monic(self, terms: Dict[int, Rational]) -> Dict[int, Rational]:
        lc = terms[self.lead(terms)]
        if lc == 1:
            return terms
        return {k: qdiv(c, lc) for k, c in terms.items()}

    def normal_form(self, terms: Dict[int, Rational], basis: Sequence[Tuple[int, Dict[int, Rational]]],
                    full: bool = True) -> Dict[int, Rational]:
        """Reduce by monic ``(lead, terms)`` pairs; ``full`` also reduces non-leading terms."""
        ring = self.ring
        work = dict(terms)
        rem: Dict[int, Rational] = {}
        while work:
            lt = self.lead(work)
            c = work[lt]
            for lk, g in basis:
                if ring.key_divides(lk, lt):
                    add_into(work, g, -c, lt - lk)
                    break
            else:
                if not full:
                    rem.update(work)
                    return rem
                rem[lt] = c
                del work[lt]
        return rem


def _to_ring(gens: Sequence[ParamPoly]) -> ParamRing:
    if not gens:
        raise ValueError("need at least one polynomial to infer the ring")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise VariableMismatch("generators over different rings")
    return ring


def buchberger_Q(gens: Sequence[ParamPoly], order: TermOrder,
                 ring: Optional[ParamRing] = None) -> List[ParamPoly]:
    """Reduced Groebner basis, sorted by leading monomial (smallest first).

    The zero ideal returns ``[]``; the unit ideal returns ``[1]``.
    """
    ring = ring or _to_ring(gens)
    eng = _Engine(ring, order)
    polys: List[Dict[int, Rational]] = []
    leads: List[int] = []
    sugar: List[int] = []
    active: List[int] = []
    pairs: List[Tuple[int, int, int]] = []  # (i, j, lcm)

    def lcm_of(i, j):
        return ring.key_lcm(leads[i], leads[j])

    def add(h: Dict[int, Rational], s: int):
        nonlocal active, pairs
        h = eng.monic(h)
        hl = eng.lead(h)
        idx = len(polys)
        polys.append(h)
        leads.append(hl)
        sugar.append(s)
        # Gebauer-Moller update
        cand = [(g, lcm_of(g, idx)) for g in active]
        keep = []
        for a, (g, l) in enumerate(cand):
            if leads[g] + hl == l:
                keep.append((g, l, True))
                continue
            dominated = False
            for b, (g2, l2) in enumerate(cand):
                if b == a:
                    continue
                if ring.key_divides(l2, l) and (l2 != l or b < a):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l, False))
        new_pairs = [(g, idx, l) for g, l, cop in keep if not cop]
        old = []
        for (i, j, l) in pairs:
            if (ring.key_divides(hl, l) and lcm_of(i, idx) != l and lcm_of(j, idx) != l):
                continue
            old.append((i, j, l))
        pairs = old + new_pairs
        active = [g for g in active if not ring.key_divides(hl, leads[g])] + [idx]

    basis_view = lambda: [(leads[g], polys[g]) for g in range(len(polys))]

    inputs = [dict(g.terms) for g in gens if g.terms]
    inputs.sort(key=lambda t: eng.key(eng.lead(t)))
    for t in inputs:
        h = eng.normal_form(t, basis_view()) if polys else t
        if h:
            if 0 in h and len(h) == 1:
                return [ring.one()]
            add(h, max(ring.key_degree(k) for k in h))

    while pairs:
        def pkey(p):
            i, j, l = p
            d = ring.key_degree(l)
            s = max(sugar[i] + d - ring.key_degree(leads[i]),
                    sugar[j] + d - ring.key_degree(leads[j]))
            return (s, eng.key(l), i, j)

        best = min(pairs, key=pkey)
        pairs.remove(best)
        i, j, l = best
        s = pkey(best)[0]
        sp: Dict[int, Rational] = {}
        add_into(sp, polys[i], 1, l - leads[i])
        add_into(sp, polys[j], -1, l - leads[j])
        h = eng.normal_form(sp, basis_view())
        if h:
            if 0 in h and len(h) == 1:
                return [ring.one()]
            add(h, s)

    return _interreduce(eng, [polys[g] for g in range(len(polys))])


def _interreduce(eng: _Engine, polys: List[Dict[int, Rational]]) -> List[ParamPoly]:
    ring = eng.ring
    items = sorted(((eng.lead(p), p) for p in polys), key=lambda t: eng.key(t[0]))
    minimal: List[Tuple[int, Dict[int, Rational]]] = []
    for lk, p in items:
        if any(ring.key_divides(mk, lk) for mk, _ in minimal):
            continue
        minimal.append((lk, p))
    # leads are pairwise non-dividing, so one full pass leaves them intact
    out = []
    for idx, (lk, p) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = eng.monic(eng.normal_form(p, others))
        out.append(ParamPoly(ring, _clean(r)))
    return out


def _clean(terms: Dict[int, Rational]) -> Dict[int, Rational]:
    return {k: norm(c) for k, c in terms.items()}


def normal_form(f: ParamPoly, gb: Sequence[ParamPoly], order: TermOrder) -> ParamPoly:
    """Remainder of f modulo a Groebner basis."""
    eng = _Engine(f.ring, order)
    basis = [(eng.lead(g.terms), eng.monic(dict(g.terms))) for g in gb if g.terms]
    return ParamPoly(f.ring, _clean(eng.normal_form(dict(f.terms), basis)))


def ideal_contains(gens: Sequence[ParamPoly], f: ParamPoly, order: Optional[TermOrder] = None) -> bool:
    ring = f.ring
    order = order or TermOrder.revlex(ring.names)
    if not any(g.terms for g in gens):
        return f.is_zero()
    gb = buchberger_Q(gens, order, ring)
    return normal_form(f, gb, order).is_zero()


def eliminate(gens: Sequence[ParamPoly], drop: Iterable, ring: Optional[ParamRing] = None,
              base: Optional[TermOrder] = None) -> List[ParamPoly]:
    """Reduced Groebner basis of the contraction to the variables not in ``drop``.

    The basis is taken for the elimination order built on ``base``
    (default RevLex on the ring's variable order); the returned elements are
    those free of ``drop`` variables, i.e. the reduced basis of the
    contraction for ``base`` restricted to the surviving variables.
    """
    ring = ring or _to_ring(gens)
    base = base or TermOrder.revlex(ring.names)
    drop_idx = {ring.index[v] if isinstance(v, str) else v for v in drop}
    nz = [g for g in gens if g.terms]
    if not nz:
        return []
    order = elimination_order(base, drop_idx)
    gb = buchberger_Q(nz, order, ring)
    mask = 0
    for i in drop_idx:
        mask |= ring.field_mask << (i * ring.width)
    return [g for g in gb if not any(k & mask for k in g.terms)]


def initial_monomials(gb: Sequence[ParamPoly], order: TermOrder) -> List[Tuple[int, ...]]:
    if not gb:
        return []
    eng = _Engine(gb[0].ring, order)
    return [eng.ring.unpack(eng.lead(g.terms)) for g in gb if g.terms]


def monomial_dimension(nvars: int, monomials: Iterable[Sequence[int]]) -> int:
    """Krull dimension of k[x]/M for the monomial ideal M.

    Largest variable set containing no generator support, computed as
    ``nvars`` minus a minimum hitting set of the supports.
    """
    supports = {frozenset(i for i, e in enumerate(m) if e) for m in monomials}
    if frozenset() in supports:
        raise UnitIdeal("monomial ideal contains 1")
    minimal = frozenset(s for s in supports if not any(t < s for t in supports))
    return nvars - _hitting_set(minimal)


@lru_cache(maxsize=None)
def _hitting_set(supports: frozenset) -> int:
    if not supports:
        return 0
    smallest = min(supports, key=lambda s: (len(s), sorted(s)))
    best = None
    for v in sorted(smallest):
        rest = frozenset(s for s in supports if v not in s)
        cand = 1 + _hitting_set(rest)
        if best is None or cand < best:
            best = cand
    return best


def krull_dimension(gens: Sequence[ParamPoly], ring: Optional[ParamRing] = None) -> int:
    """Krull dimension of k[C]/(gens); the zero ideal has dimension |C|."""
    nz = [g for g in gens if g.terms]
    if ring is None:
        ring = _to_ring(gens)
    if not nz:
        return len(ring)
    order = TermOrder.revlex(ring.names)
    gb = buchberger_Q(nz, order, ring)
    if len(gb) == 1 and gb[0].is_constant():
        raise UnitIdeal("the ideal is the whole ring")
    return monomial_dimension(len(ring), initial_monomials(gb, order))

"""Lex-segment and RevLex-segment ideal families and their dimension formulas."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import List, Sequence, Tuple

from .errors import HypothesisViolation, InvalidSegment, VariableMismatch
from .exact_poly import Monomial, degree
from .groebner import MonomialIdeal
from .term_orders import HOMOGENEOUS, TermOrder, htail, is_elimination_for, tail


@dataclass(frozen=True)
class LexSegmentSpec:
    """J(a_q, ..., a_1) in k[x_0, ..., x_n].

    ``a`` is stored as written, largest index first: ``a[0]`` is a_q.
    """

    n: int
    a: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if not self.a:
            raise InvalidSegment("need at least one exponent")
        if any(v < 0 for v in self.a):
            raise InvalidSegment("exponents must be non-negative")
        if sum(self.a) == 0:
            raise InvalidSegment("exponents must not all vanish")
        if self.q > self.n:
            raise InvalidSegment(f"q = {self.q} exceeds n = {self.n}")

    @property
    def q(self) -> int:
        return len(self.a)

    def coeff(self, j: int) -> int:
        """a_j for 1 <= j <= q."""
        return self.a[self.q - j]

    @property
    def s(self) -> int:
        return next(j for j in range(1, self.q + 1) if self.coeff(j)) - 1

    def nu(self, j: int) -> int:
        """Run of zeros directly below a_j; taken as 0 for j = s+1."""
        if j <= self.s + 1:
            return 0
        k = 0
        while self.coeff(j - 1 - k) == 0:
            k += 1
        return k

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.n + 1))


def lex_segment_ideal(spec: LexSegmentSpec) -> MonomialIdeal:
    n, q, s = spec.n, spec.q, spec.s

    def mono(exps):
        v = [0] * (n + 1)
        for j, e in exps:
            v[n - j] += e
        return tuple(v)

    gens = []
    for k in range(s + 2, q + 1):
        gens.append(mono([(k, spec.coeff(k) + 1)] + [(j, spec.coeff(j)) for j in range(k + 1, q + 1)]))
    gens.append(mono([(j, spec.coeff(j)) for j in range(s + 1, q + 1)]))
    return MonomialIdeal(gens, n + 1)


def lex_dimension_formula(spec: LexSegmentSpec) -> int:
    q, s = spec.q, spec.s
    d = q - s
    total = (d * d - d - 2) // 2
    for j in range(s + 1, q + 1):
        total += comb(spec.coeff(j) + j, j) - spec.nu(j)
    return total


@dataclass(frozen=True)
class RevLexSegmentSpec:
    """R(mu, n) in k[x, y, z_1, ..., z_{n-1}]."""

    mu: int
    n: int

    def __post_init__(self):
        if self.mu < 1:
            raise InvalidSegment("mu must be positive")
        if self.n < 2:
            raise InvalidSegment("n must be at least 2")

    @property
    def rt(self) -> Tuple[int, int]:
        return revlex_params(self.mu)

    def delta(self, i: int) -> int:
        return 0 if i < self.rt[1] else 1

    @property
    def variables(self) -> Tuple[str, ...]:
        return ("x", "y") + tuple(f"z{i}" for i in range(1, self.n))


def revlex_params(mu: int) -> Tuple[int, int]:
    """The unique (r, t) with 1 <= t <= r+1 and mu = (r+2)(r+1)/2 - t."""
    if mu < 1:
        raise InvalidSegment("mu must be positive")
    r = 1
    while (r + 2) * (r + 1) // 2 - 1 < mu:
        r += 1
    return r, (r + 2) * (r + 1) // 2 - mu


def revlex_segment_ideal(spec: RevLexSegmentSpec) -> MonomialIdeal:
    r, _ = spec.rt
    nv = spec.n + 1
    gens = []
    for i in range(r + 1):
        m = [0] * nv
        m[0], m[1] = r - i, i + spec.delta(i)
        gens.append(tuple(m))
    return MonomialIdeal(gens, nv)


def revlex_dimension_formula(n: int, mu: int) -> int:
    if n < 2:
        raise InvalidSegment("n must be at least 2")
    r, t = revlex_params(mu)
    return 2 * (n - 1) * mu + t * (r + 1 - t) * comb(n - 2, 2)


def torno_prediction(N0: int, m: Monomial, n0: Monomial, J0: MonomialIdeal,
                     o: TermOrder, mode: str) -> int:
    """Predicted dimension of the stratum of ``m * ((n0) + J0)``.

    Refuses with :class:`HypothesisViolation` unless ``m`` and ``n0`` avoid
    the variables of ``J0`` and either ``n0`` has degree at most one or the
    order eliminates the variables of ``m`` and ``n0``.
    """
    nv = len(o.variables)
    if len(m) != nv or len(n0) != nv or J0.nvars != nv:
        raise VariableMismatch("monomials and ideal must match the order's variables")
    Y = {i for i, e in enumerate(m) if e} | {i for i, e in enumerate(n0) if e}
    X = J0.support()
    if X & Y:
        raise HypothesisViolation("m and n0 share variables with J0")
    if degree(n0) > 1 and not is_elimination_for(o, Y):
        raise HypothesisViolation("n0 has degree > 1 and the order does not eliminate its variables")
    t = htail if mode == HOMOGENEOUS else tail
    n1 = len(t(o, m))
    n2 = len(t(o, n0, J0))
    return N0 + n1 + n2


def lex_family(n_max: int, q_max: int, a_max: int, sum_max: int) -> List[LexSegmentSpec]:
    """Every admissible J(a_q, ..., a_1) inside the given bounds."""
    out = []
    for n in range(1, n_max + 1):
        for q in range(1, min(q_max, n) + 1):
            for a in _tuples(q, a_max):
                if 0 < sum(a) <= sum_max:
                    out.append(LexSegmentSpec(n, a))
    return out


def _tuples(q: int, a_max: int):
    if q == 0:
        yield ()
        return
    for first in range(a_max + 1):
        for rest in _tuples(q - 1, a_max):
            yield (first,) + rest

"""Term orders, reliability, tails and elimination orders.

Every order is carried as an integer matrix: ``a`` precedes ``b`` when the
first nonzero entry of ``M (b - a)`` is positive.  The named kinds expand to
their standard matrices but use direct key functions, which produce the
same comparison keys faster.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import InvalidOrder, NotReliable, VariableMismatch
from .exact_poly import Monomial, mono_str

LEX, REVLEX, GRLEX, MATRIX = "lex", "revlex", "grlex", "matrix"
GENERAL, HOMOGENEOUS = "general", "homogeneous"


def _rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


class _Echelon:
    """Incremental independence test for sparse integer rows."""

    def __init__(self):
        self.rows = {}  # pivot column -> row with entry 1 there

    def add(self, row: Sequence[int]) -> bool:
        r = {j: Fraction(v) for j, v in enumerate(row) if v}
        while r:
            p = min(r)
            base = self.rows.get(p)
            if base is None:
                c = r[p]
                self.rows[p] = {j: v / c for j, v in r.items()}
                return True
            c = r[p]
            for j, v in base.items():
                nv = r.get(j, 0) - c * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
        return False


def _standard_matrix(kind: str, n: int) -> Tuple[Tuple[int, ...], ...]:
    def e(i):
        return tuple(1 if j == i else 0 for j in range(n))

    if kind == LEX:
        rows = [e(i) for i in range(n)]
    elif kind == GRLEX:
        rows = [(1,) * n] + [e(i) for i in range(n - 1)]
    elif kind == REVLEX:
        rows = [(1,) * n] + [tuple(-x for x in e(i)) for i in range(n - 1, 0, -1)]
    else:
        raise InvalidOrder(f"unknown order kind {kind!r}")
    return tuple(rows)


class TermOrder:
    """A term order on monomials over ``variables`` (largest first)."""

    __slots__ = ("kind", "matrix", "variables", "key", "_sparse")

    def __init__(self, kind: str, variables: Sequence[str],
                 matrix: Optional[Sequence[Sequence[int]]] = None, _checked: bool = False):
        self.kind = kind
        self.variables = tuple(variables)
        n = len(self.variables)
        if kind == MATRIX:
            if matrix is None:
                raise InvalidOrder("matrix order needs a matrix")
            rows = tuple(tuple(int(x) for x in r) for r in matrix)
            _validate_matrix(rows, n, full=not _checked)
            self.matrix = rows
        else:
            self.matrix = _standard_matrix(kind, n)
        self._sparse = tuple(tuple((j, v) for j, v in enumerate(r) if v) for r in self.matrix)
        self.key = self._make_key()

    @classmethod
    def lex(cls, variables):
        return cls(LEX, variables)

    @classmethod
    def revlex(cls, variables):
        return cls(REVLEX, variables)

    @classmethod
    def grlex(cls, variables):
        return cls(GRLEX, variables)

    @classmethod
    def from_matrix(cls, rows, variables):
        return cls(MATRIX, variables, rows)

    def _make_key(self) -> Callable[[Sequence[int]], tuple]:
        n = len(self.variables)
        if self.kind == LEX:
            return tuple
        if self.kind == GRLEX:
            return lambda a: (sum(a),) + tuple(a[: n - 1])
        if self.kind == REVLEX:
            idx = range(n - 1, 0, -1)
            return lambda a: (sum(a),) + tuple(-a[i] for i in idx)
        sparse = self._sparse
        return lambda a: tuple(sum(a[j] * v for j, v in r) for r in sparse)

    def matrix_key(self, a: Sequence[int]) -> tuple:
        return tuple(sum(a[j] * v for j, v in r) for r in self._sparse)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TermOrder) and self.matrix == other.matrix
                and self.variables == other.variables)

    def __hash__(self) -> int:
        return hash((self.matrix, self.variables))

    def __repr__(self) -> str:
        if self.kind == MATRIX:
            return f"TermOrder(matrix:{list(map(list, self.matrix))}, {' '.join(self.variables)})"
        return f"TermOrder({self.kind}, {' '.join(self.variables)})"

    def spec(self) -> str:
        """Text form accepted by :func:`parse_order`."""
        if self.kind == MATRIX:
            return "matrix:" + json.dumps([list(r) for r in self.matrix], separators=(",", ":"))
        return self.kind

    def sort_desc(self, monomials: Iterable[Monomial]) -> List[Monomial]:
        return sorted(monomials, key=self.key, reverse=True)


def _validate_matrix(rows, n: int, full: bool = True) -> None:
    if any(len(r) != n for r in rows):
        raise InvalidOrder(f"every matrix row needs {n} entries")
    if len(rows) != n or (full and _rank(rows) != n):
        raise InvalidOrder("matrix must be square and nonsingular to order monomials totally")
    for j in range(n):
        first = next((r[j] for r in rows if r[j] != 0), 0)
        if first <= 0:
            raise InvalidOrder(f"variable {j} is not above 1: first nonzero entry of its column must be positive")


def parse_order(text: str, variables: Sequence[str]) -> TermOrder:
    text = text.strip()
    low = text.lower()
    if low in (LEX, REVLEX, GRLEX):
        return TermOrder(low, variables)
    if low.startswith("matrix:"):
        try:
            rows = json.loads(text.split(":", 1)[1])
        except json.JSONDecodeError as exc:
            raise InvalidOrder(f"bad matrix literal: {exc}") from None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InvalidOrder("matrix must be a list of integer rows")
        return TermOrder(MATRIX, variables, rows)
    raise InvalidOrder(f"unknown order {text!r}")


# ---------------------------------------------------------------------------
# comparison and reliability
# ---------------------------------------------------------------------------


def compare(o: TermOrder, a: Monomial, b: Monomial) -> int:
    """-1, 0 or 1 as a is below, equal to or above b."""
    if len(a) != len(b) or len(a) != len(o.variables):
        raise VariableMismatch("monomials do not match the order's variables")
    ka, kb = o.key(a), o.key(b)
    return (ka > kb) - (ka < kb)


def is_reliable(o: TermOrder) -> bool:
    """Finite tails everywhere, i.e. the first matrix row is strictly positive."""
    return all(v > 0 for v in o.matrix[0])


def first_nonzero_rows(o: TermOrder) -> List[int]:
    n = len(o.variables)
    return [next(i for i, r in enumerate(o.matrix) if r[j] != 0) for j in range(n)]


def is_elimination_for(o: TermOrder, block: Iterable[Union[int, str]]) -> bool:
    """Whether every monomial touching ``block`` exceeds every block-free one."""
    idx = _indices(o, block)
    rest = [j for j in range(len(o.variables)) if j not in idx]
    if not idx or not rest:
        return True
    first = first_nonzero_rows(o)
    return max(first[j] for j in idx) < min(first[j] for j in rest)


def _indices(o: TermOrder, block) -> set:
    out = set()
    for v in block:
        out.add(o.variables.index(v) if isinstance(v, str) else v)
    return out


def elimination_order(o: TermOrder, block: Iterable[Union[int, str]]) -> TermOrder:
    """Block variables dominate; inside each block the order agrees with ``o``."""
    idx = _indices(o, block)
    n = len(o.variables)
    if not idx or len(idx) == n:
        return o
    rows = []
    ech = _Echelon()
    for part in (idx, set(range(n)) - idx):
        for r in o.matrix:
            cand = tuple(v if j in part else 0 for j, v in enumerate(r))
            if any(cand) and ech.add(cand):
                rows.append(cand)
    # nonsingular by construction, so only the column signs get checked
    return TermOrder(MATRIX, o.variables, rows, _checked=True)


# ---------------------------------------------------------------------------
# tails
# ---------------------------------------------------------------------------


def _excluder(exclude) -> Callable[[Monomial], bool]:
    if exclude is None:
        return lambda m: False
    if hasattr(exclude, "contains"):
        return exclude.contains
    if isinstance(exclude, (set, frozenset, list, tuple)):
        s = frozenset(tuple(m) for m in exclude)
        return s.__contains__
    if callable(exclude):
        return exclude
    raise TypeError(f"cannot exclude with {type(exclude).__name__}")


def _weighted_box(weights: Sequence[int], budget: int) -> Iterator[Monomial]:
    n = len(weights)
    cur = [0] * n

    def rec(i, left):
        if i == n:
            yield tuple(cur)
            return
        w = weights[i]
        for e in range(left // w + 1):
            cur[i] = e
            yield from rec(i + 1, left - e * w)
        cur[i] = 0

    yield from rec(0, budget)


def compositions(n: int, d: int) -> Iterator[Monomial]:
    """All exponent vectors of length n and total degree d."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in compositions(n - 1, d - e):
            yield (e,) + rest


def tail(o: TermOrder, m: Monomial, exclude=None) -> List[Monomial]:
    """Monomials strictly below m, minus excluded ones, largest first."""
    if not is_reliable(o):
        raise NotReliable(f"{o!r} has infinite tails (first row {list(o.matrix[0])})")
    m = tuple(m)
    w = o.matrix[0]
    budget = sum(a * b for a, b in zip(w, m))
    km = o.key(m)
    excl = _excluder(exclude)
    out = [b for b in _weighted_box(w, budget) if o.key(b) < km and not excl(b)]
    return o.sort_desc(out)


def htail(o: TermOrder, m: Monomial, exclude=None) -> List[Monomial]:
    """Same-degree monomials strictly below m, minus excluded ones."""
    m = tuple(m)
    km = o.key(m)
    excl = _excluder(exclude)
    out = [b for b in compositions(len(m), sum(m)) if o.key(b) < km and not excl(b)]
    return o.sort_desc(out)


# ---------------------------------------------------------------------------
# tail specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Allowed:
    """Per-generator restriction that keeps only the listed tail monomials."""

    monomials: frozenset

    def __init__(self, monomials: Iterable[Monomial]):
        object.__setattr__(self, "monomials", frozenset(tuple(m) for m in monomials))


@dataclass(frozen=True)
class TailSpec:
    """Which tail monomials receive a parameter.

    ``exclude`` is an ideal (anything with ``contains``) removed from every
    generator's tail.  ``per_generator`` optionally holds one entry per
    generator: ``None``, an :class:`Allowed` set, an explicit set of excluded
    monomials, or another ideal.
    """

    mode: str = GENERAL
    exclude: object = None
    per_generator: Optional[Tuple[object, ...]] = None

    def __post_init__(self):
        if self.mode not in (GENERAL, HOMOGENEOUS):
            raise ValueError(f"unknown tail mode {self.mode!r}")
        if self.per_generator is not None:
            object.__setattr__(self, "per_generator", tuple(self.per_generator))

    def restriction(self, i: int):
        if self.per_generator is None:
            return None
        return self.per_generator[i]


def format_monomials(monos: Iterable[Monomial], names: Sequence[str]) -> List[str]:
    return [mono_str(m, names) for m in monos]

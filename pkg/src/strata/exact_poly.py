"""Exact arithmetic kernel.

Three layers live here:

* X-monomials, plain tuples of exponents with a handful of helpers;
* :class:`ParamPoly`, sparse polynomials over Q in the parameter variables;
* :class:`GenericPolynomial`, polynomials in X whose coefficients are
  ``ParamPoly`` values.

Parameter monomials are packed into a single Python int, ``W`` bits per
variable, so multiplying two monomials is one integer addition.  Every
field keeps its top bit clear; that guard bit makes divisibility a single
subtraction-and-mask.  Coefficients are ``int`` or
:class:`fractions.Fraction`; integral fractions are folded back to ``int``
so the monic reduction loops never touch ``Fraction`` at all.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import VariableMismatch

Monomial = Tuple[int, ...]
Rational = Union[int, Fraction]

# ---------------------------------------------------------------------------
# X-monomials
# ---------------------------------------------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Return a / b; the caller guarantees ``divides(b, a)``."""
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def degree(a: Monomial) -> int:
    return sum(a)


def unit(n: int) -> Monomial:
    return (0,) * n


def mono_str(a: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, a):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def norm(c: Rational) -> Rational:
    """Fold an integral Fraction back to int."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def qdiv(a: Rational, b: Rational) -> Rational:
    if b == 1:
        return a
    if b == -1:
        return -a
    return norm(Fraction(a) / b)


# ---------------------------------------------------------------------------
# Parameter ring
# ---------------------------------------------------------------------------


class ParamRing:
    """Variable list of a parameter ring together with its packing layout."""

    __slots__ = ("names", "index", "width", "field_mask", "guard", "_hash")

    def __init__(self, names: Iterable[str], width: int = 16):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate parameter names")
        self.index = {name: i for i, name in enumerate(self.names)}
        self.width = width
        self.field_mask = (1 << width) - 1
        g = 1 << (width - 1)
        self.guard = sum(g << (i * width) for i in range(len(self.names)))
        self._hash = hash((self.names, width))

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParamRing)
            and self.width == other.width
            and self.names == other.names
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ParamRing({' '.join(self.names)})"

    # packing -------------------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise VariableMismatch("exponent vector length differs from ring size")
        key = 0
        limit = 1 << (self.width - 1)
        for i, e in enumerate(exps):
            if e < 0 or e >= limit:
                raise ValueError(f"exponent {e} out of range")
            if e:
                key |= e << (i * self.width)
        return key

    def var_key(self, i: int) -> int:
        return 1 << (i * self.width)

    def unpack(self, key: int) -> Tuple[int, ...]:
        out = [0] * len(self.names)
        for i, e in self.fields(key):
            out[i] = e
        return tuple(out)

    def fields(self, key: int) -> Iterator[Tuple[int, int]]:
        """Yield ``(variable index, exponent)`` for the nonzero fields of key."""
        w, mask = self.width, self.field_mask
        while key:
            i = ((key & -key).bit_length() - 1) // w
            e = (key >> (i * w)) & mask
            yield i, e
            key ^= e << (i * w)

    def key_degree(self, key: int) -> int:
        return sum(e for _, e in self.fields(key))

    def key_divides(self, a: int, b: int) -> bool:
        return ((b - a) & self.guard) == 0

    def key_lcm(self, a: int, b: int) -> int:
        fa = dict(self.fields(a))
        for i, e in self.fields(b):
            if e > fa.get(i, 0):
                fa[i] = e
        w = self.width
        return sum(e << (i * w) for i, e in fa.items())

    def key_str(self, key: int) -> str:
        parts = []
        for i, e in sorted(self.fields(key)):
            parts.append(self.names[i] if e == 1 else f"{self.names[i]}^{e}")
        return "*".join(parts) if parts else "1"

    # constructors ----------------------------------------------------------

    def zero(self) -> "ParamPoly":
        return ParamPoly(self, {})

    def one(self) -> "ParamPoly":
        return ParamPoly(self, {0: 1})

    def const(self, c: Rational) -> "ParamPoly":
        c = norm(c)
        return ParamPoly(self, {0: c} if c else {})

    def var(self, v: Union[int, str]) -> "ParamPoly":
        i = self.index[v] if isinstance(v, str) else v
        return ParamPoly(self, {self.var_key(i): 1})

    def gens(self) -> Tuple["ParamPoly", ...]:
        return tuple(self.var(i) for i in range(len(self.names)))

    def from_dict(self, terms: Mapping[Sequence[int], Rational]) -> "ParamPoly":
        out: Dict[int, Rational] = {}
        for exps, c in terms.items():
            if c:
                k = self.pack(exps)
                v = out.get(k, 0) + c
                if v:
                    out[k] = norm(v)
                else:
                    out.pop(k, None)
        return ParamPoly(self, out)


# ---------------------------------------------------------------------------
# Raw dict kernels (shared by ParamPoly and the reduction loops)
# ---------------------------------------------------------------------------


def add_into(target: Dict[int, Rational], src: Mapping[int, Rational],
             factor: Rational = 1, shift: int = 0) -> None:
    """target += factor * x^shift * src, in place."""
    get = target.get
    if factor == 1:
        for k, c in src.items():
            k += shift
            v = get(k, 0) + c
            if v:
                target[k] = v
            else:
                del target[k]
    else:
        for k, c in src.items():
            k += shift
            v = get(k, 0) + factor * c
            if v:
                target[k] = v
            else:
                del target[k]


def mul_dicts(a: Mapping[int, Rational], b: Mapping[int, Rational]) -> Dict[int, Rational]:
    if len(a) < len(b):
        a, b = b, a
    out: Dict[int, Rational] = {}
    for kb, cb in b.items():
        add_into(out, a, cb, kb)
    return out


def _normalize_coeffs(terms: Dict[int, Rational]) -> Dict[int, Rational]:
    for k, c in terms.items():
        if type(c) is Fraction and c.denominator == 1:
            terms[k] = c.numerator
    return terms


# ---------------------------------------------------------------------------
# ParamPoly
# ---------------------------------------------------------------------------


class ParamPoly:
    """Polynomial over Q in the variables of a :class:`ParamRing`.

    ``terms`` maps packed monomials to nonzero coefficients.  Values are
    treated as immutable once constructed.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ParamRing, terms: Dict[int, Rational]):
        self.ring = ring
        self.terms = terms

    # basic protocol --------------------------------------------------------

    def _check(self, other: "ParamPoly") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise VariableMismatch("parameter polynomials over different rings")

    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms)
        return ParamPoly(self.ring, _normalize_coeffs(out))

    __radd__ = __add__

    def __sub__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms, -1)
        return ParamPoly(self.ring, _normalize_coeffs(out))

    def __rsub__(self, other) -> "ParamPoly":
        return (-self) + other

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            other = norm(other)
            if not other:
                return self.ring.zero()
            return ParamPoly(self.ring, {k: norm(c * other) for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ParamPoly(self.ring, _normalize_coeffs(mul_dicts(self.terms, other.terms)))

    __rmul__ = __mul__

    def __truediv__(self, c: Rational) -> "ParamPoly":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("division of a parameter polynomial by zero")
        return ParamPoly(self.ring, {k: qdiv(v, c) for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "ParamPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # inspection ------------------------------------------------------------

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Rational]]:
        """Terms as ``(exponent vector, coefficient)`` in canonical order."""
        for k in self.sorted_keys():
            yield self.ring.unpack(k), self.terms[k]

    def sorted_keys(self) -> list:
        """Packed monomials, graded then lex with the first variable largest."""
        ring = self.ring
        n = len(ring)

        def key(k):
            e = ring.unpack(k)
            return (sum(e), e)

        return sorted(self.terms, key=key, reverse=True) if n else list(self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get(0, 0)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.key_degree(k) for k in self.terms)

    def variables(self) -> set:
        """Indices of the variables that occur."""
        out = set()
        for k in self.terms:
            out.update(i for i, _ in self.ring.fields(k))
        return out

    def linear_part(self) -> "ParamPoly":
        ring = self.ring
        out = {}
        for k, c in self.terms.items():
            if k and ring.key_degree(k) == 1:
                out[k] = c
        return ParamPoly(ring, out)

    def coefficient(self, exps: Sequence[int]) -> Rational:
        return self.terms.get(self.ring.pack(exps), 0)

    # operations ------------------------------------------------------------

    def evaluate_at_zero(self, variables: Iterable[Union[int, str]]) -> "ParamPoly":
        """Specialize the given variables to 0 (drop every term that uses one)."""
        ring = self.ring
        mask = 0
        for v in variables:
            i = ring.index[v] if isinstance(v, str) else v
            mask |= ring.field_mask << (i * ring.width)
        if not mask:
            return self
        return ParamPoly(ring, {k: c for k, c in self.terms.items() if not k & mask})

    def substitute(self, values: Mapping[int, "ParamPoly"]) -> "ParamPoly":
        """Replace variable index i by values[i] everywhere."""
        return ParamPoly(self.ring, _normalize_coeffs(
            substitute_dict(self.ring, self.terms, {i: p.terms for i, p in values.items()})))

    def primitive(self) -> "ParamPoly":
        """Scale to coprime integer coefficients with a positive leading one.

        "Leading" here is the first term of the canonical (graded, first
        variable largest) ordering used for rendering.
        """
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            if type(c) is Fraction:
                den = lcm(den, c.denominator)
        ints = {k: int(c * den) for k, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
        lead = self.sorted_keys()[0]
        if ints[lead] < 0:
            g = -g
        return ParamPoly(self.ring, {k: c // g for k, c in ints.items()})

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        out = []
        for k in self.sorted_keys():
            c = self.terms[k]
            mono = ring.key_str(k)
            neg = c < 0
            a = -c if neg else c
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    __str__ = to_str

    def __repr__(self) -> str:
        return f"ParamPoly({self.to_str()})"


def substitute_dict(ring: ParamRing, terms: Mapping[int, Rational],
                    values: Mapping[int, Mapping[int, Rational]],
                    mask: int = None, cache: dict = None) -> Dict[int, Rational]:
    """Raw substitution kernel; ``mask`` covers the fields of substituted variables."""
    w, fm = ring.width, ring.field_mask
    if mask is None:
        mask = 0
        for i in values:
            mask |= fm << (i * w)
    if cache is None:
        cache = {}
    out: Dict[int, Rational] = {}
    get = out.get
    for k, c in terms.items():
        hit = k & mask
        if not hit:
            v = get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
            continue
        rest = k ^ hit
        acc = {rest: c}
        for i, e in ring.fields(hit):
            pw = cache.get((i, e))
            if pw is None:
                pw = _power(values[i], e, cache, i)
            acc = mul_dicts(acc, pw)
        add_into(out, acc)
    return out


def _power(base: Mapping[int, Rational], e: int, cache: dict, i: int) -> Dict[int, Rational]:
    prev = cache.get((i, e - 1)) if e > 1 else None
    if e == 1:
        result = dict(base)
    elif prev is not None:
        result = mul_dicts(prev, base)
    else:
        result = mul_dicts(_power(base, e - 1, cache, i), base)
    cache[(i, e)] = result
    return result


# ---------------------------------------------------------------------------
# GenericPolynomial
# ---------------------------------------------------------------------------


class GenericPolynomial:
    """Polynomial in X with :class:`ParamPoly` coefficients.

    ``lm`` is the marked leading monomial for basis elements (whose
    coefficient must be 1); it is ``None`` for unmarked intermediates such
    as S-polynomials.
    """

    __slots__ = ("ring", "nvars", "terms", "lm")

    def __init__(self, ring: ParamRing, nvars: int,
                 terms: Dict[Monomial, ParamPoly], lm: Monomial = None):
        self.ring = ring
        self.nvars = nvars
        self.terms = {m: c for m, c in terms.items() if c.terms}
        self.lm = lm
        if lm is not None and self.terms.get(lm) != ring.one():
            raise ValueError("marked leading monomial must carry coefficient 1")

    @classmethod
    def from_raw(cls, ring: ParamRing, nvars: int,
                 raw: Mapping[Monomial, Mapping[int, Rational]],
                 lm: Monomial = None) -> "GenericPolynomial":
        return cls(ring, nvars,
                   {m: ParamPoly(ring, _normalize_coeffs(dict(c))) for m, c in raw.items() if c},
                   lm)

    def raw(self) -> Dict[Monomial, Dict[int, Rational]]:
        return {m: dict(c.terms) for m, c in self.terms.items()}

    def _check(self, other: "GenericPolynomial") -> None:
        if self.nvars != other.nvars or self.ring != other.ring:
            raise VariableMismatch("generic polynomials over different variable lists")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenericPolynomial):
            return NotImplemented
        return (self.nvars == other.nvars and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def coefficient(self, m: Monomial) -> ParamPoly:
        return self.terms.get(m, self.ring.zero())

    def monomials(self) -> list:
        return list(self.terms)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def __add__(self, other: "GenericPolynomial") -> "GenericPolynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return GenericPolynomial(self.ring, self.nvars, out)

    def __neg__(self) -> "GenericPolynomial":
        return GenericPolynomial(self.ring, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GenericPolynomial") -> "GenericPolynomial":
        return self + (-other)

    def mul_by_term(self, m: Monomial, c: ParamPoly = None) -> "GenericPolynomial":
        """Multiply every X-monomial by ``m`` and every coefficient by ``c``."""
        if c is None:
            terms = {mono_mul(k, m): v for k, v in self.terms.items()}
        else:
            terms = {mono_mul(k, m): v * c for k, v in self.terms.items()}
        lm = mono_mul(self.lm, m) if self.lm is not None and (c is None or c == 1) else None
        return GenericPolynomial(self.ring, self.nvars, terms, lm)

    def evaluate_at_zero(self, variables) -> "GenericPolynomial":
        variables = list(variables)
        return GenericPolynomial(
            self.ring, self.nvars,
            {m: c.evaluate_at_zero(variables) for m, c in self.terms.items()},
            self.lm)

    def to_str(self, xnames: Sequence[str], order=None) -> str:
        if not self.terms:
            return "0"
        monos = list(self.terms)
        if order is not None:
            monos.sort(key=order.key, reverse=True)
        else:
            monos.sort(key=lambda a: (sum(a), a), reverse=True)
        parts = []
        for m in monos:
            c = self.terms[m]
            ms = mono_str(m, xnames)
            if c == 1:
                parts.append(ms)
            elif ms == "1":
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{ms}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.nvars)]
        return f"GenericPolynomial({self.to_str(names)})"

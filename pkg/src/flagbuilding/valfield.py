"""Exact ordered valued field of generalized polynomial fractions.

Scalars are fractions p(t)/q(t) of generalized polynomials: finite sums
sum c_a * t^a with rational coefficients c_a and rational exponents a.
The symbol t carries valuation -1, so v(sum c_a t^a) = -max(a), the
field is ordered by the sign of the coefficient at the dominant
exponent, and every computation is exact (no floating point anywhere).
"""

from __future__ import annotations

import random
from fractions import Fraction


class _Infinity:
    """Positive infinity for valuations and difference-cone bounds."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("flagbuilding-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("negative infinity is not used in this model")


INF = _Infinity()


def ext_add(a, b):
    """Sum in Q union {+inf}."""
    if a is INF or b is INF:
        return INF
    return a + b


def rational_to_str(x) -> str:
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str):
    if s == "inf":
        return INF
    return Fraction(s)


class GenPoly:
    """Generalized polynomial: finite Q-combination of monomials t^a, a in Q.

    Terms are stored as a tuple of (exponent, coefficient) pairs sorted by
    descending exponent, with no zero coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for e, c in terms:
            e = Fraction(e)
            c = Fraction(c)
            if c == 0:
                continue
            acc = merged.get(e)
            if acc is None:
                merged[e] = c
            else:
                acc = acc + c
                if acc == 0:
                    del merged[e]
                else:
                    merged[e] = acc
        self.terms = tuple(sorted(merged.items(), key=lambda t: t[0], reverse=True))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls(((0, 1),))

    @classmethod
    def const(cls, c):
        return cls(((0, c),))

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls(((exponent, coeff),))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Maximal exponent, or None for the zero polynomial."""
        return self.terms[0][0] if self.terms else None

    def low(self):
        """Minimal exponent, or None for the zero polynomial."""
        return self.terms[-1][0] if self.terms else None

    def lead_coeff(self):
        return self.terms[0][1] if self.terms else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, GenPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __neg__(self):
        return GenPoly(tuple((e, -c) for e, c in self.terms))

    def __add__(self, other):
        return GenPoly(self.terms + other.terms)

    def __sub__(self, other):
        return GenPoly(self.terms + tuple((e, -c) for e, c in other.terms))

    def __mul__(self, other):
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                c = acc.get(e, Fraction(0)) + c1 * c2
                acc[e] = c
        return GenPoly(acc.items())

    def mul_term(self, exponent, coeff):
        return GenPoly(tuple((e + exponent, c * coeff) for e, c in self.terms))

    def exact_div(self, other: "GenPoly") -> "GenPoly":
        """Quotient self/other when the division is exact; raise otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("generalized polynomial division by zero")
        if self.is_zero():
            return GenPoly()
        floor = self.low() - other.low()
        lead_e, lead_c = other.terms[0]
        out = []
        rem = self
        while not rem.is_zero():
            qe = rem.terms[0][0] - lead_e
            if qe < floor:
                raise ArithmeticError("generalized polynomial division is not exact")
            qc = rem.terms[0][1] / lead_c
            out.append((qe, qc))
            rem = rem - other.mul_term(qe, qc)
        return GenPoly(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^({e})")
        return " + ".join(parts)

    def to_json(self):
        return [[rational_to_str(e), rational_to_str(c)] for e, c in self.terms]

    @classmethod
    def from_json(cls, data):
        return cls((Fraction(e), Fraction(c)) for e, c in data)


class ValuedScalar:
    """Element of the valued field: a fraction num/den of GenPolys.

    Canonical form: den is nonzero with minimal exponent 0 and leading
    coefficient 1.  Equality is decided by cross-multiplication, so no
    polynomial gcd machinery is needed.
    """

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num: GenPoly, den: GenPoly = None):
        if den is None:
            den = GenPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("denominator is zero")
        if num.is_zero():
            self.num = GenPoly()
            self.den = GenPoly.one()
            return
        shift = -den.low()
        scale = 1 / den.lead_coeff()
        self.num = num.mul_term(shift, scale)
        self.den = den.mul_term(shift, scale)

    @classmethod
    def from_rational(cls, q) -> "ValuedScalar":
        return cls(GenPoly.const(Fraction(q)))

    @classmethod
    def zero(cls):
        return cls(GenPoly())

    @classmethod
    def one(cls):
        return cls(GenPoly.one())

    @classmethod
    def t_power(cls, exponent, coeff=1) -> "ValuedScalar":
        return cls(GenPoly.monomial(Fraction(exponent), Fraction(coeff)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """Sign in the order of the field: the sign of the dominant coefficient."""
        if self.is_zero():
            return 0
        return 1 if self.num.lead_coeff() > 0 else -1

    def valuation(self):
        """-deg(num) + deg(den); +inf exactly for zero."""
        if self.is_zero():
            return INF
        return -self.num.degree() + self.den.degree()

    def __add__(self, other):
        other = as_scalar(other)
        if self.den.terms == other.den.terms:
            return ValuedScalar(self.num + other.num, self.den)
        return ValuedScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_scalar(other)
        if self.den.terms == other.den.terms:
            return ValuedScalar(self.num - other.num, self.den)
        return ValuedScalar(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        other = as_scalar(other)
        return ValuedScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_scalar(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in the valued field")
        return ValuedScalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __neg__(self):
        return ValuedScalar(-self.num, self.den)

    def inv(self) -> "ValuedScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in the valued field")
        return ValuedScalar(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = ValuedScalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = as_scalar(other)
        return (self.num * other.den) == (other.num * self.den)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __lt__(self, other):
        return (self - as_scalar(other)).sign() < 0

    def __le__(self, other):
        return (self - as_scalar(other)).sign() <= 0

    def __gt__(self, other):
        return (self - as_scalar(other)).sign() > 0

    def __ge__(self, other):
        return (self - as_scalar(other)).sign() >= 0

    def __repr__(self):
        if self.den == GenPoly.one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(GenPoly.from_json(data["num"]), GenPoly.from_json(data["den"]))


def as_scalar(x) -> ValuedScalar:
    """Coerce ints, Fractions and ValuedScalars into the field."""
    if isinstance(x, ValuedScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ValuedScalar.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into the valued field")


#: The distinguished positive infinitesimal-valuation element: v(T) = -1.
T = ValuedScalar.t_power(1)

ZERO = ValuedScalar.zero()
ONE = ValuedScalar.one()


def compare(x: ValuedScalar, y: ValuedScalar) -> str:
    """Three-way order comparison, returned as '<', '=' or '>'."""
    s = (as_scalar(x) - as_scalar(y)).sign()
    return "<" if s < 0 else ("=" if s == 0 else ">")


def valuation(x) -> Fraction:
    return as_scalar(x).valuation()


# ---------------------------------------------------------------------------
# deterministic sampling helpers (used by generators, verification and tests)


def random_rational(rng: random.Random, max_num=9, max_den=9, signed=True) -> Fraction:
    num = rng.randint(1, max_num)
    den = rng.randint(1, max_den)
    if signed and rng.random() < 0.5:
        num = -num
    return Fraction(num, den)


def random_genpoly(rng: random.Random, terms=2, exponent_denominator=6) -> GenPoly:
    n = rng.randint(1, max(1, terms))
    pairs = []
    for _ in range(n):
        e = Fraction(rng.randint(-2 * exponent_denominator, 2 * exponent_denominator),
                     exponent_denominator)
        pairs.append((e, random_rational(rng)))
    return GenPoly(pairs)


def random_scalar(rng: random.Random, terms=2, exponent_denominator=6,
                  nonzero=False) -> ValuedScalar:
    num = random_genpoly(rng, terms, exponent_denominator)
    while nonzero and num.is_zero():
        num = random_genpoly(rng, terms, exponent_denominator)
    den = random_genpoly(rng, terms, exponent_denominator)
    while den.is_zero():
        den = random_genpoly(rng, terms, exponent_denominator)
    return ValuedScalar(num, den)


def random_positive_scalar(rng: random.Random, exponent_denominator=6,
                           extra_terms=0, exponent_span=2) -> ValuedScalar:
    """Positive field element with a denominator-bounded random leading exponent.

    The leading coefficient is a positive rational; optional lower-order terms
    may carry either sign (the order only sees the dominant term).
    """
    lead_exp = Fraction(
        rng.randint(-exponent_span * exponent_denominator, exponent_span * exponent_denominator),
        exponent_denominator)
    pairs = [(lead_exp, random_rational(rng, signed=False))]
    for j in range(1, extra_terms + 1):
        pairs.append((lead_exp - Fraction(j, exponent_denominator), random_rational(rng)))
    return ValuedScalar(GenPoly(pairs))

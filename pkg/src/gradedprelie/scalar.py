"""Exact scalars: Gaussian rationals Q(i) and rational functions Q(i)(t).

Two concrete scalar types share one informal interface (arithmetic dunders,
``is_zero``, ``str``/``parse_scalar`` round trip).  Plain ``int`` and
``Fraction`` operands are accepted by both.  Mixing a :class:`GaussRational`
with a :class:`RationalFunction` raises :class:`MixedVariant`; use
:func:`lift` to convert explicitly.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Union

from .errors import DivisionByZero, MixedVariant, PoleAtPoint

Number = Union[int, Fraction]


class GaussRational:
    """The number (a + b*i)/d with integers a, b, d; d > 0 and gcd(a, b, d) = 1."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: Number = 0, im: Number = 0):
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussRational:
        obj = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> GaussRational:
        return GaussRational._raw(self._a, -self._b, self._d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> GaussRational:
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, int):
            return GaussRational._raw(other, 0, 1)
        if isinstance(other, Fraction):
            return GaussRational._raw(other.numerator, 0, other.denominator)
        if isinstance(other, RationalFunction):
            raise MixedVariant("cannot combine GaussRational with RationalFunction")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            return GaussRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussRational._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __neg__(self) -> GaussRational:
        return GaussRational._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> GaussRational:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        if b1 == 0 and b2 == 0:
            return GaussRational._raw(a1 * a2, 0, self._d * o._d)
        return GaussRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> GaussRational:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        a, b, d = self._a, self._b, self._d
        return GaussRational._raw(d * a, -d * b, a * a + b * b)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int) -> GaussRational:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return False
        try:
            o = self._coerce(other)
        except MixedVariant:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __str__(self) -> str:
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if im_ == 1:
            im_str = "i"
        elif im_ == -1:
            im_str = "-i"
        else:
            im_str = f"{im_}*i"
        if re_ == 0:
            return im_str
        return f"{re_}{'' if im_str.startswith('-') else '+'}{im_str}"

    def __repr__(self) -> str:
        return f"GaussRational({str(self)!r})"

    def __reduce__(self):
        return (GaussRational, (self.re, self.im))


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)


# -- dense polynomials over Q(i) -------------------------------------------


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Dense univariate polynomial in t, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([GaussRational._coerce(c) for c in coeffs])

    @classmethod
    def _from_trimmed(cls, coeffs: tuple) -> Poly:
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == ONE

    def lead(self) -> GaussRational:
        return self.coeffs[-1]

    def __add__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly._from_trimmed(_trim(out))

    def __neg__(self) -> Poly:
        return Poly._from_trimmed(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._from_trimmed(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._from_trimmed(_trim(out))

    def scale(self, c: GaussRational) -> Poly:
        if c.is_zero():
            return Poly._from_trimmed(())
        return Poly._from_trimmed(tuple(x * c for x in self.coeffs))

    def monic(self) -> Poly:
        return self.scale(self.lead().inverse())

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.lead().inverse()
        quot = [ZERO] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            c = rem[-1] * inv_lead
            quot[shift] = c
            for k, y in enumerate(other.coeffs):
                rem[shift + k] = rem[shift + k] - c * y
            rem.pop()
            rem = list(_trim(rem))
        return Poly._from_trimmed(_trim(quot)), Poly._from_trimmed(tuple(rem))

    def __call__(self, x: GaussRational) -> GaussRational:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        multi = sum(1 for c in self.coeffs if not c.is_zero()) > 1
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            both = not c.is_real() and c.re != 0
            if k == 0:
                pieces.append(f"({cs})" if both and multi else cs)
                continue
            mono = "t" if k == 1 else f"t^{k}"
            if c == ONE:
                pieces.append(mono)
            elif c == -ONE:
                pieces.append("-" + mono)
            elif both:
                pieces.append(f"({cs})*{mono}")
            else:
                pieces.append(f"{cs}*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


POLY_ONE = Poly._from_trimmed((ONE,))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    return p if p.is_zero() else p.monic()


# -- rational functions -----------------------------------------------------


class RationalFunction:
    """Reduced fraction num/den of polynomials in t with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly(num)
        den = POLY_ONE if den is None else (den if isinstance(den, Poly) else Poly(den))
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, POLY_ONE
            return
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lead = den.lead()
        if lead != ONE:
            inv = lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def _reduced(cls, num: Poly, den: Poly) -> RationalFunction:
        r = object.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def constant(cls, c) -> RationalFunction:
        c = GaussRational._coerce(c)
        return cls._reduced(Poly._from_trimmed(_trim([c])), POLY_ONE)

    @classmethod
    def t(cls) -> RationalFunction:
        return cls._reduced(Poly._from_trimmed((ZERO, ONE)), POLY_ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> GaussRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else ZERO

    def __bool__(self) -> bool:
        return not self.is_zero()

    @staticmethod
    def _coerce(other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        if isinstance(other, GaussRational):
            raise MixedVariant("cannot combine RationalFunction with GaussRational")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RationalFunction._reduced(self.num + o.num, POLY_ONE)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._reduced(-self.num, self.den)

    def __pos__(self) -> RationalFunction:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RationalFunction._reduced(Poly._from_trimmed(()), POLY_ONE)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        # cross-cancel so the product is already reduced
        g1 = poly_gcd(n1, d2)
        if not g1.is_one():
            n1, d2 = n1.divmod(g1)[0], d2.divmod(g1)[0]
        g2 = poly_gcd(n2, d1)
        if not g2.is_one():
            n2, d1 = n2.divmod(g2)[0], d1.divmod(g2)[0]
        num, den = n1 * n2, d1 * d2
        lead = den.lead()
        if lead != ONE:
            inv = lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction._reduced(num, den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        inv = den.lead().inverse()
        return RationalFunction._reduced(num.scale(inv), den.scale(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int) -> RationalFunction:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = RationalFunction.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRational):
            return False
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def __reduce__(self):
        return (parse_scalar, (str(self), True))


T = RationalFunction.t()

Scalar = Union[GaussRational, RationalFunction]


def evaluate(r: RationalFunction, point) -> GaussRational:
    """Substitute t = point exactly."""
    point = GaussRational._coerce(point)
    den = r.den(point)
    if den.is_zero():
        raise PoleAtPoint(f"{r} has a pole at t = {point}")
    return r.num(point) / den


def is_integer_inverse(b) -> bool:
    """True iff b = 1/k for some nonzero integer k.

    A non-constant rational function is a generic formal parameter and is
    never the inverse of an integer.
    """
    if isinstance(b, RationalFunction):
        if not b.is_constant():
            return False
        b = b.constant_value()
    b = GaussRational._coerce(b)
    if b.is_zero() or not b.is_real():
        return False
    return abs(b.re.numerator) == 1


def lift(x, like):
    """Convert int, Fraction or GaussRational ``x`` into the variant of ``like``."""
    if isinstance(like, RationalFunction):
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction.constant(x)
    if isinstance(x, RationalFunction):
        if x.is_constant():
            return x.constant_value()
        raise MixedVariant(f"cannot lower {x} to a Gaussian rational")
    return GaussRational._coerce(x)


def zero_like(x):
    return lift(0, x)


def one_like(x):
    return lift(1, x)


def is_symbolic(x) -> bool:
    return isinstance(x, RationalFunction)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([it])|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, symbolic: bool):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
            self.tokens.append(m.group(1) or m.group(2) or ("^" if m.group(3) == "**" else m.group(3)))
            pos = m.end()
        self.pos = 0
        self.symbolic = symbolic
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ValueError(f"unexpected end of scalar {self.text!r}")
        self.pos += 1
        return tok

    def _lift_pair(self, x, y):
        if isinstance(x, RationalFunction) or isinstance(y, RationalFunction):
            return lift(x, T), lift(y, T)
        return x, y

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val, rhs = self._lift_pair(val, rhs)
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            val, rhs = self._lift_pair(val, rhs)
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ValueError(f"exponent must be an integer in {self.text!r}")
            return base ** (sign * int(tok))
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return GaussRational(int(tok))
        if tok == "i":
            return I
        if tok == "t":
            if not self.symbolic:
                raise ValueError(f"formal parameter t in non-symbolic scalar {self.text!r}")
            return T
        if tok == "(":
            val = self.expr()
            if self.take() != ")":
                raise ValueError(f"unbalanced parentheses in {self.text!r}")
            return val
        raise ValueError(f"unexpected token {tok!r} in {self.text!r}")


def parse_scalar(text: str, symbolic: bool | None = None) -> Scalar:
    """Parse the text rendering of a scalar.

    With ``symbolic=None`` the variant is inferred: a rational function iff
    the text mentions ``t``.  ``symbolic=True`` always returns a
    :class:`RationalFunction`; ``symbolic=False`` rejects ``t``.
    """
    allow_t = symbolic is not False
    p = _Parser(str(text), allow_t)
    val = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input in scalar {text!r}")
    if symbolic:
        return lift(val, T)
    return val

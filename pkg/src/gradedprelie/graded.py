"""Finitely supported vectors sum(c_i * e_i) indexed by integer degrees."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MixedVariant
from .scalar import ONE, GaussRational, RationalFunction, Scalar, parse_scalar


def _variant(c) -> type:
    return RationalFunction if isinstance(c, RationalFunction) else GaussRational


class Element:
    """Sparse graded vector; zero coefficients are never stored.

    Terms are kept in ascending degree order so iteration and rendering are
    deterministic.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Scalar] = {}
        for deg, c in items:
            if isinstance(c, (int, Fraction)):
                c = GaussRational._coerce(c)
            acc[int(deg)] = acc[int(deg)] + c if int(deg) in acc else c
        self._terms = {d: acc[d] for d in sorted(acc) if not acc[d].is_zero()}
        variants = {_variant(c) for c in self._terms.values()}
        if len(variants) > 1:
            raise MixedVariant("element mixes scalar variants")

    @classmethod
    def _canonical(cls, terms: dict[int, Scalar]) -> Element:
        el = object.__new__(cls)
        el._terms = {d: terms[d] for d in sorted(terms) if not terms[d].is_zero()}
        return el

    @classmethod
    def basis(cls, degree: int, coeff: Scalar = ONE) -> Element:
        return cls._canonical({int(degree): coeff})

    @classmethod
    def zero(cls) -> Element:
        return cls._canonical({})

    @property
    def terms(self) -> dict[int, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[int]:
        return list(self._terms)

    def coefficient_at(self, degree: int, zero: Scalar | None = None) -> Scalar:
        if degree in self._terms:
            return self._terms[degree]
        if zero is not None:
            return zero
        if self._terms:
            c = next(iter(self._terms.values()))
            return c - c
        return GaussRational(0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero element has no degree")
        return next(iter(self._terms))

    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero element has no degree")
        return next(reversed(self._terms))

    def _variant(self):
        return _variant(next(iter(self._terms.values()))) if self._terms else None

    def _check_compatible(self, other: Element) -> None:
        mine, theirs = self._variant(), other._variant()
        if mine is not None and theirs is not None and mine is not theirs:
            raise MixedVariant("elements use different scalar variants")

    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for d, c in other._terms.items():
            out[d] = out[d] + c if d in out else c
        return Element._canonical(out)

    def __neg__(self) -> Element:
        return Element._canonical({d: -c for d, c in self._terms.items()})

    def __sub__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> Element:
        return Element._canonical({d: c * v for d, v in self._terms.items()})

    def __rmul__(self, c) -> Element:
        return self.scale(c)

    def map_coefficients(self, fn) -> Element:
        """Apply ``fn(degree, coeff)`` to every stored term."""
        return Element._canonical({d: fn(d, c) for d, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*e[{d}]" for d, c in self._terms.items())

    def __repr__(self) -> str:
        return f"Element({str(self)})"

    def to_json(self) -> dict:
        return {"terms": [[d, str(c)] for d, c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: dict, symbolic: bool | None = None) -> Element:
        return cls((int(d), parse_scalar(c, symbolic)) for d, c in data["terms"])


def e(degree: int, coeff: Scalar = ONE) -> Element:
    """Shorthand for the basis vector ``coeff * e_degree``."""
    return Element.basis(degree, coeff)

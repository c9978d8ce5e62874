"""Formal vector fields c * x^alpha * exp(lambda*x) d/dx on the line.

The pre-Lie product is (u d/dx) o (v d/dx) = v * u' d/dx.  With it,
x^(1+a*i) d/dx multiplies like e_i in A_a and exp(i*x) d/dx like e_i in B_0.
Exponents are exact scalars treated as formal symbols: x^alpha for symbolic
alpha only obeys d/dx x^alpha = alpha * x^(alpha-1).  No domain, branch cut or
convergence question is modeled.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NoInjectionA0
from .graded import Element
from .prelie import ClosedB, StructureMap, product
from .scalar import GaussRational, RationalFunction, Scalar, lift


class VectorField:
    """Finite sum of terms c * x^alpha * exp(lambda*x) d/dx, keyed by (alpha, lambda)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        terms = list(terms)
        like = next(
            (s for t in terms for s in t if isinstance(s, RationalFunction)), GaussRational(1)
        )
        acc: dict = {}
        for c, alpha, lam in terms:
            c, alpha, lam = lift(c, like), lift(alpha, like), lift(lam, like)
            key = (alpha, lam)
            acc[key] = acc[key] + c if key in acc else c
        self._terms = {k: c for k, c in acc.items() if not c.is_zero()}

    @classmethod
    def _from(cls, terms: dict) -> VectorField:
        vf = object.__new__(cls)
        vf._terms = {k: c for k, c in terms.items() if not c.is_zero()}
        return vf

    @classmethod
    def term(cls, c=1, alpha=0, lam=0) -> VectorField:
        return cls([(c, alpha, lam)])

    def terms(self) -> list[tuple[Scalar, Scalar, Scalar]]:
        return [(c, a, l) for (a, l), c in self._sorted()]

    def _sorted(self):
        return sorted(self._terms.items(), key=lambda kv: (str(kv[0][1]), str(kv[0][0])))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: VectorField) -> VectorField:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return VectorField._from(out)

    def __neg__(self) -> VectorField:
        return VectorField._from({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: VectorField) -> VectorField:
        return self + (-other)

    def scale(self, s) -> VectorField:
        return VectorField._from({k: c * s for k, c in self._terms.items()})

    def derivative(self) -> list[tuple[Scalar, Scalar, Scalar]]:
        """Terms of the derivative of the coefficient function."""
        out = []
        for (alpha, lam), c in self._terms.items():
            out.append((c * alpha, alpha - 1, lam))
            out.append((c * lam, alpha, lam))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._sorted()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{c} * x^({alpha}) * exp({lam}*x) d/dx" for (alpha, lam), c in self._sorted()
        )

    def __repr__(self) -> str:
        return f"VectorField({str(self)!r})"

    def to_json(self) -> list:
        return [[str(c), str(a), str(l)] for c, a, l in self.terms()]


def vf_product(u: VectorField, v: VectorField) -> VectorField:
    """(u d/dx) o (v d/dx) = v * u' d/dx."""
    out: dict = {}
    for c1, a1, l1 in u.derivative():
        if c1.is_zero():
            continue
        for (a2, l2), c2 in v._terms.items():
            key = (a1 + a2, l1 + l2)
            c = c1 * c2
            out[key] = out[key] + c if key in out else c
    return VectorField._from(out)


@dataclass
class Realization:
    """Images of the basis vectors e_i for |i| <= radius."""

    assignment: dict
    radius: int

    def __post_init__(self):
        for i in range(-self.radius, self.radius + 1):
            if i not in self.assignment:
                raise ValueError(f"realization does not cover e_{i}")
            if self.assignment[i].is_zero():
                raise ValueError(f"e_{i} is sent to zero")

    def __getitem__(self, i: int) -> VectorField:
        return self.assignment[i]

    def apply(self, x: Element) -> VectorField:
        out = VectorField()
        for d, c in x.items():
            out = out + self.assignment[d].scale(c)
        return out

    def to_json(self) -> dict:
        return {str(i): self.assignment[i].to_json() for i in sorted(self.assignment)}


def realize_A(a, radius: int) -> Realization:
    """e_i -> x^(1+a*i) d/dx."""
    if a == 0:
        raise NoInjectionA0(
            "A_0 has no injective realization: e_i o e_0 = e_i for all i makes every "
            "image an eigenvector of right multiplication by the image of e_0 with "
            "eigenvalue 1, and that eigenspace is the line spanned by x d/dx"
        )
    one = lift(1, a)
    zero = one - one
    return Realization(
        {i: VectorField([(one, 1 + a * i, zero)]) for i in range(-radius, radius + 1)}, radius
    )


def realize_B0(radius: int, like=None) -> Realization:
    """e_i -> exp(i*x) d/dx."""
    one = lift(1, like if like is not None else GaussRational(1))
    zero = one - one
    return Realization(
        {i: VectorField([(one, zero, lift(i, one))]) for i in range(-radius, radius + 1)}, radius
    )


@dataclass
class Obstruction:
    abstract: Element
    realized: VectorField
    consistent: bool

    def to_json(self) -> dict:
        return {
            "abstract": self.abstract.to_json(),
            "realized": self.realized.to_json(),
            "consistent": self.consistent,
        }


def obstruction_B(b) -> Obstruction:
    """Compare e_1 o e_{-1} + e_{-1} o e_1 in B_b with its image under e_i -> exp(i*x) d/dx.

    The exponential images anticommute, so the comparison succeeds only for b = 0.
    """
    S = ClosedB(b)
    e1, em1 = S.e(1), S.e(-1)
    abstract = product(S, e1, em1) + product(S, em1, e1)
    R = realize_B0(1, S.one)
    realized = vf_product(R[1], R[-1]) + vf_product(R[-1], R[1])
    consistent = R.apply(abstract) == realized
    return Obstruction(abstract, realized, consistent)


def verify_realization(R: Realization, S: StructureMap, radius: int) -> list:
    """Pairs (i, j) where R(e_i) o R(e_j) differs from R(e_i o e_j), with the difference."""
    if radius > R.radius:
        raise ValueError(f"realization covers radius {R.radius} only")
    out = []
    rng = range(-radius, radius + 1)
    for i in rng:
        for j in rng:
            if abs(i + j) > radius:
                continue
            lhs = vf_product(R[i], R[j])
            rhs = R.apply(product(S, S.e(i), S.e(j)))
            diff = lhs - rhs
            if not diff.is_zero():
                out.append((i, j, diff))
    return out

"""Graded products e_i o e_j = f(i) g(j) e_{i+j} and the checks built on them.

A structure is either one of the two closed families

* ``ClosedA(a)``: f(i) = 1 + a*i, g = 1
* ``ClosedB(b)``: f(i) = i, g(j) = 1 / (1 + b*j), b not the inverse of an integer

or a finite ``Table`` of f and g values on the window [-N, N].  Closed
families are total; a table is only defined on its window and every scan over
a table restricts to index triples whose partial sums stay inside it.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidParameter, NotInvariant, OutOfWindow, UnsupportedVariant
from .graded import Element
from .scalar import (
    GaussRational,
    RationalFunction,
    Scalar,
    is_integer_inverse,
    lift,
    parse_scalar,
)


class StructureMap:
    """Common interface of the three structure variants.

    ``radius`` is None for the closed families, which are defined everywhere.
    """

    @property
    def one(self) -> Scalar:
        raise NotImplementedError

    @property
    def zero(self) -> Scalar:
        return self.one - self.one

    def f(self, i: int) -> Scalar:
        raise NotImplementedError

    def g(self, i: int) -> Scalar:
        raise NotImplementedError

    def eval_fg(self, i: int) -> tuple[Scalar, Scalar]:
        return self.f(i), self.g(i)

    def in_window(self, *degrees: int) -> bool:
        return self.radius is None or all(abs(d) <= self.radius for d in degrees)

    def require_window(self, *degrees: int) -> None:
        if not self.in_window(*degrees):
            bad = [d for d in degrees if abs(d) > self.radius]
            raise OutOfWindow(f"degree {bad[0]} outside table radius {self.radius}")

    def e(self, degree: int, coeff=1) -> Element:
        return Element.basis(degree, lift(coeff, self.one))

    def tabulate(self, radius: int) -> Table:
        self.require_window(radius)
        return Table(
            radius,
            tuple(self.f(i) for i in range(-radius, radius + 1)),
            tuple(self.g(i) for i in range(-radius, radius + 1)),
        )


class _ClosedForm(StructureMap):
    radius = None

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    def f(self, i: int) -> Scalar:
        key = ("f", i)
        if key not in self._cache:
            self._cache[key] = self._f(i)
        return self._cache[key]

    def g(self, i: int) -> Scalar:
        key = ("g", i)
        if key not in self._cache:
            self._cache[key] = self._g(i)
        return self._cache[key]


@dataclass(frozen=True)
class ClosedA(_ClosedForm):
    a: Scalar
    _cache: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    @property
    def one(self) -> Scalar:
        return lift(1, self.a)

    @property
    def family(self) -> str:
        return "A"

    @property
    def param(self) -> Scalar:
        return self.a

    def _f(self, i: int) -> Scalar:
        return 1 + self.a * i

    def _g(self, i: int) -> Scalar:
        return self.one


@dataclass(frozen=True)
class ClosedB(_ClosedForm):
    b: Scalar
    _cache: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if is_integer_inverse(self.b):
            raise InvalidParameter(f"param is the inverse of an integer: b = {self.b}")
        super().__post_init__()

    @property
    def one(self) -> Scalar:
        return lift(1, self.b)

    @property
    def family(self) -> str:
        return "B"

    @property
    def param(self) -> Scalar:
        return self.b

    def _f(self, i: int) -> Scalar:
        return lift(i, self.b)

    def _g(self, i: int) -> Scalar:
        return (1 + self.b * i).inverse()


@dataclass(frozen=True)
class Table(StructureMap):
    """f and g tabulated on [-radius, radius]; index 0 of each tuple is degree -radius."""

    radius: int
    f_values: tuple
    g_values: tuple

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("table radius must be non-negative")
        n = 2 * self.radius + 1
        if len(self.f_values) != n or len(self.g_values) != n:
            raise ValueError(f"table of radius {self.radius} needs {n} values for f and g")
        fv = tuple(lift(x, self._like()) for x in self.f_values)
        gv = tuple(lift(x, self._like()) for x in self.g_values)
        object.__setattr__(self, "f_values", fv)
        object.__setattr__(self, "g_values", gv)

    def _like(self):
        for x in itertools.chain(self.f_values, self.g_values):
            if isinstance(x, RationalFunction):
                return x
        return GaussRational(1)

    @classmethod
    def from_functions(cls, radius: int, f, g) -> Table:
        rng = range(-radius, radius + 1)
        return cls(radius, tuple(f(i) for i in rng), tuple(g(i) for i in rng))

    @classmethod
    def from_dicts(cls, radius: int, f: dict, g: dict, default_f=0, default_g=1) -> Table:
        rng = range(-radius, radius + 1)
        return cls(
            radius,
            tuple(f.get(i, default_f) for i in rng),
            tuple(g.get(i, default_g) for i in rng),
        )

    @property
    def family(self) -> str:
        return "table"

    @property
    def param(self):
        return None

    @property
    def one(self) -> Scalar:
        return lift(1, self.f_values[0])

    def f(self, i: int) -> Scalar:
        self.require_window(i)
        return self.f_values[i + self.radius]

    def g(self, i: int) -> Scalar:
        self.require_window(i)
        return self.g_values[i + self.radius]

    def degrees(self) -> range:
        return range(-self.radius, self.radius + 1)

    def reversed(self) -> Table:
        """The table of the same product after the regrading e_i -> e_{-i}."""
        return Table(self.radius, self.f_values[::-1], self.g_values[::-1])

    def scaled(self, f_factor=1, g_factor=1) -> Table:
        return Table(
            self.radius,
            tuple(x * f_factor for x in self.f_values),
            tuple(x * g_factor for x in self.g_values),
        )


# -- serialization -------------------------------------------------------------


def structure_to_json(S: StructureMap) -> dict:
    if isinstance(S, Table):
        return {
            "family": "table",
            "param": None,
            "radius": S.radius,
            "f": [str(x) for x in S.f_values],
            "g": [str(x) for x in S.g_values],
        }
    return {"family": S.family, "param": str(S.param), "radius": None, "f": [], "g": []}


def structure_from_json(data: dict, symbolic: bool | None = None) -> StructureMap:
    family = data["family"]
    if family == "table":
        f = [parse_scalar(x, symbolic) for x in data["f"]]
        g = [parse_scalar(x, symbolic) for x in data["g"]]
        return Table(int(data["radius"]), tuple(f), tuple(g))
    param = parse_scalar(data["param"], symbolic)
    if family == "A":
        return ClosedA(param)
    if family == "B":
        return ClosedB(param)
    raise ValueError(f"unknown family {family!r}")


# -- products ------------------------------------------------------------------


def product(S: StructureMap, x: Element, y: Element) -> Element:
    """Bilinear extension of e_i o e_j = f(i) g(j) e_{i+j}."""
    out: dict[int, Scalar] = {}
    for i, lam in x.items():
        S.require_window(i)
        fi = S.f(i)
        if fi.is_zero():
            continue
        for j, mu in y.items():
            S.require_window(j, i + j)
            c = lam * mu * fi * S.g(j)
            out[i + j] = out[i + j] + c if i + j in out else c
    return Element._canonical(out)


def bracket(S: StructureMap, x: Element, y: Element) -> Element:
    return product(S, x, y) - product(S, y, x)


def defect(S: StructureMap, i: int, j: int, k: int) -> Scalar:
    """Coefficient of e_{i+j+k} in (e_i e_j) e_k - e_i (e_j e_k) - (e_i e_k) e_j + e_i (e_k e_j)."""
    S.require_window(i, j, k, i + j, i + k, j + k, i + j + k)
    f, g = S.f, S.g
    return f(i) * ((f(i + j) - f(i + k)) * g(j) * g(k) + (f(k) * g(j) - f(j) * g(k)) * g(j + k))


def admissible_triples(radius: int, windowed: bool = True) -> list[tuple[int, int, int]]:
    """Triples (i, j, k), j < k, in lexicographic order.

    With ``windowed`` every partial sum must also lie in [-radius, radius].
    """
    rng = range(-radius, radius + 1)
    out = []
    for i in rng:
        for j in rng:
            for k in range(j + 1, radius + 1):
                if windowed and not all(
                    abs(s) <= radius for s in (i + j, i + k, j + k, i + j + k)
                ):
                    continue
                out.append((i, j, k))
    return out


@dataclass
class DefectReport:
    radius: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "violations": [[i, j, k, str(v)] for i, j, k, v in self.violations],
        }


def _scan_chunk(S: StructureMap, triples: Sequence[tuple[int, int, int]]) -> list:
    out = []
    for i, j, k in triples:
        v = defect(S, i, j, k)
        if not v.is_zero():
            out.append((i, j, k, v))
    return out


def defect_scan(S: StructureMap, radius: int, jobs: int = 1) -> DefectReport:
    """Evaluate every defect with j < k on the window and list the nonzero ones."""
    if S.radius is not None and radius > S.radius:
        raise OutOfWindow(f"scan radius {radius} exceeds table radius {S.radius}")
    triples = admissible_triples(radius, windowed=isinstance(S, Table))
    if jobs <= 1 or len(triples) < 64:
        return DefectReport(radius, _scan_chunk(S, triples))
    chunks = [triples[n::jobs] for n in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        found = [v for part in pool.map(_scan_chunk, [S] * jobs, chunks) for v in part]
    found.sort(key=lambda v: v[:3])
    return DefectReport(radius, found)


def associator(S: StructureMap, i: int, j: int, k: int) -> Scalar:
    """Coefficient of e_{i+j+k} in (e_i e_j) e_k - e_i (e_j e_k)."""
    S.require_window(i, j, k, i + j, j + k, i + j + k)
    f, g = S.f, S.g
    return f(i) * g(j) * f(i + j) * g(k) - f(j) * g(k) * f(i) * g(j + k)


def associativity_scan(S: StructureMap, radius: int) -> list[tuple[int, int, int, Scalar]]:
    rng = range(-radius, radius + 1)
    out = []
    for i, j, k in itertools.product(rng, repeat=3):
        if isinstance(S, Table) and not S.in_window(i + j, j + k, i + j + k):
            continue
        v = associator(S, i, j, k)
        if not v.is_zero():
            out.append((i, j, k, v))
    return out


# -- change of basis for family B -----------------------------------------------


def change_of_basis_B(b: Scalar, x: Element, direction: str = "to_bar") -> Element:
    """Rescale by the basis change e_i -> (1 + b*i) e_i (``to_bar``) or its inverse."""
    if is_integer_inverse(b):
        raise InvalidParameter(f"param is the inverse of an integer: b = {b}")
    if direction == "to_bar":
        return x.map_coefficients(lambda d, c: c * (1 + b * d))
    if direction == "from_bar":
        return x.map_coefficients(lambda d, c: c / (1 + b * d))
    raise ValueError(f"unknown direction {direction!r}")


def bar_product(b: Scalar, x: Element, y: Element) -> Element:
    """Product of two elements given in the rescaled basis, result in that basis."""
    S = ClosedB(b)
    return change_of_basis_B(
        b,
        product(S, change_of_basis_B(b, x, "to_bar"), change_of_basis_B(b, y, "to_bar")),
        "from_bar",
    )


def bar_bracket(b: Scalar, x: Element, y: Element) -> Element:
    return bar_product(b, x, y) - bar_product(b, y, x)


# -- window-scale ideal checks ---------------------------------------------------


def _window(S: StructureMap, radius: int) -> range:
    if S.radius is not None and radius > S.radius:
        raise OutOfWindow(f"radius {radius} exceeds table radius {S.radius}")
    return range(-radius, radius + 1)


def annihilator_window(S: StructureMap, radius: int) -> set[int]:
    """Degrees j whose basis vector is killed by left multiplication with every e_i."""
    window = _window(S, radius)
    if all(S.f(i).is_zero() for i in window):
        return set(window)
    return {j for j in window if S.g(j).is_zero()}


def ideal_closure(S: StructureMap, seeds: Iterable[int], radius: int) -> set[int]:
    """Smallest set of window degrees containing ``seeds`` closed under two-sided products.

    Degrees falling outside the window are discarded.
    """
    window = _window(S, radius)
    found = set(seeds)
    for s in found:
        if abs(s) > radius:
            raise OutOfWindow(f"seed {s} outside radius {radius}")
    todo = sorted(found)
    while todo:
        s = todo.pop()
        fs, gs = S.f(s), S.g(s)
        for j in window:
            targets = []
            if abs(s + j) <= radius:
                if not (fs * S.g(j)).is_zero():
                    targets.append(s + j)
                if not (S.f(j) * gs).is_zero():
                    targets.append(j + s)
            for t in targets:
                if t not in found:
                    found.add(t)
                    todo.append(t)
    return found


def derivation_check_e0(S: StructureMap, radius: int) -> list[tuple[int, int, Scalar]]:
    """Check that right multiplication by e_0 is a derivation; return the failures.

    Only meaningful when e_0 is invariant (f(0) = 0).
    """
    window = _window(S, radius)
    if not S.f(0).is_zero():
        raise NotInvariant(f"f(0) = {S.f(0)} is nonzero, e_0 is not invariant")
    e0 = S.e(0)

    def right(x: Element) -> Element:
        return product(S, x, e0)

    out = []
    for i in window:
        for j in window:
            if abs(i + j) > radius:
                continue
            ei, ej = S.e(i), S.e(j)
            lhs = right(product(S, ei, ej))
            rhs = product(S, right(ei), ej) + product(S, ei, right(ej))
            diff = (lhs - rhs).coefficient_at(i + j, S.zero)
            if not diff.is_zero():
                out.append((i, j, diff))
    return out


def iterate_right_mult(S: StructureMap, v: Element, start: int, steps: int) -> list[int]:
    """Top degrees of R_v^p(e_start) for p = 0..steps, where R_v(x) = x o v."""
    if isinstance(S, Table):
        raise UnsupportedVariant("right-multiplication orbits leave any finite window")
    if isinstance(S, ClosedA) and isinstance(S.a, GaussRational) and not S.a.is_zero():
        pole = -S.a.inverse()
        if pole.is_real() and pole.re.denominator == 1 and start <= pole.re:
            raise ValueError(f"start must exceed -1/a = {pole} for A_{S.a}")
    x = S.e(start)
    tops = [start]
    for p in range(1, steps + 1):
        x = product(S, x, v)
        if x.is_zero():
            raise ValueError(f"R_v^{p}(e_{start}) vanished")
        tops.append(x.max_degree())
    return tops

"""Decide which family a tabulated product belongs to, and compare families.

``classify`` follows the normalizations of the classification argument step by
step on a finite window: fix g(0) = 1, split on f(0), reverse the grading when
f is supported on negative degrees only, then force the closed form of f and
g and read off the parameter.  Every failure is reported as a verdict rather
than raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from .errors import AnnihilatorAtZero, RatioUndefined
from .graded import Element
from .prelie import (
    ClosedA,
    ClosedB,
    StructureMap,
    Table,
    annihilator_window,
    associativity_scan,
    defect_scan,
    ideal_closure,
    product,
)
from .scalar import Scalar, is_integer_inverse, lift

MIN_RADIUS = 2


# -- verdicts --------------------------------------------------------------------


@dataclass(frozen=True)
class TypeA:
    a: Scalar
    tag = "TypeA"

    def to_json(self) -> dict:
        return {"tag": self.tag, "param": str(self.a)}


@dataclass(frozen=True)
class TypeB:
    b: Scalar
    tag = "TypeB"

    def to_json(self) -> dict:
        return {"tag": self.tag, "param": str(self.b)}


@dataclass(frozen=True)
class NotPreLie:
    witness: tuple  # (i, j, k, defect value)
    tag = "NotPreLie"

    def to_json(self) -> dict:
        i, j, k, v = self.witness
        return {"tag": self.tag, "witness": [i, j, k, str(v)]}


@dataclass(frozen=True)
class NotSimpleWindow:
    kind: str  # "annihilator" | "ideal" | "zero_product"
    degrees: tuple
    detail: str = ""
    tag = "NotSimpleWindow"

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "kind": self.kind,
            "degrees": list(self.degrees),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    tag = "Inconclusive"

    def to_json(self) -> dict:
        return {"tag": self.tag, "reason": self.reason}


Verdict = Union[TypeA, TypeB, NotPreLie, NotSimpleWindow, Inconclusive]


@dataclass(frozen=True)
class TraceStep:
    """One normalization step.

    ``scale_g``/``scale_f`` divide g or f by ``factor`` (a uniform rescaling of
    the basis); ``reverse`` regrades e_i -> e_{-i}; ``note`` records a proof
    branch and changes nothing.
    """

    kind: str
    factor: Scalar | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.factor is not None:
            out["factor"] = str(self.factor)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class ClassificationResult:
    verdict: Verdict
    trace: tuple = ()
    radius: int = 0

    @property
    def tag(self) -> str:
        return self.verdict.tag

    @property
    def reversed(self) -> bool:
        return sum(step.kind == "reverse" for step in self.trace) % 2 == 1

    @property
    def param(self):
        if isinstance(self.verdict, TypeA):
            return self.verdict.a
        if isinstance(self.verdict, TypeB):
            return self.verdict.b
        return None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.to_json(),
            "reversed": self.reversed,
            "radius": self.radius,
            "trace": [s.to_json() for s in self.trace],
        }


def apply_trace(T: Table, trace) -> Table:
    """Replay normalization steps on a table."""
    for step in trace:
        if step.kind == "scale_g":
            T = T.scaled(g_factor=step.factor.inverse())
        elif step.kind == "scale_f":
            T = T.scaled(f_factor=step.factor.inverse())
        elif step.kind == "reverse":
            T = T.reversed()
    return T


# -- normalization ------------------------------------------------------------------


def _positive_support(T: Table) -> int | None:
    for i in range(1, T.radius + 1):
        if not T.f(i).is_zero():
            return i
    return None


def normalize(T: Table) -> tuple[Table, list[TraceStep]]:
    """Rescale so that g(0) = 1, then f(0) = 1 (f(0) != 0) or f(d) = d (f(0) = 0).

    Here d is the smallest positive degree where f does not vanish; without
    one, f is left alone in the second case.
    """
    trace: list[TraceStep] = []
    g0 = T.g(0)
    if g0.is_zero():
        raise AnnihilatorAtZero("g(0) = 0: e_0 lies in the annihilator")
    if g0 != T.one:
        trace.append(TraceStep("scale_g", g0))
        T = T.scaled(g_factor=g0.inverse())
    f0 = T.f(0)
    if not f0.is_zero():
        if f0 != T.one:
            trace.append(TraceStep("scale_f", f0))
            T = T.scaled(f_factor=f0.inverse())
        return T, trace
    d = _positive_support(T)
    if d is not None:
        factor = T.f(d) / d
        if factor != T.one:
            trace.append(TraceStep("scale_f", factor))
            T = T.scaled(f_factor=factor.inverse())
    return T, trace


# -- the decision procedure -----------------------------------------------------------


def classify(T: Table) -> ClassificationResult:
    N = T.radius
    window = list(T.degrees())

    report = defect_scan(T, N)
    if report.violations:
        return ClassificationResult(NotPreLie(report.violations[0]), (), N)

    ann = annihilator_window(T, N)
    if len(ann) == len(window) and all(T.f(i).is_zero() for i in window):
        return ClassificationResult(
            NotSimpleWindow("zero_product", tuple(window), "f vanishes on the window"), (), N
        )
    if ann:
        return ClassificationResult(
            NotSimpleWindow("annihilator", tuple(sorted(ann)), "g vanishes here"), (), N
        )

    T, trace = normalize(T)
    nonzero = [i for i in window if i != 0]
    if all(T.f(i).is_zero() for i in nonzero):
        return ClassificationResult(
            NotSimpleWindow("ideal", tuple(nonzero), "f vanishes off degree 0"), tuple(trace), N
        )

    if _positive_support(T) is None:
        trace.append(TraceStep("reverse"))
        T, more = normalize(T.reversed())
        trace.extend(more)

    def done(verdict: Verdict) -> ClassificationResult:
        return ClassificationResult(verdict, tuple(trace), N)

    if N < MIN_RADIUS:
        return done(Inconclusive(f"window radius {N} is too small to pin the parameters"))

    if T.f(0).is_zero():
        return done(_case_b(T, trace))
    return done(_case_a(T, trace))


def _case_a(T: Table, trace: list[TraceStep]) -> Verdict:
    N, one = T.radius, T.one
    window = T.degrees()
    for k in window:
        if T.g(k) != one:
            return Inconclusive(f"g(k) = 1 fails at k = {k}")
    d = _positive_support(T)
    a = T.f(d) - 1
    if d == 1:
        for k in window:
            if T.f(k) != 1 + a * k:
                return Inconclusive(f"f(k) = 1 + a*k fails at k = {k} with a = {a}")
        return TypeA(a)

    if d + 1 > N:
        return Inconclusive(f"d = {d}: f(d+1) lies outside the window")
    if T.f(d + 1) != a:
        return Inconclusive(f"f(d+1) = a fails with d = {d}, a = {a}")

    if a.is_zero():
        for k in window:
            expected = one if k % d == 0 else one - one
            if T.f(k) != expected:
                return Inconclusive(f"f is not the period-{d} indicator at k = {k}")
        ideal = tuple(k for k in window if k % d)
        if ideal_closure(T, ideal, N) != set(ideal):
            return Inconclusive(f"degrees prime to {d} are not closed in the window")
        return NotSimpleWindow(
            "ideal", ideal, f"f is periodic of period {d}; support of f is the multiples of {d}"
        )

    if d == 2:
        if N < 4:
            return Inconclusive("d = 2 branch needs f(3) and f(4) in the window")
        if a != -2:
            return Inconclusive(f"d = 2 forces 1 + 2a = a - 1, found a = {a}")
        for k in window:
            if T.f(k) != 1 - k:
                return Inconclusive(f"f(k) = 1 - k fails at k = {k}")
        trace.append(TraceStep("note", None, "d = 2 with f(2) = 1 + a, a = -2: f(k) = 1 - k is A_{-1}"))
        return TypeA(lift(-1, one))

    return Inconclusive(
        f"d = {d} >= 3 with a = {a} != 0 is contradictory (a = a - 1) but the window hides it"
    )


def _case_b(T: Table, trace: list[TraceStep]) -> Verdict:
    N, one = T.radius, T.one
    window = T.degrees()
    d = _positive_support(T)
    for i in window:
        if T.f(i).is_zero():
            continue
        for j in window:
            if abs(i + j) <= N and T.f(i + j) != T.f(i) + T.f(j):
                return Inconclusive(f"f(i+j) = f(i) + f(j) fails at i = {i}, j = {j}")
    if d != 1:
        return Inconclusive(f"smallest positive support d = {d} > 1 cannot be excluded on this window")
    for i in window:
        if T.f(i) != i:
            return Inconclusive(f"f(i) = i fails at i = {i}")

    h = {j: T.g(j).inverse() for j in window}
    for j in range(1, N + 1):
        if h[j] + h[-j] != 2:
            return Inconclusive(f"h(j) + h(-j) = 2 fails at j = {j}")
    b = h[1] - 1
    for j in window:
        if h[j] != 1 + b * j:
            return Inconclusive(f"h(j) = 1 + b*j fails at j = {j} with b = {b}")
    if is_integer_inverse(b):
        return Inconclusive(f"b = {b} is the inverse of an integer; the law is undefined off the window")
    return TypeB(b)


# -- isomorphism invariants ---------------------------------------------------------------


@dataclass
class Invariants:
    e0_square_zero: bool
    associative: bool
    spectrum: list
    assoc_ratio: Scalar | None

    def to_json(self) -> dict:
        return {
            "e0_square_zero": self.e0_square_zero,
            "associative": self.associative,
            "spectrum": [str(x) for x in self.spectrum],
            "assoc_ratio": None if self.assoc_ratio is None else str(self.assoc_ratio),
        }


def assoc_ratio(S: StructureMap) -> Scalar:
    """Ratio of w o (w o w) to (w o w) o w for w = e_1."""
    w = S.e(1)
    ww = product(S, w, w)
    left = product(S, ww, w).coefficient_at(3, S.zero)
    right = product(S, w, ww).coefficient_at(3, S.zero)
    if left.is_zero() or right.is_zero():
        raise RatioUndefined("a triple product of e_1 vanishes")
    return right / left


def b_from_ratio(r: Scalar) -> Scalar:
    """Invert r = (1 + b) / (2 (1 + 2b))."""
    return (1 - 2 * r) / (4 * r - 1)


def invariants_extract(S: StructureMap, radius: int) -> Invariants:
    if radius < 3:
        raise ValueError("invariants need radius >= 3")
    e0 = S.e(0)
    try:
        ratio = assoc_ratio(S)
    except RatioUndefined:
        ratio = None
    return Invariants(
        e0_square_zero=product(S, e0, e0).is_zero(),
        associative=not associativity_scan(S, radius),
        spectrum=[
            product(S, S.e(i), e0).coefficient_at(i, S.zero) for i in range(-radius, radius + 1)
        ],
        assoc_ratio=ratio,
    )


# -- isomorphism checks -----------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalMap:
    """The linear map e_i -> scale(i) * e_{+-i}."""

    scale: Callable[[int], object] = field(default=lambda i: 1)
    reverse: bool = False

    def __call__(self, x: Element, like) -> Element:
        out = {}
        for d, c in x.items():
            out[-d if self.reverse else d] = c * lift(self.scale(d), like)
        return Element._canonical(out)


FLIP_A = DiagonalMap(lambda i: 1, reverse=True)
FLIP_B = DiagonalMap(lambda i: -1, reverse=True)

_BUILTIN_MAPS = {"A_flip": FLIP_A, "flipA": FLIP_A, "B_flip": FLIP_B, "flipB": FLIP_B}


def iso_check(kind, S1: StructureMap, S2: StructureMap, radius: int) -> list:
    """Check phi(e_i o e_j) = phi(e_i) o' phi(e_j) on the window; return failures."""
    phi = _BUILTIN_MAPS[kind] if isinstance(kind, str) else kind
    like = S1.one
    out = []
    rng = range(-radius, radius + 1)
    for i in rng:
        for j in rng:
            if abs(i + j) > radius:
                continue
            ei, ej = S1.e(i), S1.e(j)
            lhs = phi(product(S1, ei, ej), like)
            rhs = product(S2, phi(ei, like), phi(ej, like))
            diff = lhs - rhs
            if not diff.is_zero():
                out.append((i, j, diff))
    return out

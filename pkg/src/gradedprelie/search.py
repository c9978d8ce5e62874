"""Exhaustive desk-scale search over tabulated products.

The cells of a table are the values f(-N..N) and g(-N..N).  ``run_search``
enumerates every assignment of cells from a finite value set (with g(0) and
f(0) pinned by the usual normalization), keeps those satisfying all window
defect equations, filters the window-simple ones and classifies them.

Enumeration is a depth-first search interleaved with constraint propagation:
as soon as a defect equation has a single unknown cell and is linear in it
the cell is forced, and equations whose cells are all known are checked
immediately.  Forcing never discards a completion that the plain brute-force
loop would accept, so the survivor counts are those of the naive loop.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .classify import TypeA, TypeB, apply_trace, classify
from .errors import BudgetExceeded, Contradiction
from .prelie import (
    ClosedA,
    ClosedB,
    Table,
    admissible_triples,
    annihilator_window,
    defect_scan,
    ideal_closure,
    structure_to_json,
)
from .scalar import GaussRational, RationalFunction, lift

DEFAULT_BUDGET = 10**8
CASE_SPLITS = ("all", "A", "B")


@dataclass(frozen=True)
class SearchConfig:
    radius: int
    value_set: tuple
    fix_g0: bool = True
    case_split: str = "all"
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        values = tuple(GaussRational._coerce(v) for v in self.value_set)
        if not values:
            raise ValueError("value_set must be nonempty")
        if len(set(values)) != len(values):
            raise ValueError("value_set has duplicates")
        if self.case_split not in CASE_SPLITS:
            raise ValueError(f"case_split must be one of {CASE_SPLITS}")
        if self.radius < 1:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "value_set", values)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "value_set": [str(v) for v in self.value_set],
            "fix_g0": self.fix_g0,
            "case_split": self.case_split,
            "budget": self.budget,
        }


@dataclass
class CensusEntry:
    verdict: dict
    reversed: bool
    count: int
    example: Table

    def key(self) -> str:
        return json.dumps([self.verdict, self.reversed], sort_keys=True)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reversed": self.reversed,
            "count": self.count,
            "example": structure_to_json(self.example),
        }


@dataclass
class SearchReport:
    config: SearchConfig
    total_candidates: int = 0
    prelie_survivors: int = 0
    simple_survivors: int = 0
    census: list = field(default_factory=list)
    inconsistent: int = 0

    @property
    def theorem_consistent(self) -> bool:
        return self.inconsistent == 0

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "total_candidates": self.total_candidates,
            "prelie_survivors": self.prelie_survivors,
            "simple_survivors": self.simple_survivors,
            "inconsistent": self.inconsistent,
            "theorem_consistent": self.theorem_consistent,
            "census": [c.to_json() for c in self.census],
        }

    def census_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["verdict", "param_or_reason", "reversed", "count", "example_f", "example_g"])
        for c in self.census:
            v = c.verdict
            detail = v.get("param", v.get("reason", v.get("kind", "")))
            w.writerow([
                v["tag"],
                detail,
                int(c.reversed),
                c.count,
                " ".join(str(x) for x in c.example.f_values),
                " ".join(str(x) for x in c.example.g_values),
            ])
        return buf.getvalue()


# -- the cell model -------------------------------------------------------------


class _Cells:
    """Index bookkeeping for the 4N+2 cells of a radius-N table."""

    def __init__(self, radius: int):
        self.N = radius
        self.size = 4 * radius + 2
        self.triples = admissible_triples(radius)
        self.slots = [self._slots(t) for t in self.triples]
        self.by_cell: list[list[int]] = [[] for _ in range(self.size)]
        for cid, slots in enumerate(self.slots):
            for c in set(slots):
                self.by_cell[c].append(cid)
        order = [self.f(0), self.g(0)]
        for m in range(1, radius + 1):
            order += [self.f(m), self.g(m), self.f(-m), self.g(-m)]
        self.order = order

    def f(self, i: int) -> int:
        return i + self.N

    def g(self, i: int) -> int:
        return 2 * self.N + 1 + i + self.N

    def is_g(self, cell: int) -> bool:
        return cell > 2 * self.N

    def name(self, cell: int) -> str:
        if self.is_g(cell):
            return f"g({cell - 3 * self.N - 1})"
        return f"f({cell - self.N})"

    def _slots(self, t):
        i, j, k = t
        return (
            self.f(i), self.f(i + j), self.f(i + k), self.f(j), self.f(k),
            self.g(j), self.g(k), self.g(j + k),
        )


def _defect_at(vals, slots):
    fi, fij, fik, fj, fk, gj, gk, gjk = (vals[s] for s in slots)
    return fi * ((fij - fik) * gj * gk + (fk * gj - fj * gk) * gjk)


def _known_nonzero(vals, cell, cells: _Cells, assume_simple: bool) -> bool:
    v = vals[cell]
    if v is None:
        return assume_simple and cells.is_g(cell)
    return not v.is_zero()


def _propagate(vals, changed, cells: _Cells, domains, assume_simple: bool, like) -> None:
    """Force cells in place until no equation yields anything new.

    ``domains`` maps cell -> allowed values (a set) or is None for the
    symbolic mode, where forced values are accepted as they come.
    """
    zero, one, two = lift(0, like), lift(1, like), lift(2, like)
    work = []
    queued = set()
    for c in changed:
        for cid in cells.by_cell[c]:
            if cid not in queued:
                queued.add(cid)
                work.append(cid)

    def assign(cell, value, cid):
        if domains is not None and value not in domains[cell]:
            raise Contradiction(cells.triples[cid], f"forces {cells.name(cell)} = {value} outside the value set")
        vals[cell] = value
        for nxt in cells.by_cell[cell]:
            if nxt not in queued:
                queued.add(nxt)
                work.append(nxt)

    while work:
        cid = work.pop()
        queued.discard(cid)
        slots = cells.slots[cid]
        unknown = sorted({s for s in slots if vals[s] is None})
        if not unknown:
            v = _defect_at(vals, slots)
            if not v.is_zero():
                raise Contradiction(cells.triples[cid], f"defect {v} != 0")
            continue
        if len(unknown) == 1:
            x = unknown[0]
            vals[x] = zero
            c0 = _defect_at(vals, slots)
            vals[x] = one
            c1 = _defect_at(vals, slots)
            vals[x] = two
            c2 = _defect_at(vals, slots)
            vals[x] = None
            quad = (c2 - 2 * c1 + c0) / 2
            lin = c1 - c0 - quad
            if quad.is_zero():
                if not lin.is_zero():
                    assign(x, -c0 / lin, cid)
                elif not c0.is_zero():
                    raise Contradiction(cells.triples[cid], f"no value of {cells.name(x)} works")
                continue
            if c0.is_zero() and _known_nonzero(vals, x, cells, assume_simple):
                # x * (quad * x + lin) = 0 with x != 0
                assign(x, -lin / quad, cid)
                continue
            if domains is not None:
                roots = [v for v in domains[x] if (quad * v * v + lin * v + c0).is_zero()]
                if not roots:
                    raise Contradiction(cells.triples[cid], f"no value of {cells.name(x)} in the value set")
                if len(roots) == 1:
                    assign(x, roots[0], cid)
            continue
        _propagate_reduced(vals, cid, cells, assume_simple, assign)


def _propagate_reduced(vals, cid, cells: _Cells, assume_simple, assign) -> None:
    """Equations with several unknowns that factor once known-nonzero cells are divided out."""
    i, j, k = cells.triples[cid]
    if 0 not in (j, k):
        return
    m = k if j == 0 else j
    f0, g0 = vals[cells.f(0)], vals[cells.g(0)]
    if f0 is None or g0 is None or g0.is_zero():
        return
    if i == 0 and not f0.is_zero():
        # f(0)^2 g(m) (g(0) - g(m)) = 0
        gm = cells.g(m)
        if vals[gm] is None and assume_simple:
            assign(gm, g0, cid)
        return
    if f0.is_zero():
        # f(i) g(m) g(0) (f(i+m) - f(i) - f(m)) = 0
        fi = vals[cells.f(i)]
        if fi is None or fi.is_zero() or not _known_nonzero(vals, cells.g(m), cells, assume_simple):
            return
        fim, fm = vals[cells.f(i + m)], vals[cells.f(m)]
        if fim is None and fm is not None:
            assign(cells.f(i + m), fi + fm, cid)
        elif fm is None and fim is not None:
            assign(cells.f(m), fim - fi, cid)


def propagate_constraints(
    f: dict, g: dict, radius: int, assume_simple: bool = False
) -> tuple[dict, dict]:
    """Extend a partial assignment of f and g as far as the defect equations force it.

    ``assume_simple`` additionally divides by g-values, which is valid for
    simple algebras (the annihilator is zero, so g never vanishes).  Raises
    :class:`Contradiction` when the partial data admits no completion.
    """
    cells = _Cells(radius)
    vals = [None] * cells.size
    like = next(
        (v for v in [*f.values(), *g.values()] if isinstance(v, RationalFunction)),
        GaussRational(1),
    )
    for i, v in f.items():
        vals[cells.f(i)] = lift(v, like)
    for j, v in g.items():
        vals[cells.g(j)] = lift(v, like)
    _propagate(vals, range(cells.size), cells, None, assume_simple, like)
    return (
        {i: vals[cells.f(i)] for i in range(-radius, radius + 1) if vals[cells.f(i)] is not None},
        {j: vals[cells.g(j)] for j in range(-radius, radius + 1) if vals[cells.g(j)] is not None},
    )


# -- enumeration --------------------------------------------------------------------


def _domains(cfg: SearchConfig, cells: _Cells, f0) -> list:
    values = list(cfg.value_set)
    one = GaussRational(1)
    doms = []
    for c in range(cells.size):
        if c == cells.f(0):
            doms.append([f0] if f0 is not None else values)
        elif c == cells.g(0):
            doms.append([one] if cfg.fix_g0 or cfg.case_split == "A" else values)
        elif cells.is_g(c) and cfg.case_split == "A":
            doms.append([one])
        else:
            doms.append(values)
    return doms


def _subcases(cfg: SearchConfig) -> list:
    """Pinned values of f(0) for each case; None means f(0) ranges over the value set."""
    if cfg.case_split == "A":
        return [GaussRational(1)]
    if cfg.case_split == "B":
        return [GaussRational(0)]
    if cfg.fix_g0:
        return [GaussRational(1), GaussRational(0)]
    return [None]


def candidate_count(cfg: SearchConfig) -> int:
    cells = _Cells(cfg.radius)
    return sum(math.prod(len(d) for d in _domains(cfg, cells, f0)) for f0 in _subcases(cfg))


def enumerate_prelie(cfg: SearchConfig, f0, branch: int | None = None):
    """Yield every pre-Lie table of the subcase with f(0) pinned to ``f0``, in DFS order.

    ``branch`` restricts the first free cell to its ``branch``-th value.
    """
    cells = _Cells(cfg.radius)
    doms = _domains(cfg, cells, f0)
    dom_sets = [set(d) for d in doms]
    like = GaussRational(1)
    vals = [None] * cells.size
    pinned = [c for c in range(cells.size) if len(doms[c]) == 1]
    for c in pinned:
        vals[c] = doms[c][0]
    try:
        _propagate(vals, pinned, cells, dom_sets, False, like)
    except Contradiction:
        return
    first = True

    def dfs(vals):
        nonlocal first
        cell = next((c for c in cells.order if vals[c] is None), None)
        if cell is None:
            yield Table(cfg.radius, tuple(vals[:2 * cfg.radius + 1]), tuple(vals[2 * cfg.radius + 1:]))
            return
        choices = list(enumerate(doms[cell]))
        if first and branch is not None:
            choices = choices[branch:branch + 1]
        first = False
        for _, v in choices:
            new = list(vals)
            new[cell] = v
            try:
                _propagate(new, [cell], cells, dom_sets, False, like)
            except Contradiction:
                continue
            yield from dfs(new)

    yield from dfs(vals)


def first_free_width(cfg: SearchConfig, f0) -> int:
    return max(len(d) for d in _domains(cfg, _Cells(cfg.radius), f0))


def window_simple(T: Table) -> bool:
    """Nonzero product, no annihilated degree, and every single degree generates the whole window."""
    N = T.radius
    if annihilator_window(T, N):
        return False
    full = set(T.degrees())
    return all(ideal_closure(T, {s}, N) == full for s in T.degrees())


def _agrees(T: Table, result) -> bool:
    if isinstance(result.verdict, TypeA):
        closed = ClosedA(result.verdict.a)
    elif isinstance(result.verdict, TypeB):
        closed = ClosedB(result.verdict.b)
    else:
        return True
    return apply_trace(T, result.trace) == closed.tabulate(T.radius)


def _search_part(cfg: SearchConfig, f0, branch):
    prelie = simple = inconsistent = 0
    census: dict[str, CensusEntry] = {}
    for T in enumerate_prelie(cfg, f0, branch):
        prelie += 1
        if not window_simple(T):
            continue
        simple += 1
        res = classify(T)
        if res.tag not in ("TypeA", "TypeB", "NotSimpleWindow", "Inconclusive") or not _agrees(T, res):
            inconsistent += 1
        entry = CensusEntry(res.verdict.to_json(), res.reversed, 1, T)
        key = entry.key()
        if key in census:
            census[key].count += 1
        else:
            census[key] = entry
    return prelie, simple, inconsistent, list(census.values())


def run_search(cfg: SearchConfig, jobs: int = 1) -> SearchReport:
    total = candidate_count(cfg)
    estimate = total * len(admissible_triples(cfg.radius))
    if estimate > cfg.budget:
        raise BudgetExceeded(estimate, cfg.budget)
    report = SearchReport(cfg, total_candidates=total)

    parts = []
    for f0 in _subcases(cfg):
        if jobs > 1:
            parts += [(f0, b) for b in range(first_free_width(cfg, f0))]
        else:
            parts.append((f0, None))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_part, [cfg] * len(parts), *zip(*parts)))
    else:
        results = [_search_part(cfg, f0, b) for f0, b in parts]

    merged: dict[str, CensusEntry] = {}
    for prelie, simple, inconsistent, census in results:
        report.prelie_survivors += prelie
        report.simple_survivors += simple
        report.inconsistent += inconsistent
        for entry in census:
            key = entry.key()
            if key in merged:
                merged[key].count += entry.count
            else:
                merged[key] = entry
    report.census = list(merged.values())
    return report


def brute_force_prelie(cfg: SearchConfig) -> list[Table]:
    """Plain product loop over all candidates; the independent reference for small configs."""
    import itertools

    cells = _Cells(cfg.radius)
    out = []
    for f0 in _subcases(cfg):
        doms = _domains(cfg, cells, f0)
        for vals in itertools.product(*doms):
            T = Table(cfg.radius, vals[:2 * cfg.radius + 1], vals[2 * cfg.radius + 1:])
            if defect_scan(T, cfg.radius).ok:
                out.append(T)
    return out

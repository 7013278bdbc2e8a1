"""CNF encoding of (dispersable) book embedding with order, page and same-page variables.

Variables:

* order ``sigma(u, v)`` for ``u < v``: true iff ``u`` is left of ``v`` on the spine;
* page ``phi(e, i)``: edge ``e`` is on page ``i``;
* same-page ``chi(e, f)`` for ``e < f``: forced true when both edges share a page.

Clause families, in emission order: transitivity, page coverage, same-page
linking, crossing, adjacency (dispersable only), symmetry breaking.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from bookembed.embedding import BookEmbedding
from bookembed.graph import Graph


class Symmetry(enum.Flag):
    NONE = 0
    PIN_VERTEX = enum.auto()  # vertex 0 leftmost
    PIN_EDGE = enum.auto()  # edge 0 on page 0
    REFLECTION = enum.auto()  # fixes the mirror image
    PIN_STAR = enum.auto()  # dispersable only: edges of vertex 0 on pages 0..deg-1

    @classmethod
    def default(cls) -> "Symmetry":
        return cls.PIN_VERTEX | cls.PIN_EDGE

    @classmethod
    def parse(cls, text: str) -> "Symmetry":
        flags = cls.NONE
        for part in filter(None, (p.strip() for p in text.split(","))):
            if part.lower() == "none":
                continue
            if part.lower() == "default":
                flags |= cls.default()
                continue
            try:
                flags |= cls[part.upper().replace("-", "_")]
            except KeyError:
                raise ValueError(f"unknown symmetry flag {part!r}") from None
        return flags


class ModelDoesNotSatisfy(ValueError):
    pass


class SigmaNotTotal(RuntimeError):
    pass


class MalformedSolverOutput(ValueError):
    pass


@dataclass
class CnfFormula:
    var_count: int
    clauses: list[list[int]] = field(default_factory=list)

    def add(self, clause: Iterable[int]) -> None:
        c = list(clause)
        assert c, "empty clause"
        self.clauses.append(c)

    def evaluate(self, model) -> Optional[int]:
        """Index of the first clause falsified by ``model`` (var -> bool), or None."""
        for k, c in enumerate(self.clauses):
            if not any(model.get(abs(l), False) == (l > 0) for l in c):
                return k
        return None


@dataclass
class VarMap:
    n: int
    m: int
    pages: int
    sigma: dict[tuple[int, int], int]
    phi: dict[tuple[int, int], int]
    chi: dict[tuple[int, int], int]

    @property
    def total_vars(self) -> int:
        return len(self.sigma) + len(self.phi) + len(self.chi)

    def left(self, u: int, v: int) -> int:
        """Literal meaning "u is left of v"."""
        return self.sigma[(u, v)] if u < v else -self.sigma[(v, u)]

    def same(self, e: int, f: int) -> int:
        return self.chi[(e, f)] if e < f else self.chi[(f, e)]

    def describe(self) -> list[tuple[int, str, tuple[int, ...]]]:
        rows = [(x, "sigma", k) for k, x in self.sigma.items()]
        rows += [(x, "phi", k) for k, x in self.phi.items()]
        rows += [(x, "chi", k) for k, x in self.chi.items()]
        return sorted(rows)


def build_varmap(g: Graph, pages: int) -> VarMap:
    nxt = 1
    sigma = {}
    for pair in combinations(range(g.n), 2):
        sigma[pair] = nxt
        nxt += 1
    phi = {}
    for e in range(g.m):
        for i in range(pages):
            phi[(e, i)] = nxt
            nxt += 1
    chi = {}
    for pair in combinations(range(g.m), 2):
        chi[pair] = nxt
        nxt += 1
    return VarMap(g.n, g.m, pages, sigma, phi, chi)


def encode(
    g: Graph,
    pages: int,
    dispersable: bool = False,
    symmetry: Symmetry = Symmetry.default(),
) -> tuple[CnfFormula, VarMap]:
    if pages < 1:
        raise ValueError("need at least one page")
    vm = build_varmap(g, pages)
    f = CnfFormula(vm.total_vars)
    L = vm.left

    # transitivity: forbid both cyclic orientations of every triple
    for a, b, c in combinations(range(g.n), 3):
        f.add([-L(a, b), -L(b, c), -L(c, a)])
        f.add([-L(a, c), -L(c, b), -L(b, a)])

    for e in range(g.m):
        f.add(vm.phi[(e, i)] for i in range(pages))

    for e, h in combinations(range(g.m), 2):
        x = vm.chi[(e, h)]
        for i in range(pages):
            f.add([-vm.phi[(e, i)], -vm.phi[(h, i)], x])

    adjacent = []
    for e, h in combinations(range(g.m), 2):
        a, b = g.edges[e]
        c, d = g.edges[h]
        if len({a, b, c, d}) < 4:
            adjacent.append((e, h))
            continue
        x = vm.chi[(e, h)]
        # every way of writing the interleaving s < t < s' < t'
        for s, s2 in ((a, b), (b, a)):
            for t, t2 in ((c, d), (d, c)):
                f.add([-L(s, t), -L(t, s2), -L(s2, t2), -x])
                f.add([-L(t, s), -L(s, t2), -L(t2, s2), -x])

    if dispersable:
        for e, h in adjacent:
            f.add([-vm.chi[(e, h)]])

    if Symmetry.PIN_VERTEX in symmetry:
        for v in range(1, g.n):
            f.add([L(0, v)])
    if Symmetry.REFLECTION in symmetry:
        if Symmetry.PIN_VERTEX in symmetry:
            if g.n >= 3:
                f.add([L(1, 2)])
        elif g.n >= 2:
            f.add([L(0, 1)])
    if Symmetry.PIN_STAR in symmetry and dispersable and g.n:
        star = g.incident_edges(0)
        for i, e in enumerate(star[:pages]):
            f.add([vm.phi[(e, i)]])
    elif Symmetry.PIN_EDGE in symmetry and g.m:
        f.add([vm.phi[(0, 0)]])
    return f, vm


def clause_tally(g: Graph, pages: int, dispersable: bool, symmetry: Symmetry) -> dict[str, int]:
    """Closed-form clause counts per family, without building the formula."""
    from math import comb

    adjacent = sum(comb(g.degree(v), 2) for v in range(g.n))
    independent = comb(g.m, 2) - adjacent
    star = min(g.degree(0), pages) if g.n else 0
    pin_star = Symmetry.PIN_STAR in symmetry and dispersable and g.n > 0
    return {
        "transitivity": 2 * comb(g.n, 3),
        "coverage": g.m,
        "linking": pages * comb(g.m, 2),
        "crossing": 8 * independent,
        "adjacency": adjacent if dispersable else 0,
        "pin_vertex": max(g.n - 1, 0) if Symmetry.PIN_VERTEX in symmetry else 0,
        "reflection": (
            (1 if g.n >= (3 if Symmetry.PIN_VERTEX in symmetry else 2) else 0)
            if Symmetry.REFLECTION in symmetry
            else 0
        ),
        "pin_edge": 1 if Symmetry.PIN_EDGE in symmetry and g.m and not pin_star else 0,
        "pin_star": star if pin_star else 0,
    }


def embedding_assignment(g: Graph, vm: VarMap, emb: BookEmbedding) -> dict[int, bool]:
    """Full assignment describing a known embedding (chi set exactly for same-page pairs)."""
    pos = emb.positions()
    model = {}
    for (u, v), x in vm.sigma.items():
        model[x] = pos[u] < pos[v]
    for (e, i), x in vm.phi.items():
        model[x] = emb.page_of[e] == i
    for (e, h), x in vm.chi.items():
        model[x] = emb.page_of[e] == emb.page_of[h]
    return model


def decode(model, vm: VarMap, g: Graph, pages: int, formula: Optional[CnfFormula] = None) -> BookEmbedding:
    if formula is not None:
        bad = formula.evaluate(model)
        if bad is not None:
            raise ModelDoesNotSatisfy(f"clause {bad} falsified: {formula.clauses[bad]}")
    lefts = [0] * g.n
    for (u, v), x in vm.sigma.items():
        if model.get(x, False):
            lefts[v] += 1
        else:
            lefts[u] += 1
    if sorted(lefts) != list(range(g.n)):
        raise SigmaNotTotal("order variables do not describe a linear order")
    spine = [0] * g.n
    for v, k in enumerate(lefts):
        spine[k] = v
    page_of = []
    for e in range(g.m):
        page = next((i for i in range(pages) if model.get(vm.phi[(e, i)], False)), None)
        if page is None:
            raise ModelDoesNotSatisfy(f"edge {e} has no page")
        page_of.append(page)
    return BookEmbedding(tuple(spine), tuple(page_of), pages)


# --- DIMACS -----------------------------------------------------------------


def to_dimacs(f: CnfFormula) -> str:
    out = [f"p cnf {f.var_count} {len(f.clauses)}\n"]
    out += [" ".join(map(str, c)) + " 0\n" for c in f.clauses]
    return "".join(out)


def from_dimacs(text: str) -> CnfFormula:
    var_count = None
    expected = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header {line!r}")
            var_count, expected = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    if var_count is None:
        raise ValueError("missing 'p cnf' header")
    if expected is not None and expected != len(clauses):
        raise ValueError(f"header declares {expected} clauses, found {len(clauses)}")
    return CnfFormula(var_count, clauses)


def write_varmap(vm: VarMap) -> str:
    return "".join(f"{x} {fam} {' '.join(map(str, args))}\n" for x, fam, args in vm.describe())


class Verdict(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


def parse_solver_output(text: str, var_count: Optional[int] = None) -> tuple[Verdict, Optional[dict[int, bool]]]:
    """Read competition-style solver output (``s ...`` status, ``v ...`` model lines)."""
    status = None
    lits: list[int] = []
    terminated = False
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = Verdict.SAT
            elif word == "UNSATISFIABLE":
                status = Verdict.UNSAT
            elif word in ("UNKNOWN", "INDETERMINATE"):
                status = Verdict.UNKNOWN
            else:
                raise MalformedSolverOutput(f"unknown status line {line!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise MalformedSolverOutput(f"bad literal {tok!r}") from None
                if lit == 0:
                    terminated = True
                else:
                    lits.append(lit)
    if status is None:
        raise MalformedSolverOutput("no status line")
    if status is not Verdict.SAT:
        return status, None
    if not terminated:
        raise MalformedSolverOutput("model not 0-terminated")
    model = {}
    if var_count is not None:
        model = {x: False for x in range(1, var_count + 1)}
    for lit in lits:
        model[abs(lit)] = lit > 0
    return status, model

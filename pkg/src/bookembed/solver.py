"""Internal CDCL solver, external-solver bridge and the page-count search on top of them."""

from __future__ import annotations

import heapq
import logging
import os
import random
import shlex
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional

from bookembed.embedding import BookEmbedding, verify
from bookembed.encoding import (
    CnfFormula,
    MalformedSolverOutput,
    ModelDoesNotSatisfy,
    Symmetry,
    Verdict,
    decode,
    encode,
    parse_solver_output,
    to_dimacs,
)
from bookembed.graph import Graph, max_degree

log = logging.getLogger(__name__)

DEFAULT_EXTERNAL = f"{shlex.quote(sys.executable)} -m bookembed.satrun"


class SolverProcessFailed(RuntimeError):
    pass


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    restarts: int = 0
    elapsed: float = 0.0


@dataclass
class SolveOutcome:
    verdict: Verdict
    model: Optional[dict[int, bool]] = None
    stats: SolveStats = field(default_factory=SolveStats)


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    if i < 1:
        raise ValueError("the sequence starts at index 1")
    k = 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        if (1 << (k - 1)) <= i < (1 << k) - 1:
            return luby(i - (1 << (k - 1)) + 1)
        k += 1


class Cdcl:
    """Conflict-driven clause learning with two watched literals.

    Literals are encoded as ``2*var + sign`` (sign 1 = negative). Decisions use
    VSIDS-style activities with phase saving; restarts follow the Luby sequence;
    learnt clauses are pruned periodically by glue (LBD).
    """

    RESTART_UNIT = 100
    VAR_DECAY = 0.95

    def __init__(self, var_count: int, clauses, seed: int = 0):
        self.n = var_count
        self.val = [0] * (2 * var_count + 2)  # per literal: 1 true, -1 false, 0 free
        self.level = [0] * (var_count + 1)
        self.reason = [-1] * (var_count + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[int]] = [[] for _ in range(2 * var_count + 2)]
        self.clauses: list[Optional[list[int]]] = []
        self.lbd: dict[int, int] = {}  # learnt clause index -> glue
        self.seen = [0] * (var_count + 1)
        rng = random.Random(seed)
        self.activity = [rng.random() * 1e-5 for _ in range(var_count + 1)]
        self.var_inc = 1.0
        self.phase = [1] * (var_count + 1)
        self.heap = [(-self.activity[v], v) for v in range(1, var_count + 1)]
        heapq.heapify(self.heap)
        self.stats = SolveStats()
        self.ok = True
        self.units: list[int] = []
        for c in clauses:
            self._add_input(c)

    # -- setup ---------------------------------------------------------------

    def _add_input(self, clause) -> None:
        lits = set()
        for x in clause:
            lit = 2 * abs(x) + (x < 0)
            if lit ^ 1 in lits:
                return  # tautology
            lits.add(lit)
        c = sorted(lits)
        if not c:
            self.ok = False
        elif len(c) == 1:
            self.units.append(c[0])
        else:
            self._attach(c)

    def _attach(self, c: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(c)
        self.watches[c[0]].append(ci)
        self.watches[c[1]].append(ci)
        return ci

    # -- assignment ----------------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        val, phase, act, heap = self.val, self.phase, self.activity, self.heap
        for lit in self.trail[start:]:
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            phase[v] = lit & 1
            self.reason[v] = -1
            heapq.heappush(heap, (-act[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)
        if len(heap) > 8 * self.n + 1024:
            self.heap = [(-act[x], x) for x in range(1, self.n + 1) if val[2 * x] == 0]
            heapq.heapify(self.heap)

    def _propagate(self) -> int:
        val, watches, clauses, trail = self.val, self.watches, self.clauses, self.trail
        props = 0
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            props += 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    if val[lit] != -1:
                        c[1] = lit
                        c[k] = false_lit
                        watches[lit].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if val[first] == -1:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        self.stats.propagations += props
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        self.stats.propagations += props
        return -1

    # -- learning ------------------------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for x in range(1, self.n + 1):
                act[x] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[x], x) for x in range(1, self.n + 1) if self.val[2 * x] == 0]
            heapq.heapify(self.heap)
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen, level, reason, trail, clauses = self.seen, self.level, self.reason, self.trail, self.clauses
        cur = len(self.trail_lim)
        learnt = [0]
        pending = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = clauses[confl]
            for q in (c if p < 0 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = 0
            pending -= 1
            if pending == 0:
                break
        learnt[0] = p ^ 1
        # drop literals implied by other literals of the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0 or not all(seen[x >> 1] or level[x >> 1] == 0 for x in clauses[r][1:]):
                keep.append(q)
        for q in learnt:
            seen[q >> 1] = 0
        learnt = keep
        bt = 0
        if len(learnt) > 1:
            best = max(range(1, len(learnt)), key=lambda k: level[learnt[k] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        self.var_inc /= self.VAR_DECAY
        return learnt, bt

    def _reduce_db(self) -> None:
        clauses, reason, val = self.clauses, self.reason, self.val
        candidates = []
        for ci, glue in self.lbd.items():
            c = clauses[ci]
            locked = reason[c[0] >> 1] == ci and val[c[0]] == 1
            if glue > 2 and not locked:
                candidates.append((glue, len(c), ci))
        candidates.sort(reverse=True)
        for _, _, ci in candidates[: len(candidates) // 2]:
            clauses[ci] = None
            del self.lbd[ci]

    def _pick(self) -> int:
        heap, val, act = self.heap, self.val, self.activity
        while heap:
            a, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -a == act[v]:
                return 2 * v + self.phase[v]
        return -1

    # -- main loop -----------------------------------------------------------

    def solve(self, time_limit: Optional[float] = None, max_conflicts: Optional[int] = None) -> SolveOutcome:
        t0 = time.monotonic()
        deadline = None if time_limit is None else t0 + time_limit
        verdict = self._search(deadline, max_conflicts)
        self.stats.elapsed = time.monotonic() - t0
        model = None
        if verdict is Verdict.SAT:
            model = {v: self.val[2 * v] == 1 for v in range(1, self.n + 1)}
        self._cancel_until(0)
        return SolveOutcome(verdict, model, self.stats)

    def _search(self, deadline, max_conflicts) -> Verdict:
        if not self.ok:
            return Verdict.UNSAT
        for lit in self.units:
            if self.val[lit] == -1:
                return Verdict.UNSAT
            if self.val[lit] == 0:
                self._enqueue(lit, -1)
        if self._propagate() >= 0:
            return Verdict.UNSAT
        stats = self.stats
        restart_budget = luby(1) * self.RESTART_UNIT
        since_restart = 0
        next_reduce = 2000
        while True:
            confl = self._propagate()
            if confl >= 0:
                stats.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return Verdict.UNSAT
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach(learnt)
                    self.lbd[ci] = len({self.level[x >> 1] for x in learnt})
                    self._enqueue(learnt[0], ci)
                if max_conflicts is not None and stats.conflicts >= max_conflicts:
                    return Verdict.UNKNOWN
                if stats.conflicts % 256 == 0 and deadline is not None and time.monotonic() > deadline:
                    return Verdict.UNKNOWN
                if len(self.lbd) >= next_reduce:
                    self._reduce_db()
                    next_reduce += 300
                continue
            if since_restart >= restart_budget:
                stats.restarts += 1
                since_restart = 0
                restart_budget = luby(stats.restarts + 1) * self.RESTART_UNIT
                self._cancel_until(0)
                if deadline is not None and time.monotonic() > deadline:
                    return Verdict.UNKNOWN
                continue
            lit = self._pick()
            if lit < 0:
                return Verdict.SAT
            stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, -1)


def _self_check(f: CnfFormula, model: dict[int, bool]) -> None:
    bad = f.evaluate(model)
    if bad is not None:
        raise ModelDoesNotSatisfy(f"model falsifies clause {bad}: {f.clauses[bad]}")


def solve(f: CnfFormula, time_limit: Optional[float] = None, max_conflicts: Optional[int] = None,
          seed: int = 0) -> SolveOutcome:
    """Decide ``f`` with the internal solver; UNKNOWN when the budget runs out."""
    solver = Cdcl(f.var_count, f.clauses, seed=seed)
    out = solver.solve(time_limit, max_conflicts)
    if out.verdict is Verdict.SAT:
        _self_check(f, out.model)
    log.debug("internal: %s after %d conflicts, %.2fs", out.verdict.value, out.stats.conflicts, out.stats.elapsed)
    return out


def solve_external(f: CnfFormula, solver_command: str = DEFAULT_EXTERNAL,
                   time_limit: Optional[float] = None) -> SolveOutcome:
    """Run ``solver_command <dimacs-file>`` and parse its standard output."""
    argv = shlex.split(solver_command)
    fd, path = tempfile.mkstemp(suffix=".cnf")
    t0 = time.monotonic()
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(to_dimacs(f))
        try:
            proc = subprocess.run(argv + [path], capture_output=True, text=True, timeout=time_limit)
        except subprocess.TimeoutExpired:
            return SolveOutcome(Verdict.UNKNOWN, None, SolveStats(elapsed=time.monotonic() - t0))
        except OSError as exc:
            raise SolverProcessFailed(f"cannot run {argv[0]!r}: {exc}") from None
    finally:
        os.unlink(path)
    elapsed = time.monotonic() - t0
    try:
        verdict, model = parse_solver_output(proc.stdout, f.var_count)
    except MalformedSolverOutput:
        if proc.returncode not in (0, 10, 20):
            raise SolverProcessFailed(
                f"solver exited with {proc.returncode}: {proc.stderr.strip()[-500:]}"
            ) from None
        raise
    if verdict is Verdict.SAT:
        _self_check(f, model)
    return SolveOutcome(verdict, model, SolveStats(elapsed=elapsed))


def run_backend(f: CnfFormula, backend: str = "internal", time_limit: Optional[float] = None,
                seed: int = 0) -> SolveOutcome:
    """Dispatch on a backend name: ``internal``, ``external`` or ``cmd:<command>``."""
    if backend == "internal":
        return solve(f, time_limit=time_limit, seed=seed)
    if backend == "external":
        return solve_external(f, DEFAULT_EXTERNAL, time_limit)
    if backend.startswith("cmd:"):
        return solve_external(f, backend[4:], time_limit)
    raise ValueError(f"unknown backend {backend!r}")


@dataclass
class PageResult:
    verdict: Verdict
    embedding: Optional[BookEmbedding]
    outcome: SolveOutcome


def embed(g: Graph, pages: int, dispersable: bool = False, backend: str = "internal",
          time_limit: Optional[float] = None, symmetry: Symmetry = Symmetry.default(),
          seed: int = 0) -> PageResult:
    """Encode, solve, and decode into a verified embedding when satisfiable."""
    f, vm = encode(g, pages, dispersable, symmetry)
    out = run_backend(f, backend, time_limit, seed)
    emb = None
    if out.verdict is Verdict.SAT:
        emb = decode(out.model, vm, g, pages, f)
        report = verify(g, emb, dispersable)
        if not report.valid:
            raise RuntimeError(f"decoded embedding fails verification: {report.violations[:3]}")
    return PageResult(out.verdict, emb, out)


@dataclass
class DbtResult:
    status: str  # "found", "none" (all UNSAT in range) or "unknown"
    k: Optional[int] = None
    witness: Optional[BookEmbedding] = None
    verdicts: dict[int, Verdict] = field(default_factory=dict)


def decide_dbt(g: Graph, lower: Optional[int] = None, upper: Optional[int] = None,
               backend: str = "internal", budget: Optional[float] = None, dispersable: bool = True,
               symmetry: Symmetry = Symmetry.default(), seed: int = 0) -> DbtResult:
    """Least page count in ``[lower, upper]`` admitting a (dispersable) embedding.

    ``lower`` defaults to the max degree for dispersable embeddings and 1
    otherwise. ``budget`` is total wall time. No thickness is claimed once any
    verdict below it is unknown.
    """
    if lower is None:
        lower = max(1, max_degree(g)) if dispersable else 1
    lower = max(lower, 1)
    if upper is None:
        upper = lower
    if lower > upper:
        raise ValueError(f"empty range [{lower}, {upper}]")
    deadline = None if budget is None else time.monotonic() + budget
    result = DbtResult("none")
    for p in range(lower, upper + 1):
        remaining = None if deadline is None else max(deadline - time.monotonic(), 0.0)
        res = embed(g, p, dispersable, backend, remaining, symmetry, seed)
        result.verdicts[p] = res.verdict
        if res.verdict is Verdict.UNKNOWN:
            result.status = "unknown"
            return result
        if res.verdict is Verdict.SAT:
            result.status, result.k, result.witness = "found", p, res.embedding
            return result
    return result

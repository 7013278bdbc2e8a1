import random
import sys
import textwrap

import pytest
from hypothesis import given, settings, strategies as st
from pysat.solvers import Solver

from bookembed.encoding import CnfFormula, ModelDoesNotSatisfy, Symmetry, Verdict, encode
from bookembed.graph import complete, cycle, folkman, gray, heawood
from bookembed.solver import (
    DEFAULT_EXTERNAL, SolverProcessFailed, decide_dbt, embed, luby, run_backend, solve, solve_external,
)
from bookembed.embedding import alternation_holds, verify
from bookembed.graph import bipartition

STRONG = Symmetry.default() | Symmetry.REFLECTION | Symmetry.PIN_STAR


def formula(var_count, clauses):
    f = CnfFormula(var_count)
    for c in clauses:
        f.add(c)
    return f


def test_luby_prefix():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]
    with pytest.raises(ValueError):
        luby(0)


@pytest.mark.parametrize("backend", ["internal", "external"])
def test_basic_verdicts(backend):
    out = run_backend(formula(0, []), backend)
    assert out.verdict is Verdict.SAT and out.model == {}
    assert run_backend(formula(1, [[1], [-1]]), backend).verdict is Verdict.UNSAT
    f, _ = encode(cycle(4), 2, True)
    assert run_backend(f, backend).verdict is Verdict.SAT
    f, _ = encode(cycle(4), 1, True)
    assert run_backend(f, backend).verdict is Verdict.UNSAT


def pigeonhole(holes):
    var = lambda i, j: i * holes + j + 1
    clauses = [[var(i, j) for j in range(holes)] for i in range(holes + 1)]
    for j in range(holes):
        for a in range(holes + 1):
            for b in range(a + 1, holes + 1):
                clauses.append([-var(a, j), -var(b, j)])
    return formula((holes + 1) * holes, clauses)


def test_pigeonhole_unsat():
    assert solve(pigeonhole(6)).verdict is Verdict.UNSAT


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(5, 40), st.integers(0, 3))
def test_random_3sat_matches_reference(seed, n, seed2):
    rng = random.Random(seed)
    m = int(n * rng.uniform(3.0, 5.5))
    clauses = [[rng.choice((-1, 1)) * v for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)]
    out = solve(formula(n, clauses), seed=seed2)
    with Solver(name="minisat22", bootstrap_with=clauses) as ref:
        expected = ref.solve()
    assert (out.verdict is Verdict.SAT) == expected
    if expected:
        assert formula(n, clauses).evaluate(out.model) is None


def test_internal_budget_gives_unknown():
    out = solve(pigeonhole(10), max_conflicts=50)
    assert out.verdict is Verdict.UNKNOWN
    f, _ = encode(complete(8), 3, False)
    assert solve(f, time_limit=0.05).verdict is Verdict.UNKNOWN


def test_seeds_are_deterministic():
    f, _ = encode(heawood(), 3, True)
    a, b = solve(f, seed=7), solve(f, seed=7)
    assert a.model == b.model and a.stats.conflicts == b.stats.conflicts


def _script(tmp_path, body):
    path = tmp_path / "fake_solver.py"
    path.write_text(textwrap.dedent(body))
    return f"{sys.executable} {path}"


def test_external_bridge_failures(tmp_path):
    f = formula(2, [[1], [2]])
    with pytest.raises(SolverProcessFailed):
        solve_external(f, "/nonexistent/solver")
    crash = _script(tmp_path, "import sys\nsys.exit(3)\n")
    with pytest.raises(SolverProcessFailed):
        solve_external(f, crash)
    liar = _script(tmp_path, "print('s SATISFIABLE'); print('v -1 2 0')\n")
    with pytest.raises(ModelDoesNotSatisfy):
        solve_external(f, liar)
    slow = _script(tmp_path, "import time\ntime.sleep(30)\n")
    assert solve_external(f, slow, time_limit=0.5).verdict is Verdict.UNKNOWN
    # exit status is ignored when the output is well formed
    odd = _script(tmp_path, "import sys\nprint('s UNSATISFIABLE')\nsys.exit(1)\n")
    assert solve_external(f, odd).verdict is Verdict.UNSAT
    assert run_backend(f, "cmd:" + DEFAULT_EXTERNAL).verdict is Verdict.SAT
    with pytest.raises(ValueError):
        run_backend(f, "quantum")


@pytest.mark.parametrize("p", [2, 3])
def test_internal_external_agree_on_heawood(p):
    f, _ = encode(heawood(), p, True)
    assert solve(f).verdict is solve_external(f).verdict is (Verdict.SAT if p == 3 else Verdict.UNSAT)


def test_decide_dbt_heawood():
    g = heawood()
    res = decide_dbt(g, 3, 4)
    assert (res.status, res.k) == ("found", 3)
    assert verify(g, res.witness, True).valid
    assert alternation_holds(g, bipartition(g), res.witness)


def test_decide_dbt_range_and_unknown():
    g = cycle(6)
    res = decide_dbt(g, 1, 1)
    assert res.status == "none" and res.verdicts == {1: Verdict.UNSAT}
    assert decide_dbt(g).k == 2  # lower bound defaults to the max degree
    res = decide_dbt(complete(8), 3, 3, dispersable=False, budget=0.05)
    assert res.status == "unknown" and res.k is None
    with pytest.raises(ValueError):
        decide_dbt(g, 3, 2)


def test_decide_dbt_ordinary():
    assert decide_dbt(cycle(6), dispersable=False).k == 1
    assert decide_dbt(complete(4), dispersable=False, upper=3).k == 2
    assert decide_dbt(complete(5), 1, 3, dispersable=False).k == 3


@pytest.mark.slow
def test_decide_dbt_folkman_external():
    res = decide_dbt(folkman(), 4, 5, backend="external", symmetry=STRONG)
    assert res.verdicts == {4: Verdict.UNSAT, 5: Verdict.SAT}
    assert res.k == 5 and verify(folkman(), res.witness, True).valid


@pytest.mark.very_slow
def test_decide_dbt_gray_external():
    res = decide_dbt(gray(), 3, 4, backend="external", symmetry=STRONG)
    assert res.verdicts == {3: Verdict.UNSAT, 4: Verdict.SAT}


def test_embed_reports_witness_only_on_sat():
    r = embed(cycle(4), 1, True)
    assert r.verdict is Verdict.UNSAT and r.embedding is None
    r = embed(cycle(4), 2, True, backend="external")
    assert r.verdict is Verdict.SAT and verify(cycle(4), r.embedding, True).valid


def _reference_verdict(f):
    with Solver(name="cadical195", bootstrap_with=f.clauses) as ref:
        return Verdict.SAT if ref.solve() else Verdict.UNSAT


@pytest.mark.slow
def test_symmetry_flags_and_reference_agree_up_to_seven_vertices():
    from helpers import atlas_connected

    flags = [Symmetry.NONE, Symmetry.default(), STRONG]
    for g in atlas_connected(7):
        for disp in (False, True):
            for p in (1, 2, 3):
                verdicts = {solve(encode(g, p, disp, s)[0]).verdict for s in flags}
                verdicts.add(_reference_verdict(encode(g, p, disp, Symmetry.NONE)[0]))
                assert len(verdicts) == 1, (g.edges, disp, p)

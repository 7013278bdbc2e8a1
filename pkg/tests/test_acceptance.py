"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` for a pass/fail line per criterion
(add ``--run-very-slow`` for the Gray lower bound), or execute this file.
"""

import math
import random
import time
from collections import defaultdict

import pytest

from bookembed.barnette import Color, dispersable_embedding
from bookembed.embedding import (
    BookEmbedding, Exhausted, alternation_holds, brute_force_thickness, from_circular, read_embedding,
    to_circular, verify, write_embedding,
)
from bookembed.encoding import Symmetry, Verdict, build_varmap, clause_tally, encode
from bookembed.graph import bipartition, folkman, gray, heawood
from bookembed.planar import embedded_cube, embedded_prism, truncated_octahedron
from bookembed.solver import decide_dbt, embed, solve

from helpers import atlas_connected

STRONG = Symmetry.default() | Symmetry.REFLECTION | Symmetry.PIN_STAR

# (graph name, dispersable) -> {pages: verdict}, filled by every solver call below
VERDICTS: dict[tuple[str, bool], dict[int, Verdict]] = defaultdict(dict)


def record(name, dispersable, pages, verdict):
    VERDICTS[(name, dispersable)][pages] = verdict


def solved(name, g, pages, dispersable, backend, budget, symmetry=Symmetry.default()):
    t0 = time.monotonic()
    res = embed(g, pages, dispersable, backend, budget, symmetry)
    record(name, dispersable, pages, res.verdict)
    if res.embedding is not None:
        # witnesses must survive the file format and re-verify from text
        back = read_embedding(g, write_embedding(g, res.embedding))
        assert back == res.embedding and verify(g, back, dispersable).valid
    return res, time.monotonic() - t0


def test_criterion_1_heawood_dispersable():
    g = heawood()
    t0 = time.monotonic()
    res = decide_dbt(g, 3, 4, backend="internal")
    assert time.monotonic() - t0 < 60
    for p, v in res.verdicts.items():
        record("heawood", True, p, v)
    assert (res.status, res.k) == ("found", 3)
    assert verify(g, res.witness, dispersable=True).valid
    assert alternation_holds(g, bipartition(g), res.witness)


def test_criterion_2_folkman_five_pages():
    res, took = solved("folkman", folkman(), 5, True, "external", 600)
    assert res.verdict is Verdict.SAT and took < 600


@pytest.mark.slow
def test_criterion_3_folkman_not_four_pages():
    res, _ = solved("folkman", folkman(), 4, True, "external", 2 * 3600, STRONG)
    assert res.verdict is Verdict.UNSAT


def test_criterion_4_gray_four_pages():
    res, took = solved("gray", gray(), 4, True, "external", 1800)
    assert res.verdict is Verdict.SAT and took < 1800


@pytest.mark.slow
@pytest.mark.very_slow
def test_criterion_5_gray_not_three_pages():
    res, _ = solved("gray", gray(), 3, True, "external", 24 * 3600, STRONG)
    assert res.verdict is Verdict.UNSAT


BARNETTE = [("cube", embedded_cube), ("hex_prism", lambda: embedded_prism(6))] + [
    (f"prism{2 * k}", lambda k=k: embedded_prism(2 * k)) for k in range(2, 7)
] + [("truncated_octahedron", truncated_octahedron)]


@pytest.mark.parametrize("name, make", BARNETTE, ids=[b[0] for b in BARNETTE])
def test_criterion_6_barnette_pipeline(name, make):
    rs = make()
    g = rs.graph
    t0 = time.monotonic()
    res = dispersable_embedding(rs, check_invariants=True)
    assert time.monotonic() - t0 < 1
    assert res.embedding.page_count == 3
    assert verify(g, res.embedding, dispersable=True).valid
    green = set(res.edge_coloring.edges_of(Color.GREEN))
    assert len(green) == g.n // 2 and green <= res.cycle.edges_on
    assert len(res.cycle.edges_on) >= math.ceil(2 * g.n / 3 - 1 / 3)


def _agree(g, dispersable):
    bf = brute_force_thickness(g, dispersable, max_pages=3)
    res = decide_dbt(g, 1, 3, dispersable=dispersable)
    for p, v in res.verdicts.items():
        record(repr(g.edges) + f"/{g.n}", dispersable, p, v)
    if isinstance(bf, Exhausted):
        return res.status == "none"
    return res.status == "found" and res.k == bf[0]


def test_criterion_7_oracle_agreement():
    t0 = time.monotonic()
    corpus = atlas_connected(7)
    assert len(corpus) == 996
    bad = [(g.n, g.edges, d) for g in corpus for d in (False, True) if not _agree(g, d)]
    assert bad == []
    assert time.monotonic() - t0 < 30 * 60


def test_criterion_8_encoder_counts():
    for g, p, want in ((heawood(), 3, 364), (folkman(), 4, 1130)):
        n, m = g.n, g.m
        vm = build_varmap(g, p)
        assert vm.total_vars == n * (n - 1) // 2 + p * m + m * (m - 1) // 2 == want
        for disp in (False, True):
            f, _ = encode(g, p, disp)
            # independent tally: walk every edge pair
            pairs = [(set(a) & set(b)) for i, a in enumerate(g.edges) for b in g.edges[i + 1:]]
            shared = sum(1 for s in pairs if s)
            expected = (2 * math.comb(n, 3) + m + p * math.comb(m, 2) + 8 * (len(pairs) - shared)
                        + (shared if disp else 0) + (n - 1) + 1)
            assert len(f.clauses) == expected == sum(clause_tally(g, p, disp, Symmetry.default()).values())
    assert (190, 160, 780) == (len(build_varmap(folkman(), 4).sigma), len(build_varmap(folkman(), 4).phi),
                               len(build_varmap(folkman(), 4).chi))


def test_criterion_9_three_page_book_embeddings():
    for name, g in (("folkman", folkman()), ("gray", gray())):
        res, took = solved(name, g, 3, False, "external", 1800)
        assert res.verdict is Verdict.SAT and took < 1800


def test_criterion_10_properties():
    rng = random.Random(20261016)
    corpus = atlas_connected(7)
    # rotation/reflection invariance of the verifier
    for _ in range(1000):
        g = rng.choice(corpus)
        spine = list(range(g.n))
        rng.shuffle(spine)
        pages = rng.randint(1, 3)
        emb = BookEmbedding(tuple(spine), tuple(rng.randrange(pages) for _ in range(g.m)), pages)
        circ = to_circular(emb).rotated(rng.randrange(g.n))
        if rng.random() < 0.5:
            circ = circ.reflected()
        other = from_circular(circ)
        for disp in (False, True):
            assert verify(g, emb, disp).valid == verify(g, other, disp).valid
    # every page count on the small corpus, so monotonicity has full columns to check
    for g in atlas_connected(6):
        for disp in (False, True):
            for p in (1, 2, 3):
                f, _ = encode(g, p, disp)
                out = solve(f)  # raises if a model fails re-evaluation
                if out.verdict is Verdict.SAT:
                    assert f.evaluate(out.model) is None
                record(repr(g.edges) + f"/{g.n}", disp, p, out.verdict)
    assert VERDICTS
    for key, column in VERDICTS.items():
        for p, v in column.items():
            if v is Verdict.UNSAT:
                assert column.get(p - 1, Verdict.UNSAT) is not Verdict.SAT, key
            if v is Verdict.SAT:
                assert column.get(p + 1, Verdict.SAT) is not Verdict.UNSAT, key


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))

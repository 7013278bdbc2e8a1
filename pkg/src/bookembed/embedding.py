"""Book embeddings: data model, verification, circular form and a brute-force oracle."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional, Sequence

from bookembed.graph import Bipartition, Graph, is_regular, max_degree


class EmbeddingGraphMismatch(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BookEmbedding:
    spine: tuple[int, ...]  # position -> vertex
    page_of: tuple[int, ...]  # edge id -> page
    page_count: int

    def __post_init__(self):
        object.__setattr__(self, "spine", tuple(self.spine))
        object.__setattr__(self, "page_of", tuple(self.page_of))
        if sorted(self.spine) != list(range(len(self.spine))):
            raise ValueError(f"spine is not a permutation: {self.spine}")
        if any(not 0 <= p < self.page_count for p in self.page_of):
            raise ValueError("page index out of range")

    def positions(self) -> list[int]:
        pos = [0] * len(self.spine)
        for i, v in enumerate(self.spine):
            pos[v] = i
        return pos

    def pages(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.page_count)]
        for e, p in enumerate(self.page_of):
            out[p].append(e)
        return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "Crossing" or "NonMatching"
    witness: tuple[tuple[int, int], tuple[int, int]]


@dataclass
class VerificationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _interleave(pos: Sequence[int], e: tuple[int, int], f: tuple[int, int]) -> bool:
    a, b = sorted((pos[e[0]], pos[e[1]]))
    c, d = sorted((pos[f[0]], pos[f[1]]))
    return a < c < b < d or c < a < d < b


def edges_cross(spine: Sequence[int], e: tuple[int, int], f: tuple[int, int]) -> bool:
    """True iff e and f have four distinct endpoints that interleave along ``spine``."""
    if len({*e, *f}) < 4:
        return False
    pos = {v: i for i, v in enumerate(spine)}
    return _interleave(pos, e, f)


def verify(g: Graph, emb: BookEmbedding, dispersable: bool = False) -> VerificationReport:
    if len(emb.spine) != g.n or len(emb.page_of) != g.m:
        raise EmbeddingGraphMismatch(
            f"embedding has {len(emb.spine)} vertices / {len(emb.page_of)} edges, graph has {g.n} / {g.m}"
        )
    pos = emb.positions()
    report = VerificationReport()
    for page in emb.pages():
        for i, e in enumerate(page):
            eu = g.edges[e]
            for f in page[i + 1 :]:
                fu = g.edges[f]
                if len({*eu, *fu}) < 4:
                    if dispersable:
                        report.violations.append(Violation("NonMatching", (eu, fu)))
                elif _interleave(pos, eu, fu):
                    report.violations.append(Violation("Crossing", (eu, fu)))
    return report


def alternation_holds(g: Graph, bip: Bipartition, emb: BookEmbedding) -> bool:
    """Whether the two sides alternate around the (cyclic) spine.

    Only meaningful for a verified dispersable embedding of a regular bipartite
    graph using exactly max-degree pages; anything else is rejected.
    """
    k = max_degree(g)
    if not is_regular(g, k):
        raise PreconditionViolated("graph is not regular")
    if any(bip.side_of[u] == bip.side_of[v] for u, v in g.edges):
        raise PreconditionViolated("bipartition does not fit the graph")
    if emb.page_count != k:
        raise PreconditionViolated(f"{emb.page_count} pages, expected {k}")
    if not verify(g, emb, dispersable=True).valid:
        raise PreconditionViolated("embedding is not a valid dispersable embedding")
    s = emb.spine
    return all(bip.side_of[s[i]] != bip.side_of[s[(i + 1) % len(s)]] for i in range(len(s)))


# --- circular form ----------------------------------------------------------


@dataclass(frozen=True)
class CircularEmbedding:
    order: tuple[int, ...]  # clockwise around the circle
    color_of: tuple[int, ...]  # edge id -> colour
    colors: int

    def rotated(self, k: int) -> "CircularEmbedding":
        k %= max(len(self.order), 1)
        return CircularEmbedding(self.order[k:] + self.order[:k], self.color_of, self.colors)

    def reflected(self) -> "CircularEmbedding":
        return CircularEmbedding(self.order[::-1], self.color_of, self.colors)


def to_circular(emb: BookEmbedding) -> CircularEmbedding:
    return CircularEmbedding(emb.spine, emb.page_of, emb.page_count)


def from_circular(circ: CircularEmbedding, start: int = 0) -> BookEmbedding:
    """Cut the circle just before the vertex at index ``start``."""
    c = circ.rotated(start)
    return BookEmbedding(c.order, c.color_of, c.colors)


# --- text format ------------------------------------------------------------


def write_embedding(g: Graph, emb: BookEmbedding) -> str:
    lines = [str(emb.page_count), " ".join(map(str, emb.spine))]
    lines += [f"{u} {v} {emb.page_of[e]}" for e, (u, v) in enumerate(g.edges)]
    return "\n".join(lines) + "\n"


def read_embedding(g: Graph, text: str) -> BookEmbedding:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        pages = int(rows[0][0])
        spine = [int(x) for x in rows[1]]
        page_of: list[Optional[int]] = [None] * g.m
        for r in rows[2:]:
            u, v, p = int(r[0]), int(r[1]), int(r[2])
            page_of[g.edge_id(u, v)] = p
    except (IndexError, ValueError, KeyError) as exc:
        raise EmbeddingGraphMismatch(f"malformed embedding file: {exc!r}") from None
    if any(p is None for p in page_of):
        raise EmbeddingGraphMismatch("embedding leaves some edge without a page")
    try:
        return BookEmbedding(tuple(spine), tuple(page_of), pages)  # type: ignore[arg-type]
    except ValueError as exc:
        raise EmbeddingGraphMismatch(str(exc)) from None


# --- brute-force oracle -----------------------------------------------------


@dataclass(frozen=True)
class Exhausted:
    """No embedding with at most ``max_pages`` pages exists."""

    max_pages: int

    def __bool__(self) -> bool:
        return False


def assign_pages(g: Graph, spine: Sequence[int], pages: int, dispersable: bool = False,
                 deadline: Optional[float] = None) -> Optional[tuple[int, ...]]:
    """Backtracking page assignment for a fixed spine; None if impossible."""
    pos = [0] * g.n
    for i, v in enumerate(spine):
        pos[v] = i
    spans = [tuple(sorted((pos[u], pos[v]))) for u, v in g.edges]
    order = sorted(range(g.m), key=lambda e: (spans[e][0] - spans[e][1], spans[e]))
    # conflict[e] = earlier edges (in `order`) that may not share a page with e
    conflict: list[list[int]] = [[] for _ in range(g.m)]
    for i, e in enumerate(order):
        a, b = spans[e]
        for f in order[:i]:
            c, d = spans[f]
            if a in (c, d) or b in (c, d):
                if dispersable:
                    conflict[e].append(f)
            elif a < c < b < d or c < a < d < b:
                conflict[e].append(f)
    page = [-1] * g.m
    steps = 0

    def place(i: int, used: int) -> bool:
        nonlocal steps
        if i == len(order):
            return True
        steps += 1
        if deadline is not None and steps % 4096 == 0 and time.monotonic() > deadline:
            raise BudgetExceeded("brute force ran out of time")
        e = order[i]
        blocked = {page[f] for f in conflict[e]}
        # pages are interchangeable: never open more than one fresh page
        for p in range(min(used + 1, pages)):
            if p in blocked:
                continue
            page[e] = p
            if place(i + 1, max(used, p + 1)):
                return True
        page[e] = -1
        return False

    if not place(0, 0):
        return None
    return tuple(page)


def candidate_spines(n: int):
    """Spines with vertex 0 first and the mirror image removed (spine[1] < spine[-1])."""
    if n <= 2:
        yield tuple(range(n))
        return
    for rest in permutations(range(1, n)):
        if rest[0] < rest[-1]:
            yield (0,) + rest


def brute_force_thickness(g: Graph, dispersable: bool = False, max_pages: int = 3,
                          budget: Optional[float] = None) -> tuple[int, BookEmbedding] | Exhausted:
    """Least page count (>= 1) admitting an embedding, by exhaustive search over spines."""
    deadline = None if budget is None else time.monotonic() + budget
    for k in range(1, max_pages + 1):
        for spine in candidate_spines(g.n):
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("brute force ran out of time")
            pages = assign_pages(g, spine, k, dispersable, deadline)
            if pages is not None:
                return k, BookEmbedding(spine, pages, k)
    return Exhausted(max_pages)

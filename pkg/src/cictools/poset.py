"""Finite spectral spaces presented as posets under specialization.

A point ``p`` lies below ``q`` when the prime ``p`` is contained in ``q``.
In a finite spectral space the Zariski-closed sets are exactly the up-sets,
so every topological notion used here is a finite order computation.
Subsets of points are plain ``frozenset`` values.
"""

from __future__ import annotations

import random
from typing import Hashable, Iterable, Mapping

import networkx as nx

from cictools.errors import InputError

Point = str
PointSet = frozenset


class SpectralPoset:
    """An immutable finite poset with Zariski-topology queries.

    ``covers`` lists pairs ``(p, q)`` with ``p < q``; the strict order is
    the transitive closure of that list.  Redundant pairs are allowed, and
    the cover relation is recomputed from the closure.
    """

    __slots__ = ("points", "_below", "_above", "_heights", "_index")

    def __init__(self, points: Iterable[Point], covers: Iterable[tuple[Point, Point]] = ()):
        pts = tuple(dict.fromkeys(points))
        index = {p: i for i, p in enumerate(pts)}
        up: dict[Point, set[Point]] = {p: set() for p in pts}
        for p, q in covers:
            if p not in index or q not in index:
                raise InputError(f"cover pair ({p!r}, {q!r}) names an unknown point")
            if p == q:
                raise InputError(f"cover pair ({p!r}, {q!r}) is reflexive")
            up[p].add(q)

        # Kahn's algorithm doubles as the cycle check.
        indeg = {p: 0 for p in pts}
        for p in pts:
            for q in up[p]:
                indeg[q] += 1
        order = [p for p in pts if indeg[p] == 0]
        for p in order:
            for q in sorted(up[p], key=index.__getitem__):
                indeg[q] -= 1
                if indeg[q] == 0:
                    order.append(q)
        if len(order) != len(pts):
            raise InputError("order relation has a cycle")

        below: dict[Point, frozenset] = {}
        preds: dict[Point, set[Point]] = {p: set() for p in pts}
        for p in pts:
            for q in up[p]:
                preds[q].add(p)
        for q in order:
            acc: set[Point] = set()
            for p in preds[q]:
                acc.add(p)
                acc |= below[p]
            below[q] = frozenset(acc)
        above: dict[Point, set[Point]] = {p: set() for p in pts}
        for q in pts:
            for p in below[q]:
                above[p].add(q)

        heights: dict[Point, int] = {}
        for q in order:
            heights[q] = max((heights[p] + 1 for p in preds[q]), default=0)

        self.points = pts
        self._index = index
        self._below = below
        self._above = {p: frozenset(s) for p, s in above.items()}
        self._heights = heights

    def __repr__(self) -> str:
        return f"SpectralPoset({len(self.points)} points, {len(self.cover_pairs())} covers)"

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def __len__(self) -> int:
        return len(self.points)

    def _check(self, *pts: Point) -> None:
        for p in pts:
            if p not in self._index:
                raise InputError(f"unknown point {p!r}")

    def _check_set(self, x: Iterable[Point]) -> frozenset:
        x = frozenset(x)
        self._check(*x)
        return x

    def sort(self, x: Iterable[Point]) -> list[Point]:
        """Points of ``x`` in construction order."""
        return sorted(x, key=self._index.__getitem__)

    def lt(self, p: Point, q: Point) -> bool:
        self._check(p, q)
        return p in self._below[q]

    def leq(self, p: Point, q: Point) -> bool:
        return p == q or self.lt(p, q)

    def strictly_below(self, p: Point) -> frozenset:
        self._check(p)
        return self._below[p]

    def strictly_above(self, p: Point) -> frozenset:
        self._check(p)
        return self._above[p]

    def covers(self, p: Point, q: Point) -> bool:
        """True iff ``p < q`` with nothing strictly in between."""
        self._check(p, q)
        if p not in self._below[q]:
            return False
        return not (self._above[p] & self._below[q])

    def cover_pairs(self) -> list[tuple[Point, Point]]:
        return [(p, q) for q in self.points for p in self.sort(self._below[q]) if self.covers(p, q)]

    def zariski_closure(self, x: Iterable[Point]) -> frozenset:
        x = self._check_set(x)
        out = set(x)
        for p in x:
            out |= self._above[p]
        return frozenset(out)

    def is_closed(self, x: Iterable[Point]) -> bool:
        x = self._check_set(x)
        return self.zariski_closure(x) == x

    def is_down_closed(self, x: Iterable[Point]) -> bool:
        x = self._check_set(x)
        return all(self._below[p] <= x for p in x)

    def is_dense(self, x: Iterable[Point]) -> bool:
        return self.zariski_closure(x) == frozenset(self.points)

    def rim_closure(self, x: Iterable[Point]) -> frozenset:
        """``x`` together with every outside point covered by a member of ``x``."""
        x = self._check_set(x)
        rim = {p for q in x for p in self._below[q] if p not in x and self.covers(p, q)}
        return x | frozenset(rim)

    def minimal_elements(self, x: Iterable[Point]) -> frozenset:
        x = self._check_set(x)
        return frozenset(p for p in x if not (self._below[p] & x))

    def minimal_points(self) -> frozenset:
        return frozenset(p for p in self.points if not self._below[p])

    def height(self, p: Point) -> int:
        """Length of the longest strict chain ending at ``p``."""
        self._check(p)
        return self._heights[p]

    def is_tree(self) -> bool:
        """True iff every principal down-set is a chain."""
        for q in self.points:
            down = list(self._below[q])
            for i, a in enumerate(down):
                for b in down[i + 1:]:
                    if a not in self._below[b] and b not in self._below[a]:
                        return False
        return True

    def hasse_digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.points)
        g.add_edges_from(self.cover_pairs())
        return g


def relabel(poset: SpectralPoset, mapping: Mapping[Point, Hashable]) -> SpectralPoset:
    """Copy of ``poset`` with points renamed through ``mapping``."""
    return SpectralPoset(
        (mapping[p] for p in poset.points),
        ((mapping[p], mapping[q]) for p, q in poset.cover_pairs()),
    )


def is_order_isomorphism(src: SpectralPoset, dst: SpectralPoset, iso: Mapping[Point, Point]) -> bool:
    if set(iso) != set(src.points) or len(src) != len(dst):
        return False
    if set(iso.values()) != set(dst.points):
        return False
    return all(
        src.lt(p, q) == dst.lt(iso[p], iso[q])
        for p in src.points
        for q in src.points
    )


def find_isomorphism(src: SpectralPoset, dst: SpectralPoset) -> dict[Point, Point] | None:
    """An order isomorphism ``src -> dst``, or None when the posets differ."""
    if len(src) != len(dst):
        return None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(src.hasse_digraph(), dst.hasse_digraph())
    for iso in matcher.isomorphisms_iter():
        return dict(iso)
    return None


def automorphisms(poset: SpectralPoset, limit: int = 64) -> list[dict[Point, Point]]:
    g = poset.hasse_digraph()
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(g, g)
    out = []
    for iso in matcher.isomorphisms_iter():
        out.append(dict(iso))
        if len(out) >= limit:
            break
    return out


def check_qf_invariance(
    src: SpectralPoset, dst: SpectralPoset, iso: Mapping[Point, Point], x: Iterable[Point]
) -> bool:
    """Whether ``iso`` carries the rim closure of ``x`` onto the rim closure of its image.

    Always true for an order isomorphism; kept as a probe for tests.
    """
    if not is_order_isomorphism(src, dst, iso):
        raise InputError("mapping is not an order isomorphism")
    x = frozenset(x)
    image = frozenset(iso[p] for p in src.rim_closure(x))
    return image == dst.rim_closure(iso[p] for p in x)


def random_poset(rng: random.Random, n: int, density: float = 0.3) -> SpectralPoset:
    """Random poset on points ``x0..x{n-1}`` from a random DAG on a shuffled order."""
    labels = [f"x{i}" for i in range(n)]
    shuffled = labels[:]
    rng.shuffle(shuffled)
    pairs = [
        (shuffled[i], shuffled[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    return SpectralPoset(labels, pairs)


def to_dot(poset: SpectralPoset, name: str = "spectrum", labels: Mapping[Point, str] | None = None) -> str:
    """Graphviz description with one directed edge per cover pair."""
    lines = [f"digraph {name} {{"]
    for p in poset.points:
        if labels and p in labels:
            lines.append(f'  "{p}" [label="{p}\\n{labels[p]}"];')
        else:
            lines.append(f'  "{p}";')
    for p, q in poset.cover_pairs():
        lines.append(f'  "{p}" -> "{q}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

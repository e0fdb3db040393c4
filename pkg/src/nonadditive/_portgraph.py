"""Directed multigraphs with labelled input and output ports.

Shared by the graph F-ring and the arithmetical-plane rewriting search.  A
graph has integer vertices, a multiset of tagged edges and two partial
embeddings: ``inputs`` maps source labels to vertices, ``outputs`` maps
target labels to vertices.  Canonical forms use colour refinement followed
by individualisation, so isomorphic graphs get identical keys.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .fincat import label_key


@dataclass(frozen=True)
class PortGraph:
    n: int
    edges: tuple  # sorted tuple of (src, dst, tag)
    inputs: tuple  # sorted tuple of (label, vertex)
    outputs: tuple  # sorted tuple of (label, vertex)

    @classmethod
    def build(cls, n, edges, inputs, outputs) -> "PortGraph":
        edges = tuple(sorted((int(s), int(d), t) for s, d, t in edges))
        inputs = tuple(sorted(dict(inputs).items(), key=lambda kv: label_key(kv[0])))
        outputs = tuple(sorted(dict(outputs).items(), key=lambda kv: label_key(kv[0])))
        return cls(n, edges, inputs, outputs)

    # -- structure -------------------------------------------------------
    def out_edges(self, v):
        return [e for e in self.edges if e[0] == v]

    def in_edges(self, v):
        return [e for e in self.edges if e[1] == v]

    def adjacency(self):
        outs = defaultdict(list)
        ins = defaultdict(list)
        for i, (s, d, t) in enumerate(self.edges):
            outs[s].append(i)
            ins[d].append(i)
        return outs, ins

    def sources(self) -> set:
        """Vertices without incoming edges."""
        has_in = {d for _, d, _ in self.edges}
        return {v for v in range(self.n) if v not in has_in}

    def sinks(self) -> set:
        has_out = {s for s, _, _ in self.edges}
        return {v for v in range(self.n) if v not in has_out}

    def is_acyclic(self) -> bool:
        indeg = Counter(d for _, d, _ in self.edges)
        outs, _ = self.adjacency()
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for i in outs[v]:
                d = self.edges[i][1]
                indeg[d] -= 1
                if indeg[d] == 0:
                    stack.append(d)
        return seen == self.n

    def renumber(self, order) -> "PortGraph":
        """Keep the vertices listed in ``order`` (old ids), renumbered 0..k-1."""
        pos = {v: i for i, v in enumerate(order)}
        edges = [(pos[s], pos[d], t) for s, d, t in self.edges if s in pos and d in pos]
        inputs = [(x, pos[v]) for x, v in self.inputs if v in pos]
        outputs = [(y, pos[v]) for y, v in self.outputs if v in pos]
        return PortGraph.build(len(order), edges, inputs, outputs)

    # -- canonical form --------------------------------------------------
    def canonical(self) -> "PortGraph":
        key = self.__dict__.get("_canon")
        if key is None:
            key = _canonical(self)
            object.__setattr__(self, "_canon", key)
        return key


def _refine(g: PortGraph, colors: list[int]) -> list[int]:
    outs, ins = g.adjacency()
    while True:
        sigs = []
        for v in range(g.n):
            o = sorted((g.edges[i][2], colors[g.edges[i][1]]) for i in outs[v])
            n = sorted((g.edges[i][2], colors[g.edges[i][0]]) for i in ins[v])
            sigs.append((colors[v], tuple(o), tuple(n)))
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _encode(g: PortGraph, colors: list[int]):
    order = sorted(range(g.n), key=lambda v: colors[v])
    pos = {v: i for i, v in enumerate(order)}
    edges = tuple(sorted((pos[s], pos[d], t) for s, d, t in g.edges))
    inputs = tuple((x, pos[v]) for x, v in g.inputs)
    outputs = tuple((y, pos[v]) for y, v in g.outputs)
    return PortGraph(g.n, edges, inputs, outputs)


def _sort_key(g: PortGraph):
    return (g.edges, tuple((label_key(x), v) for x, v in g.inputs),
            tuple((label_key(y), v) for y, v in g.outputs))


def _canonical(g: PortGraph) -> PortGraph:
    init = []
    in_of = defaultdict(list)
    out_of = defaultdict(list)
    for x, v in g.inputs:
        in_of[v].append(label_key(x))
    for y, v in g.outputs:
        out_of[v].append(label_key(y))
    sigs = [(tuple(sorted(in_of[v])), tuple(sorted(out_of[v]))) for v in range(g.n)]
    ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
    init = [ranks[s] for s in sigs]
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(g, colors)
        if len(set(colors)) == g.n:
            cand = _encode(g, colors)
            if best is None or _sort_key(cand) < _sort_key(best):
                best = cand
            return
        counts = Counter(colors)
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(g.n):
            if colors[v] == target:
                # individualise v: give it a colour just below its cell
                ind = [2 * c + (0 if (u == v) else 1) if c == target else 2 * c + 1 if c > target else 2 * c
                       for u, c in enumerate(colors)]
                search(ind)

    search(init)
    return best

"""The arithmetical plane as a rewriting system.

Two models live here.

*LR graphs.*  An element of the tensor square of F(N) is a finite acyclic
multigraph whose edges are tagged ``"l"`` or ``"r"`` (which factor they come
from).  All edges entering a vertex carry one tag, and so do all edges
leaving it.  Sources are the input ports, sinks are the output ports, and
every vertex lies on a path from an input to an output (zero-reduced).  The
graphs are :class:`~nonadditive._portgraph.PortGraph` values, so isomorphism
classes have canonical keys.

Moves (each keeps the path-count matrix fixed):

* ``lr-red``: l/r-reduction (an interior vertex whose incoming and outgoing
  tags agree is replaced by the fibre product of its in- and out-star) and
  1-reduction (an edge that is the only way out of its source and the only
  way into its target is contracted).
* ``lr-infl``: the inverses of the two reductions.
* ``comm6``: the six rewrites between the three shapes of the commutativity
  triangle, for a connected piece ``a`` and fans ``b``, ``d`` of one tag
  with ``|J| <= max_fan``.
* ``one-comm``: regrouping a two-level fan, which is what 1-commutativity
  allows (``a ∘ (⊕ b) = b ∘ (⊕ a)`` composed with a partial selection of
  the leaves), together with its mirror image.

*Oriented trees.*  Elements of the free sum of two copies of G(N) are
tree elements (see :mod:`nonadditive.deltafree`) whose internal nodes carry
an orientation 0 or 1 (stored as the generator name).  ``upsilon_canonical``
removes nodes with one child and merges a node into its parent when the two
orientations agree.  ``nabla`` counts boundary leaves.
"""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field

from . import fincat
from ._parallel import ordered_map
from ._portgraph import PortGraph
from .deltafree import (ROOT, LabelledTree, TreeElement, generator, random_tree_element, tree_contract,
                        tree_mult, zero_element)
from .fincat import FinSet, label_key
from .genring import SetMap, get_instance

SIDES = ("l", "r")
MOVE_FAMILIES = ("lr-red", "lr-infl", "comm6", "one-comm")
CORE_MOVES = ("lr-red", "lr-infl", "comm6")


class InvalidGraph(ValueError):
    pass


# ---------------------------------------------------------------------------
# construction and validation

def _stars(G: PortGraph):
    ins, outs = defaultdict(list), defaultdict(list)
    for e in G.edges:
        outs[e[0]].append(e)
        ins[e[1]].append(e)
    return ins, outs


def problems(G: PortGraph) -> list[str]:
    """Reasons why G is not a valid zero-reduced LR graph (empty if valid)."""
    out = []
    ins, outs = _stars(G)
    for s, d, t in G.edges:
        if t not in SIDES:
            out.append(f"edge tag {t!r} is not l or r")
        if s == d:
            out.append("loop")
    for v in range(G.n):
        if len({t for _, _, t in ins[v]}) > 1:
            out.append(f"vertex {v} has mixed incoming tags")
        if len({t for _, _, t in outs[v]}) > 1:
            out.append(f"vertex {v} has mixed outgoing tags")
    if not G.is_acyclic():
        out.append("cycle")
    in_v = [v for _, v in G.inputs]
    out_v = [v for _, v in G.outputs]
    if len(set(in_v)) != len(in_v) or len(set(out_v)) != len(out_v):
        out.append("ports must be injective")
    if set(in_v) != G.sources():
        out.append("input ports must be exactly the sources")
    if set(out_v) != G.sinks():
        out.append("output ports must be exactly the sinks")
    return out


def lr_graph(n: int, edges, inputs, outputs) -> PortGraph:
    """Build and validate an LR graph; ``inputs``/``outputs`` map port labels to vertices."""
    G = PortGraph.build(n, edges, inputs, outputs)
    bad = problems(G)
    if bad:
        raise InvalidGraph("; ".join(sorted(set(bad))))
    return G


def fork(side: str = "l", arity: int = 2) -> PortGraph:
    """The fan from [arity] to [1] whose edges carry ``side``."""
    return lr_graph(arity + 1, [(i, arity, side) for i in range(arity)],
                    {i + 1: i for i in range(arity)}, {1: arity})


def cofork(side: str = "l", arity: int = 2) -> PortGraph:
    return reverse(fork(side, arity))


def sigma() -> PortGraph:
    return fork("l")


def sigma_prime() -> PortGraph:
    return fork("r")


def identity_graph(n: int = 1) -> PortGraph:
    return lr_graph(n, [], {i + 1: i for i in range(n)}, {i + 1: i for i in range(n)})


def reverse(G: PortGraph) -> PortGraph:
    """The transpose: edges reversed, inputs and outputs exchanged."""
    return PortGraph.build(G.n, [(d, s, t) for s, d, t in G.edges], G.outputs, G.inputs)


def compose(H: PortGraph, G: PortGraph) -> PortGraph:
    """H ∘ G: glue the output port y of G to the input port y of H, then reduce zeros."""
    outG = dict(G.outputs)
    inH = dict(H.inputs)
    off = G.n
    parent = list(range(G.n + H.n))

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for y, v in outG.items():
        if y in inH:
            parent[find(off + inH[y])] = find(v)
    edges = [(find(s), find(d), t) for s, d, t in G.edges] + [(find(off + s), find(off + d), t)
                                                              for s, d, t in H.edges]
    inputs = {x: find(v) for x, v in G.inputs}
    outputs = {y: find(off + v) for y, v in H.outputs}
    # glued vertices that were an output of G with no matching input of H are dead ends
    W = _Work(set(find(v) for v in range(G.n + H.n)), edges, inputs, outputs)
    return W.finish(strict=True)


def oplus(*graphs: PortGraph) -> PortGraph:
    """Direct sum; ports are relabelled (i, label)."""
    edges, inputs, outputs, off = [], {}, {}, 0
    for i, G in enumerate(graphs):
        edges += [(s + off, d + off, t) for s, d, t in G.edges]
        inputs.update({(i, x): v + off for x, v in G.inputs})
        outputs.update({(i, y): v + off for y, v in G.outputs})
        off += G.n
    return PortGraph.build(off, edges, inputs, outputs)


def path_counts(G: PortGraph) -> dict:
    """{(y, x): number of directed paths from input x to output y}."""
    ins, outs = _stars(G)
    order = _topo(G)
    res = {}
    for x, v in G.inputs:
        cnt = defaultdict(int)
        cnt[v] = 1
        for u in order:
            if cnt[u]:
                for _, d, _ in outs[u]:
                    cnt[d] += cnt[u]
        for y, w in G.outputs:
            res[(y, x)] = cnt[w]
    return res


def nabla_graph(G: PortGraph) -> tuple:
    """Path counts as a tuple indexed by (output, input) in canonical order."""
    pc = path_counts(G)
    return tuple(pc[k] for k in sorted(pc, key=label_key))


def _topo(G: PortGraph) -> list:
    indeg = defaultdict(int)
    _, outs = _stars(G)
    for _, d, _ in G.edges:
        indeg[d] += 1
    stack = sorted(v for v in range(G.n) if indeg[v] == 0)
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for _, d, _ in outs[v]:
            indeg[d] -= 1
            if indeg[d] == 0:
                stack.append(d)
    return order


def layers(G: PortGraph) -> list[int]:
    """Longest-path distance from a source, per vertex."""
    ins, _ = _stars(G)
    layer = [0] * G.n
    for v in _topo(G):
        layer[v] = max((layer[s] + 1 for s, _, _ in ins[v]), default=0)
    return layer


def graph_to_json(G: PortGraph) -> dict:
    lay = layers(G)
    return {
        "vertices": [{"id": v, "layer": lay[v]} for v in range(G.n)],
        "edges": [{"src": s, "dst": d, "side": t} for s, d, t in G.edges],
        "in": [{"label": fincat._label_to_json(x), "vertex": v} for x, v in G.inputs],
        "out": [{"label": fincat._label_to_json(y), "vertex": v} for y, v in G.outputs],
    }


def graph_from_json(data) -> PortGraph:
    try:
        ids = [v["id"] for v in data["vertices"]]
        pos = {v: i for i, v in enumerate(ids)}
        edges = [(pos[e["src"]], pos[e["dst"]], e["side"]) for e in data["edges"]]
        inputs = {fincat._label_from_json(p["label"]): pos[p["vertex"]] for p in data["in"]}
        outputs = {fincat._label_from_json(p["label"]): pos[p["vertex"]] for p in data["out"]}
    except (KeyError, TypeError) as exc:
        raise InvalidGraph(f"malformed graph: {exc}") from exc
    return lr_graph(len(ids), edges, inputs, outputs)


# ---------------------------------------------------------------------------
# mutable working copy

class _Work:
    def __init__(self, V, E, I, O):
        self.V = set(V)
        self.E = list(E)
        self.I = dict(I)
        self.O = dict(O)
        self.next = max(self.V, default=-1) + 1

    @classmethod
    def of(cls, G: PortGraph) -> "_Work":
        return cls(range(G.n), G.edges, G.inputs, G.outputs)

    def new(self) -> int:
        v = self.next
        self.next += 1
        self.V.add(v)
        return v

    def drop(self, vertices):
        vertices = set(vertices)
        self.V -= vertices
        self.E = [e for e in self.E if e[0] not in vertices and e[1] not in vertices]

    def zero_reduce(self):
        outs, ins = defaultdict(list), defaultdict(list)
        for s, d, _ in self.E:
            outs[s].append(d)
            ins[d].append(s)

        def reach(starts, nbrs):
            seen = set(starts)
            stack = list(starts)
            while stack:
                v = stack.pop()
                for u in nbrs[v]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            return seen

        fwd = reach([v for v in self.I.values() if v in self.V], outs)
        bwd = reach([v for v in self.O.values() if v in self.V], ins)
        keep = fwd & bwd
        self.drop(self.V - keep)
        self.I = {x: v for x, v in self.I.items() if v in keep}
        self.O = {y: v for y, v in self.O.items() if v in keep}

    def finish(self, strict: bool = False):
        """Zero-reduce and renumber; None (or an error if strict) when the result is invalid."""
        self.zero_reduce()
        order = sorted(self.V)
        pos = {v: i for i, v in enumerate(order)}
        G = PortGraph.build(len(order), [(pos[s], pos[d], t) for s, d, t in self.E],
                            {x: pos[v] for x, v in self.I.items()}, {y: pos[v] for y, v in self.O.items()})
        bad = problems(G)
        if bad:
            if strict:
                raise InvalidGraph("; ".join(sorted(set(bad))))
            return None
        return G


def zero_reduce(G: PortGraph) -> PortGraph:
    W = _Work(range(G.n), G.edges, G.inputs, G.outputs)
    W.zero_reduce()
    order = sorted(W.V)
    pos = {v: i for i, v in enumerate(order)}
    return PortGraph.build(len(order), [(pos[s], pos[d], t) for s, d, t in W.E],
                           {x: pos[v] for x, v in W.I.items()}, {y: pos[v] for y, v in W.O.items()})


# ---------------------------------------------------------------------------
# reductions and inflations

@dataclass(frozen=True)
class Move:
    name: str
    detail: tuple
    graph: PortGraph = field(compare=False)

    def to_json(self) -> dict:
        return {"move": self.name, "detail": _jsonable(self.detail), "graph": graph_to_json(self.graph)}


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted((_jsonable(o) for o in obj), key=repr)
    return obj


def _port_vertices(G: PortGraph):
    return {v for _, v in G.inputs} | {v for _, v in G.outputs}


def lr_reductions(G: PortGraph) -> list[Move]:
    ins, outs = _stars(G)
    ports = _port_vertices(G)
    res = []
    for v in range(G.n):
        if v in ports or not ins[v] or not outs[v]:
            continue
        tags = {t for _, _, t in ins[v]} | {t for _, _, t in outs[v]}
        if len(tags) != 1:
            continue
        (t,) = tags
        W = _Work.of(G)
        W.drop([v])
        W.E += [(s, d, t) for s, _, _ in ins[v] for _, d, _ in outs[v]]
        H = W.finish()
        if H is not None:
            res.append(Move("lr-red", (v,), H))
    return res


def one_reductions(G: PortGraph) -> list[Move]:
    ins, outs = _stars(G)
    res = []
    seen = set()
    for e in G.edges:
        a, b, _ = e
        if (a, b) in seen or len(outs[a]) != 1 or len(ins[b]) != 1:
            continue
        seen.add((a, b))
        W = _Work.of(G)
        W.E.remove(e)
        W.E = [(a if s == b else s, d, t) for s, d, t in W.E]
        W.O = {y: (a if v == b else v) for y, v in W.O.items()}
        W.V.discard(b)
        H = W.finish()
        if H is not None:
            res.append(Move("1-red", (a, b), H))
    return res


def one_inflations(G: PortGraph) -> list[Move]:
    """Split a vertex v into v -> w; v keeps the in-star, w takes the out-star."""
    _, outs = _stars(G)
    res = []
    for v in range(G.n):
        for t in SIDES:
            W = _Work.of(G)
            w = W.new()
            W.E = [(w if s == v else s, d, tg) for s, d, tg in W.E] + [(v, w, t)]
            W.O = {y: (w if u == v else u) for y, u in W.O.items()}
            H = W.finish()
            if H is not None:
                res.append(Move("1-infl", (v, t), H))
    return res


def lr_inflations(G: PortGraph, max_fan: int = 3) -> list[Move]:
    """Insert a vertex x through sources A and targets B that are pairwise joined by t-edges."""
    res = []
    for t in SIDES:
        succ = defaultdict(set)
        for s, d, tg in G.edges:
            if tg == t:
                succ[s].add(d)
        srcs = sorted(succ)
        for k in range(1, max_fan + 1):
            for A in itertools.combinations(srcs, k):
                common = set.intersection(*(succ[a] for a in A))
                for m in range(1, max_fan + 1):
                    for B in itertools.combinations(sorted(common), m):
                        W = _Work.of(G)
                        for a in A:
                            for b in B:
                                W.E.remove((a, b, t))
                        x = W.new()
                        W.E += [(a, x, t) for a in A] + [(x, b, t) for b in B]
                        H = W.finish()
                        if H is not None:
                            res.append(Move("lr-infl", (t, A, B), H))
    return res


# ---------------------------------------------------------------------------
# the commutativity triangle
#
# Shapes, for a connected piece a from inputs X to outputs Y and fans
# d (one vertex to J vertices) and b (J vertices to one) of a single tag s:
#   "A":  a, then b∘d hanging below every output of a
#   "B":  b∘d above every input of a, then a
#   "C":  d at every input, J parallel copies of a, then b at every output
# The attachment vertices (what the rest of the graph sees) are the vertices
# xs feeding the piece and ws fed by the piece; they are the same in all
# three shapes, so any match can be rebuilt in the other two.

@dataclass
class _Match:
    shape: str
    J: int
    tag: str
    xs: tuple
    ws: tuple
    a: PortGraph
    remove: set


def _reach(G: PortGraph):
    _, outs = _stars(G)
    desc = {}
    for v in reversed(_topo(G)):
        s = {v}
        for _, d, _ in outs[v]:
            s |= desc[d]
        desc[v] = s
    anc = {v: {u for u in range(G.n) if v in desc[u]} for v in range(G.n)}
    return desc, anc


def _region(G, ins, outs, desc, anc, S_in, S_out):
    """Vertices of a convex piece from S_in to S_out, or None if no such piece exists."""
    if set(S_in) & set(S_out):
        return None
    down = set().union(*(desc[v] for v in S_in))
    up = set().union(*(anc[v] for v in S_out))
    R = down & up
    if not set(S_in) <= R or not set(S_out) <= R:
        return None
    sin, sout = set(S_in), set(S_out)
    for v in R:
        for s, _, _ in ins[v]:
            if (s in R) == (v in sin):
                return None
        for _, d, _ in outs[v]:
            if v in sout:
                if d in R:
                    return None
            elif d not in R:
                return None
    return R


def _connected(R, edges) -> list[set]:
    parent = {v: v for v in R}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s, d, _ in edges:
        parent[find(s)] = find(d)
    comps = defaultdict(set)
    for v in R:
        comps[find(v)].add(v)
    return sorted(comps.values(), key=min)


def _template(G, R, ins_list, outs_list) -> PortGraph:
    order = sorted(R)
    pos = {v: i for i, v in enumerate(order)}
    edges = [(pos[s], pos[d], t) for s, d, t in G.edges if s in R and d in R]
    return PortGraph.build(len(order), edges, {i: pos[v] for i, v in enumerate(ins_list)},
                           {k: pos[v] for k, v in enumerate(outs_list)})


def _tails(G, ins, outs, max_fan):
    """Vertices y followed by b∘d: {y: (J, tag, middles, w)}."""
    res = {}
    for y in range(G.n):
        out = outs[y]
        if not 1 <= len(out) <= max_fan or len({t for _, _, t in out}) != 1:
            continue
        tag = out[0][2]
        mids = [d for _, d, _ in out]
        if len(set(mids)) != len(mids):
            continue
        ws = set()
        ok = True
        for m in mids:
            if len(ins[m]) != 1 or len(outs[m]) != 1 or outs[m][0][2] != tag:
                ok = False
                break
            ws.add(outs[m][0][1])
        if not ok or len(ws) != 1:
            continue
        (w,) = ws
        if len(ins[w]) != len(mids):
            continue
        res[y] = (len(mids), tag, tuple(mids), w)
    return res


def _fan_sources(G, ins, outs, max_fan):
    res = {}
    for x in range(G.n):
        out = outs[x]
        if not 1 <= len(out) <= max_fan or len({t for _, _, t in out}) != 1:
            continue
        tg = [d for _, d, _ in out]
        if len(set(tg)) != len(tg) or any(len(ins[t]) != 1 for t in tg):
            continue
        res[x] = (len(tg), out[0][2], tuple(tg))
    return res


def _groups(cands):
    by = defaultdict(list)
    for v, info in cands.items():
        by[(info[0], info[1])].append(v)
    return by


def _subsets(items, max_size):
    items = sorted(items)
    for k in range(1, min(max_size, len(items)) + 1):
        yield from itertools.combinations(items, k)


def _convex(desc, xs, ws):
    return not any(desc[w] & set(xs) for w in ws)


def comm6_matches(G: PortGraph, max_fan: int = 3, max_ports: int = 3) -> list[_Match]:
    ins, outs = _stars(G)
    desc, anc = _reach(G)
    matches = []
    # shape A: tails below the outputs of a
    tails = _tails(G, ins, outs, max_fan)
    for (J, tag), ys in sorted(_groups(tails).items()):
        for Y in _subsets(ys, max_ports):
            cand = set().union(*(anc[y] for y in Y)) - set(Y)
            for X in _subsets(cand, max_ports):
                R = _region(G, ins, outs, desc, anc, X, Y)
                if R is None:
                    continue
                redges = [e for e in G.edges if e[0] in R and e[1] in R]
                if not redges or len(_connected(R, redges)) != 1:
                    continue
                ws = tuple(tails[y][3] for y in Y)
                if not _convex(desc, X, ws):
                    continue
                mids = set().union(*(tails[y][2] for y in Y))
                matches.append(_Match("A", J, tag, X, ws, _template(G, R, X, Y), (R - set(X)) | mids))
    # shape B: the mirror image of A
    rev = reverse(G)
    rins, routs = _stars(rev)
    heads = _tails(rev, rins, routs, max_fan)
    for (J, tag), xps in sorted(_groups(heads).items()):
        for Xp in _subsets(xps, max_ports):
            cand = set().union(*(desc[x] for x in Xp)) - set(Xp)
            for Y in _subsets(cand, max_ports):
                R = _region(G, ins, outs, desc, anc, Xp, Y)
                if R is None:
                    continue
                redges = [e for e in G.edges if e[0] in R and e[1] in R]
                if not redges or len(_connected(R, redges)) != 1:
                    continue
                xs = tuple(heads[x][3] for x in Xp)
                if not _convex(desc, xs, Y):
                    continue
                mids = set().union(*(heads[x][2] for x in Xp))
                matches.append(_Match("B", J, tag, xs, Y, _template(G, R, Xp, Y), (R - set(Y)) | mids))
    # shape C: J parallel copies between a fan-out and a fan-in
    srcs = _fan_sources(G, ins, outs, max_fan)
    sinks = {w: info for w, info in _fan_sources(rev, rins, routs, max_fan).items()}
    # a fan-in source must leave only through the fan edge
    sinks = {w: info for w, info in sinks.items() if all(len(outs[u]) == 1 for u in info[2])}
    sink_groups = _groups(sinks)
    for key, xl in sorted(_groups(srcs).items()):
        J = key[0]
        for X in _subsets(xl, max_ports):
            for Wt in _subsets(sink_groups.get(key, []), max_ports):
                S_in = [t for x in X for t in srcs[x][2]]
                S_out = [u for w in Wt for u in sinks[w][2]]
                R = _region(G, ins, outs, desc, anc, S_in, S_out)
                if R is None or not _convex(desc, X, Wt):
                    continue
                redges = [e for e in G.edges if e[0] in R and e[1] in R]
                comps = _connected(R, redges)
                if len(comps) != J or not redges:
                    continue
                temps = []
                for comp in comps:
                    ci = [next((t for t in srcs[x][2] if t in comp), None) for x in X]
                    co = [next((u for u in sinks[w][2] if u in comp), None) for w in Wt]
                    if None in ci or None in co:
                        break
                    temps.append(_template(G, comp, ci, co))
                else:
                    if len({t.canonical() for t in temps}) == 1:
                        matches.append(_Match("C", J, key[1], X, Wt, temps[0], set(R)))
    return matches


def _build(G: PortGraph, m: _Match, shape: str):
    W = _Work.of(G)
    W.drop(m.remove)
    a, s, J = m.a, m.tag, m.J
    ain, aout = dict(a.inputs), dict(a.outputs)

    def place(amap):
        for v in range(a.n):
            if v not in amap:
                amap[v] = W.new()
        W.E += [(amap[u], amap[v], t) for u, v, t in a.edges]
        return amap

    if shape == "A":
        amap = place({ain[i]: x for i, x in enumerate(m.xs)})
        for k, w in enumerate(m.ws):
            y = amap[aout[k]]
            for _ in range(J):
                mid = W.new()
                W.E += [(y, mid, s), (mid, w, s)]
    elif shape == "B":
        amap = {}
        for i, x in enumerate(m.xs):
            xp = W.new()
            amap[ain[i]] = xp
            for _ in range(J):
                mid = W.new()
                W.E += [(x, mid, s), (mid, xp, s)]
        amap.update({aout[k]: w for k, w in enumerate(m.ws)})
        place(amap)
    else:
        for _ in range(J):
            amap = {}
            for i, x in enumerate(m.xs):
                t = W.new()
                amap[ain[i]] = t
                W.E.append((x, t, s))
            for k, w in enumerate(m.ws):
                u = W.new()
                amap[aout[k]] = u
                W.E.append((u, w, s))
            place(amap)
    return W.finish()


def comm6_moves(G: PortGraph, max_fan: int = 3, max_ports: int = 3) -> list[Move]:
    res = []
    for m in comm6_matches(G, max_fan, max_ports):
        for shape in "ABC":
            if shape == m.shape:
                continue
            H = _build(G, m, shape)
            if H is not None:
                res.append(Move("comm6", (m.shape + shape, m.J, m.tag, tuple(m.xs), tuple(m.ws)), H))
    return res


# ---------------------------------------------------------------------------
# 1-commutativity: regrouping two-level fans

def _regroupings(groups):
    """Set partitions of all leaves whose blocks meet each old group at most once."""
    leaves = [(gi, v) for gi, g in enumerate(groups) for v in g]

    def rec(i, blocks):
        if i == len(leaves):
            yield [list(b) for b in blocks]
            return
        gi, v = leaves[i]
        for b in blocks:
            if all(g != gi for g, _ in b):
                b.append((gi, v))
                yield from rec(i + 1, blocks)
                b.pop()
        blocks.append([(gi, v)])
        yield from rec(i + 1, blocks)
        blocks.pop()

    for part in rec(0, []):
        yield [tuple(v for _, v in b) for b in part]


def _one_comm_left(G: PortGraph, name: str) -> list[Move]:
    ins, outs = _stars(G)
    ports = _port_vertices(G)
    res = []
    for t in range(G.n):
        into = ins[t]
        if not into or len({tg for _, _, tg in into}) != 1:
            continue
        s_a = into[0][2]
        cs = [s for s, _, _ in into]
        if len(set(cs)) != len(cs):
            continue
        groups, s_b, ok = [], None, True
        for c in cs:
            if c in ports or len(outs[c]) != 1 or not ins[c]:
                ok = False
                break
            tags = {tg for _, _, tg in ins[c]}
            leaves = [s for s, _, _ in ins[c]]
            if len(tags) != 1 or len(set(leaves)) != len(leaves) or (s_b is not None and tags != {s_b}):
                ok = False
                break
            s_b = tags.pop()
            if any(len(outs[v]) != 1 for v in leaves):
                ok = False
                break
            groups.append(sorted(leaves))
        if not ok:
            continue
        old = {frozenset(g) for g in groups}
        for blocks in _regroupings(groups):
            if {frozenset(b) for b in blocks} == old and s_a == s_b:
                continue
            W = _Work.of(G)
            W.drop(cs)
            for b in blocks:
                c = W.new()
                W.E += [(v, c, s_a) for v in b] + [(c, t, s_b)]
            H = W.finish()
            if H is not None:
                res.append(Move(name, (t, tuple(blocks)), H))
    return res


def one_comm_moves(G: PortGraph) -> list[Move]:
    res = _one_comm_left(G, "one-comm")
    for mv in _one_comm_left(reverse(G), "one-comm-t"):
        res.append(Move(mv.name, mv.detail, reverse(mv.graph)))
    return res


# ---------------------------------------------------------------------------
# neighbours, canonical forms and search

def neighbors(G: PortGraph, moves=MOVE_FAMILIES, max_fan: int = 3, max_ports: int = 3) -> list[Move]:
    """One-step rewrites of G, deduplicated up to isomorphism and excluding G itself."""
    moves = set(moves)
    unknown = moves - set(MOVE_FAMILIES)
    if unknown:
        raise ValueError(f"unknown move families {sorted(unknown)}")
    cands = []
    if "lr-red" in moves:
        cands += lr_reductions(G) + one_reductions(G)
    if "lr-infl" in moves:
        cands += lr_inflations(G, max_fan) + one_inflations(G)
    if "comm6" in moves:
        cands += comm6_moves(G, max_fan, max_ports)
    if "one-comm" in moves:
        cands += one_comm_moves(G)
    own = G.canonical()
    seen, out = {own}, []
    for mv in cands:
        key = mv.graph.canonical()
        if key not in seen:
            seen.add(key)
            out.append(mv)
    return out


def lr_canonical(G: PortGraph, rng: random.Random | None = None) -> PortGraph:
    """Reduce to the fixpoint of l/r-reduction and 1-reduction; canonical up to isomorphism.

    With ``rng`` the reduction applied at each step is chosen at random,
    which is how confluence is tested.
    """
    G = zero_reduce(G)
    while True:
        cands = lr_reductions(G) + one_reductions(G)
        if not cands:
            return G.canonical()
        G = (rng.choice(cands) if rng else cands[0]).graph


def is_comb(G: PortGraph) -> bool:
    """Two inputs whose chains meet at one vertex, followed by a chain to the single output."""
    if len(G.inputs) != 2 or len(G.outputs) != 1:
        return False
    ins, outs = _stars(G)
    if any(len(outs[v]) > 1 for v in range(G.n)):
        return False
    merges = [v for v in range(G.n) if len(ins[v]) == 2]
    if len(merges) != 1 or any(len(ins[v]) > 2 for v in range(G.n)):
        return False
    m = merges[0]
    if len({s for s, _, _ in ins[m]}) != 2:
        return False
    for _, v in G.inputs:
        while v != m:
            if len(outs[v]) != 1:
                return False
            v = outs[v][0][1]
    return set(nabla_graph(G)) == {1}


def merge_tag(G: PortGraph):
    """The tag on the edges entering the branch vertex of a comb (None if G is not a comb)."""
    if not is_comb(G):
        return None
    ins, _ = _stars(G)
    (m,) = [v for v in range(G.n) if len(ins[v]) == 2]
    return ins[m][0][2]


@dataclass
class SearchResult:
    status: str              # "path" | "exhausted" | "bound-hit"
    path: list               # list of Move from the start to the goal
    visited: list            # canonical graphs, in discovery order
    pruned: int = 0          # neighbours discarded by the size bound

    @property
    def visited_count(self) -> int:
        return len(self.visited)

    def to_json(self) -> dict:
        return {"status": self.status, "path": [m.to_json() for m in self.path],
                "visited_count": self.visited_count, "pruned_by_size": self.pruned}


def equiv_search(G: PortGraph, H: PortGraph, moves=CORE_MOVES, size_bound: int = 8,
                 step_bound: int | None = None, max_fan: int = 3, max_ports: int = 3,
                 threads: int | None = None) -> SearchResult:
    """Breadth-first search for a chain of moves from G to H among graphs with <= size_bound vertices.

    ``exhausted`` means every graph reachable from G inside the size bound
    was visited and none is isomorphic to H; it certifies non-reachability
    only within that bound.
    """
    if sorted(x for x, _ in G.inputs) != sorted(x for x, _ in H.inputs) or \
            sorted(y for y, _ in G.outputs) != sorted(y for y, _ in H.outputs):
        raise ValueError("graphs have different port sets")
    start, goal = G.canonical(), H.canonical()
    parent = {start: None}
    visited = [start]
    if start == goal:
        return SearchResult("path", [], visited)
    frontier, depth, pruned = [start], 0, 0
    while frontier:
        if step_bound is not None and depth >= step_bound:
            return SearchResult("bound-hit", [], visited, pruned)
        expanded = ordered_map(lambda g: neighbors(g, moves, max_fan, max_ports), frontier, threads)
        nxt = []
        for g, mvs in zip(frontier, expanded):
            for mv in mvs:
                if mv.graph.n > size_bound:
                    pruned += 1
                    continue
                key = mv.graph.canonical()
                if key in parent:
                    continue
                parent[key] = (g, mv)
                visited.append(key)
                nxt.append(key)
                if key == goal:
                    path = []
                    cur = key
                    while parent[cur] is not None:
                        prev, m = parent[cur]
                        path.append(m)
                        cur = prev
                    return SearchResult("path", path[::-1], visited, pruned)
        frontier = nxt
        depth += 1
    return SearchResult("exhausted", [], visited, pruned)


def check_path(G: PortGraph, H: PortGraph, path, moves=MOVE_FAMILIES, max_fan: int = 3,
               max_ports: int = 3) -> bool:
    """Replay a path: every step must be a neighbour of the previous graph."""
    cur = G.canonical()
    for mv in path:
        keys = {m.graph.canonical() for m in neighbors(cur, moves, max_fan, max_ports)}
        if mv.graph.canonical() not in keys:
            return False
        cur = mv.graph.canonical()
    return cur == H.canonical()


# ---------------------------------------------------------------------------
# oriented trees

ORIENTED_GENERATORS = {0: FinSet.range(3), 1: FinSet.range(3)}


def oriented_delta(eps: int, X: FinSet) -> TreeElement:
    """The corolla over X with root orientation ``eps``."""
    return generator(eps, X)


def _tree_struct(T: LabelledTree):
    children = defaultdict(list)
    for p in T.nodes:
        if p:
            children[p[:-1]].append(p)
    return children, T.gen_map


def _rebuild(root, children, eps, leaf_name) -> tuple[LabelledTree, dict]:
    """Turn an explicit tree into a LabelledTree with integer labels; returns leaf renaming."""
    nodes, gens, rename = [], {}, {}

    def walk(v, path):
        nodes.append(path)
        kids = sorted(children.get(v, []), key=label_key)
        if not kids:
            rename[leaf_name(v)] = path
            return
        gens[path] = eps[v]
        for i, c in enumerate(kids):
            walk(c, path + (i,))

    if root is not None:
        walk(root, ROOT)
    return LabelledTree.make(nodes, gens), rename


def reduce_oriented_tree(T: LabelledTree, one_red: bool = True, merge: bool = True,
                         rng: random.Random | None = None):
    """Apply 1-reductions and ◁-reductions until none applies.

    Returns the reduced tree and a map old-leaf-path -> new-leaf-path.
    """
    if T.is_empty:
        return T, {}
    children, eps = _tree_struct(T)
    children = {k: list(v) for k, v in children.items()}
    eps = dict(eps)
    parent = {c: p for p, cs in children.items() for c in cs}
    root = ROOT
    while True:
        cands = []
        for v in sorted(set(parent) | {root}, key=label_key):
            kids = children.get(v, [])
            if one_red and len(kids) == 1:
                cands.append(("1", v))
            if merge and kids and v != root and eps[v] == eps[parent[v]]:
                cands.append(("m", v))
        if not cands:
            break
        kind, v = rng.choice(cands) if rng else cands[0]
        kids = children.pop(v, [])
        eps.pop(v, None)
        if v == root:
            (root,) = kids
            parent.pop(root)
            continue
        p = parent.pop(v)
        children[p] = [c for c in children[p] if c != v] + kids
        for c in kids:
            parent[c] = p
    new, rename = _rebuild(root, children, eps, lambda v: v)
    return new, rename


def upsilon_canonical(F: TreeElement, rng: random.Random | None = None) -> TreeElement:
    """1-reduce and ◁-reduce every tree of F, carrying the boundary bijection along."""
    F1, r1 = reduce_oriented_tree(F.F1, rng=rng)
    bar, rb = {}, {}
    for x, T in F.Fbar:
        bar[x], rb[x] = reduce_oriented_tree(T, rng=rng)
    sigma = {r1[b]: (x, rb[x][c]) for b, (x, c) in F.sigma}
    return TreeElement.make(F.degree, F1, bar, sigma)


def upsilon_key(F: TreeElement):
    """Canonical key of the isomorphism class of the data (trees, orientations, bijection)."""
    vid = {}
    edges, outputs = [], {}

    def add(tag, T):
        for p in sorted(T.nodes, key=label_key):
            vid[(tag, p)] = len(vid)
        gm = T.gen_map
        for p in T.nodes:
            if p:
                edges.append((vid[(tag, p)], vid[(tag, p[:-1])], (tag[0], gm[p[:-1]])))
        if not T.is_empty:
            outputs[tag] = vid[(tag, ROOT)]

    add(("top",), F.F1)
    for x, T in F.Fbar:
        add(("bar", x), T)
    for b, (x, c) in F.sigma:
        edges.append((vid[(("top",), b)], vid[(("bar", x), c)], ("s", 0)))
    outs = {(k[0],) + tuple(k[1:]): v for k, v in outputs.items()}
    return PortGraph.build(len(vid), edges, {}, outs).canonical()


def upsilon_equal(F: TreeElement, G: TreeElement) -> bool:
    return F.degree == G.degree and upsilon_key(upsilon_canonical(F)) == upsilon_key(upsilon_canonical(G))


def upsilon_mult(G: TreeElement, fam: dict, f: SetMap) -> TreeElement:
    return tree_mult(G, fam, f)


def upsilon_contract(G: TreeElement, fam: dict, f: SetMap) -> TreeElement:
    return tree_contract(G, fam, f)


def nabla(F: TreeElement):
    """The element (number of leaves of Fbar[x])_x of G(N)."""
    GN = get_instance("GN")
    return GN.vector(F.degree, {x: len(T.boundary) if not T.is_empty else 0 for x, T in F.Fbar})


def nabla_preimage(X: FinSet, counts, eps_top: int = 0, eps_bar: int = 1) -> TreeElement:
    """An oriented-tree element whose boundary counts are ``counts`` (a constructive section)."""
    counts = dict(zip(X, counts)) if not isinstance(counts, dict) else dict(counts)
    if any(int(counts.get(x, 0)) < 0 for x in X):
        raise ValueError("counts must be natural numbers")
    leaves = [(x, i) for x in X for i in range(int(counts.get(x, 0)))]
    if not leaves:
        return zero_element(X)
    F1 = LabelledTree.corolla(eps_top, leaves) if len(leaves) > 1 else LabelledTree.unit()
    bar, sigma = {}, {}
    for x in X:
        n = int(counts.get(x, 0))
        if n == 0:
            bar[x] = LabelledTree.empty()
        elif n == 1:
            bar[x] = LabelledTree.unit()
        else:
            bar[x] = LabelledTree.corolla(eps_bar, range(n))
    for (x, i) in leaves:
        b = (((x, i),) if len(leaves) > 1 else ROOT)
        c = ((i,) if int(counts[x]) > 1 else ROOT)
        sigma[b] = (x, c)
    return TreeElement.make(X, F1, bar, sigma)


def random_oriented(X: FinSet, rng: random.Random, max_degree: int = 3) -> TreeElement:
    return random_tree_element(X, ORIENTED_GENERATORS, rng, max_degree)


# ---------------------------------------------------------------------------
# presentations: soundness of the defining relations

def _rel_genring(A, pairs=None) -> list[tuple[str, bool, dict]]:
    """Check the relations on the image of δ = (1,1) in the vector instance A."""
    from .genring import FiberFamily
    rig = A.rig
    one = rig.one
    point, two, three = FinSet.range(1), FinSet.range(2), FinSet.range(3)
    delta = A.ones(two)
    to_point = SetMap(two, point, {1: 1, 2: 1})
    ident = SetMap.identity(two)
    out = []

    def scalars(b1, b2):
        # δ ◁ (b_i): multiply δ by the family of scalars b_i over the identity map
        return A.mult(delta, FiberFamily.make(ident, {1: A.vector(FinSet([1]), [b1]),
                                                      2: A.vector(FinSet([2]), [b2])}))

    # Zero: δ ◁ 1_1, where only the first point has a (unit) fibre
    f = SetMap(point, two, {1: 1})
    lhs = A.mult(delta, FiberFamily.make(f, {1: A.ones(FinSet([1])), 2: A.zero(FinSet())}))
    out.append(("zero", A.eq(lhs, A.ones(point)), {"lhs": A.coords(lhs)}))
    # Ass: substituting δ at the first or at the second point
    f1 = SetMap(three, two, {1: 1, 2: 1, 3: 2})
    f2 = SetMap(three, two, {1: 1, 2: 2, 3: 2})
    l1 = A.mult(delta, FiberFamily.make(f1, {1: A.ones(FinSet([1, 2])), 2: A.ones(FinSet([3]))}))
    l2 = A.mult(delta, FiberFamily.make(f2, {1: A.ones(FinSet([1])), 2: A.ones(FinSet([2, 3]))}))
    out.append(("ass", A.eq(l1, l2), {"lhs": A.coords(l1), "rhs": A.coords(l2)}))
    # Comm: δ transported along the swap
    swp = fincat.PartialBijection(two, two, [(1, 2), (2, 1)])
    out.append(("comm", A.eq(A.fmap(delta, swp), delta), {}))
    if rig.neg is not None:
        lhs = A.contract(scalars(rig.neg(one), one), FiberFamily.make(to_point, {1: delta}))
        out.append(("cancellation", A.eq(lhs, A.zero(point)), {"lhs": A.coords(lhs)}))
    for b1, b2 in (pairs or []):
        lhs = A.contract(scalars(b1, b2), FiberFamily.make(to_point, {1: delta}))
        rhs = A.vector(point, [rig.add(rig.coerce(b1), rig.coerce(b2))])
        out.append((f"pair({b1},{b2})", A.eq(lhs, rhs), {"lhs": A.coords(lhs)}))
    return out


def _rel_fring(rig, pairs=None) -> list[tuple[str, bool, dict]]:
    """Matrix form, with σ = (1 1) from [2] to [1] and its transpose."""
    from .rigring import RigMatrix, mat_compose
    one, zero = rig.one, rig.zero
    point, two, three = FinSet.range(1), FinSet.range(2), FinSet.range(3)

    def mat(rows, r, c):
        return RigMatrix.from_rows(rows, rig, r, c)

    sig = mat([[one, one]], point, two)
    sigt = mat([[one], [one]], two, point)
    out = [("zero", mat_compose(sig, mat([[one], [zero]], two, point)) == mat([[one]], point, point), {})]
    left = mat_compose(sig, mat([[one, one, zero], [zero, zero, one]], two, three))
    right = mat_compose(sig, mat([[one, zero, zero], [zero, one, one]], two, three))
    out.append(("ass", left == right, {}))
    out.append(("comm", mat_compose(sig, mat([[zero, one], [one, zero]], two, two)) == sig, {}))

    def sandwich(b1, b2):
        return mat_compose(mat_compose(sig, mat([[b1, zero], [zero, b2]], two, two)), sigt)

    if rig.neg is not None:
        out.append(("cancellation", sandwich(rig.neg(one), one) == mat([[zero]], point, point), {}))
    for b1, b2 in (pairs or []):
        b1, b2 = rig.coerce(b1), rig.coerce(b2)
        out.append((f"pair({b1},{b2})", sandwich(b1, b2) == mat([[rig.add(b1, b2)]], point, point), {}))
    return out


def fring_presentation_check(target: str, pairs="all") -> dict:
    """Check that the defining relations of the presentation hold in ``target``.

    ``target`` is a vector instance name (``GN``, ``GZ``, ``GZ/n``, ``Gbool``)
    or the same name prefixed with ``F:`` for the matrix F-ring over that rig.
    With ``pairs="all"`` every pair (b1, b2) of the instance's value set is
    checked (all of the rig when it is finite).
    """
    matrix = target.startswith("F:")
    A = get_instance(target[2:] if matrix else target)
    if pairs == "all":
        pairs = list(itertools.product(A.values, repeat=2))
    rows = _rel_fring(A.rig, pairs) if matrix else _rel_genring(A, pairs)
    failed = [(n, d) for n, ok, d in rows if not ok]
    return {"target": target, "checked": [n for n, _, _ in rows], "passed": not failed,
            "counterexample": ({"relation": failed[0][0], **failed[0][1]} if failed else None)}

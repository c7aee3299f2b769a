"""Structural decomposition of a 2-edge cover: components, blocks, bridges,
classification tags, and the contracted component graph with its segments."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (MultiGraph, biconnected_components, bridges_and_blocks,
                    connected_components)
from .params import StructuredParams

# classification tags
C4, C5, C6, C7, C8 = "C4", "C5", "C6", "C7", "C8"
LARGE2EC = "Large2EC"
HUGE = "Huge"
COMPLEX = "Complex"
RICH = "RichVertex"
OTHER = "Other"

CYCLE_TAGS = {C4: 4, C5: 5, C6: 6, C7: 7, C8: 8}


@dataclass
class Block:
    vertices: set[int]
    edges: set[int]

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


@dataclass
class Component:
    cid: int
    vertices: set[int]
    edges: set[int]
    bridges: set[int]
    blocks: list[Block]
    tag: str
    is_2ec: bool
    is_rich: bool = False
    cycle_order: Optional[list[int]] = None   # for cycle components
    huge: bool = False
    large: bool = False

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


def _cycle_order(vertices: set[int], edges: list[tuple[int, int]]) -> Optional[list[int]]:
    """Vertex order if the edge list is a single simple cycle on vertices."""
    if len(edges) != len(vertices) or len(vertices) < 3:
        return None
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        if u == v or u not in adj or v not in adj:
            return None
        adj[u].append(v)
        adj[v].append(u)
    if any(len(a) != 2 for a in adj.values()):
        return None
    start = min(vertices)
    order = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = a if a != prev else b
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > len(vertices):
            return None
    if len(order) != len(vertices):
        return None
    if len(order) > 2 and order[1] > order[-1]:
        order = [order[0]] + order[1:][::-1]
    return order


class CoverDecomposition:
    """Components of an edge subset H of the host graph, with per-component
    blocks, bridges, and classification."""

    def __init__(self, g: MultiGraph, h: set[int], params: StructuredParams,
                 rich_vertices: Optional[set[int]] = None):
        self.g = g
        self.h = set(h)
        self.params = params
        self.rich_vertices = set(rich_vertices or ())
        self._build()

    def _build(self) -> None:
        g, h = self.g, self.h
        comps = connected_components(g, h)
        covered: dict[int, int] = {}
        edge_comp: dict[int, list[int]] = {}
        comp_sets = []
        for comp in comps:
            comp_sets.append(set(comp))
        self.comp_of_vertex: dict[int, int] = {}
        self.components: list[Component] = []
        for vs in comp_sets:
            cid = len(self.components)
            edges = {eid for eid in h
                     if g.edges[eid][0] in vs and g.edges[eid][1] in vs}
            dec = bridges_and_blocks(g, edges)
            blocks = [Block(b["vertices"], b["edges"]) for b in dec.blocks]
            blocks.sort(key=lambda b: min(b.vertices))
            is_rich = len(vs) == 1 and not edges and min(vs) in self.rich_vertices
            is_2ec = not dec.bridges and len(blocks) <= 1 and not is_rich and edges
            tag, cyc = self._classify(vs, edges, dec.bridges, is_rich, bool(is_2ec))
            c = Component(cid=cid, vertices=vs, edges=edges,
                          bridges=set(dec.bridges), blocks=blocks, tag=tag,
                          is_2ec=bool(is_2ec), is_rich=is_rich, cycle_order=cyc,
                          huge=len(vs) >= self.params.huge_threshold,
                          large=bool(is_2ec) and len(vs) >= self.params.large_threshold)
            self.components.append(c)
            for v in vs:
                self.comp_of_vertex[v] = cid

    def _classify(self, vs: set[int], edges: set[int], bridges: set[int],
                  is_rich: bool, is_2ec: bool):
        g = self.g
        if is_rich:
            return RICH, None
        if bridges:
            return COMPLEX, None
        if not edges:
            return OTHER, None
        pairs = [g.edges[e] for e in sorted(edges)]
        cyc = _cycle_order(vs, pairs)
        if cyc is not None and 4 <= len(cyc) <= 8:
            return {4: C4, 5: C5, 6: C6, 7: C7, 8: C8}[len(cyc)], cyc
        if is_2ec and len(edges) >= 9:
            return LARGE2EC, cyc
        if is_2ec:
            return OTHER, cyc     # 2EC but neither C4..C8 nor >= 9 edges
        return OTHER, None

    # -- convenience -------------------------------------------------------

    @property
    def is_bridgeless(self) -> bool:
        return all(not c.bridges for c in self.components)

    @property
    def huge_components(self) -> list[Component]:
        return [c for c in self.components if c.huge]

    @property
    def complex_components(self) -> list[Component]:
        return [c for c in self.components if c.tag == COMPLEX]

    def vertex_degrees(self) -> list[int]:
        deg = [0] * self.g.n
        for eid in self.h:
            u, v = self.g.edges[eid]
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_two_edge_cover(self, allow_rich: bool = True) -> bool:
        deg = self.vertex_degrees()
        for v in range(self.g.n):
            if deg[v] >= 2:
                continue
            if allow_rich and v in self.rich_vertices and deg[v] == 0:
                continue
            return False
        return True

    def block_tree(self, comp: Component) -> "BlockTree":
        return BlockTree(self.g, comp)

    def c4_edge_count(self) -> int:
        return sum(len(c.edges) for c in self.components if c.tag == C4)


class BlockTree:
    """Tree T_C of a complex component: contract each block to a node; the
    remaining vertices (incident only to bridges) are lonely nodes."""

    def __init__(self, g: MultiGraph, comp: Component):
        self.g = g
        self.comp = comp
        self.nodes: list[dict] = []        # {"kind": "block"|"lonely", ...}
        node_of_vertex: dict[int, int] = {}
        for bi, blk in enumerate(comp.blocks):
            idx = len(self.nodes)
            self.nodes.append({"kind": "block", "block": blk, "vertices": blk.vertices})
            for v in blk.vertices:
                node_of_vertex[v] = idx
        for v in sorted(comp.vertices):
            if v not in node_of_vertex:
                idx = len(self.nodes)
                self.nodes.append({"kind": "lonely", "vertex": v, "vertices": {v}})
                node_of_vertex[v] = idx
        self.node_of_vertex = node_of_vertex
        self.adj: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
        for eid in sorted(comp.bridges):
            u, v = g.edges[eid]
            a, b = node_of_vertex[u], node_of_vertex[v]
            self.adj[a].append((b, eid))
            self.adj[b].append((a, eid))

    def is_block(self, node: int) -> bool:
        return self.nodes[node]["kind"] == "block"

    def leaves(self) -> list[int]:
        return [i for i in range(len(self.nodes)) if len(self.adj[i]) == 1]

    def pendant_blocks(self) -> list[int]:
        return [i for i in self.leaves() if self.is_block(i)]

    def tree_path(self, a: int, b: int) -> tuple[list[int], list[int]]:
        """(node path, bridge edge-id path) between tree nodes a and b."""
        prev = {a: (None, None)}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y, eid in self.adj[x]:
                if y not in prev:
                    prev[y] = (x, eid)
                    stack.append(y)
        if b not in prev:
            raise ValueError("nodes in different trees")
        nodes = [b]
        eids = []
        cur = b
        while prev[cur][0] is not None:
            eids.append(prev[cur][1])
            cur = prev[cur][0]
            nodes.append(cur)
        return nodes[::-1], eids[::-1]

    def longest_path(self) -> list[int]:
        """Node sequence of a longest path (two BFS sweeps), deterministic."""
        if len(self.nodes) == 1:
            return [0]

        def far(s):
            dist = {s: 0}
            order = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y, _ in self.adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        order.append(y)
                        stack.append(y)
            dmax = max(dist.values())
            cands = sorted(v for v, d in dist.items() if d == dmax)
            return cands[0]

        a = far(0)
        b = far(a)
        nodes, _ = self.tree_path(a, b)
        return nodes


class ComponentGraphView:
    """Contraction of the host graph by the cover's components, without
    self-loops; segments are its biconnected components."""

    def __init__(self, g: MultiGraph, dec: CoverDecomposition):
        self.g = g
        self.dec = dec
        ncomp = len(dec.components)
        self.n_nodes = ncomp
        self.node_edges: list[tuple[int, int, int]] = []  # (node_u, node_v, g_eid)
        for eid, (u, v) in enumerate(g.edges):
            cu, cv = dec.comp_of_vertex[u], dec.comp_of_vertex[v]
            if cu == cv:
                continue
            if eid in dec.h:
                continue
            a, b = min(cu, cv), max(cu, cv)
            self.node_edges.append((a, b, eid))
        mg = MultiGraph(ncomp, [(a, b) for a, b, _ in self.node_edges])
        self.mg = mg
        segs = biconnected_components(mg)
        self.segments: list[set[int]] = sorted(segs, key=lambda s: sorted(s))
        seg_count = [0] * ncomp
        for s in self.segments:
            for node in s:
                seg_count[node] += 1
        self.cut_nodes = {i for i in range(ncomp) if seg_count[i] > 1}

    def node_of_vertex(self, v: int) -> int:
        return self.dec.comp_of_vertex[v]

    def edges_between(self, a: int, b: int) -> list[int]:
        """Host edge ids running between components a and b."""
        if a > b:
            a, b = b, a
        return sorted(eid for (x, y, eid) in self.node_edges if (x, y) == (a, b))

    def incident_edges(self, node: int) -> list[int]:
        return sorted(eid for (x, y, eid) in self.node_edges if node in (x, y))

    def neighbors(self, node: int) -> list[int]:
        out = set()
        for (x, y, _) in self.node_edges:
            if x == node:
                out.add(y)
            elif y == node:
                out.add(x)
        return sorted(out)

    def segments_of(self, node: int) -> list[set[int]]:
        return [s for s in self.segments if node in s]

    def segment_vertices(self, seg: set[int]) -> set[int]:
        verts: set[int] = set()
        for node in seg:
            verts |= self.dec.components[node].vertices
        return verts


def instantiate_node_cycle(view: ComponentGraphView, node_cycle: list[int],
                           cap: int = 48):
    """Host-edge tuples realizing a node cycle (bounded enumeration)."""
    import itertools as _it
    hops = []
    k = len(node_cycle)
    for i in range(k):
        a, b = node_cycle[i], node_cycle[(i + 1) % k]
        ids = view.edges_between(a, b)
        if not ids:
            return
        hops.append(ids[:4])
    count = 0
    for combo in _it.product(*hops):
        if len(set(combo)) != len(combo):
            continue
        yield combo
        count += 1
        if count >= cap:
            return


def segment_cycles_through(view: ComponentGraphView, seg: set[int],
                           node: int, max_len: int = 6) -> list[list[int]]:
    """Simple node cycles inside ``seg`` through ``node``; 2-node 'cycles'
    stand for parallel host edges."""
    nodes = sorted(seg)
    adj: dict[int, set[int]] = {x: set() for x in nodes}
    parallel_pairs: dict[tuple[int, int], list[int]] = {}
    for a, b, eid in view.node_edges:
        if a in seg and b in seg:
            adj[a].add(b)
            adj[b].add(a)
            parallel_pairs.setdefault((a, b), []).append(eid)
    out: list[list[int]] = []
    for (a, b), ids in sorted(parallel_pairs.items()):
        if node in (a, b) and len(ids) >= 2:
            out.append([a, b])

    def dfs(path: list[int], seen: set[int]):
        cur = path[-1]
        for nxt in sorted(adj[cur]):
            if nxt == node and len(path) >= 3:
                out.append(list(path))
            elif nxt not in seen and len(path) < max_len:
                dfs(path + [nxt], seen | {nxt})

    dfs([node], {node})
    dedup = []
    seen_keys = set()
    for cyc in out:
        key = (frozenset(cyc), len(cyc))
        if key in seen_keys:
            continue
        seen_keys.add(key)
        dedup.append(cyc)
    dedup.sort(key=lambda c: (len(c), c))
    return dedup

"""Priority-ordered scan for the structures a reduced instance must not
contain, reported as cut descriptors; empty means the graph is structured
except possibly for contractible subgraphs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .graph import MultiGraph
from .params import StructuredParams
from .preprocess import (_components_without, _grouping, find_cut_vertex,
                         find_irrelevant_edge, find_large_3vc, find_large_ck,
                         find_large_4vc, find_loop_or_parallel,
                         find_non_isolating_2vc)


@dataclass
class CutDescriptor:
    kind: str                      # Vertex1 | LoopOrParallel | IrrelevantEdge |
                                   # Vertex2 | Vertex3 | CycleCut | Vertex4
    vertices: tuple[int, ...] = ()
    sides: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    large: bool = False
    cycle_order: Optional[tuple[int, ...]] = None
    edge: Optional[int] = None
    condition: Optional[int] = None


def enumerate_cuts(g: MultiGraph, params: StructuredParams,
                   oracle_limit: int = 14) -> list[CutDescriptor]:
    """First violating structure in the reduction's checking order, or []."""
    v = find_cut_vertex(g)
    if v is not None:
        comps = _components_without(g, {v})
        v1 = tuple(comps[0])
        v2 = tuple(sorted(x for c in comps[1:] for x in c))
        return [CutDescriptor(kind="Vertex1", vertices=(v,), sides=(v1, v2))]
    e = find_loop_or_parallel(g)
    if e is not None:
        return [CutDescriptor(kind="LoopOrParallel", edge=e,
                              vertices=tuple(sorted(set(g.edges[e]))))]
    e = find_irrelevant_edge(g)
    if e is not None:
        return [CutDescriptor(kind="IrrelevantEdge", edge=e,
                              vertices=tuple(sorted(g.edges[e])))]
    cut2 = find_non_isolating_2vc(g)
    if cut2 is not None:
        grouping = _grouping(g, set(cut2), 1)
        sides = None
        if grouping:
            sides = (tuple(sorted(grouping[0])), tuple(sorted(grouping[1])))
        return [CutDescriptor(kind="Vertex2", vertices=cut2, sides=sides)]
    cut3 = find_large_3vc(g, params)
    if cut3 is not None:
        trip, v1, v2 = cut3
        return [CutDescriptor(kind="Vertex3", vertices=trip, large=True,
                              sides=(tuple(sorted(v1)), tuple(sorted(v2))))]
    ck = find_large_ck(g, params)
    if ck is not None:
        cyc, v1, v2 = ck
        return [CutDescriptor(kind="CycleCut", vertices=tuple(sorted(cyc)),
                              cycle_order=tuple(cyc), large=True,
                              sides=(tuple(sorted(v1)), tuple(sorted(v2))))]
    c4v = find_large_4vc(g, params, oracle_limit)
    if c4v is not None:
        return [CutDescriptor(kind="Vertex4", vertices=c4v["cut"], large=True,
                              condition=c4v["condition"],
                              sides=(tuple(sorted(c4v["v1"])),
                                     tuple(sorted(c4v["v2"]))))]
    return []


def exhaustive_structured_check(g: MultiGraph, params: StructuredParams) -> bool:
    """Independent certificate used in tests: no multi-edges, no vertex cut
    of size <= 4 that the scan would flag, tested over every vertex subset."""
    if find_loop_or_parallel(g) is not None:
        return False
    for size in (1, 2, 3, 4):
        for cut in itertools.combinations(range(g.n), size):
            comps = _components_without(g, set(cut))
            if len(comps) < 2:
                continue
            if size == 1:
                return False
            if size == 2:
                u, v = cut
                if any(g.edges[e] == (min(u, v), max(u, v))
                       for e in range(g.m)):
                    return False        # irrelevant edge
                if not (len(comps) == 2 and min(len(c) for c in comps) == 1):
                    return False        # non-isolating 2-vertex cut
            if size == 3:
                if _grouping(g, set(cut), params.three_cut_side) is not None:
                    return False
            if size == 4:
                # cycle cuts on 4 vertices and condition-1 large 4-cuts
                sub = [e for e in range(g.m)
                       if set(g.edges[e]) <= set(cut) and
                       g.edges[e][0] != g.edges[e][1]]
                deg = {c: 0 for c in cut}
                for e in sub:
                    u, v = g.edges[e]
                    deg[u] += 1
                    deg[v] += 1
                if len(sub) >= 4 and all(d >= 2 for d in deg.values()):
                    if _grouping(g, set(cut), params.ck_side(4)) is not None:
                        return False
                if _grouping(g, set(cut), params.four_cut_side_2) is not None:
                    return False
    return True

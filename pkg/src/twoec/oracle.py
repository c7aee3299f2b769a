"""Exact exponential-time solvers used as ground truth and in the
preprocessing base cases."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .graph import (MultiGraph, connected_components, find_bridges,
                    is_two_edge_connected)


class NotTwoEdgeConnected(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Infeasible(ValueError):
    pass


DEFAULT_LIMIT = 14
MAX_FREE_EDGES = 26


def _simplify(g: MultiGraph) -> list[int]:
    """Edge ids of a simple skeleton: self-loops dropped, one (lowest-id)
    copy per parallel class."""
    seen: set[tuple[int, int]] = set()
    keep: list[int] = []
    for eid, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        if (u, v) in seen:
            continue
        seen.add((u, v))
        keep.append(eid)
    return keep


def _forced_edges(g: MultiGraph, pool: list[int]) -> set[int]:
    """Edges incident to a degree-2 vertex (w.r.t. the pool) are in every
    solution that needs degree >= 2 everywhere."""
    deg = [0] * g.n
    for eid in pool:
        u, v = g.edges[eid]
        deg[u] += 1
        deg[v] += 1
    forced: set[int] = set()
    for eid in pool:
        u, v = g.edges[eid]
        if deg[u] <= 2 or deg[v] <= 2:
            forced.add(eid)
    return forced


def _two_ec_on(g: MultiGraph, eids: Iterable[int]) -> bool:
    eids = list(eids)
    deg = [0] * g.n
    for eid in eids:
        u, v = g.edges[eid]
        deg[u] += 1
        deg[v] += 1
    if any(d < 2 for d in deg) and g.n > 1:
        return False
    comps = connected_components(g, eids)
    if len(comps) != 1:
        return False
    return not find_bridges(g, eids)


def exact_min_2ecss(g: MultiGraph, limit: int = DEFAULT_LIMIT,
                    node_budget: int = 4_000_000) -> set[int]:
    """Minimum-cardinality 2EC spanning subgraph by branch and bound.

    Edges incident to degree-2 vertices are forced up front, so sparse
    instances well beyond ``limit`` vertices still solve quickly; the hard
    cap is the number of free (unforced) edges.
    """
    if not is_two_edge_connected(g):
        raise NotTwoEdgeConnected(f"{g} is not 2-edge-connected")
    if g.n == 1:
        return set()
    if g.n == 2:
        ids = [eid for eid, (u, v) in enumerate(g.edges) if u != v]
        if len(ids) < 2:
            raise NotTwoEdgeConnected("two vertices need two parallel edges")
        return set(ids[:2])

    pool = _simplify(g)
    forced = _forced_edges(g, pool)
    free = [e for e in pool if e not in forced]
    if g.n > limit and len(free) > MAX_FREE_EDGES:
        raise TooLarge(f"n={g.n} with {len(free)} free edges exceeds the oracle cap")

    adj_count = [0] * g.n

    best: Optional[set[int]] = None
    best_size = len(pool) + 1
    if _two_ec_on(g, pool):
        best = set(pool)
        best_size = len(pool)

    base = sorted(forced)
    nodes = 0

    def lower_bound(deg: list[int]) -> int:
        need = sum(max(0, 2 - d) for d in deg)
        return (need + 1) // 2

    def rec(i: int, chosen: list[int], deg: list[int]) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if nodes > node_budget:
            raise TooLarge("oracle search budget exhausted")
        size = len(chosen)
        if size + lower_bound(deg) >= best_size:
            return
        if i == len(free):
            if all(d >= 2 for d in deg) and _two_ec_on(g, chosen):
                best = set(chosen)
                best_size = size
            return
        remaining = free[i:]
        # feasibility: remaining edges must be able to lift all deficits
        deficit = [max(0, 2 - d) for d in deg]
        if sum(deficit) > 0:
            gain = [0] * g.n
            for eid in remaining:
                u, v = g.edges[eid]
                gain[u] += 1
                gain[v] += 1
            if any(gain[v] < deficit[v] for v in range(g.n)):
                return
        eid = free[i]
        u, v = g.edges[eid]
        # include first: with ids ascending this explores lexicographically
        deg[u] += 1
        deg[v] += 1
        chosen.append(eid)
        rec(i + 1, chosen, deg)
        chosen.pop()
        deg[u] -= 1
        deg[v] -= 1
        rec(i + 1, chosen, deg)

    deg0 = [0] * g.n
    for eid in base:
        u, v = g.edges[eid]
        deg0[u] += 1
        deg0[v] += 1
    rec(0, list(base), deg0)
    if best is None:
        raise NotTwoEdgeConnected("no 2EC spanning subgraph found")
    return best


def exact_min_cover(g: MultiGraph, forbidden: frozenset[int] | set[int] = frozenset(),
                    limit: int = DEFAULT_LIMIT,
                    node_budget: int = 4_000_000) -> set[int]:
    """Minimum edge set giving every vertex degree >= 2 such that no
    connected component is a cycle of a forbidden length (subset of {3,4})."""
    forbidden = frozenset(forbidden)
    if not forbidden <= {3, 4}:
        raise ValueError("forbidden lengths must be within {3, 4}")
    pool = _simplify(g)
    deg_all = [0] * g.n
    for eid in pool:
        u, v = g.edges[eid]
        deg_all[u] += 1
        deg_all[v] += 1
    if any(d < 2 for d in deg_all):
        raise Infeasible("a vertex has degree below 2 in the host graph")

    forced = _forced_edges(g, pool)
    free = [e for e in pool if e not in forced]
    if g.n > limit and len(free) > MAX_FREE_EDGES:
        raise TooLarge(f"n={g.n} with {len(free)} free edges exceeds the oracle cap")

    def cover_ok(eids: list[int]) -> bool:
        deg = [0] * g.n
        for eid in eids:
            u, v = g.edges[eid]
            deg[u] += 1
            deg[v] += 1
        if any(d < 2 for d in deg):
            return False
        if forbidden:
            comps = connected_components(g, eids)
            edge_count: dict[int, int] = {}
            comp_of = [0] * g.n
            for ci, comp in enumerate(comps):
                for v in comp:
                    comp_of[v] = ci
            for eid in eids:
                edge_count[comp_of[g.edges[eid][0]]] = \
                    edge_count.get(comp_of[g.edges[eid][0]], 0) + 1
            for ci, comp in enumerate(comps):
                k = len(comp)
                if k in forbidden and edge_count.get(ci, 0) == k \
                        and all(deg[v] == 2 for v in comp):
                    return False
        return True

    best: Optional[set[int]] = None
    best_size = len(pool) + 1
    if cover_ok(pool):
        best = set(pool)
        best_size = len(pool)
    base = sorted(forced)
    nodes = 0

    def rec(i: int, chosen: list[int], deg: list[int]) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if nodes > node_budget:
            raise TooLarge("cover search budget exhausted")
        size = len(chosen)
        need = sum(max(0, 2 - d) for d in deg)
        if size + (need + 1) // 2 >= best_size:
            return
        if i == len(free):
            if need == 0 and cover_ok(chosen):
                best = set(chosen)
                best_size = size
            return
        remaining = free[i:]
        deficit = [max(0, 2 - d) for d in deg]
        if need > 0:
            gain = [0] * g.n
            for eid in remaining:
                u, v = g.edges[eid]
                gain[u] += 1
                gain[v] += 1
            if any(gain[v] < deficit[v] for v in range(g.n)):
                return
        eid = free[i]
        u, v = g.edges[eid]
        deg[u] += 1
        deg[v] += 1
        chosen.append(eid)
        rec(i + 1, chosen, deg)
        chosen.pop()
        deg[u] -= 1
        deg[v] -= 1
        rec(i + 1, chosen, deg)

    deg0 = [0] * g.n
    for eid in base:
        u, v = g.edges[eid]
        deg0[u] += 1
        deg0[v] += 1
    rec(0, list(base), deg0)
    if best is None:
        raise Infeasible("no feasible cover under the forbidden-cycle rule")
    return best


def max_removable_inside(g: MultiGraph, inside_edges: list[int]) -> int:
    """Largest |F|, F a subset of ``inside_edges``, with G - F still 2EC."""
    from itertools import combinations
    all_ids = set(range(g.m))
    for size in range(len(inside_edges), -1, -1):
        for comb in combinations(inside_edges, size):
            if _two_ec_on(g, all_ids - set(comb)):
                return size
    return 0


def is_alpha_contractible(g: MultiGraph, component_edges: set[int],
                          alpha: Fraction) -> bool:
    """True iff every 2ECSS of G keeps at least |E(C)|/alpha edges with both
    endpoints inside V(C).

    The minimum number of inside edges over all 2ECSS equals
    |E(G[V(C)])| - max{|F| : F inside, G - F 2EC}.
    """
    if not component_edges:
        raise ValueError("component must have at least one edge")
    verts: set[int] = set()
    for eid in component_edges:
        u, v = g.edges[eid]
        verts.add(u)
        verts.add(v)
    if not is_two_edge_connected(_induced(g, verts, component_edges), None):
        raise NotTwoEdgeConnected("candidate component is not 2EC")
    inside = [eid for eid, (u, v) in enumerate(g.edges)
              if u in verts and v in verts and u != v]
    removable = max_removable_inside(g, inside)
    min_inside = len(inside) - removable
    return Fraction(min_inside) >= Fraction(len(component_edges)) / alpha


def _induced(g: MultiGraph, verts: set[int], eids: set[int]) -> MultiGraph:
    order = sorted(verts)
    idx = {v: i for i, v in enumerate(order)}
    edges = [(idx[g.edges[e][0]], idx[g.edges[e][1]]) for e in sorted(eids)]
    return MultiGraph(len(order), edges)


def minimal_2ecss_witness(g: MultiGraph, h: set[int]) -> bool:
    """True if no single edge of h can be removed keeping 2EC spanning."""
    for eid in sorted(h):
        if _two_ec_on(g, h - {eid}):
            return False
    return True

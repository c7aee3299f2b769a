"""Bridge covering with loan repayment and gluing (the low-4-cycle-count
phase).

Every step is an edge exchange proposed by a lemma-shaped generator and then
validated against the rebuilt decomposition and ledger: strictly fewer
bridges (or components), no new bridges, weak canonicity, every ledger
invariant, and cost - loan monotone non-increasing, all in exact rationals.
Generators are tried in the dispatch order of the underlying case analysis;
if none validates, a logged fallback keeps the run total (a BoundWaiver).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .credit import (FEW, CreditLedger, build_few_ledger, check_invariants,
                     cost, derive_credits)
from .decomp import (C4, COMPLEX, BlockTree, Component, ComponentGraphView,
                     CoverDecomposition, instantiate_node_cycle,
                     segment_cycles_through)
from .graph import MultiGraph, ham_path_exists, path_edge_ids
from .params import StructuredParams


class NoProgress(RuntimeError):
    pass


@dataclass
class StepRecord:
    phase: str
    label: str
    adds: tuple[int, ...]
    removes: tuple[int, ...]
    delta_cost: Fraction
    delta_loan: Fraction
    waiver: bool = False

    def to_json(self) -> dict:
        return {"phase": self.phase, "label": self.label,
                "adds": list(self.adds), "removes": list(self.removes),
                "delta_cost": str(self.delta_cost),
                "delta_loan": str(self.delta_loan),
                "waiver": self.waiver}


class FewState:
    def __init__(self, g: MultiGraph, dec: CoverDecomposition,
                 led: CreditLedger, params: StructuredParams, info: dict):
        self.g = g
        self.params = params
        self.dec = dec
        self.led = led
        self.info = info
        self.trace: list[StepRecord] = []

    @property
    def h(self) -> set[int]:
        return self.dec.h

    def bridge_ids(self) -> set[int]:
        out: set[int] = set()
        for c in self.dec.components:
            out |= c.bridges
        return out

    def cost_minus_loan(self) -> Fraction:
        return cost(self.dec, self.led) - self.led.total_loan()


def _bridge_count(dec: CoverDecomposition) -> int:
    return sum(len(c.bridges) for c in dec.components)


def _weakly_canonical_enough(g: MultiGraph, dec: CoverDecomposition) -> bool:
    """Structural sanity maintained across steps: cover property (rich
    vertices excepted) and block-size floors on complex components."""
    if not dec.is_two_edge_cover(allow_rich=True):
        return False
    for comp in dec.components:
        if comp.tag == COMPLEX:
            for blk in comp.blocks:
                if len(blk.edges) < 5:
                    return False
    return True


def apply_candidate(state: FewState, adds: Iterable[int], removes: Iterable[int],
                    phase: str, label: str, *,
                    need_fewer_bridges: bool = False,
                    need_fewer_components: bool = False,
                    need_huge: bool = False,
                    allow_cost_increase: bool = False,
                    strict_structure: bool = True) -> bool:
    """Validate and commit one exchange; returns True when applied."""
    g, params = state.g, state.params
    adds = tuple(sorted(set(adds)))
    removes = tuple(sorted(set(removes)))
    if not adds and not removes:
        return False
    if set(adds) & state.h or not set(removes) <= state.h:
        return False
    h2 = (state.h | set(adds)) - set(removes)
    dec2 = CoverDecomposition(g, h2, params, state.dec.rich_vertices)
    old_bridges = state.bridge_ids()
    new_bridges = {e for c in dec2.components for e in c.bridges}
    if not new_bridges <= old_bridges:
        return False
    if need_fewer_bridges and not len(new_bridges) < len(old_bridges):
        return False
    if need_fewer_components and not len(dec2.components) < len(state.dec.components):
        return False
    if need_fewer_components and len(new_bridges) > len(old_bridges):
        return False
    if need_huge and not any(c.huge for c in dec2.components):
        return False
    if strict_structure and not _weakly_canonical_enough(g, dec2):
        return False
    led2 = derive_credits(dec2, FEW, params.few_delta)
    led2.colors = {e: c for e, c in state.led.colors.items() if e in new_bridges}
    dcost = cost(dec2, led2) - cost(state.dec, state.led)
    # forced repayment keeps each loan below its color's remaining credits
    min_repay: dict[int, Fraction] = {}
    for color, loan in state.led.loans.items():
        remaining = sum((led2.bridge_credit[e] for e in new_bridges
                         if led2.colors.get(e) == color), Fraction(0))
        min_repay[color] = max(Fraction(0), loan - remaining)
    forced = sum(min_repay.values(), Fraction(0))
    if not allow_cost_increase and dcost + forced > 0:
        return False
    budget = max(Fraction(0), -dcost)
    loans2: dict[int, Fraction] = {}
    spent = Fraction(0)
    for color in sorted(state.led.loans):
        loan = state.led.loans[color]
        repay = min_repay[color]
        extra_room = loan - repay
        extra = min(extra_room, max(Fraction(0), budget - forced - spent))
        repay += extra
        spent += extra
        if loan - repay > 0:
            loans2[color] = loan - repay
    led2.loans = loans2
    if check_invariants(g, dec2, led2):
        return False
    dloan = led2.total_loan() - state.led.total_loan()
    state.dec = dec2
    state.led = led2
    state.trace.append(StepRecord(phase=phase, label=label, adds=adds,
                                  removes=removes, delta_cost=dcost,
                                  delta_loan=dloan,
                                  waiver=allow_cost_increase))
    return True


# ---------------------------------------------------------------------------
# bridge covering
# ---------------------------------------------------------------------------

@dataclass
class BridgePath:
    """A bridge-covering path for a complex component's tree T_C."""
    u: int                     # T_C node index
    v: int
    edge_ids: tuple[int, ...]  # host edges of the path
    br: int                    # bridges on the tree path between u and v
    bl: int                    # block nodes on that path, endpoints included
    covered: tuple[int, ...]   # bridge edge ids covered

    def cheap(self, delta: Fraction) -> bool:
        return (Fraction(1, 4) - delta) * self.br + self.bl - 2 >= 0


class ComponentContext:
    """G_C view for one complex component: blocks of C and every other
    component contracted; T_C spans the blocks and lonely vertices of C."""

    def __init__(self, g: MultiGraph, dec: CoverDecomposition, comp: Component):
        self.g = g
        self.dec = dec
        self.comp = comp
        self.tree = BlockTree(g, comp)
        ncomp = len(dec.components)
        # nodes: 0..len(tree.nodes)-1 are T_C nodes; then one per other component
        self.tnodes = len(self.tree.nodes)
        self.other_ids: list[int] = [c.cid for c in dec.components
                                     if c.cid != comp.cid]
        self.node_of_comp = {cid: self.tnodes + i
                             for i, cid in enumerate(self.other_ids)}

    def node_of_vertex(self, v: int) -> int:
        cid = self.dec.comp_of_vertex[v]
        if cid == self.comp.cid:
            return self.tree.node_of_vertex[v]
        return self.node_of_comp[cid]

    def nonbridge_links(self) -> list[tuple[int, int, int]]:
        """(node_a, node_b, g_eid) for host edges outside H and outside the
        contraction classes."""
        out = []
        for eid, (u, v) in enumerate(self.g.edges):
            if eid in self.dec.h:
                continue
            a, b = self.node_of_vertex(u), self.node_of_vertex(v)
            if a == b:
                continue
            out.append((min(a, b), max(a, b), eid))
        return out

    def bridge_paths_from(self, u: int) -> dict[int, BridgePath]:
        """Shortest bridge-covering path from T_C node u to every reachable
        T_C node (interior nodes are contracted other-components only)."""
        links = self.nonbridge_links()
        adj: dict[int, list[tuple[int, int]]] = {}
        for a, b, eid in links:
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))
        for k in adj:
            adj[k].sort()
        best: dict[int, BridgePath] = {}
        from collections import deque
        start = u
        dist = {start: (0, ())}
        dq = deque([start])
        while dq:
            x = dq.popleft()
            d, path = dist[x]
            if x != start and x < self.tnodes:
                continue    # T_C nodes terminate a path
            for y, eid in adj.get(x, ()):
                if y in dist:
                    continue
                dist[y] = (d + 1, path + (eid,))
                dq.append(y)
        for y, (d, path) in dist.items():
            if y == start or y >= self.tnodes:
                continue
            nodes, bridge_eids = self.tree.tree_path(start, y)
            bl = sum(1 for n in nodes if self.tree.is_block(n))
            best[y] = BridgePath(u=start, v=y, edge_ids=path,
                                 br=len(bridge_eids), bl=bl,
                                 covered=tuple(bridge_eids))
        return best

    def all_bridge_paths(self) -> list[BridgePath]:
        out = []
        for u in range(self.tnodes):
            for v, bp in sorted(self.bridge_paths_from(u).items()):
                if bp.u < bp.v:
                    out.append(bp)
        # prefer many covered bridges, then short paths, then lexicographic
        out.sort(key=lambda b: (-b.br, len(b.edge_ids), b.edge_ids))
        return out


def find_bridge_paths(g: MultiGraph, dec: CoverDecomposition,
                      comp: Component) -> tuple[list[BridgePath], dict[int, set[int]]]:
    """All shortest bridge-covering paths plus the reachability sets R(u)."""
    ctx = ComponentContext(g, dec, comp)
    paths = ctx.all_bridge_paths()
    reach: dict[int, set[int]] = {u: set() for u in range(ctx.tnodes)}
    for u in range(ctx.tnodes):
        reach[u] = set(ctx.bridge_paths_from(u))
    return paths, reach


def _pair_candidates(ctx: ComponentContext, paths: list[BridgePath]):
    """Two-path exchanges in the spirit of the helper lemmas: both paths end
    in T_C; optionally one shared tree edge is removed."""
    tree = ctx.tree
    for p, q in itertools.combinations(paths, 2):
        if set(p.edge_ids) & set(q.edge_ids):
            continue
        shared = set(p.covered) & set(q.covered)
        union_edges = set(p.covered) | set(q.covered)
        nodes_p, _ = tree.tree_path(p.u, p.v)
        nodes_q, _ = tree.tree_path(q.u, q.v)
        if set(nodes_p) & set(nodes_q):
            if not shared and len(union_edges) >= 5:
                yield (p, q, None, "helper2")
        if len(shared) == 1:
            e = next(iter(shared))
            yield (p, q, e, "helper3")
            if len(union_edges) >= 5:
                yield (p, q, e, "helper4")


def _triple_candidates(ctx: ComponentContext, paths: list[BridgePath],
                       target: set[int]):
    """Three disjoint paths covering all target bridges with one or two tree
    edges removed (operations (ii)/(iii) of the two-leaf analysis); removed
    edges may also be covered ones."""
    short = [p for p in paths if p.br <= 7]
    for trio in itertools.combinations(short[:14], 3):
        eids = [set(p.edge_ids) for p in trio]
        if eids[0] & eids[1] or eids[0] & eids[2] or eids[1] & eids[2]:
            continue
        covered = set().union(*(p.covered for p in trio))
        missing = target - covered
        if len(missing) > 2:
            continue
        base = tuple(sorted(missing))
        options = {base}
        pool = sorted(covered | missing)
        if len(missing) <= 1:
            for extra in pool:
                cand = tuple(sorted(set(base) | {extra}))
                if len(cand) <= 2:
                    options.add(cand)
        for rem in sorted(options):
            yield trio, rem


def _nice_c5_exchanges(state: FewState, comp: Component):
    """Matching-based exchanges around a pendant nice C5 block: add two host
    edges leaving the block, drop one block edge and one incident H edge."""
    g, dec = state.g, state.dec
    tree = BlockTree(g, comp)
    for ni in tree.pendant_blocks():
        blk = tree.nodes[ni]["block"]
        if len(blk.vertices) != 5:
            continue
        outs = [eid for eid, (u, v) in enumerate(g.edges)
                if eid not in dec.h and ((u in blk.vertices) != (v in blk.vertices))]
        for e1, e2 in itertools.combinations(outs, 2):
            ends1 = [x for x in g.edges[e1] if x in blk.vertices]
            ends2 = [x for x in g.edges[e2] if x in blk.vertices]
            if not ends1 or not ends2 or ends1 == ends2:
                continue
            rem_pool = sorted(blk.edges) + sorted(
                e for e in comp.bridges
                if any(x in blk.vertices for x in g.edges[e]))
            for r1, r2 in itertools.combinations(rem_pool, 2):
                yield (e1, e2), (r1, r2)


def cover_bridges_step(state: FewState) -> bool:
    """One bridge-covering step; True when a bridge was removed."""
    complexes = sorted(state.dec.complex_components,
                       key=lambda c: min(c.vertices))
    if not complexes:
        return False
    for comp in complexes:
        ctx = ComponentContext(state.g, state.dec, comp)
        paths = ctx.all_bridge_paths()
        if not paths:
            continue
        # single-path dispatch: cheap paths first, then repayment-funded ones
        for bp in paths:
            label = "cheap-path" if bp.cheap(state.params.few_delta) else "path-repay"
            if apply_candidate(state, bp.edge_ids, (), "bridge_cover", label,
                               need_fewer_bridges=True):
                return True
        # two-path helper-lemma shapes
        for p, q, rem, label in _pair_candidates(ctx, paths):
            removes = (rem,) if rem is not None else ()
            if apply_candidate(state, p.edge_ids + q.edge_ids, removes,
                               "bridge_cover", label, need_fewer_bridges=True):
                return True
        # three paths with up to two tree edges removed
        target = set(comp.bridges)
        for trio, rem in _triple_candidates(ctx, paths, target):
            adds = tuple(e for p in trio for e in p.edge_ids)
            if apply_candidate(state, adds, rem, "bridge_cover",
                               "three-paths", need_fewer_bridges=True):
                return True
        # nice-C5 matching exchanges
        for adds, removes in _nice_c5_exchanges(state, comp):
            if apply_candidate(state, adds, removes, "bridge_cover",
                               "nice-c5-exchange", need_fewer_bridges=True):
                return True
    # total fallback: any single bridge-covering path, waiving the bound
    for comp in complexes:
        ctx = ComponentContext(state.g, state.dec, comp)
        for bp in ctx.all_bridge_paths():
            if apply_candidate(state, bp.edge_ids, (), "bridge_cover",
                               "fallback-path", need_fewer_bridges=True,
                               allow_cost_increase=True, strict_structure=False):
                return True
    raise NoProgress("no bridge-covering step applies")


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

def glue_step(state: FewState) -> bool:
    """Merge the segment around the huge component; True on progress."""
    dec = state.dec
    if len(dec.components) <= 1:
        return False
    view = ComponentGraphView(state.g, dec)
    huge = [c for c in dec.components if c.huge]
    if huge:
        L = max(huge, key=lambda c: (len(c.vertices), -c.cid)).cid
    else:
        L = max(dec.components, key=lambda c: (len(c.vertices), -c.cid)).cid
    segments = [s for s in view.segments if L in s] or view.segments
    need_huge = bool(huge)
    for seg in segments:
        if len(seg) == 2:
            if _glue_trivial_segment(state, view, seg, L, need_huge):
                return True
        else:
            if _glue_wide_segment(state, view, seg, L, need_huge):
                return True
    # fallback: attach the smallest non-L component to L with two edges
    order = sorted((c for c in dec.components if c.cid != L),
                   key=lambda c: (len(c.vertices), c.cid))
    for comp in order:
        ids = view.edges_between(L, comp.cid)
        for pair in itertools.combinations(ids, 2):
            u1 = [x for x in state.g.edges[pair[0]] if x in comp.vertices][0]
            u2 = [x for x in state.g.edges[pair[1]] if x in comp.vertices][0]
            if u1 == u2:
                continue
            if apply_candidate(state, pair, (), "glue", "fallback-attach",
                               need_fewer_components=True,
                               allow_cost_increase=True, strict_structure=False):
                return True
    # last resort: any two independent cross edges between two components
    for a, b, eid in view.node_edges:
        ids = view.edges_between(a, b)
        for pair in itertools.combinations(ids, 2):
            ends = {x for e in pair for x in state.g.edges[e]}
            if len(ends) < 3:
                continue
            if apply_candidate(state, pair, (), "glue", "fallback-any",
                               need_fewer_components=True,
                               allow_cost_increase=True, strict_structure=False):
                return True
    raise NoProgress("no gluing step applies")


def _glue_trivial_segment(state: FewState, view: ComponentGraphView,
                          seg: set[int], L: int, need_huge: bool) -> bool:
    other = [x for x in seg if x != L]
    if L not in seg or not other:
        return False
    A = other[0]
    g = state.g
    compA = state.dec.components[A]
    ids = view.edges_between(L, A)
    # rich vertex or large component: two attachment edges suffice
    label = ("trivial-rich" if compA.is_rich else
             "trivial-large" if compA.is_2ec and len(compA.edges) >= 9 else None)
    if label:
        for pair in itertools.combinations(ids, 2):
            ends = {x for e in pair for x in g.edges[e] if x in compA.vertices}
            if not compA.is_rich and len(ends) < 2:
                continue
            if apply_candidate(state, pair, (), "glue", label,
                               need_fewer_components=True, need_huge=need_huge):
                return True
        return False
    # cycle component: good cycle with a Hamiltonian-path exchange
    for pair in itertools.combinations(ids, 2):
        endsA = sorted({x for e in pair for x in g.edges[e] if x in compA.vertices})
        if len(endsA) != 2:
            continue
        u, v = endsA
        if compA.cycle_order:
            k = len(compA.cycle_order)
            pos = {x: i for i, x in enumerate(compA.cycle_order)}
            if (pos[u] - pos[v]) % k in (1, k - 1):
                join = [e for e in compA.edges if set(g.edges[e]) == {u, v}]
                if join and apply_candidate(state, pair, (join[0],), "glue",
                                            "cycle-hamiltonian",
                                            need_fewer_components=True,
                                            need_huge=need_huge):
                    return True
        path = ham_path_exists(g, compA.vertices, u, v)
        if path:
            path_edges = path_edge_ids(g, path)
            if path_edges is not None:
                removes = tuple(sorted(compA.edges))
                if apply_candidate(state, tuple(pair) + path_edges, removes,
                                   "glue", "cycle-hamiltonian-reroute",
                                   need_fewer_components=True, need_huge=need_huge):
                    return True
    # pendant C8-style: route through an adjacent segment of A
    for seg2 in view.segments_of(A):
        if seg2 == seg:
            continue
        if _two_segment_exchange(state, view, L, A, seg2, need_huge):
            return True
    return False


def _two_segment_exchange(state: FewState, view: ComponentGraphView,
                          L: int, A: int, seg2: set[int], need_huge: bool) -> bool:
    """Attach L to A and absorb a cycle of A's other segment (handles the
    pendant-C8 and cut-node cases)."""
    g = state.g
    compA = state.dec.components[A]
    idsLA = view.edges_between(L, A)
    cycles = segment_cycles_through(view, seg2, A, max_len=4)
    for cyc in cycles:
        for combo in instantiate_node_cycle(view, cyc):
            for rem_extra in _cycle_removals_few(state, cyc, combo, skip={A}):
                for pair in itertools.combinations(idsLA, 2):
                    endsA = {x for e in pair for x in g.edges[e]
                             if x in compA.vertices}
                    if len(endsA) < 2:
                        continue
                    adds = tuple(pair) + combo
                    # one A-cycle edge may be dropped when a cycle edge and an
                    # attachment meet adjacent vertices of A
                    for remA in _removal_options_for_node(state, A, adds):
                        if apply_candidate(state, adds, rem_extra + remA,
                                           "glue", "two-segment-cycle",
                                           need_fewer_components=True,
                                           need_huge=need_huge):
                            return True
    return False


def _removal_options_for_node(state: FewState, node: int,
                              adds: tuple[int, ...]) -> list[tuple[int, ...]]:
    g = state.g
    comp = state.dec.components[node]
    opts: list[tuple[int, ...]] = [()]
    if not comp.cycle_order:
        return opts
    incident = sorted({x for e in adds for x in g.edges[e] if x in comp.vertices})
    for u, v in itertools.combinations(incident, 2):
        ids = [e for e in comp.edges if set(g.edges[e]) == {u, v}]
        if ids:
            opts.append((ids[0],))
    return opts


def _cycle_removals_few(state: FewState, node_cycle: list[int], combo,
                        skip: set[int]):
    yield ()
    g = state.g
    k = len(node_cycle)
    singles: list[int] = []
    for i, node in enumerate(node_cycle):
        comp = state.dec.components[node]
        if node in skip or not comp.cycle_order:
            continue
        e_in = combo[(i - 1) % k]
        e_out = combo[i]
        p = [x for x in g.edges[e_in] if x in comp.vertices]
        q = [x for x in g.edges[e_out] if x in comp.vertices]
        if p and q and p[0] != q[0]:
            ids = [e for e in comp.edges if set(g.edges[e]) == {p[0], q[0]}]
            if ids:
                singles.append(ids[0])
    for r in range(1, len(singles) + 1):
        for sub in itertools.combinations(singles, r):
            yield tuple(sub)


def _glue_wide_segment(state: FewState, view: ComponentGraphView,
                       seg: set[int], L: int, need_huge: bool) -> bool:
    g = state.g
    if L not in seg:
        return False
    # rich vertex in the segment: absorb it on a cycle through L
    rich_nodes = [x for x in seg if state.dec.components[x].is_rich]
    c4_nodes = [x for x in seg if state.dec.components[x].tag == C4 and x != L]
    targets = rich_nodes + c4_nodes + [x for x in sorted(seg) if x != L]
    cycles = segment_cycles_through(view, seg, L, max_len=6)
    for cyc in cycles:
        label = ("nontrivial-long-cycle" if len(cyc) >= 6 else
                 "nontrivial-cycle")
        for combo in instantiate_node_cycle(view, cyc):
            for removes in _cycle_removals_few(state, cyc, combo, skip={L}):
                if apply_candidate(state, combo, removes, "glue", label,
                                   need_fewer_components=True, need_huge=need_huge):
                    return True
        # cycle + one extra attachment path (the 2-edges-and-a-path shape)
    for A in targets:
        compA = state.dec.components[A]
        if compA.cycle_order is None:
            continue
        if A not in seg:
            continue
        # replace the component cycle by a Hamiltonian path between two
        # cycle-through-C4 style attachment points
        idsL = view.edges_between(L, A)
        others = [b for b in sorted(seg) if b not in (L, A)]
        for B in others:
            idsB = view.edges_between(A, B)
            idsLB = view.edges_between(L, B)
            if not idsL or not idsB or not idsLB:
                continue
            for e1 in idsL[:3]:
                for e2 in idsB[:3]:
                    for e3 in idsLB[:2]:
                        u = [x for x in g.edges[e1] if x in compA.vertices][0]
                        v = [x for x in g.edges[e2] if x in compA.vertices][0]
                        if u == v:
                            continue
                        path = ham_path_exists(g, compA.vertices, u, v)
                        if not path:
                            continue
                        pe = path_edge_ids(g, path)
                        if pe is None:
                            continue
                        adds = (e1, e2, e3) + pe
                        removes = tuple(sorted(compA.edges))
                        if apply_candidate(state, adds, removes, "glue",
                                           "cycle-through-c4",
                                           need_fewer_components=True,
                                           need_huge=need_huge):
                            return True
    return False


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def run_few(g: MultiGraph, h0: set[int], params: StructuredParams,
            strict: bool = True) -> tuple[set[int], FewState]:
    """Ledger build, bridge covering to bridgeless, gluing to one component."""
    dec0 = CoverDecomposition(g, h0, params)
    dec, led, info = build_few_ledger(g, dec0, params, strict=strict)
    state = FewState(g, dec, led, params, info)
    guard = g.m + len(dec.components) + 4
    while _bridge_count(state.dec) > 0 and guard > 0:
        cover_bridges_step(state)
        guard -= 1
    while len(state.dec.components) > 1 and guard > 0:
        glue_step(state)
        guard -= 1
    if guard <= 0:
        raise NoProgress("step budget exhausted")
    if strict and state.led.total_loan() != 0:
        raise NoProgress("terminal loan is nonzero")
    beta = info["beta"]
    bound = (Fraction(5, 4) - (1 - beta) * params.few_delta) * info["h0_size"]
    state.info["final_bound"] = bound
    state.info["final_bound_ok"] = Fraction(len(state.h)) <= bound
    state.info["waivers"] = state.info.get("waivers", []) + [
        r.label for r in state.trace if r.waiver]
    return set(state.h), state

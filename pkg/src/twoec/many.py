"""High-4-cycle-count machinery: merge search (single/double merges, short
heavy cycles), branching gluing paths, core-square construction, and the
final per-segment assembly.

Every structural change goes through ``apply_many``: the decomposition and
credit assignment are rebuilt and the exchange commits only when components
or bridges strictly decrease, no new bridge appears, and the exact-rational
cost respects the step's slack (0 everywhere except the single +2 step of
the core construction).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import oracle
from .credit import MANY, CreditLedger, build_many_ledger, cost, derive_credits
from .decomp import (C4, COMPLEX, CYCLE_TAGS, BlockTree, Component,
                     ComponentGraphView, CoverDecomposition,
                     instantiate_node_cycle, segment_cycles_through)
from .few import NoProgress, StepRecord
from .graph import MultiGraph, contract_many
from .params import StructuredParams


@dataclass
class MergeCandidate:
    kind: str                       # single | double | short_heavy
    edges: tuple[int, ...]          # X
    shortcut_edges: tuple[int, ...]  # F(X)
    k: int                          # distinct components touched
    j: int                          # C4 components not shortcut
    covers_bridge: bool
    node_cycles: tuple[tuple[int, ...], ...]

    def bound(self, delta: Fraction) -> Optional[Fraction]:
        if self.kind == "single":
            return 2 + self.j - (1 - 4 * delta) * self.k
        if self.kind == "double":
            return 3 + self.j - (1 - 4 * delta) * self.k
        return None


class ManyState:
    def __init__(self, g: MultiGraph, dec: CoverDecomposition,
                 led: CreditLedger, params: StructuredParams, info: dict):
        self.g = g
        self.params = params
        self.dec = dec
        self.led = led
        self.info = info
        self.trace: list[StepRecord] = []
        self.plus_two_used = False
        self.merge_audits: list[dict] = []

    @property
    def h(self) -> set[int]:
        return self.dec.h

    def bridge_ids(self) -> set[int]:
        return {e for c in self.dec.components for e in c.bridges}

    def view(self) -> ComponentGraphView:
        return ComponentGraphView(self.g, self.dec)


def _canonical_shape_ok(g: MultiGraph, dec: CoverDecomposition) -> bool:
    if not dec.is_two_edge_cover(allow_rich=True):
        return False
    for comp in dec.components:
        if comp.is_rich:
            continue
        if comp.tag == COMPLEX:
            for blk in comp.blocks:
                if len(blk.edges) < 5:
                    return False
        elif comp.tag not in CYCLE_TAGS and not (comp.is_2ec and len(comp.edges) >= 9):
            return False
    return True


def apply_many(state: ManyState, adds: Iterable[int], removes: Iterable[int],
               phase: str, label: str, *,
               need_fewer_components: bool = False,
               need_fewer_bridges: bool = False,
               cost_slack: Fraction = Fraction(0),
               strict_structure: bool = True,
               waiver: bool = False) -> bool:
    g, params = state.g, state.params
    adds = tuple(sorted(set(adds)))
    removes = tuple(sorted(set(removes)))
    if set(adds) & state.h or not set(removes) <= state.h:
        return False
    h2 = (state.h | set(adds)) - set(removes)
    dec2 = CoverDecomposition(g, h2, params, state.dec.rich_vertices)
    old_bridges = state.bridge_ids()
    new_bridges = {e for c in dec2.components for e in c.bridges}
    if not new_bridges <= old_bridges:
        return False
    if need_fewer_components and not (len(dec2.components) < len(state.dec.components)
                                      or len(new_bridges) < len(old_bridges)):
        return False
    if need_fewer_bridges and not len(new_bridges) < len(old_bridges):
        return False
    if strict_structure and not _canonical_shape_ok(g, dec2):
        return False
    led2 = derive_credits(dec2, MANY, params.many_delta)
    dcost = cost(dec2, led2) - cost(state.dec, state.led)
    if not waiver and dcost > cost_slack:
        return False
    state.dec = dec2
    state.led = led2
    state.trace.append(StepRecord(phase=phase, label=label, adds=adds,
                                  removes=removes, delta_cost=dcost,
                                  delta_loan=Fraction(0), waiver=waiver))
    return True


# ---------------------------------------------------------------------------
# merge candidates
# ---------------------------------------------------------------------------

def _touch_map(state: ManyState, edge_set: Iterable[int]) -> dict[int, list[int]]:
    """component id -> endpoint vertices of the candidate edges inside it."""
    touched: dict[int, list[int]] = {}
    for eid in edge_set:
        for v in state.g.edges[eid]:
            cid = state.dec.comp_of_vertex[v]
            touched.setdefault(cid, []).append(v)
    return touched


def _shortcut_edges(state: ManyState, edge_set: tuple[int, ...]
                    ) -> tuple[dict[int, int], set[int]]:
    """Per touched C4: the shortcut H edge if two candidate edges enter at
    adjacent cycle vertices; also the set of non-shortcut C4 component ids."""
    g, dec = state.g, state.dec
    touched = _touch_map(state, edge_set)
    shortcuts: dict[int, int] = {}
    open_c4: set[int] = set()
    for cid, verts in touched.items():
        comp = dec.components[cid]
        if comp.tag != C4:
            continue
        found = None
        for u, v in itertools.combinations(sorted(set(verts)), 2):
            ids = [e for e in comp.edges if set(g.edges[e]) == {u, v}]
            if ids:
                found = ids[0] if found is None else min(found, ids[0])
        if found is not None:
            shortcuts[cid] = found
        else:
            open_c4.add(cid)
    return shortcuts, open_c4


def _complex_incidence_ok(state: ManyState, edge_set: tuple[int, ...]) -> bool:
    touched = _touch_map(state, edge_set)
    for cid, verts in touched.items():
        comp = state.dec.components[cid]
        if comp.tag != COMPLEX:
            continue
        vs = set(verts)
        in_block = any(any(v in blk.vertices for blk in comp.blocks) for v in vs)
        if not in_block and len(vs) < 2:
            return False
    return True


def _covers_bridge(state: ManyState, edge_set: tuple[int, ...]) -> bool:
    touched = _touch_map(state, edge_set)
    for cid, verts in touched.items():
        comp = state.dec.components[cid]
        if comp.tag != COMPLEX:
            continue
        vs = sorted(set(verts))
        if len(vs) < 2:
            continue
        tree = BlockTree(state.g, comp)
        for u, v in itertools.combinations(vs, 2):
            a, b = tree.node_of_vertex[u], tree.node_of_vertex[v]
            if a == b:
                continue
            _, eids = tree.tree_path(a, b)
            if eids:
                return True
    return False


def evaluate_cycle(state: ManyState, combo: tuple[int, ...],
                   cycles: tuple[tuple[int, ...], ...],
                   double: bool) -> Optional[MergeCandidate]:
    touched = _touch_map(state, combo)
    k = len(touched)
    if not _complex_incidence_ok(state, combo):
        return None
    shortcuts, open_c4 = _shortcut_edges(state, combo)
    j = len(open_c4)
    covers = _covers_bridge(state, combo)
    heavy = any(state.dec.components[cid].tag in CYCLE_TAGS
                and state.dec.components[cid].tag != C4
                for cid in touched)
    if not double and len(combo) <= 6 and (heavy or covers):
        return MergeCandidate(kind="short_heavy", edges=combo,
                              shortcut_edges=(), k=k, j=j,
                              covers_bridge=covers, node_cycles=cycles)
    f_edges = tuple(sorted(shortcuts.values()))
    if double:
        if k >= 5 and j <= 3 and k - j >= 4:
            return MergeCandidate(kind="double", edges=combo,
                                  shortcut_edges=f_edges, k=k, j=j,
                                  covers_bridge=covers, node_cycles=cycles)
        return None
    if k >= 3 and j <= 2 and k - j >= 3:
        return MergeCandidate(kind="single", edges=combo,
                              shortcut_edges=f_edges, k=k, j=j,
                              covers_bridge=covers, node_cycles=cycles)
    return None


def _all_segment_cycles(view: ComponentGraphView, seg: set[int],
                        max_len: int) -> list[list[int]]:
    seen: set[tuple] = set()
    out: list[list[int]] = []
    for node in sorted(seg):
        for cyc in segment_cycles_through(view, seg, node, max_len):
            key = (frozenset(cyc), len(cyc))
            if key in seen:
                continue
            seen.add(key)
            out.append(cyc)
    out.sort(key=lambda c: (len(c), c))
    return out


def find_merge(state: ManyState, segments: Optional[list[set[int]]] = None
               ) -> Optional[MergeCandidate]:
    """Bounded search for a short heavy cycle, then a single merge, then a
    composed double merge."""
    view = state.view()
    segs = segments if segments is not None else view.segments
    best_single: Optional[MergeCandidate] = None
    cycle_nodes: set[int] = set()
    for seg in segs:
        for cyc in _all_segment_cycles(view, seg, max_len=min(8, len(seg) + 1)):
            cycle_nodes.update(cyc)
            for combo in instantiate_node_cycle(view, cyc):
                cand = evaluate_cycle(state, combo, (tuple(cyc),), double=False)
                if cand is None:
                    continue
                if cand.kind == "short_heavy":
                    return cand
                if best_single is None:
                    best_single = cand
    if best_single is not None:
        return best_single
    # doubles: two cycles meeting at exactly one shared node
    for node in sorted(cycle_nodes):
        partial = _partial_cycles_through(state, view, node)
        for a, b in itertools.combinations(partial, 2):
            if set(a[0]) & set(b[0]) != {node}:
                continue
            combo = tuple(sorted(set(a[1]) | set(b[1])))
            if len(combo) != len(a[1]) + len(b[1]):
                continue
            cand = evaluate_cycle(state, combo, (a[0], b[0]), double=True)
            if cand is not None:
                return cand
    return None


def _partial_cycles_through(state: ManyState, view: ComponentGraphView,
                            node: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(node tuple, instantiated edges) for cycles through a node in any of
    its segments (used to compose double merges)."""
    out = []
    for seg in view.segments_of(node):
        for cyc in segment_cycles_through(view, seg, node, max_len=5):
            for combo in instantiate_node_cycle(view, cyc, cap=12):
                out.append((tuple(cyc), combo))
    return out


def apply_merge(state: ManyState, cand: MergeCandidate, phase: str = "merge"
                ) -> bool:
    """Commit (H + X) - F(X) with the closed-form audit."""
    before = cost(state.dec, state.led)
    cr_before = state.led.total_credit()
    label = {"single": f"single({cand.k},{cand.j})",
             "double": f"double({cand.k},{cand.j})",
             "short_heavy": f"short-heavy({len(cand.edges)})"}[cand.kind]
    ok = apply_many(state, cand.edges, cand.shortcut_edges, phase, label,
                    need_fewer_components=not cand.covers_bridge,
                    need_fewer_bridges=cand.covers_bridge and cand.kind == "short_heavy")
    if not ok:
        return False
    after = cost(state.dec, state.led)
    audit = {"kind": cand.kind, "k": cand.k, "j": cand.j,
             "x_size": len(cand.edges), "delta_cost": after - before}
    bound = cand.bound(state.params.many_delta)
    if bound is not None:
        audit["bound"] = bound
        audit["bound_ok"] = (after - before) <= bound <= 0
    else:
        cr_after = state.led.total_credit()
        audit["cr_drop"] = cr_before - cr_after
        audit["bound_ok"] = (cr_before - cr_after) >= len(cand.edges)
    state.merge_audits.append(audit)
    if not audit["bound_ok"]:
        state.trace[-1].waiver = True
    return True


def find_31_merge(state: ManyState, target_cid: int, seg: set[int]
                  ) -> Optional[MergeCandidate]:
    """A single (k, j)-merge with k in {3,4}, k - j >= 2, inside a 3- or
    4-node segment of large/C4 components, never shortcutting the target."""
    view = state.view()
    if len(seg) not in (3, 4) or target_cid not in seg:
        return None
    for cid in seg:
        comp = state.dec.components[cid]
        if comp.tag != C4 and not (comp.is_2ec and len(comp.edges) >= 9):
            return None
    for cyc in segment_cycles_through(view, seg, target_cid, max_len=4):
        for combo in instantiate_node_cycle(view, cyc):
            shortcuts, open_c4 = _shortcut_edges(state, combo)
            if target_cid in shortcuts:
                continue
            cand = evaluate_cycle(state, combo, (tuple(cyc),), double=False)
            if cand is None:
                # accept the weaker 31-merge contract directly
                touched = _touch_map(state, combo)
                k = len(touched)
                j = len(open_c4)
                if k in (3, 4) and k - j >= 2:
                    cand = MergeCandidate(kind="single", edges=combo,
                                          shortcut_edges=tuple(sorted(
                                              e for c, e in shortcuts.items())),
                                          k=k, j=j, covers_bridge=False,
                                          node_cycles=(tuple(cyc),))
                else:
                    continue
            if cand.k in (3, 4) and cand.k - cand.j >= 2:
                return cand
    return None


def compose_double_from_31(state: ManyState, target_cid: int
                           ) -> Optional[MergeCandidate]:
    """Lemma-style composition: 31-merges for a component sitting in two
    qualifying segments combine into a double merge."""
    view = state.view()
    segs = view.segments_of(target_cid)
    if len(segs) < 2:
        return None
    parts = []
    for seg in segs:
        cand = find_31_merge(state, target_cid, seg)
        if cand is not None:
            parts.append(cand)
        if len(parts) == 2:
            break
    if len(parts) < 2:
        return None
    a, b = parts
    if set(a.edges) & set(b.edges):
        return None
    combo = tuple(sorted(set(a.edges) | set(b.edges)))
    return evaluate_cycle(state, combo, a.node_cycles + b.node_cycles,
                          double=True)


# ---------------------------------------------------------------------------
# gluing paths
# ---------------------------------------------------------------------------

@dataclass
class GluingPath:
    nodes: list[int]
    edges: list[int]          # host edge ids; edges[i] joins nodes[i], nodes[i+1]

    def length(self) -> int:
        return len(self.edges)


def _node_pattern_ok(state: ManyState, node: int, e_in: Optional[int],
                     e_out: Optional[int]) -> bool:
    if e_in is None or e_out is None:
        return True
    g = state.g
    comp = state.dec.components[node]
    p = [x for x in g.edges[e_in] if x in comp.vertices]
    q = [x for x in g.edges[e_out] if x in comp.vertices]
    if not p or not q:
        return False
    u, v = p[0], q[0]
    if comp.tag == C4:
        if u == v:
            return False
        return any(set(g.edges[e]) == {u, v} for e in comp.edges)
    if comp.tag == COMPLEX:
        in_block_u = any(u in blk.vertices for blk in comp.blocks)
        in_block_v = any(v in blk.vertices for blk in comp.blocks)
        if not in_block_u and not in_block_v and u == v:
            return False
    return True


def validate_gluing_path(state: ManyState, seg: set[int], path: GluingPath) -> bool:
    if len(set(path.nodes)) != len(path.nodes):
        return False
    if not set(path.nodes) <= seg:
        return False
    for i, node in enumerate(path.nodes):
        e_in = path.edges[i - 1] if i > 0 else None
        e_out = path.edges[i] if i < len(path.edges) else None
        if not _node_pattern_ok(state, node, e_in, e_out):
            return False
    return True


def start_gluing_path(state: ManyState, view: ComponentGraphView,
                      seg: set[int]) -> Optional[GluingPath]:
    for mid in sorted(seg):
        nbrs = [x for x in view.neighbors(mid) if x in seg]
        for a, b in itertools.combinations(nbrs, 2):
            for e1 in view.edges_between(a, mid)[:3]:
                for e2 in view.edges_between(mid, b)[:3]:
                    p = GluingPath(nodes=[a, mid, b], edges=[e1, e2])
                    if validate_gluing_path(state, seg, p):
                        return p
    return None


def extend_gluing_path(state: ManyState, view: ComponentGraphView,
                       seg: set[int], path: GluingPath) -> Optional[GluingPath]:
    for endpos in (len(path.nodes) - 1, 0):
        end = path.nodes[endpos]
        for x in sorted(set(view.neighbors(end)) & seg):
            if x in path.nodes:
                continue
            for eid in view.edges_between(end, x)[:4]:
                if endpos == 0:
                    cand = GluingPath(nodes=[x] + path.nodes,
                                      edges=[eid] + path.edges)
                else:
                    cand = GluingPath(nodes=path.nodes + [x],
                                      edges=path.edges + [eid])
                if validate_gluing_path(state, seg, cand):
                    return cand
    return None


def gluing_path_progress(state: ManyState, seg: set[int]) -> Optional[str]:
    """One progress action on a >= 5 node segment: 'improved' (fewer
    components at non-increasing cost) or 'extended' (longer gluing path)."""
    view = state.view()
    cand = find_merge(state, segments=[seg])
    if cand is not None and apply_merge(state, cand, phase="gluing-path"):
        return "improved"
    path = start_gluing_path(state, view, seg)
    if path is None:
        return None
    extended = False
    for _ in range(state.g.n):
        # chords over the current path give single merges
        k = len(path.nodes)
        for i in range(k):
            for jx in range(i + 2, k):
                chords = [e for e in view.edges_between(path.nodes[i], path.nodes[jx])
                          if e not in path.edges]
                for ch in chords:
                    combo = tuple(path.edges[i:jx]) + (ch,)
                    cc = evaluate_cycle(state, combo,
                                        (tuple(path.nodes[i:jx + 1]),), double=False)
                    if cc is not None and apply_merge(state, cc, phase="gluing-path"):
                        return "improved"
        if len(path.nodes) == len(seg):
            break
        nxt = extend_gluing_path(state, view, seg, path)
        if nxt is None:
            break
        path = nxt
        extended = True
    return "extended" if extended else None


# ---------------------------------------------------------------------------
# core-square construction
# ---------------------------------------------------------------------------

def core_square_report(state: ManyState) -> dict:
    dec = state.dec
    view = state.view()
    params = state.params
    huge = [c for c in dec.components if len(c.vertices) >= params.huge_threshold]
    rep: dict[str, object] = {}
    rep["one_huge"] = len(huge) == 1
    L = huge[0].cid if len(huge) >= 1 else None
    rep["others_c4"] = all(c.tag == C4 for c in dec.components
                           if L is None or c.cid != L)
    if L is None:
        rep["l_small_segments"] = False
        rep["cut_component_shape"] = False
        rep["pendant_segments_3_or_4"] = False
        rep["ok"] = False
        return rep
    rep["l_small_segments"] = all(len(s) <= 2 for s in view.segments_of(L))
    cut_ok = True
    pendant_ok = True
    for c in dec.components:
        if c.cid == L or c.cid not in view.cut_nodes:
            continue
        segs = view.segments_of(c.cid)
        if len(segs) != 2:
            cut_ok = False
            continue
        withL = [s for s in segs if L in s]
        without = [s for s in segs if L not in s]
        if len(withL) != 1 or len(without) != 1:
            cut_ok = False
            continue
        s2 = without[0]
        if len(s2) > 4:
            cut_ok = False
        if any(x in view.cut_nodes and x != c.cid for x in s2):
            cut_ok = False
        if len(s2) not in (3, 4) or any(dec.components[x].tag != C4 for x in s2):
            pendant_ok = False
    rep["cut_component_shape"] = cut_ok
    rep["pendant_segments_3_or_4"] = pendant_ok
    rep["ok"] = all(rep[k] for k in ("one_huge", "others_c4", "l_small_segments",
                                     "cut_component_shape"))
    rep["L"] = L
    return rep


def _cover_l_bridge(state: ManyState, L: int) -> bool:
    """Short-heavy bridge covering of the huge complex component."""
    view = state.view()
    for seg in view.segments_of(L):
        for cyc in _all_segment_cycles(view, seg, max_len=6):
            if L not in cyc:
                continue
            for combo in instantiate_node_cycle(view, cyc):
                cand = evaluate_cycle(state, combo, (tuple(cyc),), double=False)
                if cand is not None and cand.covers_bridge and \
                        apply_merge(state, cand, phase="core"):
                    return True
    # single parallel-pair cycles or one-edge covers within L itself
    comp = state.dec.components[L]
    for eid, (u, v) in enumerate(state.g.edges):
        if eid in state.h or u == v:
            continue
        if u in comp.vertices and v in comp.vertices:
            if apply_many(state, (eid,), (), "core", "bridge-chord",
                          need_fewer_bridges=True):
                return True
    return False


def build_core_square(state: ManyState, max_steps: Optional[int] = None) -> dict:
    """Exhaustively apply the ordered reductions until the cover is a
    bridgeless core-square configuration; at most one +2 step."""
    params = state.params
    guard = max_steps if max_steps is not None else 4 * state.g.n + 16
    while guard > 0:
        guard -= 1
        dec = state.dec
        view = state.view()
        rep = core_square_report(state)
        huge = [c for c in dec.components if c.huge]
        L = max(huge, key=lambda c: (len(c.vertices), -c.cid)).cid if huge else None
        if rep["ok"] and L is not None and not dec.components[L].bridges:
            break
        progressed = False
        # 1. big huge segments: gluing-path progress
        if L is not None:
            for seg in view.segments:
                if len(seg) >= 5 and L in seg:
                    res = gluing_path_progress(state, seg)
                    if res == "improved":
                        progressed = True
                        break
        if progressed:
            continue
        # 2. segment with a C_i (5..8) and at most i components
        for seg in view.segments:
            ci = [x for x in seg if dec.components[x].tag in CYCLE_TAGS
                  and dec.components[x].tag != C4]
            if not ci:
                continue
            i_val = min(CYCLE_TAGS[dec.components[x].tag] for x in ci)
            if len(seg) <= i_val:
                cand = find_merge(state, segments=[seg])
                if cand is not None and apply_merge(state, cand, phase="core"):
                    progressed = True
                    break
        if progressed:
            continue
        # 3. small segment holding two large-or-complex components
        for seg in view.segments:
            if len(seg) > 4:
                continue
            bigs = [x for x in seg if dec.components[x].tag == COMPLEX
                    or (dec.components[x].is_2ec and len(dec.components[x].edges) >= 9)]
            if len(bigs) >= 2:
                cand = find_merge(state, segments=[seg])
                if cand is not None and apply_merge(state, cand, phase="core"):
                    progressed = True
                    break
        if progressed:
            continue
        # 4. big segment without a huge component
        for seg in view.segments:
            if len(seg) >= 5 and (L is None or L not in seg):
                cand = find_merge(state, segments=[seg])
                if cand is not None and apply_merge(state, cand, phase="core"):
                    progressed = True
                    break
        if progressed:
            continue
        # 5. another large or complex component besides L
        if L is not None:
            others = [c for c in dec.components if c.cid != L and
                      (c.tag == COMPLEX or (c.is_2ec and len(c.edges) >= 9))]
            if others:
                cand = find_merge(state)
                if cand is not None and apply_merge(state, cand, phase="core"):
                    continue
                dbl = compose_double_from_31(state, others[0].cid)
                if dbl is not None and apply_merge(state, dbl, phase="core"):
                    continue
        # 6. bridges of L get covered by short heavy cycles
        if L is not None and dec.components[L].bridges:
            if _cover_l_bridge(state, L):
                continue
        # 7. the final cycle through L's one wide segment, at most once, +2
        if L is not None and not state.plus_two_used:
            wide = [s for s in view.segments_of(L) if 3 <= len(s) <= 4]
            done = False
            for seg in wide:
                if any(x in view.cut_nodes for x in seg):
                    continue
                for cyc in _all_segment_cycles(view, seg, max_len=4):
                    if set(cyc) != set(seg):
                        continue
                    for combo in instantiate_node_cycle(view, cyc):
                        if apply_many(state, combo, (), "core", "final-plus-two",
                                      need_fewer_components=True,
                                      cost_slack=Fraction(2)):
                            state.plus_two_used = True
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                continue
        # generic merge anywhere before giving up
        cand = find_merge(state)
        if cand is not None and apply_merge(state, cand, phase="core"):
            continue
        break
    return core_square_report(state)


# ---------------------------------------------------------------------------
# final assembly
# ---------------------------------------------------------------------------

def _pendant_parts(state: ManyState, L: int) -> list[list[int]]:
    """Connected parts of the component graph after removing L (lists of
    component ids), deterministic order."""
    view = state.view()
    adj: dict[int, set[int]] = {}
    for a, b, _ in view.node_edges:
        if L in (a, b):
            continue
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    part_of: dict[int, int] = {}
    parts: list[list[int]] = []
    for c in state.dec.components:
        if c.cid == L or c.cid in part_of:
            continue
        stack = [c.cid]
        cur = [c.cid]
        part_of[c.cid] = len(parts)
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in part_of:
                    part_of[y] = len(parts)
                    cur.append(y)
                    stack.append(y)
        parts.append(sorted(cur))
    return parts


def _optimal_part_replacement(state: ManyState, L: int, part: list[int]) -> bool:
    """Glue one pendant part optimally: contract everything else and solve
    exactly; replace when the optimum is at most 5|S| - 1 edges."""
    g = state.g
    verts = set()
    for cid in part:
        verts |= state.dec.components[cid].vertices
    rest = set(range(g.n)) - verts
    contracted, _ = contract_many(g, [rest])
    try:
        sol = oracle.exact_min_2ecss(contracted, limit=state.params.oracle_limit)
    except (oracle.TooLarge, oracle.NotTwoEdgeConnected):
        return False
    opt_ids = {contracted.origin[e] for e in sol}
    opt_ids = {e for e in opt_ids
               if any(v in verts for v in g.edges[e])}
    if len(opt_ids) > 5 * len(part) - 1:
        return False
    f_i = {e for e in state.h
           if g.edges[e][0] in verts and g.edges[e][1] in verts}
    adds = tuple(sorted(opt_ids - state.h))
    removes = tuple(sorted(f_i - opt_ids))
    return apply_many(state, adds, removes, "assembly", "optimal-part",
                      strict_structure=False, cost_slack=Fraction(0))


def _stitch_part(state: ManyState, L: int, part: list[int]) -> bool:
    """Iterated Hamiltonian-path gluing of one pendant part onto L: per
    component, a connecting cycle plus one dropped component edge."""
    g = state.g
    merged_vertices = set(state.dec.components[L].vertices)
    remaining = list(part)
    adds_total: list[int] = []
    removes_total: list[int] = []
    budget = len(part)
    h_now = set(state.h)
    while remaining:
        placed = False
        for cid in list(remaining):
            comp = state.dec.components[cid]
            cross = [e for e, (u, v) in enumerate(g.edges)
                     if e not in h_now and e not in adds_total
                     and ((u in comp.vertices and v in merged_vertices)
                          or (v in comp.vertices and u in merged_vertices))]
            for e1, e2 in itertools.combinations(cross, 2):
                ends = sorted({x for e in (e1, e2) for x in g.edges[e]
                               if x in comp.vertices})
                if len(ends) != 2:
                    continue
                u, v = ends
                join = [e for e in comp.edges if set(g.edges[e]) == {u, v}]
                if not join:
                    continue
                adds_total += [e1, e2]
                removes_total.append(join[0])
                merged_vertices |= comp.vertices
                remaining.remove(cid)
                placed = True
                break
            if placed:
                break
        if not placed:
            # fall back: attach with two cross edges, no shortcut
            for cid in list(remaining):
                comp = state.dec.components[cid]
                cross = [e for e, (u, v) in enumerate(g.edges)
                         if e not in h_now and e not in adds_total
                         and ((u in comp.vertices and v in merged_vertices)
                              or (v in comp.vertices and u in merged_vertices))]
                if len(cross) >= 2:
                    adds_total += cross[:2]
                    merged_vertices |= comp.vertices
                    remaining.remove(cid)
                    placed = True
                    break
            if not placed:
                return False
    if len(adds_total) - len(removes_total) > budget:
        return False
    return apply_many(state, tuple(adds_total), tuple(removes_total),
                      "assembly", "stitch-part", strict_structure=False,
                      cost_slack=Fraction(4 * len(part), 1) * state.params.many_delta)


def run_many(g: MultiGraph, h0: set[int], params: StructuredParams,
             opt_hint: Optional[int] = None, strict: bool = True
             ) -> tuple[set[int], ManyState]:
    dec = CoverDecomposition(g, h0, params)
    led, info = build_many_ledger(dec, params, strict=strict)
    info = dict(info)
    info["h0_size"] = len(h0)
    m4, mr = info["m4"], info["mr"]
    state = ManyState(g, dec, led, params, info)
    rep = build_core_square(state)
    state.info["core_square"] = rep
    guard = len(state.dec.components) + 4
    while len(state.dec.components) > 1 and guard > 0:
        guard -= 1
        huge = [c for c in state.dec.components if c.huge]
        if huge:
            L = max(huge, key=lambda c: (len(c.vertices), -c.cid)).cid
        else:
            L = max(state.dec.components,
                    key=lambda c: (len(c.vertices), -c.cid)).cid
        parts = [p for p in _pendant_parts(state, L) if p]
        if not parts:
            raise NoProgress("disconnected component graph during assembly")
        part = parts[0]
        if _optimal_part_replacement(state, L, part):
            continue
        if not _stitch_part(state, L, part):
            raise NoProgress(f"cannot assemble part {part}")
    from .oracle import _two_ec_on
    if not _two_ec_on(g, state.h):
        raise NoProgress("assembled solution is not 2EC spanning")
    delta = params.many_delta
    state.info["bound_terms"] = {
        "m4_term": (Fraction(5, 4) - delta) * m4,
        "mr_term": Fraction(5 * mr),
    }
    if opt_hint is not None:
        bound = (Fraction(5, 4) - delta) * m4 + 5 * mr + Fraction(opt_hint, 35)
        state.info["final_bound"] = bound
        state.info["final_bound_ok"] = Fraction(len(state.h)) <= bound
    return set(state.h), state

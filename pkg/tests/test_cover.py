import itertools

import pytest

from twoec import oracle
from twoec.cover import (canonicalize, is_canonical, min_triangle_free_cover,
                         _is_triangle_free_cover)
from twoec.decomp import C4, C8, CoverDecomposition
from twoec.graph import MultiGraph
from twoec.params import desk_params

P = desk_params()


def cycle_graph(k):
    return MultiGraph(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k):
    return MultiGraph(k, list(itertools.combinations(range(k), 2)))


def test_cover_c8():
    g = cycle_graph(8)
    h, cert = min_triangle_free_cover(g)
    assert h == set(range(8)) and cert


def test_cover_k4_is_c4():
    g = complete_graph(4)
    h, _ = min_triangle_free_cover(g)
    assert len(h) == 4
    dec = CoverDecomposition(g, h, P)
    assert dec.components[0].tag == C4


def test_cover_prism():
    # two triangles + three rungs: min triangle-free cover is the 6-cycle
    g = MultiGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                       (0, 3), (1, 4), (2, 5)])
    h, _ = min_triangle_free_cover(g)
    assert len(h) == 6
    dec = CoverDecomposition(g, h, P)
    assert len(dec.components) == 1 and not dec.components[0].bridges


def test_heuristic_cover_is_feasible():
    g = complete_graph(6)
    h, cert = min_triangle_free_cover(g, mode="heuristic")
    assert _is_triangle_free_cover(g, h)
    exact, _ = min_triangle_free_cover(g, mode="exact")
    assert len(h) >= len(exact)


def test_canonicalize_removes_chord():
    # C4 plus a chord inside one component of a two-component host
    g = MultiGraph(9, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2),
                       (4, 5), (5, 6), (6, 7), (7, 8), (8, 4),
                       (1, 4), (3, 6)])
    h0 = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}   # C4 + chord + C5
    assert _is_triangle_free_cover(g, h0)
    h, dec, steps = canonicalize(g, h0, P)
    assert len(h) == len(h0) - 1
    assert steps >= 1
    assert 4 not in h      # the chord 0-2


def test_canonicalize_merges_two_c4s():
    # two C4s joined in G by two edges allowing a C8 rewiring
    edges = [(0, 1), (1, 2), (2, 3), (3, 0),
             (4, 5), (5, 6), (6, 7), (7, 4),
             (0, 4), (1, 5),
             (2, 6)]
    g = MultiGraph(8, edges)
    h0 = set(range(8))
    h, dec, steps = canonicalize(g, h0, P)
    assert len(h) == 8
    assert len(dec.components) == 1
    assert dec.components[0].tag == C8


def test_canonicalize_fixed_point():
    g = cycle_graph(8)
    h0 = set(range(8))
    h, dec, steps = canonicalize(g, h0, P)
    assert h == h0 and steps == 0


def test_is_canonical_reports():
    g = cycle_graph(9)
    rep = is_canonical(g, set(range(9)), P)
    assert rep.clauses["non_complex_shape"]
    assert rep.clauses["huge_component"]   # 9 vertices >= desk huge threshold
    assert rep.ok


def test_is_canonical_flags_mergeable_c4s():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0),
             (4, 5), (5, 6), (6, 7), (7, 4),
             (0, 4), (1, 5)]
    g = MultiGraph(8, edges)
    rep = is_canonical(g, set(range(8)), P)
    assert not rep.clauses["no_mergeable_c4_pair"]
    assert "no_mergeable_c4_pair" in rep.witnesses


def test_is_canonical_flags_bad_pendant():
    # complex component: a C4 pendant block attached by a bridge to a C9
    edges = ([(i, (i + 1) % 9) for i in range(9)] +         # C9 block 0..8
             [(8, 9)] +                                     # bridge
             [(9, 10), (10, 11), (11, 12), (12, 9)] +       # C4 block
             [(10, 0), (12, 4)])                            # host-only edges
    g = MultiGraph(13, edges)
    h = set(range(14))
    rep = is_canonical(g, h, P)
    assert not rep.clauses["pendant_blocks"]


def test_weakly_canonical_allows_rich_vertices():
    g = MultiGraph(7, [(0, 1), (1, 2), (2, 0),
                       (0, 3), (3, 4),
                       (4, 5), (5, 6), (6, 4)])
    h = {0, 1, 2, 5, 6, 7}
    rep_strict = is_canonical(g, h, P, rich_vertices={3}, weak=False)
    rep_weak = is_canonical(g, h, P, rich_vertices={3}, weak=True)
    assert not rep_strict.clauses["two_edge_cover"]
    assert rep_weak.clauses["two_edge_cover"]


def test_subdivision_fixes_edges_into_covers():
    from twoec.gadgets import fix_edges_by_subdivision
    from twoec.oracle import exact_min_cover
    g = complete_graph(5)
    fixed = fix_edges_by_subdivision(g, {0, 1})
    assert fixed.n == g.n + 2
    cover = exact_min_cover(fixed, {3})
    mids = set(range(g.n, fixed.n))
    for e, (u, v) in enumerate(fixed.edges):
        if u in mids or v in mids:
            assert e in cover

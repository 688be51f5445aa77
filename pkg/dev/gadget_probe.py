"""Bounded search for leaf-replacement gadgets hitting the (dw, dOmega) contracts."""
import heapq
import itertools
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links import errors, moves
from thompson_links.diagram import (
    Diagram, OrientedDiagram, canonical_code, canonical_orientation,
    isomorphism, map_half_edge,
)
from thompson_links.trees import (
    TreePair, parse_pair, trees_with_leaves, graft, leaf_count,
    enumerate_elements,
)
from thompson_links.construction import link_of, in_oriented_subgroup, orient_by_shading
from thompson_links.invariants import wcu, whitney_index

X0 = parse_pair("((..).)|(.(..))")
X1 = parse_pair("(.((..).))|(.(.(..)))")
LEAF = None


def insert_at_leaf(pair, i, s_top, s_bot):
    n = pair.leaf_count
    subs_t = [LEAF] * n
    subs_b = [LEAF] * n
    subs_t[i] = s_top
    subs_b[i] = s_bot
    out = TreePair(graft(pair.top, subs_t), graft(pair.bottom, subs_b))
    return out if out.is_reduced() else None


def bfs_reduce(d2, target_code, max_pops=4000):
    """Shortest removal-only (R1-/R2-) path from d2 to a diagram with target_code."""
    start = canonical_code(d2)
    if start == target_code:
        return []
    seen = {start}
    counter = itertools.count()
    heap = [(len(d2.crossings), next(counter), d2, [])]
    pops = 0
    while heap:
        _, _, d, path = heapq.heappop(heap)
        pops += 1
        if pops > max_pops:
            return None
        for kind in ("R1-", "R2-"):
            for site in moves.enumerate_sites(d, kind):
                try:
                    out = moves.apply_move(d, moves.MoveRecord(kind, site))
                except errors.LinkError:
                    continue
                code = canonical_code(out.diagram)
                if code == target_code:
                    return path + [out]
                if code in seen:
                    continue
                seen.add(code)
                heapq.heappush(
                    heap,
                    (len(out.diagram.crossings), next(counter), out.diagram, path + [out]),
                )
    return None


def comp_pairing(dm, d1, iso):
    pair = {}
    for j, comp in enumerate(dm.components()):
        aid = comp[0]
        if aid < 0:
            return None  # leftover loop: not the L-image
        h = dm.arc_ends(aid)[0]
        h1 = map_half_edge(iso, h)
        pair[j] = d1.component_of(d1.arc_id(h1))
    return pair


def reverse_component(od, comp_index):
    d = od.diagram
    arcs = d.components()[comp_index]
    head = dict(od.head)
    for aid in arcs:
        if aid < 0:
            continue
        e1, e2 = d.arc_ends(aid)
        head[aid] = e1 if head[aid] == e2 else e2
    return OrientedDiagram(d, head, dict(od.loop_ccw))


def measure(g, i, s_top, s_bot, flip_leaf_comp=False):
    """(dw, dOmega) on the leaf component, locality flags, direction label."""
    g2 = insert_at_leaf(g, i, s_top, s_bot)
    if g2 is None:
        return None
    d1 = link_of(g)
    d2 = link_of(g2)
    aid_leaf = d1.build_info["leaf_arc"][i]
    comp1 = d1.component_of(aid_leaf)

    path = bfs_reduce(d2, canonical_code(d1))
    if path is None:
        return None
    dm = path[-1].diagram if path else d2
    iso = isomorphism(dm, d1) if dm is not d2 else {c: (c, 0) for c in d1.crossings}
    if iso is None:
        return None
    pair_md = comp_pairing(dm, d1, iso)
    if pair_md is None:
        return None

    od2 = canonical_orientation(d2)
    # follow the affected component backwards to flip its direction at the source
    cm = {}
    for j2 in range(len(d2.components())):
        j = j2
        for out in path:
            j = out.component_map[j]
        cm[j2] = pair_md[j]
    if flip_leaf_comp:
        (j2_leaf,) = [j2 for j2, j1 in cm.items() if j1 == comp1]
        od2 = reverse_component(od2, j2_leaf)

    odm = od2
    for out in path:
        odm = out.orient(odm)
    head1 = {}
    for aid in dm.arc_ids():
        h1 = map_half_edge(iso, odm.head[aid])
        head1[d1.arc_id(h1)] = h1
    od1 = OrientedDiagram(d1, head1, {})

    w1 = wcu(od1)
    w2 = wcu(od2)
    deltas = {}
    for j2, j1 in cm.items():
        dw = w2[j2][0] - w1[j1][0]
        domega = whitney_index(od2, j2) - whitney_index(od1, j1)
        deltas[j1] = (dw, domega)
    up = (d1.arc_ends(aid_leaf)[0] >> 2) % 2 == 0  # head end at a top caret?
    h_head = od1.head[aid_leaf]
    up = (h_head >> 2) % 2 == 0
    local_ok = all(v == (0, 0) for j1, v in deltas.items() if j1 != comp1)
    return {
        "delta": deltas[comp1],
        "dir": "up" if up else "down",
        "local": local_ok,
        "cert_len": len(path),
        "g2": g2,
    }


def candidates(ks=(3, 4)):
    for k in ks:
        for st in trees_with_leaves(k):
            for sb in trees_with_leaves(k):
                if TreePair(st, sb).is_reduced():
                    yield k, st, sb


def main():
    from thompson_links.trees import emit_tree

    ks = tuple(int(a) for a in sys.argv[1:]) or (3, 4)
    host, leaf = X0, 1
    rows = []
    done = 0
    for k, st, sb in candidates(ks):
        done += 1
        if done % 25 == 0:
            print(f"... {done} candidates probed", file=sys.stderr)
        r_fwd = measure(host, leaf, st, sb, flip_leaf_comp=False)
        if r_fwd is None or not r_fwd["local"]:
            continue
        r_rev = measure(host, leaf, st, sb, flip_leaf_comp=True)
        if r_rev is None or not r_rev["local"]:
            continue
        shape = {r_fwd["dir"]: r_fwd["delta"], r_rev["dir"]: r_rev["delta"]}
        interesting = any(d in ((2, 0), (-2, 0), (0, 2), (0, -2)) for d in shape.values())
        if interesting:
            rows.append((k, emit_tree(st), emit_tree(sb), shape, r_fwd["cert_len"]))
    print(f"{len(rows)} contract-shaped candidates:")
    for row in rows:
        print(" ", row)


if __name__ == "__main__":
    main()

"""Structural delta measurement: match components across an insertion by
the leaf arcs that the insertion does not touch, no move path needed."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links.trees import TreePair, parse_pair, parse_tree, trees_with_leaves, enumerate_elements
from thompson_links.construction import link_of, in_oriented_subgroup, orient_by_shading
from thompson_links.invariants import wcu, whitney_index
from thompson_links.diagram import canonical_orientation
from gadget_probe import insert_at_leaf

PRESERVERS = [
    ("P4a", "((.(..)).)", "(.(.(..)))"),
    ("P4b", "(.(.(..)))", "((.(..)).)"),
]

P5 = [
    ("(((.(..)).).)", "((.(.(..))).)"),
    ("(((.(..)).).)", "(.(.((..).)))"),
    ("((.(.(..))).)", "(((.(..)).).)"),
    ("((.(..))(..))", "(.((.(..)).))"),
    ("(.((.(..)).))", "((.(..))(..))"),
    ("(.((.(..)).))", "(.(.(.(..))))"),
    ("(.(.((..).)))", "(((.(..)).).)"),
    ("(.(.(.(..))))", "(.((.(..)).))"),
]


def arc_dir_up(d, aid):
    """True if the canonical head of arc aid sits at a top caret."""
    return None  # direction is orientation-dependent; handled inline


def measure_structural(g, i, st, sb, oriented=False):
    """(delta on leaf component, direction, locality) or a skip reason."""
    g2 = insert_at_leaf(g, i, st, sb)
    if g2 is None:
        return "unreduced"
    if oriented and not in_oriented_subgroup(g2):
        return "leaves F-vec"
    d1, d2 = link_of(g), link_of(g2)
    k = TreePair(st, sb).leaf_count
    n = g.leaf_count
    la1, la2 = d1.build_info["leaf_arc"], d2.build_info["leaf_arc"]
    comps1, comps2 = d1.components(), d2.components()

    def comp_of(d, comps, aid):
        for ci, arcs in enumerate(comps):
            if aid in arcs:
                return ci
        raise AssertionError

    pairing = {}
    for j in range(n):
        if j == i:
            continue
        j2 = j if j < i else j + k - 1
        c1 = comp_of(d1, comps1, la1[j])
        c2 = comp_of(d2, comps2, la2[j2])
        if pairing.setdefault(c1, c2) != c2:
            return "inconsistent leaf pairing"
    un1 = [c for c in range(len(comps1)) if c not in pairing]
    un2 = [c for c in range(len(comps2)) if c not in pairing.values()]
    if len(un1) != len(un2) or len(un1) > 1:
        return f"unmatched components {un1} {un2}"
    if un1:
        pairing[un1[0]] = un2[0]
    if len(comps1) != len(comps2):
        return "component count changed"

    if oriented:
        od1, od2 = orient_by_shading(d1), orient_by_shading(d2)
    else:
        od1, od2 = canonical_orientation(d1), canonical_orientation(d2)
    # align orientations: shared leaf arcs must run the same way
    flip2 = set()
    for j in range(n):
        if j == i:
            continue
        j2 = j if j < i else j + k - 1
        up1 = (od1.head[la1[j]] >> 2) % 2 == 0
        up2 = (od2.head[la2[j2]] >> 2) % 2 == 0
        if up1 != up2:
            flip2.add(comp_of(d2, comps2, la2[j2]))
    if oriented and flip2:
        return f"shading direction conflict on comps {sorted(flip2)}"
    if flip2:
        head2 = dict(od2.head)
        for ci in flip2:
            for aid in comps2[ci]:
                head2[aid] = d2.theta[head2[aid]]
        loop2 = {l: (not s if ci_of_loop(d2, comps2, l) in flip2 else s)
                 for l, s in od2.loop_ccw.items()} if od2.loop_ccw else {}
        od2 = type(od2)(d2, head2, loop2)
    # a flip decided by one shared leaf must satisfy all of them
    for j in range(n):
        if j == i:
            continue
        j2 = j if j < i else j + k - 1
        up1 = (od1.head[la1[j]] >> 2) % 2 == 0
        up2 = (od2.head[la2[j2]] >> 2) % 2 == 0
        if up1 != up2:
            return "alignment conflict"

    w1, w2 = wcu(od1), wcu(od2)
    c1_leaf = comp_of(d1, comps1, la1[i])
    c2_leaf = pairing[c1_leaf]
    anchored = c1_leaf in {comp_of(d1, comps1, la1[j]) for j in range(n) if j != i}
    deltas = {}
    for a, b in pairing.items():
        deltas[a] = (w2[b][0] - w1[a][0],
                     whitney_index(od2, b) - whitney_index(od1, a))
    up = (od1.head[la1[i]] >> 2) % 2 == 0
    local = all(v == (0, 0) for a, v in deltas.items() if a != c1_leaf)
    return {"delta": deltas[c1_leaf], "dir": "up" if up else "down",
            "local": local, "anchored": anchored}


def ci_of_loop(d, comps, label):
    for ci, arcs in enumerate(comps):
        if label in arcs:
            return ci
    raise AssertionError


def main():
    x0 = parse_pair("((..).)|(.(..))")
    cands = [("P4a", "((.(..)).)", "(.(.(..)))"), ("P4b", "(.(.(..)))", "((.(..)).)")]
    cands += [(f"P5{chr(97+j)}", a, b) for j, (a, b) in enumerate(P5)]
    for name, st_s, sb_s in cands:
        st, sb = parse_tree(st_s), parse_tree(sb_s)
        out = {}
        for i in (0, 1, 2):
            out[i] = measure_structural(x0, i, st, sb)
        print(name, st_s, "|", sb_s)
        for i, r in out.items():
            print("   leaf", i, r)


if __name__ == "__main__":
    main()

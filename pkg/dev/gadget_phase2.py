"""Validate gadget candidates across hosts; find the F-vec-preserving ones."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links.trees import TreePair, parse_pair, parse_tree, enumerate_elements
from thompson_links.construction import link_of, in_oriented_subgroup, orient_by_shading
from thompson_links.invariants import wcu, whitney_index
from thompson_links.diagram import canonical_code, isomorphism, map_half_edge
from gadget_probe import insert_at_leaf, bfs_reduce, comp_pairing, measure

X0 = parse_pair("((..).)|(.(..))")
X1 = parse_pair("(.((..).))|(.(.(..)))")

W_CANDS = [
    ("W-", "(((..).).)", "(.(.(..)))"),
    ("W+", "(.(.(..)))", "(((..).).)"),
]
O_CANDS = [
    ("O1", "((((..).).).)", "(.((.(..)).))"),
    ("O2", "(((..)(..)).)", "(.(((..).).))"),
    ("O3", "((.(.(..))).)", "(.((..)(..)))"),
    ("O4", "((..)((..).))", "(.(.(.(..))))"),
    ("O5", "(.(((..).).))", "(((..)(..)).)"),
    ("O6", "(.((.(..)).))", "((((..).).).)"),
    ("O7", "(.(.((..).)))", "((..)(.(..)))"),
    ("O8", "(.(.(.(..))))", "((.((..).)).)"),
]


def shading_delta(g, i, st, sb):
    """Deltas measured in each diagram's own shading orientation; F-vec flags."""
    g2 = insert_at_leaf(g, i, st, sb)
    if g2 is None:
        return None
    if not in_oriented_subgroup(g2):
        return {"oriented": False}
    d1, d2 = link_of(g), link_of(g2)
    aid_leaf = d1.build_info["leaf_arc"][i]
    comp1 = d1.component_of(aid_leaf)
    path = bfs_reduce(d2, canonical_code(d1))
    if path is None:
        return None
    dm = path[-1].diagram if path else d2
    iso = isomorphism(dm, d1) if dm is not d2 else {c: (c, 0) for c in d1.crossings}
    pair_md = comp_pairing(dm, d1, iso)
    cm = {}
    for j2 in range(len(d2.components())):
        j = j2
        for out in path:
            j = out.component_map[j]
        cm[j2] = pair_md[j]
    od1 = orient_by_shading(d1)
    od2 = orient_by_shading(d2)
    w1, w2 = wcu(od1), wcu(od2)
    deltas = {}
    for j2, j1 in cm.items():
        deltas[j1] = (
            w2[j2][0] - w1[j1][0],
            whitney_index(od2, j2) - whitney_index(od1, j1),
        )
    up = (od1.head[aid_leaf] >> 2) % 2 == 0
    return {
        "oriented": True,
        "delta": deltas[comp1],
        "dir": "up" if up else "down",
        "local": all(v == (0, 0) for j, v in deltas.items() if j != comp1),
    }


def main():
    hosts = [g for g in enumerate_elements(5) if g.leaf_count > 1 and in_oriented_subgroup(g)]
    print(f"{len(hosts)} F-vec hosts with 2..5 leaves")

    for name, st_s, sb_s in O_CANDS:
        st, sb = parse_tree(st_s), parse_tree(sb_s)
        verdicts = []
        ok = True
        for g in hosts:
            for i in range(g.leaf_count):
                r = shading_delta(g, i, st, sb)
                if r is None:
                    verdicts.append((g.emit(), i, "skip/unreduced-or-nopath"))
                    continue
                if not r["oriented"]:
                    ok = False
                    verdicts.append((g.emit(), i, "leaves F-vec"))
                    break
                if not r["local"]:
                    ok = False
                    verdicts.append((g.emit(), i, f"nonlocal {r}"))
                    break
                verdicts.append((g.emit(), i, r["dir"], r["delta"]))
            if not ok:
                break
        print(name, "F-vec-preserving:" if ok else "REJECTED:", verdicts[-1])
        if ok:
            ups = {v[3] for v in verdicts if len(v) == 4 and v[2] == "up"}
            downs = {v[3] for v in verdicts if len(v) == 4 and v[2] == "down"}
            print("   up deltas:", ups, "down deltas:", downs,
                  "sites:", len([v for v in verdicts if len(v) == 4]))


if __name__ == "__main__":
    main()

"""Which leaf-replacement pairs preserve the bipartite shading property?"""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links.trees import TreePair, parse_pair, trees_with_leaves, enumerate_elements
from thompson_links.construction import in_oriented_subgroup
from gadget_probe import insert_at_leaf, measure

def main():
    hosts = [g for g in enumerate_elements(5) if g.leaf_count > 1 and in_oriented_subgroup(g)]
    sites = [(g, i) for g in hosts for i in range(g.leaf_count)]
    print(f"{len(hosts)} hosts, {len(sites)} sites")

    keepers = []
    for k in (3, 4, 5):
        ts = trees_with_leaves(k)
        n_pairs = n_red = 0
        for st in ts:
            for sb in ts:
                n_pairs += 1
                if not TreePair(st, sb).is_reduced():
                    continue
                n_red += 1
                ok = True
                any_insert = False
                for g, i in sites:
                    g2 = insert_at_leaf(g, i, st, sb)
                    if g2 is None:
                        continue
                    any_insert = True
                    if not in_oriented_subgroup(g2):
                        ok = False
                        break
                if ok and any_insert:
                    keepers.append((k, st, sb))
        print(f"k={k}: {n_pairs} pairs, {n_red} reduced, keepers so far {len(keepers)}")

    for k, st, sb in keepers:
        print("PRESERVES:", k, st.emit() if hasattr(st, "emit") else st, "|",
              sb.emit() if hasattr(sb, "emit") else sb)
    if not keepers:
        print("NO single-leaf replacement preserves the shading property")
        return

    # measure deltas of survivors on x0 at leaf 1, both directions
    x0 = parse_pair("((..).)|(.(..))")
    for k, st, sb in keepers:
        rs = {}
        for flip in (False, True):
            r = measure(x0, 1, st, sb, flip_leaf_comp=flip)
            if r is None:
                rs["flip" if flip else "plain"] = None
            else:
                rs[r["dir"]] = r["delta"] if r["local"] else ("NONLOCAL", r["delta"])
        print("DELTA:", st.emit() if hasattr(st, "emit") else st, "|",
              sb.emit() if hasattr(sb, "emit") else sb, rs)

if __name__ == "__main__":
    main()

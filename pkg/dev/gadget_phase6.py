"""Definitive structural sweep: true local deltas for all pairs k=3..6,
classified into W / Omega / OR-Omega candidate lists."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links.trees import TreePair, parse_pair, trees_with_leaves, enumerate_elements, emit_tree
from thompson_links.construction import in_oriented_subgroup
from gadget_probe import insert_at_leaf
from gadget_phase4 import measure_structural

def main():
    ks = [int(a) for a in sys.argv[1:]] or [3, 4, 5, 6]
    x0 = parse_pair("((..).)|(.(..))")
    hosts = [g for g in enumerate_elements(5) if g.leaf_count > 1 and in_oriented_subgroup(g)]
    sites = [(g, i) for g in hosts for i in range(g.leaf_count)]

    for k in ks:
        ts = trees_with_leaves(k)
        hits = []
        n_red = 0
        for st in ts:
            for sb in ts:
                if not TreePair(st, sb).is_reduced():
                    continue
                n_red += 1
                r = measure_structural(x0, 1, st, sb)
                if not isinstance(r, dict):
                    continue
                if not (r["local"] and r["anchored"]):
                    continue
                if r["delta"] in ((2, 0), (-2, 0), (0, 2), (0, -2)):
                    hits.append((st, sb, r["delta"], r["dir"]))
        print(f"k={k}: {n_red} reduced pairs, {len(hits)} contract-shaped", flush=True)
        for st, sb, delta, d in hits:
            ok = True
            tested = 0
            for g, i in sites:
                g2 = insert_at_leaf(g, i, st, sb)
                if g2 is None:
                    continue
                tested += 1
                if not in_oriented_subgroup(g2):
                    ok = False
                    break
            tag = "OR" if ok and tested else "--"
            print(f"  {tag} {emit_tree(st)} | {emit_tree(sb)}  delta={delta} dir={d}", flush=True)


if __name__ == "__main__":
    main()

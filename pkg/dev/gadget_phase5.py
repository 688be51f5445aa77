"""k=6 sweep for shading-preserving Omega gadgets, structural measurement."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links.trees import TreePair, parse_pair, trees_with_leaves, enumerate_elements
from thompson_links.construction import in_oriented_subgroup
from gadget_probe import insert_at_leaf
from gadget_phase4 import measure_structural

def main():
    k = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    x0 = parse_pair("((..).)|(.(..))")
    ts = trees_with_leaves(k)
    n_red = 0
    shape_ok = []
    for st in ts:
        for sb in ts:
            if not TreePair(st, sb).is_reduced():
                continue
            n_red += 1
            r = measure_structural(x0, 1, st, sb)
            if isinstance(r, dict) and r["local"] and r["anchored"] and r["delta"] in ((0, 2), (0, -2)):
                shape_ok.append((st, sb, r["delta"], r["dir"]))
    print(f"k={k}: {n_red} reduced pairs, {len(shape_ok)} with delta (0,+-2) at x0 leaf 1", flush=True)

    hosts = [g for g in enumerate_elements(5) if g.leaf_count > 1 and in_oriented_subgroup(g)]
    sites = [(g, i) for g in hosts for i in range(g.leaf_count)]
    winners = []
    for st, sb, delta, d in shape_ok:
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
        if ok and tested:
            winners.append((st, sb, delta, d, tested))
    print(f"{len(winners)} preserve the shading property at all {len(sites)} sites")
    from thompson_links.trees import emit_tree
    for st, sb, delta, d, tested in winners:
        print("OR-CAND:", emit_tree(st), "|", emit_tree(sb), "x0@1 delta", delta, d, f"({tested} sites)")


if __name__ == "__main__":
    main()

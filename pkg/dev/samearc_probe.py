"""Probe which same-arc push wirings are planar, and round-trip the survivors."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thompson_links import errors, moves
from thompson_links.diagram import Diagram, canonical_orientation, canonical_code
from thompson_links.trees import parse_pair
from thompson_links.construction import link_of

X0 = parse_pair("((..).)|(.(..))")
X1 = parse_pair("(.((..).))|(.(.(..)))")


def hosts():
    yield "kinked", Diagram((0,), {2: 3, 3: 2, 0: 1, 1: 0}, {0: 1}, outer=2)
    yield "L(x0)", link_of(X0)
    yield "L(x1)", link_of(X1)
    yield "L(x0x1)", link_of(X0 * X1)


def probe():
    rule = {}
    for name, d in hosts():
        od = canonical_orientation(d)
        arcs = sorted(a for a in d.arc_ids() if a >= 0)
        for a in arcs:
            e1, e2 = d.arc_ends(a)
            for p, q in ((e1, e2), (e2, e1)):
                for form in ("X", "N"):
                    for ov in (False, True):
                        rec = moves.MoveRecord("R2+", (p, q, ov, form))
                        try:
                            out = moves.apply_move(d, rec)
                        except errors.NonPlanar:
                            status = "nonplanar"
                        except errors.ValidationError as e:
                            status = f"invalid: {e}"
                        except errors.BadSite as e:
                            status = f"badsite: {e}"
                        else:
                            mid = out.orient(od)
                            back = moves.apply_move(out.diagram, out.inverse)
                            fin = back.orient(mid)
                            ok_d = back.diagram == d
                            ok_o = fin.head == od.head and fin.loop_ccw == od.loop_ccw
                            # does removing the fresh bigon name the same site?
                            redo = moves.apply_move(out.diagram, out.inverse)
                            inv2 = redo.inverse
                            ok_site = inv2.site == rec.site
                            status = f"planar rt={'OK' if (ok_d and ok_o) else 'FAIL'} re-site={'OK' if ok_site else inv2.site}"
                        key = ("p<q" if p < q else "p>q", form)
                        if status.startswith("planar"):
                            rule.setdefault(key, []).append((name, a, ov, status))
                        if not status.startswith(("nonplanar",)):
                            print(f"{name:9s} arc{a:3d} ({p:3d},{q:3d}) {form} ov={int(ov)}: {status}")
    print()
    for key in sorted(rule):
        entries = rule[key]
        bad = [e for e in entries if "FAIL" in e[3] or "re-site" in e[3] and "OK" not in e[3]]
        print(f"{key}: {len(entries)} planar, failures: {bad[:4]}")


if __name__ == "__main__":
    probe()

"""Round-trip and invariance smoke tests for the move engine."""

import sys

sys.path.insert(0, "/root/pkg/src")

from thompson_links import errors, invariants, moves
from thompson_links.construction import link_of
from thompson_links.diagram import canonical_code, canonical_orientation
from thompson_links.trees import parse_pair

X0 = parse_pair("((..).)|(.(..))")
X1 = parse_pair("(.((..).))|(.(.(..)))")

EXACT_KINDS = {"R1+", "R2+", "R3"}  # inverse replays restore exact labels


def od_equal(od1, od2):
    return (
        od1.diagram == od2.diagram
        and od1.head == od2.head
        and od1.loop_ccw == od2.loop_ccw
    )


def roundtrip_all(d, od, kind, limit=None):
    """Apply every enumerated site of `kind`, then its inverse; demand the
    original diagram back up to plane isomorphism (exactly, for creation
    and slide moves) with the orientation transported back intact."""
    sites = moves.enumerate_sites(d, kind)
    if limit:
        sites = sites[:limit]
    code0 = canonical_code(d, od)
    ident = tuple((i, i) for i in range(len(d.components())))
    n_ok = 0
    for site in sites:
        out = moves.apply_move(d, moves.MoveRecord(kind, site))
        mid_od = out.orient(od)
        back = moves.apply_move(out.diagram, out.inverse)
        fin_od = back.orient(mid_od)
        assert canonical_code(back.diagram, fin_od) == code0, (kind, site, "oriented code mismatch")
        if kind in EXACT_KINDS:
            assert back.diagram == d, (kind, site, "exact diagram mismatch")
            assert od_equal(fin_od, od), (kind, site, "exact orientation mismatch")
        cert = moves.MoveCertificate((out.record, out.inverse), ident)
        res = moves.verify_certificate(d, cert, d)
        assert res.ok, (kind, site, "verify failed", res.reason)
        n_ok += 1
    return n_ok


def invariance_spot(d, od):
    """alpha/gamma/w/u across R2/R3; beta/cw across all kinds."""
    a0 = invariants.abg(d)
    w0 = invariants.wcu(od)
    for kind in moves.KINDS:
        for site in moves.enumerate_sites(d, kind)[:40]:
            out = moves.apply_move(d, moves.MoveRecord(kind, site))
            od2 = out.orient(od)
            a1 = invariants.abg(out.diagram)
            w1 = invariants.wcu(od2)
            cm = out.component_map
            for i, j in cm.items():
                assert a0[i][1] == a1[j][1], (kind, site, "beta moved")
                assert w0[i][1] == w1[j][1], (kind, site, "cw moved")
                if not kind.startswith("R1"):
                    assert a0[i][0] == a1[j][0], (kind, site, "alpha moved")
                    assert a0[i][2] == a1[j][2], (kind, site, "gamma moved")
                    assert w0[i][0] == w1[j][0], (kind, site, "w moved")
                    assert w0[i][2] == w1[j][2], (kind, site, "u moved")


def bracket_spot(d):
    from thompson_links.invariants import kauffman_bracket as bracket
    from thompson_links.laurent import A, A_INV

    b0 = bracket(d)
    for site in moves.enumerate_sites(d, "R2-")[:10]:
        out = moves.apply_move(d, moves.MoveRecord("R2-", site))
        assert bracket(out.diagram) == b0, ("R2- bracket moved", site)
    for site in moves.enumerate_sites(d, "R3")[:10]:
        out = moves.apply_move(d, moves.MoveRecord("R3", site))
        assert bracket(out.diagram) == b0, ("R3 bracket moved", site)
    for site in moves.enumerate_sites(d, "R1-")[:10]:
        out = moves.apply_move(d, moves.MoveRecord("R1-", site))
        b1 = bracket(out.diagram)
        a3 = A ** 3
        ai3 = A_INV ** 3
        assert b0 in (-(a3) * b1, -(ai3) * b1), ("R1- bracket factor wrong", site)


def main():
    pairs = [X0, X1, X0 * X1, X0 * X0, (X0 * X1) * X0, X0 * (X1 * X1)]
    total = {k: 0 for k in moves.KINDS}
    for g in pairs:
        d = link_of(g)
        od = canonical_orientation(d)
        for kind in moves.KINDS:
            total[kind] += roundtrip_all(d, od, kind, limit=150)
        invariance_spot(d, od)
        bracket_spot(d)
    print("round-trips by kind:", total)
    for k in ("R1+", "R2+", "R2-"):
        assert total[k] > 0, f"no {k} sites exercised"
    if total["R3"] == 0:
        print("NOTE: no R3 sites in this corpus slice")
    print("invariance + bracket spot checks passed")
    print("kinked R1- round-trips:", kinked_r1_minus(pairs[:3]))
    print("loop-anchored cases:", loop_anchor_cases())
    print("closed self-push cases:", closed_self_push())
    print("same-arc sites round-tripped:", same_arc_scan())


def kinked_r1_minus(pairs):
    """R1- enumerated on kinked diagrams (L(g) has no native curls)."""
    n = 0
    for g in pairs:
        d = link_of(g)
        od = canonical_orientation(d)
        for site in moves.enumerate_sites(d, "R1+")[:6]:
            out = moves.apply_move(d, moves.MoveRecord("R1+", site))
            od2 = out.orient(od)
            n += roundtrip_all(out.diagram, od2, "R1-", limit=20)
    assert n > 0, "no R1- sites exercised"
    return n


def loop_anchor_cases():
    """Loop-anchored R1+/R2+ and the degenerate R2- inverses."""
    from thompson_links.diagram import Diagram, OrientedDiagram

    # loop-only host: kink a free circle, push two circles together
    d0 = Diagram((), {}, {}, free_loops=(-1,))
    od0 = OrientedDiagram(d0, {}, {-1: True})
    n = 0
    for side in ("L", "R"):
        for of in (False, True):
            for ccw in (True, False):
                od0v = OrientedDiagram(d0, {}, {-1: ccw})
                out = moves.apply_move(d0, moves.MoveRecord("R1+", (("loop", -1), side, of)))
                mid = out.orient(od0v)
                back = moves.apply_move(out.diagram, out.inverse)
                fin = back.orient(mid)
                assert back.diagram == d0, (side, of, ccw, "loop kink not restored")
                assert od_equal(fin, od0v), (side, of, ccw, "loop sense not restored")
                n += 1

    d2 = Diagram((), {}, {}, free_loops=(-1, -2))
    for ov in (False, True):
        for s1 in (True, False):
            for s2 in (True, False):
                od2 = OrientedDiagram(d2, {}, {-1: s1, -2: s2})
                rec = moves.MoveRecord("R2+", (("loop", -1), ("loop", -2), ov))
                out = moves.apply_move(d2, rec)
                mid = out.orient(od2)
                back = moves.apply_move(out.diagram, out.inverse)
                fin = back.orient(mid)
                assert back.diagram == d2, (ov, "two-loop push not undone")
                # pulling apart relabels the circles (fresh labels in cycle
                # order), so senses are matched through the composed map
                comp = {i: back.component_map[j] for i, j in out.component_map.items()}
                oc, nc = d2.components(), back.diagram.components()
                for i, j in comp.items():
                    want = od2.loop_ccw[oc[i][0]]
                    got = fin.loop_ccw[nc[j][0]]
                    assert want == got, (ov, s1, s2, i, j, "sense lost in map")
                n += 1

    # one loop against a diagram arc, both ways
    base = link_of(X0)
    odb = canonical_orientation(base)
    dl = Diagram(base.crossings, base.theta, base.over, (-1,), outer=base.outer)
    for ccw in (True, False):
        odl = OrientedDiagram(dl, odb.head, {-1: ccw})
        qs = sorted(dl.theta)[:4]
        for q in qs:
            for ov in (False, True):
                for site in ((("loop", -1), q, ov), (q, ("loop", -1), ov)):
                    out = moves.apply_move(dl, moves.MoveRecord("R2+", site))
                    mid = out.orient(odl)
                    back = moves.apply_move(out.diagram, out.inverse)
                    fin = back.orient(mid)
                    assert back.diagram == dl, (site, "loop push not undone")
                    assert od_equal(fin, odl), (site, "loop push orientation broken")
                    n += 1
    return n


def closed_self_push():
    """A circle poked across itself: pulling it apart leaves one loop and
    records a self-push inverse that creation honestly refuses."""
    from thompson_links.diagram import Diagram, OrientedDiagram

    theta = {3: 7, 7: 3, 4: 2, 2: 4, 5: 6, 6: 5, 0: 1, 1: 0}
    for sel in (0, 1):
        over = {0: sel, 1: sel}
        d = Diagram((0, 1), theta, over, outer=1)  # face (1,3,6,4) outside
        od = canonical_orientation(d)
        sites = moves.enumerate_sites(d, "R2-")
        assert sites == [(2,)], sites
        out = moves.apply_move(d, moves.MoveRecord("R2-", (2,)))
        assert out.diagram.free_loops == (-1,)
        assert not out.diagram.crossings
        assert out.inverse.kind == "R2+"
        assert out.inverse.site[0] == ("loop", -1) and out.inverse.site[1] == ("loop", -1)
        assert out.inverse.site[3] == "N"
        fin = out.orient(od)
        assert fin.loop_ccw[-1] in (True, False)
        try:
            moves.apply_move(out.diagram, out.inverse)
        except errors.BadSite:
            pass
        else:
            raise AssertionError("self-push creation should refuse")
    return 2


def same_arc_scan():
    """Find natural same-arc push sites in small diagrams and round-trip
    them (enumerate_sites already lists the 4-tuple forms)."""
    from thompson_links.trees import enumerate_elements

    found = 0
    for g in enumerate_elements(5):
        d = link_of(g)
        od = canonical_orientation(d)
        sites = [s for s in moves.enumerate_sites(d, "R2+") if len(s) == 4]
        for site in sites[:8]:
            out = moves.apply_move(d, moves.MoveRecord("R2+", site))
            mid = out.orient(od)
            back = moves.apply_move(out.diagram, out.inverse)
            fin = back.orient(mid)
            assert back.diagram == d, (g.emit(), site, "same-arc push not undone")
            assert od_equal(fin, od), (g.emit(), site, "same-arc orientation broken")
            found += 1
    return found


if __name__ == "__main__":
    main()

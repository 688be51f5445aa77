"""Leaf-arc normalization and per-component invariant matching.

A component with no leaf-arc never runs over a crossing, so it cannot
host the invariant-shifting tangles of the gadget module.
``leaf_arc_move`` repairs that with two second-Reidemeister pushes that
keep the component's strand on top: the strand picks up four over
passages, cutting it into pieces of which three are new leaf-arcs.  The
surgered diagram is recognized back as a constructed diagram, which both
yields the new group element and guards the move's correctness.
``match_regular_class`` then drives each component's (writhe, Whitney
index) pair onto requested values by repeated gadget insertion.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from . import errors
from .construction import (
    from_diagram,
    in_oriented_subgroup,
    link_of,
    orient_by_shading,
)
from .diagram import (
    Diagram,
    OrientedDiagram,
    canonical_orientation,
    isomorphism,
    map_half_edge,
)
from .gadgets import (
    GadgetKind,
    gadget_delta,
    insert_gadget,
    leaf_arc_component,
    leaf_arc_direction,
    leaf_arcs,
)
from .invariants import wcu, whitney_index
from .moves import (
    MoveCertificate,
    MoveRecord,
    apply_move,
    enumerate_sites,
    rebase_certificate,
    verify_certificate,
)
from .trees import TreePair


def component_leaf_arcs(d: Diagram) -> List[List[int]]:
    """Per component, the arcs whose both endpoints are over ports."""
    comps = d.components()
    per: List[List[int]] = [[] for _ in comps]
    for ci, aids in enumerate(comps):
        for aid in aids:
            if aid < 0:
                continue
            h1, h2 = d.arc_ends(aid)
            if d.is_over(h1) and d.is_over(h2):
                per[ci].append(aid)
    return per


def leaf_arc_free_components(d: Diagram) -> Tuple[int, ...]:
    """Indices of crossing-traversing components owning no leaf-arc.

    Free-loop components are skipped: they meet no crossing, so the
    repair move neither applies to them nor is needed.
    """
    per = component_leaf_arcs(d)
    comps = d.components()
    return tuple(
        ci
        for ci, arcs in enumerate(per)
        if not arcs and any(aid >= 0 for aid in comps[ci])
    )


def _port_profile(d: Diagram) -> Tuple[int, int]:
    # (over-over, under-under) arc counts; a constructed diagram with m
    # leaves has exactly (m, m)
    oo = uu = 0
    for aid in d.arc_ids():
        h1, h2 = d.arc_ends(aid)
        a, b = d.is_over(h1), d.is_over(h2)
        if a and b:
            oo += 1
        elif not a and not b:
            uu += 1
    return oo, uu


def _runs_over(d: Diagram, site, arcs: set) -> bool:
    """Whether this R2 push makes the strand of one of ``arcs`` the over one."""
    p, q = site[0], site[1]
    ov = bool(site[2])
    pa, qa = d.arc_id(p), d.arc_id(q)
    if pa in arcs and qa in arcs:
        return True
    return (ov and pa in arcs) or ((not ov) and qa in arcs)


def _unmoved_directions_match(
    d2: Diagram,
    odf: OrientedDiagram,
    g2: TreePair,
    img_skip: int,
) -> bool:
    # transported orientation must agree with the recognized element's
    # own shading orientation on every component except img_skip
    l2 = link_of(g2)
    od2 = orient_by_shading(l2)
    iso = isomorphism(d2, l2)
    if iso is None:
        return False
    for img, aids in enumerate(d2.components()):
        if img == img_skip:
            continue
        head = odf.head[min(aids)]
        h2 = map_half_edge(iso, head)
        if od2.head[l2.arc_id(h2)] != h2:
            return False
    return True


def _two_push_search(d: Diagram, target: int, oriented: bool):
    """First pair of R2 pushes whose result is recognized as constructed.

    Both pushes run the target component's strand over, so its arcs gain
    the over-over pieces that become leaf-arcs.  Candidates that break
    the last leaf-arc of a bystander component are kept only as a
    fallback, so a chained caller destroys foreign leaf-arcs as rarely
    as possible.  Returns (g2, records, fallback_used) or None.
    """
    comps = d.components()
    per_before = component_leaf_arcs(d)
    carcs = set(comps[target])
    od1 = orient_by_shading(d) if oriented else None
    fallback = None
    for s1 in enumerate_sites(d, "R2+"):
        if not _runs_over(d, s1, carcs):
            continue
        out1 = apply_move(d, MoveRecord("R2+", s1))
        d1 = out1.diagram
        cimg = set(d1.components()[out1.component_map[target]])
        for s2 in enumerate_sites(d1, "R2+"):
            if not _runs_over(d1, s2, cimg):
                continue
            out2 = apply_move(d1, MoveRecord("R2+", s2))
            d2 = out2.diagram
            m = len(d2.crossings) // 2 + 1
            if _port_profile(d2) != (m, m):
                continue
            g2 = from_diagram(d2)
            if g2 is None:
                continue
            fmap = {
                i: out2.component_map[out1.component_map[i]] for i in range(len(comps))
            }
            per_after = component_leaf_arcs(d2)
            if len(per_after[fmap[target]]) < 3:
                continue
            if oriented:
                if not in_oriented_subgroup(g2):
                    continue
                odf = out2.orient(out1.orient(od1))
                if not _unmoved_directions_match(d2, odf, g2, fmap[target]):
                    continue
            recs = (out1.record, out2.record)
            clean = all(
                len(per_after[fmap[ci]]) > 0
                for ci in range(len(comps))
                if ci != target and per_before[ci]
            )
            if clean:
                return g2, recs, False
            if fallback is None:
                fallback = (g2, recs, True)
    return fallback


def _leaf_arc_move(g: TreePair, target: int, oriented: bool):
    if oriented and not in_oriented_subgroup(g):
        raise errors.NotOriented("element is outside the oriented subgroup")
    if not g.is_reduced():
        g = g.reduce()
    d = link_of(g)
    comps = d.components()
    if not 0 <= target < len(comps):
        raise errors.BadSite(
            f"no component {target}: diagram has {len(comps)} components"
        )
    if all(aid < 0 for aid in comps[target]):
        raise errors.BadSite(
            f"component {target} is a free loop; the move needs strand arcs"
        )
    per = component_leaf_arcs(d)
    if per[target]:
        raise errors.AlreadyHasLeafArc(
            f"component {target} already has leaf-arcs {tuple(per[target])}"
        )
    found = _two_push_search(d, target, oriented)
    if found is None:
        raise errors.NotInImage(
            "no two-push surgery lands back in the construction image"
        )
    g2, recs, _ = found
    cert = MoveCertificate(recs)
    res = verify_certificate(d, cert, link_of(g2))
    if not res.ok:
        raise AssertionError(f"leaf-arc certificate failed self-check: {res.reason}")
    return g2, MoveCertificate(recs, res.induced_map)


def leaf_arc_move(g: TreePair, target: int) -> Tuple[TreePair, MoveCertificate]:
    """Give a leaf-arc-free component at least three leaf-arcs.

    Returns the new element g' and an R1-free certificate from L(g) to
    L(g').  Raises AlreadyHasLeafArc when the component needs no repair
    and NotInImage when no surgery is recognized (which would refute the
    construction, so it is an internal error).
    """
    return _leaf_arc_move(g, target, False)


def oriented_leaf_arc_move(g: TreePair, target: int) -> Tuple[TreePair, MoveCertificate]:
    """leaf_arc_move constrained to the oriented subgroup.

    The returned element stays in the oriented subgroup and the
    certificate transports the shading orientation so that every
    component other than the target keeps its direction.
    """
    return _leaf_arc_move(g, target, True)


def normalize_leaf_arcs(
    g: TreePair, oriented: bool = False
) -> Tuple[TreePair, MoveCertificate]:
    """Chain leaf-arc moves until every component has a leaf-arc.

    Returns (g', composite certificate from L(g)); the certificate is
    empty when nothing needed repair.
    """
    if oriented and not in_oriented_subgroup(g):
        raise errors.NotOriented("element is outside the oriented subgroup")
    if not g.is_reduced():
        g = g.reduce()
    start = link_of(g)
    front = start
    records: List[MoveRecord] = []
    budget = 2 * len(start.components()) + 2
    while True:
        d_now = link_of(g)
        free = leaf_arc_free_components(d_now)
        if not free:
            break
        budget -= 1
        if budget < 0:
            raise AssertionError("leaf-arc normalization failed to converge")
        g, cert = _leaf_arc_move(g, free[0], oriented)
        recs, front = rebase_certificate(d_now, front, cert)
        records.extend(recs)
    if not records:
        return g, MoveCertificate(())
    cert = MoveCertificate(tuple(records))
    res = verify_certificate(start, cert, link_of(g))
    if not res.ok:
        raise AssertionError(f"composite certificate failed self-check: {res.reason}")
    return g, MoveCertificate(tuple(records), res.induced_map)


def _carry_orientation(
    src: Diagram, od: OrientedDiagram, dst: Diagram
) -> Tuple[OrientedDiagram, Dict[int, int]]:
    """Push an orientation along a plane isomorphism src -> dst.

    Returns the oriented dst and the component index map.  Free loops
    are paired in sorted label order.
    """
    iso = isomorphism(src, dst)
    if iso is None:
        raise AssertionError("orientation carry without a plane isomorphism")
    head = {}
    for aid in src.arc_ids():
        h2 = map_half_edge(iso, od.head[aid])
        head[dst.arc_id(h2)] = h2
    loop_pair = dict(zip(sorted(src.free_loops), sorted(dst.free_loops)))
    loops = {loop_pair[lbl]: ccw for lbl, ccw in od.loop_ccw.items()}
    arc_comp = {aid: k for k, aids in enumerate(dst.components()) for aid in aids}
    comp_map = {}
    for j, aids in enumerate(src.components()):
        h = src.arc_ends(min(aids))[0]
        comp_map[j] = arc_comp[dst.arc_id(map_half_edge(iso, h))]
    return OrientedDiagram(dst, head, loops), comp_map


def _parity_check(targets, current) -> None:
    for ci, ((tw, tom), (cw_, com_)) in enumerate(zip(targets, current)):
        if (tw - cw_) % 2:
            raise errors.ParityObstruction(
                f"component {ci}: writhe parity is fixed at {cw_ % 2} "
                f"by the crossing count, target {tw} breaks it"
            )
        if tom % 2 == tw % 2:
            raise errors.ParityObstruction(
                f"component {ci}: Whitney index parity must be opposite "
                f"writhe parity, target ({tw}, {tom}) has them equal"
            )


def match_regular_class(
    g: TreePair,
    targets: Sequence[Tuple[int, int]],
    oriented: bool = False,
) -> Tuple[TreePair, MoveCertificate]:
    """Drive every component of L(g) onto target (writhe, Whitney index).

    targets is indexed like the diagram's component list and is read
    against the orientation of L(g) carried through the certificate, so
    untouched components keep their stated values exactly.  Every
    component must already own a leaf-arc (NoLeafArc otherwise; run
    normalize_leaf_arcs first).  Targets must respect the parity laws
    (ParityObstruction otherwise), and the oriented mode additionally
    requires every target writhe to equal the current one, because
    R1-free adjustments cannot change writhe.  Returns (g', composite
    certificate from L(g)).
    """
    if oriented and not in_oriented_subgroup(g):
        raise errors.NotOriented("element is outside the oriented subgroup")
    if not g.is_reduced():
        g = g.reduce()
    start = link_of(g)
    comps = start.components()
    targets = [(int(w), int(om)) for w, om in targets]
    if len(targets) != len(comps):
        raise errors.ValidationError(
            f"{len(targets)} targets for {len(comps)} components"
        )
    per = component_leaf_arcs(start)
    for ci, arcs in enumerate(per):
        if not arcs:
            raise errors.NoLeafArc(
                f"component {ci} has no leaf-arc; normalize first"
            )

    od0 = orient_by_shading(start) if oriented else canonical_orientation(start)
    ws0 = wcu(od0)
    current = [(ws0[ci][0], whitney_index(od0, ci)) for ci in range(len(comps))]
    _parity_check(targets, current)
    if oriented:
        for ci, ((tw, _), (cw_, _)) in enumerate(zip(targets, current)):
            if tw != cw_:
                raise errors.ParityObstruction(
                    f"component {ci}: oriented adjustment keeps writhe, "
                    f"target {tw} != current {cw_}"
                )
    if all(t == c for t, c in zip(targets, current)):
        return g, MoveCertificate(())

    budget = (
        sum(
            abs(tw - cw_) + abs(tom - com_)
            for (tw, tom), (cw_, com_) in zip(targets, current)
        )
        // 2
    )
    # replay front: the diagram, transported orientation, and component
    # map reached from L(g) by the records collected so far
    front_d, od_t = start, od0
    tot = {i: i for i in range(len(comps))}
    records: List[MoveRecord] = []
    while True:
        d_now = link_of(g)
        od_now, carry = _carry_orientation(front_d, od_t, d_now)
        ws = wcu(od_now)
        need = []
        for i in range(len(comps)):
            ci = carry[tot[i]]
            need.append(
                (
                    targets[i][0] - ws[ci][0],
                    targets[i][1] - whitney_index(od_now, ci),
                )
            )
        pending = [i for i, (dw, dom) in enumerate(need) if dw or dom]
        if not pending:
            break
        if budget <= 0:
            raise AssertionError("class matching failed to converge")
        budget -= 1
        i = pending[0]
        dw, dom = need[i]
        mine = [
            leaf
            for leaf in sorted(leaf_arcs(d_now))
            if leaf_arc_component(d_now, leaf) == carry[tot[i]]
        ]
        if not mine:
            raise AssertionError(
                f"component {carry[tot[i]]} lost its leaf-arcs during matching"
            )
        leaf = mine[0]
        if dw:
            kind = GadgetKind.W_PLUS_2 if dw > 0 else GadgetKind.W_MINUS_2
        else:
            dirn = leaf_arc_direction(d_now, leaf, od_now)
            want_up = dom > 0
            if dirn == "down":
                want_up = not want_up
            if oriented:
                kind = (
                    GadgetKind.OR_OMEGA_PLUS_2
                    if want_up
                    else GadgetKind.OR_OMEGA_MINUS_2
                )
            else:
                kind = (
                    GadgetKind.OMEGA_PLUS_2 if want_up else GadgetKind.OMEGA_MINUS_2
                )
        g, cert = insert_gadget(g, leaf, kind)
        recs, _ = rebase_certificate(d_now, front_d, cert)
        for rec in recs:
            out = apply_move(front_d, rec)
            od_t = out.orient(od_t)
            tot = {i0: out.component_map[j] for i0, j in tot.items()}
            front_d = out.diagram
        records.extend(recs)
    cert = MoveCertificate(tuple(records))
    res = verify_certificate(start, cert, link_of(g))
    if not res.ok:
        raise AssertionError(f"matching certificate failed self-check: {res.reason}")
    return g, MoveCertificate(tuple(records), res.induced_map)

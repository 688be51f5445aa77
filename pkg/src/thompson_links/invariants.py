"""Regular-isotopy invariants of link diagrams.

Per-component data:

* ``alpha``  parity of self-crossings (component is both under and over),
* ``beta``   parity of crossings where the component goes under another,
* ``gamma``  ``alpha + beta`` -- parity of all under-passages,
* ``w``      signed self-crossing sum (writhe of the component),
* ``cw``     signed under-other sum,
* ``u``      ``w + cw``,
* ``omega``  Whitney index (turning number) of the component's curve.

A diagram is compliant when every ``gamma`` vanishes, oriented-compliant
when every ``u`` vanishes.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Dict, List, Optional, Tuple

from . import errors
from .diagram import (
    Diagram,
    OrientedDiagram,
    crossing_of,
    half_edge,
    opposite,
    slot_of,
)
from .laurent import LOOP_FACTOR, LaurentPoly

BRACKET_MAX_CROSSINGS = 20


# -- crossing-level helpers ------------------------------------------------------


def _under_over_strands(d: Diagram, c: int) -> Tuple[int, int]:
    """Component ids of the (under, over) strands through crossing c."""
    over_par = d.over[c]
    over_comp = d.component_of(d.arc_id(half_edge(c, over_par)))
    under_comp = d.component_of(d.arc_id(half_edge(c, over_par ^ 1)))
    return under_comp, over_comp


def _exit(od: OrientedDiagram, c: int, parity: int) -> int:
    """The half-edge through which the strand on {parity, parity+2} leaves c."""
    h = half_edge(c, parity)
    if od.points_away(h):
        return h
    h = opposite(h)
    if not od.points_away(h):
        raise errors.ValidationError("strand has no outgoing direction")
    return h


def crossing_sign(od: OrientedDiagram, c: int) -> int:
    """+1 when the under direction is the over direction turned a quarter ccw."""
    d = od.diagram
    over_exit = _exit(od, c, d.over[c])
    under_exit = _exit(od, c, d.over[c] ^ 1)
    return +1 if (slot_of(under_exit) - slot_of(over_exit)) % 4 == 1 else -1


# -- parity family ---------------------------------------------------------------


def abg(d: Diagram) -> List[Tuple[int, int, int]]:
    """Per-component (alpha, beta, gamma), indexed like d.components()."""
    n = len(d.components())
    alpha = [0] * n
    beta = [0] * n
    for c in d.crossings:
        under_comp, over_comp = _under_over_strands(d, c)
        if under_comp == over_comp:
            alpha[under_comp] ^= 1
        else:
            beta[under_comp] ^= 1
    return [(alpha[i], beta[i], (alpha[i] + beta[i]) % 2) for i in range(n)]


def wcu(od: OrientedDiagram) -> List[Tuple[int, int, int]]:
    """Per-component (w, cw, u), indexed like components()."""
    d = od.diagram
    n = len(d.components())
    w = [0] * n
    cw = [0] * n
    for c in d.crossings:
        under_comp, over_comp = _under_over_strands(d, c)
        s = crossing_sign(od, c)
        if under_comp == over_comp:
            w[under_comp] += s
        else:
            cw[under_comp] += s
    return [(w[i], cw[i], w[i] + cw[i]) for i in range(n)]


def is_compliant(d: Diagram) -> bool:
    return all(g == 0 for _, _, g in abg(d))


def is_oriented_compliant(od: OrientedDiagram) -> bool:
    return all(u == 0 for _, _, u in wcu(od))


# -- Whitney index ---------------------------------------------------------------


class _DSU:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _merged_faces(d: Diagram, keep_comp: int) -> _DSU:
    """Union faces across every arc not belonging to keep_comp.

    Deleting the other components from the picture merges the faces on the
    two sides of each deleted arc; crossings of keep_comp with deleted
    strands become plain pass-throughs, which the arc unions already handle.
    """
    dsu = _DSU(len(d.faces()))
    for aid in d.arc_ids():
        if d.component_of(aid) != keep_comp:
            h1, h2 = d.arc_ends(aid)
            dsu.union(d.face_of(h1), d.face_of(h2))
    return dsu


def _component_passages(od: OrientedDiagram, comp_arcs: set) -> List[int]:
    """Arrival half-edges along the component's flow, starting at its min arc."""
    d = od.diagram
    start = min(comp_arcs)
    h = od.head[start]
    order = []
    while True:
        order.append(h)
        h = od.head[d.arc_id(opposite(h))]
        if h == od.head[start]:
            break
    return order


def whitney_index(
    od: OrientedDiagram, comp: int, base: Optional[int] = None
) -> int:
    """Turning number of one component, others deleted from the picture.

    ``base`` is an arc of the component bordering the unbounded region of
    the restricted picture (defaults to the lowest such arc).  The index is
    the basepoint term plus a frame sign for each self-crossing; a ccw
    simple loop scores +1.
    """
    d = od.diagram
    comps = d.components()
    if not 0 <= comp < len(comps):
        raise errors.BadBasepoint(f"no component {comp}")
    arcs = comps[comp]
    if arcs[0] < 0:
        # free loop: a simple closed curve
        if base is not None:
            raise errors.BadBasepoint("free loops take no basepoint arc")
        return +1 if od.loop_ccw[arcs[0]] else -1

    dsu = _merged_faces(d, comp)
    outer_class = dsu.find(d.outer_face())
    comp_arcs = set(arcs)

    def right_face(aid: int) -> int:
        return dsu.find(d.face_of(od.head[aid]))

    def left_face(aid: int) -> int:
        return dsu.find(d.face_of(d.theta[od.head[aid]]))

    if base is None:
        for aid in arcs:
            if right_face(aid) == outer_class or left_face(aid) == outer_class:
                base = aid
                break
        else:
            raise errors.ValidationError("component has no outer-border arc")
    else:
        if base not in comp_arcs:
            raise errors.BadBasepoint(f"arc {base} is not on component {comp}")
        if right_face(base) != outer_class and left_face(base) != outer_class:
            raise errors.BadBasepoint(f"arc {base} does not border the outer face")

    e_b = +1 if right_face(base) == outer_class else -1

    # frame signs: order of first/second passage taken along the flow from base
    h = od.head[base]
    first_exit: Dict[int, int] = {}
    total = 0
    while True:
        c = crossing_of(h)
        exit_h = opposite(h)
        other_parity = slot_of(h) ^ 1
        other_comp = d.component_of(d.arc_id(half_edge(c, other_parity)))
        if other_comp == comp:
            if c in first_exit:
                # second passage a quarter cw of the first turns with the flow
                s1 = slot_of(first_exit[c])
                s2 = slot_of(exit_h)
                total += +1 if (s2 - s1) % 4 == 3 else -1
            else:
                first_exit[c] = exit_h
        h = od.head[d.arc_id(exit_h)]
        if h == od.head[base]:
            break
    return e_b + total


# -- linking matrix --------------------------------------------------------------


def linking_matrix_view(od: OrientedDiagram) -> List[List[int]]:
    """Symmetric matrix: diagonal 2*w(C_i), off-diagonal raw signed sums.

    The off-diagonal entry is twice the linking number, and each row sums
    to 2*u(C_i), so row-sum-zero is exactly oriented compliance.
    """
    d = od.diagram
    n = len(d.components())
    m = [[0] * n for _ in range(n)]
    for c in d.crossings:
        under_comp, over_comp = _under_over_strands(d, c)
        s = crossing_sign(od, c)
        if under_comp == over_comp:
            m[under_comp][under_comp] += 2 * s
        else:
            m[under_comp][over_comp] += s
            m[over_comp][under_comp] += s
    return m


# -- Kauffman bracket ------------------------------------------------------------


def kauffman_bracket(d: Diagram) -> LaurentPoly:
    """State sum over all smoothings; unknot normalized to 1.

    Smoothing convention: at a crossing whose over strand occupies slots
    {o, o+2}, the A-smoothing joins slot pairs (o, o+3) and (o+1, o+2) --
    the channels swept when the over strand rotates counterclockwise onto
    the under strand are opened.  Each state contributes
    A^(a-b) * (-A^2 - A^-2)^(loops - 1).
    """
    n = len(d.crossings)
    if n > BRACKET_MAX_CROSSINGS:
        raise errors.TooLarge(
            f"bracket state sum needs 2^{n} states (limit 2^{BRACKET_MAX_CROSSINGS})"
        )
    if n == 0:
        k = len(d.free_loops)
        return LOOP_FACTOR ** (k - 1) if k else LaurentPoly.one()

    cs = sorted(d.crossings)
    ports = sorted(d.theta)
    index = {h: i for i, h in enumerate(ports)}
    theta_pairs = [(index[h], index[t]) for h, t in d.theta.items() if h < t]

    # per crossing, port index quadruples in slot order, and the over parity
    quads = [[index[half_edge(c, s)] for s in range(4)] for c in cs]
    over_par = [d.over[c] for c in cs]

    total = LaurentPoly.zero()
    extra_loops = len(d.free_loops)
    for state in range(1 << n):
        parent = list(range(len(ports)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for a, b in theta_pairs:
            union(a, b)
        a_count = 0
        for i in range(n):
            o = over_par[i]
            q = quads[i]
            if (state >> i) & 1:
                a_count += 1
                union(q[o], q[(o + 3) % 4])
                union(q[(o + 1) % 4], q[(o + 2) % 4])
            else:
                union(q[o], q[(o + 1) % 4])
                union(q[(o + 2) % 4], q[(o + 3) % 4])
        loops = len({find(i) for i in range(len(ports))}) + extra_loops
        term = LaurentPoly.monomial(1, 2 * a_count - n)
        total = total + term * LOOP_FACTOR ** (loops - 1)
    return total


# -- report ----------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class InvariantReport:
    """Everything measured on one diagram, JSON-serializable."""

    components: Tuple[Dict[str, int], ...]
    compliant: bool
    oriented_compliant: Optional[bool]
    bracket: LaurentPoly

    def to_json(self) -> str:
        payload = {
            "components": [dict(sorted(row.items())) for row in self.components],
            "compliant": self.compliant,
            "bracket": self.bracket.to_json(),
        }
        if self.oriented_compliant is not None:
            payload["oriented_compliant"] = self.oriented_compliant
        return json.dumps(payload, sort_keys=True, indent=2)


def invariant_report(
    d: Diagram, od: Optional[OrientedDiagram] = None
) -> InvariantReport:
    """Measure everything measurable; pass the orientation to add w/cw/u/omega."""
    parities = abg(d)
    rows: List[Dict[str, int]] = []
    for i, (a, b, g) in enumerate(parities):
        rows.append({"alpha": a, "beta": b, "gamma": g})
    oriented_ok: Optional[bool] = None
    if od is not None:
        if od.diagram is not d and od.diagram != d:
            raise errors.ValidationError("orientation belongs to another diagram")
        signed = wcu(od)
        for i, (w, cw, u) in enumerate(signed):
            assert (w + cw) == u
            assert u % 2 == parities[i][2] % 2
            rows[i].update(
                {"w": w, "cw": cw, "u": u, "omega": whitney_index(od, i)}
            )
        oriented_ok = all(u == 0 for _, _, u in signed)
    bracket = kauffman_bracket(d)
    return InvariantReport(
        components=tuple(rows),
        compliant=all(g == 0 for _, _, g in parities),
        oriented_compliant=oriented_ok,
        bracket=bracket,
    )

"""Regular-isotopy move engine with replayable certificates.

Moves are pure rewrites: ``apply_move`` returns a new diagram, never
mutating its input.  Untouched half-edge labels survive a move
unchanged, so a recorded move sequence (a certificate) replays on exact
labels; creation records carry the crossing ids they must allocate,
which makes reversed certificates deterministic too.

Site grammar (all JSON-serializable):

* ``R1-``: ``(h,)`` -- pouch half-edge of a curl: ``theta[h] == ccw_next(h)``.
* ``R1+``: ``(anchor, side, over_first)`` -- anchor is a half-edge (the kink
  is inserted on its arc, next to its end) or ``("loop", label)``; ``side``
  is ``"L"``/``"R"`` (pouch left/right of travel seen from the anchor; a
  loop anchor is traversed counterclockwise, so L pouches inward);
  ``over_first`` says the passage nearer the anchor crosses over.
* ``R2-``: ``(h,)`` -- minimum half-edge of a two-corner face on two
  crossings whose strands do not alternate.
* ``R2+``: ``(p, q, over)`` -- p, q anchors on a common region (half-edges on
  distinct arcs, or ``("loop", label)``); p's strand is pushed across q's;
  ``over`` says the pushed strand crosses over.
  ``(p, q, over, form)`` -- same-arc push: q must be ``theta[p]``; the
  strand near p folds across its own far end.  Form ``"N"`` nests the two
  new passages and works beside any arc; form ``"X"``, which would
  alternate them, never embeds in the plane (a diagram holding one would
  contract to a map of Euler characteristic 0) and is accepted in records
  only so removal inverses can name it.
* ``R3``: ``(t,)`` -- a triangle-face half-edge on the slide arc (the arc
  whose strand passes its two triangle crossings uniformly over or under).

New crossings use slot roles, counterclockwise:

* R1+: 0 = first-passage exit, 1 = second-passage entry (these two bound
  the pouch for side L), 2 = first-passage entry, 3 = second-passage exit;
  side R rotates the pattern so the pouch sits on ports 2, 3.
* R2+ (both new crossings): 0 = landing strand beyond the overlap,
  1 = pushed strand toward its base, 2 = landing strand at its base,
  3 = pushed strand toward the tongue tip -- at the first crossing along
  the pushed strand; the second crossing swaps base/beyond readings.

All moves are plane moves.  A removal or slide whose active face is the
outer region is refused; a push may run through any region, the outer
one included.  Free loops are placeless, so a rewrite that would need a
nested free-standing piece to keep its position raises
UnsupportedDiagram rather than guessing an embedding.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Dict, List, Optional, Tuple, Union

from . import errors, invariants
from .diagram import (
    Diagram,
    OrientedDiagram,
    canonical_code,
    ccw_next,
    crossing_of,
    half_edge,
    isomorphism,
    map_half_edge,
    opposite,
    slot_of,
)

KINDS = ("R1+", "R1-", "R2+", "R2-", "R3")

Anchor = Union[int, Tuple[str, int]]  # half-edge, or ("loop", label)


def _is_loop(x) -> bool:
    return isinstance(x, tuple) and len(x) == 2 and x[0] == "loop"


# ---------------------------------------------------------------------------
# records and certificates


@dataclasses.dataclass(frozen=True)
class MoveRecord:
    kind: str
    site: tuple
    ids: tuple = ()  # crossing ids a creation move must allocate

    def __post_init__(self):
        if self.kind not in KINDS:
            raise errors.InvalidCertificate(f"unknown move kind {self.kind!r}")

    def to_json(self):
        def enc(x):
            if _is_loop(x):
                return ["loop", x[1]]
            if isinstance(x, (bool, int, str)):
                return x
            raise errors.InvalidCertificate(f"unencodable site entry {x!r}")

        out = {"kind": self.kind, "site": [enc(x) for x in self.site]}
        if self.ids:
            out["ids"] = list(self.ids)
        return out

    @classmethod
    def from_json(cls, data) -> "MoveRecord":
        def dec(x):
            if isinstance(x, list):
                if len(x) == 2 and x[0] == "loop":
                    return ("loop", int(x[1]))
                raise errors.InvalidCertificate(f"bad site entry {x!r}")
            return x

        return cls(
            kind=data["kind"],
            site=tuple(dec(x) for x in data["site"]),
            ids=tuple(int(i) for i in data.get("ids", ())),
        )


@dataclasses.dataclass(frozen=True)
class MoveCertificate:
    """A replayable move sequence plus the claimed correspondence from
    source link components to destination components (by index)."""

    moves: Tuple[MoveRecord, ...]
    component_map: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        cm = self.component_map
        if isinstance(cm, dict):
            cm = tuple(sorted(cm.items()))
        object.__setattr__(self, "component_map", tuple(cm))

    def comp_map(self) -> Dict[int, int]:
        return dict(self.component_map)

    def is_r1_free(self) -> bool:
        return all(not m.kind.startswith("R1") for m in self.moves)

    def to_json(self):
        return {
            "moves": [m.to_json() for m in self.moves],
            "component_map": {str(k): v for k, v in self.component_map},
        }

    @classmethod
    def from_json(cls, data) -> "MoveCertificate":
        return cls(
            moves=tuple(MoveRecord.from_json(m) for m in data["moves"]),
            component_map=tuple(
                sorted((int(k), int(v)) for k, v in data.get("component_map", {}).items())
            ),
        )


@dataclasses.dataclass
class ApplyOutcome:
    diagram: Diagram
    record: MoveRecord  # as applied, with allocated crossing ids filled in
    inverse: MoveRecord
    component_map: Dict[int, int]  # old component index -> new component index
    orient: Callable[[OrientedDiagram], OrientedDiagram]


# ---------------------------------------------------------------------------
# shared plumbing


def _fresh_crossings(d: Diagram, count: int, wanted: tuple) -> List[int]:
    if wanted:
        if len(wanted) != count:
            raise errors.InvalidCertificate(f"move allocates {count} crossings, ids give {len(wanted)}")
        taken = set(d.crossings)
        for c in wanted:
            if c in taken or c < 0:
                raise errors.BadSite(f"crossing id {c} is not free")
        return list(wanted)
    base = max(d.crossings) + 1 if d.crossings else 0
    return [base + i for i in range(count)]


def _fresh_loop(d: Diagram, taken=()) -> int:
    lo = min(d.free_loops) if d.free_loops else 0
    if taken:
        lo = min(lo, min(taken))
    return lo - 1


def _strand_token(h: int) -> Tuple[int, int]:
    # a strand passage at a crossing, named (crossing, slot parity)
    return (crossing_of(h), slot_of(h) & 1)


def _component_map(
    old: Diagram,
    new: Diagram,
    token_hints: Optional[Dict[Tuple[int, int], int]] = None,
    loop_hints: Optional[Dict[int, int]] = None,
) -> Dict[int, int]:
    """Match components across one move by surviving strand passages.

    A passage token survives any move that keeps its crossing.
    token_hints maps tokens of new passages to old component indices;
    loop_hints does the same for new free-loop labels.  Moves never
    merge or split strands, so the result must be a bijection.
    """
    token_hints = token_hints or {}
    loop_hints = loop_hints or {}
    old_comps = old.components()
    new_comps = new.components()
    old_of_token: Dict[Tuple[int, int], int] = {}
    old_of_loop: Dict[int, int] = {}
    for i, comp in enumerate(old_comps):
        for aid in comp:
            if aid < 0:
                old_of_loop[aid] = i
            else:
                old_of_token[_strand_token(aid)] = i
                old_of_token[_strand_token(old.theta[aid])] = i

    mapping: Dict[int, int] = {}
    for j, comp in enumerate(new_comps):
        src: Optional[int] = None
        for aid in comp:
            if aid < 0:
                if aid in loop_hints:
                    src = loop_hints[aid]
                elif aid in old_of_loop:
                    src = old_of_loop[aid]
            else:
                for tok in (_strand_token(aid), _strand_token(new.theta[aid])):
                    if tok in token_hints:
                        src = token_hints[tok]
                        break
                    if tok in old_of_token:
                        src = old_of_token[tok]
                        break
            if src is not None:
                break
        if src is None:
            raise errors.InvalidCertificate("a component lost its ancestry across a move")
        if src in mapping:
            raise errors.InvalidCertificate("two components claim one ancestor")
        mapping[src] = j
    if len(mapping) != len(old_comps) or len(mapping) != len(new_comps):
        raise errors.InvalidCertificate("component correspondence is not a bijection")
    return mapping


def _points_away(od: OrientedDiagram, h: int) -> bool:
    return od.points_away(h)


def _orient_from_heads(
    new_d: Diagram,
    od: OrientedDiagram,
    forced: Dict[int, int],
    loop_senses: Dict[int, bool],
) -> OrientedDiagram:
    """Orient new_d from an orientation of the pre-move diagram.

    forced names heads for arcs whose direction cannot be read off a
    surviving port (both ports new, or re-pairing broke locality); any
    other arc keeps the flow its surviving port carried.  loop_senses
    gives the winding of newly created free loops.
    """
    old_theta = od.diagram.theta
    head: Dict[int, int] = {}
    for a in new_d.arc_ids():
        if a < 0:
            continue
        b = new_d.theta[a]
        if a in forced:
            head[a] = forced[a]
        elif a in old_theta:
            head[a] = b if _points_away(od, a) else a
        elif b in old_theta:
            head[a] = a if _points_away(od, b) else b
        else:
            raise errors.InvalidCertificate(f"no flow data for arc {a}")
    loop_ccw: Dict[int, bool] = {}
    for lbl in new_d.free_loops:
        if lbl in loop_senses:
            loop_ccw[lbl] = loop_senses[lbl]
        elif lbl in od.loop_ccw:
            loop_ccw[lbl] = od.loop_ccw[lbl]
        else:
            raise errors.InvalidCertificate(f"no winding data for loop {lbl}")
    return OrientedDiagram(new_d, head, loop_ccw)


# ---------------------------------------------------------------------------
# removal scaffolding


def _splice_out(d: Diagram, dead: set):
    """Delete the crossings in ``dead``, reconnecting strands across them.

    Returns (new_theta, cycles): new_theta pairs the surviving ports;
    cycles lists the closed port-chains that never reach a live port,
    each of which becomes a free loop.
    """

    def is_dead(h):
        return crossing_of(h) in dead

    new_theta: Dict[int, int] = {}
    for h in sorted(d.theta):
        if is_dead(h) or h in new_theta:
            continue
        x = d.theta[h]
        while is_dead(x):
            x = d.theta[opposite(x)]
        if x == h:
            raise errors.InvalidCertificate("strand respliced to itself")
        new_theta[h] = x
        new_theta[x] = h

    cycles: List[List[int]] = []
    visited = set()
    for h in sorted(d.theta):
        if not is_dead(h) or h in visited:
            continue
        chain = []
        y = h
        closed = False
        while True:
            chain.append(y)
            visited.add(y)
            nxt = d.theta[y]
            if not is_dead(nxt):
                break
            chain.append(nxt)
            visited.add(nxt)
            y = opposite(nxt)
            if y == h:
                closed = True
                break
            if y in visited:
                break
        if closed:
            cycles.append(chain)
    cycles.sort(key=min)
    return new_theta, cycles


def _outer_after_removal(d: Diagram, dead: set, new_theta: Dict[int, int]) -> Optional[int]:
    """Outer witness after deleting ``dead`` crossings.

    A surviving witness stands.  Otherwise any surviving corner of the
    old outer orbit still bounds the outer region, so the least one
    takes over.  If the whole orbit died: with no crossings left there
    is nothing to anchor (None); with crossings left the remaining
    pieces' embedding is ambiguous in the placeless-loop model, refuse.
    """
    if not new_theta:
        return None
    if d.outer is not None:
        if crossing_of(d.outer) not in dead:
            return d.outer
        alive = [h for h in d.faces()[d.outer_face()] if crossing_of(h) not in dead]
        if alive:
            return min(alive)
    raise errors.UnsupportedDiagram("outer region lost its anchor")


# ---------------------------------------------------------------------------
# R1: kinks

# (first_in, first_out, second_in, second_out) slots of the two strand
# passages through a kink crossing, by pouch side.
_R1_ROLES = {"L": (2, 0, 1, 3), "R": (1, 3, 2, 0)}


def _apply_r1_plus(d: Diagram, site: tuple, ids: tuple) -> ApplyOutcome:
    if len(site) != 3:
        raise errors.BadSite("R1+ site is (anchor, side, over_first)")
    anchor, side, over_first = site
    if side not in _R1_ROLES:
        raise errors.BadSite(f"unknown kink side {side!r}")
    if not isinstance(over_first, bool):
        raise errors.BadSite("over_first must be a bool")
    f_i, f_o, s_i, s_o = _R1_ROLES[side]

    (n,) = _fresh_crossings(d, 1, ids)
    theta = dict(d.theta)
    over = dict(d.over)
    loops = set(d.free_loops)
    over[n] = (f_i & 1) if over_first else (s_i & 1)
    curl = (half_edge(n, f_o), half_edge(n, s_i))
    token_hints: Dict[Tuple[int, int], int] = {}

    if _is_loop(anchor):
        lbl = anchor[1]
        if lbl not in loops:
            raise errors.BadSite(f"no free loop labelled {lbl}")
        comp_src = next(i for i, comp in enumerate(d.components()) if lbl in comp)
        loops.discard(lbl)
        lobe = (half_edge(n, f_i), half_edge(n, s_o))
        theta[lobe[0]] = lobe[1]
        theta[lobe[1]] = lobe[0]
        theta[curl[0]] = curl[1]
        theta[curl[1]] = curl[0]
        # counterclockwise re-kinking convention: side L pouches inward,
        # leaving the across-the-lobe corner outside; R leaves the
        # two-corner orbit outside
        outer = d.outer if d.crossings else (half_edge(n, 2) if side == "L" else half_edge(n, 1))
        token_hints[(n, 0)] = comp_src
        token_hints[(n, 1)] = comp_src
        consumed = lbl
    else:
        if anchor not in theta:
            raise errors.BadSite(f"half-edge {anchor} is not in the diagram")
        p2 = theta[anchor]
        theta[anchor] = half_edge(n, f_i)
        theta[half_edge(n, f_i)] = anchor
        theta[half_edge(n, s_o)] = p2
        theta[p2] = half_edge(n, s_o)
        theta[curl[0]] = curl[1]
        theta[curl[1]] = curl[0]
        outer = d.outer
        consumed = None

    new = Diagram(
        tuple(d.crossings) + (n,),
        theta,
        over,
        free_loops=loops,
        outer=outer,
    )
    pouch = half_edge(n, min(f_o, s_i))
    record = MoveRecord("R1+", site, (n,))
    inverse = MoveRecord("R1-", (pouch,))
    comp_map = _component_map(d, new, token_hints)

    def orient(od: OrientedDiagram) -> OrientedDiagram:
        forced: Dict[int, int] = {}
        curl_aid = min(curl)
        if consumed is not None:
            ccw = od.loop_ccw[consumed]
            lobe_aid = min(half_edge(n, f_i), half_edge(n, s_o))
            forced[lobe_aid] = half_edge(n, f_i) if ccw else half_edge(n, s_o)
            forced[curl_aid] = half_edge(n, s_i) if ccw else half_edge(n, f_o)
        else:
            away = _points_away(od, anchor)
            forced[curl_aid] = half_edge(n, s_i) if away else half_edge(n, f_o)
        return _orient_from_heads(new, od, forced, {})

    return ApplyOutcome(new, record, inverse, comp_map, orient)


def _apply_r1_minus(d: Diagram, site: tuple, ids: tuple) -> ApplyOutcome:
    if len(site) != 1:
        raise errors.BadSite("R1- site is (pouch_half_edge,)")
    (h,) = site
    if h not in d.theta:
        raise errors.BadSite(f"half-edge {h} is not in the diagram")
    h2 = d.theta[h]
    if h2 != ccw_next(h):
        raise errors.BadSite("half-edge does not bound a one-corner pouch")
    if d.outer is not None and d.face_of(h) == d.outer_face():
        raise errors.BadSite("kink pouch is the outer region")
    c = crossing_of(h)
    sigma = slot_of(h)
    oh, oh2 = opposite(h), opposite(h2)
    x = d.theta[oh]
    is_loop = x == oh2

    theta = {k: v for k, v in d.theta.items() if crossing_of(k) != c}
    over = {k: v for k, v in d.over.items() if k != c}
    loops = set(d.free_loops)
    loop_hints: Dict[int, int] = {}
    crossings = tuple(a for a in d.crossings if a != c)

    if is_loop:
        lbl = _fresh_loop(d)
        loops.add(lbl)
        comp_src = d.component_of(d.arc_id(h))
        loop_hints[lbl] = comp_src
    else:
        y = d.theta[oh2]
        theta[x] = y
        theta[y] = x
        lbl = None

    new_outer = _outer_after_removal(d, {c}, theta)
    new = Diagram(
        crossings,
        theta,
        over,
        free_loops=loops,
        outer=new_outer,
    )

    # Seen from its live anchor, every kink is the side-L pattern up to
    # rotation, so a strand anchor always re-kinks on side L, with
    # over_first read through that rotation.  A loop anchor follows the
    # counterclockwise re-kinking convention instead: when the dying
    # kink carried the outer witness, the pouch side is whichever one
    # leaves the witnessed face outside.
    if is_loop:
        side = "L"
        if d.outer is not None and crossing_of(d.outer) == c:
            if d.face_of(half_edge(c, (sigma + 2) & 3)) != d.outer_face():
                side = "R"
        if side == "L":
            over_first = d.over[c] == (sigma & 1)
        else:
            over_first = d.over[c] != (sigma & 1)
        inv_anchor: Anchor = ("loop", lbl)
    else:
        side = "L"
        over_first = d.over[c] == (sigma & 1)
        inv_anchor = x

    record = MoveRecord("R1-", site, ())
    inverse = MoveRecord("R1+", (inv_anchor, side, over_first), (c,))
    comp_map = _component_map(d, new, None, loop_hints)

    def orient(od: OrientedDiagram) -> OrientedDiagram:
        senses: Dict[int, bool] = {}
        if is_loop:
            comp = d.component_of(d.arc_id(h))
            omega = invariants.whitney_index(od, comp)
            kink = 1 if _points_away(od, h) else -1
            lobe = omega - kink
            if lobe not in (1, -1):
                raise errors.InvalidCertificate("kinked circle has non-unit winding")
            senses[lbl] = lobe == 1
        return _orient_from_heads(new, od, {}, senses)

    return ApplyOutcome(new, record, inverse, comp_map, orient)


# ---------------------------------------------------------------------------
# R2: pushes and pulls


def _apply_r2_plus(d: Diagram, site: tuple, ids: tuple) -> ApplyOutcome:
    if len(site) == 3:
        p, q, over_flag = site
        form = None
    elif len(site) == 4:
        p, q, over_flag, form = site
        if form not in ("X", "N"):
            raise errors.BadSite(f"unknown same-arc push form {form!r}")
    else:
        raise errors.BadSite("R2+ site is (p, q, over) or (p, q, over, form)")
    if not isinstance(over_flag, bool):
        raise errors.BadSite("over flag must be a bool")

    p_loop = _is_loop(p)
    q_loop = _is_loop(q)
    if p_loop and q_loop and p == q:
        raise errors.BadSite("pushing a loop across itself is not supported")
    if form is not None and (p_loop or q_loop):
        raise errors.BadSite("same-arc push forms take two half-edge anchors")
    for a, is_l in ((p, p_loop), (q, q_loop)):
        if is_l:
            if a[1] not in d.free_loops:
                raise errors.BadSite(f"no free loop labelled {a[1]}")
        elif a not in d.theta:
            raise errors.BadSite(f"half-edge {a} is not in the diagram")
    if not p_loop and not q_loop:
        if form is None:
            if d.arc_id(p) == d.arc_id(q):
                raise errors.BadSite("push ends share an arc; use a same-arc form")
            if d.face_of(p) != d.face_of(q):
                raise errors.BadSite("push ends must border a common region")
        else:
            if q != d.theta[p]:
                raise errors.BadSite("same-arc push takes the two ends of one arc")
    # loop anchors need no region check: a free loop is placeless and is
    # taken to sit in the region the other anchor borders

    c1, c2 = _fresh_crossings(d, 2, ids)
    theta = dict(d.theta)
    over = dict(d.over)
    loops = set(d.free_loops)
    token_hints: Dict[Tuple[int, int], int] = {}
    old_comps = d.components()

    def comp_of_loop(lbl):
        return next(i for i, comp in enumerate(old_comps) if lbl in comp)

    def join(a, b):
        theta[a] = b
        theta[b] = a

    tip = (half_edge(c1, 3), half_edge(c2, 3))
    bigon = (half_edge(c2, 0), half_edge(c1, 2))
    join(*tip)
    join(*bigon)
    extra = None

    if form == "X":
        extra = (half_edge(c2, 1), half_edge(c1, 0))
        join(p, half_edge(c1, 1))
        join(*extra)
        join(q, half_edge(c2, 2))
    elif form == "N":
        extra = (half_edge(c2, 1), half_edge(c2, 2))
        join(p, half_edge(c1, 1))
        join(*extra)
        join(q, half_edge(c1, 0))
    elif p_loop and q_loop:
        join(half_edge(c1, 1), half_edge(c2, 1))  # pushed circle, return run
        join(half_edge(c2, 2), half_edge(c1, 0))  # landing circle, far run
        lp, lq = p[1], q[1]
        token_hints[(c1, 1)] = comp_of_loop(lp)
        token_hints[(c2, 1)] = comp_of_loop(lp)
        token_hints[(c1, 0)] = comp_of_loop(lq)
        token_hints[(c2, 0)] = comp_of_loop(lq)
        loops.discard(lp)
        loops.discard(lq)
    elif p_loop:
        p2 = d.theta[q]
        join(half_edge(c1, 1), half_edge(c2, 1))
        join(q, half_edge(c2, 2))
        join(half_edge(c1, 0), p2)
        lp = p[1]
        token_hints[(c1, 1)] = comp_of_loop(lp)
        token_hints[(c2, 1)] = comp_of_loop(lp)
        loops.discard(lp)
    elif q_loop:
        p2 = d.theta[p]
        join(p, half_edge(c1, 1))
        join(half_edge(c2, 1), p2)
        join(half_edge(c2, 2), half_edge(c1, 0))
        lq = q[1]
        token_hints[(c1, 0)] = comp_of_loop(lq)
        token_hints[(c2, 0)] = comp_of_loop(lq)
        loops.discard(lq)
    else:
        p2 = d.theta[p]
        q2 = d.theta[q]
        join(p, half_edge(c1, 1))
        join(half_edge(c2, 1), p2)
        join(q, half_edge(c2, 2))
        join(half_edge(c1, 0), q2)

    # the pushed strand runs through odd slots at both new crossings
    sel = 1 if over_flag else 0
    over[c1] = sel
    over[c2] = sel

    outer = d.outer if d.crossings else half_edge(c1, 0)
    new = Diagram(
        tuple(d.crossings) + (c1, c2),
        theta,
        over,
        free_loops=loops,
        outer=outer,
    )
    record = MoveRecord("R2+", site, (c1, c2))
    inverse = MoveRecord("R2-", (min(half_edge(c1, 2), half_edge(c2, 3)),))
    comp_map = _component_map(d, new, token_hints)

    def orient(od: OrientedDiagram) -> OrientedDiagram:
        forced: Dict[int, int] = {}

        def force(pair, head):
            forced[min(pair)] = head

        if form == "X":
            fwd = _points_away(od, p)
            force(tip, tip[1] if fwd else tip[0])
            force(extra, half_edge(c1, 0) if fwd else half_edge(c2, 1))
            force(bigon, bigon[0] if fwd else bigon[1])
        elif form == "N":
            fwd = _points_away(od, p)
            force(tip, tip[1] if fwd else tip[0])
            force(extra, half_edge(c2, 2) if fwd else half_edge(c2, 1))
            force(bigon, bigon[1] if fwd else bigon[0])
        elif p_loop and q_loop:
            pccw = od.loop_ccw[p[1]]
            qccw = od.loop_ccw[q[1]]
            ret = (half_edge(c1, 1), half_edge(c2, 1))
            far = (half_edge(c2, 2), half_edge(c1, 0))
            force(tip, tip[0] if pccw else tip[1])
            force(ret, ret[1] if pccw else ret[0])
            force(bigon, bigon[0] if qccw else bigon[1])
            force(far, far[1] if qccw else far[0])
        elif p_loop:
            pccw = od.loop_ccw[p[1]]
            ret = (half_edge(c1, 1), half_edge(c2, 1))
            force(tip, tip[0] if pccw else tip[1])
            force(ret, ret[1] if pccw else ret[0])
            qfwd = _points_away(od, q)
            force(bigon, bigon[1] if qfwd else bigon[0])
        elif q_loop:
            qccw = od.loop_ccw[q[1]]
            far = (half_edge(c2, 2), half_edge(c1, 0))
            force(bigon, bigon[0] if qccw else bigon[1])
            force(far, far[1] if qccw else far[0])
            pfwd = _points_away(od, p)
            force(tip, tip[1] if pfwd else tip[0])
        else:
            pfwd = _points_away(od, p)
            qfwd = _points_away(od, q)
            force(tip, tip[1] if pfwd else tip[0])
            force(bigon, bigon[1] if qfwd else bigon[0])
        return _orient_from_heads(new, od, forced, {})

    return ApplyOutcome(new, record, inverse, comp_map, orient)


def _apply_r2_minus(d: Diagram, site: tuple, ids: tuple) -> ApplyOutcome:
    if len(site) != 1:
        raise errors.BadSite("R2- site is (overlap_half_edge,)")
    (ha,) = site
    if ha not in d.theta:
        raise errors.BadSite(f"half-edge {ha} is not in the diagram")
    orbit = d.faces()[d.face_of(ha)]
    if len(orbit) != 2:
        raise errors.BadSite("face is not a two-corner overlap")
    if ha != min(orbit):
        raise errors.BadSite("overlap is named by its least half-edge")
    hb = orbit[0] if orbit[1] == ha else orbit[1]
    c1, c2 = crossing_of(ha), crossing_of(hb)
    if c1 == c2:
        raise errors.BadSite("overlap corners must sit on two crossings")
    if d.arc_id(ha) == d.arc_id(hb):
        raise errors.BadSite("overlap is a twisted pouch, not a push")
    if d.is_over(ha) != d.is_over(d.theta[ha]):
        raise errors.BadSite("strands alternate over/under: a clasp cannot be pulled apart")
    if d.outer is not None and d.face_of(ha) == d.outer_face():
        raise errors.BadSite("overlap is the outer region")

    sigma, tau = slot_of(ha), slot_of(hb)
    pb = half_edge(c1, (sigma + 3) & 3)  # pushed strand, base side
    lB = half_edge(c1, (sigma + 2) & 3)  # landing strand, beyond side
    pB = half_edge(c2, (tau + 2) & 3)  # pushed strand, beyond side
    lb = half_edge(c2, (tau + 3) & 3)  # landing strand, base side
    over_flag = d.over[c1] == ((sigma + 1) & 1)

    dead = {c1, c2}
    new_theta, cycles = _splice_out(d, dead)
    over = {k: v for k, v in d.over.items() if k not in dead}
    crossings = tuple(a for a in d.crossings if a not in dead)
    loops = set(d.free_loops)

    loop_of_port: Dict[int, int] = {}
    loop_owner: Dict[int, int] = {}
    loop_hints: Dict[int, int] = {}
    taken: List[int] = []
    for cyc in cycles:
        lbl = _fresh_loop(d, taken)
        taken.append(lbl)
        loops.add(lbl)
        owner = d.component_of(d.arc_id(cyc[0]))
        loop_owner[lbl] = owner
        loop_hints[lbl] = owner
        for port in cyc:
            loop_of_port[port] = lbl
            loop_of_port[opposite(port)] = lbl

    th = d.theta
    p_closed = th[pb] == pB
    q_closed = th[lb] == lB
    closed_x = th[pb] == lb and th[pB] == lB
    closed_n = th[pb] == lB and th[pB] == lb

    if p_closed and q_closed:
        inv_site: tuple = (("loop", loop_of_port[pb]), ("loop", loop_of_port[lb]), over_flag)
        inv_ids = (c1, c2)
    elif closed_x or closed_n:
        lbl = loop_of_port[pb]
        inv_site = (("loop", lbl), ("loop", lbl), over_flag, "X" if closed_x else "N")
        inv_ids = (c1, c2)
    elif th[pb] == lb:
        inv_site = (th[pB], th[lB], over_flag, "X")
        inv_ids = (c2, c1)
    elif th[pB] == lB:
        inv_site = (th[pb], th[lb], over_flag, "X")
        inv_ids = (c1, c2)
    elif th[pb] == lB:
        inv_site = (th[pB], th[lb], over_flag, "N")
        inv_ids = (c2, c1)
    elif th[pB] == lb:
        inv_site = (th[pb], th[lB], over_flag, "N")
        inv_ids = (c1, c2)
    elif p_closed:
        inv_site = (("loop", loop_of_port[pb]), th[lb], over_flag)
        inv_ids = (c1, c2)
    elif q_closed:
        inv_site = (th[pb], ("loop", loop_of_port[lb]), over_flag)
        inv_ids = (c1, c2)
    else:
        inv_site = (th[pb], th[lb], over_flag)
        inv_ids = (c1, c2)

    new_outer = _outer_after_removal(d, dead, new_theta)
    new = Diagram(
        crossings,
        new_theta,
        over,
        free_loops=loops,
        outer=new_outer,
    )
    record = MoveRecord("R2-", site, ())
    inverse = MoveRecord("R2+", inv_site, inv_ids)
    comp_map = _component_map(d, new, None, loop_hints)

    def orient(od: OrientedDiagram) -> OrientedDiagram:
        senses: Dict[int, bool] = {}
        for lbl, owner in loop_owner.items():
            omega = invariants.whitney_index(od, owner)
            if omega not in (1, -1):
                raise errors.InvalidCertificate("strand closes into a loop with non-unit winding")
            senses[lbl] = omega == 1
        return _orient_from_heads(new, od, {}, senses)

    return ApplyOutcome(new, record, inverse, comp_map, orient)


# ---------------------------------------------------------------------------
# R3: the triangle slide


def _apply_r3(d: Diagram, site: tuple, ids: tuple) -> ApplyOutcome:
    if len(site) != 1:
        raise errors.BadSite("R3 site is (triangle_half_edge,)")
    (t,) = site
    if t not in d.theta:
        raise errors.BadSite(f"half-edge {t} is not in the diagram")
    orbit = d.faces()[d.face_of(t)]
    if len(orbit) != 3:
        raise errors.BadSite("face is not a three-corner triangle")
    cs = {crossing_of(h) for h in orbit}
    if len(cs) != 3:
        raise errors.BadSite("triangle corners must sit on three crossings")
    if d.is_over(t) != d.is_over(d.theta[t]):
        raise errors.BadSite("arc changes level across the triangle; slide a uniform arc")
    if d.outer is not None and d.face_of(t) == d.outer_face():
        raise errors.BadSite("triangle is the outer region")

    def m(h):
        return opposite(h) if crossing_of(h) in cs else h

    theta = {m(a): m(b) for a, b in d.theta.items()}
    new_outer = m(d.outer) if d.outer is not None else None
    new = Diagram(
        d.crossings,
        theta,
        dict(d.over),
        free_loops=d.free_loops,
        outer=new_outer,
    )
    record = MoveRecord("R3", site, ())
    inverse = MoveRecord("R3", (opposite(t),))
    comp_map = _component_map(d, new)

    def orient(od: OrientedDiagram) -> OrientedDiagram:
        # every port survives, but ports of the three site crossings
        # re-pair, so heads transport along m instead of local carry-over
        forced: Dict[int, int] = {}
        for aid, hd in od.head.items():
            a, b = aid, d.theta[aid]
            forced[min(m(a), m(b))] = m(hd)
        return _orient_from_heads(new, od, forced, {})

    return ApplyOutcome(new, record, inverse, comp_map, orient)


# ---------------------------------------------------------------------------
# dispatch and enumeration


_APPLIERS = {
    "R1+": _apply_r1_plus,
    "R1-": _apply_r1_minus,
    "R2+": _apply_r2_plus,
    "R2-": _apply_r2_minus,
    "R3": _apply_r3,
}


def apply_move(d: Diagram, record: MoveRecord) -> ApplyOutcome:
    """Apply one move, returning the rewrite bundle."""
    return _APPLIERS[record.kind](d, record.site, record.ids)


def enumerate_sites(d: Diagram, kind: str) -> List[tuple]:
    """All applicable half-edge-anchored sites of one move kind.

    Loop-anchored R1+/R2+ sites are legal in apply_move but are not
    enumerated: free loops are placeless, so sweeping their attachment
    points adds no positional information.
    """
    if kind not in KINDS:
        raise errors.BadSite(f"unknown move kind {kind!r}")
    sites: List[tuple] = []
    outer = d.outer_face() if d.outer is not None else None
    faces = d.faces() if d.theta else []

    if kind == "R1+":
        for h in sorted(d.theta):
            for side in ("L", "R"):
                for of in (False, True):
                    sites.append((h, side, of))
    elif kind == "R1-":
        for h in sorted(d.theta):
            if d.theta[h] != ccw_next(h):
                continue
            if outer is not None and d.face_of(h) == outer:
                continue
            sites.append((h,))
    elif kind == "R2+":
        for orbit in faces:
            for p in orbit:
                for q in orbit:
                    if p == q or d.arc_id(p) == d.arc_id(q):
                        continue
                    for ov in (False, True):
                        sites.append((p, q, ov))
        # self-pushes: the nested fold fits beside any arc, from either
        # end; the alternating form never embeds in the plane
        for p in sorted(d.theta):
            for ov in (False, True):
                sites.append((p, d.theta[p], ov, "N"))
    elif kind == "R2-":
        for orbit in faces:
            if len(orbit) != 2:
                continue
            ha, hb = min(orbit), max(orbit)
            if crossing_of(ha) == crossing_of(hb):
                continue
            if d.arc_id(ha) == d.arc_id(hb):
                continue
            if d.is_over(ha) != d.is_over(d.theta[ha]):
                continue
            if outer is not None and d.face_of(ha) == outer:
                continue
            sites.append((ha,))
    elif kind == "R3":
        for orbit in faces:
            if len(orbit) != 3:
                continue
            if len({crossing_of(h) for h in orbit}) != 3:
                continue
            if outer is not None and d.face_of(orbit[0]) == outer:
                continue
            for t in orbit:
                if d.is_over(t) == d.is_over(d.theta[t]):
                    sites.append((t,))
    return sites


# ---------------------------------------------------------------------------
# certificates: verify, reverse, transport


@dataclasses.dataclass
class VerifyResult:
    ok: bool
    reason: str = ""
    steps: int = 0
    final: Optional[Diagram] = None
    induced_map: Optional[Dict[int, int]] = None


def _match_final(final: Diagram, dst: Diagram) -> Optional[Dict[int, int]]:
    """Component correspondence final -> dst induced by a plane
    isomorphism, or None when the diagrams differ.

    Free-loop components pair in sorted label order; placeless loops
    admit every pairing, so the sorted one is canonical.
    """
    if canonical_code(final) != canonical_code(dst):
        return None
    try:
        iso = isomorphism(final, dst)
    except errors.UnsupportedDiagram:
        return None
    if iso is None:
        return None
    fc = final.components()
    dc = dst.components()
    if len(fc) != len(dc):
        return None
    dst_comp_of_arc = {aid: j for j, comp in enumerate(dc) for aid in comp}
    f_loops = sorted(final.free_loops)
    d_loops = sorted(dst.free_loops)
    loop_pair = dict(zip(f_loops, d_loops))
    out: Dict[int, int] = {}
    for i, comp in enumerate(fc):
        aid = comp[0]
        if aid < 0:
            out[i] = dst_comp_of_arc[loop_pair[aid]]
        else:
            out[i] = dst_comp_of_arc[dst.arc_id(map_half_edge(iso, aid))]
    return out


def verify_certificate(src: Diagram, cert: MoveCertificate, dst: Diagram) -> VerifyResult:
    """Replay cert on src and check it lands on dst.

    A nonempty claimed component map must equal the map induced by the
    replay composed with a plane isomorphism onto dst, exactly.
    """
    cur = src
    total = {i: i for i in range(len(src.components()))}
    steps = 0
    for rec in cert.moves:
        try:
            out = apply_move(cur, rec)
        except (errors.BadSite, errors.UnsupportedDiagram, errors.InvalidCertificate) as e:
            return VerifyResult(False, f"step {steps} ({rec.kind}): {e}", steps)
        total = {i: out.component_map[j] for i, j in total.items()}
        cur = out.diagram
        steps += 1
    tail = _match_final(cur, dst)
    if tail is None:
        return VerifyResult(False, "replay does not land on the target diagram", steps, cur)
    induced = {i: tail[j] for i, j in total.items()}
    if cert.component_map and cert.comp_map() != induced:
        return VerifyResult(
            False, "claimed component map disagrees with the replay", steps, cur, induced
        )
    return VerifyResult(True, "", steps, cur, induced)


def reverse_certificate(src: Diagram, cert: MoveCertificate) -> MoveCertificate:
    """Replay cert on src and package the step inverses, reversed."""
    cur = src
    inverses: List[MoveRecord] = []
    total = {i: i for i in range(len(src.components()))}
    for rec in cert.moves:
        out = apply_move(cur, rec)
        inverses.append(out.inverse)
        total = {i: out.component_map[j] for i, j in total.items()}
        cur = out.diagram
    back = tuple(sorted((j, i) for i, j in total.items()))
    return MoveCertificate(tuple(reversed(inverses)), back)


def transport_orientation(od: OrientedDiagram, cert: MoveCertificate) -> OrientedDiagram:
    """Carry an orientation through every move of cert."""
    cur = od
    for rec in cert.moves:
        out = apply_move(cur.diagram, rec)
        cur = out.orient(cur)
    return cur


def replay_certificate(d: Diagram, cert: MoveCertificate, od: Optional[OrientedDiagram] = None):
    """Replay cert on d and return (final, final orientation or None,
    component map from d's indices to the final diagram's).

    Unlike verify_certificate this imposes no target, so the caller can
    inspect the replayed diagram itself (labels included).
    """
    cur = d
    cur_od = od
    total = {i: i for i in range(len(d.components()))}
    for rec in cert.moves:
        out = apply_move(cur, rec)
        total = {i: out.component_map[j] for i, j in total.items()}
        if cur_od is not None:
            cur_od = out.orient(cur_od)
        cur = out.diagram
    return cur, cur_od, total


def map_site_token(token, relabel, loop_pair):
    """Rewrite one site token through a plane isomorphism.

    Half-edges go through ``relabel`` (a crossing -> (crossing, shift)
    mapping), loop anchors through ``loop_pair``; structural tokens such
    as side letters pass unchanged.
    """
    if isinstance(token, int) and not isinstance(token, bool):
        return map_half_edge(relabel, token)
    if isinstance(token, tuple) and len(token) == 2 and token[0] == "loop":
        return ("loop", loop_pair[token[1]])
    return token


def rebase_certificate(
    src: Diagram, dst: Diagram, cert: MoveCertificate
) -> Tuple[Tuple[MoveRecord, ...], Diagram]:
    """Rewrite a certificate that replays from src so it replays from dst.

    dst must be plane-isomorphic to src.  The replay lines are advanced
    in lockstep because a single move can land the two lines on
    differently labelled (though isomorphic) diagrams, so the
    isomorphism is re-derived before every step.  Crossing ids on the
    dst line are allocated fresh.  Returns the rewritten records and the
    final diagram of the dst replay.
    """
    cur_src, cur_dst = src, dst
    out_records = []
    for rec in cert.moves:
        relabel = isomorphism(cur_src, cur_dst)
        if relabel is None:
            raise errors.InvalidCertificate(
                "rebase lost the plane isomorphism between replay lines"
            )
        loop_pair = dict(zip(sorted(cur_src.free_loops), sorted(cur_dst.free_loops)))
        site = tuple(map_site_token(t, relabel, loop_pair) for t in rec.site)
        out_src = apply_move(cur_src, rec)
        out_dst = apply_move(cur_dst, MoveRecord(rec.kind, site))
        out_records.append(out_dst.record)
        cur_src, cur_dst = out_src.diagram, out_dst.diagram
    return tuple(out_records), cur_dst


def coward_check(od1: OrientedDiagram, od2: OrientedDiagram, cert: MoveCertificate) -> dict:
    """Writhe/winding screen across a claimed equivalence.

    Verifies cert from od1's diagram to od2's, then compares, per
    matched component, the writhe and the winding index under od2
    against od1's transported through the certificate.  Both are
    preserved by R2/R3 and shifted only by R1, so on an R1-free
    certificate any mismatch refutes the claimed equivalence.
    """
    res = verify_certificate(od1.diagram, cert, od2.diagram)
    if not res.ok:
        raise errors.InvalidCertificate(f"certificate does not verify: {res.reason}")
    cmap = res.induced_map
    w1 = invariants.wcu(od1)
    w2 = invariants.wcu(od2)
    pairs = []
    ok = True
    for i in sorted(cmap):
        j = cmap[i]
        wi, wj = w1[i][0], w2[j][0]
        oi = invariants.whitney_index(od1, i)
        oj = invariants.whitney_index(od2, j)
        same = wi == wj and oi == oj
        ok = ok and same
        pairs.append({"src": i, "dst": j, "w": (wi, wj), "omega": (oi, oj), "equal": same})
    return {"ok": ok, "r1_free": cert.is_r1_free(), "pairs": pairs}

"""Link diagrams as combinatorial maps with over/under marks.

A diagram is a 4-valent plane map: every crossing owns four half-edges listed
in counterclockwise rotation order (slots 0..3, half-edge id = 4*crossing+slot),
an involution `theta` pairs half-edge ends into arcs, and a selector per
crossing says which opposite slot pair {0,2} or {1,3} carries the over-strand.
Strands pass straight through a crossing (slot s enters, slot s+2 leaves).

Faces are the orbits of h -> sigma^-1(theta(h)); travelling along a half-edge
(from its own crossing toward its partner) keeps the orbit's face on the left,
so bounded faces are walked counterclockwise.  The unbounded face is an extra
datum carried as a witness half-edge.  Validation checks V - E + F = 2 on each
connected piece of the shadow, which is exactly planarity of the rotation
system.

Crossing ids need not be contiguous; moves keep surviving labels stable.
Zero-crossing unknot components ("free loops") are carried as bare labels; a
free loop is its own arc and component.  Arc ids are the smaller half-edge id
for ordinary arcs and the (negative) label for free loops.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Optional

from . import errors

PROVENANCE_TAGS = ("caret-arc", "leaf-arc", "closure-strand", "imported")


def crossing_of(h: int) -> int:
    return h >> 2


def slot_of(h: int) -> int:
    return h & 3


def half_edge(c: int, slot: int) -> int:
    return 4 * c + (slot & 3)


def opposite(h: int) -> int:
    """The half-edge the strand through h leaves by (slot + 2)."""
    return h ^ 2


def ccw_next(h: int) -> int:
    return (h & ~3) | ((h + 1) & 3)


def ccw_prev(h: int) -> int:
    return (h & ~3) | ((h - 1) & 3)


class Diagram:
    """Immutable validated diagram."""

    def __init__(
        self,
        crossings: Iterable[int],
        theta: Mapping[int, int],
        over: Mapping[int, int],
        free_loops: Iterable[int] = (),
        provenance: Optional[Mapping[int, str]] = None,
        outer: Optional[int] = None,
        build_info=None,
        validate: bool = True,
    ):
        self.crossings = tuple(sorted(crossings))
        self.theta = dict(theta)
        self.over = dict(over)
        self.free_loops = tuple(sorted(free_loops))
        self.provenance = dict(provenance or {})
        self.outer = outer
        self.build_info = build_info
        self._cache = {}
        if validate:
            self._validate()

    # -- construction helpers ------------------------------------------------

    def _validate(self):
        cset = set(self.crossings)
        if len(cset) != len(self.crossings):
            raise errors.ValidationError("duplicate crossing ids")
        half = {half_edge(c, s) for c in cset for s in range(4)}
        if set(self.theta) != half:
            raise errors.ValidationError("theta must cover each half-edge exactly once")
        for h, t in self.theta.items():
            if t == h or t not in half or self.theta[t] != h:
                raise errors.ValidationError("theta is not a fixed-point-free involution")
        if set(self.over) != cset:
            raise errors.ValidationError("over marks must cover each crossing exactly once")
        for c, sel in self.over.items():
            if sel not in (0, 1):
                raise errors.ValidationError(f"over selector {sel!r} must pick an opposite pair")
        loopset = set(self.free_loops)
        if len(loopset) != len(self.free_loops):
            raise errors.ValidationError("duplicate free loop labels")
        for lbl in loopset:
            if lbl >= 0:
                raise errors.ValidationError("free loop labels are negative ints")
        if self.crossings:
            if self.outer not in half:
                raise errors.ValidationError("outer face witness must be a half-edge")
        elif self.outer is not None:
            raise errors.ValidationError("crossingless diagram takes no outer witness")
        arcids = set(self.arc_ids())
        for aid, tag in self.provenance.items():
            if aid not in arcids:
                raise errors.ValidationError(f"provenance for unknown arc {aid}")
            if tag not in PROVENANCE_TAGS:
                raise errors.ValidationError(f"unknown provenance tag {tag!r}")
        self._check_planar()

    def _check_planar(self):
        for piece in self.shadow_pieces():
            v = len(piece)
            e = sum(
                1
                for h, t in self.theta.items()
                if h < t and crossing_of(h) in piece
            )
            f = sum(1 for face in self.faces() if crossing_of(face[0]) in piece)
            if v - e + f != 2:
                raise errors.NonPlanar(
                    f"shadow piece has V-E+F = {v}-{e}+{f} != 2"
                )

    # -- basic queries ---------------------------------------------------------

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def half_edges(self):
        return self.theta.keys()

    def arc_id(self, h: int) -> int:
        return min(h, self.theta[h])

    def arc_ids(self):
        ids = [h for h, t in self.theta.items() if h < t]
        ids.sort()
        ids.extend(self.free_loops)
        return ids

    def arc_ends(self, aid: int):
        if aid < 0:
            return None
        return (aid, self.theta[aid])

    def is_over(self, h: int) -> bool:
        return (h & 1) == self.over[crossing_of(h)]

    def is_free_loop(self, aid: int) -> bool:
        return aid < 0

    # -- derived structure -----------------------------------------------------

    def faces(self):
        """Face orbits as tuples of half-edges, each starting at its minimum.

        Travelling along each listed half-edge keeps the face on the left.
        """
        got = self._cache.get("faces")
        if got is None:
            if not self.crossings and len(self.free_loops) == 1:
                # lone closed curve: face 0 inside, face 1 outside
                got = ((), ())
                self._cache["faces"] = got
                return got
            seen = set()
            orbits = []
            for start in sorted(self.theta):
                if start in seen:
                    continue
                orbit = []
                h = start
                while True:
                    orbit.append(h)
                    seen.add(h)
                    h = ccw_prev(self.theta[h])
                    if h == start:
                        break
                k = orbit.index(min(orbit))
                orbits.append(tuple(orbit[k:] + orbit[:k]))
            orbits.sort(key=lambda o: o[0])
            got = tuple(orbits)
            self._cache["faces"] = got
        return got

    def face_of(self, h: int) -> int:
        got = self._cache.get("face_of")
        if got is None:
            got = {}
            for i, orbit in enumerate(self.faces()):
                for x in orbit:
                    got[x] = i
            self._cache["face_of"] = got
        return got[h]

    def outer_face(self) -> int:
        if not self.crossings:
            if len(self.free_loops) == 1:
                return 1
            raise errors.UnsupportedDiagram("crossingless diagram has no face table")
        return self.face_of(self.outer)

    def shadow_pieces(self):
        """Connected components of the 4-valent shadow (disjoint crossing sets)."""
        got = self._cache.get("pieces")
        if got is None:
            parent = {c: c for c in self.crossings}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for h, t in self.theta.items():
                a, b = find(crossing_of(h)), find(crossing_of(t))
                if a != b:
                    parent[a] = b
            groups = {}
            for c in self.crossings:
                groups.setdefault(find(c), set()).add(c)
            got = tuple(frozenset(g) for _, g in sorted(groups.items()))
            self._cache["pieces"] = got
        return got

    def components(self):
        """Link components as tuples of arc ids (free loops are singletons)."""
        got = self._cache.get("components")
        if got is None:
            comps = []
            seen = set()
            for aid in self.arc_ids():
                if aid in seen or aid < 0:
                    continue
                comp = []
                h = aid
                while True:
                    a = self.arc_id(h)
                    comp.append(a)
                    seen.add(a)
                    h = opposite(self.theta[h])
                    if h == aid:
                        break
                comps.append(tuple(sorted(set(comp))))
            comps.sort(key=lambda c: c[0])
            comps.extend((lbl,) for lbl in self.free_loops)
            got = tuple(comps)
            self._cache["components"] = got
        return got

    def component_of(self, aid: int) -> int:
        got = self._cache.get("component_of")
        if got is None:
            got = {}
            for i, comp in enumerate(self.components()):
                for a in comp:
                    got[a] = i
            self._cache["component_of"] = got
        return got[aid]

    def checkerboard(self, shade_face: Optional[int] = None):
        """Proper 2-coloring of faces; returns tuple of bools (True = shaded).

        By default the closure-strand provenance picks the shaded class (the
        face on the closure arc's non-outer side); otherwise the outer face is
        unshaded.
        """
        if not self.crossings:
            if len(self.free_loops) == 1 and shade_face in (None, 0):
                return (True, False)
            raise errors.UnsupportedDiagram("checkerboard needs crossings")
        faces = self.faces()
        if shade_face is None:
            shade_face = self.canonical_shaded_face()
        color = [None] * len(faces)
        color[shade_face] = True
        stack = [shade_face]
        adj = self._face_adjacency()
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if color[g] is None:
                    color[g] = not color[f]
                    stack.append(g)
                elif color[g] == color[f]:
                    raise errors.ValidationError("faces are not 2-colorable")
        if any(c is None for c in color):
            raise errors.UnsupportedDiagram(
                "checkerboard undefined on disconnected shadow"
            )
        return tuple(color)

    def _face_adjacency(self):
        adj = [set() for _ in self.faces()]
        for h, t in self.theta.items():
            if h < t:
                a, b = self.face_of(h), self.face_of(t)
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def canonical_shaded_face(self) -> int:
        if not self.crossings and len(self.free_loops) == 1:
            return 0
        closure = [a for a, tag in self.provenance.items() if tag == "closure-strand"]
        if len(closure) == 1:
            h1, h2 = self.arc_ends(closure[0])
            outer = self.outer_face()
            for h in (h1, h2):
                if self.face_of(h) != outer:
                    return self.face_of(h)
            raise errors.ValidationError("closure strand borders only the outer face")
        outer = self.outer_face()
        for h in self.faces()[outer]:
            g = self.face_of(self.theta[h])
            if g != outer:
                return g
        raise errors.ValidationError("outer face has no distinct neighbor")

    # -- serialization -----------------------------------------------------------

    def emit_pd(self) -> str:
        crossings = [
            {
                "id": c,
                "ccw_half_edges": [half_edge(c, s) for s in range(4)],
                "over_pair": self.over[c],
            }
            for c in self.crossings
        ]
        arcs = []
        for aid in self.arc_ids():
            if aid < 0:
                arcs.append({"id": aid, "free_loop": True})
            else:
                arcs.append({"id": aid, "half_edges": list(self.arc_ends(aid))})
        doc = {
            "crossings": crossings,
            "arcs": arcs,
            "provenance": {str(a): t for a, t in sorted(self.provenance.items())},
            "outer_face_witness": self.outer,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def parse_pd(cls, text: str) -> "Diagram":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise errors.SyntaxError(f"bad diagram JSON: {exc}") from exc
        if not isinstance(doc, dict) or "crossings" not in doc or "arcs" not in doc:
            raise errors.SyntaxError("diagram JSON needs 'crossings' and 'arcs'")
        label_to_internal = {}
        crossings = []
        over = {}
        for entry in doc["crossings"]:
            c = entry["id"]
            if not isinstance(c, int) or c < 0:
                raise errors.SyntaxError("crossing ids are non-negative ints")
            crossings.append(c)
            labels = entry["ccw_half_edges"]
            if len(labels) != 4 or len(set(labels)) != 4:
                raise errors.SyntaxError("each crossing lists 4 distinct half-edges")
            for s, lbl in enumerate(labels):
                if lbl in label_to_internal:
                    raise errors.SyntaxError(f"half-edge label {lbl} reused")
                label_to_internal[lbl] = half_edge(c, s)
            sel = entry["over_pair"]
            if isinstance(sel, list):
                pos = sorted(labels.index(x) for x in sel)
                if pos == [0, 2]:
                    sel = 0
                elif pos == [1, 3]:
                    sel = 1
                else:
                    raise errors.ValidationError(
                        "over pair must select opposite half-edges"
                    )
            if sel not in (0, 1):
                raise errors.ValidationError("over selector must be 0, 1, or a pair")
            over[c] = sel
        theta = {}
        free_loops = []
        arc_label_map = {}
        for entry in doc["arcs"]:
            aid = entry["id"]
            if entry.get("free_loop"):
                free_loops.append(aid)
                arc_label_map[aid] = aid
                continue
            ends = entry["half_edges"]
            if len(ends) != 2:
                raise errors.SyntaxError("arc lists its two half-edge ends")
            try:
                a, b = (label_to_internal[x] for x in ends)
            except KeyError as exc:
                raise errors.SyntaxError(f"arc references unknown half-edge {exc}") from exc
            theta[a] = b
            theta[b] = a
            arc_label_map[aid] = min(a, b)
        provenance = {}
        for key, tag in (doc.get("provenance") or {}).items():
            aid = int(key)
            if aid not in arc_label_map:
                raise errors.ValidationError(f"provenance for unknown arc {aid}")
            provenance[arc_label_map[aid]] = tag
        outer_label = doc.get("outer_face_witness")
        outer = None
        if outer_label is not None:
            if outer_label not in label_to_internal:
                raise errors.SyntaxError("outer witness is not a listed half-edge")
            outer = label_to_internal[outer_label]
        return cls(crossings, theta, over, free_loops, provenance, outer)

    # -- misc ----------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.crossings == other.crossings
            and self.theta == other.theta
            and self.over == other.over
            and self.free_loops == other.free_loops
            and self.outer == other.outer
        )

    def __hash__(self):
        return hash(
            (
                self.crossings,
                tuple(sorted(self.theta.items())),
                tuple(sorted(self.over.items())),
                self.free_loops,
                self.outer,
            )
        )

    def __repr__(self):
        return (
            f"<Diagram {self.n_crossings} crossings, {len(self.components())} components, "
            f"{len(self.free_loops)} loops>"
        )


class OrientedDiagram:
    """A diagram plus one direction per arc.

    `head` maps each ordinary arc id to the half-edge end the arc points into;
    `loop_ccw` maps each free loop label to its plane sense.
    """

    def __init__(self, diagram: Diagram, head: Mapping[int, int], loop_ccw: Mapping[int, bool]):
        self.diagram = diagram
        self.head = dict(head)
        self.loop_ccw = dict(loop_ccw)
        self._validate()

    def _validate(self):
        d = self.diagram
        ordinary = {a for a in d.arc_ids() if a >= 0}
        if set(self.head) != ordinary:
            raise errors.ValidationError("orientation must cover every arc")
        for aid, h in self.head.items():
            if h not in d.arc_ends(aid):
                raise errors.ValidationError(f"head of arc {aid} must be one of its ends")
        if set(self.loop_ccw) != set(d.free_loops):
            raise errors.ValidationError("orientation must cover every free loop")
        for c in d.crossings:
            for s in (0, 1):
                h1, h2 = half_edge(c, s), half_edge(c, s + 2)
                if self.points_away(h1) == self.points_away(h2):
                    raise errors.ValidationError(
                        f"strand through crossing {c} has inconsistent directions"
                    )

    def points_away(self, h: int) -> bool:
        """True when the arc holding h flows out of h's crossing through h."""
        aid = self.diagram.arc_id(h)
        return self.head[aid] == self.diagram.theta[h]

    def exit_half_edge(self, c: int, strand_slot: int) -> int:
        """The outgoing half-edge of the strand on slots {s, s+2} at crossing c."""
        h1, h2 = half_edge(c, strand_slot), half_edge(c, strand_slot + 2)
        return h1 if self.points_away(h1) else h2

    def reversed_component(self, comp_index: int) -> "OrientedDiagram":
        comp = self.diagram.components()[comp_index]
        head = dict(self.head)
        loop_ccw = dict(self.loop_ccw)
        for aid in comp:
            if aid < 0:
                loop_ccw[aid] = not loop_ccw[aid]
            else:
                ends = self.diagram.arc_ends(aid)
                head[aid] = ends[0] if head[aid] == ends[1] else ends[1]
        return OrientedDiagram(self.diagram, head, loop_ccw)

    def __eq__(self, other):
        return (
            isinstance(other, OrientedDiagram)
            and self.diagram == other.diagram
            and self.head == other.head
            and self.loop_ccw == other.loop_ccw
        )

    def __hash__(self):
        return hash(
            (
                self.diagram,
                tuple(sorted(self.head.items())),
                tuple(sorted(self.loop_ccw.items())),
            )
        )


def orient(d: Diagram, seeds) -> OrientedDiagram:
    """Propagate direction seeds along strands.

    `seeds` maps component index to either (arc_id, head_half_edge) for an
    ordinary component or a bool (ccw) for a free loop component.  Components
    without a seed get a deterministic default: lowest arc id directed along
    its lower half-edge; free loops counterclockwise.  Propagation along a
    strand cannot conflict.
    """
    head = {}
    loop_ccw = {}
    for idx, comp in enumerate(d.components()):
        seed = seeds.get(idx) if seeds else None
        first = comp[0]
        if first < 0:
            loop_ccw[first] = True if seed is None else bool(seed)
            continue
        if seed is None:
            aid, to = first, d.theta[first]
        else:
            aid, to = seed
            if aid not in comp or to not in d.arc_ends(aid):
                raise errors.ValidationError(f"bad seed for component {idx}")
        h = to
        while True:
            head[d.arc_id(h)] = h
            h = d.theta[opposite(h)]
            if h == to:
                break
    return OrientedDiagram(d, head, loop_ccw)


def canonical_orientation(d: Diagram) -> OrientedDiagram:
    return orient(d, {})


# -- canonical codes and isomorphism ---------------------------------------------


def _piece_code_from(d: Diagram, root: int, heads=None):
    """Deterministic BFS encoding of root's shadow piece, rooted at root."""
    entry = {crossing_of(root): root}
    order = [crossing_of(root)]
    seen = {crossing_of(root)}
    code = []
    i = 0
    while i < len(order):
        c = order[i]
        e = entry[c]
        row = [1 if d.is_over(e) else 0]
        h = e
        for _ in range(4):
            t = d.theta[h]
            c2 = crossing_of(t)
            if c2 not in seen:
                seen.add(c2)
                entry[c2] = t
                order.append(c2)
            row.append(order.index(c2))
            row.append((slot_of(t) - slot_of(entry[c2])) & 3)
            if heads is not None:
                row.append(1 if heads(h) else 0)
            h = ccw_next(h)
        code.append(tuple(row))
        i += 1
    return tuple(code), entry, order


def _piece_canonical(d: Diagram, roots, heads=None):
    best = None
    best_maps = None
    for r in sorted(roots):
        code, entry, order = _piece_code_from(d, r, heads)
        if best is None or code < best:
            best = code
            best_maps = (entry, order)
    return best, best_maps


def canonical_code(d: Diagram, od: Optional[OrientedDiagram] = None):
    """Plane-isomorphism invariant of the diagram (orientation optional)."""
    heads = None
    if od is not None:
        heads = od.points_away
    pieces = d.shadow_pieces()
    loop_part = len(d.free_loops)
    if not pieces:
        return ("loops", loop_part)
    outer_face = set(d.faces()[d.outer_face()])
    piece_codes = []
    outer_code = None
    for piece in pieces:
        half = [half_edge(c, s) for c in piece for s in range(4)]
        outer_roots = [h for h in half if h in outer_face]
        if outer_roots:
            outer_code, _ = _piece_canonical(d, outer_roots, heads)
        else:
            code, _ = _piece_canonical(d, half, heads)
            piece_codes.append(code)
    piece_codes.sort()
    return (outer_code, tuple(piece_codes), loop_part)


def isomorphism(d1: Diagram, d2: Diagram, od1=None, od2=None):
    """A crossing bijection realizing plane isomorphism, or None.

    Only supports connected shadows (plus any number of free loops); the
    orientation pair must be given together or not at all.
    """
    if len(d1.shadow_pieces()) > 1 or len(d2.shadow_pieces()) > 1:
        raise errors.UnsupportedDiagram("isomorphism needs a connected shadow")
    if len(d1.free_loops) != len(d2.free_loops):
        return None
    if not d1.crossings:
        if d2.crossings:
            return None
        return {}
    heads1 = od1.points_away if od1 is not None else None
    heads2 = od2.points_away if od2 is not None else None
    roots1 = [h for h in d1.theta if d1.face_of(h) == d1.outer_face()]
    roots2 = [h for h in d2.theta if d2.face_of(h) == d2.outer_face()]
    code1, (entry1, order1) = _piece_canonical(d1, roots1, heads1)
    code2, (entry2, order2) = _piece_canonical(d2, roots2, heads2)
    if code1 != code2:
        return None
    mapping = {}
    for idx, c1 in enumerate(order1):
        c2 = order2[idx]
        shift = slot_of(entry2[c2]) - slot_of(entry1[c1])
        mapping[c1] = (c2, shift & 3)
    return mapping


def map_half_edge(mapping, h: int) -> int:
    c2, shift = mapping[crossing_of(h)]
    return half_edge(c2, slot_of(h) + shift)

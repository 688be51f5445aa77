"""Build link diagrams from reduced tree pairs.

The two trees of a reduced pair are drawn caret-for-crossing: the top tree
above a horizontal axis of leaves, the bottom tree mirrored below.  Every
caret resolves exactly one gap between adjacent leaves, so each tree has one
caret per gap.  A caret turns into a crossing with four counterclockwise
slots:

    top caret:    slot 0 parent edge (up), 1 left child, 2 gap strand (down),
                  3 right child
    bottom caret: slot 0 parent edge (down), 1 right child, 2 gap strand (up),
                  3 left child

The two child edges form an arch that passes over the vertical strand
(parent edge continued through the gap).  Arcs:

    * tree arcs between a caret's parent slot and its parent's child slot
    * one gap arc per gap, joining the two carets that resolve it
    * one leaf arc per leaf, joining the leaf's parent carets top and bottom
    * one closure arc joining the two root carets around the left side

The face left of travelling the closure arc upward from the bottom root is
the unbounded one.  The identity element has no carets and builds a lone
counterclockwise free loop.
"""

from __future__ import annotations

from . import errors
from .diagram import (
    Diagram,
    OrientedDiagram,
    canonical_code,
    crossing_of,
    half_edge,
    slot_of,
)
from .trees import LEAF, TreePair, leaf_count, node_layout


def _top_child_slot(side: str) -> int:
    return 1 if side == "L" else 3


def _bottom_child_slot(side: str) -> int:
    return 3 if side == "L" else 1


def link_of(pair: TreePair) -> Diagram:
    """The unoriented link diagram of a reduced tree pair."""
    if not pair.is_reduced():
        pair = pair.reduce()
    n = leaf_count(pair.top)
    if n == 1:
        return Diagram(
            crossings=(),
            theta={},
            over={},
            free_loops=(-1,),
            provenance={-1: "closure-strand"},
            outer=None,
            build_info={"pair": pair, "n_leaves": 1},
        )
    top_carets, top_leaves = node_layout(pair.top)
    bot_carets, bot_leaves = node_layout(pair.bottom)

    def top_c(gap):
        return 2 * gap

    def bot_c(gap):
        return 2 * gap + 1

    theta = {}
    provenance = {}

    def join(a, b, tag):
        theta[a] = b
        theta[b] = a
        provenance[min(a, b)] = tag
        return min(a, b)

    info = {
        "pair": pair,
        "n_leaves": n,
        "top_crossing": {g: top_c(g) for g in range(n - 1)},
        "bottom_crossing": {g: bot_c(g) for g in range(n - 1)},
        "gap_arc": {},
        "leaf_arc": {},
    }
    top_root = None
    bot_root = None
    for g, (parent, side) in top_carets.items():
        if parent is None:
            top_root = g
        else:
            join(
                half_edge(top_c(g), 0),
                half_edge(top_c(parent), _top_child_slot(side)),
                "caret-arc",
            )
    for g, (parent, side) in bot_carets.items():
        if parent is None:
            bot_root = g
        else:
            join(
                half_edge(bot_c(g), 0),
                half_edge(bot_c(parent), _bottom_child_slot(side)),
                "caret-arc",
            )
    for g in range(n - 1):
        info["gap_arc"][g] = join(
            half_edge(top_c(g), 2), half_edge(bot_c(g), 2), "caret-arc"
        )
    for leaf in range(n):
        tp, ts = top_leaves[leaf]
        bp, bs = bot_leaves[leaf]
        info["leaf_arc"][leaf] = join(
            half_edge(top_c(tp), _top_child_slot(ts)),
            half_edge(bot_c(bp), _bottom_child_slot(bs)),
            "leaf-arc",
        )
    closure_bottom = half_edge(bot_c(bot_root), 0)
    info["closure_arc"] = join(half_edge(top_c(top_root), 0), closure_bottom, "closure-strand")
    crossings = list(range(2 * (n - 1)))
    over = {c: 1 for c in crossings}
    return Diagram(
        crossings,
        theta,
        over,
        free_loops=(),
        provenance=provenance,
        outer=closure_bottom,
        build_info=info,
    )


def _subtree_from(d: Diagram, apex: int, top: bool, used: set):
    """Rebuild the subtree whose root caret owns parent port ``apex``.

    The parent and gap ports carry the under strand, the two child ports
    the over arch; a child port leading to another under port is an
    internal node, one leading to an over port is a leaf.  Returns a tree
    or None when the local pattern breaks.
    """
    c = crossing_of(apex)
    if c in used or d.is_over(apex):
        return None
    used.add(c)
    sigma = slot_of(apex)
    first = (sigma + 1) & 3 if top else (sigma + 3) & 3
    second = (sigma + 3) & 3 if top else (sigma + 1) & 3
    kids = []
    for s in (first, second):
        other = d.theta.get(half_edge(c, s))
        if other is None:
            return None
        if d.is_over(other):
            kids.append(LEAF)
        else:
            sub = _subtree_from(d, other, top, used)
            if sub is None:
                return None
            kids.append(sub)
    return (kids[0], kids[1])


def from_diagram(d: Diagram):
    """Recognize a diagram as link_of of a reduced pair, or return None.

    Inverse of link_of up to plane isomorphism: labels, slot rotations and
    the choice of outer witness do not matter.  The closure arc is the only
    arc joining two under ports of root carets, so every under-under arc is
    tried as the closure with either end as the top root; a candidate pair
    survives only if its own diagram matches canonically.
    """
    if not d.crossings:
        return TreePair(LEAF, LEAF) if len(d.free_loops) == 1 else None
    if d.free_loops:
        return None
    want = canonical_code(d)
    for aid in d.arc_ids():
        h1, h2 = d.arc_ends(aid)
        if d.is_over(h1) or d.is_over(h2):
            continue
        for top_apex, bot_apex in ((h1, h2), (h2, h1)):
            used: set = set()
            top = _subtree_from(d, top_apex, True, used)
            if top is None:
                continue
            bottom = _subtree_from(d, bot_apex, False, used)
            if bottom is None or len(used) != len(d.crossings):
                continue
            if leaf_count(top) != leaf_count(bottom):
                continue
            pair = TreePair(top, bottom)
            if pair.is_reduced() and canonical_code(link_of(pair)) == want:
                return pair
    return None


def shaded_turn_classes(d: Diagram):
    """Split the shaded faces into counterclockwise and clockwise classes.

    Every arc has one shaded side.  At each crossing the two shaded corners
    are diagonal; join them by an edge.  When that graph is bipartite the two
    classes orient every strand consistently: a face in the ccw class keeps
    its boundary arcs running counterclockwise around it, a cw face clockwise.
    The class holding the canonical shaded face (enclosed by the closure
    strand when that tag is present) is the ccw one.

    Returns a dict face -> bool (True = ccw), or None when not bipartite.
    """
    shaded = d.checkerboard()
    anchor = d.canonical_shaded_face()
    adj = {f: [] for f in range(len(shaded)) if shaded[f]}
    for c in d.crossings:
        corners = [d.face_of(half_edge(c, s)) for s in range(4)]
        picked = [f for f in corners if shaded[f]]
        a, b = picked[0], picked[1]
        if a == b:
            return None
        adj[a].append(b)
        adj[b].append(a)
    turn = {anchor: True}
    stack = [anchor]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in turn:
                turn[g] = not turn[f]
                stack.append(g)
            elif turn[g] == turn[f]:
                return None
    if len(turn) != len(adj):
        raise errors.UnsupportedDiagram("shaded faces form a disconnected graph")
    return turn


def in_oriented_subgroup(pair: TreePair) -> bool:
    """Whether the shading-induced orientation of the diagram is consistent."""
    d = link_of(pair)
    if not d.crossings:
        return True
    return shaded_turn_classes(d) is not None


def orient_by_shading(d: Diagram) -> OrientedDiagram:
    """Direct every arc by the turn class of its shaded side."""
    if not d.crossings:
        return OrientedDiagram(d, {}, {lbl: True for lbl in d.free_loops})
    turn = shaded_turn_classes(d)
    if turn is None:
        raise errors.NotOrientable("checkerboard orientation conflicts with a strand")
    head = {}
    for aid in d.arc_ids():
        h1, h2 = d.arc_ends(aid)
        f1 = d.face_of(h1)
        if f1 in turn:
            head[aid] = h2 if turn[f1] else h1
        else:
            f2 = d.face_of(h2)
            head[aid] = h1 if turn[f2] else h2
    return OrientedDiagram(d, head, {lbl: True for lbl in d.free_loops})


def oriented_link_of(pair: TreePair) -> OrientedDiagram:
    """The canonically directed diagram of an oriented-subgroup element.

    Raises NotOrientable outside the oriented subgroup.
    """
    return orient_by_shading(link_of(pair))

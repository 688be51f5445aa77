"""Full binary trees and reduced tree pairs with the group operations.

Grammar: a tree is "." (leaf) or "(TT)" (caret over two subtrees); an element
is written "top|bottom" for a pair of trees with equal leaf counts.  A pair is
reduced when no gap index carries a caret with two leaf children in both trees
at once.  Multiplication expands both factors to a common middle tree and
composes; inversion swaps top and bottom.

Trees are plain immutable data: the module constant LEAF, or a 2-tuple
(left, right).  Leaves of an n-leaf tree are indexed 0..n-1 left to right and
gaps 0..n-2, gap i lying between leaf i and leaf i+1.  Each internal node of a
tree resolves exactly one gap (the one between its subtrees' leaf blocks),
which is what lets carets of two trees correspond by position.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from . import errors

LEAF = None

Tree = object  # LEAF or (Tree, Tree); alias for documentation only


def is_leaf(t) -> bool:
    return t is None


def parse_tree(text: str):
    """Parse the tree grammar, demanding full consumption of the input."""
    tree, rest = _parse_prefix(text)
    if rest:
        raise errors.SyntaxError(f"trailing input after tree: {rest!r}")
    return tree


def _parse_prefix(text: str):
    if not text:
        raise errors.SyntaxError("unexpected end of input")
    head = text[0]
    if head == ".":
        return LEAF, text[1:]
    if head == "(":
        left, rest = _parse_prefix(text[1:])
        right, rest = _parse_prefix(rest)
        if not rest or rest[0] != ")":
            raise errors.SyntaxError("expected ')'")
        return (left, right), rest[1:]
    raise errors.SyntaxError(f"unexpected character {head!r}")


def emit_tree(t) -> str:
    if t is None:
        return "."
    return "(" + emit_tree(t[0]) + emit_tree(t[1]) + ")"


def leaf_count(t) -> int:
    if t is None:
        return 1
    return leaf_count(t[0]) + leaf_count(t[1])


def height(t) -> int:
    if t is None:
        return 0
    return 1 + max(height(t[0]), height(t[1]))


def sibling_leaf_gaps(t) -> frozenset:
    """Gap indices carrying a caret whose two children are both leaves."""
    gaps = []

    def walk(node, offset):
        if node is None:
            return 1
        nl = walk(node[0], offset)
        nr = walk(node[1], offset + nl)
        if node[0] is None and node[1] is None:
            gaps.append(offset)
        return nl + nr

    walk(t, 0)
    return frozenset(gaps)


def prune_gap(t, gap: int):
    """Replace the caret with two leaf children at `gap` by a single leaf."""

    def walk(node, offset):
        if node is None:
            return LEAF, 1
        nl = leaf_count(node[0])
        if node[0] is None and node[1] is None and offset == gap:
            return LEAF, 2
        left, _ = walk(node[0], offset)
        right, _ = walk(node[1], offset + nl)
        return (left, right), nl + leaf_count(node[1])

    out, _ = walk(t, 0)
    if leaf_count(out) != leaf_count(t) - 1:
        raise ValueError(f"no prunable caret at gap {gap}")
    return out


def graft(t, subs):
    """Replace leaf i of t with subs[i]; subs must cover every leaf."""
    it = iter(subs)

    def walk(node):
        if node is None:
            return next(it)
        return (walk(node[0]), walk(node[1]))

    out = walk(t)
    try:
        next(it)
    except StopIteration:
        return out
    raise ValueError("too many replacement subtrees")


def merge(a, b):
    """Smallest common refinement of two trees."""
    if a is None:
        return b
    if b is None:
        return a
    return (merge(a[0], b[0]), merge(a[1], b[1]))


def subtrees_at_leaves(base, refined):
    """For each leaf position of base, the subtree refined places there."""
    out = []

    def walk(b, r):
        if b is None:
            out.append(r)
            return
        if r is None:
            raise ValueError("refined does not refine base")
        walk(b[0], r[0])
        walk(b[1], r[1])

    walk(base, refined)
    return out


def node_layout(t):
    """Parent structure keyed by gap index.

    Returns (caret_parent, leaf_parent): caret_parent maps each internal
    node's gap to (parent_gap or None, side), leaf_parent maps each leaf
    index to (parent_gap, side), side being "L" or "R".  A single-leaf tree
    yields ({}, {}) since the lone leaf has no parent.
    """
    caret_parent = {}
    leaf_parent = {}

    def walk(node, offset, parent_gap, side):
        if node is None:
            if parent_gap is not None:
                leaf_parent[offset] = (parent_gap, side)
            return
        nl = leaf_count(node[0])
        gap = offset + nl - 1
        caret_parent[gap] = (parent_gap, side)
        walk(node[0], offset, gap, "L")
        walk(node[1], offset + nl, gap, "R")

    walk(t, 0, None, None)
    return caret_parent, leaf_parent


@lru_cache(maxsize=None)
def trees_with_leaves(n: int) -> tuple:
    """All shapes with n leaves, sorted by their parenthesis encoding."""
    if n < 1:
        return ()
    if n == 1:
        return (LEAF,)
    shapes = [
        (left, right)
        for k in range(1, n)
        for left in trees_with_leaves(k)
        for right in trees_with_leaves(n - k)
    ]
    shapes.sort(key=emit_tree)
    return tuple(shapes)


class TreePair:
    """A pair of equal-leaf-count trees; reduced pairs are group elements."""

    __slots__ = ("top", "bottom")

    def __init__(self, top, bottom):
        if leaf_count(top) != leaf_count(bottom):
            raise errors.LeafMismatch(
                f"leaf counts differ: {leaf_count(top)} vs {leaf_count(bottom)}"
            )
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)

    def __setattr__(self, *_):
        raise AttributeError("TreePair is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, TreePair)
            and self.top == other.top
            and self.bottom == other.bottom
        )

    def __hash__(self):
        return hash((self.top, self.bottom))

    def __repr__(self):
        return f"TreePair({self.emit()!r})"

    @property
    def leaf_count(self) -> int:
        return leaf_count(self.top)

    def emit(self) -> str:
        return emit_tree(self.top) + "|" + emit_tree(self.bottom)

    def is_reduced(self) -> bool:
        return not (sibling_leaf_gaps(self.top) & sibling_leaf_gaps(self.bottom))

    def reduce(self) -> "TreePair":
        top, bottom = self.top, self.bottom
        while True:
            common = sibling_leaf_gaps(top) & sibling_leaf_gaps(bottom)
            if not common:
                return TreePair(top, bottom)
            gap = min(common)
            top = prune_gap(top, gap)
            bottom = prune_gap(bottom, gap)

    def __mul__(self, other: "TreePair") -> "TreePair":
        if not isinstance(other, TreePair):
            return NotImplemented
        middle = merge(self.bottom, other.top)
        top = graft(self.top, subtrees_at_leaves(self.bottom, middle))
        bottom = graft(other.bottom, subtrees_at_leaves(other.top, middle))
        return TreePair(top, bottom).reduce()

    def __invert__(self) -> "TreePair":
        return TreePair(self.bottom, self.top)

    def __pow__(self, n: int) -> "TreePair":
        if n < 0:
            return (~self) ** (-n)
        out = identity()
        for _ in range(n):
            out = out * self
        return out


def identity() -> TreePair:
    return TreePair(LEAF, LEAF)


def x0() -> TreePair:
    return parse_pair("((..).)|(.(..))")


def parse_pair(text: str) -> TreePair:
    parts = text.split("|")
    if len(parts) != 2:
        raise errors.SyntaxError("element text must be 'top|bottom'")
    return TreePair(parse_tree(parts[0]), parse_tree(parts[1]))


def enumerate_elements(max_leaves: int) -> Iterator[TreePair]:
    """All reduced pairs with at most max_leaves leaves.

    Ordered by leaf count, then lexicographically on the pair encoding; the
    identity (1 leaf) comes first.  Exhaustive: Catalan(n-1)^2 candidates per
    leaf count n, filtered by reducedness.
    """
    if max_leaves < 1:
        return
    for n in range(1, max_leaves + 1):
        shapes = trees_with_leaves(n)
        pairs = []
        for top in shapes:
            top_gaps = sibling_leaf_gaps(top)
            for bottom in shapes:
                if not (top_gaps & sibling_leaf_gaps(bottom)):
                    pairs.append(TreePair(top, bottom))
        pairs.sort(key=TreePair.emit)
        yield from pairs

"""Newick reading and writing.

The accepted grammar is the classic one: nested parenthesized groups with
comma-separated children, optional branch lengths (``:0.42``) and optional
internal-node labels, terminated by ``;``.  Branch lengths and internal
labels are parsed and discarded; only the shape and the leaf labels matter
here.  Labels are unquoted runs of characters other than ``( ) , : ;`` and
whitespace.

Rooted trees require every group to have exactly two children.  Unrooted
trees require the outermost group to have three children (two are accepted
and merged, so the output of rooted writers round-trips) and every nested
group to have two.
"""

from __future__ import annotations

from typing import Optional

from .trees import RootedTree, TreeError, UnrootedTree, label_key

_LABEL_STOP = set("(),:;'\"[]")


class NewickError(TreeError):
    """Malformed Newick text; ``position`` is a 0-based text offset."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


def _skip_ws(text: str, i: int) -> int:
    n = len(text)
    while i < n and text[i].isspace():
        i += 1
    return i


def _read_label(text: str, i: int) -> tuple[str, int]:
    j = i
    n = len(text)
    while j < n and text[j] not in _LABEL_STOP and not text[j].isspace():
        j += 1
    return text[i:j], j


def _skip_length(text: str, i: int) -> int:
    """Consume ``:<number>``, returning the index after the number."""
    i += 1  # the ':'
    j = i
    n = len(text)
    while j < n and (text[j].isdigit() or text[j] in "+-.eE"):
        j += 1
    if j == i:
        raise NewickError("expected a branch length after ':'", i)
    return j


def parse_newick(text: str, rooted: bool):
    """Parse one tree; returns :class:`RootedTree` or :class:`UnrootedTree`."""
    children: list[list[int]] = []
    labels: list[Optional[str]] = []
    seen: set[str] = set()

    def new_node(kids: list[int], lab: Optional[str]) -> int:
        children.append(kids)
        labels.append(lab)
        return len(children) - 1

    stack: list[list[int]] = []
    open_pos: list[int] = []
    i = _skip_ws(text, 0)
    n = len(text)
    last = -1
    expecting_subtree = True
    while True:
        if i >= n:
            raise NewickError("unexpected end of input", n)
        c = text[i]
        if expecting_subtree:
            if c == "(":
                stack.append([])
                open_pos.append(i)
                i = _skip_ws(text, i + 1)
                continue
            lab, j = _read_label(text, i)
            if not lab:
                raise NewickError(f"expected a subtree, found {c!r}", i)
            if lab in seen:
                raise NewickError(f"duplicate leaf label {lab!r}", i)
            seen.add(lab)
            last = new_node([], lab)
            i = _skip_ws(text, j)
            if i < n and text[i] == ":":
                i = _skip_ws(text, _skip_length(text, i))
            if stack:
                stack[-1].append(last)
            expecting_subtree = False
            continue
        if c == ",":
            if not stack:
                raise NewickError("',' outside any group", i)
            i = _skip_ws(text, i + 1)
            expecting_subtree = True
            continue
        if c == ")":
            if not stack:
                raise NewickError("unbalanced ')'", i)
            kids = stack.pop()
            at = open_pos.pop()
            if len(kids) < 2:
                raise NewickError("group with fewer than two children", at)
            last = new_node(kids, None)
            i = _skip_ws(text, i + 1)
            ignored, j = _read_label(text, i)  # internal label, discarded
            i = _skip_ws(text, j)
            if i < n and text[i] == ":":
                i = _skip_ws(text, _skip_length(text, i))
            if stack:
                stack[-1].append(last)
            continue
        if c == ";":
            if stack:
                raise NewickError("unbalanced '('", open_pos[-1])
            i = _skip_ws(text, i + 1)
            if i < n:
                raise NewickError("trailing text after ';'", i)
            break
        raise NewickError(f"unexpected character {c!r}", i)

    return _to_rooted(children, labels, last) if rooted \
        else _to_unrooted(children, labels, last)


def _to_rooted(children: list[list[int]], labels: list[Optional[str]],
               top: int) -> RootedTree:
    for v, kids in enumerate(children):
        if len(kids) not in (0, 2):
            raise NewickError(
                f"rooted trees are binary; found a group with {len(kids)} children")
    n_parent: list[int] = []
    n_left: list[int] = []
    n_right: list[int] = []
    n_labels: list[Optional[str]] = []
    stack = [(top, -1)]
    while stack:
        old, par = stack.pop()
        new = len(n_parent)
        n_parent.append(par)
        n_left.append(-1)
        n_right.append(-1)
        n_labels.append(labels[old])
        if par != -1:
            if n_left[par] == -1:
                n_left[par] = new
            else:
                n_right[par] = new
        kids = children[old]
        if kids:
            stack.append((kids[1], new))
            stack.append((kids[0], new))
    return RootedTree(n_parent, n_left, n_right, n_labels, 0)


def _to_unrooted(children: list[list[int]], labels: list[Optional[str]],
                 top: int) -> UnrootedTree:
    top_kids = children[top]
    if len(top_kids) not in (0, 2, 3):
        raise NewickError(
            f"the outermost group of an unrooted tree needs 3 children, got {len(top_kids)}")
    for v, kids in enumerate(children):
        if v != top and len(kids) not in (0, 2):
            raise NewickError(
                f"unrooted trees are binary; found a group with {len(kids)} children")
    suppress_top = len(top_kids) == 2
    old_ids = [v for v in range(len(children)) if not (suppress_top and v == top)]
    idx = {v: i for i, v in enumerate(old_ids)}
    adj: list[list[int]] = [[] for _ in old_ids]
    n_labels = [labels[v] for v in old_ids]

    def connect(a: int, b: int) -> None:
        adj[idx[a]].append(idx[b])
        adj[idx[b]].append(idx[a])

    for v in old_ids:
        for c in children[v]:
            connect(v, c)
    if suppress_top:
        connect(top_kids[0], top_kids[1])
    return UnrootedTree(adj, n_labels)


def _emit(label_of, kids_of, top: int) -> list[str]:
    parts: list[str] = []
    stack: list[tuple[str, object]] = [("n", top)]
    while stack:
        kind, x = stack.pop()
        if kind == "t":
            parts.append(x)  # type: ignore[arg-type]
            continue
        v: int = x  # type: ignore[assignment]
        kids = kids_of(v)
        if not kids:
            parts.append(label_of(v))
            continue
        parts.append("(")
        stack.append(("t", ")"))
        for k in range(len(kids) - 1, 0, -1):
            stack.append(("n", kids[k]))
            stack.append(("t", ","))
        stack.append(("n", kids[0]))
    return parts


def write_newick(tree) -> str:
    """Serialize a tree.

    Rooted trees keep their child order.  Unrooted trees are written in a
    canonical orientation (topmost at the neighbor of the smallest-label
    leaf, branches ordered by their smallest label) so that equal trees
    serialize identically regardless of internal node numbering.
    """
    if isinstance(tree, RootedTree):
        left, right, labels = tree.left, tree.right, tree.labels
        parts = _emit(
            lambda v: labels[v],
            lambda v: () if left[v] == -1 else (left[v], right[v]),
            tree.root)
        return "".join(parts) + ";"
    if isinstance(tree, UnrootedTree):
        if len(tree) == 1:
            return f"{tree.labels[0]};"
        if len(tree) == 2:
            a, b = sorted(tree.labels, key=label_key)
            return f"({a},{b});"
        adj, labels = tree.adj, tree.labels
        start = tree.leaf_node(min(tree.taxa, key=label_key))
        top = adj[start][0]
        par = {top: -1}
        order = [top]
        stack = [top]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u != par[v]:
                    par[u] = v
                    order.append(u)
                    stack.append(u)
        kids: dict[int, list[int]] = {v: [] for v in order}
        for v in order:
            if par[v] != -1:
                kids[par[v]].append(v)
        best: dict[int, str] = {}
        for v in reversed(order):
            if labels[v] is not None:
                best[v] = labels[v]
            else:
                best[v] = min((best[c] for c in kids[v]), key=label_key)
        for v in order:
            kids[v].sort(key=lambda c: label_key(best[c]))
        parts = _emit(lambda v: labels[v], lambda v: kids[v], top)
        return "".join(parts) + ";"
    raise TypeError(f"not a tree: {tree!r}")

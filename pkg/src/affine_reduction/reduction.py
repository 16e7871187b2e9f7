"""Reduction trees, reduction paths and the two explicit path constructions.

A non-minimal ``w`` has a pivot ``(w', s)`` with ``w ~ w'`` and
``l(s w' s) = l(w') - 2``; its children are ``s w'`` (one-step edge, length
drops by one) and ``s w' s`` (two-step edge, length drops by two).  Subtrees
are memoized per element and strategy, so the tree is stored as a DAG and
path statistics are computed by dynamic programming over it.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .affine import AffineElement, AffineWeylGroup
from .classes import NewtonClass, _cyclic_bfs, cyclic_class, f_map, first_drop, is_minimal
from .errors import ConfigurationError, ContractError, ResourceError
from .rootdata import dot

DEFAULT_NODE_BUDGET = 1_000_000
DEFAULT_PATH_BUDGET = 10_000_000

ONE_STEP = "one-step"
TWO_STEP = "two-step"


def _strategy_key(strategy) -> str:
    if strategy in (None, "canonical"):
        return "canonical"
    if isinstance(strategy, int) and not isinstance(strategy, bool):
        return f"seeded:{strategy}"
    if isinstance(strategy, str) and strategy.startswith("seeded:"):
        int(strategy.split(":", 1)[1])
        return strategy
    raise ConfigurationError(f"unknown tree strategy {strategy!r}")


def find_reduction_move(G: AffineWeylGroup, w: AffineElement, strategy="canonical"):
    """Pivot ``(w', label)`` for ``w``, or ``None`` when ``w`` is minimal.

    The canonical strategy takes the first drop in breadth-first order over
    the cyclic class; a seeded strategy picks uniformly among all drops with a
    generator keyed by the seed and the element.
    """
    key = _strategy_key(strategy)
    if key == "canonical":
        return first_drop(G, w)
    order, _ = _cyclic_bfs(G, w)
    drops = []
    for v in order:
        lv = G.length(v)
        for s in G.simple_reflections:
            if G.length(G.mul(s.element, v, s.element)) == lv - 2:
                drops.append((v, s.label))
    if not drops:
        return None
    rng = random.Random(f"{key.split(':', 1)[1]}:{G.format(w)}")
    return rng.choice(drops)


@dataclass(frozen=True)
class TreeNode:
    length: int
    pivot: tuple | None  # (w', label)
    children: tuple  # ((child, kind), ...)


@dataclass(frozen=True)
class ReductionPath:
    nodes: tuple  # root, ..., end
    kinds: tuple  # edge kinds, one per edge

    @property
    def end(self) -> AffineElement:
        return self.nodes[-1]

    @property
    def length(self) -> int:
        return len(self.kinds)


class ReductionTree:
    """A reduction tree stored as a DAG of :class:`TreeNode` keyed by element."""

    def __init__(self, G: AffineWeylGroup, root: AffineElement, strategy: str, nodes: dict):
        self.G = G
        self.root = root
        self.strategy = strategy
        self.nodes = nodes

    @property
    def end_points(self) -> list[AffineElement]:
        return sorted(v for v, n in self.nodes.items() if not n.children)

    def edges(self) -> list[tuple]:
        return [(v, c, kind, n.pivot) for v, n in self.nodes.items() for c, kind in n.children]

    def profile(self, node: AffineElement | None = None) -> Counter:
        """``Counter{(end, path length): number of paths}`` from ``node``."""
        memo = self.G.cache[("profile", self.strategy)]
        node = self.root if node is None else node
        if node in memo:
            return memo[node]
        stack = [(node, False)]
        while stack:
            v, ready = stack.pop()
            if v in memo:
                continue
            kids = self.nodes[v].children
            if not kids:
                memo[v] = Counter({(v, 0): 1})
            elif ready:
                prof = Counter()
                for c, _ in kids:
                    for (end, k), n in memo[c].items():
                        prof[end, k + 1] += n
                memo[v] = prof
            else:
                stack.append((v, True))
                stack.extend((c, False) for c, _ in kids if c not in memo)
        return memo[node]

    def path_count(self) -> int:
        return sum(self.profile().values())

    def check(self) -> None:
        """Certify the child-length law and minimality of every end point."""
        G = self.G
        for v, n in self.nodes.items():
            if not n.children:
                if not is_minimal(G, v):
                    raise ContractError(f"end point {G.format(v)} is not minimal")
                continue
            wp, lab = n.pivot
            if wp not in cyclic_class(G, v):
                raise ContractError(f"pivot of {G.format(v)} is not in its cyclic class")
            lens = sorted((G.length(c) - n.length, kind) for c, kind in n.children)
            if lens != [(-2, TWO_STEP), (-1, ONE_STEP)]:
                raise ContractError(f"child lengths at {G.format(v)} are {lens}")


def build_tree(G: AffineWeylGroup, w: AffineElement, strategy="canonical",
               node_budget: int = DEFAULT_NODE_BUDGET) -> ReductionTree:
    key = _strategy_key(strategy)
    memo = G.cache[("tree", key)]
    G.check(w)
    nodes = {}
    stack = [w]
    while stack:
        v = stack.pop()
        if v in nodes:
            continue
        node = memo.get(v)
        if node is None:
            pivot = find_reduction_move(G, v, key)
            children = ()
            if pivot is not None:
                wp, lab = pivot
                s = G.by_label[lab].element
                one = G.multiply(s, wp)
                children = ((one, ONE_STEP), (G.multiply(one, s), TWO_STEP))
            node = TreeNode(G.length(v), pivot, children)
            memo[v] = node
        nodes[v] = node
        if len(nodes) > node_budget:
            raise ResourceError(f"reduction tree of {G.format(w)} exceeds {node_budget} nodes")
        stack.extend(c for c, _ in node.children if c not in nodes)
    return ReductionTree(G, w, key, nodes)


def paths(tree: ReductionTree, filter: NewtonClass | None = None,
          budget: int = DEFAULT_PATH_BUDGET) -> Iterator[ReductionPath]:
    """Stream root-to-end paths in canonical order, optionally keeping only
    those whose end point maps to ``filter`` under ``f``."""
    G = tree.G
    wanted = None
    if filter is not None:
        wanted = {end for (end, _) in tree.profile() if f_map(G, end) == filter}
    emitted = 0
    stack = [((tree.root,), ())]
    while stack:
        nodes, kinds = stack.pop()
        v = nodes[-1]
        kids = tree.nodes[v].children
        if not kids:
            if wanted is None or v in wanted:
                emitted += 1
                if emitted > budget:
                    raise ResourceError(f"more than {budget} reduction paths")
                yield ReductionPath(nodes, kinds)
            continue
        for c, kind in reversed(kids):
            if wanted is not None and not any(end in wanted for end, _ in tree.profile(c)):
                continue
            stack.append((nodes + (c,), kinds + (kind,)))


def score(G: AffineWeylGroup, end: AffineElement, path_length: int):
    """``l(p) + l(end) - <nu_bar_end, 2 rho>``."""
    return path_length + G.length(end) - dot(f_map(G, end).nu, G.datum.two_rho)


# -- moves and the explicit constructions --------------------------------------------


def is_reduction_move(G: AffineWeylGroup, x: AffineElement, y: AffineElement,
                      up_to_cyclic: bool = False) -> bool:
    """Whether ``x`` reduces to ``y`` in one edge of some reduction tree.

    With ``up_to_cyclic`` the target only has to lie in the cyclic class of a
    child; dimensions and counts of paths are insensitive to that change.
    """
    lx = G.length(x)
    for v in cyclic_class(G, x):
        for s in G.simple_reflections:
            one = G.multiply(s.element, v)
            two = G.multiply(one, s.element)
            if G.length(two) != lx - 2:
                continue
            if y in (one, two):
                return True
            if up_to_cyclic and (y in cyclic_class(G, one) or y in cyclic_class(G, two)):
                return True
    return False


def _finite_labels(G: AffineWeylGroup, u: int) -> list[int]:
    return [i + 1 for i in G.W0.words[u]]


def constructive_path_regular(G: AffineWeylGroup, x: int, y: int, mu: Sequence[int]) -> list[AffineElement]:
    """Elements ``w_0 t^mu, ..., x t^mu y`` of the regular-translation construction.

    First strip a reduced word of ``w_0 (yx)^{-1}`` from the left, reaching
    ``yx t^mu``; then cyclically move the letters of ``y`` to the right,
    keeping only the conjugations that shorten the element by two.
    """
    mu = tuple(mu)
    if not G.datum.is_regular(mu):
        raise ContractError(f"constructive_path_regular needs regular dominant mu, got {mu}")
    W0 = G.W0
    yx = W0.mul(y, x)
    t_mu = G.translation(mu)
    cur = G.multiply(G.finite(yx), t_mu)
    word = _finite_labels(G, W0.mul(W0.longest, W0.inv(yx)))
    part_a = [cur]
    for lab in reversed(word):
        cur = G.multiply(G.by_label[lab].element, cur)
        part_a.append(cur)
    seq = part_a[::-1]
    cur = seq[-1]
    for lab in _finite_labels(G, y):
        s = G.by_label[lab].element
        nxt = G.mul(s, cur, s)
        delta = G.length(nxt) - G.length(cur)
        if delta == -2:
            seq.append(nxt)
        elif delta != 0:
            raise ContractError(f"unexpected length change {delta} in the conjugation stage")
        cur = nxt
    if cur != G.xmuy(x, mu, y):
        raise ContractError("construction did not reach x t^mu y")
    return seq


def constructive_path_antidominant(G: AffineWeylGroup, y: int, mu: Sequence[int]) -> list[AffineElement]:
    """Elements ``w_0 t^mu, w_0 t^mu s_{i_1}, ..., w_0 t^mu y`` along a reduced word of ``y``."""
    mu = tuple(mu)
    if not G.datum.is_dominant(mu) or not G.is_min_in_left_coset(G.mul(G.translation(mu), G.finite(y))):
        raise ContractError("constructive_path_antidominant needs t^mu y minimal in its W_0-coset")
    cur = G.xmuy(G.W0.longest, mu, G.W0.identity)
    seq = [cur]
    for lab in _finite_labels(G, y):
        cur = G.multiply(cur, G.by_label[lab].element)
        seq.append(cur)
    return seq


def lemma_regular_length(G: AffineWeylGroup, x: int, y: int) -> int:
    W0 = G.W0
    twice = 2 * W0.length(W0.longest) - (W0.length(x) - W0.length(y) + W0.length(W0.mul(y, x)))
    return twice // 2


# -- exports ------------------------------------------------------------------------------


def _node_order(tree: ReductionTree) -> list[AffineElement]:
    order, seen = [], {tree.root}
    queue = [tree.root]
    while queue:
        v = queue.pop(0)
        order.append(v)
        for c, _ in tree.nodes[v].children:
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return order


def tree_to_json(tree: ReductionTree) -> dict:
    G = tree.G
    order = _node_order(tree)
    ids = {v: i for i, v in enumerate(order)}
    nodes = []
    for v in order:
        n = tree.nodes[v]
        nodes.append({"id": ids[v], "element": G.to_json(v), "label": G.format(v),
                      "length": n.length, "f": f_map(G, v).to_json(), "end": not n.children})
    edges = []
    for v in order:
        n = tree.nodes[v]
        for c, kind in n.children:
            edges.append({"from": ids[v], "to": ids[c], "kind": kind,
                          "pivot": {"element": G.to_json(n.pivot[0]), "s": n.pivot[1]}})
    return {"root": ids[tree.root], "strategy": tree.strategy, "nodes": nodes, "edges": edges,
            "paths": tree.path_count()}


def tree_to_dot(tree: ReductionTree) -> str:
    G = tree.G
    order = _node_order(tree)
    ids = {v: i for i, v in enumerate(order)}
    lines = ["digraph reduction_tree {", "  node [shape=box];"]
    for v in order:
        n = tree.nodes[v]
        label = f"{G.format(v)}\\nl={n.length}\\nf={f_map(G, v).format()}"
        extra = ", peripheries=2" if not n.children else ""
        lines.append(f'  n{ids[v]} [label="{label}"{extra}];')
    for v in order:
        for c, kind in tree.nodes[v].children:
            style = "solid" if kind == ONE_STEP else "dashed"
            lines.append(f'  n{ids[v]} -> n{ids[c]} [style={style}, label="{kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


"""Numerical invariants read off reduction trees.

``virtual_dim`` is the closed formula; ``dim_adlv`` and ``count_adlv`` are the
maximum path score over paths ending in a given class and the number of paths
attaining it.  Very-special end points compare ``n_{K_w}`` with ``n_K`` over
``tau``-stable spherical subsets of the Levi affine simple reflections.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .affine import AffineElement, AffineWeylGroup
from .classes import (LeviContext, NewtonClass, check_class, coxeter_type, cycle_type, defect,
                      f_map, longest_length, standard_triple)
from .errors import ContractError
from .reduction import DEFAULT_PATH_BUDGET, ReductionTree, build_tree, paths, score
from .rootdata import dot


def virtual_dim(G: AffineWeylGroup, w: AffineElement, c: NewtonClass) -> Fraction:
    """``d_w(c) = (l(w) + l(eta(w)) - def(c)) / 2 - <nu_c, rho>``."""
    c = check_class(G, c)
    dec = G.decompose_xmuy(w)
    eta = G.W0.length(dec.eta)
    return Fraction(G.length(w) + eta - defect(G, c), 2) - dot(c.nu, G.datum.rho)


def _tree(G, w, tree, strategy):
    return tree if tree is not None else build_tree(G, w, strategy)


def _best(G: AffineWeylGroup, tree: ReductionTree, c: NewtonClass, weight=None):
    best, total = None, 0
    for (end, k), n in sorted(tree.profile().items()):
        if f_map(G, end) != c:
            continue
        sc = score(G, end, k)
        mult = n * (weight(end) if weight else 1)
        if best is None or sc > best:
            best, total = sc, mult
        elif sc == best:
            total += mult
    return best, total


def dim_adlv(G: AffineWeylGroup, w: AffineElement, c: NewtonClass, tree: ReductionTree | None = None,
             strategy="canonical") -> int | None:
    """Maximal score over paths ending in ``c``; ``None`` if no path does."""
    c = check_class(G, c)
    best, _ = _best(G, _tree(G, w, tree, strategy), c)
    return None if best is None else int(best)


def count_adlv(G: AffineWeylGroup, w: AffineElement, c: NewtonClass, tree: ReductionTree | None = None,
               strategy="canonical") -> int:
    """Number of paths ending in ``c`` whose score is maximal (0 if none)."""
    c = check_class(G, c)
    _, n = _best(G, _tree(G, w, tree, strategy), c)
    return n


# -- spherical subsets and very special end points --------------------------------------


def spherical_subsets(L: LeviContext, tau: AffineElement) -> list[tuple[tuple, int, bool]]:
    """``(K, n_K, tau-stable)`` for every spherical ``K``, ``K`` as sorted node indices."""
    perm = L.tau_permutation(tau)
    out = []
    nodes = range(len(L.simples))
    for r in range(len(L.simples) + 1):
        for K in combinations(nodes, r):
            if not L.is_spherical(K):
                continue
            stable = {perm[i] for i in K} == set(K)
            out.append((K, longest_length(L, K), stable))
    return out


def is_very_special(G: AffineWeylGroup, w: AffineElement) -> bool:
    cache = G.cache["very_special"]
    if w not in cache:
        tr = standard_triple(G, w)
        n_w = longest_length(tr.levi, tr.K)
        cache[w] = all(n_w >= n for _, n, stable in spherical_subsets(tr.levi, tr.tau) if stable)
    return cache[w]


def springer_shape(G: AffineWeylGroup, w: AffineElement) -> str:
    """Isomorphism shape of the end-point data: type of ``W_{K_w}`` and the
    cycle type of ``Ad(tau)`` on ``K_w`` when it is nontrivial."""
    tr = standard_triple(G, w)
    shape = coxeter_type(tr.levi, tr.K)
    cyc = cycle_type(tr.tau_perm, tr.K)
    if any(n > 1 for n in cyc):
        shape += "/" + ".".join(str(n) for n in cyc)
    return shape


@dataclass(frozen=True)
class PathReport:
    index: int
    end: AffineElement
    f_end: NewtonClass
    length: int
    score: Fraction
    d_w: Fraction
    cordial: bool
    very_special: bool
    levi_roots: tuple
    K: tuple
    tau: AffineElement
    shape: str

    def to_json(self, G: AffineWeylGroup) -> dict:
        return {
            "id": self.index,
            "end": G.to_json(self.end),
            "end_label": G.format(self.end),
            "f_end": self.f_end.to_json(),
            "length": self.length,
            "score": _num(self.score),
            "cordial": self.cordial,
            "very_special": self.very_special,
            "springer_factor": {"levi_roots": [list(r) for r in self.levi_roots], "K": list(self.K),
                                "tau": G.to_json(self.tau), "shape": self.shape},
        }


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def classify_paths(G: AffineWeylGroup, w: AffineElement, c: NewtonClass, tree: ReductionTree | None = None,
                   strategy="canonical", budget: int = DEFAULT_PATH_BUDGET) -> list[PathReport]:
    c = check_class(G, c)
    tree = _tree(G, w, tree, strategy)
    d = virtual_dim(G, w, c)
    reports = []
    for i, p in enumerate(paths(tree, c, budget)):
        end = p.end
        sc = score(G, end, p.length)
        if sc > d:
            raise ContractError(f"path score {sc} exceeds d_w = {d} for {G.format(w)}")
        tr = standard_triple(G, end)
        reports.append(PathReport(
            index=i, end=end, f_end=f_map(G, end), length=p.length, score=sc, d_w=d,
            cordial=sc == d, very_special=is_very_special(G, end),
            levi_roots=tuple(tuple(r) for r in tr.levi.describe()), K=tuple(tr.K_names()),
            tau=tr.tau, shape=springer_shape(G, end)))
    return reports


def count_alv(G: AffineWeylGroup, w: AffineElement, c: NewtonClass,
              n_values: Mapping[str, int] | None = None, tree: ReductionTree | None = None,
              strategy="canonical") -> int:
    """Sum of ``n_values[shape(end)]`` (default 1) over score-maximal paths ending in ``c``."""
    c = check_class(G, c)
    n_values = dict(n_values or {})
    for k, v in n_values.items():
        if int(v) < 1:
            raise ContractError(f"n_values[{k!r}] must be a positive integer")
    weight = (lambda end: int(n_values.get(springer_shape(G, end), 1))) if n_values else None
    _, n = _best(G, _tree(G, w, tree, strategy), c, weight)
    return n


def comparison_flags(G: AffineWeylGroup, w: AffineElement, c: NewtonClass,
                     tree: ReductionTree | None = None) -> dict:
    """Hypotheses of the orbit-count comparison theorem for ``(w, c)``."""
    dec = G.decompose_xmuy(w)
    dim = dim_adlv(G, w, c, tree)
    d = virtual_dim(G, w, c)
    integral = all(Fraction(x).denominator == 1 for x in c.nu)
    return {
        "antidominant_chamber": dec.x == G.W0.longest,
        "regular_translation": G.datum.is_regular(dec.mu),
        "dim_equals_virtual": dim is not None and dim == d,
        "integral_newton_point": integral,
    }


# -- superregular predictions ------------------------------------------------------------


@dataclass(frozen=True)
class SuperregularRow:
    x: int
    y: int
    predicted_nonempty: bool
    predicted_dim: Fraction | None
    dim: int | None
    mismatch: bool


def superregular_hypotheses(G: AffineWeylGroup, mu, c: NewtonClass) -> dict:
    """Check ``<mu, a> >= 2`` and both readings of ``nu + 2 rho_check <= mu``.

    ``root_order`` asks for ``mu - nu - 2 rho_check`` to be a nonnegative
    combination of simple coroots; ``dominant_difference`` asks for the
    difference to be dominant.  Both compare semisimple parts, so a central
    discrepancy (a Kottwitz mismatch) is left to the kappa test.
    """
    d = G.datum
    diff = tuple(Fraction(m) - n - 2 * r for m, n, r in zip(mu, c.nu, d.rho_check))
    return {
        "superregular": all(dot(mu, a) >= 2 for a in d.simple_roots),
        "root_order": all(x >= 0 for x in d.semisimple_part(diff)),
        "dominant_difference": d.is_dominant(diff),
    }


def check_superregular(G: AffineWeylGroup, mu, c: NewtonClass, strategy="canonical") -> dict:
    """Compare predicted ``(nonempty, dim)`` with tree values over ``(x, y)`` in ``W_0^2``."""
    c = check_class(G, c)
    mu = tuple(int(m) for m in mu)
    hyp = superregular_hypotheses(G, mu, c)
    if not hyp["superregular"] or not hyp["root_order"]:
        raise ContractError(f"superregular hypotheses fail for mu={mu}, c={c.format()}: {hyp}")
    W0 = G.W0
    full = frozenset(range(G.datum.semisimple_rank))
    kappa_ok = G.datum.pi1_class(mu) == c.kappa
    rows = []
    for x in range(len(W0)):
        for y in range(len(W0)):
            w = G.xmuy(x, mu, y)
            pred = kappa_ok and W0.support(W0.mul(y, x)) == full
            pdim = virtual_dim(G, w, c) if pred else None
            dim = dim_adlv(G, w, c, strategy=strategy)
            mismatch = (dim is not None) != pred or (pred and dim != pdim)
            rows.append(SuperregularRow(x, y, pred, pdim, dim, mismatch))
    return {"hypotheses": hyp, "variants_agree": hyp["root_order"] == hyp["dominant_difference"],
            "rows": rows, "mismatches": sum(r.mismatch for r in rows)}

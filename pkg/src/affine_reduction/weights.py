"""Weight multiplicities of the dual group via Freudenthal's recursion.

Coweights of ``G`` are read as weights of the dual group, whose roots are the
coroots of ``G``.  The invariant form is ``B(x, y) = sum_{a > 0} <x, a><y, a>``
and the dual Weyl vector is ``rho_check``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import AffineWeylGroup
from .classes import NewtonClass, check_class, lambda_b
from .errors import ConfigurationError
from .invariants import count_adlv
from .reduction import build_tree
from .rootdata import RootDatum, dot


def _form(d: RootDatum, x: Sequence, y: Sequence) -> Fraction:
    return sum((Fraction(dot(x, a)) * dot(y, a) for a in d.positive_roots), Fraction(0))


def dominant_weights_below(d: RootDatum, mu: Sequence[int]) -> list[tuple]:
    """Dominant ``lambda <= mu``, sorted from ``mu`` downwards by height."""
    mu = tuple(mu)
    found = {mu}
    frontier = [mu]
    while frontier:
        nxt = []
        for lam in frontier:
            for b in d.positive_coroots:
                v = d.dominant_rep(tuple(x - y for x, y in zip(lam, b)))[0]
                if v not in found and d.leq(v, mu):
                    found.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(found, key=lambda v: (-dot(v, d.two_rho), v))


@dataclass
class WeightTable:
    mu: tuple
    dominant: dict  # dominant weight -> multiplicity

    def multiplicity(self, d: RootDatum, lam: Sequence[int]) -> int:
        return self.dominant.get(d.dominant_rep(tuple(lam))[0], 0)

    def all_weights(self, d: RootDatum) -> dict:
        W = d.weyl
        out = {}
        for lam, m in self.dominant.items():
            for u in range(len(W)):
                out[W.act(u, lam)] = m
        return dict(sorted(out.items()))


def weight_table(d: RootDatum, mu: Sequence[int]) -> WeightTable:
    mu = tuple(int(x) for x in mu)
    if not d.is_dominant(mu):
        raise ConfigurationError(f"highest weight {mu} is not dominant")
    delta = d.rho_check
    top = _form(d, [m + r for m, r in zip(mu, delta)], [m + r for m, r in zip(mu, delta)])
    mult: dict[tuple, int] = {}

    def m_of(v):
        return mult.get(d.dominant_rep(v)[0], 0)

    for lam in dominant_weights_below(d, mu):
        if lam == mu:
            mult[lam] = 1
            continue
        shifted = [x + r for x, r in zip(lam, delta)]
        denom = top - _form(d, shifted, shifted)
        total = Fraction(0)
        for b in d.positive_coroots:
            k = 1
            while True:
                v = tuple(x + k * y for x, y in zip(lam, b))
                if not d.leq(d.dominant_rep(v)[0], mu):
                    break
                total += _form(d, v, b) * m_of(v)
                k += 1
        m = 2 * total / denom
        if m.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {m} at {lam}")
        if m:
            mult[lam] = int(m)
    return WeightTable(mu, {k: v for k, v in mult.items() if v})


def weight_multiplicity(d: RootDatum, mu: Sequence[int], lam: Sequence[int]) -> int:
    """``dim V_mu(lambda)`` for the dual group."""
    cache = d.__dict__.setdefault("_weight_tables", {})
    mu = tuple(int(x) for x in mu)
    if mu not in cache:
        cache[mu] = weight_table(d, mu)
    return cache[mu].multiplicity(d, tuple(int(x) for x in lam))


def weyl_dimension(d: RootDatum, mu: Sequence[int]) -> int:
    num, den = Fraction(1), Fraction(1)
    for a in d.positive_roots:
        num *= dot(mu, a) + dot(d.rho_check, a)
        den *= dot(d.rho_check, a)
    return int(num / den)


@dataclass(frozen=True)
class ChiResult:
    mu: tuple
    c: NewtonClass
    engine_count: int
    dual_mult: int

    @property
    def equal(self) -> bool:
        return self.engine_count == self.dual_mult

    def to_json(self) -> dict:
        return {"mu": list(self.mu), "class": self.c.to_json(), "engine_count": self.engine_count,
                "dual_mult": self.dual_mult, "equal": self.equal}


def chi_check(G: AffineWeylGroup, mu: Sequence[int], c: NewtonClass, strategy="canonical") -> ChiResult:
    """Compare the top-component count at ``w_0 t^mu`` with ``dim V_mu(lambda_b)``."""
    c = check_class(G, c)
    mu = tuple(int(x) for x in mu)
    lam = lambda_b(G, c)
    w = G.xmuy(G.W0.longest, mu, G.W0.identity)
    engine = count_adlv(G, w, c, build_tree(G, w, strategy))
    if G.datum.pi1_class(mu) != c.kappa:
        dual = 0
    else:
        dual = weight_multiplicity(G.datum, mu, lam)
    return ChiResult(mu, c, engine, dual)


def integral_classes(G: AffineWeylGroup, mu: Sequence[int]) -> list[NewtonClass]:
    """Classes ``(kappa(mu), lambda)`` for dominant ``lambda <= mu``."""
    d = G.datum
    kappa = d.pi1_class(mu)
    return sorted(NewtonClass(kappa, tuple(Fraction(x) for x in lam))
                  for lam in dominant_weights_below(d, mu))

"""Arithmetic in the extended affine Weyl group ``X_* x| W_0``.

An element ``t^lambda u`` is stored as ``AffineElement(t=lambda, u=u)`` where
``u`` indexes the finite Weyl group of the root datum.  The length function is
the Iwahori-Matsumoto formula

    l(t^lambda u) = sum_{a > 0, u^-1 a > 0} |<lambda, a>|
                  + sum_{a > 0, u^-1 a < 0} |<lambda, a> - 1|,

which corresponds to the base alcove in the dominant chamber.  With this
normalization ``l(t^mu z) = l(t^mu) - l(z)`` and ``l(z t^mu) = l(z) + l(t^mu)``
for dominant regular ``mu`` and ``z`` in ``W_0``; the test-suite certifies both.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import ConfigurationError, ContractError, ResourceError
from .rootdata import RootDatum, dot


@dataclass(frozen=True, order=True)
class AffineElement:
    """``t^t . u`` with ``t`` an integral coweight and ``u`` a finite Weyl index."""

    t: tuple
    u: int


@dataclass(frozen=True)
class SimpleReflection:
    label: int  # 0 for the affine node, i >= 1 for s_i
    element: AffineElement
    root: int  # index of the gradient's positive root
    affine: bool


@dataclass(frozen=True)
class XMuYDecomposition:
    """``w = x t^mu y`` with ``mu`` dominant and ``t^mu y`` minimal in ``W_0 t^mu y``."""

    x: int
    mu: tuple
    y: int
    eta: int


class AffineWeylGroup:
    """The extended affine Weyl group of a root datum, with cached lengths."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.W0 = datum.weyl
        self.rank = datum.rank
        self.zero = tuple(0 for _ in range(datum.rank))
        self.identity = AffineElement(self.zero, self.W0.identity)
        self._length: dict[AffineElement, int] = {}
        # memo tables of the higher layers (cyclic classes, trees, ...)
        self.cache: dict[str, dict] = defaultdict(dict)
        self.simple_reflections = self._build_simple_reflections()
        self.by_label = {s.label: s for s in self.simple_reflections}
        for s in self.simple_reflections:
            if self.length(s.element) != 1:
                raise ContractError(f"simple reflection {s.label} has length {self.length(s.element)}")

    def _build_simple_reflections(self) -> list[SimpleReflection]:
        d = self.datum
        refl = []
        comps = d.components()
        for n, comp in enumerate(comps):
            members = [k for k, c in enumerate(d.root_coefficients)
                       if all(c[j] == 0 for j in range(len(c)) if j not in comp)]
            theta = max(members, key=lambda k: (d.heights[k], d.root_coefficients[k]))
            elt = AffineElement(d.positive_coroots[theta], self.W0.reflection(theta))
            refl.append(SimpleReflection(-n, elt, theta, True))
        simple_root_idx = {a: k for k, a in enumerate(d.positive_roots)}
        for i, a in enumerate(d.simple_roots):
            refl.append(SimpleReflection(i + 1, AffineElement(self.zero, self.W0.simple[i]),
                                         simple_root_idx[a], False))
        return refl

    # -- basic arithmetic --------------------------------------------------

    def check(self, w: AffineElement) -> AffineElement:
        if len(w.t) != self.rank or not 0 <= w.u < len(self.W0):
            raise ConfigurationError(f"element {w} does not belong to {self.datum.label}")
        return w

    def translation(self, lam: Sequence[int]) -> AffineElement:
        return AffineElement(tuple(int(x) for x in lam), self.W0.identity)

    def finite(self, u: int) -> AffineElement:
        return AffineElement(self.zero, u)

    def multiply(self, a: AffineElement, b: AffineElement) -> AffineElement:
        ub = self.W0.act(a.u, b.t)
        return AffineElement(tuple(x + y for x, y in zip(a.t, ub)), self.W0.mul(a.u, b.u))

    def mul(self, *elements: AffineElement) -> AffineElement:
        res = self.identity
        for e in elements:
            res = self.multiply(res, e)
        return res

    def inverse(self, a: AffineElement) -> AffineElement:
        ui = self.W0.inv(a.u)
        return AffineElement(tuple(-x for x in self.W0.act(ui, a.t)), ui)

    def power(self, a: AffineElement, n: int) -> AffineElement:
        if n < 0:
            return self.power(self.inverse(a), -n)
        res = self.identity
        for _ in range(n):
            res = self.multiply(res, a)
        return res

    def conjugate(self, s: AffineElement, w: AffineElement) -> AffineElement:
        """``s w s^{-1}``."""
        return self.mul(s, w, self.inverse(s))

    def length(self, w: AffineElement) -> int:
        res = self._length.get(w)
        if res is None:
            inv = self.W0.inversion_set(w.u)
            res = 0
            for k, a in enumerate(self.datum.positive_roots):
                p = dot(w.t, a)
                res += abs(p - 1) if k in inv else abs(p)
            self._length[w] = res
        return res

    def from_word(self, labels: Iterable[int]) -> AffineElement:
        res = self.identity
        for lab in labels:
            try:
                res = self.multiply(res, self.by_label[lab].element)
            except KeyError:
                raise ConfigurationError(f"no simple reflection with index {lab}") from None
        return res

    def reduced_word(self, w: AffineElement) -> tuple[tuple[int, ...], AffineElement]:
        """``(labels, tau)`` with ``w = s_{labels[0]} ... s_{labels[-1]} tau``, ``l(tau) = 0``."""
        labels = []
        x = w
        while self.length(x) > 0:
            for s in self.simple_reflections:
                y = self.multiply(s.element, x)
                if self.length(y) < self.length(x):
                    labels.append(s.label)
                    x = y
                    break
            else:
                raise ContractError(f"no left descent found for {w}")
        return tuple(labels), x

    # -- length-zero elements ------------------------------------------------

    def omega_elements(self, bound: int = 1) -> list[AffineElement]:
        """All length-zero elements with translation coordinates in ``[-bound, bound]``."""
        found = []
        for lam in product(range(-bound, bound + 1), repeat=self.rank):
            for u in range(len(self.W0)):
                w = AffineElement(tuple(lam), u)
                if self.length(w) == 0:
                    found.append(w)
        moduli = self.datum.pi1_moduli
        if all(moduli):
            classes = {self.datum.pi1_class(w.t) for w in found}
            if len(classes) != math.prod(moduli):
                raise ResourceError(f"box of size {bound} realizes only {len(classes)} classes of pi_1")
        return sorted(found)

    def omega_for_class(self, kappa: Sequence[int], max_bound: int = 12) -> AffineElement:
        """The unique length-zero element whose image in ``pi_1`` is ``kappa``."""
        kappa = tuple(kappa)
        for bound in range(0, max_bound + 1):
            for lam in product(range(-bound, bound + 1), repeat=self.rank):
                if max((abs(x) for x in lam), default=0) != bound:
                    continue
                if self.datum.pi1_class(lam) != kappa:
                    continue
                for u in range(len(self.W0)):
                    w = AffineElement(tuple(lam), u)
                    if self.length(w) == 0:
                        return w
        raise ResourceError(f"no length-zero element of class {kappa} within bound {max_bound}")

    # -- x t^mu y ------------------------------------------------------------

    def is_min_in_left_coset(self, w: AffineElement) -> bool:
        """Whether ``w`` is minimal in ``W_0 w``."""
        lw = self.length(w)
        return all(self.length(self.multiply(s.element, w)) > lw
                   for s in self.simple_reflections if not s.affine)

    def decompose_xmuy(self, w: AffineElement) -> XMuYDecomposition:
        W0 = self.W0
        mu, x0 = self.datum.dominant_rep(w.t)
        zero_walls = {i for i, a in enumerate(self.datum.simple_roots) if dot(mu, a) == 0}
        hits = []
        x0i = W0.inv(x0)
        for z in range(len(W0)):
            if not W0.support(z) <= zero_walls:
                continue
            x = W0.mul(x0i, z)
            y = W0.mul(W0.inv(x), w.u)
            if self.is_min_in_left_coset(AffineElement(mu, y)):
                hits.append((x, y))
        if len(hits) != 1:
            raise ContractError(f"x t^mu y decomposition of {w} is not unique: {hits}")
        x, y = hits[0]
        return XMuYDecomposition(x=x, mu=mu, y=y, eta=W0.mul(y, x))

    def xmuy(self, x: int, mu: Sequence[int], y: int) -> AffineElement:
        return self.mul(self.finite(x), self.translation(mu), self.finite(y))

    # -- encodings -----------------------------------------------------------

    def to_json(self, w: AffineElement) -> dict:
        return {"t": list(w.t), "w": [i + 1 for i in self.W0.words[w.u]]}

    def from_json(self, obj: dict) -> AffineElement:
        if set(obj) - {"t", "w"}:
            raise ConfigurationError(f"unknown element keys {sorted(set(obj) - {'t', 'w'})}")
        t = tuple(int(x) for x in obj.get("t", self.zero))
        if len(t) != self.rank:
            raise ConfigurationError(f"translation {t} has wrong rank for {self.datum.label}")
        word = obj.get("w", [])
        for i in word:
            if not 1 <= int(i) <= self.datum.semisimple_rank:
                raise ConfigurationError(f"finite reflection index {i} out of range")
        return AffineElement(t, self.W0.from_word(int(i) - 1 for i in word))

    def parse_word(self, text: str) -> AffineElement:
        text = text.strip()
        if not text:
            return self.identity
        try:
            labels = [int(x) for x in text.split(",")]
        except ValueError:
            raise ConfigurationError(f"malformed word {text!r}") from None
        return self.from_word(labels)

    def format(self, w: AffineElement) -> str:
        t = ",".join(str(x) for x in w.t)
        return f"t({t}){'' if w.u == self.W0.identity else '.' + self.W0.label(w.u)}"


def alcove_length(G: AffineWeylGroup, w: AffineElement) -> int:
    """Count affine root hyperplanes separating the base alcove from its image.

    Independent of the closed-form length: picks an interior point ``p`` of the
    dominant base alcove and counts, for each positive root ``a``, the integers
    strictly between ``<p, a>`` and ``<w(p), a>``.
    """
    d = G.datum
    hmax = max(d.heights, default=0) + 1
    # <rho_check, a> = height(a), so p = rho_check / (h + 1) lies inside the alcove
    p = tuple(x / hmax for x in d.rho_check)
    wp = tuple(Fraction(x) + y for x, y in zip(w.t, G.W0.act(w.u, p)))
    total = 0
    for a in d.positive_roots:
        lo, hi = sorted((dot(p, a), dot(wp, a)))
        total += math.ceil(hi) - math.floor(lo) - 1
    return total

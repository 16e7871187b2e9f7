"""Conjugation dynamics in the extended affine Weyl group.

Covers the relations ``w -> w'`` and ``w ~ w'`` generated by simple
conjugations, minimal-length representatives, Newton points, straight
elements and the map ``f(w) = (kappa(w), nu_bar(w))``, together with the Levi
data ``(Phi_nu, S_nu)`` used to split a minimal element as ``w = u tau``.
"""

from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .affine import AffineElement, AffineWeylGroup
from .errors import ConfigurationError, ContractError, ResourceError, UnsupportedCaseError
from .rootdata import connected_components, dot

MAX_CLASS_SIZE = 200_000


@dataclass(frozen=True, order=True)
class NewtonClass:
    """The pair ``(kappa, nu)``; ``nu`` is a dominant rational coweight."""

    kappa: tuple
    nu: tuple

    def to_json(self) -> dict:
        return {"kappa": list(self.kappa),
                "nu": [[x.numerator, x.denominator] for x in map(Fraction, self.nu)]}

    @classmethod
    def from_json(cls, obj: dict) -> "NewtonClass":
        if set(obj) != {"kappa", "nu"}:
            raise ConfigurationError(f"class needs exactly the keys kappa, nu; got {sorted(obj)}")
        try:
            nu = tuple(Fraction(x[0], x[1]) if isinstance(x, (list, tuple)) else Fraction(x)
                       for x in obj["nu"])
            kappa = tuple(int(k) for k in obj["kappa"])
        except (TypeError, ValueError, ZeroDivisionError, IndexError) as exc:
            raise ConfigurationError(f"malformed class {obj!r}: {exc}") from None
        return cls(kappa, nu)

    def format(self) -> str:
        kap = ",".join(str(k) for k in self.kappa) or "0"
        return f"({kap}; {','.join(str(Fraction(x)) for x in self.nu)})"


def check_class(G: AffineWeylGroup, c: NewtonClass) -> NewtonClass:
    d = G.datum
    if len(c.nu) != d.rank:
        raise ConfigurationError(f"Newton point {c.format()} has wrong rank for {d.label}")
    if len(c.kappa) != len(d.pi1_moduli):
        raise ConfigurationError(f"kappa {c.kappa} does not match pi_1 moduli {d.pi1_moduli}")
    if not d.is_dominant(c.nu):
        raise ConfigurationError(f"Newton point {c.format()} is not dominant")
    kappa = tuple(k % m if m else k for k, m in zip(c.kappa, d.pi1_moduli))
    return NewtonClass(kappa, tuple(Fraction(x) for x in c.nu))


def parse_class(G: AffineWeylGroup, text: str) -> NewtonClass:
    """Parse ``kappa=...,nu=...``; ``nu=0`` and ``kappa=0`` abbreviate zero vectors.

    Newton entries may be fractions: ``kappa=1,nu=1/2,1/2``.
    """
    m = re.fullmatch(r"\s*kappa=([^=]*?),\s*nu=(.*)", text)
    if m is None:
        raise ConfigurationError(f"class spec {text!r} is not of the form kappa=...,nu=...")

    def entries(s, n):
        parts = [p.strip() for p in s.split(",") if p.strip()]
        if parts == ["0"]:
            parts = ["0"] * n
        try:
            return tuple(Fraction(p) for p in parts)
        except (ValueError, ZeroDivisionError):
            raise ConfigurationError(f"malformed entries {s!r}") from None

    kappa = entries(m.group(1), len(G.datum.pi1_moduli))
    if any(k.denominator != 1 for k in kappa):
        raise ConfigurationError("kappa entries must be integers")
    if not G.datum.pi1_moduli and kappa == (0,):
        kappa = ()
    nu = entries(m.group(2), G.rank)
    return check_class(G, NewtonClass(tuple(int(k) for k in kappa), nu))


# -- the relations -> and ~ --------------------------------------------------


def conj_step(G: AffineWeylGroup, w: AffineElement, s) -> tuple[AffineElement, int]:
    """``(s w s, l(sws) - l(w))`` for a simple reflection ``s`` (object or label)."""
    if not isinstance(s, AffineElement):
        s = s.element if hasattr(s, "element") else G.by_label[s].element
    v = G.mul(s, w, s)
    return v, G.length(v) - G.length(w)


def _cyclic_bfs(G: AffineWeylGroup, w: AffineElement, max_size: int = MAX_CLASS_SIZE):
    """Breadth-first closure under length-preserving simple conjugation.

    Returns ``(order, parent)`` where ``parent[v] = (previous, label)``.
    """
    lw = G.length(w)
    parent = {w: None}
    order = [w]
    queue = deque([w])
    while queue:
        v = queue.popleft()
        for s in G.simple_reflections:
            x = G.mul(s.element, v, s.element)
            if x not in parent and G.length(x) == lw:
                if len(parent) >= max_size:
                    raise ResourceError(f"cyclic class of {G.format(w)} exceeds {max_size} elements")
                parent[x] = (v, s.label)
                order.append(x)
                queue.append(x)
    return order, parent


def cyclic_class(G: AffineWeylGroup, w: AffineElement) -> frozenset:
    cache = G.cache["cyclic"]
    res = cache.get(w)
    if res is None:
        order, _ = _cyclic_bfs(G, w)
        res = frozenset(order)
        for v in order:
            cache[v] = res
    return res


def _witness(parent, v) -> list[int]:
    labels = []
    while parent[v] is not None:
        v, lab = parent[v]
        labels.append(lab)
    return labels[::-1]


def first_drop(G: AffineWeylGroup, w: AffineElement, order: Sequence[AffineElement] | None = None):
    """First ``(w', label)`` in BFS order with ``l(s w' s) = l(w') - 2``, or ``None``."""
    if order is None:
        order, _ = _cyclic_bfs(G, w)
    for v in order:
        lv = G.length(v)
        for s in G.simple_reflections:
            if G.length(G.mul(s.element, v, s.element)) == lv - 2:
                return v, s.label
    return None


def is_minimal(G: AffineWeylGroup, w: AffineElement) -> bool:
    """Whether ``w`` has minimal length in its conjugacy class.

    No element of the cyclic class admits a length-two drop.  By the
    reduction theorem for affine Weyl groups this is equivalent to minimality.
    """
    cache = G.cache["minimal"]
    res = cache.get(w)
    if res is None:
        cls = cyclic_class(G, w)
        res = first_drop(G, w, sorted(cls)) is None
        for v in cls:
            cache[v] = res
    return res


def minimize(G: AffineWeylGroup, w: AffineElement, seed: int | None = None) -> tuple[AffineElement, list[int]]:
    """A minimal-length conjugate of ``w`` and the labels conjugating it there.

    Replaying ``v <- s v s`` for the labels in order turns ``w`` into the result.
    With ``seed`` the drop is chosen at random among all available ones.
    """
    rng = None if seed is None else random.Random(f"{seed}:{G.format(w)}")
    witness: list[int] = []
    cur = w
    while True:
        order, parent = _cyclic_bfs(G, cur)
        if rng is None:
            hit = first_drop(G, cur, order)
        else:
            drops = [(v, s.label) for v in order for s in G.simple_reflections
                     if G.length(G.mul(s.element, v, s.element)) == G.length(v) - 2]
            hit = rng.choice(drops) if drops else None
        if hit is None:
            return cur, witness
        v, lab = hit
        witness += _witness(parent, v) + [lab]
        cur = conj_step(G, v, lab)[0]


def replay(G: AffineWeylGroup, w: AffineElement, labels: Sequence[int]) -> AffineElement:
    for lab in labels:
        w = conj_step(G, w, lab)[0]
    return w


# -- Newton points and straightness --------------------------------------------


def newton_point(G: AffineWeylGroup, w: AffineElement) -> tuple[tuple, tuple]:
    """``(nu_w, nu_bar_w)`` where ``w^N = t^lambda`` and ``nu_w = lambda / N``."""
    n = G.W0.order(w.u)
    lam = G.power(w, n).t
    nu = tuple(Fraction(x, n) for x in lam)
    return nu, G.datum.dominant_rep(nu)[0]


def is_straight(G: AffineWeylGroup, w: AffineElement) -> bool:
    # With N the order of u, w^N = t^lambda and l(w^{kN}) = k l(w^N).  If
    # l(w^N) = N l(w), then for any n and large k,
    #   kN l(w) = l(w^{kN}) <= l(w^n) + l(w^{kN-n}) <= n l(w) + (kN-n) l(w),
    # forcing l(w^n) = n l(w).  So one power decides straightness.
    n = G.W0.order(w.u)
    return G.length(G.power(w, n)) == n * G.length(w)


def f_map(G: AffineWeylGroup, w: AffineElement) -> NewtonClass:
    cache = G.cache["f"]
    res = cache.get(w)
    if res is None:
        res = NewtonClass(G.datum.pi1_class(w.t), newton_point(G, w)[1])
        cache[w] = res
    return res


# -- straight classes ------------------------------------------------------------


def affine_layers(G: AffineWeylGroup, max_length: int) -> list[list[AffineElement]]:
    """Elements of ``W_af`` grouped by length, up to ``max_length``."""
    layers = G.cache["layers"].setdefault("W_af", [[G.identity]])
    while len(layers) <= max_length:
        k = len(layers) - 1
        nxt = set()
        for x in layers[k]:
            for s in G.simple_reflections:
                y = G.multiply(s.element, x)
                if G.length(y) == k + 1:
                    nxt.add(y)
        layers.append(sorted(nxt))
    return layers[: max_length + 1]


def _omega_group(G: AffineWeylGroup) -> list[AffineElement]:
    """Length-zero elements used as conjugators (finite part of ``Omega`` or a box)."""
    return G.omega_elements(1)


def _conjugate_within(G: AffineWeylGroup, a: AffineElement, b: AffineElement, depth: int) -> bool:
    """Search conjugators ``x omega`` with ``x`` in ``W_af`` of length at most ``depth``."""
    for layer in affine_layers(G, depth):
        for x in layer:
            for om in _omega_group(G):
                g = G.multiply(x, om)
                if G.conjugate(g, a) == b:
                    return True
    return False


def straight_classes(G: AffineWeylGroup, nu_bound: int, omega_bound: int = 1,
                     verify: bool = True) -> list[tuple[NewtonClass, AffineElement]]:
    """Straight conjugacy classes with ``<nu, 2 rho> <= nu_bound``.

    Returns ``(f(w), w)`` pairs sorted by class, one representative each.  With
    ``verify`` every pair of straight elements sharing an image under ``f``
    is checked to be conjugate by a bounded search.
    """
    found: dict[NewtonClass, list[AffineElement]] = {}
    layers = affine_layers(G, nu_bound)
    for tau in G.omega_elements(omega_bound):
        for layer in layers:
            for x in layer:
                w = G.multiply(x, tau)
                if is_straight(G, w):
                    found.setdefault(f_map(G, w), []).append(w)
    out = []
    for c in sorted(found):
        reps = sorted(found[c], key=lambda v: (G.length(v), v))
        if verify:
            base = reps[0]
            seen = cyclic_class(G, base)
            for r in reps[1:]:
                if r in seen:
                    continue
                if not _conjugate_within(G, r, base, 2 * G.length(base) + 2):
                    raise ContractError(f"f is not injective: {G.format(base)} and {G.format(r)}")
                seen = seen | cyclic_class(G, r)
        out.append((c, reps[0]))
    return out


def straight_representative(G: AffineWeylGroup, c: NewtonClass) -> AffineElement:
    """A straight element with ``f(w) = c``; error if the class is not realized."""
    c = check_class(G, c)
    cache = G.cache["straight_rep"]
    if c in cache:
        return cache[c]
    d = G.datum
    L = dot(c.nu, d.two_rho)
    if Fraction(L).denominator != 1:
        raise ContractError(f"class {c.format()} is not realized: <nu, 2 rho> = {L}")
    L = int(L)
    res = None
    if all(Fraction(x).denominator == 1 for x in c.nu) and d.pi1_class([int(x) for x in c.nu]) == c.kappa:
        res = G.translation([int(x) for x in c.nu])
    else:
        tau = G.omega_for_class(c.kappa)
        for x in affine_layers(G, L)[L]:
            w = G.multiply(x, tau)
            if is_straight(G, w) and f_map(G, w) == c:
                res = w
                break
    if res is None:
        raise ContractError(f"class {c.format()} is not realized by a straight element")
    cache[c] = res
    return res


def defect(G: AffineWeylGroup, c: NewtonClass) -> int:
    """``rank - dim Fix(u)`` for a straight representative ``t^lambda u`` of ``c``."""
    w = straight_representative(G, c)
    return G.rank - G.W0.fixed_space_dim(w.u)


def lambda_b(G: AffineWeylGroup, c: NewtonClass) -> tuple:
    c = check_class(G, c)
    if any(Fraction(x).denominator != 1 for x in c.nu):
        raise UnsupportedCaseError(f"lambda_b needs an integral Newton point, got {c.format()}")
    return tuple(int(x) for x in c.nu)


# -- Levi contexts ------------------------------------------------------------------


@dataclass(frozen=True)
class LeviSimple:
    name: str
    element: AffineElement
    root: int  # positive root index of the gradient
    affine: bool
    component: int


@dataclass
class LeviContext:
    """Root subsystem ``Phi_nu`` with its affine simple reflections."""

    G: AffineWeylGroup = field(repr=False)
    nu: tuple
    roots: tuple  # positive root indices of Phi_nu (w.r.t. Phi^+)
    simple_roots: tuple
    components: tuple  # tuples of simple-root indices
    simples: tuple  # LeviSimple, affine nodes first per component

    def length(self, w: AffineElement) -> int:
        inv = self.G.W0.inversion_set(w.u)
        pos = self.G.datum.positive_roots
        total = 0
        for k in self.roots:
            p = dot(w.t, pos[k])
            total += abs(p - 1) if k in inv else abs(p)
        return total

    def nodes_of(self, comp: int) -> frozenset:
        return frozenset(i for i, s in enumerate(self.simples) if s.component == comp)

    def tau_permutation(self, tau: AffineElement) -> tuple:
        """The permutation of :attr:`simples` induced by ``s -> tau s tau^{-1}``."""
        G = self.G
        idx = {s.element: i for i, s in enumerate(self.simples)}
        perm = []
        for s in self.simples:
            img = G.conjugate(tau, s.element)
            if img not in idx:
                raise ContractError(f"Ad({G.format(tau)}) does not permute the Levi simple reflections")
            perm.append(idx[img])
        return tuple(perm)

    def is_spherical(self, K) -> bool:
        K = set(K)
        return all(not self.nodes_of(c) <= K for c in range(len(self.components)))

    def describe(self) -> list:
        coeff = self.G.datum.root_coefficients
        return [list(coeff[k]) for k in self.roots]


def _root_name(G: AffineWeylGroup, k: int) -> str:
    return "".join(str(c) for c in G.datum.root_coefficients[k])


def levi_context(G: AffineWeylGroup, nu: Sequence) -> LeviContext:
    nu = tuple(Fraction(x) for x in nu)
    cache = G.cache["levi"]
    if nu in cache:
        return cache[nu]
    d = G.datum
    pos = d.positive_roots
    coeff = d.root_coefficients
    roots = tuple(k for k, a in enumerate(pos) if dot(nu, a) == 0)
    vecs = {coeff[k]: k for k in roots}

    def decompositions(k):
        c = coeff[k]
        for j in roots:
            rest = tuple(x - y for x, y in zip(c, coeff[j]))
            if rest in vecs:
                yield j, vecs[rest]

    simple = tuple(k for k in roots if next(decompositions(k), None) is None)
    comps = connected_components(
        len(simple), lambda i, j: dot(d.positive_coroots[simple[i]], pos[simple[j]]) != 0)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for i in comp:
            comp_of[simple[i]] = ci
    for k in sorted(roots, key=lambda k: (d.heights[k], coeff[k])):
        if k not in comp_of:
            j, rest = next((j, r) for j, r in decompositions(k) if j in simple)
            comp_of[k] = comp_of[rest]
    simples = []
    for ci, comp in enumerate(comps):
        members = [k for k in roots if comp_of[k] == ci]
        theta = max(members, key=lambda k: (d.heights[k], coeff[k]))
        elt = AffineElement(d.positive_coroots[theta], G.W0.reflection(theta))
        simples.append(LeviSimple(f"a0({_root_name(G, theta)})", elt, theta, True, ci))
        for i in comp:
            k = simple[i]
            simples.append(LeviSimple(f"a({_root_name(G, k)})", AffineElement(G.zero, G.W0.reflection(k)),
                                      k, False, ci))
    ctx = LeviContext(G, nu, roots, simple, tuple(tuple(simple[i] for i in c) for c in comps),
                      tuple(simples))
    for s in simples:
        if ctx.length(s.element) != 1:
            raise ContractError(f"Levi simple reflection {s.name} has length {ctx.length(s.element)}")
    cache[nu] = ctx
    return ctx


@dataclass(frozen=True)
class StandardTriple:
    """``w = u tau`` with ``u`` a word in Levi simple reflections (indices)."""

    u_word: tuple
    u: AffineElement
    tau: AffineElement
    K: frozenset
    levi: LeviContext = field(repr=False, compare=False)
    tau_perm: tuple = ()

    def K_names(self) -> list[str]:
        return sorted(self.levi.simples[i].name for i in self.K)


def standard_triple(G: AffineWeylGroup, w: AffineElement, check_minimal: bool = True) -> StandardTriple:
    if check_minimal and not is_minimal(G, w):
        raise ContractError(f"standard_triple needs a minimal-length element, got {G.format(w)}")
    cache = G.cache["triple"]
    if w in cache:
        return cache[w]
    nu, _ = newton_point(G, w)
    L = levi_context(G, nu)
    word = []
    x = w
    while L.length(x) > 0:
        lx = L.length(x)
        for i, s in enumerate(L.simples):
            y = G.multiply(s.element, x)
            if L.length(y) < lx:
                word.append(i)
                x = y
                break
        else:
            raise ContractError(f"no Levi descent for {G.format(x)}")
    tau = x
    u = G.mul(*(L.simples[i].element for i in word)) if word else G.identity
    if G.multiply(u, tau) != w:
        raise ContractError("u tau does not reproduce w")
    perm = L.tau_permutation(tau)
    K = set(word)
    stack = list(K)
    while stack:
        j = perm[stack.pop()]
        if j not in K:
            K.add(j)
            stack.append(j)
    if not L.is_spherical(K):
        raise ContractError(f"K_w of {G.format(w)} is not spherical")
    res = StandardTriple(tuple(word), u, tau, frozenset(K), L, perm)
    cache[w] = res
    return res


def parabolic_elements(L: LeviContext, K, cap: int = 200_000) -> list[AffineElement]:
    """All elements of the finite group generated by the reflections in ``K``."""
    G = L.G
    gens = [L.simples[i].element for i in sorted(K)]
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.multiply(x, g)
            if y not in seen:
                if len(seen) >= cap:
                    raise ResourceError(f"parabolic subgroup exceeds {cap} elements")
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def longest_length(L: LeviContext, K) -> int:
    key = (L.nu, frozenset(K))
    cache = L.G.cache["n_K"]
    if key not in cache:
        cache[key] = max(L.length(x) for x in parabolic_elements(L, K))
    return cache[key]


def element_order(G: AffineWeylGroup, w: AffineElement, cap: int = 12) -> int:
    x, n = w, 1
    while x != G.identity:
        x = G.multiply(x, w)
        n += 1
        if n > cap:
            return 0
    return n


def coxeter_type(L: LeviContext, K) -> str:
    """Cartan-Killing type of ``W_K``, e.g. ``A1xA1`` or ``B2``; ``T`` if empty."""
    G = L.G
    K = sorted(K)
    if not K:
        return "T"
    m = {}
    for a in K:
        for b in K:
            if a < b:
                o = element_order(G, G.multiply(L.simples[a].element, L.simples[b].element))
                if o > 2:
                    m[a, b] = m[b, a] = o
    comps = connected_components(len(K), lambda i, j: (K[i], K[j]) in m)
    names = []
    for comp in comps:
        nodes = [K[i] for i in comp]
        n = len(nodes)
        labels = sorted(m[a, b] for a in nodes for b in nodes if a < b and (a, b) in m)
        deg = {a: sum((a, b) in m for b in nodes) for a in nodes}
        if 6 in labels:
            names.append("G2")
        elif 4 in labels:
            (a, b), = [(a, b) for a in nodes for b in nodes if a < b and m.get((a, b)) == 4]
            end = deg[a] == 1 or deg[b] == 1
            names.append(f"B{n}" if end or n == 2 else "F4")
        elif max(deg.values(), default=0) <= 2:
            names.append(f"A{n}")
        else:
            centre = next(a for a in nodes if deg[a] == 3)
            arms = sorted(_arm_length(m, nodes, centre, b) for b in nodes if (centre, b) in m)
            names.append(f"D{n}" if arms[:2] == [1, 1] else f"E{n}")
    return "x".join(sorted(names))


def _arm_length(m, nodes, centre, start) -> int:
    prev, cur, n = centre, start, 1
    while True:
        nxt = [b for b in nodes if (cur, b) in m and b != prev]
        if not nxt:
            return n
        prev, cur, n = cur, nxt[0], n + 1


def cycle_type(perm: Sequence[int], K) -> tuple:
    K = set(K)
    seen, out = set(), []
    for i in sorted(K):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        out.append(n)
    return tuple(sorted(out, reverse=True))


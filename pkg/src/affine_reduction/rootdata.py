"""Root data of split reductive groups and their finite Weyl groups.

Coordinates: coweights (elements of ``X_*``) are integer tuples in a fixed
basis of the coweight lattice, roots are integer tuples in the dual basis, so
the pairing ``<lambda, alpha>`` is the plain dot product.  The basis is

* the simple coroots for ``isogeny="sc"`` (so ``X_* = Q^vee``),
* the fundamental coweights for ``isogeny="ad"``,
* the standard basis ``e_1, ..., e_n`` of ``Z^n`` for ``GLn``.

Everything is exact: integers for pairings and lattice vectors, ``Fraction``
for rational coweights such as Newton points and ``rho``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import ConfigurationError, ResourceError

Vector = tuple  # tuple of int or Fraction
Matrix = tuple  # tuple of row tuples

ISOGENY_ALIASES = {
    "sc": "sc",
    "simply-connected": "sc",
    "simply_connected": "sc",
    "ad": "ad",
    "adjoint": "ad",
    "gl": "GL",
    "GL": "GL",
}

MAX_RANK = 6


def cartan_matrix(letter: str, n: int) -> list[list[int]]:
    """Cartan matrix ``a[i][j] = <alpha_i^vee, alpha_j>`` in Bourbaki numbering."""
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if letter == "A":
        for i in range(n - 1):
            bond(i, i + 1)
    elif letter == "B":
        if n < 2:
            raise ConfigurationError("B_n needs n >= 2")
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 2, n - 1, -1, -2)  # alpha_n short
    elif letter == "C":
        if n < 2:
            raise ConfigurationError("C_n needs n >= 2")
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 2, n - 1, -2, -1)  # alpha_n long
    elif letter == "D":
        if n < 4:
            raise ConfigurationError("D_n needs n >= 4")
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif letter == "E":
        if n != 6:
            raise ConfigurationError("only E6 is supported")
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]:
            bond(i, j)
    elif letter == "F":
        if n != 4:
            raise ConfigurationError("F_n requires n = 4")
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    elif letter == "G":
        if n != 2:
            raise ConfigurationError("G_n requires n = 2")
        bond(0, 1, -3, -1)  # alpha_1 short
    else:
        raise ConfigurationError(f"unknown Cartan type {letter!r}")
    return a


def dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def _diagonalize(columns: list[list[int]], rows: int) -> tuple[list[list[int]], list[int]]:
    """Integer diagonalization ``U A V = D`` of the ``rows x len(columns)``
    matrix with the given columns.  Returns the unimodular ``U`` and the
    diagonal of ``D`` (padded with zeros to ``rows`` entries)."""
    m = len(columns)
    A = [[columns[j][i] for j in range(m)] for i in range(rows)]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]

    def row_op(dst, src, k):
        A[dst] = [x - k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - k * y for x, y in zip(U[dst], U[src])]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_op(dst, src, k):
        for row in A:
            row[dst] -= k * row[src]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(rows, m)):
        entries = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, m) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
    diag += [0] * (rows - len(diag))
    return U, diag


def parse_label(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*(GL|[A-G])\s*(\d+)\s*", label)
    if not m:
        raise ConfigurationError(f"unsupported root datum label {label!r}")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True, eq=False)
class RootDatum:
    """A split root datum together with its positive system.

    ``positive_roots[k]`` and ``positive_coroots[k]`` correspond; roots are
    ordered by (height, simple-root coefficients).
    """

    label: str
    isogeny: str
    cartan: tuple
    rank: int
    simple_roots: tuple
    simple_coroots: tuple
    positive_roots: tuple
    positive_coroots: tuple
    root_coefficients: tuple
    pi1_moduli: tuple
    _pi1_rows: tuple = field(repr=False)

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def roots(self) -> tuple:
        """All roots: positives followed by their negatives."""
        return self.positive_roots + tuple(tuple(-x for x in a) for a in self.positive_roots)

    @cached_property
    def coroots(self) -> tuple:
        return self.positive_coroots + tuple(tuple(-x for x in a) for a in self.positive_coroots)

    @cached_property
    def root_index(self) -> dict:
        return {a: i for i, a in enumerate(self.roots)}

    @cached_property
    def heights(self) -> tuple:
        return tuple(sum(c) for c in self.root_coefficients)

    @cached_property
    def rho(self) -> tuple:
        """Half-sum of positive roots, in root coordinates."""
        return tuple(Fraction(sum(a[i] for a in self.positive_roots), 2) for i in range(self.rank))

    @cached_property
    def rho_check(self) -> tuple:
        """Half-sum of positive coroots, in coweight coordinates."""
        return tuple(Fraction(sum(a[i] for a in self.positive_coroots), 2) for i in range(self.rank))

    @cached_property
    def two_rho(self) -> tuple:
        return tuple(sum(a[i] for a in self.positive_roots) for i in range(self.rank))

    @cached_property
    def weyl(self) -> "WeylGroup":
        return WeylGroup(self)

    def pair(self, coweight: Sequence, root: Sequence):
        return dot(coweight, root)

    def is_dominant(self, v: Sequence) -> bool:
        return all(dot(v, a) >= 0 for a in self.simple_roots)

    def is_regular(self, v: Sequence) -> bool:
        return all(dot(v, a) > 0 for a in self.simple_roots)

    def reflect(self, i: int, v: Sequence) -> tuple:
        """Apply the simple reflection ``s_i`` to a coweight."""
        c = dot(v, self.simple_roots[i])
        return tuple(x - c * y for x, y in zip(v, self.simple_coroots[i]))

    def dominant_rep(self, v: Sequence) -> tuple[tuple, int]:
        """Return ``(v_dom, x)`` with ``x(v) = v_dom`` dominant.

        ``x`` is an index into :attr:`weyl`.
        """
        W = self.weyl
        v = tuple(v)
        x = W.identity
        moved = True
        while moved:
            moved = False
            for i, a in enumerate(self.simple_roots):
                if dot(v, a) < 0:
                    v = self.reflect(i, v)
                    x = W.mul(W.simple[i], x)
                    moved = True
                    break
        return v, x

    def pi1_class(self, coweight: Sequence) -> tuple:
        """Image of an integral coweight in ``pi_1 = X_* / Q^vee``."""
        out = []
        for row, mod in zip(self._pi1_rows, self.pi1_moduli):
            val = dot(row, coweight)
            out.append(val % mod if mod else val)
        return tuple(out)

    def pi1_add(self, a: Sequence, b: Sequence) -> tuple:
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.pi1_moduli))

    def in_coroot_lattice(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.pi1_class(v))

    def coroot_coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of ``v`` in the simple coroots, or ``None`` if ``v`` is
        not in their rational span."""
        coeffs = self.semisimple_part(v)
        recon = [sum(c * a[k] for c, a in zip(coeffs, self.simple_coroots)) for k in range(self.rank)]
        if any(Fraction(x) != y for x, y in zip(v, recon)):
            return None
        return coeffs

    def semisimple_part(self, v: Sequence) -> tuple:
        """Simple-coroot coefficients of the component of ``v`` in the coroot
        span along the central directions (those pairing to zero with all roots)."""
        # pairings with the simple roots recover coefficients; solve the Gram system
        # G c = (<v, alpha_i>) with G[i][j] = <alpha_j^vee, alpha_i> = cartan[j][i].
        n = self.semisimple_rank
        rhs = [Fraction(dot(v, a)) for a in self.simple_roots]
        M = [[Fraction(self.cartan[j][i]) for j in range(n)] + [rhs[i]] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            pv = M[col][col]
            M[col] = [x / pv for x in M[col]]
            for r in range(n):
                if r != col and M[r][col] != 0:
                    f = M[r][col]
                    M[r] = [x - f * y for x, y in zip(M[r], M[col])]
        return tuple(M[i][n] for i in range(n))

    def leq(self, a: Sequence, b: Sequence) -> bool:
        """Root order on rational coweights: ``b - a`` is a nonnegative rational
        combination of simple coroots."""
        diff = tuple(Fraction(y) - Fraction(x) for x, y in zip(a, b))
        coeffs = self.coroot_coordinates(diff)
        return coeffs is not None and all(c >= 0 for c in coeffs)

    def components(self) -> list[list[int]]:
        """Connected components of the Dynkin diagram, as lists of simple indices."""
        return connected_components(self.semisimple_rank, lambda i, j: self.cartan[i][j] != 0)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "isogeny": self.isogeny,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "simple_roots": [list(a) for a in self.simple_roots],
            "simple_coroots": [list(a) for a in self.simple_coroots],
            "positive_roots": [list(a) for a in self.positive_roots],
            "pi1": list(self.pi1_moduli),
        }


def connected_components(n: int, adjacent) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and adjacent(i, j):
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _positive_system(cartan: list[list[int]]):
    """Positive roots and coroots as simple-(co)root coefficient vectors."""
    n = len(cartan)
    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = {u: u for u in unit}
    queue = deque(unit)
    while queue:
        c = queue.popleft()
        d = found[c]
        for i in range(n):
            k = sum(c[j] * cartan[i][j] for j in range(n))
            if k >= 0:
                continue
            new = tuple(x - k * (j == i) for j, x in enumerate(c))
            if new in found:
                continue
            kd = sum(d[j] * cartan[j][i] for j in range(n))
            found[new] = tuple(x - kd * (j == i) for j, x in enumerate(d))
            queue.append(new)
    order = sorted(found, key=lambda c: (sum(c), c))
    return order, [found[c] for c in order]


def build_root_datum(label: str, isogeny: str | None = None) -> RootDatum:
    """Construct the root datum of a split group.

    ``label`` is an irreducible Cartan type such as ``"A2"``, ``"C2"``, ``"G2"``
    (rank at most 6) or ``"GLn"`` with ``n <= 6``.  ``isogeny`` is ``"sc"`` or
    ``"ad"`` for irreducible types and ``"GL"`` (the default) for ``GLn``.
    """
    letter, n = parse_label(label)
    if letter == "GL":
        iso = ISOGENY_ALIASES.get(isogeny or "GL")
        if iso != "GL":
            raise ConfigurationError(f"{label} only supports the GL isogeny, got {isogeny!r}")
        if not 1 <= n <= MAX_RANK:
            raise ConfigurationError(f"GLn is supported for 1 <= n <= {MAX_RANK}")
        rank = n
        cartan = cartan_matrix("A", n - 1) if n > 1 else []
        simple_roots = [tuple(int(k == i) - int(k == i + 1) for k in range(n)) for i in range(n - 1)]
        simple_coroots = list(simple_roots)
    else:
        iso = ISOGENY_ALIASES.get(isogeny or "sc")
        if iso not in ("sc", "ad"):
            raise ConfigurationError(f"{label} supports isogenies sc/ad, got {isogeny!r}")
        if not 1 <= n <= MAX_RANK:
            raise ConfigurationError(f"rank must be between 1 and {MAX_RANK}")
        cartan = cartan_matrix(letter, n)
        rank = n
        if iso == "sc":
            simple_coroots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
            simple_roots = [tuple(cartan[i][j] for i in range(n)) for j in range(n)]
        else:
            simple_roots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
            simple_coroots = [tuple(cartan[j][i] for i in range(n)) for j in range(n)]
        label = f"{letter}{n}"
    if letter == "GL":
        label = f"GL{n}"

    ss = len(simple_roots)
    if ss:
        coeffs, co_coeffs = _positive_system(cartan)
    else:
        coeffs, co_coeffs = [], []
    pos_roots = [tuple(sum(c[j] * simple_roots[j][k] for j in range(ss)) for k in range(rank)) for c in coeffs]
    pos_coroots = [tuple(sum(d[j] * simple_coroots[j][k] for j in range(ss)) for k in range(rank)) for d in co_coeffs]

    for i in range(ss):
        for j in range(ss):
            if dot(simple_coroots[i], simple_roots[j]) != cartan[i][j]:
                raise ConfigurationError("internal error: Cartan integers do not match")

    U, diag = _diagonalize([list(c) for c in simple_coroots], rank)
    rows, moduli = [], []
    for row, d in zip(U, diag):
        if d == 1:
            continue
        if d == 0:
            # Free factor: fix the sign so the first basis vector with a
            # nonzero image maps to a positive integer.
            lead = next((x for x in row if x), 0)
            if lead < 0:
                row = [-x for x in row]
        else:
            lead = next((x % d for x in row if x % d), 0)
            if lead and gcd(lead, d) == 1:
                row = [(x * pow(lead, -1, d)) % d for x in row]
        rows.append(tuple(row))
        moduli.append(d)

    return RootDatum(
        label=label,
        isogeny=iso,
        cartan=tuple(tuple(r) for r in cartan),
        rank=rank,
        simple_roots=tuple(simple_roots),
        simple_coroots=tuple(simple_coroots),
        positive_roots=tuple(pos_roots),
        positive_coroots=tuple(pos_coroots),
        root_coefficients=tuple(coeffs),
        pi1_moduli=tuple(moduli),
        _pi1_rows=tuple(rows),
    )


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


class WeylGroup:
    """The finite Weyl group ``W_0`` of a root datum, fully enumerated.

    Elements are integers indexing :attr:`matrices`; ``matrices[u]`` acts on
    coweights written as column vectors.  Words are reduced, found by
    breadth-first search with simple reflections taken in index order.
    """

    MAX_ORDER = 60_000

    def __init__(self, datum: RootDatum):
        self.datum = datum
        r = datum.rank
        ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        gens = []
        for a, c in zip(datum.simple_roots, datum.simple_coroots):
            gens.append(tuple(tuple(int(i == j) - c[i] * a[j] for j in range(r)) for i in range(r)))
        self.matrices: list[Matrix] = [ident]
        self.words: list[tuple[int, ...]] = [()]
        self.index: dict[Matrix, int] = {ident: 0}
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for i, s in enumerate(gens):
                h = _matmul(self.matrices[g], s)
                if h not in self.index:
                    if len(self.matrices) >= self.MAX_ORDER:
                        raise ResourceError("Weyl group larger than supported")
                    self.index[h] = len(self.matrices)
                    self.matrices.append(h)
                    self.words.append(self.words[g] + (i,))
                    queue.append(self.index[h])
        self.identity = 0
        self.simple = [self.index[s] for s in gens]
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        self._neg: dict[int, frozenset] = {}
        self._order: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.matrices)

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        res = self._mul.get(key)
        if res is None:
            res = self.index[_matmul(self.matrices[a], self.matrices[b])]
            self._mul[key] = res
        return res

    def inv(self, a: int) -> int:
        res = self._inv.get(a)
        if res is None:
            word = self.words[a]
            res = self.identity
            for i in word:
                res = self.mul(self.simple[i], res)
            self._inv[a] = res
        return res

    def from_word(self, word: Iterable[int]) -> int:
        res = self.identity
        for i in word:
            res = self.mul(res, self.simple[i])
        return res

    def act(self, u: int, v: Sequence) -> tuple:
        return tuple(sum(x * y for x, y in zip(row, v)) for row in self.matrices[u])

    def act_root_inverse(self, u: int, root: Sequence) -> tuple:
        """``u^{-1}(alpha)`` for a root in root coordinates."""
        m = self.matrices[u]
        return tuple(sum(root[i] * m[i][j] for i in range(len(root))) for j in range(len(root)))

    def inversion_set(self, u: int) -> frozenset:
        """Indices of positive roots ``alpha`` with ``u^{-1}(alpha) < 0``."""
        res = self._neg.get(u)
        if res is None:
            npos = len(self.datum.positive_roots)
            idx = self.datum.root_index
            res = frozenset(
                k for k, a in enumerate(self.datum.positive_roots)
                if idx[self.act_root_inverse(u, a)] >= npos
            )
            self._neg[u] = res
        return res

    def length(self, u: int) -> int:
        return len(self.words[u])

    def support(self, u: int) -> frozenset:
        return frozenset(self.words[u])

    def order(self, u: int) -> int:
        res = self._order.get(u)
        if res is None:
            res, x = 1, u
            while x != self.identity:
                x = self.mul(x, u)
                res += 1
            self._order[u] = res
        return res

    @cached_property
    def longest(self) -> int:
        return max(range(len(self)), key=self.length)

    def reflection(self, root_index: int) -> int:
        """The reflection ``s_alpha`` for a positive root index."""
        a = self.datum.positive_roots[root_index]
        c = self.datum.positive_coroots[root_index]
        r = self.datum.rank
        return self.index[tuple(tuple(int(i == j) - c[i] * a[j] for j in range(r)) for i in range(r))]

    def fixed_space_dim(self, u: int) -> int:
        """Dimension of the fixed subspace of ``u`` on ``X_* (x) Q``."""
        m = self.matrices[u]
        r = len(m)
        rows = [[Fraction(m[i][j] - (i == j)) for j in range(r)] for i in range(r)]
        return r - _rank(rows)

    def label(self, u: int) -> str:
        w = self.words[u]
        return "e" if not w else "s" + ".s".join(str(i + 1) for i in w)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank

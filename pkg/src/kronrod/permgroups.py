"""Concrete permutation groups as carriers for abstract group terms.

Permutations are tuples p of length `degree` with p[i] = image of point i.
`compose(p, q)` applies p first, then q.  Groups are given by generators;
orders come from plain breadth-first closure, which is all the desk-scale
verification here needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from kronrod.errors import DegreeCapExceeded
from kronrod.terms import GroupTerm, Prod, Triv, Wr, Wr2, order

DEGREE_CAP = 1 << 14
DEFAULT_GROUP_CAP = 5000

Perm = tuple[int, ...]


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_order(p: Perm) -> int:
    """Order of a permutation: lcm of its cycle lengths."""
    seen = [False] * len(p)
    result = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        result = result * length // gcd(result, length)
    return result


@dataclass
class PermGroup:
    """Permutation group on {0, ..., degree-1} given by generators."""

    degree: int
    generators: list[Perm]
    order: Optional[int] = None
    _elements: Optional[frozenset[Perm]] = field(default=None, repr=False)

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.degree or sorted(g) != list(range(self.degree)):
                raise ValueError(f"generator {g} is not a permutation of degree {self.degree}")


def enumerate_elements(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> Optional[int]:
    """Exact order of the generated group if it is <= cap, else None.

    On success fills g.order and caches the element set.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    ident = identity(g.degree)
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for gen in g.generators:
                prod = compose(e, gen)
                if prod not in elems:
                    elems.add(prod)
                    if len(elems) > cap:
                        return None
                    nxt.append(prod)
        frontier = nxt
    g.order = len(elems)
    g._elements = frozenset(elems)
    return g.order


def elements(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> Optional[frozenset[Perm]]:
    if g._elements is None:
        if enumerate_elements(g, cap) is None:
            return None
    return g._elements


def is_abelian(elems: frozenset[Perm]) -> bool:
    lst = list(elems)
    for i, a in enumerate(lst):
        for b in lst[i + 1 :]:
            if compose(a, b) != compose(b, a):
                return False
    return True


# ---------------------------------------------------------------------------
# faithful imprimitive representation of a term
# ---------------------------------------------------------------------------


def perm_rep(t: GroupTerm, degree_cap: int = DEGREE_CAP) -> PermGroup:
    """Faithful permutation representation of the group denoted by `t`.

    Triv acts on one point; Prod acts on the disjoint union of its factors'
    point sets; Wr / Wr2 act on blocks of copies of the base representation,
    with the cyclic group(s) translating blocks.
    """
    degree, gens = _rep(t, degree_cap)
    return PermGroup(degree=degree, generators=gens)


def _rep(t: GroupTerm, cap: int) -> tuple[int, list[Perm]]:
    if isinstance(t, Triv):
        return 1, []
    if isinstance(t, Prod):
        degree = 0
        parts = []
        for f in t.factors:
            d, gens = _rep(f, cap)
            parts.append((degree, d, gens))
            degree += d
            if degree > cap:
                raise DegreeCapExceeded(f"degree {degree} exceeds cap {cap}")
        out: list[Perm] = []
        for offset, d, gens in parts:
            for gen in gens:
                p = list(range(degree))
                for i, j in enumerate(gen):
                    p[offset + i] = offset + j
                out.append(tuple(p))
        return degree, out
    if isinstance(t, Wr):
        d, gens = _rep(t.base, cap)
        degree = t.n * d
        if degree > cap:
            raise DegreeCapExceeded(f"degree {degree} exceeds cap {cap}")
        out = []
        for gen in gens:  # base generators act on block 0
            p = list(range(degree))
            for i, j in enumerate(gen):
                p[i] = j
            out.append(tuple(p))
        if t.n > 1:  # cyclic shift of blocks
            p = [0] * degree
            for b in range(t.n):
                for i in range(d):
                    p[b * d + i] = ((b + 1) % t.n) * d + i
            out.append(tuple(p))
        return degree, out
    if isinstance(t, Wr2):
        d, gens = _rep(t.base, cap)
        rows, cols = t.n, t.m * t.n
        degree = rows * cols * d
        if degree > cap:
            raise DegreeCapExceeded(f"degree {degree} exceeds cap {cap}")

        def block(i: int, j: int) -> int:
            return (i * cols + j) * d

        out = []
        for gen in gens:  # base generators act on block (0, 0)
            p = list(range(degree))
            for i, j in enumerate(gen):
                p[i] = j
            out.append(tuple(p))
        for di, dj in ((1, 0), (0, 1)):  # the two block translations
            if (di and rows == 1) or (dj and cols == 1):
                continue
            p = [0] * degree
            for i in range(rows):
                for j in range(cols):
                    src = block(i, j)
                    dst = block((i + di) % rows, (j + dj) % cols)
                    for k in range(d):
                        p[src + k] = dst + k
            out.append(tuple(p))
        return degree, out
    raise TypeError(f"not a GroupTerm: {t!r}")


# ---------------------------------------------------------------------------
# isomorphism testing by invariants plus generator-mapping backtracking
# ---------------------------------------------------------------------------


def element_order_multiset(elems: frozenset[Perm]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for e in elems:
        o = perm_order(e)
        hist[o] = hist.get(o, 0) + 1
    return hist


def _generating_subset(gens: list[Perm], elems: frozenset[Perm], degree: int) -> list[Perm]:
    """Drop generators that are redundant given the earlier ones."""
    chosen: list[Perm] = []
    span = {identity(degree)}
    for g in gens:
        if g in span:
            continue
        chosen.append(g)
        # closure of `chosen`
        frontier = list(span)
        while frontier:
            nxt = []
            for e in frontier:
                for h in chosen:
                    p = compose(e, h)
                    if p not in span:
                        span.add(p)
                        nxt.append(p)
            frontier = nxt
        if len(span) == len(elems):
            break
    return chosen


def _hom_extends(
    gens: list[Perm],
    images: list[Perm],
    g_elems: frozenset[Perm],
    g_degree: int,
    h_degree: int,
) -> bool:
    """Does gen_i -> images_i extend to an injective homomorphism on <gens>?"""
    phi = {identity(g_degree): identity(h_degree)}
    used = {identity(h_degree)}
    frontier = [identity(g_degree)]
    while frontier:
        nxt = []
        for x in frontier:
            fx = phi[x]
            for gen, img in zip(gens, images):
                y = compose(x, gen)
                fy = compose(fx, img)
                known = phi.get(y)
                if known is None:
                    if fy in used:
                        return False  # not injective
                    phi[y] = fy
                    used.add(fy)
                    nxt.append(y)
                elif known != fy:
                    return False  # not a homomorphism
        frontier = nxt
    return True


def is_isomorphic(g: PermGroup, h: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> Optional[bool]:
    """Abstract-group isomorphism test.  Returns None when either group
    cannot be enumerated within `cap`."""
    eg = elements(g, cap)
    eh = elements(h, cap)
    if eg is None or eh is None:
        return None
    if len(eg) != len(eh):
        return False
    if is_abelian(eg) != is_abelian(eh):
        return False
    hist_g = element_order_multiset(eg)
    hist_h = element_order_multiset(eh)
    if hist_g != hist_h:
        return False

    gens = _generating_subset(g.generators, eg, g.degree)
    if not gens:
        return True  # both trivial

    by_order: dict[int, list[Perm]] = {}
    for e in eh:
        by_order.setdefault(perm_order(e), []).append(e)
    # Try the target's own generators first; the natural correspondence is
    # usually found immediately for groups built by the same recipe.
    preferred = set(h.generators)
    for o in by_order:
        by_order[o].sort(key=lambda e: (e not in preferred, e))

    gen_orders = [perm_order(x) for x in gens]

    def backtrack(idx: int, images: list[Perm]) -> bool:
        if idx == len(gens):
            return True
        for cand in by_order.get(gen_orders[idx], []):
            images.append(cand)
            if _hom_extends(gens[: idx + 1], images, eg, g.degree, h.degree):
                if backtrack(idx + 1, images):
                    return True
            images.pop()
        return False

    if not backtrack(0, []):
        return False
    # A homomorphic injective image of G inside H with |G| = |H| is onto.
    return True

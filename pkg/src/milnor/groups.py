"""Finite groups, finitely presented groups and homomorphisms between them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels

Word = tuple  # ((generator, +1 | -1), ...)


class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# words


def free_reduce(word: Iterable) -> Word:
    out: list = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(tuple(letter))
    return tuple(out)


def word_inverse(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def parse_word(text: str) -> Word:
    """Parse ``"a b A"``-style words: whitespace separated, capital = inverse.

    A generator name is lowercase-initial; the inverse letter capitalises the
    first character only (``x3`` / ``X3``).  ``"1"`` or ``""`` is the empty word.
    """
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        if tok[0].isupper():
            letters.append((tok[0].lower() + tok[1:], -1))
        elif tok[0].islower():
            letters.append((tok, 1))
        else:
            raise GroupError(f"bad letter {tok!r}")
    return tuple(letters)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(g if e > 0 else g[0].upper() + g[1:] for g, e in word)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as a multiplication table on indices ``0..n-1``."""

    names: tuple
    table: tuple
    name: str = ""

    def __post_init__(self):
        n = len(self.names)
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "names", tuple(str(x) for x in self.names))
        object.__setattr__(self, "table", table)
        if n == 0 or len(table) != n or any(len(r) != n for r in table):
            raise GroupError("table must be n x n for n named elements")
        if any(not 0 <= x < n for r in table for x in r):
            raise GroupError("table is not closed")
        if len(set(self.names)) != n:
            raise GroupError("duplicate element names")
        ident = [a for a in range(n) if all(table[a][b] == b == table[b][a] for b in range(n))]
        if not ident:
            raise GroupError("no identity element")
        e = ident[0]
        inv = []
        for a in range(n):
            cands = [b for b in range(n) if table[a][b] == e and table[b][a] == e]
            if not cands:
                raise GroupError(f"{self.names[a]} has no inverse")
            inv.append(cands[0])
        arr = np.array(table)
        # associativity on all triples: (ab)c == a(bc)
        if not np.array_equal(arr[arr, :], arr[:, arr]):
            raise GroupError("multiplication is not associative")
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inv))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.names == other.names and self.table == other.table

    def __hash__(self):
        return hash((self.names, self.table))

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    @property
    def order(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, h: int, x: int) -> int:
        """h x h^-1"""
        return self.table[self.table[h][x]][self.inverse[h]]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for x in elems:
            out = self.table[out][x]
        return out

    def element(self, name) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise GroupError(f"{name!r} is not an element of {self.name or 'the group'}") from None

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self for b in self)

    @cached_property
    def mul_array(self) -> np.ndarray:
        return np.ascontiguousarray(self.table, dtype=np.int32)

    @cached_property
    def inv_array(self) -> np.ndarray:
        return np.ascontiguousarray(self.inverse, dtype=np.int32)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x, k = self.table[x][a], k + 1
        return k

    def generated_subgroup(self, gens: Iterable[int]) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def table_presentation(self) -> "FinitelyPresentedGroup":
        """Presentation with one generator per element and the relators x_a x_b = x_ab."""
        gens = tuple(f"g{a}" for a in self)
        rels = [((gens[a], 1), (gens[b], 1), (gens[self.table[a][b]], -1)) for a in self for b in self]
        return FinitelyPresentedGroup(gens, tuple(rels), name=f"<{self.name}>")

    # constructors -------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)], f"Z{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.cyclic(1)

    @classmethod
    def direct_product(cls, A: "FiniteGroup", B: "FiniteGroup") -> "FiniteGroup":
        pairs = list(product(A, B))
        index = {p: i for i, p in enumerate(pairs)}
        names = [f"({A.names[a]},{B.names[b]})" for a, b in pairs]
        table = [[index[(A.mul(a, c), B.mul(b, d))] for c, d in pairs] for a, b in pairs]
        return cls(names, table, f"{A.name}x{B.name}")

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """Close one-line permutations of 0..k-1 under composition and expand the table.

        Elements are sorted lexicographically (identity first); the product
        ``a*b`` means "apply a, then b", matching a right action on points.
        """
        gens = [tuple(g) for g in generators]
        if not gens:
            raise GroupError("need at least one generator")
        k = len(gens[0])
        for g in gens:
            if len(g) != k or sorted(g) != list(range(k)):
                raise GroupError(f"{g} is not a permutation of 0..{k - 1}")
        then = lambda p, q: tuple(q[p[i]] for i in range(k))
        ident = tuple(range(k))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = then(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        elems = sorted(seen)
        index = {p: i for i, p in enumerate(elems)}
        sep = "" if k <= 10 else "."
        names = [sep.join(str(i) for i in p) for p in elems]
        table = [[index[then(p, q)] for q in elems] for p in elems]
        return cls(names, table, name)

    @classmethod
    def symmetric(cls, k: int) -> "FiniteGroup":
        if k == 1:
            return cls.from_permutations([[0]], "S1")
        gens = [[1, 0] + list(range(2, k)), list(range(1, k)) + [0]]
        return cls.from_permutations(gens, f"S{k}")


@dataclass(frozen=True)
class FinitelyPresentedGroup:
    """Generators and relator words.

    Elements are words; they are only ever freely reduced, never normalised
    modulo the relators.
    """

    generators: tuple
    relators: tuple = ()
    name: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(tuple((g, int(e)) for g, e in r) for r in self.relators)
        known = set(gens)
        if len(known) != len(gens):
            raise GroupError("duplicate generator names")
        for r in rels:
            for g, e in r:
                if g not in known:
                    raise GroupError(f"relator uses undeclared generator {g!r}")
                if e not in (1, -1):
                    raise GroupError("exponents must be +1 or -1")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    def __repr__(self):
        return f"<{' '.join(self.generators)} | {', '.join(format_word(r) for r in self.relators)}>"

    @property
    def identity(self) -> Word:
        return ()

    def mul(self, a: Word, b: Word) -> Word:
        return free_reduce(a + b)

    def inv(self, a: Word) -> Word:
        return word_inverse(a)

    def prod(self, elems: Iterable[Word]) -> Word:
        return free_reduce(x for w in elems for x in w)

    def gen(self, name: str) -> Word:
        return ((name, 1),)

    @cached_property
    def generator_index(self) -> dict:
        return {g: i for i, g in enumerate(self.generators)}

    def is_relator_consequence(self, word: Word) -> bool:
        """Cheap sufficient test: freely trivial, or a cyclic conjugate of a relator or its inverse."""
        w = free_reduce(word)
        if not w:
            return True
        for r in self.relators:
            for cand in (r, word_inverse(r)):
                for k in range(len(cand)):
                    if free_reduce(cand[k:] + cand[:k]) == w:
                        return True
        return False


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism.

    For a presented source ``images`` lists generator images; for a finite
    source it is the full element table.  Relators (or multiplicativity) are
    checked against a finite target on construction.
    """

    source: object
    target: object
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self._source_gens()):
            raise GroupError("one image per generator/element required")
        T = self.target
        if isinstance(self.source, FinitelyPresentedGroup):
            if isinstance(T, FiniteGroup):
                for r in self.source.relators:
                    if self(r) != T.identity:
                        raise GroupError(f"relator {format_word(r)} does not map to the identity")
        else:
            S = self.source
            for a in S:
                for b in S:
                    if T.mul(images[a], images[b]) != images[S.mul(a, b)]:
                        raise GroupError("element table is not multiplicative")

    def _source_gens(self):
        if isinstance(self.source, FinitelyPresentedGroup):
            return self.source.generators
        return list(self.source)

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source, self.target, self.normalized) == (other.source, other.target, other.normalized)

    def __hash__(self):
        return hash((self.source, self.target, self.normalized))

    @cached_property
    def normalized(self) -> tuple:
        if isinstance(self.target, FinitelyPresentedGroup):
            return tuple(free_reduce(w) for w in self.images)
        return self.images

    def __call__(self, x):
        if isinstance(self.source, FinitelyPresentedGroup):
            idx = self.source.generator_index
            T = self.target
            parts = []
            for g, e in x:
                y = self.images[idx[g]]
                parts.append(y if e > 0 else T.inv(y))
            return T.prod(parts)
        return self.images[x]

    def image(self, gen: str):
        return self.images[self.source.generator_index[gen]]

    @property
    def is_trivial(self) -> bool:
        return all(y == self.target.identity for y in self.normalized)

    def __repr__(self):
        T = self.target
        show = (lambda y: T.names[y]) if isinstance(T, FiniteGroup) else format_word
        return "GroupHom(" + ", ".join(f"{g}->{show(y)}" for g, y in zip(self._source_gens(), self.images)) + ")"

    @classmethod
    def from_generator_images(cls, source: FiniteGroup, target: FiniteGroup, images: Mapping) -> "GroupHom":
        """Extend generator images on a finite source to the full table.

        Raises GroupError when the assignment does not generate the source or
        does not extend to a homomorphism.
        """
        table = {source.identity: target.identity}
        frontier = [source.identity]
        gens = list(images.items())
        while frontier:
            nxt = []
            for x in frontier:
                for g, hg in gens:
                    y, hy = source.mul(x, g), target.mul(table[x], hg)
                    if y in table:
                        if table[y] != hy:
                            raise GroupError("generator images do not define a homomorphism")
                    else:
                        table[y] = hy
                        nxt.append(y)
            frontier = nxt
        if len(table) != source.order:
            raise GroupError("images are not given on a generating set")
        return cls(source, target, tuple(table[a] for a in source))


def identity_hom(G) -> GroupHom:
    if isinstance(G, FinitelyPresentedGroup):
        return GroupHom(G, G, tuple(G.gen(g) for g in G.generators))
    return GroupHom(G, G, tuple(G))


def trivial_hom(S, T) -> GroupHom:
    n = len(S.generators) if isinstance(S, FinitelyPresentedGroup) else S.order
    return GroupHom(S, T, (T.identity,) * n)


def compose_homs(outer: GroupHom, inner: GroupHom) -> GroupHom:
    """``outer`` after ``inner``; relators are re-verified by the constructor."""
    if inner.target != outer.source:
        raise GroupError("target of the inner hom is not the source of the outer hom")
    return GroupHom(inner.source, outer.target, tuple(outer(y) for y in inner.images))


# ---------------------------------------------------------------------------


def enumerate_homs(P, G: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms from a presented (or finite) group into a finite group.

    Generator images range over all of ``G``; the search propagates forced
    values through relators with a single unknown letter, and the result is
    exactly the set of assignments killing every relator, in lexicographic
    order of the image tuples.
    """
    if isinstance(P, FiniteGroup):
        return [GroupHom(P, G, h.images) for h in enumerate_homs(P.table_presentation(), G)]
    idx = P.generator_index
    rels = [[(idx[g], e) for g, e in r] for r in P.relators]
    sols = kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(P.generators), rels)
    return [GroupHom(P, G, tuple(int(x) for x in row)) for row in sols]


def are_conjugate(a: GroupHom, b: GroupHom) -> int | None:
    """First h (in element order) with b(x) = h a(x) h^-1 on every generator, else None."""
    if a.source != b.source or a.target != b.target:
        raise GroupError("homomorphisms have different source or target")
    G = a.target
    for h in G:
        if all(G.conj(h, x) == y for x, y in zip(a.images, b.images)):
            return h
    return None


@dataclass(frozen=True)
class HomClass:
    representative: GroupHom
    members: tuple

    @property
    def size(self) -> int:
        return len(self.members)


def conjugacy_classes_of_homs(P, G: FiniteGroup, homs: Sequence[GroupHom] | None = None) -> list[HomClass]:
    """Partition Hom(P, G) into conjugacy classes; representatives come first in enumeration order."""
    homs = enumerate_homs(P, G) if homs is None else list(homs)
    position = {h.images: i for i, h in enumerate(homs)}
    label = [-1] * len(homs)
    classes = []
    for i, a in enumerate(homs):
        if label[i] >= 0:
            continue
        members = []
        for h in G:
            j = position[tuple(G.conj(h, x) for x in a.images)]
            if label[j] < 0:
                label[j] = len(classes)
                members.append(j)
        classes.append(HomClass(a, tuple(homs[j] for j in sorted(members))))
    return classes

"""Homomorphisms between free subgroups given on ordered bases.

A :class:`FreeHom` sends the j-th basis element of its domain to ``images[j]``
(ambient letters).  Inversion and change of basis go through
:class:`Expresser`, a Stallings folding whose edges remember words in the
abstract generator letters.
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .linalg import det_bareiss
from .stallings import Subgroup, SubgroupError, is_subgroup, subgroup_from_letters, whole
from .words import (
    Letters,
    RankContext,
    Word,
    _cyclic_split,
    concat,
    inverse_letters,
    reduce_letters,
    substitute,
)


class HomError(ValueError):
    pass


# -- history-tracked folding ----------------------------------------------

class Expresser:
    """Writes members of ``<gens>`` as words in the generators.

    Every edge carries a history word over the abstract letters ``1..len(gens)``;
    reading a closed path from the base and multiplying histories gives an
    expression that evaluates to the path label.  Folding keeps this true by
    re-gauging the absorbed vertex before identifying it.
    """

    def __init__(self, gens: Sequence[Letters]):
        self.src: List[int] = []
        self.dst: List[int] = []
        self.gen: List[int] = []
        self.hist: List[Letters] = []
        self.adj: Dict[Tuple[int, int], set] = defaultdict(set)
        self.incident: Dict[int, set] = defaultdict(set)
        count = 1
        for k, g in enumerate(gens):
            cur = 0
            for pos, x in enumerate(g):
                last = pos == len(g) - 1
                nxt = 0 if last else count
                if not last:
                    count += 1
                h: Letters = (k + 1,) if last else ()
                if x > 0:
                    self._add(cur, x - 1, nxt, h)
                else:
                    self._add(nxt, -x - 1, cur, inverse_letters(h))
                cur = nxt
        self._fold()

    def _add(self, u: int, i: int, w: int, h: Letters) -> int:
        e = len(self.src)
        self.src.append(u)
        self.dst.append(w)
        self.gen.append(i)
        self.hist.append(h)
        self.adj[(u, i + 1)].add(e)
        self.adj[(w, -(i + 1))].add(e)
        self.incident[u].add(e)
        self.incident[w].add(e)
        return e

    def _detach(self, e: int) -> None:
        i = self.gen[e]
        self.adj[(self.src[e], i + 1)].discard(e)
        self.adj[(self.dst[e], -(i + 1))].discard(e)
        self.incident[self.src[e]].discard(e)
        self.incident[self.dst[e]].discard(e)

    def _attach(self, e: int) -> None:
        i = self.gen[e]
        self.adj[(self.src[e], i + 1)].add(e)
        self.adj[(self.dst[e], -(i + 1))].add(e)
        self.incident[self.src[e]].add(e)
        self.incident[self.dst[e]].add(e)

    def _step(self, e: int, v: int, letter: int) -> Tuple[int, Letters]:
        if letter > 0:
            return self.dst[e], self.hist[e]
        return self.src[e], inverse_letters(self.hist[e])

    def _fold(self) -> None:
        stack = [k for k, s in self.adj.items() if len(s) > 1]
        while stack:
            key = stack.pop()
            s = self.adj.get(key)
            if not s or len(s) < 2:
                continue
            v, letter = key
            e1, e2 = sorted(s)[:2]
            t1, g1 = self._step(e1, v, letter)
            t2, g2 = self._step(e2, v, letter)
            if t1 == t2:
                self._detach(e2)
            else:
                if t2 == 0:
                    t1, t2, g1, g2 = t2, t1, g2, g1
                c = concat(inverse_letters(g2), g1)
                touched = list(self.incident[t2])
                for e in touched:
                    h = self.hist[e]
                    if self.dst[e] == t2:
                        h = concat(h, c)
                    if self.src[e] == t2:
                        h = concat(inverse_letters(c), h)
                    self.hist[e] = h
                for e in touched:
                    self._detach(e)
                    if self.src[e] == t2:
                        self.src[e] = t1
                    if self.dst[e] == t2:
                        self.dst[e] = t1
                    self._attach(e)
                    i = self.gen[e]
                    stack.append((self.src[e], i + 1))
                    stack.append((self.dst[e], -(i + 1)))
            stack.append(key)

    def express(self, letters: Sequence[int]) -> Optional[Letters]:
        """Abstract word for a member, or ``None`` if not in the subgroup."""
        v = 0
        acc: Letters = ()
        for x in letters:
            s = self.adj.get((v, x))
            if not s:
                return None
            (e,) = s
            v, h = self._step(e, v, x)
            acc = concat(acc, h)
        return acc if v == 0 else None


# -- FreeHom ----------------------------------------------------------------

class FreeHom:
    """Homomorphism ``domain -> codomain`` given by images of the domain basis."""

    def __init__(self, domain: Subgroup, codomain: Subgroup, images: Sequence[Letters], iso: bool):
        if len(images) != domain.rank:
            raise HomError(f"expected {domain.rank} images, got {len(images)}")
        self.domain = domain
        self.codomain = codomain
        self.images: Tuple[Letters, ...] = tuple(tuple(x) for x in images)
        self.iso = iso

    @property
    def ctx(self) -> RankContext:
        return self.domain.ctx

    @property
    def image_words(self) -> List[Word]:
        return [Word._raw(self.ctx, x) for x in self.images]

    def apply_letters(self, letters: Sequence[int]) -> Letters:
        return substitute(self.domain.rewrite_letters(letters), self.images)

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    @cached_property
    def inverse(self) -> "FreeHom":
        if not self.iso:
            raise HomError("only isomorphisms can be inverted")
        ex = Expresser(self.images)
        dom = self.domain.basis_letters
        out = []
        for b in self.codomain.basis_letters:
            e = ex.express(b)
            if e is None:
                raise HomError("codomain basis element not generated by the images")
            out.append(substitute(e, dom))
        inv = FreeHom(self.codomain, self.domain, out, True)
        inv.__dict__["inverse"] = self
        return inv

    def __repr__(self) -> str:
        imgs = ", ".join(str(w) for w in self.image_words)
        return f"FreeHom({self.domain!r} -> {self.codomain!r}: [{imgs}])"


def _iso_problem(U: Subgroup, V: Subgroup, images: Sequence[Letters]) -> Optional[str]:
    for x in images:
        if not V.contains_letters(x):
            return f"image {Word._raw(V.ctx, x)} is not in the codomain"
    if subgroup_from_letters(V.ctx, images) != V:
        return "images do not generate the codomain"
    if U.rank != V.rank or U.index != V.index:
        return "domain and codomain have different index"
    return None


def hom_from_images(U: Subgroup, V: Subgroup, images: Sequence[Word], require_iso: bool = True) -> FreeHom:
    """Validated hom; with ``require_iso`` a failure of the isomorphism test raises."""
    imgs = [w.letters for w in images]
    if len(imgs) != U.rank:
        raise HomError(f"expected {U.rank} images, got {len(imgs)}")
    problem = _iso_problem(U, V, imgs)
    if problem and require_iso:
        raise HomError(problem)
    return FreeHom(U, V, imgs, problem is None)


def hom_on_basis(U: Subgroup, V: Subgroup, basis: Sequence[Word], images: Sequence[Word], iso: bool = True) -> FreeHom:
    """Hom defined on an arbitrary basis of ``U`` rather than its cached one."""
    ex = Expresser([b.letters for b in basis])
    imgs = [w.letters for w in images]
    out = []
    for b in U.basis_letters:
        e = ex.express(b)
        if e is None:
            raise HomError("the given words do not generate the domain")
        out.append(substitute(e, imgs))
    if len(basis) != U.rank:
        raise HomError("the given words are not a basis")
    return FreeHom(U, V, out, iso)


def apply(h: FreeHom, w: Word) -> Word:
    try:
        return Word._raw(h.codomain.ctx, h.apply_letters(w.letters))
    except SubgroupError:
        raise HomError(f"{w} is not in the domain") from None


def compose(h2: FreeHom, h1: FreeHom) -> FreeHom:
    """``h2`` after ``h1``."""
    imgs = [h2.apply_letters(x) for x in h1.images]
    if h1.iso and h2.iso:
        cod = h2.codomain if h1.codomain == h2.domain else subgroup_from_letters(h1.ctx, imgs)
        return FreeHom(h1.domain, cod, imgs, True)
    return FreeHom(h1.domain, h2.codomain, imgs, False)


def invert(h: FreeHom) -> FreeHom:
    return h.inverse


def restrict(h: FreeHom, S: Subgroup) -> FreeHom:
    if not is_subgroup(S, h.domain):
        raise HomError("restriction to a subgroup outside the domain")
    imgs = [h.apply_letters(b) for b in S.basis_letters]
    return FreeHom(S, subgroup_from_letters(S.ctx, imgs), imgs, h.iso)


def identity(H: Subgroup) -> FreeHom:
    return FreeHom(H, H, H.basis_letters, True)


def abel_matrix(h: FreeHom, mod_p: Optional[int] = None) -> List[List[int]]:
    """Column j is the abelianized image of basis element j in the codomain basis."""
    cols = [h.codomain.abelianize_in_basis(x, mod_p) for x in h.images]
    r = h.codomain.rank
    return [[cols[j][i] for j in range(len(cols))] for i in range(r)]


def det(h: FreeHom) -> int:
    if not h.iso:
        raise HomError("determinant of a non-isomorphism")
    return det_bareiss(abel_matrix(h))


def is_saut(h: FreeHom) -> bool:
    return det(h) == 1


def equal_maps(h1: FreeHom, h2: FreeHom) -> bool:
    return h1.domain == h2.domain and h1.images == h2.images


# -- named automorphisms of the whole group -----------------------------------

def _aut(ctx: RankContext, images: Sequence[Letters]) -> FreeHom:
    F = whole(ctx)
    return FreeHom(F, F, images, True)


def aut_from_images(ctx: RankContext, images: Sequence[Word]) -> FreeHom:
    F = whole(ctx)
    return hom_from_images(F, F, images)


def nielsen(ctx: RankContext, i: int, j: int, side: str = "right") -> FreeHom:
    """``R_ij: x_i -> x_i x_j`` or ``L_ij: x_i -> x_j x_i`` (0-based indices)."""
    if i == j:
        raise HomError("Nielsen map needs i != j")
    imgs = [(k + 1,) for k in range(ctx.rank)]
    if side == "right":
        imgs[i] = (i + 1, j + 1)
    elif side == "left":
        imgs[i] = (j + 1, i + 1)
    else:
        raise HomError(f"side must be 'left' or 'right', not {side!r}")
    return _aut(ctx, imgs)


def perm_aut(ctx: RankContext, perm: Sequence[int]) -> FreeHom:
    """Generator ``i`` goes to generator ``perm[i]``."""
    if sorted(perm) != list(range(ctx.rank)):
        raise HomError("not a permutation")
    return _aut(ctx, [(perm[k] + 1,) for k in range(ctx.rank)])


def inversion_aut(ctx: RankContext, i: int) -> FreeHom:
    imgs = [(k + 1,) for k in range(ctx.rank)]
    imgs[i] = (-(i + 1),)
    return _aut(ctx, imgs)


def inner_aut(ctx: RankContext, g: Sequence[int]) -> FreeHom:
    g = tuple(g)
    gi = inverse_letters(g)
    return _aut(ctx, [concat(concat(g, (k + 1,)), gi) for k in range(ctx.rank)])


def transport(H: Subgroup, aut: FreeHom) -> FreeHom:
    """Move an automorphism of the free group on ``H.basis_ctx`` onto ``H``."""
    return FreeHom(H, H, [H.embed_letters(x) for x in aut.images], aut.iso)


# -- Whitehead reduction -------------------------------------------------------

def cyclic_length(letters: Sequence[int]) -> int:
    return len(_cyclic_split(letters)[0])


def _whitehead_graph(core: Letters) -> nx.DiGraph:
    G = nx.DiGraph()
    n = len(core)
    for k in range(n):
        x, y = core[k], core[(k + 1) % n]
        a, b = x, -y
        if a == b:
            continue
        for s, t in ((a, b), (b, a)):
            if G.has_edge(s, t):
                G[s][t]["capacity"] += 1
            else:
                G.add_edge(s, t, capacity=1)
    return G


def _type2_images(rank: int, A: set, a: int) -> List[Letters]:
    imgs = []
    for j in range(1, rank + 1):
        if j == abs(a):
            imgs.append((j,))
            continue
        pre = (-a,) if -j in A else ()
        post = (a,) if j in A else ()
        imgs.append(reduce_letters(pre + (j,) + post))
    return imgs


def _best_type2(core: Letters, rank: int) -> Optional[List[Letters]]:
    G = _whitehead_graph(core)
    best = None
    for g in range(1, rank + 1):
        for a in (g, -g):
            if a not in G or -a not in G:
                continue
            deg = sum(G[a][t]["capacity"] for t in G[a])
            cut, (side, _) = nx.minimum_cut(G, a, -a)
            gain = deg - cut
            if gain > 0 and (best is None or gain > best[0]):
                best = (gain, set(side), a)
    if best is None:
        return None
    return _type2_images(rank, best[1], best[2])


def whitehead_reduce(letters: Sequence[int], rank: int) -> Tuple[bool, List[List[Letters]]]:
    """Greedy cyclic-length reduction; on success the composite sends the word to a generator."""
    w = tuple(letters)
    if not w:
        raise HomError("the identity is not primitive")
    seq: List[List[Letters]] = []
    while cyclic_length(w) > 1:
        core = _cyclic_split(w)[0]
        imgs = _best_type2(core, rank)
        if imgs is None:
            return False, seq
        new = substitute(w, imgs)
        if cyclic_length(new) >= len(core):
            raise AssertionError("Whitehead step did not shorten the word")
        seq.append(imgs)
        w = new
    core, conj = _cyclic_split(w)
    if conj:
        ci = inverse_letters(conj)
        seq.append([concat(concat(ci, (k,)), conj) for k in range(1, rank + 1)])
    if core[0] < 0:
        seq.append([(-k,) if k == -core[0] else (k,) for k in range(1, rank + 1)])
    return True, seq


def whitehead_is_primitive(S: Subgroup, w: Word) -> Tuple[bool, List[FreeHom]]:
    """Primitivity of ``w`` in ``S`` with automorphisms of ``S.basis_ctx`` reducing it.

    When primitive, applying the sequence in order to ``rewrite(S, w)`` gives a
    single basis letter.
    """
    try:
        v = S.rewrite_letters(w.letters)
    except SubgroupError:
        raise HomError(f"{w} is not in the subgroup") from None
    ok, seq = whitehead_reduce(v, S.rank)
    return ok, [_aut(S.basis_ctx, imgs) for imgs in seq]


def compose_all(seq: Sequence[FreeHom], ctx: RankContext) -> FreeHom:
    """Composite of a sequence applied left to right."""
    acc = _aut(ctx, [(k + 1,) for k in range(ctx.rank)])
    for h in seq:
        acc = compose(h, acc)
    return acc

"""Finitely generated subgroups of a free group as folded based graphs.

A subgroup is stored as a canonical core graph: vertex 0 is the base, and for
every generator ``i`` there is a partial injection ``out[i]`` on the vertices
(``-1`` where undefined) together with its inverse ``inn[i]``.  Canonical
numbering is breadth first from the base, scanning generators in order and,
for each generator, the outgoing edge before the incoming one.  The same
traversal fixes the spanning tree, hence the ordered basis and the transversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .linalg import nullspace_mod_p, projective_points
from .words import (
    Letters,
    RankContext,
    Word,
    abelianize_letters,
    concat,
    inverse_letters,
    iterated_commutator,
    substitute,
)

Edge = Tuple[int, int, int]  # (source, generator index, target)


class SubgroupError(ValueError):
    pass


class Subgroup:
    """Canonical core graph of a finitely generated subgroup plus cached data."""

    __slots__ = (
        "ctx", "n", "out", "inn", "key", "_hash", "index", "rank",
        "paths", "label", "basis_letters", "_basis", "_bctx",
    )

    def __init__(self, ctx: RankContext, n: int, edges: Iterable[Edge], base: int = 0):
        d = ctx.rank
        out = [[-1] * n for _ in range(d)]
        inn = [[-1] * n for _ in range(d)]
        for u, i, w in edges:
            if out[i][u] not in (-1, w) or inn[i][w] not in (-1, u):
                raise SubgroupError("graph is not folded")
            out[i][u] = w
            inn[i][w] = u
        order, parent = _bfs(out, inn, n, base)
        if len(order) != n:
            raise SubgroupError("graph is not connected")
        relabel = [0] * n
        for k, v in enumerate(order):
            relabel[v] = k
        self.ctx = ctx
        self.n = n
        self.out = tuple(
            tuple(relabel[out[i][v]] if out[i][v] >= 0 else -1 for v in order) for i in range(d)
        )
        self.inn = tuple(
            tuple(relabel[inn[i][v]] if inn[i][v] >= 0 else -1 for v in order) for i in range(d)
        )
        self.key = (n, self.out)
        self._hash = hash((ctx, self.key))
        covering = all(-1 not in row for row in self.out)
        self.index: Optional[int] = n if covering else None
        self._build_tree({relabel[v]: (relabel[u], i, s) for v, (u, i, s) in parent.items()})
        self._basis: Optional[List[Word]] = None
        self._bctx: Optional[RankContext] = None

    def _build_tree(self, parent: Dict[int, Tuple[int, int, int]]) -> None:
        d = self.ctx.rank
        paths: list[Letters] = [()] * self.n
        tree = set()
        for v in range(1, self.n):  # canonical labels are in BFS order
            u, i, s = parent[v]
            paths[v] = paths[u] + ((i + 1) * s,)
            tree.add((u, i) if s == 1 else (v, i))
        label = [[-1] * self.n for _ in range(d)]
        basis: list[Letters] = []
        for i in range(d):
            row = self.out[i]
            for u in range(self.n):
                w = row[u]
                if w < 0:
                    continue
                if (u, i) in tree:
                    label[i][u] = 0
                else:
                    basis.append(concat(paths[u] + (i + 1,), inverse_letters(paths[w])))
                    label[i][u] = len(basis)
        self.paths = tuple(paths)
        self.label = tuple(tuple(r) for r in label)
        self.basis_letters = tuple(basis)
        self.rank = len(basis)

    # -- identity -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and self._hash == other._hash
            and self.key == other.key
            and self.ctx == other.ctx
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        idx = self.index if self.index is not None else "inf"
        return f"<Subgroup index={idx} rank={self.rank} vertices={self.n}>"

    # -- cached views ---------------------------------------------------
    @property
    def basis(self) -> List[Word]:
        if self._basis is None:
            self._basis = [Word._raw(self.ctx, b) for b in self.basis_letters]
        return list(self._basis)

    @property
    def transversal(self) -> List[Word]:
        if self.index is None:
            raise SubgroupError("transversal of an infinite-index subgroup")
        return [Word._raw(self.ctx, p) for p in self.paths]

    @property
    def basis_ctx(self) -> RankContext:
        """Fresh context whose generators stand for the ordered basis."""
        if self._bctx is None:
            self._bctx = RankContext.machine(self.rank)
        return self._bctx

    @property
    def is_finite_index(self) -> bool:
        return self.index is not None

    def edges(self) -> List[Edge]:
        return [(u, i, w) for i, row in enumerate(self.out) for u, w in enumerate(row) if w >= 0]

    # -- paths ----------------------------------------------------------
    def trace(self, letters: Sequence[int], start: int = 0) -> int:
        """End vertex of the path reading ``letters`` from ``start``; -1 if it falls off."""
        v = start
        out, inn = self.out, self.inn
        for x in letters:
            v = out[x - 1][v] if x > 0 else inn[-x - 1][v]
            if v < 0:
                return -1
        return v

    def contains_letters(self, letters: Sequence[int]) -> bool:
        return self.trace(letters) == 0

    def __contains__(self, w: Word) -> bool:
        return self.contains_letters(w.letters)

    def rewrite_letters(self, letters: Sequence[int]) -> Letters:
        """Express a member as a word in basis indices (1-based, signed)."""
        v = 0
        out, inn, label = self.out, self.inn, self.label
        res: list[int] = []
        for x in letters:
            if x > 0:
                i = x - 1
                k = label[i][v]
                v = out[i][v]
                if v < 0:
                    raise SubgroupError("word is not in the subgroup")
                if k:
                    res.append(k)
            else:
                i = -x - 1
                u = inn[i][v]
                if u < 0:
                    raise SubgroupError("word is not in the subgroup")
                k = label[i][u]
                v = u
                if k:
                    res.append(-k)
        if v != 0:
            raise SubgroupError("word is not in the subgroup")
        return tuple(res)  # reduced: consecutive inverse steps would retrace one edge

    def abelianize_in_basis(self, letters: Sequence[int], modulus: Optional[int] = None) -> Tuple[int, ...]:
        return abelianize_letters(self.rewrite_letters(letters), self.rank, modulus)

    def embed_letters(self, letters: Sequence[int]) -> Letters:
        """Evaluate a word over the basis (basis-context letters) in the ambient group."""
        return substitute(letters, self.basis_letters)

    def to_basis(self, w: Word) -> Word:
        """``w`` as an element of the free group on :attr:`basis_ctx`."""
        return Word._raw(self.basis_ctx, self.rewrite_letters(w.letters))

    def embed(self, w: Word) -> Word:
        """Inverse of :meth:`to_basis`."""
        return Word._raw(self.ctx, self.embed_letters(w.letters))

    def lift(self, t: Sequence[int], m: int) -> "Subgroup":
        """Kernel of the map sending the j-th basis element to ``t[j]`` in Z/m."""
        d = self.ctx.rank
        edges = []
        for i in range(d):
            row, lab = self.out[i], self.label[i]
            for v in range(self.n):
                w = row[v]
                if w < 0:
                    continue
                k = lab[v]
                wt = t[k - 1] % m if k else 0
                for c in range(m):
                    edges.append((v * m + c, i, w * m + (c + wt) % m))
        return Subgroup(self.ctx, self.n * m, edges)


def _bfs(out, inn, n: int, base: int):
    d = len(out)
    order = [base]
    seen = {base}
    parent: Dict[int, Tuple[int, int, int]] = {}
    k = 0
    while k < len(order):
        v = order[k]
        k += 1
        for i in range(d):
            w = out[i][v]
            if w >= 0 and w not in seen:
                seen.add(w)
                order.append(w)
                parent[w] = (v, i, 1)
            w = inn[i][v]
            if w >= 0 and w not in seen:
                seen.add(w)
                order.append(w)
                parent[w] = (v, i, -1)
    return order, parent


# -- construction -------------------------------------------------------

def _find(parent: list[int], v: int) -> int:
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        parent[v], v = root, parent[v]
    return root


def _fold(gens: Sequence[Letters]) -> Tuple[int, set]:
    edges: list[Edge] = []
    count = 1
    for g in gens:
        cur = 0
        for k, x in enumerate(g):
            if k == len(g) - 1:
                nxt = 0
            else:
                nxt = count
                count += 1
            if x > 0:
                edges.append((cur, x - 1, nxt))
            else:
                edges.append((nxt, -x - 1, cur))
            cur = nxt
    parent = list(range(count))
    while True:
        changed = False
        out: dict = {}
        inn: dict = {}
        for u, i, w in edges:
            u, w = _find(parent, u), _find(parent, w)
            t = out.get((u, i))
            if t is None:
                out[(u, i)] = w
            else:
                a, b = _find(parent, t), _find(parent, w)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    changed = True
            s = inn.get((w, i))
            if s is None:
                inn[(w, i)] = u
            else:
                a, b = _find(parent, s), _find(parent, u)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    changed = True
        if not changed:
            break
    return count, {(_find(parent, u), i, _find(parent, w)) for u, i, w in edges}


def _core(edges: set, base: int = 0) -> Tuple[int, List[Edge]]:
    """Prune hanging trees, then renumber vertices densely with ``base`` first."""
    deg: Dict[int, int] = {base: 0}
    inc: Dict[int, list] = {base: []}
    for e in edges:
        u, _, w = e
        for v in (u, w):
            deg[v] = deg.get(v, 0) + 1
            inc.setdefault(v, []).append(e)
    alive = set(edges)
    removed = set()
    stack = [v for v, k in deg.items() if k <= 1 and v != base]
    while stack:
        v = stack.pop()
        if v in removed or deg[v] > 1:
            continue
        removed.add(v)
        for e in inc[v]:
            if e in alive:
                alive.discard(e)
                u, _, w = e
                deg[u] -= 1
                deg[w] -= 1
                other = w if u == v else u
                if other != base and deg[other] <= 1:
                    stack.append(other)
    verts = sorted({base} | {x for e in alive for x in (e[0], e[2])})
    ren = {v: k for k, v in enumerate(verts)}
    return len(verts), [(ren[u], i, ren[w]) for u, i, w in alive]


def from_generators(gens: Iterable[Word], ctx: Optional[RankContext] = None) -> Subgroup:
    gens = list(gens)
    if ctx is None:
        if not gens:
            raise SubgroupError("context required for an empty generating set")
        ctx = gens[0].ctx
    for g in gens:
        if g.ctx != ctx:
            raise SubgroupError("generator from a different context")
    return subgroup_from_letters(ctx, [g.letters for g in gens])


def subgroup_from_letters(ctx: RankContext, gens: Sequence[Letters]) -> Subgroup:
    _, edges = _fold([g for g in gens if g])
    n, core = _core(edges)
    return Subgroup(ctx, n, core)


def from_graph(ctx: RankContext, n: int, edges: Iterable[Edge], base: int = 0, check_core: bool = True) -> Subgroup:
    """Build from explicit edges, validating folding, connectivity and the core condition."""
    edges = list(edges)
    for u, i, w in edges:
        if not (0 <= u < n and 0 <= w < n and 0 <= i < ctx.rank):
            raise SubgroupError(f"edge {(u, i, w)} out of range")
    if check_core:
        deg = [0] * n
        for u, _, w in edges:
            deg[u] += 1
            deg[w] += 1
        for v in range(n):
            if v != base and deg[v] < 2:
                raise SubgroupError(f"vertex {v} violates the core condition")
    return Subgroup(ctx, n, edges, base)


def from_permutations(ctx: RankContext, perms: Sequence[Sequence[int]], base: int = 0) -> Subgroup:
    """Stabilizer of ``base`` for the action given by one permutation per generator."""
    n = len(perms[0])
    return Subgroup(ctx, n, [(v, i, perms[i][v]) for i in range(ctx.rank) for v in range(n)], base)


def whole(ctx: RankContext) -> Subgroup:
    return Subgroup(ctx, 1, [(0, i, 0) for i in range(ctx.rank)])


def trivial(ctx: RankContext) -> Subgroup:
    return Subgroup(ctx, 1, [])


# -- module-level operations ---------------------------------------------

def contains(H: Subgroup, w: Word) -> bool:
    if w.ctx != H.ctx:
        raise SubgroupError("context mismatch")
    return H.contains_letters(w.letters)


def rewrite(H: Subgroup, w: Word) -> Word:
    """``w`` written over the ordered basis of ``H`` (letters of ``H.basis_ctx``)."""
    return H.to_basis(w)


def index(H: Subgroup) -> Optional[int]:
    """Index in the ambient group, or ``None`` when infinite."""
    return H.index


def basis(H: Subgroup) -> List[Word]:
    return H.basis


def transversal(H: Subgroup) -> List[Word]:
    return H.transversal


def intersect(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.ctx != H2.ctx:
        raise SubgroupError("context mismatch")
    if H1 == H2:
        return H1
    d = H1.ctx.rank
    ids = {(0, 0): 0}
    order = [(0, 0)]
    edges: set = set()
    k = 0
    while k < len(order):
        a, b = order[k]
        src = k
        k += 1
        for i in range(d):
            for o1, o2, fwd in ((H1.out[i], H2.out[i], True), (H1.inn[i], H2.inn[i], False)):
                x, y = o1[a], o2[b]
                if x < 0 or y < 0:
                    continue
                t = ids.get((x, y))
                if t is None:
                    t = ids[(x, y)] = len(order)
                    order.append((x, y))
                edges.add((src, i, t) if fwd else (t, i, src))
    n, core = _core(edges)
    return Subgroup(H1.ctx, n, core)


def rebase(H: Subgroup, v: int) -> Subgroup:
    return Subgroup(H.ctx, H.n, H.edges(), v)


def conjugate(H: Subgroup, w: Word) -> Subgroup:
    """The subgroup ``w H w^-1``."""
    if H.index is not None:
        return rebase(H, H.trace(inverse_letters(w.letters)))
    return subgroup_from_letters(
        H.ctx, [concat(concat(w.letters, b), inverse_letters(w.letters)) for b in H.basis_letters]
    )


def is_normal(H: Subgroup) -> bool:
    return all(conjugate(H, x) == H for x in H.ctx.gens())


def normal_core(H: Subgroup) -> Subgroup:
    if H.index is None:
        raise SubgroupError("normal core of an infinite-index subgroup")
    core = H
    for v in range(1, H.n):
        core = intersect(core, rebase(H, v))
    return core


def is_subgroup(S: Subgroup, H: Subgroup) -> bool:
    """Whether ``S`` is contained in ``H``."""
    return all(H.contains_letters(b) for b in S.basis_letters)


# -- special subgroups ---------------------------------------------------

def _gen_index(ctx: RankContext, x: Union[int, str, Word]) -> int:
    if isinstance(x, int):
        if not 0 <= x < ctx.rank:
            raise SubgroupError(f"generator index {x} out of range")
        return x
    if isinstance(x, Word):
        if len(x.letters) != 1 or x.letters[0] < 0:
            raise SubgroupError("expected a generator")
        return x.letters[0] - 1
    return ctx.index(x)


def cyclic_kernel(ctx: RankContext, t: Sequence[int], m: int) -> Subgroup:
    """Kernel of the map to Z/m sending generator i to ``t[i]``."""
    return from_permutations(ctx, [[(v + t[i]) % m for v in range(m)] for i in range(ctx.rank)])


def fxm(ctx: RankContext, x: Union[int, str, Word], m: int) -> Subgroup:
    """Normal subgroup of index m generated by ``x^m`` and the other generators."""
    if m < 2:
        raise SubgroupError("m must be at least 2")
    i = _gen_index(ctx, x)
    return cyclic_kernel(ctx, [1 if j == i else 0 for j in range(ctx.rank)], m)


def schreier_basis_Y(ctx: RankContext, x: Union[int, str, Word], m: int) -> List[Word]:
    if m < 2:
        raise SubgroupError("m must be at least 2")
    i = _gen_index(ctx, x)
    X = ctx.gen(i)
    out = [X ** m]
    for j in range(ctx.rank):
        if j != i:
            y = ctx.gen(j)
            out.extend(X ** k * y * X ** -k for k in range(m))
    return out


def commutator_basis_Z(ctx: RankContext, x: Union[int, str, Word], m: int) -> List[Word]:
    if m < 2:
        raise SubgroupError("m must be at least 2")
    i = _gen_index(ctx, x)
    X = ctx.gen(i)
    out = [X ** m]
    for j in range(ctx.rank):
        if j != i:
            y = ctx.gen(j)
            out.extend(iterated_commutator(y, X, k) for k in range(m))
    return out


def surjection_vectors(d: int, m: int) -> List[Tuple[int, ...]]:
    """Representatives of surjections F -> Z/m modulo units, lexicographically minimal."""
    from itertools import product
    from math import gcd

    units = [u for u in range(1, m) if gcd(u, m) == 1]
    reps = set()
    for t in product(range(m), repeat=d):
        g = m
        for c in t:
            g = gcd(g, c)
        if g != 1:
            continue
        reps.add(min(tuple((u * c) % m for c in t) for u in units))
    return sorted(reps)


def scq(ctx: RankContext, m: int) -> List[Subgroup]:
    """Normal subgroups with cyclic quotient of order m."""
    if m < 2:
        raise SubgroupError("m must be at least 2")
    return [cyclic_kernel(ctx, t, m) for t in surjection_vectors(ctx.rank, m)]


def index_p_normals(ctx: RankContext, p: int) -> List[Subgroup]:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise SubgroupError(f"{p} is not prime")
    return scq(ctx, p)


def hyperplane_normals(K: Subgroup, S: Subgroup, p: int) -> Iterator[Subgroup]:
    """Index-p normal subgroups of ``K`` containing ``S``, in lexicographic order.

    Each is the kernel of a functional on ``K/Phi(K)`` vanishing on the image of ``S``.
    """
    rows = [K.abelianize_in_basis(b, p) for b in S.basis_letters]
    null = nullspace_mod_p(rows, p, K.rank)
    for t in projective_points(null, p, K.rank):
        yield K.lift(t, p)


# -- p-openness ----------------------------------------------------------

@dataclass(frozen=True)
class PopennessCertificate:
    """Chain ``F = H_0 > H_1 > ... > H_n = H`` of index-p normal steps, or a refusal."""

    p: int
    chain: Optional[Tuple[Subgroup, ...]]
    reason: str = ""

    @property
    def is_p_open(self) -> bool:
        return self.chain is not None

    def __bool__(self) -> bool:
        return self.chain is not None

    def verify(self) -> bool:
        if self.chain is None:
            return True
        for K, N in zip(self.chain, self.chain[1:]):
            if K.index is None or N.index is None or N.index != K.index * self.p:
                return False
            if not is_subgroup(N, K):
                return False
            # normal in K: conjugation by each basis element of K fixes N
            for b in K.basis_letters:
                if conjugate(N, Word._raw(K.ctx, b)) != N:
                    return False
        return True


def _p_exponent(n: int, p: int) -> Optional[int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


@lru_cache(maxsize=20000)
def _descend(K: Subgroup, H: Subgroup, p: int) -> Optional[Tuple[Subgroup, ...]]:
    if K == H:
        return (K,)
    # A p-open H stays p-open inside every index-p normal N >= H (the pro-p
    # topology of such an N is the subspace topology), so the first candidate
    # decides the question and no backtracking is needed.
    for N in hyperplane_normals(K, H, p):
        rest = _descend(N, H, p)
        return None if rest is None else (K,) + rest
    return None


def is_p_open(H: Subgroup, p: int) -> PopennessCertificate:
    if H.index is None:
        raise SubgroupError("p-openness needs a finite-index subgroup")
    if _p_exponent(H.index, p) is None:
        return PopennessCertificate(p, None, f"index {H.index} is not a power of {p}")
    chain = _descend(whole(H.ctx), H, p)
    if chain is None:
        return PopennessCertificate(p, None, "no index-p normal step contains the subgroup")
    return PopennessCertificate(p, chain)


def p_open_subgroups(ctx: RankContext, p: int, n: int) -> List[List[Subgroup]]:
    """All p-open subgroups of index ``p^k`` for ``k <= n``, level by level."""
    levels = [[whole(ctx)]]
    for _ in range(n):
        seen: Dict[Subgroup, None] = {}
        for K in levels[-1]:
            for N in hyperplane_normals(K, trivial(ctx), p):
                seen.setdefault(N)
        levels.append(list(seen))
    return levels


# -- Hall completion -----------------------------------------------------

def hall_completion(H: Subgroup) -> Tuple[Subgroup, List[Word]]:
    """Finite-index ``K`` having ``H`` as a free factor, with an adapted basis.

    Each partial injection is completed on the existing vertices, pairing
    vertices without an outgoing edge with vertices without an incoming edge
    in ascending order.  ``H``'s spanning tree spans the new graph too, so the
    basis of ``K`` read off from it starts with the basis of ``H``.
    """
    if H.rank == 0:
        raise SubgroupError("Hall completion of the trivial subgroup")
    if H.index is not None:
        return H, H.basis
    added = []
    for i in range(H.ctx.rank):
        tails = [v for v in range(H.n) if H.out[i][v] < 0]
        heads = [v for v in range(H.n) if H.inn[i][v] < 0]
        added.extend((u, i, w) for u, w in zip(tails, heads))
    K = Subgroup(H.ctx, H.n, H.edges() + added)
    extra = [
        Word._raw(H.ctx, concat(H.paths[u] + (i + 1,), inverse_letters(H.paths[w])))
        for u, i, w in added
    ]
    return K, H.basis + extra


def free_factor_basis(H: Subgroup, K: Subgroup) -> Optional[List[Word]]:
    """Basis of ``K`` extending the basis of ``H`` when ``H``'s graph embeds in ``K``'s.

    Returns ``None`` when the natural graph map is not injective on vertices
    (then this particular test says nothing about ``H`` being a free factor).
    """
    image = [-1] * H.n
    image[0] = 0
    stack = [0]
    d = H.ctx.rank
    while stack:
        v = stack.pop()
        for i in range(d):
            for ho, ko in ((H.out[i], K.out[i]), (H.inn[i], K.inn[i])):
                w = ho[v]
                if w < 0:
                    continue
                t = ko[image[v]]
                if t < 0:
                    raise SubgroupError("H is not contained in K")
                if image[w] < 0:
                    image[w] = t
                    stack.append(w)
    if len(set(image)) != H.n:
        return None
    # spanning tree of K: H's tree first, then a BFS over the remaining vertices
    pos = {image[v]: H.paths[v] for v in range(H.n)}
    tree = set()
    for v in range(1, H.n):
        last = H.paths[v][-1]
        u = H.trace(H.paths[v][:-1])
        tree.add((image[u], last - 1) if last > 0 else (image[v], -last - 1))
    frontier = list(pos)
    k = 0
    while k < len(frontier):
        v = frontier[k]
        k += 1
        for i in range(d):
            w = K.out[i][v]
            if w >= 0 and w not in pos:
                pos[w] = pos[v] + (i + 1,)
                tree.add((v, i))
                frontier.append(w)
            w = K.inn[i][v]
            if w >= 0 and w not in pos:
                pos[w] = pos[v] + (-(i + 1),)
                tree.add((w, i))
                frontier.append(w)
    h_edges = {(image[u], i) for u, i, _ in H.edges()}
    extra = []
    for i in range(d):
        for v in range(K.n):
            w = K.out[i][v]
            if w < 0 or (v, i) in tree or (v, i) in h_edges:
                continue
            extra.append(Word._raw(K.ctx, concat(pos[v] + (i + 1,), inverse_letters(pos[w]))))
    return H.basis + extra


# -- enumeration -----------------------------------------------------------

def coset_tables(d: int, n: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Every transitive action of the free group of rank d on n points, based at 0.

    Each subgroup of index n appears exactly once: tables are produced in the
    canonical numbering used by :class:`Subgroup`.
    """
    out = [[-1] * n for _ in range(d)]
    inn = [[-1] * n for _ in range(d)]
    slots = 2 * d

    def rec(v: int, s: int, count: int):
        while v < count:
            while s < slots:
                i, back = divmod(s, 2)
                if (inn if back else out)[i][v] == -1:
                    break
                s += 1
            else:
                v += 1
                s = 0
                continue
            break
        if v == count:
            if count == n:
                yield tuple(tuple(r) for r in out)
            return
        i, back = divmod(s, 2)
        here, there = (inn, out) if back else (out, inn)
        top = count + 1 if count < n else count
        for u in range(top):
            if there[i][u] != -1:
                continue
            here[i][v] = u
            there[i][u] = v
            yield from rec(v, s + 1, count + 1 if u == count else count)
            here[i][v] = -1
            there[i][u] = -1

    yield from rec(0, 0, 1)


def subgroups_of_index(ctx: RankContext, n: int) -> Iterator[Subgroup]:
    for table in coset_tables(ctx.rank, n):
        yield from_permutations(ctx, table)

"""Conjugacy in the commensurator and the p-commensurator.

Witnesses are built constructively and always checked: a witness ``c`` for
``source -> target`` satisfies ``c * inner(source) * c^-1 == inner(target)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .comm import (
    PRO_P,
    PROFINITE,
    Commensuration,
    conj_subgroup,
    equivalent,
    from_automorphism,
    identity,
    inner,
    invert,
    multiply,
    power,
)
from .homs import (
    FreeHom,
    compose,
    compose_all,
    det,
    hom_on_basis,
    inversion_aut,
    whitehead_is_primitive,
)
from .outcomes import Impossibility, Refusal, default_bound
from .stallings import (
    Subgroup,
    free_factor_basis,
    fxm,
    hall_completion,
    hyperplane_normals,
    intersect,
    is_p_open,
    schreier_basis_Y,
    subgroup_from_letters,
    whole,
)
from .words import Letters, RankContext, Word, commutator, maximal_root, substitute


class ConjugacyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConjugacyWitness:
    c: Commensuration
    source: Word
    target: Word

    def verify(self) -> bool:
        f, p = self.c.flavor, self.c.p
        lhs = multiply(multiply(self.c, inner(self.source, f, p)), invert(self.c))
        return equivalent(lhs, inner(self.target, f, p))


def _checked(w: ConjugacyWitness) -> ConjugacyWitness:
    if not w.verify():
        raise AssertionError(f"witness for {w.source} -> {w.target} failed verification")
    return w


def dp(w: Word, p: int) -> int:
    """Part of the root exponent of ``w`` prime to ``p``."""
    if not w.letters:
        raise ConjugacyError("d_p of the identity")
    _, m = maximal_root(w)
    while m % p == 0:
        m //= p
    return m


def _p_exponent(m: int, p: int) -> int:
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


# -- automorphisms moving primitive elements -------------------------------------

def _aut_from(ctx: RankContext, images: Sequence[Letters]) -> FreeHom:
    F = whole(ctx)
    return FreeHom(F, F, images, True)


def basis_aut_to(x: Word, k: int = 0, special: bool = True) -> FreeHom:
    """Automorphism of the whole group sending the primitive ``x`` to generator ``k``.

    With ``special`` the result has determinant +1 (needs rank >= 2).
    """
    ctx = x.ctx
    F = whole(ctx)
    ok, seq = whitehead_is_primitive(F, x)
    if not ok:
        raise ConjugacyError(f"{x} is not primitive")
    # F's ordered basis is the generator list, so its basis context has the same letters
    phi = _aut_from(ctx, compose_all(seq, F.basis_ctx).images)
    j = phi.apply_letters(x.letters)[0] - 1
    if j != k:
        imgs = [(i + 1,) for i in range(ctx.rank)]
        imgs[j] = (k + 1,)
        imgs[k] = (-(j + 1),)
        phi = compose(_aut_from(ctx, imgs), phi)
    if special and det(phi) == -1:
        other = 1 if k == 0 else 0
        phi = compose(inversion_aut(ctx, other), phi)
    return phi


def is_primitive(x: Word) -> bool:
    return bool(x.letters) and whitehead_is_primitive(whole(x.ctx), x)[0]


def power_conjugator(x: Word, m: int, flavor: str = PROFINITE, p: Optional[int] = None) -> ConjugacyWitness:
    """Witness conjugating the primitive ``x`` to ``x^m`` through special automorphisms.

    ``x`` is moved to ``x1``; ``x1 -> x2`` inside SAut(F); then ``x2 -> x1^m``
    inside SAut(F(X, x1, m)), where ``{x1^m, x2}`` extends to a basis.
    """
    ctx = x.ctx
    if ctx.rank < 2:
        raise ConjugacyError("needs rank at least 2")
    if m < 2:
        raise ConjugacyError("m must be at least 2")
    if not is_primitive(x):
        raise ConjugacyError(f"{x} is not primitive")
    beta = basis_aut_to(x, 0)
    theta_imgs = [(i + 1,) for i in range(ctx.rank)]
    theta_imgs[0], theta_imgs[1] = (2,), (-1,)
    theta = _aut_from(ctx, theta_imgs)
    H = fxm(ctx, 0, m)
    Y = schreier_basis_Y(ctx, 0, m)  # [x1^m, x2, x1 x2 x1^-1, ...]
    sig = list(Y)
    sig[0], sig[1] = Y[1] ** -1, Y[0]
    sigma = hom_on_basis(H, H, Y, sig)
    c = multiply(from_automorphism(sigma, flavor, p), from_automorphism(theta, flavor, p))
    b = from_automorphism(beta, flavor, p)
    c = multiply(invert(b), multiply(c, b))
    return _checked(ConjugacyWitness(c, x, x ** m))


# -- transport between a subgroup and its basis context -----------------------

def transport_commensuration(c: Commensuration, U: Subgroup, flavor: str, p: Optional[int]) -> Commensuration:
    """Push a commensuration of the free group on ``U.basis_ctx`` into ``U``."""
    f = c.map
    ctx = U.ctx
    A = subgroup_from_letters(ctx, [U.embed_letters(b) for b in f.domain.basis_letters])
    B = subgroup_from_letters(ctx, [U.embed_letters(b) for b in f.codomain.basis_letters])
    basis = [Word._raw(ctx, U.embed_letters(b)) for b in f.domain.basis_letters]
    imgs = [Word._raw(ctx, U.embed_letters(x)) for x in f.images]
    return Commensuration(hom_on_basis(A, B, basis, imgs), flavor, p)


def commp_primitive_realization(v: Word, p: int, search_bound: Optional[int] = None):
    """p-open ``U`` in which ``v`` is primitive, with the reducing sequence, or a refusal.

    Breadth-first over chains of index-p normal steps that keep ``v``.
    """
    if search_bound is None:
        search_bound = default_bound()
    root, k = maximal_root(v)
    if k != 1:
        raise ConjugacyError(f"{v} is a proper power")
    return _realize(v, p, search_bound)


@lru_cache(maxsize=4096)
def _realize(v: Word, p: int, bound: int):
    ctx = v.ctx
    level = [whole(ctx)]
    cyc = subgroup_from_letters(ctx, [v.letters])
    for depth in range(bound + 1):
        for U in level:
            ok, seq = whitehead_is_primitive(U, v)
            if ok:
                return U, seq
        if depth == bound:
            break
        nxt: dict = {}
        for U in level:
            for N in hyperplane_normals(U, cyc, p):
                nxt.setdefault(N)
        level = list(nxt)
    return Refusal(f"no {p}-open subgroup of index <= {p}^{bound} has {v} primitive")


def bs_witness(w: Word, p: int, search_bound: Optional[int] = None):
    """Witness ``c`` with ``c w c^-1 = w^p`` in the p-commensurator, or a refusal."""
    if not w.letters:
        raise ConjugacyError("trivial word")
    v, _ = maximal_root(w)
    found = commp_primitive_realization(v, p, search_bound)
    if isinstance(found, Refusal):
        return found
    U, _ = found
    if U.index == 1:
        c = power_conjugator(v, p, PRO_P, p).c
    else:
        inner_w = power_conjugator(U.to_basis(v), p, PRO_P, p)
        c = transport_commensuration(inner_w.c, U, PRO_P, p)
    return _checked(ConjugacyWitness(c, w, w ** p))


# -- one orbit in Comm(F) ---------------------------------------------------------

def _candidates(ctx: RankContext) -> List[Word]:
    gens = ctx.gens()
    out = list(gens)
    for i in range(ctx.rank):
        for j in range(i + 1, ctx.rank):
            out.append(gens[j] * gens[i])
    return out


@lru_cache(maxsize=4096)
def _comm_normalizer(y: Word) -> Commensuration:
    """Commensuration sending ``y`` to the first generator."""
    ctx = y.ctx
    for x in _candidates(ctx):
        if commutator(x, y).letters:
            break
    else:
        raise AssertionError(f"every candidate commutes with {y}")
    C = subgroup_from_letters(ctx, [x.letters, y.letters])
    if C.rank != 2:
        raise AssertionError("<x, y> should be free of rank 2")
    K, ext = hall_completion(C)
    basis = [x, y] + ext[2:]
    swapped = [y, x] + ext[2:]
    phi_y = hom_on_basis(K, K, swapped, basis)  # y -> x and x -> y
    beta = basis_aut_to(x, 0, special=False)
    return multiply(from_automorphism(beta), from_automorphism(phi_y))


def comm_conjugator(g: Word, h: Word) -> ConjugacyWitness:
    """Witness that ``g`` and ``h`` are conjugate in Comm(F)."""
    if not g.letters or not h.letters:
        raise ConjugacyError("trivial word")
    if g.ctx.rank < 2:
        raise ConjugacyError("needs rank at least 2")
    c = multiply(invert(_comm_normalizer(h)), _comm_normalizer(g))
    return _checked(ConjugacyWitness(c, g, h))


# -- Comm_p(F) --------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _commp_normalizer(y: Word, p: int, bound: int):
    """Pro-p commensuration sending ``y`` to ``b^d`` with ``d = dp(y)``."""
    ctx = y.ctx
    v, m = maximal_root(y)
    e = _p_exponent(m, p)
    found = _realize(v, p, bound)
    if isinstance(found, Refusal):
        return found
    U, seq = found
    n = _p_exponent(U.index, p)
    phi = compose_all(seq, U.basis_ctx)
    k = phi.apply_letters(U.rewrite_letters(v.letters))[0] - 1
    if n == 0:
        Y = ctx.gens()
    else:
        Y = schreier_basis_Y(ctx, 0, p ** n)
    target = ctx.gen(1)
    rest = [w for w in Y if w != target]
    table: List[Letters] = []
    for j in range(U.rank):
        table.append(target.letters if j == k else rest.pop(0).letters)
    V = whole(ctx) if n == 0 else fxm(ctx, 0, p ** n)
    f = FreeHom(U, V, [substitute(x, table) for x in phi.images], True)
    c = Commensuration(f, PRO_P, p)
    if e:
        P = power_conjugator(target, p, PRO_P, p).c
        c = multiply(power(invert(P), e), c)
    return c


def commp_conjugator(g: Word, h: Word, p: int, search_bound: Optional[int] = None):
    """Witness in Comm_p(F), an :class:`Impossibility` when d_p differs, or a refusal."""
    if not g.letters or not h.letters:
        raise ConjugacyError("trivial word")
    dg, dh = dp(g, p), dp(h, p)
    if dg != dh:
        return Impossibility("d_p differs", {"dp_source": dg, "dp_target": dh, "p": p})
    bound = default_bound() if search_bound is None else search_bound
    cg = _commp_normalizer(g, p, bound)
    if isinstance(cg, Refusal):
        return cg
    ch = _commp_normalizer(h, p, bound)
    if isinstance(ch, Refusal):
        return ch
    return _checked(ConjugacyWitness(multiply(invert(ch), cg), g, h))


def conjugate(g: Word, h: Word, flavor: str = "comm", p: Optional[int] = None, search_bound: Optional[int] = None):
    if flavor in ("comm", PROFINITE):
        return comm_conjugator(g, h)
    if flavor in ("commp", PRO_P):
        if p is None:
            raise ConjugacyError("commp flavor needs p")
        return commp_conjugator(g, h, p, search_bound)
    raise ConjugacyError(f"unknown flavor {flavor!r}")


# -- subgroups ----------------------------------------------------------------

def _is_open(H: Subgroup, flavor: str, p: Optional[int]) -> bool:
    if H.index is None:
        return False
    return flavor == PROFINITE or bool(is_p_open(H, p))


def _p_completion(H: Subgroup, p: int, bound: int) -> Optional[Tuple[Subgroup, List[Word]]]:
    ctx = H.ctx
    level = [whole(ctx)]
    for depth in range(bound + 1):
        for K in level:
            ext = free_factor_basis(H, K)
            if ext is not None:
                return K, ext
        if depth == bound:
            break
        nxt: dict = {}
        for K in level:
            for N in hyperplane_normals(K, H, p):
                nxt.setdefault(N)
        level = list(nxt)
    return None


def _equalized(K: Subgroup, ext: List[Word], k: int, m: int) -> Tuple[Subgroup, List[Word]]:
    """Kernel of ``K -> Z/m`` killing the first ``k`` basis words, basis starting with them."""
    if m == 1:
        return K, ext
    c = ext[k]
    words = list(ext[:k])
    for y in ext[:k]:
        words.extend(c ** j * y * c ** -j for j in range(1, m))
    for y in ext[k + 1:]:
        words.extend(c ** j * y * c ** -j for j in range(m))
    words.append(c ** m)
    L = subgroup_from_letters(K.ctx, [w.letters for w in words])
    return L, words


def subgroup_conjugator(
    H1: Subgroup,
    H2: Subgroup,
    flavor: str = PROFINITE,
    p: Optional[int] = None,
    search_bound: Optional[int] = None,
):
    """Commensuration carrying ``H1`` onto ``H2``, an impossibility, or a refusal."""
    if flavor not in (PROFINITE, PRO_P):
        raise ConjugacyError(f"unknown flavor {flavor!r}")
    if flavor == PRO_P and p is None:
        raise ConjugacyError("pro-p flavor needs p")
    ctx = H1.ctx
    if H1.rank != H2.rank:
        return Impossibility("ranks differ", {"rank1": H1.rank, "rank2": H2.rank})
    o1, o2 = _is_open(H1, flavor, p), _is_open(H2, flavor, p)
    if o1 != o2:
        return Impossibility("exactly one subgroup is open", {"open1": o1, "open2": o2})
    if H1 == H2:
        return identity(ctx, flavor, p)
    if o1:
        return Commensuration(FreeHom(H1, H2, H2.basis_letters, True), flavor, p)
    if H1.rank == 0:
        return identity(ctx, flavor, p)
    bound = default_bound() if search_bound is None else search_bound
    pieces = []
    for H in (H1, H2):
        if flavor == PROFINITE:
            pieces.append(hall_completion(H))
        else:
            found = _p_completion(H, p, bound)
            if found is None:
                return Refusal(f"no {p}-open subgroup of index <= {p}^{bound} has the subgroup as a visible free factor")
            pieces.append(found)
    (K1, e1), (K2, e2) = pieces
    J = intersect(K1, K2)
    k = H1.rank
    L1, b1 = _equalized(K1, e1, k, J.index // K1.index)
    L2, b2 = _equalized(K2, e2, k, J.index // K2.index)
    f = hom_on_basis(L1, L2, b1, b2)
    c = Commensuration(f, flavor, p)
    if conj_subgroup(c, H1) != H2:
        raise AssertionError("subgroup conjugator failed verification")
    return c

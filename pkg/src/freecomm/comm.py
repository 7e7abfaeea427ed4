"""Commensurations: classes of isomorphisms between finite-index subgroups.

Two representatives are equal when they agree on the intersection of their
domains; nothing here relies on a normal form.  ``multiply(c2, c1)`` means
"apply ``c1`` first".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .homs import (
    FreeHom,
    compose,
    det,
    hom_on_basis,
    inner_aut,
    inversion_aut,
    restrict,
)
from .stallings import (
    Subgroup,
    fxm,
    hyperplane_normals,
    intersect,
    is_normal,
    is_p_open,
    subgroup_from_letters,
    whole,
)
from .words import Letters, RankContext, Word, concat

PROFINITE = "profinite"
PRO_P = "pro-p"


class CommError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Commensuration:
    """Representative isomorphism ``map: U -> V`` together with its flavor."""

    map: FreeHom
    flavor: str = PROFINITE
    p: Optional[int] = None

    @property
    def U(self) -> Subgroup:
        return self.map.domain

    @property
    def V(self) -> Subgroup:
        return self.map.codomain

    @property
    def ctx(self) -> RankContext:
        return self.map.ctx

    def __call__(self, w: Word) -> Word:
        return Word._raw(self.ctx, self.map.apply_letters(w.letters))

    def __mul__(self, other: "Commensuration") -> "Commensuration":
        return multiply(self, other)

    def __invert__(self) -> "Commensuration":
        return invert(self)


def commensuration(f: FreeHom, flavor: str = PROFINITE, p: Optional[int] = None, check: bool = True) -> Commensuration:
    if flavor not in (PROFINITE, PRO_P):
        raise CommError(f"unknown flavor {flavor!r}")
    if flavor == PRO_P and p is None:
        raise CommError("pro-p flavor needs p")
    if check:
        if not f.iso:
            raise CommError("representative must be an isomorphism")
        if f.domain.index is None or f.codomain.index is None:
            raise CommError("domain and codomain must have finite index")
        if flavor == PRO_P:
            for H in (f.domain, f.codomain):
                if not is_p_open(H, p):
                    raise CommError(f"{H!r} is not {p}-open")
    return Commensuration(f, flavor, p if flavor == PRO_P else None)


def _meet(c1: Commensuration, c2: Commensuration) -> Tuple[str, Optional[int]]:
    if c1.ctx != c2.ctx:
        raise CommError("commensurations of different groups")
    if c1.flavor == c2.flavor == PRO_P and c1.p == c2.p:
        return PRO_P, c1.p
    return PROFINITE, None


def from_automorphism(f: FreeHom, flavor: str = PROFINITE, p: Optional[int] = None) -> Commensuration:
    return commensuration(f, flavor, p, check=False)


def identity(ctx: RankContext, flavor: str = PROFINITE, p: Optional[int] = None) -> Commensuration:
    return inner(ctx.identity(), flavor, p)


def inner(g: Word, flavor: str = PROFINITE, p: Optional[int] = None) -> Commensuration:
    """Conjugation ``x -> g x g^-1`` on the whole group."""
    return commensuration(inner_aut(g.ctx, g.letters), flavor, p, check=False)


def equivalent(c1: Commensuration, c2: Commensuration) -> bool:
    _meet(c1, c2)
    W = intersect(c1.U, c2.U)
    f1, f2 = c1.map, c2.map
    return all(f1.apply_letters(b) == f2.apply_letters(b) for b in W.basis_letters)


def multiply(c2: Commensuration, c1: Commensuration) -> Commensuration:
    """The class of ``c2 o c1`` defined on ``c1^-1(V1 & U2)``."""
    flavor, p = _meet(c1, c2)
    f1, f2 = c1.map, c2.map
    if f1.codomain == f2.domain:
        D = f1.domain
        imgs = [f2.apply_letters(x) for x in f1.images]
        return Commensuration(FreeHom(D, f2.codomain, imgs, True), flavor, p)
    W = intersect(f1.codomain, f2.domain)
    f1i = f1.inverse
    D = subgroup_from_letters(c1.ctx, [f1i.apply_letters(b) for b in W.basis_letters])
    imgs = [f2.apply_letters(f1.apply_letters(b)) for b in D.basis_letters]
    V = subgroup_from_letters(c1.ctx, imgs)
    return Commensuration(FreeHom(D, V, imgs, True), flavor, p)


def invert(c: Commensuration) -> Commensuration:
    return Commensuration(c.map.inverse, c.flavor, c.p)


def power(c: Commensuration, k: int) -> Commensuration:
    acc = identity(c.ctx, c.flavor, c.p)
    base = c if k >= 0 else invert(c)
    for _ in range(abs(k)):
        acc = multiply(base, acc)
    return acc


def product(cs: Sequence[Commensuration]) -> Commensuration:
    """``cs[0] * cs[1] * ...``; the last factor acts first."""
    acc = cs[-1]
    for c in reversed(cs[:-1]):
        acc = multiply(c, acc)
    return acc


def conj_subgroup(c: Commensuration, H: Subgroup) -> Subgroup:
    """Image under ``c`` of ``H & U``."""
    S = H if H == c.U else intersect(H, c.U)
    return subgroup_from_letters(c.ctx, [c.map.apply_letters(b) for b in S.basis_letters])


def restrict_to(c: Commensuration, S: Subgroup) -> Commensuration:
    """Equivalent representative with the smaller domain ``S``."""
    return Commensuration(restrict(c.map, S), c.flavor, c.p)


# -- SCQ transitivity -----------------------------------------------------------

def cyclic_quotient_vector(H: Subgroup) -> Tuple[Tuple[int, ...], int]:
    """Surjection vector ``t`` with ``H = ker(x_i -> t_i mod m)``."""
    m = H.index
    if m is None or not is_normal(H):
        raise CommError("not a normal subgroup of finite index")
    for g in H.paths:
        order, v = 0, 0
        while True:
            v = H.trace(g, v)
            order += 1
            if v == 0:
                break
        if order == m:
            break
    else:
        raise CommError("quotient is not cyclic")
    label = {}
    v = 0
    for k in range(m):
        label[v] = k
        v = H.trace(g, v)
    return tuple(label[H.out[i][0]] for i in range(H.ctx.rank)), m


def _nielsen_power(d: int, i: int, j: int, q: int) -> List[Letters]:
    imgs = [(k + 1,) for k in range(d)]
    imgs[i] = concat((i + 1,), ((j + 1) if q > 0 else -(j + 1),) * abs(q))
    return imgs


def _reduce_vector(t: Sequence[int], m: int) -> List[FreeHom]:
    """Nielsen moves ``a_1, ..., a_k`` with ``t o a_1 o ... o a_k = (g, 0, ..., 0)``."""
    t = [x % m for x in t]
    d = len(t)
    moves: List[Tuple[int, int, int]] = []
    while sum(1 for x in t if x) > 1:
        nz = [k for k in range(d) if t[k]]
        i = max(nz, key=lambda k: (t[k], k))
        j = min((k for k in nz if k != i), key=lambda k: (t[k], k))
        q = t[i] // t[j]
        t[i] -= q * t[j]
        moves.append((i, j, -q))
    k = next(k for k in range(d) if t[k])
    if k != 0:
        t[0] += t[k]
        moves.append((0, k, 1))
        t[k] -= t[0]
        moves.append((k, 0, -1))
    return moves


def _moves_to_aut(ctx: RankContext, moves) -> FreeHom:
    F = whole(ctx)
    acc = FreeHom(F, F, F.basis_letters, True)
    for i, j, q in moves:
        acc = compose(acc, FreeHom(F, F, _nielsen_power(ctx.rank, i, j, q), True))
    return acc


def scq_transitivity(H1: Subgroup, H2: Subgroup, saut: bool = True) -> Tuple[FreeHom, bool]:
    """Automorphism ``phi`` of the ambient group with ``phi(H1) = H2``.

    Both subgroups are reduced to ``F(X, x_1, m)`` by Nielsen moves acting on
    their surjection vectors; the result is their quotient ``a2 o a1^-1``.
    Returns the automorphism and whether it lies in SAut.
    """
    t1, m1 = cyclic_quotient_vector(H1)
    t2, m2 = cyclic_quotient_vector(H2)
    if m1 != m2:
        raise CommError("subgroups have different index")
    ctx = H1.ctx
    a1 = _moves_to_aut(ctx, _reduce_vector(t1, m1))
    a2 = _moves_to_aut(ctx, _reduce_vector(t2, m2))
    phi = compose(a2, a1.inverse)
    if det(phi) == -1 and saut:
        # the inversion of x1 fixes F(X, x1, m), so it can be slipped in between
        phi = compose(a2, compose(inversion_aut(ctx, 0), a1.inverse))
    image = subgroup_from_letters(ctx, [phi.apply_letters(b) for b in H1.basis_letters])
    if image != H2:
        raise AssertionError("SCQ transport failed")
    return phi, det(phi) == 1


# -- decomposition into automorphisms ----------------------------------------

@dataclass(frozen=True, eq=False)
class DecompositionCertificate:
    """``[f] = [f_n] ... [f_1][f_0]`` with ``f_i`` an automorphism of ``chain[i]``."""

    p: int
    chain: Tuple[Subgroup, ...]
    factors: Tuple[FreeHom, ...]
    saut: bool

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def dets(self) -> List[int]:
        return [det(f) for f in self.factors]

    def composite(self) -> Commensuration:
        acc = from_automorphism(self.factors[0], PRO_P, self.p)
        for f in self.factors[1:]:
            acc = multiply(from_automorphism(f, PRO_P, self.p), acc)
        return acc

    def check(self, c: Optional[Commensuration] = None) -> bool:
        for K, N in zip(self.chain, self.chain[1:]):
            if N.index != K.index * self.p:
                return False
        for K, f in zip(self.chain, self.factors):
            if f.domain != K or f.codomain != K:
                return False
        if self.saut and any(x != 1 for x in self.dets()[1:]):
            return False
        return c is None or equivalent(self.composite(), c)


def _p_log(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise CommError(f"index is not a power of {p}")
    return k


def stabilizer_flip(N: Subgroup, p: int) -> FreeHom:
    """Automorphism of the ambient group preserving ``N`` with ``det`` on ``N`` equal to -1."""
    ctx = N.ctx
    base = fxm(ctx, 0, p)
    psi, _ = scq_transitivity(base, N, saut=False)
    imgs = [(k + 1,) for k in range(ctx.rank)]
    # odd p: invert x2; p = 2: conjugate x2 by x1 (an m-cycle on the Schreier basis)
    imgs[1] = (-2,) if p % 2 else (1, 2, -1)
    F = whole(ctx)
    alpha = compose(psi, compose(FreeHom(F, F, imgs, True), psi.inverse))
    if det(restrict(alpha, N)) != -1:
        raise AssertionError("flip does not reverse orientation on N")
    return alpha


def _decompose(f: FreeHom, p: int, saut: bool) -> Tuple[List[Subgroup], List[FreeHom]]:
    U, V = f.domain, f.codomain
    ctx = U.ctx
    F = whole(ctx)
    if _p_log(U.index, p) == 0:
        return [F], [f]
    M = next(hyperplane_normals(F, U, p), None)
    N = next(hyperplane_normals(F, V, p), None)
    if M is None or N is None:
        raise CommError("domain or codomain is not p-open")
    f0, _ = scq_transitivity(M, N, saut=False)
    f0i = f0.inverse
    U1 = subgroup_from_letters(ctx, [f0.apply_letters(b) for b in U.basis_letters])
    nctx = N.basis_ctx
    U1n = subgroup_from_letters(nctx, [N.rewrite_letters(b) for b in U1.basis_letters])
    Vn = subgroup_from_letters(nctx, [N.rewrite_letters(b) for b in V.basis_letters])
    imgs = [
        N.rewrite_letters(f.apply_letters(f0i.apply_letters(N.embed_letters(b))))
        for b in U1n.basis_letters
    ]
    chain, factors = _decompose(FreeHom(U1n, Vn, imgs, True), p, saut)
    if saut and det(factors[0]) == -1:
        alpha = stabilizer_flip(N, p)
        Fn = whole(nctx)
        a_n = FreeHom(Fn, Fn, [N.rewrite_letters(alpha.apply_letters(N.embed_letters(b))) for b in Fn.basis_letters], True)
        factors[0] = compose(factors[0], a_n)
        f0 = compose(alpha.inverse, f0)
    out_chain: List[Subgroup] = [F]
    out_factors: List[FreeHom] = [f0]
    for K, g in zip(chain, factors):
        Kb = [Word._raw(ctx, N.embed_letters(b)) for b in K.basis_letters]
        Ka = subgroup_from_letters(ctx, [w.letters for w in Kb])
        gi = [Word._raw(ctx, N.embed_letters(x)) for x in g.images]
        out_chain.append(Ka)
        out_factors.append(hom_on_basis(Ka, Ka, Kb, gi))
    return out_chain, out_factors


def decompose_p(c: Commensuration, p: int, saut_variant: bool = False) -> DecompositionCertificate:
    """Factor a pro-p commensuration into automorphisms along a subnormal chain."""
    f = c.map
    if f.domain.index is None or f.domain.index != f.codomain.index:
        raise CommError("domain and codomain must have the same finite index")
    _p_log(f.domain.index, p)
    for H in (f.domain, f.codomain):
        if not is_p_open(H, p):
            raise CommError(f"{H!r} is not {p}-open")
    chain, factors = _decompose(f, p, saut_variant)
    cert = DecompositionCertificate(p, tuple(chain), tuple(factors), saut_variant)
    if not cert.check(c):
        raise AssertionError("decomposition does not recompose to the input")
    return cert

"""Generator families for S_m, A_m and the p-open truncations, determinant checks
for restricted automorphisms, and the exact 2x2 matrix identities behind the
embedding of PSL_2(Z[1/m])."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .comm import PRO_P, PROFINITE, Commensuration
from .homs import (
    Expresser,
    FreeHom,
    compose,
    det,
    equal_maps,
    invert,
    inversion_aut,
    nielsen,
    perm_aut,
    restrict,
    transport,
    _aut,
)
from .linalg import det_bareiss
from .reports import Report
from .stallings import Subgroup, fxm, p_open_subgroups, scq
from .words import RankContext, Word, abelianize_letters

MAX_SPN_INDEX = 8


class FamilyError(ValueError):
    pass


@dataclass
class GeneratorFamily:
    label: str
    members: List[Commensuration] = field(default_factory=list)
    tags: List[str] = field(default_factory=list)
    saut: bool = True

    def add(self, c: Commensuration, tag: str) -> None:
        self.members.append(c)
        self.tags.append(tag)

    def __len__(self) -> int:
        return len(self.members)


def _nielsen_members(fam: GeneratorFamily, H: Subgroup, flavor: str, p: Optional[int], tag: str) -> None:
    bctx = H.basis_ctx
    r = H.rank
    for side in ("right", "left"):
        for i in range(r):
            for j in range(r):
                if i != j:
                    f = transport(H, nielsen(bctx, i, j, side))
                    fam.add(Commensuration(f, flavor, p), f"{tag}:{side[0].upper()}{i}{j}")


def _extra_aut_members(fam: GeneratorFamily, H: Subgroup, flavor: str, p: Optional[int], tag: str) -> None:
    bctx = H.basis_ctx
    fam.add(Commensuration(transport(H, inversion_aut(bctx, 0)), flavor, p), f"{tag}:inv0")
    if H.rank >= 2:
        perm = list(range(H.rank))
        perm[0], perm[1] = 1, 0
        fam.add(Commensuration(transport(H, perm_aut(bctx, perm)), flavor, p), f"{tag}:swap01")


def sm_generators(ctx: RankContext, m: int) -> GeneratorFamily:
    """Nielsen generators of SAut(H) for every H in SCQ(F, m)."""
    if m < 2:
        raise FamilyError("m must be at least 2")
    fam = GeneratorFamily(f"S_{m}(F)")
    for k, H in enumerate(scq(ctx, m)):
        _nielsen_members(fam, H, PROFINITE, None, f"SCQ[{k}]")
    return fam


def am_generators(ctx: RankContext, m: int) -> GeneratorFamily:
    """As :func:`sm_generators` plus an inversion and a transposition per H."""
    if m < 2:
        raise FamilyError("m must be at least 2")
    fam = GeneratorFamily(f"A_{m}(F)", saut=False)
    for k, H in enumerate(scq(ctx, m)):
        _nielsen_members(fam, H, PROFINITE, None, f"SCQ[{k}]")
        _extra_aut_members(fam, H, PROFINITE, None, f"SCQ[{k}]")
    return fam


def spn_generators(ctx: RankContext, p: int, n: int) -> GeneratorFamily:
    """Nielsen generators of SAut(U) for every p-open U of index at most p^n."""
    if n < 1:
        raise FamilyError("n must be at least 1")
    if p ** n > MAX_SPN_INDEX:
        raise FamilyError(f"p^n = {p ** n} exceeds the enumeration limit {MAX_SPN_INDEX}")
    fam = GeneratorFamily(f"S_{{{p},{n}}}(F)")
    for level, subs in enumerate(p_open_subgroups(ctx, p, n)):
        for k, U in enumerate(subs):
            _nielsen_members(fam, U, PRO_P, p, f"U[{level}.{k}]")
    return fam


# -- determinants of restrictions ---------------------------------------------

def matrix_in_basis(f: FreeHom, basis: Sequence[Word]) -> List[List[int]]:
    """Abelianized matrix of an automorphism of ``f.domain`` in the given basis."""
    ex = Expresser([b.letters for b in basis])
    r = len(basis)
    cols = []
    for b in basis:
        e = ex.express(f.apply_letters(b.letters))
        if e is None:
            raise FamilyError(f"image of {b} is outside the subgroup")
        cols.append(abelianize_letters(e, r))
    return [[cols[j][i] for j in range(r)] for i in range(r)]


def det_lemma_suite(ctx: RankContext, m: int) -> Report:
    """Determinants of three automorphisms restricted to F(X, x1, m).

    alpha inverts x2, gamma conjugates x2 by x1, beta inverts x1.
    """
    d = ctx.rank
    if m < 2:
        raise FamilyError("m must be at least 2")
    if d < 2:
        raise FamilyError("rank must be at least 2")
    H = fxm(ctx, 0, m)
    rep = Report("det-lemma", {"d": d, "m": m})
    alpha = inversion_aut(ctx, 1)
    gamma_imgs = [(k + 1,) for k in range(d)]
    gamma_imgs[1] = (1, 2, -1)
    gamma = _aut(ctx, gamma_imgs)
    beta = inversion_aut(ctx, 0)
    for name, h in (("alpha", alpha), ("gamma", gamma), ("beta", beta)):
        rh = restrict(h, H)
        rep.add(f"{name} preserves H", True, rh.codomain == H)
    rep.add("det(alpha)", -1, det(alpha))
    rep.add("det(alpha|H)", (-1) ** m, det(restrict(alpha, H)))
    if m % 2 == 0:
        rep.add("det(gamma|H)", -1, det(restrict(gamma, H)))
    rep.add("det(beta)", -1, det(beta))
    if m % 2 == 1:
        expected = (-1) ** ((d - 1) * (m - 1) // 2 + 1)
        rep.add("det(beta|H)", expected, det(restrict(beta, H)))
    rep.data["saut_of_aut"] = m == 2 or (m % 4 == 3 and d % 2 == 0)
    return rep


def _is_commuting_elementary_product(M: List[List[int]], count: int) -> bool:
    r = len(M)
    off = [(i, j, M[i][j]) for i in range(r) for j in range(r) if i != j and M[i][j] != 0]
    if any(M[i][i] != 1 for i in range(r)) or len(off) != count:
        return False
    rows = {i for i, _, _ in off}
    cols = {j for _, j, _ in off}
    return all(v == 1 for _, _, v in off) and len(rows) == count and not rows & cols


def _is_unipotent(M: List[List[int]]) -> bool:
    r = len(M)
    N = [[M[i][j] - (i == j) for j in range(r)] for i in range(r)]
    P = [row[:] for row in N]
    for _ in range(r - 1):
        P = [[sum(P[i][k] * N[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
    return all(v == 0 for row in P for v in row)


def r12_restriction_check(ctx: RankContext, m: int) -> Report:
    """``R12: x1 -> x1 x2`` restricted to an invariant member of SCQ(F, m) lies in SAut."""
    d = ctx.rank
    if m < 2:
        raise FamilyError("m must be at least 2")
    if d < 2:
        raise FamilyError("rank must be at least 2")
    rep = Report("r12", {"d": d, "m": m})
    R = nielsen(ctx, 0, 1, "right")
    if d >= 3:
        x = ctx.gen(d - 1)
        H = fxm(ctx, d - 1, m)
        Y = [x ** m] + [x ** j * ctx.gen(i) * x ** -j for i in range(d - 1) for j in range(m)]
    else:
        x = ctx.gen(0)
        H = fxm(ctx, 0, m)
        Y = [x ** m] + [x ** j * ctx.gen(1) * x ** -j for j in range(m)]
    rh = restrict(R, H)
    rep.add("H is R12-invariant", True, rh.codomain == H)
    rep.add("det(R12|H)", 1, det(rh))
    M = matrix_in_basis(rh, Y)
    rep.add("det in Y basis", 1, det_bareiss(M))
    if d >= 3:
        ok = True
        for j in range(m):
            z1 = x ** j * ctx.gen(0) * x ** -j
            z2 = x ** j * ctx.gen(1) * x ** -j
            ok &= R(z1) == z1 * z2
        rep.add("R12(x^j x1 x^-j) = (x^j x1 x^-j)(x^j x2 x^-j)", True, ok)
        rep.add("product of m commuting elementary matrices", True, _is_commuting_elementary_product(M, m))
    else:
        z = Y[1:]
        rhs = ctx.identity()
        for i in range(1, m):
            rhs = rhs * z[i]
        rhs = rhs * x ** m * z[0]
        rep.add("R12(x1^m) = z1 ... z_{m-1} x1^m z0", True, R(x ** m) == rhs)
        ab = True
        for i in range(m):
            col = [M[r][i + 1] for r in range(len(Y))]
            ab &= col == [1 if r == i + 1 else 0 for r in range(len(Y))]
        rep.add("R12(z_i) = z_i mod [H,H]", True, ab)
        rep.add("matrix unipotent", True, _is_unipotent(M))
    rep.data["matrix"] = M
    return rep


def nielsen_commutator_identities(ctx: RankContext) -> Report:
    """``R_ij = [R_mj, R_im]`` and ``L_ij = [L_mj, L_im]`` for distinct i, j, m.

    Automorphisms compose as functions and the commutator of automorphisms is
    ``[f, g] = f^-1 g^-1 f g``; with ``f g f^-1 g^-1`` the identities fail.
    """
    d = ctx.rank
    if d < 3:
        raise FamilyError("needs rank at least 3")
    rep = Report("nielsen-commutators", {"d": d})
    for side, name in (("right", "R"), ("left", "L")):
        for i in range(d):
            for j in range(d):
                for m in range(d):
                    if len({i, j, m}) < 3:
                        continue
                    f, g = nielsen(ctx, m, j, side), nielsen(ctx, i, m, side)
                    bracket = compose(invert(f), compose(invert(g), compose(f, g)))
                    rep.add(f"{name}{i + 1}{j + 1} = [{name}{m + 1}{j + 1}, {name}{i + 1}{m + 1}]", True,
                            equal_maps(nielsen(ctx, i, j, side), bracket))
    return rep


# -- exact 2x2 arithmetic -------------------------------------------------------

@dataclass(frozen=True)
class Rat2x2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, a, b, c, d) -> "Rat2x2":
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    def __mul__(self, o: "Rat2x2") -> "Rat2x2":
        return Rat2x2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Rat2x2":
        D = self.det()
        if D == 0:
            raise ZeroDivisionError("singular matrix")
        return Rat2x2(self.d / D, -self.b / D, -self.c / D, self.a / D)

    def __pow__(self, k: int) -> "Rat2x2":
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out * base
        return out

    def conj(self, x: "Rat2x2") -> "Rat2x2":
        return self * x * self.inverse()

    def proj_eq(self, o: "Rat2x2") -> bool:
        return self == o or self == Rat2x2(-o.a, -o.b, -o.c, -o.d)

    def entries(self) -> List[str]:
        return [str(v) for v in (self.a, self.b, self.c, self.d)]


IDENTITY = Rat2x2.of(1, 0, 0, 1)


def E12(t) -> Rat2x2:
    return Rat2x2.of(1, t, 0, 1)


def E21(t) -> Rat2x2:
    return Rat2x2.of(1, 0, t, 1)


def delta(m: int) -> Rat2x2:
    """sqrt(m) times delta_m; conjugation by it agrees with conjugation by delta_m."""
    return Rat2x2.of(0, -1, m, 0)


def in_pattern(x: Rat2x2, m: int, l: int) -> bool:
    """Membership in the congruence pattern a, d = 1 mod l, l | b, ml | c, up to sign."""
    def ok(y: Rat2x2) -> bool:
        if any(v.denominator != 1 for v in (y.a, y.b, y.c, y.d)) or y.det() != 1:
            return False
        return (y.a - 1) % l == 0 and (y.d - 1) % l == 0 and y.b % l == 0 and y.c % (m * l) == 0

    return ok(x) or ok(Rat2x2(-x.a, -x.b, -x.c, -x.d))


def _prime_divisors(m: int) -> List[int]:
    out, q = [], 2
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


def d_identities(rep: Report, p: int, kmax: int) -> None:
    D = E12(Fraction(1, p)) * E21(-p) * E12(Fraction(1, p)) * Rat2x2.of(0, -1, 1, 0)
    rep.add(f"p={p}: D = diag(1/p, p)", True, D == Rat2x2.of(Fraction(1, p), 0, 0, p))
    for k in range(1, kmax + 1):
        rep.add(f"p={p} k={k}: E12(p^2k) = D^-k E12(1) D^k", True, E12(p ** (2 * k)) == D ** -k * E12(1) * D ** k)
        rep.add(f"p={p} k={k}: E21(p^2k) = D^k E21(1) D^-k", True, E21(p ** (2 * k)) == D ** k * E21(1) * D ** -k)


def arithmetic_identities(
    m: int,
    l: int,
    primes: Optional[Sequence[int]] = None,
    kmax: int = 4,
    samples: int = 20,
    seed: int = 0,
) -> Report:
    """Exact checks of the matrix identities used to embed PSL_2(Z[1/m]).

    ``primes`` defaults to the prime divisors of ``m``.
    """
    if m < 2:
        raise FamilyError("m must be at least 2")
    if l < 1 or l % m:
        raise FamilyError("l must be a positive multiple of m")
    rep = Report("arithmetic", {"m": m, "l": l, "kmax": kmax, "samples": samples, "seed": seed})
    W = delta(m)
    # conjugation is linear, so the four unit matrices settle the general formula
    for a, b, c, d in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        X = Rat2x2.of(a, b, c, d)
        want = Rat2x2.of(d, Fraction(-c, m), -m * b, a)
        rep.add(f"delta conj on unit ({a},{b},{c},{d})", True, W.conj(X) == want)
    ps = list(primes) if primes is not None else _prime_divisors(m)
    for p in ps:
        if m % p == 0:
            u, v = E21(Fraction(m, p)), E12(Fraction(1, p))
            rep.add(f"p={p}: delta u delta^-1 = v^-1", True, W.conj(u) == v.inverse())
        d_identities(rep, p, kmax)
    rng = random.Random(seed)
    gens = [E12(l), E12(-l), E21(m * l), E21(-m * l)]
    kept = 0
    for _ in range(samples):
        X = IDENTITY
        for _ in range(rng.randint(1, 6)):
            X = X * rng.choice(gens)
        kept += in_pattern(X, m, l) and in_pattern(W.conj(X), m, l)
    rep.add("delta-conjugates of pattern samples stay in pattern", samples, kept)
    return rep

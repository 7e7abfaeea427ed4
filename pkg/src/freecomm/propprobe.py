"""First Frattini layer computations for the pro-p probes.

Everything here is linear algebra over GF(p) on ``U / [U,U]U^p`` together with
explicit word transports; no claim is made beyond the first layer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .comm import PRO_P, Commensuration, invert
from .conjugacy import is_primitive, power_conjugator
from .families import spn_generators
from .homs import hom_on_basis
from .linalg import intersect_subspaces, mat_mul_mod, rref_mod_p, span_contains
from .outcomes import Refusal
from .reports import Report
from .stallings import (
    Subgroup,
    commutator_basis_Z,
    fxm,
    intersect,
    p_open_subgroups,
)
from .words import RankContext, Word, abelianize, left_normed_commutator, maximal_root


MACRO_LIMIT = 32


class ProbeError(ValueError):
    pass


@dataclass(frozen=True)
class FpSubspace:
    p: int
    dim: int
    rows: Tuple[Tuple[int, ...], ...]

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], p: int, dim: int) -> "FpSubspace":
        return cls(p, dim, rref_mod_p(vectors, p, dim))

    @classmethod
    def full(cls, p: int, dim: int) -> "FpSubspace":
        return cls.span([[int(i == j) for j in range(dim)] for i in range(dim)], p, dim)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence[int]) -> bool:
        return span_contains(self.rows, v, self.p)

    def __and__(self, other: "FpSubspace") -> "FpSubspace":
        return FpSubspace(self.p, self.dim, intersect_subspaces(self.rows, other.rows, self.p, self.dim))

    def __le__(self, other: "FpSubspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def to_dict(self) -> dict:
        return {"p": self.p, "dim": self.dim, "rank": self.rank, "rows": [list(r) for r in self.rows]}


def frattini_vector(w: Word, U: Subgroup, p: int) -> Tuple[int, ...]:
    return U.abelianize_in_basis(w.letters, p)


def frattini_image(S: Sequence[Word], U: Subgroup, p: int) -> FpSubspace:
    """Image of ``<S>`` in ``U / [U,U]U^p``."""
    for w in S:
        if w not in U:
            raise ProbeError(f"{w} is not in the subgroup")
    return FpSubspace.span([frattini_vector(w, U, p) for w in S], p, U.rank)


# -- the isomorphism phi ------------------------------------------------------

def phi_iso(ctx: RankContext, p: int) -> Commensuration:
    """Isomorphism F(X,x1,p) -> F(X,x3,p) with x1^p -> x1 and [x2,x1] -> x2.

    Both sides use commutator bases; the remaining basis elements are matched in order.
    """
    if ctx.rank < 3:
        raise ProbeError("needs rank at least 3")
    x1, x2 = ctx.gen(0), ctx.gen(1)
    S1 = commutator_basis_Z(ctx, 0, p)
    S3 = commutator_basis_Z(ctx, 2, p)
    lead_src = [x1 ** p, left_normed_commutator([x2, x1])]
    lead_dst = [x1, x2]
    src = lead_src + [z for z in S1 if z not in lead_src]
    dst = lead_dst + [z for z in S3 if z not in lead_dst]
    f = hom_on_basis(fxm(ctx, 0, p), fxm(ctx, 2, p), src, dst)
    return Commensuration(f, PRO_P, p)


def h_word(ctx: RankContext, p: int, k: int) -> Word:
    """``[x2, x1, x1^p, ..., x1^(p^(k-1))]``; ``k = 0`` gives ``x2``."""
    x1 = ctx.gen(0)
    return left_normed_commutator([ctx.gen(1)] + [x1 ** (p ** i) for i in range(k)])


def phi_iso_certificate(p: int, kmax: int, d: int = 3) -> Report:
    if d < 3:
        raise ProbeError("needs rank at least 3")
    ctx = RankContext.machine(d) if d > 3 else RankContext.of("x1 x2 x3")
    phi = phi_iso(ctx, p)
    rep = Report("phi", {"p": p, "kmax": kmax, "d": d})
    x1, x2 = ctx.gen(0), ctx.gen(1)
    rep.add("phi(x1^p) = x1", True, phi(x1 ** p) == x1)
    rep.add("phi([x2,x1]) = x2", True, phi(left_normed_commutator([x2, x1])) == x2)
    for k in range(1, kmax + 1):
        h = h_word(ctx, p, k)
        rep.add(f"phi(h_{k}) = h_{k - 1}", True, h in phi.U and phi(h) == h_word(ctx, p, k - 1))
        cur, ok = h, True
        for _ in range(k):
            if cur not in phi.U:
                ok = False
                break
            cur = phi(cur)
        rep.add(f"phi^{k}(h_{k}) = x2", True, ok and cur == x2)
    return rep


# -- K_1 exclusion ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExclusionCertificate:
    word: Word
    p: int
    kind: str  # "frattini" or "orbit"
    vector: Tuple[int, ...]
    steps: Tuple[Tuple[str, Commensuration], ...] = ()
    final: Optional[Word] = None

    def verify(self) -> bool:
        cur = self.word
        for _, c in self.steps:
            if cur not in c.U:
                return False
            cur = c(cur)
        end = self.final if self.kind == "orbit" else self.word
        if cur != end:
            return False
        vec = abelianize(cur, self.p)
        return vec == tuple(self.vector) and any(vec)


def _nonzero(w: Word, p: int) -> Optional[Tuple[int, ...]]:
    v = abelianize(w, p)
    return v if any(v) else None


def _macro_moves(w: Word, p: int, phi: Optional[Commensuration]) -> List[Tuple[str, Commensuration]]:
    out = []
    v, m = maximal_root(w)
    if m % p == 0 and v.ctx.rank >= 2 and is_primitive(v):
        out.append((f"power^-1[{v}]", invert(power_conjugator(v, p, PRO_P, p).c)))
    if phi is not None and w in phi.U:
        out.append(("phi", phi))
    return out


def _macro_chain(w: Word, p: int, phi: Optional[Commensuration], limit: int = MACRO_LIMIT):
    """Follow the first applicable macro move greedily."""
    cur, steps, seen = w, (), {w}
    for _ in range(limit):
        moves = _macro_moves(cur, p, phi)
        if not moves:
            return None
        tag, c = moves[0]
        cur = c(cur)
        if cur in seen:
            return None
        seen.add(cur)
        steps += ((tag, c),)
        vec = _nonzero(cur, p)
        if vec is not None:
            cert = ExclusionCertificate(w, p, "orbit", vec, steps, cur)
            if not cert.verify():
                raise AssertionError("exclusion certificate failed re-verification")
            return cert
    return None


def k1_exclude(w: Word, p: int, orbit_bound: int = 3):
    """Certificate that ``w`` is outside K_1, or a refusal.

    Kind "frattini" when ``w`` is nonzero mod ``[F,F]F^p``. Otherwise a greedy
    chain of macro moves is tried, then a breadth-first search moves ``w`` with elements normalizing K_1 until it
    leaves the Frattini subgroup: first the inverse power conjugator of a
    primitive root and the isomorphism phi, then the Nielsen generators of
    SAut(U) for p-open U of index at most p, and their inverses.
    """
    if not w.letters:
        raise ProbeError("trivial word")
    vec = _nonzero(w, p)
    if vec is not None:
        return ExclusionCertificate(w, p, "frattini", vec)
    ctx = w.ctx
    phi = phi_iso(ctx, p) if ctx.rank >= 3 else None
    cert = _macro_chain(w, p, phi)
    if cert is not None:
        return cert
    fam = spn_generators(ctx, p, 1)
    gens = [(t, c) for t, c in zip(fam.tags, fam.members)]
    gens += [(t + "^-1", invert(c)) for t, c in gens]
    seen = {w}
    frontier: deque = deque([(w, ())])
    for _ in range(orbit_bound):
        nxt: deque = deque()
        for cur, path in frontier:
            for tag, c in _macro_moves(cur, p, phi) + gens:
                if cur not in c.U:
                    continue
                img = c(cur)
                if img in seen or not img.letters:
                    continue
                seen.add(img)
                steps = path + ((tag, c),)
                vec = _nonzero(img, p)
                if vec is not None:
                    cert = ExclusionCertificate(w, p, "orbit", vec, steps, img)
                    if not cert.verify():
                        raise AssertionError("exclusion certificate failed re-verification")
                    return cert
                nxt.append((img, steps))
        frontier = nxt
    return Refusal(f"no move sequence of length <= {orbit_bound} leaves the Frattini subgroup")


# -- layer constraints on K_n --------------------------------------------------------

@dataclass
class LayerConstraint:
    U: Subgroup
    level: int
    containment: FpSubspace
    invariant: FpSubspace


def _transvections(r: int) -> List[List[List[int]]]:
    mats = []
    for i in range(r):
        for j in range(r):
            if i != j:
                M = [[int(a == b) for b in range(r)] for a in range(r)]
                M[i][j] = 1
                mats.append(M)
    return mats


def largest_invariant_subspace(W: FpSubspace) -> FpSubspace:
    """Largest subspace of ``W`` stable under SL_r(F_p), via elementary transvections."""
    mats = _transvections(W.dim)
    cur = W
    while True:
        nxt = cur
        for M in mats:
            moved = [tuple(x % W.p for x in row) for row in mat_mul_mod(cur.rows, M, W.p)] if cur.rows else []
            nxt = nxt & FpSubspace.span(moved, W.p, W.dim)
        if nxt.rows == cur.rows:
            return cur
        cur = nxt


def kn_layer_constraint(ctx: RankContext, p: int, n: int, exact: bool = False) -> List[LayerConstraint]:
    """Upper bound for the image of K_n in each ``U / Phi(U)`` with ``[F:U] <= p^n``.

    K_n lies in every such U and is invariant under each SAut(U), so its image
    lies in the images of all ``U & U'`` and in the largest invariant subspace
    of their intersection. ``containment`` is an upper bound for that
    intersection: unless ``exact`` is set, the scan over ``U'`` stops once the
    invariant part is zero.
    """
    if n < 1:
        raise ProbeError("n must be at least 1")
    if p ** n > 8:
        raise ProbeError(f"p^n = {p ** n} exceeds the enumeration limit 8")
    levels = p_open_subgroups(ctx, p, n)
    # U & V shrinks with V, so the deepest level gives the tightest bound
    deepest = levels[-1]
    out = []
    for k, subs in enumerate(levels):
        for U in subs:
            C = FpSubspace.full(p, U.rank)
            inv = C
            for V in deepest:
                if inv.rank == 0 and not exact:
                    break
                if V == U or _contains_sub(V, U):
                    continue
                smaller = C & frattini_image(intersect(U, V).basis, U, p)
                if smaller.rank < C.rank:
                    C = smaller
                    inv = largest_invariant_subspace(C)
            out.append(LayerConstraint(U, k, C, inv))
    return out


def _contains_sub(V: Subgroup, U: Subgroup) -> bool:
    return all(V.contains_letters(b) for b in U.basis_letters)


def kn_report(ctx: RankContext, p: int, n: int, exact: bool = False) -> Report:
    layers = kn_layer_constraint(ctx, p, n, exact)
    rep = Report("kn", {"p": p, "n": n, "d": ctx.rank, "exact": exact})
    rows = []
    for L in layers:
        rows.append({
            "index": L.U.index,
            "rank": L.U.rank,
            "containment_bound_dim": L.containment.rank,
            "invariant_dim": L.invariant.rank,
        })
        if L.level < n:
            rep.add(f"index {L.U.index} subgroup #{len(rows) - 1}: layer-1 image", 0, L.invariant.rank)
    rep.data["layers"] = rows
    return rep

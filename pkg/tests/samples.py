"""Seeded random commensurations shared by the unit and acceptance tests."""

import random

from freecomm.comm import PRO_P, PROFINITE, Commensuration, inner
from freecomm.homs import compose, compose_all, nielsen, restrict, transport
from freecomm.stallings import p_open_subgroups, scq
from freecomm.words import RankContext, Word


def random_word(rng: random.Random, ctx: RankContext, max_len: int) -> Word:
    letters = []
    for _ in range(rng.randint(1, max_len)):
        choices = [s * (i + 1) for i in range(ctx.rank) for s in (1, -1) if not letters or letters[-1] != -s * (i + 1)]
        letters.append(rng.choice(choices))
    return Word(ctx, tuple(letters))


def random_aut(rng: random.Random, ctx: RankContext, length: int):
    moves = []
    for _ in range(length):
        i, j = rng.sample(range(ctx.rank), 2)
        h = nielsen(ctx, i, j, rng.choice(("left", "right")))
        moves.append(h if rng.random() < 0.5 else h.inverse)
    return compose_all(moves, ctx)


def virtual_iso(rng: random.Random, U, outer_len: int = 2, inner_len: int = 2):
    """Automorphism of U in its own basis followed by an automorphism of the whole group."""
    g = transport(U, random_aut(rng, U.basis_ctx, inner_len))
    alpha = random_aut(rng, U.ctx, outer_len)
    return compose(restrict(alpha, g.codomain), g)


def mixed_commensuration(rng: random.Random, ctx: RankContext) -> Commensuration:
    """An inner, Nielsen or SCQ-based commensuration."""
    kind = rng.choice(("inner", "nielsen", "scq"))
    if kind == "inner":
        return inner(random_word(rng, ctx, 3))
    if kind == "nielsen":
        return Commensuration(random_aut(rng, ctx, rng.randint(1, 3)), PROFINITE)
    H = rng.choice(scq(ctx, rng.choice((2, 3))))
    return Commensuration(virtual_iso(rng, H), PROFINITE)


def pro_p_commensuration(rng: random.Random, ctx: RankContext, p: int, max_level: int = 2) -> Commensuration:
    levels = p_open_subgroups(ctx, p, max_level)
    U = rng.choice(levels[rng.randint(0, max_level)])
    return Commensuration(virtual_iso(rng, U), PRO_P, p)

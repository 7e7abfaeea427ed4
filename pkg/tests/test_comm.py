import random

import pytest

from freecomm.comm import (
    PRO_P,
    CommError,
    Commensuration,
    commensuration,
    conj_subgroup,
    decompose_p,
    equivalent,
    from_automorphism,
    identity,
    inner,
    invert,
    multiply,
    power,
    product,
    restrict_to,
    scq_transitivity,
)
from freecomm.homs import det, hom_from_images, nielsen, perm_aut, restrict
from freecomm.stallings import cyclic_kernel, from_permutations, fxm, scq, whole

import samples


def test_equivalence_examples(f2, w):
    R = from_automorphism(nielsen(f2, 0, 1))
    assert equivalent(R, R)
    assert equivalent(R, restrict_to(R, fxm(f2, 0, 2)))
    assert not equivalent(inner(w("a")), inner(w("b")))


def test_inner_is_conjugation(f2, w):
    c = inner(w("a b"))
    assert c(w("b")) == w("a b b b^-1 a^-1")


def test_inner_embedding_relation(f2, w):
    # [f] i(g) [f]^-1 = i(f(g)) for g in the domain
    H = fxm(f2, 0, 2)
    f = Commensuration(samples.virtual_iso(random.Random(3), H))
    for g in H.basis:
        lhs = multiply(f, multiply(inner(g), invert(f)))
        assert equivalent(lhs, inner(f(g)))


def test_group_axioms_small(f2):
    rng = random.Random(11)
    e = identity(f2)
    for _ in range(20):
        x, y, z = (samples.mixed_commensuration(rng, f2) for _ in range(3))
        assert equivalent(multiply(multiply(x, y), z), multiply(x, multiply(y, z)))
        assert equivalent(multiply(x, invert(x)), e)
        assert equivalent(multiply(e, x), x)


def test_multiply_order(f2, w):
    R = from_automorphism(nielsen(f2, 0, 1))
    S = from_automorphism(perm_aut(f2, [1, 0]))
    # multiply(c2, c1) lets c1 act first
    assert multiply(S, R)(w("a")) == w("b a")
    assert equivalent(product([S, R]), multiply(S, R))
    assert equivalent(power(R, 3), multiply(R, multiply(R, R)))
    assert power(R, -2)(w("a")) == w("a b^-2")


def test_conj_subgroup(f2, w):
    H = fxm(f2, 0, 2)
    f = Commensuration(samples.virtual_iso(random.Random(5), H))
    assert conj_subgroup(f, f.U) == f.V


def test_commensuration_validation(f2, w):
    F = whole(f2)
    H = from_permutations(f2, [(1, 2, 0), (0, 2, 1)])
    iso = hom_from_images(H, H, H.basis)
    commensuration(iso)
    with pytest.raises(CommError):
        commensuration(iso, PRO_P, 2)
    with pytest.raises(CommError):
        commensuration(hom_from_images(F, F, [w("a^2"), w("b")], require_iso=False))


def test_scq_transitivity_examples(f2):
    H = fxm(f2, 0, 2)
    phi, saut = scq_transitivity(H, H)
    assert saut
    phi, saut = scq_transitivity(fxm(f2, 0, 2), fxm(f2, 1, 2))
    assert saut and det(phi) == 1
    assert restrict(phi, fxm(f2, 0, 2)).codomain == fxm(f2, 1, 2)
    phi, _ = scq_transitivity(cyclic_kernel(f2, (1, 1), 3), fxm(f2, 0, 3))
    assert restrict(phi, cyclic_kernel(f2, (1, 1), 3)).codomain == fxm(f2, 0, 3)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_scq_single_orbit(f2, f3, m):
    for ctx in (f2, f3) if m <= 3 else (f2,):
        subs = scq(ctx, m)
        for H in subs:
            phi, saut = scq_transitivity(subs[0], H)
            assert saut and restrict(phi, subs[0]).codomain == H


def test_decompose_automorphism(f2):
    c = from_automorphism(nielsen(f2, 1, 0), PRO_P, 2)
    cert = decompose_p(c, 2)
    assert cert.length == 0 and len(cert.factors) == 1 and cert.check(c)


def test_decompose_inner_on_index_two(f2, w):
    H = fxm(f2, 0, 2)
    c = restrict_to(inner(w("a"), PRO_P, 2), H)
    cert = decompose_p(c, 2)
    assert cert.length == 1 and cert.check(c)
    assert equivalent(cert.composite(), c)


def test_decompose_index_four_swap(f2):
    S = perm_aut(f2, [1, 0])
    f = restrict(S, fxm(f2, 0, 4))
    assert f.codomain == fxm(f2, 1, 4)
    c = Commensuration(f, PRO_P, 2)
    for saut in (False, True):
        cert = decompose_p(c, 2, saut)
        assert cert.length == 2 and cert.check(c)
        if saut:
            assert all(x == 1 for x in cert.dets()[1:])


def test_decompose_random(f2):
    rng = random.Random(2)
    for p in (2, 3):
        for _ in range(5):
            c = samples.pro_p_commensuration(rng, f2, p)
            cert = decompose_p(c, p, True)
            assert cert.check(c)
            indices = [K.index for K in cert.chain]
            assert indices == [p ** k for k in range(len(indices))]

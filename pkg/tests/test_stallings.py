import pytest

from freecomm.stallings import (
    SubgroupError,
    commutator_basis_Z,
    conjugate,
    coset_tables,
    from_generators,
    from_permutations,
    fxm,
    hall_completion,
    index_p_normals,
    intersect,
    is_normal,
    is_p_open,
    is_subgroup,
    normal_core,
    rewrite,
    schreier_basis_Y,
    scq,
    subgroups_of_index,
    whole,
)
from freecomm.words import RankContext, parse
from freecomm.words import substitute

import oracles


def gens(ctx, *texts):
    return from_generators([parse(t, ctx) for t in texts], ctx)


def test_schreier_basis_of_index_two(f2):
    H = gens(f2, "a^2", "b", "a b a^-1")
    assert H.index == 2 and H.n == 2
    assert H == fxm(f2, 0, 2)


def test_generators_give_whole_group(f2):
    assert gens(f2, "a", "b") == whole(f2)
    assert whole(f2).index == 1


def test_infinite_index(f2):
    H = gens(f2, "a^2", "b")
    assert H.index is None
    # no subgroup of small index has the same graph
    for n in range(1, 6):
        assert all(K != H for K in subgroups_of_index(f2, n))


def test_contains(f2, w):
    H = fxm(f2, 0, 2)
    assert w("a^2") in H
    assert w("a") not in H
    # a acts as a transposition of two cosets and b trivially
    perms = [(1, 0), (0, 1)]
    word = w("b a b^-1 a")
    assert (oracles.act(perms, word.letters) == 0) == (word in H)
    assert word in H


def test_rewrite(f2, w):
    H = fxm(f2, 0, 2)
    basis = [b.letters for b in H.basis]
    assert [str(b) for b in H.basis] == ["a^2", "b", "a b a^-1"]
    for text in ("a^4", "a b a", "b", "a b^-1 a^-1 a^2"):
        r = rewrite(H, w(text))
        assert substitute(r.letters, basis) == w(text).letters
    assert rewrite(H, w("a^4")).letters == (1, 1)
    assert rewrite(H, w("a b a")).letters == (3, 1)
    F = whole(f2)
    assert rewrite(F, w("a b^-1")).letters == w("a b^-1").letters


def test_rewrite_rejects_nonmembers(f2, w):
    with pytest.raises(SubgroupError):
        rewrite(fxm(f2, 0, 2), w("a"))


def test_fxm_three(f2, w):
    H = fxm(f2, 0, 3)
    assert (H.index, H.rank) == (3, 4)
    # representatives are shortest words, so a^-1 stands for the coset of a^2
    cosets = {H.trace(t.letters) for t in H.transversal}
    assert cosets == {H.trace(w(x).letters) for x in ("", "a", "a^2")} == {0, 1, 2}


def test_intersection_of_index_two_kernels(f2):
    K = intersect(fxm(f2, 0, 2), fxm(f2, 1, 2))
    assert (K.index, K.rank) == (4, 5)
    # the diagonal action on 2x2 points is transitive, so the stabilizer has index 4
    small = [(1, 0, 3, 2), (2, 3, 0, 1)]
    assert K == from_permutations(f2, small)


def test_intersection_trivial_cases(f2):
    H = fxm(f2, 1, 3)
    assert intersect(H, H) == H
    assert intersect(whole(f2), H) == H


def test_normality(f2, w):
    H = fxm(f2, 0, 2)
    assert conjugate(H, w("b")) == H
    assert is_normal(H)
    # a -> (1 2), b -> (1 3) on {1,2,3}, written 0-based
    S = from_permutations(f2, [(1, 0, 2), (2, 1, 0)])
    assert S.index == 3 and not is_normal(S)
    core = normal_core(S)
    assert core.index == 6 and is_normal(core)
    assert normal_core(whole(f2)) == whole(f2)


def test_normal_core_matches_group_order(f2):
    for perms in coset_tables(2, 4):
        S = from_permutations(f2, perms)
        assert normal_core(S).index == oracles.group_order_at_most(perms, 10 ** 6)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_schreier_and_commutator_bases(d, m):
    ctx = RankContext.machine(d)
    Y = schreier_basis_Y(ctx, 0, m)
    Z = commutator_basis_Z(ctx, 0, m)
    assert len(Y) == len(Z) == 1 + m * (d - 1)
    H = fxm(ctx, 0, m)
    assert from_generators(Y, ctx) == H == from_generators(Z, ctx)


def test_scq_counts(f2, f3):
    for m in (2, 3, 4, 5, 6):
        assert len(scq(f2, m)) == oracles.scq_kernel_classes(2, m)
    for m in (2, 3):
        assert len(scq(f3, m)) == oracles.scq_kernel_classes(3, m)
    assert len(index_p_normals(f3, 2)) == 7


@pytest.mark.parametrize("d,nmax", [(2, 6), (3, 4)])
def test_enumeration_counts(d, nmax):
    ref = oracles.index_subgroup_counts(d, nmax)
    ctx = RankContext.machine(d)
    for n in range(1, nmax + 1):
        subs = set(subgroups_of_index(ctx, n))
        assert len(subs) == ref[n - 1]


def test_p_open_chains(f2):
    cert = is_p_open(fxm(f2, 0, 2), 2)
    assert cert.is_p_open and len(cert.chain) - 1 == 1 and cert.verify()
    cert = is_p_open(fxm(f2, 0, 4), 2)
    assert len(cert.chain) - 1 == 2 and cert.chain[1] == fxm(f2, 0, 2) and cert.verify()


def test_s4_stabilizer_is_not_p_open(f2):
    # a -> (1 2 3 4), b -> (1 2)
    S = from_permutations(f2, [(1, 2, 3, 0), (1, 0, 2, 3)])
    assert S.index == 4
    assert not is_p_open(S, 2)
    assert not oracles.is_p_group_action([(1, 2, 3, 0), (1, 0, 2, 3)], 2)


def test_hall_completion(f2):
    H = gens(f2, "a^2", "b")
    K, ext = hall_completion(H)
    assert K.index == 2 and is_subgroup(H, K)
    assert ext[: H.rank] == H.basis
    assert from_generators(ext, f2) == K and len(ext) == K.rank
    # a b-loop at the second vertex closes the graph
    assert K == from_permutations(f2, [(1, 0), (0, 1)])


def test_hall_completion_of_open_subgroup(f2):
    H = fxm(f2, 1, 3)
    assert hall_completion(H) == (H, H.basis)


def test_hall_completion_for_commutator_pairs(f2, w):
    H = gens(f2, "b a b^-1 a^-1", "a")
    K, ext = hall_completion(H)
    assert K.index is not None
    assert from_generators(ext, f2) == K and ext[:2] == H.basis


def test_rank_formula_on_small_indices():
    for d, nmax in ((2, 5), (3, 3)):
        ctx = RankContext.machine(d)
        for n in range(1, nmax + 1):
            for H in subgroups_of_index(ctx, n):
                edges = len(H.edges())
                assert H.rank == 1 + n * (d - 1) == edges - H.n + 1

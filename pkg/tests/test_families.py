from fractions import Fraction

import pytest

from freecomm.comm import PRO_P
from freecomm.families import (
    E12,
    E21,
    IDENTITY,
    MAX_SPN_INDEX,
    FamilyError,
    Rat2x2,
    am_generators,
    arithmetic_identities,
    delta,
    det_lemma_suite,
    in_pattern,
    r12_restriction_check,
    sm_generators,
    spn_generators,
)
from freecomm.homs import det
from freecomm.stallings import is_p_open, scq
from freecomm.words import RankContext

import oracles


def nielsen_count(rank):
    return 2 * rank * (rank - 1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_sm_family(f2, m):
    fam = sm_generators(f2, m)
    subs = scq(f2, m)
    assert len(fam) == sum(nielsen_count(H.rank) for H in subs)
    assert len(subs) == oracles.scq_kernel_classes(2, m)
    for c in fam.members:
        assert c.U == c.V and c.U in subs and det(c.map) == 1
    assert fam.saut


def test_known_family_sizes(f2):
    assert len(sm_generators(f2, 2)) == 36
    assert len(am_generators(f2, 3)) == 104
    assert len(spn_generators(f2, 2, 1)) == 40


def test_am_family_adds_odd_elements(f2):
    fam = am_generators(f2, 3)
    dets = [det(c.map) for c in fam.members]
    assert dets.count(-1) == 2 * len(scq(f2, 3))
    assert not fam.saut


def test_spn_family(f2):
    fam = spn_generators(f2, 2, 2)
    assert len(fam) == 800
    for c in fam.members[::37]:
        assert c.flavor == PRO_P and is_p_open(c.U, 2) and det(c.map) == 1


def test_spn_limit(f2):
    with pytest.raises(FamilyError):
        spn_generators(f2, 3, 2)
    assert MAX_SPN_INDEX == 8


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_restricted_determinants(d, m):
    rep = det_lemma_suite(RankContext.machine(d), m)
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("d,m", [(2, 3), (4, 3), (2, 7)])
def test_det_beta_positive_cases(d, m):
    rep = det_lemma_suite(RankContext.machine(d), m)
    check = next(c for c in rep.checks if c.name == "det(beta|H)")
    assert check.actual == 1


@pytest.mark.parametrize("d,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_r12_restriction(d, m):
    rep = r12_restriction_check(RankContext.machine(d), m)
    assert rep.passed, rep.failures()


def test_rat2x2_basics():
    X = Rat2x2.of(2, 1, 3, 2)
    assert X.det() == 1
    assert X * X.inverse() == IDENTITY
    assert X ** 3 == X * X * X
    assert (X ** -2) * (X ** 2) == IDENTITY
    assert Rat2x2.of(-1, 0, 0, -1).proj_eq(IDENTITY)


def test_d_identity_by_hand():
    for p in (2, 3, 5):
        D = E12(Fraction(1, p)) * E21(-p) * E12(Fraction(1, p)) * Rat2x2.of(0, -1, 1, 0)
        assert D == Rat2x2.of(Fraction(1, p), 0, 0, p)
        for k in range(1, 5):
            # diag(p^k, p^-k) E12(1) diag(p^-k, p^k) scales the corner by p^2k
            Dk = Rat2x2.of(Fraction(1, p ** k), 0, 0, p ** k)
            assert Dk.inverse() * E12(1) * Dk == Rat2x2.of(1, p ** (2 * k), 0, 1)


def test_delta_conjugation():
    m = 3
    X = Rat2x2.of(5, 7, 11, 13)
    assert delta(m).conj(X) == Rat2x2.of(13, Fraction(-11, m), -m * 7, 5)


def test_pattern_membership():
    assert in_pattern(E12(6) * E21(18), 3, 6)
    assert not in_pattern(E12(3), 3, 6)


@pytest.mark.parametrize("m,l", [(2, 2), (3, 6), (2, 4)])
def test_arithmetic_identities(m, l):
    rep = arithmetic_identities(m, l, primes=[2, 3, 5], kmax=4, samples=20)
    assert rep.passed, rep.failures()


def test_arithmetic_rejects_bad_level():
    with pytest.raises(FamilyError):
        arithmetic_identities(3, 4)

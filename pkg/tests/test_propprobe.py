import pytest

from freecomm.outcomes import Refusal
from freecomm.propprobe import (
    FpSubspace,
    ProbeError,
    frattini_image,
    h_word,
    k1_exclude,
    kn_layer_constraint,
    kn_report,
    largest_invariant_subspace,
    phi_iso,
    phi_iso_certificate,
)
from freecomm.stallings import fxm, whole
from freecomm.words import RankContext, left_normed_commutator


@pytest.fixture
def x3():
    return RankContext.of("x1 x2 x3")


def test_frattini_images(f2, w):
    F = whole(f2)
    assert frattini_image([w("a^2")], F, 2).rank == 0
    assert frattini_image([w("a")], F, 2).rank == 1
    H = fxm(f2, 0, 2)
    assert frattini_image(H.basis, H, 2).rank == 3
    assert frattini_image([w("a b a^-1 b^-1")], F, 3).rank == 0


def test_fp_subspace_ops():
    A = FpSubspace.span([(1, 0, 0), (0, 1, 0)], 2, 3)
    B = FpSubspace.span([(0, 1, 0), (0, 0, 1)], 2, 3)
    assert (A & B).rows == ((0, 1, 0),)
    assert (A & B) <= A and not A <= B
    assert FpSubspace.full(3, 2).rank == 2


def test_invariant_subspace_of_proper_space_is_zero():
    A = FpSubspace.span([(1, 0, 0), (0, 1, 0)], 2, 3)
    assert largest_invariant_subspace(A).rank == 0
    assert largest_invariant_subspace(FpSubspace.full(2, 3)).rank == 3


@pytest.mark.parametrize("p", [2, 3])
def test_phi_certificate(p):
    rep = phi_iso_certificate(p, 5)
    assert rep.passed, rep.failures()


def test_phi_shapes(x3):
    phi = phi_iso(x3, 2)
    assert phi.U == fxm(x3, 0, 2) and phi.V == fxm(x3, 2, 2)
    x1, x2 = x3.gen(0), x3.gen(1)
    assert phi(x1 ** 2) == x1
    assert phi(left_normed_commutator([x2, x1])) == x2
    assert h_word(x3, 2, 0) == x2
    assert h_word(x3, 2, 2) == left_normed_commutator([x2, x1, x1 ** 2])


def test_phi_needs_rank_three(f2):
    with pytest.raises(ProbeError):
        phi_iso(f2, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_k1_exclusions(x3, p):
    x1 = x3.gen(0)
    first = k1_exclude(x1, p)
    assert first.kind == "frattini" and first.vector == (1, 0, 0) and first.verify()
    for word in (x1 ** p, x1 ** (p * p), h_word(x3, p, 2), h_word(x3, p, 3)):
        cert = k1_exclude(word, p)
        assert not isinstance(cert, Refusal)
        assert cert.kind == "orbit" and cert.verify()


def test_k1_h2_uses_phi(x3):
    cert = k1_exclude(h_word(x3, 2, 2), 2)
    assert [t for t, _ in cert.steps] == ["phi", "phi"]
    assert cert.final == x3.gen(1)


def test_k1_commutator_rank_two(w):
    cert = k1_exclude(w("a b a^-1 b^-1"), 2)
    assert not isinstance(cert, Refusal) and cert.verify()


def test_k1_tampered_certificate_fails(x3):
    from dataclasses import replace

    cert = k1_exclude(x3.gen(0) ** 2, 2)
    assert not replace(cert, vector=(0, 1, 0)).verify()


def test_kn_layers(f2):
    layers = kn_layer_constraint(f2, 2, 2)
    assert {L.level for L in layers} == {0, 1, 2}
    for L in layers:
        assert L.invariant <= L.containment
        if L.level < 2:
            assert L.invariant.rank == 0


def test_kn_exact_matches_fast_on_invariants(f2):
    fast = kn_layer_constraint(f2, 2, 2)
    exact = kn_layer_constraint(f2, 2, 2, exact=True)
    assert [L.invariant.rank for L in fast] == [L.invariant.rank for L in exact]
    assert all(e.containment <= f.containment for f, e in zip(fast, exact))


def test_kn_report(f2):
    rep = kn_report(f2, 2, 1)
    assert rep.passed
    assert len(rep.data["layers"]) == 4


def test_kn_limit(f2):
    with pytest.raises(ProbeError):
        kn_layer_constraint(f2, 3, 2)

import json

import pytest

from freecomm.comm import PRO_P, Commensuration, decompose_p, equivalent, from_automorphism, inner
from freecomm.conjugacy import bs_witness, comm_conjugator, commp_conjugator
from freecomm.homs import equal_maps, nielsen, restrict
from freecomm.jsonio import DecodeError, from_json, subgroup_from_json, to_json
from freecomm.outcomes import Impossibility, Refusal
from freecomm.propprobe import k1_exclude
from freecomm.stallings import from_generators, fxm, is_p_open
from freecomm.words import RankContext


def roundtrip(x):
    return from_json(json.loads(json.dumps(to_json(x))))


def test_word_and_subgroup(f2, w):
    assert roundtrip(w("a b^-2")) == w("a b^-2")
    for H in (fxm(f2, 0, 3), from_generators([w("a^2"), w("b a b^-1")], f2)):
        assert roundtrip(H) == H


def test_subgroup_from_graph_only(f2):
    H = fxm(f2, 1, 3)
    obj = to_json(H)
    del obj["generators"]
    assert subgroup_from_json(obj) == H
    manual = {"context": ["a", "b"], "graph": {"vertices": 2, "base": 0, "edges": {"a": [[0, 1], [1, 0]], "b": [[0, 0], [1, 1]]}}}
    assert subgroup_from_json(manual) == fxm(f2, 0, 2)


def test_subgroup_needs_data(f2):
    with pytest.raises(DecodeError):
        subgroup_from_json({"context": ["a", "b"]})
    with pytest.raises(DecodeError):
        subgroup_from_json({"generators": ["a"]})


def test_hom(f2):
    f = restrict(nielsen(f2, 0, 1), fxm(f2, 1, 2))
    g = roundtrip(f)
    assert equal_maps(f, g) and g.codomain == f.codomain


def test_hom_with_listed_basis(f2, w):
    obj = {
        "type": "hom",
        "context": ["a", "b"],
        "domain": ["b^2", "a", "b a b^-1"],
        "codomain": ["b^2", "a", "b a b^-1"],
        "images": ["b^2", "b a b^-1", "a"],
    }
    f = from_json(obj)
    assert f(w("a")) == w("b a b^-1") and f(w("b a b^-1")) == w("a")


def test_commensuration(f2, w):
    c = Commensuration(restrict(nielsen(f2, 0, 1), fxm(f2, 0, 2)), PRO_P, 2)
    d = roundtrip(c)
    assert d.flavor == PRO_P and d.p == 2 and equivalent(c, d)


def test_witnesses(f2, w):
    for wit in (comm_conjugator(w("a"), w("a b a^-1 b^-1")), commp_conjugator(w("a"), w("a^2"), 2), bs_witness(w("a b"), 3)):
        back = roundtrip(wit)
        assert back.source == wit.source and back.target == wit.target and back.verify()


def test_decomposition(f2, w):
    c = Commensuration(restrict(nielsen(f2, 1, 0), fxm(f2, 0, 4)), PRO_P, 2)
    cert = decompose_p(c, 2, True)
    back = roundtrip(cert)
    assert back.check(c) and back.dets() == cert.dets()


def test_popen_and_exclusion(f2, w):
    cert = is_p_open(fxm(f2, 0, 4), 2)
    back = roundtrip(cert)
    assert back.is_p_open and back.verify() and back.chain == cert.chain
    neg = roundtrip(is_p_open(fxm(f2, 0, 3), 2))
    assert not neg.is_p_open
    ex = k1_exclude(w("a^4"), 2)
    assert roundtrip(ex).verify()


def test_outcomes():
    assert roundtrip(Refusal("bound")) == Refusal("bound")
    assert roundtrip(Impossibility("d_p differs", {"p": 2})) == Impossibility("d_p differs", {"p": 2})


def test_unknown_type():
    with pytest.raises(DecodeError):
        from_json({"type": "banana"})


def test_inner_roundtrip_machine_context():
    ctx = RankContext.machine(3)
    c = inner(ctx.gen(2), PRO_P, 3)
    assert equivalent(roundtrip(c), c)
    assert equivalent(roundtrip(from_automorphism(nielsen(ctx, 0, 2))), from_automorphism(nielsen(ctx, 0, 2)))

import pytest

from freecomm.words import (
    RankContext,
    Word,
    WordError,
    abelianize,
    cyclic_reduce,
    format_word,
    left_normed_commutator,
    maximal_root,
    multiply,
    parse,
)

import oracles


def test_parse_examples(f2, w):
    assert w("a b^-1 a^2").letters == (1, -2, 1, 1)
    assert w("a a^-1").letters == ()
    assert w("b^3").letters == (2, 2, 2)


def test_parse_rejects_unknown_generator(f2):
    with pytest.raises(WordError):
        parse("a c", f2)


def test_format_roundtrip(f3):
    for letters in oracles.all_words(3, 4):
        word = parse(" ".join("abc"[abs(x) - 1] + ("^-1" if x < 0 else "") for x in letters), f3)
        assert parse(format_word(word), f3) == word


def test_multiply_examples(w):
    assert multiply(w("a b"), w("b^-1 a")) == w("a^2")
    assert multiply(w("a b"), w("")) == w("a b")
    assert multiply(w("a b a^-1"), w("a b^-1 a^-1")).letters == ()


def test_multiply_matches_reference():
    ctx = RankContext.of("a b")
    words = list(oracles.all_words(2, 3))
    for u in words[::5]:
        for v in words[::7]:
            assert multiply(Word(ctx, u), Word(ctx, v)).letters == oracles.mul(u, v)


def test_cyclic_reduce(w):
    assert cyclic_reduce(w("a b a^-1")) == (w("b"), w("a"))
    assert cyclic_reduce(w("b a b^-1 a^-1")) == (w("b a b^-1 a^-1"), w(""))
    assert cyclic_reduce(w("a a")) == (w("a^2"), w(""))


def test_cyclic_reduce_reconstructs():
    ctx = RankContext.of("a b")
    for u in oracles.all_words(2, 6):
        core, c = cyclic_reduce(Word(ctx, u))
        assert c * core * c.inverse() == Word(ctx, u)
        cl = core.letters
        assert len(cl) <= 1 or cl[0] != -cl[-1]


def test_maximal_root_examples(w):
    assert maximal_root(w("a^4")) == (w("a"), 4)
    comm = w("b a b^-1 a^-1")
    assert maximal_root(comm) == (comm, 1)
    root, m = maximal_root(w("b a b a b a b b^-1"))
    assert m == 3 and root ** 3 == w("b a b a b a")


def test_maximal_root_matches_power_table():
    ctx = RankContext.of("a b")
    table = oracles.power_table(2, 10)
    for u in oracles.all_words(2, 10):
        root, m = maximal_root(Word(ctx, u))
        _, m_ref = oracles.brute_root(u, table)
        assert m == m_ref
        assert root ** m == Word(ctx, u)


def test_commutators(w):
    a, b = w("a"), w("b")
    assert left_normed_commutator([a, b]) == w("a b a^-1 b^-1")
    assert left_normed_commutator([a]) == a
    inner = left_normed_commutator([b, a])
    assert left_normed_commutator([b, a, a]) == left_normed_commutator([inner, a])


def test_abelianize(w):
    assert abelianize(w("a b a^-1 b^-1")) == (0, 0)
    assert abelianize(w("a a b")) == (2, 1)
    assert abelianize(w("a a b"), 2) == (0, 1)

"""Freely reduced words over a named generator alphabet.

Letters are encoded as nonzero ints: generator ``i`` is ``i + 1`` and its
inverse is ``-(i + 1)``.  A :class:`Word` always stores its letters freely
reduced, so equality of words is equality of group elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Letters = Tuple[int, ...]

_NAME_RE = re.compile(r"[a-z][0-9]*\Z")
_TOKEN_RE = re.compile(r"([a-z][0-9]*)(?:\^(-?[0-9]+))?\Z")


class WordError(ValueError):
    """Raised on malformed word text or mismatched contexts."""


@dataclass(frozen=True)
class RankContext:
    """Ordered generator names of an ambient free group."""

    names: Tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for n in names:
            if not _NAME_RE.match(n):
                raise WordError(f"bad generator name {n!r}")
        if len(set(names)) != len(names):
            raise WordError("generator names must be distinct")

    @classmethod
    def of(cls, spec: "str | Iterable[str]") -> "RankContext":
        if isinstance(spec, str):
            spec = spec.split()
        return cls(tuple(spec))

    @classmethod
    def machine(cls, rank: int) -> "RankContext":
        """Context with generated names z0, z1, ... used for rebased subgroups."""
        return cls(tuple(f"z{i}" for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordError(f"unknown generator {name!r}") from None

    def gen(self, i: int) -> "Word":
        return Word(self, (i + 1,))

    def gens(self) -> list["Word"]:
        return [self.gen(i) for i in range(self.rank)]

    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, text: str) -> "Word":
        return parse(text, self)

    def __str__(self) -> str:
        return " ".join(self.names)


def reduce_letters(letters: Iterable[int]) -> Letters:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_letters(letters: Sequence[int]) -> Letters:
    return tuple(-x for x in reversed(letters))


def concat(u: Sequence[int], v: Sequence[int]) -> Letters:
    """Reduced product of two already reduced letter tuples."""
    k = 0
    n = min(len(u), len(v))
    while k < n and u[len(u) - 1 - k] == -v[k]:
        k += 1
    return tuple(u[: len(u) - k]) + tuple(v[k:])


def power_letters(u: Letters, k: int) -> Letters:
    if k == 0:
        return ()
    if k < 0:
        u, k = inverse_letters(u), -k
    core, conj = _cyclic_split(u)
    if not core:
        return ()
    return conj + core * k + inverse_letters(conj)


def _cyclic_split(u: Sequence[int]) -> Tuple[Letters, Letters]:
    i, j = 0, len(u) - 1
    while i < j and u[i] == -u[j]:
        i += 1
        j -= 1
    return tuple(u[i : j + 1]), tuple(u[:i])


@dataclass(frozen=True)
class Word:
    """An element of the free group on ``ctx``; letters kept freely reduced."""

    ctx: RankContext
    letters: Letters

    def __post_init__(self) -> None:
        letters = reduce_letters(self.letters)
        d = self.ctx.rank
        for x in letters:
            if x == 0 or abs(x) > d:
                raise WordError(f"letter {x} out of range for rank {d}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def _raw(cls, ctx: RankContext, letters: Letters) -> "Word":
        # trusted constructor: letters already reduced and in range
        w = object.__new__(cls)
        object.__setattr__(w, "ctx", ctx)
        object.__setattr__(w, "letters", letters)
        return w

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def inverse(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return Word._raw(self.ctx, power_letters(self.letters, k))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def _check_ctx(u: Word, v: Word) -> None:
    if u.ctx is not v.ctx and u.ctx != v.ctx:
        raise WordError("words live in different contexts")


def parse(text: str, ctx: RankContext) -> Word:
    out: list[int] = []
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise WordError(f"malformed token {tok!r}")
        i = ctx.index(m.group(1))
        k = int(m.group(2)) if m.group(2) is not None else 1
        if k == 0:
            raise WordError(f"zero exponent in {tok!r}")
        x = i + 1 if k > 0 else -(i + 1)
        out.extend([x] * abs(k))
    return Word(ctx, tuple(out))


def format_word(w: Word) -> str:
    """Inverse of :func:`parse`; runs of one letter are written ``g^k``."""
    parts: list[str] = []
    letters = w.letters
    i = 0
    while i < len(letters):
        x = letters[i]
        j = i
        while j < len(letters) and letters[j] == x:
            j += 1
        k = (j - i) * (1 if x > 0 else -1)
        name = w.ctx.names[abs(x) - 1]
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


def multiply(u: Word, v: Word) -> Word:
    _check_ctx(u, v)
    return Word._raw(u.ctx, concat(u.letters, v.letters))


def invert(w: Word) -> Word:
    return Word._raw(w.ctx, inverse_letters(w.letters))


def product(ctx: RankContext, words: Iterable[Word]) -> Word:
    acc: Letters = ()
    for w in words:
        acc = concat(acc, w.letters)
    return Word._raw(ctx, acc)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``."""
    core, conj = _cyclic_split(w.letters)
    return Word._raw(w.ctx, core), Word._raw(w.ctx, conj)


def _smallest_period(s: Sequence[int]) -> int:
    n = len(s)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n


def maximal_root(w: Word) -> Tuple[Word, int]:
    """Write ``w = root^k`` with ``root`` not a proper power."""
    if not w.letters:
        raise WordError("the identity has no maximal root")
    core, conj = _cyclic_split(w.letters)
    p = _smallest_period(core)
    root = concat(concat(conj, core[:p]), inverse_letters(conj))
    return Word._raw(w.ctx, root), len(core) // p


def commutator(x: Word, y: Word) -> Word:
    _check_ctx(x, y)
    return Word._raw(
        x.ctx,
        concat(concat(x.letters, y.letters), concat(inverse_letters(x.letters), inverse_letters(y.letters))),
    )


def left_normed_commutator(args: Sequence[Word]) -> Word:
    """``[x1, ..., xn]`` with ``[x, y] = x y x^-1 y^-1`` nested to the left."""
    if not args:
        raise WordError("commutator of an empty list")
    acc = args[0]
    for y in args[1:]:
        acc = commutator(acc, y)
    return acc


def iterated_commutator(y: Word, x: Word, j: int) -> Word:
    """``[y, x, ..., x]`` with ``j`` copies of ``x``; ``j = 0`` gives ``y``."""
    return left_normed_commutator([y] + [x] * j)


def abelianize_letters(letters: Iterable[int], rank: int, modulus: Optional[int] = None) -> Tuple[int, ...]:
    v = [0] * rank
    for x in letters:
        if x > 0:
            v[x - 1] += 1
        else:
            v[-x - 1] -= 1
    if modulus is not None:
        v = [c % modulus for c in v]
    return tuple(v)


def abelianize(w: Word, modulus: Optional[int] = None) -> Tuple[int, ...]:
    return abelianize_letters(w.letters, w.ctx.rank, modulus)


def substitute(letters: Sequence[int], images: Sequence[Letters]) -> Letters:
    """Replace letter ``i+1`` by ``images[i]`` (and inverses), reducing as we go."""
    out: list[int] = []
    for x in letters:
        piece = images[x - 1] if x > 0 else inverse_letters(images[-x - 1])
        for y in piece:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)

"""Strings over a finite alphabet and quasi-lexicographic bases.

A string is a tuple of symbols, the empty tuple being the empty string.
Symbols are short strings (``"a"``, ``"12"``), so multi-character symbols
are supported; plain Python ``str`` arguments are split into characters
as a convenience for single-character alphabets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence, Union

Word = tuple
WordLike = Union[str, Sequence[str]]

EPSILON: Word = ()

# Largest basis we agree to enumerate.
MAX_BASIS_SIZE = 50_000_000


class BasisError(ValueError):
    """Raised for malformed or oversized bases."""


def as_word(w: WordLike) -> Word:
    if isinstance(w, tuple):
        return w
    return tuple(w)


def word_str(w: Word, sep: str = "") -> str:
    return sep.join(w) if w else "ε"


def basis_size(n_symbols: int, max_len: int) -> int:
    return sum(n_symbols**i for i in range(max_len + 1))


@dataclass(frozen=True)
class Basis:
    """All strings of length at most ``max_len`` in quasi-lexicographic order."""

    alphabet: tuple
    max_len: int
    strings: tuple = field(repr=False)
    index: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.strings)

    def __contains__(self, w) -> bool:
        return as_word(w) in self.index

    def __iter__(self):
        return iter(self.strings)

    def position(self, w: WordLike) -> int:
        return self.index[as_word(w)]

    def parent(self, i: int) -> int:
        """Index of the string with its last symbol removed (-1 for ε)."""
        w = self.strings[i]
        return self.index[w[:-1]] if w else -1

    def suffix_parent(self, i: int) -> int:
        """Index of the string with its first symbol removed (-1 for ε)."""
        w = self.strings[i]
        return self.index[w[1:]] if w else -1


def basis(alphabet: Iterable[str], max_len: int, cap: int = MAX_BASIS_SIZE) -> Basis:
    alphabet = tuple(alphabet)
    if not alphabet:
        raise BasisError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise BasisError(f"duplicate symbols in alphabet {alphabet!r}")
    if max_len < 0:
        raise BasisError(f"max_len must be >= 0, got {max_len}")
    size = basis_size(len(alphabet), max_len)
    if size > cap:
        raise BasisError(f"basis Σ^<={max_len} over {len(alphabet)} symbols has {size} strings (cap {cap})")
    strings = [w for n in range(max_len + 1) for w in product(alphabet, repeat=n)]
    return Basis(alphabet, max_len, tuple(strings), {w: i for i, w in enumerate(strings)})


def enumerate_words(alphabet: Sequence[str], max_len: int, cap: int = MAX_BASIS_SIZE):
    """Yield Σ^{<=max_len} in quasi-lexicographic order without building an index."""
    size = basis_size(len(alphabet), max_len)
    if size > cap:
        raise BasisError(f"enumeration of {size} strings exceeds cap {cap}")
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def is_prefix(u: WordLike, w: WordLike) -> bool:
    u, w = as_word(u), as_word(w)
    return len(u) <= len(w) and w[: len(u)] == u


def factor_occurrences(w: WordLike, u: WordLike) -> int:
    """Number of decompositions ``w = x u y``; ε occurs ``|w| + 1`` times."""
    w, u = as_word(w), as_word(u)
    n, m = len(w), len(u)
    if m > n:
        return 0
    return sum(1 for i in range(n - m + 1) if w[i : i + m] == u)

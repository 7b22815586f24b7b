"""Draw i.i.d. strings from a PFA-normal-form representation.

Random numbers come from numpy's ``PCG64`` bit generator seeded with the
user seed. Each generation step uses one uniform draw against the
cumulative distribution over ``(stop, (x, j) for x in alphabet for j in
states)`` at the current state, in that fixed order.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .wfa import LinearRepresentation, NormalFormError, PfaForm

MAX_LENGTH = 1_000_000


class GenerationError(RuntimeError):
    """A generated string exceeded the runaway-length guard."""


@dataclass(frozen=True)
class Sample:
    strings: tuple
    seed: int
    source: str = "model"

    def __len__(self):
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)


def _tables(rep: LinearRepresentation):
    d = rep.dim
    k = len(rep.alphabet)
    # columns: stop, then symbol-major blocks of next states
    rows = np.concatenate([rep.final[:, None]] + [rep.transitions[x] for x in rep.alphabet], axis=1)
    cum = np.cumsum(rows, axis=1)
    cum[:, -1] = np.maximum(cum[:, -1], 1.0)
    return np.cumsum(rep.initial), cum, d, k


def sample(pfa, n: int, seed: int, source: str = "model", max_length: int = MAX_LENGTH) -> Sample:
    if isinstance(pfa, LinearRepresentation):
        pfa = PfaForm(pfa)
    if not isinstance(pfa, PfaForm):
        raise NormalFormError("sampling needs a PFA-normal-form model")
    if n < 0:
        raise ValueError("sample size must be nonnegative")
    rep = pfa.rep
    cum_init, cum, d, _ = _tables(rep)
    cum_init = cum_init.copy()
    cum_init[-1] = max(cum_init[-1], 1.0)
    alphabet = rep.alphabet
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = [row.tolist() for row in cum]
    cum_init = cum_init.tolist()
    uniform = rng.random
    out = []
    for _ in range(n):
        state = bisect_right(cum_init, uniform())
        word = []
        while True:
            k = bisect_right(rows[state], uniform())
            if k == 0:
                break
            x, state = divmod(k - 1, d)
            word.append(alphabet[x])
            if len(word) > max_length:
                raise GenerationError(f"string exceeded {max_length} symbols; is the model a proper PFA?")
        out.append(tuple(word))
    return Sample(tuple(out), seed, source)


def empirical_distribution(s) -> dict:
    strings = list(s)
    if not strings:
        raise ValueError("empirical distribution of an empty sample")
    counts = Counter(strings)
    n = len(strings)
    return {w: c / n for w, c in counts.items()}

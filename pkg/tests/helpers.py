"""Model factories shared by the test modules."""
import numpy as np

from hankelspec.wfa import LinearRepresentation

P1 = LinearRepresentation(["a"], [1.0], {"a": [[0.5]]}, [0.5])

# 2-state PFA over {a, b}; S^(2) = 2.75.
P2 = LinearRepresentation(
    ["a", "b"], [0.7, 0.3],
    {"a": [[0.3, 0.15], [0.05, 0.1]], "b": [[0.1, 0.05], [0.3, 0.25]]},
    [0.4, 0.3],
)


def random_pfa(rng, d, alphabet=("a", "b"), min_stop=0.1):
    """Random PFA whose stop weights are >= min_stop, so rho(M_Σ) <= 1 - min_stop."""
    k = len(alphabet)
    init = rng.random(d)
    init /= init.sum()
    raw = rng.random((d, 1 + k * d))
    raw /= raw.sum(axis=1, keepdims=True)
    stop = min_stop + (1 - min_stop) * raw[:, 0]
    rest = raw[:, 1:] * ((1 - stop) / raw[:, 1:].sum(axis=1))[:, None]
    mats = {x: rest[:, i * d:(i + 1) * d] for i, x in enumerate(alphabet)}
    return LinearRepresentation(alphabet, init, mats, stop)


def random_rep(rng, d, alphabet=("a", "b"), rho=0.9):
    """Random signed representation with rho(M_Σ) = rho."""
    mats = {x: rng.standard_normal((d, d)) for x in alphabet}
    scale = rho / max(abs(np.linalg.eigvals(sum(mats.values()))))
    mats = {x: m * scale for x, m in mats.items()}
    return LinearRepresentation(alphabet, rng.standard_normal(d), mats, rng.standard_normal(d))


def brute_eval(rep, w):
    """r(w) by an explicit left-to-right product, independent of the library path."""
    v = np.array(rep.initial, dtype=float)
    for x in w:
        v = v @ np.array(rep.transitions[x])
    return float(v @ np.array(rep.final))

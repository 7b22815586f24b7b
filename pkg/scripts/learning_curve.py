"""Spectral learning error against sample size.

Learns a rank-``--rank`` model from samples of growing size in each mode and
reports the L1 error on short strings, the subspace distance to the exact
right singular vectors and the Stewart bound on the largest principal angle.
"""
import argparse
import statistics
from pathlib import Path

from hankelspec.experiments import trial_seed
from hankelspec.formats import parse_model
from hankelspec.hankel import empirical_hankel, exact_hankel, spectral_norm_diff
from hankelspec.lang import basis
from hankelspec.sampling import sample
from hankelspec.spectral import (l1_distance_upto, largest_principal_sine, learn_from_hankel, stewart_bound,
                                 subspace_distance, truncated_svd)

HERE = Path(__file__).parent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default=str(HERE / "models" / "two_state.wfa"))
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--l", type=int, default=3)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    args = ap.parse_args(argv)

    target = parse_model(args.model)
    U = basis(target.alphabet, args.l)
    print("mode,eta,N,median_l1,median_subspace_distance,median_sin,median_stewart")
    for mode, eta in [("standard", 0.0), ("prefix", 0.5), ("factor", 0.3)]:
        exact = exact_hankel(target, U, U, mode, eta)
        ref = truncated_svd(exact, args.rank)
        for n in args.sizes:
            l1, dist, sine, stew = [], [], [], []
            for t in range(args.trials):
                h = empirical_hankel(sample(target, n, trial_seed(n, t)), U, U, mode, eta)
                model = learn_from_hankel(h, args.rank, mode, eta)
                l1.append(l1_distance_upto(model.rep, target, 6))
                dist.append(subspace_distance(ref.right, model.svd.right))
                sine.append(largest_principal_sine(ref.right, model.svd.right))
                stew.append(stewart_bound(spectral_norm_diff(h, exact), ref.singular_values[-1]))
            med = statistics.median
            print(f"{mode},{eta},{n},{med(l1):.4g},{med(dist):.4g},{med(sine):.4g},{med(stew):.4g}")


if __name__ == "__main__":
    main()

"""Deterministic adversary over k and policies, plus the randomized 1-d family.

    python scripts/adversary_sweep.py --kmax 4
"""
import argparse

from rsic.adversary import randomized_1d_bound, run_deterministic_adversary, sample_randomized_1d
from rsic.algorithms import parse_policy, run_policy


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--policies", default="first_fit,last_fit,best_fit,mtf,greedy,next_fit,hybrid")
    ap.add_argument("--seeds", type=int, default=100)
    args = ap.parse_args()

    print(f"{'policy':>10} {'k':>2} {'mu':>3} {'d_prime':>7} {'alg_bins':>8} {'adv':>4} ratio")
    for k in range(1, args.kmax + 1):
        mu = 2 * k
        for name in args.policies.split(","):
            r = run_deterministic_adversary(k, mu, parse_policy(name))
            print(f"{name:>10} {k:>2} {mu:>3} {r.d_prime:>7} {r.alg_bin_count:>8} "
                  f"{r.adv_server_count:>4} {r.empirical_ratio}")

    print("\nrandomized 1-d, first_fit")
    for k, mu in [(4, 10), (10, 20), (20, 50)]:
        costs = [run_policy(sample_randomized_1d(k, mu, s), parse_policy("first_fit"),
                            trace=False)[0].total_cost for s in range(args.seeds)]
        mean = sum(costs) / len(costs)
        print(f"k={k:<3} mu={mu:<3} mean cost {mean:8.2f}  bound {randomized_1d_bound(k, mu):8.2f}")


if __name__ == "__main__":
    main()

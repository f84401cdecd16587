"""Rerun the 1-d benchmark grid under both tick orders and write CSV + SVG.

    python scripts/reproduce_tables.py --out-dir results --jobs 4
    python scripts/reproduce_tables.py --mu 1,10,100 --trials 5   # quick look
"""
import argparse
from pathlib import Path

from rsic.bench import BenchGrid, run_grid, to_csv
from rsic.plot import plot_csv

POLICIES = "next_fit,mnf,first_fit,mff,best_fit,mtf,greedy,departure,duration,hybrid,new_hybrid"


def ints(s):
    return tuple(int(x) for x in s.split(","))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--policies", default=POLICIES)
    ap.add_argument("--d", type=ints, default=(1,))
    ap.add_argument("--T", type=ints, default=(1000,))
    ap.add_argument("--mu", type=ints, default=(1, 2, 5, 10, 20, 50, 100, 200))
    ap.add_argument("--n", type=int, default=10000)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for tag, af in [("arrivals_first", True), ("departures_first", False)]:
        grid = BenchGrid(tuple(args.policies.split(",")), args.d, args.T, args.mu,
                         n=args.n, trials=args.trials, seed=args.seed, arrivals_first=af)
        rows = run_grid(grid, workers=args.jobs)
        csv_path = args.out_dir / f"table_{tag}.csv"
        csv_path.write_text(to_csv(rows))
        plot_csv(csv_path, csv_path.with_suffix(".svg"))
        print(f"# {tag}")
        for r in rows:
            print(f"{r[0]:>12} d={r[1]} T={r[2]} mu={r[3]:<4} ratio={r[9] or 'error'}")


if __name__ == "__main__":
    main()

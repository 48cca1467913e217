"""Classify and synthesize every network up to a size, writing a TSV table."""
import argparse
import sys

from majagree.synth import SweepRow, iter_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--k", default="3,4")
    ap.add_argument("--budget", type=int, default=200_000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="TSV path (default stdout)")
    args = ap.parse_args()

    out = open(args.out, "w") if args.out else sys.stdout
    fields = list(SweepRow.FIELDS) + ["wall_time"]
    out.write("\t".join(fields) + "\n")
    tallies = {}
    for row in iter_sweep(args.n_max, [int(x) for x in args.k.split(",")], args.budget, args.workers):
        d = row.to_dict(timing=True)
        out.write("\t".join(str(d[f]) for f in fields) + "\n")
        out.flush()
        key = (row.k, row.verdict, row.synth)
        tallies[key] = tallies.get(key, 0) + 1
    for (k, verdict, synth), count in sorted(tallies.items()):
        print(f"k={k} {verdict:>10} {synth:>17} {count}", file=sys.stderr)


if __name__ == "__main__":
    main()

"""Where does the refutation walk find its counterexamples?

Runs the walk on seeded random tables and prints how often each exit point
fires, the walk lengths, and how many outcomes needed the exhaustive
fallback.
"""
import argparse
from collections import Counter

from majagree.core import Network
from majagree.protocols import perturbed_identity_protocol, random_protocol
from majagree.refute import refute_by_proof


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--net", default="1,1,1,1,1")
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--rate", type=float, default=None,
                    help="perturb identity at this rate instead of drawing uniform tables")
    ap.add_argument("--no-probe", action="store_true")
    args = ap.parse_args()

    net = Network.parse(args.net, args.k)
    where, lengths, fallback = Counter(), Counter(), 0
    for seed in range(args.trials):
        if args.rate is None:
            p = random_protocol(net, seed)
        else:
            p = perturbed_identity_protocol(net, seed, args.rate)
        tr = refute_by_proof(net, p, probe_lemma=not args.no_probe)
        where[tr.counterexample.found_at] += 1
        lengths[len(tr.steps)] += 1
        fallback += tr.fallback_used
    print(f"network {net.spec()} k={net.k}, {args.trials} tables")
    for key, count in where.most_common():
        print(f"  found at {key:<17} {count}")
    print("  walk lengths", dict(sorted(lengths.items())))
    print(f"  fallback fraction {fallback / args.trials:.3f}")


if __name__ == "__main__":
    main()

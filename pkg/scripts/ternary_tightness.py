"""How tight are the bounds for three values?

For every network with n <= N, lists the UNKNOWN cases together with what
the search decides for them, and flags any network where the search
contradicts the classifier.
"""
import argparse

from majagree.bounds import classify
from majagree.core import Network
from majagree.synth import compositions, protocol_exists


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--budget", type=int, default=200_000)
    args = ap.parse_args()

    for n in range(1, args.n_max + 1):
        for sizes in compositions(n):
            net = Network(sizes, args.k)
            verdict = classify(net, with_witness=False).verdict.value
            status = protocol_exists(net, args.budget).status.value
            contradiction = (verdict, status) in {("POSSIBLE", "INFEASIBLE"), ("IMPOSSIBLE", "FEASIBLE")}
            if verdict == "UNKNOWN" or contradiction:
                flag = "  CONTRADICTION" if contradiction else ""
                print(f"{net.spec():<14} h={net.h} 4h-n={4 * net.h - n:>3} {verdict:<8} {status}{flag}")


if __name__ == "__main__":
    main()

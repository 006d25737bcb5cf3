"""Search weight-affine candidate differentials and inspect the survivors.

Run with ``python demos/search_differentials.py [ell] [dmax]`` (defaults 3 and 6).
"""

import sys

from qtroesch.search import known_family, recertify, search_differentials, validate


def main(ell=3, dmax=6):
    anchor = validate(known_family(), dmax)
    print(f"known ell=3 family: {anchor.verdict} (certified to d={dmax})")

    budget = None if ell == 3 else 20000
    summary = search_differentials(ell, dmax, budget=budget)
    print(f"\nell={ell}: examined {summary.examined} of {summary.total} candidates")
    for verdict, count in summary.counts.items():
        print(f"  {verdict:24s} {count}")
    if summary.incomplete:
        print("  (budget reached: the survivor list is partial)")

    classes = summary.gauge_classes()
    print(f"\n{len(summary.survivors)} survivors in {len(classes)} classes up to constant rescaling")
    for r in summary.survivors[:5]:
        print(f"  #{r.index}: base q^{r.ansatz.base}, coefficients {r.ansatz.coeffs}")
    print(f"\nall survivors re-certify: {all(recertify(r) for r in summary.survivors)}")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    main(*args)

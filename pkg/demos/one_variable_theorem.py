"""Walk through the one-variable 3-complexes B_d(1) and their homology.

Run with ``python demos/one_variable_theorem.py``.
"""

from qtroesch.coeff import FieldSpec, get_field
from qtroesch.line import build_B1, format_monomial
from qtroesch.ncomplex import classify
from qtroesch.troesch import proof_ladder


def show_complex(d, F):
    B = build_B1(d, F)
    print(f"B_{d}(1): graded dims {B.graded_dims()}")
    for i in B.degrees():
        for lab in B.labels(i):
            img = B.image(lab, i)
            terms = " + ".join(f"({F.fmt(c)}) {format_monomial(m)}" for m, c in img.items()) or "0"
            print(f"  deg {i}: delta {format_monomial(lab)} = {terms}")


def main():
    F = get_field(FieldSpec("cyclotomic", 3))
    show_complex(3, F)

    print("\nClassification for d <= 12:")
    for d in range(13):
        t = classify(build_B1(d, F))
        extra = f", H^0 dims {t.degree0}" if t.classification == "coresolution" else ""
        print(f"  d={d:2d}: {t.classification}{extra}")

    print("\nThe degree-0 homology of B_6(1) is spanned by:")
    for rep in build_B1(6, F).homology_representatives(1, 0):
        print("  ", {format_monomial(m): F.fmt(c) for m, c in rep.items()})

    print("\nQuotient ladder for d = 7:")
    for step in proof_ladder(7, F):
        print(f"  {step.name:6s} dims {step.dims}  class {step.table.classification}  ok={step.ok}")


if __name__ == "__main__":
    main()

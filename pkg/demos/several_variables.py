"""Several variables: structure maps, the two models of B_d(n), and the degree-0 kernel.

Run with ``python demos/several_variables.py``.
"""

from qtroesch.coeff import FieldSpec, get_field
from qtroesch.qpoly import calibrate, coproduct, exponential_iso, phi_kernel, verify_relations
from qtroesch.troesch import TroeschSpec, build_B, degree0_kernel_matches_phi, troesch_homology


def main():
    F = get_field(FieldSpec("cyclotomic", 3))

    res = calibrate(F)
    conv = res.chosen
    print(f"calibrated convention: {conv.descriptor()}")
    print(f"  all passing candidates: {[c.descriptor() for c in res.passers]}")

    print("\ncoproduct of x1*x2 into degrees (1, 1):")
    for (a, b), c in coproduct(1, 1, (1, 1), conv).items():
        print(f"  {F.fmt(c)} * x^{a} | x^{b}")

    rep = verify_relations(2, 3, conv, F)
    print(f"\nbraided relations for n=2 up to degree 3: {'all hold' if rep.passed else rep.failed()}")

    print("\nB_d(2) in the tensor model vs the direct model:")
    for d in range(5):
        tensor = build_B(TroeschSpec(d, 2))
        direct = build_B(TroeschSpec(d, 2, model="direct", convention=conv))
        iso = exponential_iso(d, 2, conv, F)
        ok = iso.is_isomorphism() and iso.is_chain_map()
        print(f"  d={d}: dims {tensor.total_dim()} / {direct.total_dim()}, exponential map is a chain iso: {ok}")

    print("\nDegree-0 homology of B_3d(n) and the kernel it should match:")
    for d, n in [(1, 2), (2, 2), (1, 3), (2, 3)]:
        t = troesch_homology(TroeschSpec(3 * d, n))
        match = degree0_kernel_matches_phi(TroeschSpec(3 * d, n))
        print(f"  d={d}, n={n}: H^0 dims {t.degree0}, kernel dim {len(phi_kernel(d, n, F))}, same subspace: {match}")


if __name__ == "__main__":
    main()

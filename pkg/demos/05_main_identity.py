"""The cross-identity between scattering coefficients and JK residues.

For the complete bipartite quiver K(l1, l2), the coefficient c_d extracted
from the logarithm of a completed ray function equals, up to the sign
(-1)^D / d!, the large-R limit of the abelianized JK residue.  Symmetric
stabilities on K(2,2) land on a wall and are rejected with a witness instead
of being silently perturbed.
"""

from fractions import Fraction as Q

from jkscatter import (DimVector, NonRegularStability, Stability,
                       bipartite_quiver, verify_main_theorem)


def check(l1, l2, dims, zetas, cutoff):
    q = bipartite_quiver(l1, l2)
    d = DimVector.make(q, dict(zip(q.vertices, dims)))
    z = Stability.make(q, {v: Q(x) for v, x in zip(q.vertices, zetas)})
    print(f"\nK({l1},{l2}), d = {dims}, zeta = {zetas}:")
    try:
        r = verify_main_theorem(l1, l2, d, z, cutoff)
    except NonRegularStability as exc:
        print(f"  non-regular stability: {exc}")
        print(f"  witness: {exc.witness}")
        return
    verdict = "PASS" if r.passed else "FAIL"
    print(f"  c_d = {r.lhs}, (-1)^D/d! * jk_ab_infinity = {r.rhs}"
          f" (D = {r.moduli_dim})  ->  {verdict}")


check(1, 1, (1, 1), (1, -1), 2)
check(2, 1, (1, 1, 1), (1, 1, -2), 4)
check(2, 2, (1, 1, 1, 1), (1, 1, -1, -1), 4)

"""Abelianized JK residues and the large-R-charge limit.

For a non-abelian dimension vector, the JK residue is a weighted sum over
blown-up quivers with all dimensions equal to one.  The weights can make the
whole sum collapse: K(1,1) with d = (2,1) cancels exactly at every scale
lambda of the R-charges.  The closed-form limit replaces each term by its
weist count.
"""

from fractions import Fraction as Q

from jkscatter import (DimVector, Stability, abelianize, bipartite_quiver,
                       jk_ab, jk_ab_infinity, lambda_sweep, weist_count)

k11 = bipartite_quiver(1, 1)
d = DimVector.make(k11, {"i1": 2, "j1": 1})
zeta = Stability.make(k11, {"i1": Q(1), "j1": Q(-2)})

print("abelianization terms for K(1,1), d = (2,1):")
for t in abelianize(k11, d, zeta):
    print(f"  coefficient {t.coefficient}: vertices {t.quiver.vertices},"
          f" {len(t.quiver.arrows)} arrows, weist count"
          f" {weist_count(t.quiver, t.stability)}")

table = lambda_sweep(k11, d, zeta, rseed=3, lambdas=[Q(1), Q(7), Q(1000)])
print("\nlambda sweep (values are exact rationals):")
for row in table["rows"]:
    print(f"  lambda = {row['lambda']}: jk_ab = {row['value']}"
          f" (|diff from limit| = {row['abs_diff']})")
print(f"  closed-form limit: {table['limit']}")

kron2_like = bipartite_quiver(2, 1)
d21 = DimVector.make(kron2_like, {v: 1 for v in kron2_like.vertices})
z21 = Stability.make(kron2_like, {"i1": Q(1), "i2": Q(1), "j1": Q(-2)})
print(f"\nK(2,1) abelian check: jk_ab = {jk_ab(kron2_like, d21, z21, rseed=2)},"
      f" limit = {jk_ab_infinity(kron2_like, d21, z21)}")

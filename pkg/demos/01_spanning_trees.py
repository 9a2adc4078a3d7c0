"""Spanning trees of small quivers and their stability coefficients.

A stability vector theta (summing to zero against the dimension vector)
assigns each spanning tree of the reduced quiver a coefficient per arrow;
the tree "counts" exactly when all coefficients are negative.  The weist
count adds up arrow-multiplicity products over the counting trees.
"""

from fractions import Fraction as Q

from jkscatter import (Quiver, Stability, bipartite_quiver, reduced_quiver,
                       spanning_trees, tree_components, weist_count)


def show(q, theta_values, label):
    qbar, mult = reduced_quiver(q)
    theta = Stability.make(qbar, {v: Q(x) for v, x in zip(qbar.vertices, theta_values)})
    print(f"\n== {label} ==")
    print(f"reduced arrows: {qbar.arrows}, multiplicities: {mult}")
    for tree in spanning_trees(qbar):
        comps = tree_components(qbar, tree, theta)
        flags = {i: str(c) for i, c in comps.items()}
        stable = all(c < 0 for c in comps.values())
        print(f"  tree {tree.arrows}: components {flags}"
              f"  ->  {'counts' if stable else 'discarded'}")
    print(f"weist count: {weist_count(q, theta)}")


kron2 = Quiver.make(["1", "2"], [("1", "2"), ("1", "2")])
show(kron2, (1, -1), "2-Kronecker, theta = (1, -1)")
show(kron2, (-1, 1), "2-Kronecker, theta = (-1, 1): nothing is stable")

k22 = bipartite_quiver(2, 2)
show(k22, (3, 1, -2, -2), "K(2,2), asymmetric theta")

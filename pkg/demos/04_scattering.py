"""Consistent completion of rank-2 scattering diagrams.

Two initial lines carry the series prod(1+s_i x) and prod(1+t_j y).  A loop
around the origin composes the wall-crossing substitutions; the completion
inserts rays in the first quadrant, order by order in parameter degree, until
the loop acts as the identity.  For a single parameter on each side the
completion is the classical pentagon: one new ray with 1 + s1 t1 x y.
"""

from jkscatter import init_bipartite, loop_product, scatter


def show(l1, l2, cutoff):
    d0 = init_bipartite(l1, l2, cutoff)
    x, y = loop_product(d0)
    print(f"\n== ({l1},{l2}) at cutoff {cutoff} ==")
    print(f"initial loop defect on x: {x}")
    d = scatter(d0)
    for w in d.walls:
        print(f"  {w.support:4} {w.direction}: {w.function}")
    x, y = loop_product(d)
    print(f"completed loop: x -> {x}, y -> {y}")


show(1, 1, 4)
show(2, 1, 3)

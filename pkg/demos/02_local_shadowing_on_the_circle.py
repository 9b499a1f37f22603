"""Positively shadowable points that are not shadowable.

The circle flow has a source x, a sink z, and a half-attracting point y.
Forward pseudo-orbits in the sink basin are traceable, but the two-sided
shapes that climb out of the source basin and cross y admit no shadow: no
true orbit from the first arc ever visits the second.
"""

from fractions import Fraction as F

from shadowdyn import (
    build_chain_graph,
    chain_recurrent_set,
    crossing_pseudo_orbit,
    fig1_circle,
    find_shadow,
    is_positively_shadowable_at,
    validate,
)

net = fig1_circle(360)
x, y, z = 0, 120, 240
print("fixed points:", [p for p in (x, y, z) if net.step(p) == p])

graph = build_chain_graph(net, F(1, 1000))
print("chain-recurrent set at delta=1/1000:", sorted(chain_recurrent_set(graph)))

# the positive test in the sink arc passes at (eps, delta) = (1/20, 1/100)
report = is_positively_shadowable_at(net, 180, F(1, 20), F(1, 100),
                                     horizon=10, budget=10 ** 7)
print("point 180:", report.verdict, "| states explored:",
      report.stamps["states"])

# both crossing shapes exist at every delta >= the net spacing and are
# never shadowed at eps below the basin gap
for variant in (1, 2):
    pts = crossing_pseudo_orbit(net, F(1, 100), variant)
    po = validate(pts, F(1, 100), net)
    witness = find_shadow(net, po, F(1, 20))
    print(f"crossing shape {variant}: {po.step_count} steps, shadow:", witness)

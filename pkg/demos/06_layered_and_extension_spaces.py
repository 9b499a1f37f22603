"""The two layered constructions.

First, isolated periodic circles accumulate on an identity base: every
layer is positively shadowable below its isolation gap while reverse
pseudo-orbits around the base admit no shadow.  Second, the extension of
the Fibonacci subshift by vertex-shift layers: the sampled map is a
bijection, each layer carries an explicitly unshadowable pseudo-orbit, and
the base keeps its positive shadowing.
"""

from fractions import Fraction as F

from shadowdyn import (
    SubstitutionLanguage,
    dense_shadowable_example,
    extension_builder,
    find_shadow,
    is_positively_shadowable_at,
    reverse_base_pseudo_orbit,
    validate,
    verify_extension_claims,
)

space = dense_shadowable_example(12)
print("layered net:", space.net.n, "points; gaps:",
      {n: str(g) for n, g in list(space.gaps.items())[:4]}, "...")

k5 = space.layers[5][0]
rep = is_positively_shadowable_at(space.net, k5, space.gaps[5] / 2,
                                  space.gaps[5] / 2, horizon=10)
print("K_5 below its gap:", rep.verdict)

pts = reverse_base_pseudo_orbit(space, F(1, 50), F(1, 40))
po = validate(pts, F(1, 40), space.net)
print("reverse base orbit of", po.step_count, "steps; shadow at eps=1/10:",
      find_shadow(space.net, po, F(1, 10)))

print()
lang = SubstitutionLanguage.fibonacci()
ext = extension_builder(lang, 4)
print("extension net:", ext.net.n, "points; map bijective:",
      sorted(ext.net.map) == list(range(ext.net.n)))
for n, lvl in ext.levels.items():
    print(f"  level {n}: {lvl.partition.cell_count} cells at window radius "
          f"{lvl.partition.window_radius}, delta_n = {lvl.partition.delta}")

claims = verify_extension_claims(ext)
print("claims (a)-(c) hold:", claims.ok)
for n, entry in claims.layer_counterexamples.items():
    pts, eps = entry
    print(f"  layer {n}: unshadowable pseudo-orbit of {len(pts) - 1} steps "
          f"at eps = {eps}")

"""Walk beta = L + bH on the projectivized bundle with weights (1, 3) and watch
the destabilizing set shrink from {S, C} to {C} to nothing."""

from fractions import Fraction

from stability_lab import CohClass, ParameterSegment, chambers, classify, format_rational, wu_bundle
from stability_lab.cones import check_modified_hypotheses

m = wu_bundle(1, (1, 3))
alpha = CohClass((1, 1))
print(m.name, "basis", m.basis, "candidates", [v.name for v in m.candidates])

# Point checks along the family
for b in ("1/20", "1/15", "1/10", "5/26", "1/5", "2/9", "1/4", "1"):
    beta = CohClass((1, Fraction(b)))
    v = classify(m, alpha, beta)
    hyp = check_modified_hypotheses(m, alpha, beta)[-1].verdict.value
    print(
        f"b={b:>5}  mu={format_rational(v.mu):>6}  Delta={format_rational(v.delta_pp):>7}"
        f"  {v.status.value:<10} Dest={list(v.dest)!s:<12} big(mu a - 2b): {hyp:<8} [{v.completeness}]"
    )

# The same walls, found exactly by the sweep
seg = ParameterSegment.checked(m, (1, Fraction(1, 20)), (1, Fraction(1, 2)))
rep = chambers(m, [alpha], seg)
print("walls in b:", rep.wall_values())
for c in rep.chambers:
    print(f"  t in ({format_rational(c.lo)}, {format_rational(c.hi)}): {c.verdicts[0]}")

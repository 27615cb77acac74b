"""Sign patterns of the divisor tests on the blow-up of P^3 at a point."""

from fractions import Fraction

from stability_lab import CohClass, blowup_pn, classify, slope
from stability_lab.geometry import intersect_on

m = blowup_pn(3)
alpha = CohClass((1, -Fraction(1, 2)))
for cls in [CohClass((-1, Fraction(1, 2))), CohClass((1, -2)), CohClass((1, -Fraction(3, 2)))]:
    tests = {v.name: intersect_on(v, [cls, alpha]) for v in m.candidates if v.dim == 2}
    print(f"class {cls}:", {k: str(x) for k, x in tests.items()})

beta = CohClass((1, -Fraction(1, 4)))
v = classify(m, alpha, beta)
print("mu =", slope(m, alpha, beta), v.status.value, "Dest", list(v.dest), f"[{v.completeness}]")

"""Central charge, lifted angle and the product form of the dHYM test."""

import math
from fractions import Fraction

from stability_lab import CohClass, central_charge, complementary_lifted_angle, dhym_test, wu_bundle
from stability_lab.dhym import dhym_hypothesis_check

m = wu_bundle(1, (1, 3))
alpha, beta = CohClass((1, 1)), CohClass((1, Fraction(1, 3)))
z = central_charge(m, alpha, beta)
ang = complementary_lifted_angle(z, m.dim)
print("Z =", z, " phi_hat =", ang.phi_hat, f"({ang.phi_hat / math.pi:.4f} pi)")
for v in m.candidates:
    t = dhym_test(m, alpha, beta, ang.phi_hat, v)
    print(f"  {v.name:>3} p={t.p} value={t.value:+.6f} product={t.product_value:+.6f} rel.err={t.rel_error:.1e}")
h = dhym_hypothesis_check(m, alpha, beta, ang.phi_hat)
print("hypotheses ok:", h.ok, list(h.failures))

"""Roots of the degree-p parts Q_p and the factor classes alpha - r_p beta."""

from fractions import Fraction

from stability_lab import CohClass, classify_gma, factorize, wu_bundle
from stability_lab.gma import inverse_hessian, q_polynomial

coeffs = [1, 1]
fd = factorize(coeffs)
for p in (1, 2):
    print(f"Q_{p} coefficients (x^0 .. x^{p}):", q_polynomial(p, coeffs).to_json())
    print(f"  r_{p} = {fd.root(p)}  (~{float(fd.root(p)):.6f})")
    print("  quotient:", [q.to_json() for q in fd.factorizations[p - 1].quotient.coeffs])

m = wu_bundle(1, (1, 3))
alpha, beta = CohClass((1, 1)), CohClass((1, Fraction(1, 10)))
v = classify_gma(m, alpha, beta, coeffs)
print("c_n solved to", v.coeffs.c_n, "->", v.status.value, "Dest", list(v.dest))
for p, verdict in v.tau_verdicts:
    print(f"  tau_{p} in modified:{p + 1}: {verdict.value}")

ih = inverse_hessian(m, alpha, beta, 2)
print("inverse Hessian k=2: kappa =", ih.kappa, " r_2 ~", float(ih.factors.root(2)))

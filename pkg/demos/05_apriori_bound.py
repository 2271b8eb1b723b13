"""How large can L'(|U|^p) get compared with ||U||^p E_a(T)?

E_a(T) grows like T^(-a) for a < 0, like log T for a = 0 and stays bounded
for a > 0. Two things support that bound here. One is the closed-form
integrals I_+ and I_-, which are checked against quadrature. The other is
the worst ratio over random fields supported in the cone, which should stay
bounded as T doubles.
"""

import numpy as np

from wavelife.apriori import E_a, I_minus, I_plus, branch_bounds, verify_apriori

print("E_a(2, R=1):", {a: round(E_a(2.0, 1.0, a), 6) for a in (-1, 0, 1)})
print("I_+(1, 3; a=0) =", I_plus(1.0, 3.0, 0.0), " log(3.5/2) =", np.log(1.75))
print("symmetry I_+(-x,t) - I_-(x,t):", I_plus(-0.7, 2.5, 0.3) - I_minus(0.7, 2.5, 0.3))

for a in (-1.0, 0.0, 1.0):
    b4, b8 = branch_bounds(a, 4.0), branch_bounds(a, 8.0)
    r4, r8 = verify_apriori(a, 4.0, samples=50), verify_apriori(a, 8.0, samples=50)
    print(f"a={a:+}: branch maxima T=4 {np.round(list(b4.values()), 3)}, T=8 {np.round(list(b8.values()), 3)}; "
          f"worst ratio {r4.worst_ratio:.4f} -> {r8.worst_ratio:.4f}")

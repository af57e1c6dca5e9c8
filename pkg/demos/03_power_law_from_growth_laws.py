# From two growth laws to one power law
# -------------------------------------
# Host and parasite each follow a logistic law. Eliminating time between
# the two laws links them exactly:
#
#     H/(K1 - H) = C1 * (P/(K2 - P))^(b1/b2),   C1 = exp(b1 (t2* - t1*)).
#
# While both technologies are still far below their equilibria this
# collapses to an allometric power law P = A * H^B whose exponent is just
# the ratio of growth rates, B = b2/b1 -- the quantity the log-log
# regression estimates from data.

import numpy as np

from parasitech import LogisticParams, derive_power_law, logistic_value

host = LogisticParams(k=100.0, a=6.0, b=0.05)      # inflection at t = 120
parasite = LogisticParams(k=50.0, a=6.96, b=0.087)  # inflection at t = 80

law = derive_power_law(host, parasite)
print(f"B  = b2/b1          = {law.b:.4f}")
print(f"C1 = exp(b1(t2-t1)) = {law.c1:.6f}")
print(f"A  = K2 (C1 K1)^-B  = {law.a:.6f}")

# Check the small-value power law against the exact curves: sample both
# while they sit below 1% of their equilibria and regress log P on log H.
t = np.linspace(-60.0, 40.0, 200)
h = logistic_value(host, t)
p = logistic_value(parasite, t)
mask = (h < 0.01 * host.k) & (p < 0.01 * parasite.k)
slope, intercept = np.polyfit(np.log(h[mask]), np.log(p[mask]), 1)
print("\nlog-log straight line through the exact early-phase curves:")
print(f"  slope     = {slope:.5f}   (derived B     = {law.b:.5f})")
print(f"  intercept = {intercept:.5f}   (derived log A = {np.log(law.a):.5f})")

# Outside the early phase the power law is only an approximation; the
# exact eliminated relation keeps holding everywhere.
t_mid = np.array([60.0, 100.0, 140.0])
h_mid = logistic_value(host, t_mid)
p_mid = logistic_value(parasite, t_mid)
lhs = h_mid / (host.k - h_mid)
rhs = law.c1 * (p_mid / (parasite.k - p_mid)) ** (host.b / parasite.b)
print("\nexact relation at mid/late phase (lhs vs rhs):")
for tv, a_side, b_side in zip(t_mid, lhs, rhs):
    print(f"  t = {tv:5.1f}:  {a_side:10.6f}  vs  {b_side:10.6f}")

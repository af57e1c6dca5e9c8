# The evolution scale
# -------------------
# A parasitic subsystem (camera module, tractor engine, ...) advances at
# some rate relative to its host technology. The log-log slope B of the
# parasite's functional measure on the host's is the evolutionary
# coefficient, and its position against 1 grades the whole complex system:
#
#   B < 1  parasitism  -> underdevelopment   (the system improves slowly)
#   B = 1  mutualism   -> steady growth
#   B > 1  symbiosis   -> development        (likely to evolve rapidly)

from parasitech import classify_point, classify_with_test

print("Exact classification of a few estimated coefficients:")
for b in (0.23, 0.35, 1.0, 1.19, 1.74, 1.89):
    cls = classify_point(b)
    print(
        f"  B = {b:5.2f}  ->  grade {cls.grade} [{cls.symbol}]  "
        f"{cls.mode:<12} {cls.evolution_label}"
    )

# An estimated coefficient comes with a standard error. Whether B is
# meaningfully different from 1 is a t-test question: with a slope of 1.05
# and a fat standard error, "proportional growth" cannot be rejected.
print("\nStatistical classification (test of B = 1):")
for b, se, n in ((1.74, 0.11, 44), (1.05, 0.20, 10), (0.97, 0.01, 51)):
    cls = classify_with_test(b, se, n, alpha=0.05)
    t = cls.test
    print(
        f"  B = {b:.2f} (se {se:.2f}, n {n:2d}):  t = {t.t_stat:+6.2f}, "
        f"p = {t.p_value:.4f}  ->  grade {cls.grade} ({cls.mode})"
    )

print("\nForecast attached to each grade:")
for b in (0.5, 1.0, 2.0):
    cls = classify_point(b)
    print(f"  grade {cls.grade}: {cls.prediction}")

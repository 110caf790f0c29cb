"""Closed-form cost model vs. cycle-accurate simulation: exact agreement.

Given a target (approximant K to P digits) and a datapath profile, the
analytic model predicts the result shape (K_res, P_res), the store capacity
(P_max, K_max), and the exact cycle count T = T1 + T2 + T3.  The same numbers
fall out of driving the scheduling FSM cycle by cycle.
"""

from sdengine import (DatapathProfile, HAS_MULTIPLIER, HAS_DIVIDER,
                      k_res, p_res, capacity, compute_time,
                      simulate_compute_cycles, condition_number_2x2)

K, P, delta = 100, 2048, 5
print("target: approximant K=%d to P=%d digits, online delay %d" % (K, P, delta))
print("  K_res =", k_res(K, P, delta), " P_res =", p_res(K, P, delta))
print("  store capacity (U=8, D=2^17): (P_max, K_max) =", capacity(8, 2 ** 17))

prof = DatapathProfile(5, 2, HAS_MULTIPLIER, 8)
t, t1, t2, t3 = compute_time(prof, K, P)
print("  cycles: T = %d  (fill %d + digits %d + carries %d)" % (t, t1, t2, t3))

print("\nanalytic == simulated, spot checks:")
for kind, delta, beta in ((HAS_MULTIPLIER, 3, 2), (HAS_DIVIDER, 4, 1)):
    for (kk, pp, U) in ((2, 16, 4), (4, 32, 8), (3, 25, 2)):
        prof = DatapathProfile(delta, beta, kind, U)
        a = compute_time(prof, kk, pp)[0]
        s = simulate_compute_cycles(prof, kk, pp)
        print("  %-10s K=%d P=%2d U=%d : analytic %6d  simulated %6d  %s"
              % (kind, kk, pp, U, a, s, "ok" if a == s else "MISMATCH"))

print("\nconditioning of the near-singular benchmark family:")
from fractions import Fraction
for m in (1, 3, 6):
    off = 1 - Fraction(1, 2 ** m)
    print("  m=%d: kappa = %s  (= 2^%d - 1)"
          % (m, condition_number_2x2([[1, off], [off, 1]]), m + 1))

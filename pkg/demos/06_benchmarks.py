"""Benchmarks: digit-budgeting vs. a fixed-precision reference, and elision.

1. An ill-conditioned 2x2 Jacobi system and a Newton square-root iteration
   both converge on the digit-streaming engine with eta = 2^-6, while an
   8-fractional-bit conventional fixed-point iteration provably loops.
2. Don't-change digit elision: as the accuracy target tightens, skipping the
   stable leading digits of successive approximants saves more cycles and
   more peak memory, at identical digit output.
"""

from fractions import Fraction

from sdengine import (JacobiProblem, NewtonProblem, LsdFixedConfig,
                      jacobi_solve, newton_solve, lsd_fixed_solve)

eta = Fraction(1, 64)

off = 1 - Fraction(1, 8)                 # m = 3: condition number 15
jac = JacobiProblem([[1, off], [off, 1]],
                    [Fraction(1, 2), Fraction(1, 2)], eta=eta)
rep = jacobi_solve(jac)
ref = lsd_fixed_solve(jac, LsdFixedConfig(8))
print("Jacobi m=3, eta=2^-6:")
print("  engine  : converged=%s  K=%d P=%d  cycles=%d"
      % (rep.converged, rep.K, rep.P, rep.run.total_cycles))
print("  LSD-8   : converged=%s after %d iterations (state repeats)"
      % (ref["converged"], ref["iterations"]))

newt = NewtonProblem(16, eta=eta)        # sqrt(3/16) from the generic guess
rep = newton_solve(newt)
ref = lsd_fixed_solve(newt, LsdFixedConfig(8))
print("Newton a=16, eta=2^-6:")
print("  engine  : converged=%s  x=%s" % (rep.converged, rep.solution()[0]))
print("  LSD-8   : converged=%s after %d iterations"
      % (ref["converged"], ref["iterations"]))

print("\nelision trend, Newton a=7:")
print("  %-8s %10s %10s %8s %8s %8s" % ("eta", "plain", "elision",
                                        "speedup", "mem", "psi_max"))
for e in (16, 32, 64, 128):
    eta = Fraction(1, 2 ** e)
    plain = newton_solve(NewtonProblem(7, eta=eta), elision=False)
    elided = newton_solve(NewtonProblem(7, eta=eta), elision=True)
    assert plain.converged and elided.converged
    print("  2^-%-5d %10d %10d %8.3f %8.3f %8d"
          % (e, plain.run.total_cycles, elided.run.total_cycles,
             plain.run.total_cycles / elided.run.total_cycles,
             plain.run.peak_words / elided.run.peak_words,
             max(elided.run.psi.values())))

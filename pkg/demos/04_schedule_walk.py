"""The zig-zag schedule: precision and iteration refined together.

Digits are produced in groups of delta (the online delay), walking diagonals
over (approximant k, digit i): each diagonal extends every live approximant
by one group and starts one new approximant.  Elision pointers (psi) let the
walk skip digits known to repeat the predecessor's.
"""

from sdengine import replay_schedule

delta = 3


def render(visits, psi=None):
    kmax = max(k for k, _ in visits)
    imax = max(i for _, i in visits)
    order = {v: n for n, v in enumerate(visits)}
    for k in range(1, kmax + 1):
        row = []
        for i in range(imax + 1):
            if (k, i) in order:
                row.append("%3d" % order[(k, i)])
            elif psi and i < psi.get(k, 0):
                row.append("  ~")          # elided: inherited, never generated
            else:
                row.append("  .")
        print("  k=%d |%s" % (k, "".join(row)))


print("generation order, delta = %d (entries are time steps):" % delta)
render(replay_schedule(delta, 0, 8, 30))

print("\nwith elision psi_3 = 3: the walk defers approximant 3 one diagonal")
print("and snaps (2,5) -> (1,9); approximant 3 starts directly at i = 3:")
render(replay_schedule(delta, 0, 8, 30, elision_enabled=True,
                       psi_table={3: 3}),
       psi={3: 3})

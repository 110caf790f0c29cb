"""Cantor-pairing memory: an unbounded 2-D digit space in one flat RAM.

Digit i of approximant k lives in chunk c = floor(i/U); the chunk sits at
flat address cpf(k, c) = (k+c)(k+c+1)/2 + c.  The pairing is a bijection, so
no address is ever wasted, and running out of depth is exactly the capacity
limit the closed-form analysis predicts.
"""

import sys

from sdengine import cpf, CpfStore, StoreConfig, MemoryExhausted, capacity

print("pairing layout (rows k, columns c):")
for k in range(5):
    print("  k=%d:" % k, [cpf(k, c) for c in range(6)])

store = CpfStore(StoreConfig(4, 32), name="demo")
for i, d in enumerate([1, 0, -1, 1, 0, 0, 1, -1]):
    store.write_digit(2, i, d)
print("\ndigits of approximant 2 written; store dump:")
store.dump_csv(sys.stdout)

# elision shifts addressing: digit psi+j reuses the address of digit j
store.write_digit(5, 9, -1, psi=6)
print("\ndigit 9 of approximant 5 under psi=6 landed at address",
      cpf(5, (9 - 6) // 4))

# exhaustion is an address bound, not a guess
tiny = CpfStore(StoreConfig(8, 7), name="tiny")
try:
    tiny.write(2, 1, [0] * 8)
except MemoryExhausted as e:
    print("\n%s" % e)

p_max, k_max = capacity(8, 2 ** 17)
print("\ncapacity of a U=8, D=2^17 store: P_max=%d digits, K_max=%d approximants"
      % (p_max, k_max))

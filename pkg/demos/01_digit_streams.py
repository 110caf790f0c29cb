"""Signed-digit streams: prefix refinement without carry propagation.

A radix-2 signed-digit vector (digits -1/0/+1, most significant first) can be
extended one digit at a time: every prefix is a valid approximation and no
appended digit ever invalidates an earlier one.
"""

from fractions import Fraction

from sdengine import (DigitVector, rational_to_digit_stream, otf_convert,
                      prefix_error_bound)

r = Fraction(3, 14)
stream = rational_to_digit_stream(r, 16)
print("target      :", r, "~", float(r))
print("digit stream:", stream.to_string())

v = DigitVector()
for q, d in enumerate(stream, start=1):
    v.append(d)
    err = abs(v.value() - r)
    assert err <= prefix_error_bound(q)
    if q in (2, 4, 8, 16):
        print("  prefix %2d -> %-12s error %s <= 2^-%d"
              % (q, str(v.value()), str(err), q))

# redundancy: many digit strings denote the same value
a = DigitVector.from_string("+-")    # 1/2 - 1/4
b = DigitVector.from_string("0+")    # 0 + 1/4
print("\n'+-' and '0+' both denote", a.value(), "==", b.value())

# on-the-fly conversion to a conventional binary string, MSD first,
# without ever running a carry-propagation pass
print("otf convert :", otf_convert(stream))

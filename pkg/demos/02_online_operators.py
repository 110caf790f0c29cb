"""Online arithmetic: results stream out while operands stream in.

Each operator consumes one digit per operand per step and emits one result
digit after a fixed online delay (serial add 2, multiply 3, divide 4).  The
emitted prefix is always within 2^-q of the true result after q digits.
"""

from fractions import Fraction

from sdengine import (rational_to_digit_stream, value_of,
                      serial_add, online_multiply, online_divide,
                      MulState, mul_step)

n = 24
x = list(rational_to_digit_stream(Fraction(1, 3), n))
y = list(rational_to_digit_stream(Fraction(1, 7), n))

print("x = 1/3 :", "".join("+0-"[1 - d] for d in x))
print("y = 1/7 :", "".join("+0-"[1 - d] for d in y))

z = serial_add(x, y)
print("\nadd     :", "".join("+0-"[1 - d] for d in z),
      "=", value_of(z), "(1/3 + 1/7 = 10/21)")

z = online_multiply(x, y, n)
print("mul     :", "".join("+0-"[1 - d] for d in z),
      "~", float(value_of(z)), "(1/21 ~ %.6f)" % (1 / 21))

# divide: operands pre-scaled into the divider's region
xd = list(rational_to_digit_stream(Fraction(1, 3), n + 4))
yd = list(rational_to_digit_stream(Fraction(7, 8), n + 4))
z = online_divide(xd, yd, n)
print("div     :", "".join("+0-"[1 - d] for d in z),
      "~", float(value_of(z)), "(8/21 ~ %.6f)" % (8 / 21))

# the step-level view: digits in, digit (or warm-up None) out, every step
print("\nmultiplier, step by step (first 8 steps):")
st = MulState()
for j in range(8):
    st, d = mul_step(st, x[j], y[j])
    print("  step %d: in (%+d, %+d) -> out %s" % (j, x[j], y[j], d))

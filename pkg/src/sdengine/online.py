"""Classical fixed-precision online operators (MSD-first, radix 2).

All four operators consume one signed digit per operand per step and produce
output digits after a fixed online delay:

    parallel add   0 cycles of added datapath delay (operates on stored words)
    serial add     2
    multiply       3
    divide         4

The multiplier and divider follow the textbook online recurrences

    mul:  v = 2w + 2^-3 (x*y_j + y*x_j),  z_{j-3} = sel_mul(v),  w = v - z
    div:  v = 2w + 2^-4 (x_j - z*y_j),    z_{j-4} = sel_div(v),  w = v - z*y

with the stated line order treated as normative: y_j is appended to the y
vector *before* v is computed, x_j is appended *after*; the divider appends
the emitted digit to z after the w update.  All arithmetic is exact: the
vectors and residual are kept as integers under a power-of-two scale, so the
selection comparisons are exact integer comparisons (the software equivalent
of inspecting a bounded window with guard digits).

Warm-up: digits with negative output index are never emitted; selection is
suppressed (digit forced to 0) during warm-up so the emitted prefix carries
the full value.  This is sound under the operator preconditions below, which
the solver layer is responsible for establishing by operand scaling:

    mul:  every prefix product must satisfy |x_pref * y_pref| <= 3/4
          (guaranteed e.g. by |x|, |y| <= sqrt(3)/2 for non-redundant streams)
    div:  divisor y in [1/2, 1) and positive, |x| <= y - 1/4

Residual boundedness is asserted on every step.
"""

from fractions import Fraction

from .digits import check_digit


def sel_mul(v):
    """Multiplier digit selection: 1 if v >= 1/2, 0 if -1/2 <= v < 1/2, else -1."""
    v = Fraction(v)
    if v >= Fraction(1, 2):
        return 1
    if v >= Fraction(-1, 2):
        return 0
    return -1


def sel_div(v):
    """Divider digit selection: 1 if v >= 1/4, 0 if -1/4 <= v < 1/4, else -1."""
    v = Fraction(v)
    if v >= Fraction(1, 4):
        return 1
    if v >= Fraction(-1, 4):
        return 0
    return -1


# ---------------------------------------------------------------------------
# addition: shared transfer/interim-sum recoding
# ---------------------------------------------------------------------------
#
# Position sums h = x_i + y_i in [-2, 2] are rewritten as h = 2t + s with the
# transfer t absorbed one position up (more significant).  The choice for
# |h| == 1 looks at the sign of the next (less significant) position sum so
# that s and the incoming transfer can never overflow:
#
#     z_i = s_i + t_{i+1}  is always in {-1, 0, 1}.

def _recode(h, next_sign):
    """Split a position sum h into (transfer, interim sum), h = 2t + s."""
    if h == 2:
        return 1, 0
    if h == 1:
        return (1, -1) if next_sign >= 0 else (0, 1)
    if h == 0:
        return 0, 0
    if h == -1:
        return (0, -1) if next_sign >= 0 else (-1, 1)
    if h == -2:
        return -1, 0
    raise ValueError("position sum out of range: %r" % (h,))


class SerialAdderState:
    """Digit-serial online adder, delay 2.

    Keeps the two one-digit delay registers of the serial adder network: the
    pending position sum (whose recoding awaits the next position's sign) and
    the pending interim sum (awaiting its incoming transfer).
    """

    def __init__(self):
        self.j = 0            # digits consumed
        self.pending_h = 0    # h_{j-1}, recoded once sign(h_j) is known
        self.pending_s = 0    # s_{j-2}, combined with t_{j-1} to give z_{j-2}

    def copy(self):
        s = SerialAdderState()
        s.j, s.pending_h, s.pending_s = self.j, self.pending_h, self.pending_s
        return s


def serial_add_step(state, xd, yd):
    """Feed one digit pair; returns (state, digit or None).

    Outputs appear from the third step on: after feeding x_0..x_j, y_0..y_j
    the emitted digits are z_0..z_{j-2} of a signed-digit expansion of
    x + y.  Inputs must be pre-scaled so the sum lies in (-1, 1) with no
    integer transfer out of the leading position (e.g. both operands in
    (-1/2, 1/2) with a leading 0 digit); an unabsorbable leading transfer
    raises OverflowError.
    """
    check_digit(xd)
    check_digit(yd)
    h = xd + yd
    out = None
    if state.j == 0:
        state.pending_h = h
    else:
        t_prev, s_prev = _recode(state.pending_h, 1 if h > 0 else (-1 if h < 0 else 0))
        if state.j == 1:
            if t_prev != 0:
                raise OverflowError("sum overflows the (-1, 1) digit range")
        else:
            out = state.pending_s + t_prev
            assert out in (-1, 0, 1)
        state.pending_s = s_prev
        state.pending_h = h
    state.j += 1
    return state, out


def serial_add(x_digits, y_digits):
    """Add two equal-length digit streams; returns a list of output digits.

    Drives serial_add_step over the streams plus two flush steps, so the
    output has the same length as the inputs and represents x + y exactly.
    """
    if len(x_digits) != len(y_digits):
        raise ValueError("operand streams must have equal length")
    state = SerialAdderState()
    out = []
    for xd, yd in zip(x_digits, y_digits):
        state, z = serial_add_step(state, xd, yd)
        if z is not None:
            out.append(z)
    for _ in range(2):
        state, z = serial_add_step(state, 0, 0)
        if z is not None:
            out.append(z)
    return out


class ParallelAdderRow:
    """Width-P combinational online adder over stored digit windows.

    A window is added in one modeled cycle; no state is kept between calls.
    Carries between windows are a (transfer, position-sum-sign) digit pair, so
    chunked vectors are added least-significant chunk first with the carry
    pair chained toward the most significant chunk.
    """

    def __init__(self, width):
        if width < 1:
            raise ValueError("width must be positive")
        self.width = width

    def add(self, xw, yw, carry_in=(0, 0)):
        return parallel_add(xw, yw, carry_in)


def parallel_add(xw, yw, carry_in=(0, 0)):
    """Add two digit windows; returns (z_window, carry_out).

    carry_in is the (transfer, sign) pair produced by the less significant
    neighboring window, (0, 0) at the least significant end.  carry_out is
    this window's pair for the more significant neighbor.  Output digit i
    depends only on the neighboring position sums inside the window and the
    carry pair -- there is no carry chain across the window.
    """
    if len(xw) != len(yw):
        raise ValueError("windows must have equal length")
    t_in, sign_in = carry_in
    h = [check_digit(a) + check_digit(b) for a, b in zip(xw, yw)]
    n = len(h)
    t = [0] * (n + 1)
    s = [0] * n
    t[n] = t_in
    for i in range(n):
        next_sign = (1 if h[i + 1] > 0 else (-1 if h[i + 1] < 0 else 0)) if i + 1 < n else sign_in
        t[i], s[i] = _recode(h[i], next_sign)
    z = [s[i] + t[i + 1] for i in range(n)]
    assert all(d in (-1, 0, 1) for d in z)
    carry_out = (t[0], 1 if h[0] > 0 else (-1 if h[0] < 0 else 0)) if n else carry_in
    return z, carry_out


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------

class MulState:
    """Online multiplier state: integer images of the x, y, w vectors.

    After j steps the x and y prefixes have value X/2^j and Y/2^j and the
    residual W carries the difference to the emitted prefix at scale 2^(2j):

        x_pref * y_pref = Z/2^(j-3) + W/2^(2j)

    which ties the residual bound to prefix accuracy and is what
    exact_prefix_product() reconstructs.
    """

    def __init__(self):
        self.j = 0
        self.X = 0
        self.Y = 0
        self.W = 0
        self.Z = 0          # emitted digits (warm-up zeros included)
        self.trace = None   # optional list collecting per-step records

    def copy(self):
        s = MulState()
        s.j, s.X, s.Y, s.W, s.Z = self.j, self.X, self.Y, self.W, self.Z
        return s

    def exact_prefix_product(self):
        """Exact product of the consumed operand prefixes."""
        j = self.j
        # emitted value + residual below the last emitted digit's weight
        z_val = Fraction(self.Z, 1 << max(j - 3, 0)) if j else Fraction(0)
        w_val = Fraction(self.W, 1 << (2 * j)) if j else Fraction(0)
        return z_val + w_val


def mul_step(state, xd, yd):
    """Feed one digit pair into the multiplier; returns (state, digit or None).

    Executes one iteration of the online multiply recurrence: y_j joins the
    y vector before v is computed, x_j after.  The first emitted digit (z_0)
    appears on the fourth step; earlier selections are suppressed to zero,
    which is exact under the documented prefix-product precondition.
    """
    check_digit(xd)
    check_digit(yd)
    j = state.j
    state.Y = 2 * state.Y + yd
    # v = 2w + 2^-3 (x*y_j + y*x_j), as an integer at scale 2^(j+4)
    V = 4 * state.W + 2 * state.X * yd + state.Y * xd
    half = 1 << (j + 3)
    if j < 3:
        z = 0  # warm-up: digits z_{j-3}, j < 3, are never part of the result
    else:
        z = 1 if V >= half else (-1 if V < -half else 0)
    state.W = V - z * (half << 1)
    assert abs(state.W) <= 3 * (half >> 1), "multiplier residual out of bounds"
    state.X = 2 * state.X + xd
    state.Z = 2 * state.Z + z
    if state.trace is not None:
        state.trace.append({"op": "mul", "j": j, "xd": xd, "yd": yd,
                            "v": str(Fraction(V, half << 1)), "z": z})
    state.j = j + 1
    return state, (z if j >= 3 else None)


def online_multiply(x_digits, y_digits, p):
    """Multiply two digit streams, returning the first p output digits.

    Operand streams are zero-padded past their provided length, so the
    result is an exact-prefix product of the stream values.
    """
    state = MulState()
    out = []
    for j in range(p + 3):
        xd = x_digits[j] if j < len(x_digits) else 0
        yd = y_digits[j] if j < len(y_digits) else 0
        state, z = mul_step(state, xd, yd)
        if z is not None:
            out.append(z)
    return out


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

class DivState:
    """Online divider state: integer images of the y, w, z vectors.

    Divisor must be positive with magnitude in [1/2, 1); the numerator must
    satisfy |x| <= y - 1/4 so the warm-up digits are exactly zero.  Negative
    divisors are handled by the caller negating both operands.
    """

    def __init__(self):
        self.j = 0
        self.Y = 0
        self.W = 0
        self.Z = 0
        self.trace = None

    def copy(self):
        s = DivState()
        s.j, s.Y, s.W, s.Z = self.j, self.Y, self.W, self.Z
        return s

    def exact_prefix_quotient_parts(self):
        """(emitted value, residual value, divisor prefix value), exact.

        The residual satisfies x_pref - z_val * y_pref = W/2^(2j-1), so the
        emitted prefix tracks the quotient of the consumed prefixes.
        """
        j = self.j
        z_val = Fraction(self.Z, 1 << max(j - 4, 0)) if j else Fraction(0)
        w_val = Fraction(self.W, 1 << max(2 * j - 1, 0)) if j else Fraction(0)
        y_val = Fraction(self.Y, 1 << j) if j else Fraction(0)
        return z_val, w_val, y_val


def div_step(state, xd, yd):
    """Feed one numerator/divisor digit pair; returns (state, digit or None).

    One iteration of the online divide recurrence; the emitted digit joins
    the z vector after the w update.  First result digit (z_0) appears on the
    fifth step; warm-up selections are suppressed to zero (exact under the
    numerator precondition).
    """
    check_digit(xd)
    check_digit(yd)
    j = state.j
    state.Y = 2 * state.Y + yd
    # v = 2w + 2^-4 (x_j - z*y_j), as an integer at scale 2^(j+4)
    V = 4 * state.W + xd * (1 << j) - 16 * state.Z * yd
    quarter = 1 << (j + 2)
    if j < 4:
        z = 0
    else:
        z = 1 if V >= quarter else (-1 if V < -quarter else 0)
    # w = v - z*y at the same scale; y enters at scale 2^(j+1) -> factor 8
    state.W = V - z * 8 * state.Y
    assert abs(state.W) < (1 << (j + 4)), "divider residual out of bounds"
    state.Z = 2 * state.Z + z
    if state.trace is not None:
        state.trace.append({"op": "div", "j": j, "xd": xd, "yd": yd,
                            "v": str(Fraction(V, 1 << (j + 4))), "z": z})
    state.j = j + 1
    return state, (z if j >= 4 else None)


def online_divide(x_digits, y_digits, p):
    """Divide two digit streams, returning the first p quotient digits."""
    state = DivState()
    out = []
    for j in range(p + 4):
        xd = x_digits[j] if j < len(x_digits) else 0
        yd = y_digits[j] if j < len(y_digits) else 0
        state, z = div_step(state, xd, yd)
        if z is not None:
            out.append(z)
    return out

"""Radix-2 signed-digit representation and exact-rational plumbing.

Digits take values in {-1, 0, +1}.  A digit vector is an MSD-first sequence
where digit index i carries weight 2^(-i-1), so every vector's value lies in
the open interval (-1, 1).  Appending digits refines the value without ever
invalidating an earlier digit (prefix stability), which is what makes
most-significant-digit-first streaming possible in the first place.

The exact-rational oracle used throughout the test suite is just
fractions.Fraction; a thin alias is exported so call sites read uniformly.
"""

from fractions import Fraction

# Exact rational values.  Canonical form (gcd == 1, positive denominator) is
# maintained by Fraction itself.
ExactRational = Fraction

VALID_DIGITS = (-1, 0, 1)

_DIGIT_CHARS = {1: "+", 0: "0", -1: "-"}
_CHAR_DIGITS = {"+": 1, "0": 0, "-": -1}


def check_digit(d):
    """Validate a signed digit, returning it unchanged."""
    if d not in VALID_DIGITS:
        raise ValueError("signed digit must be -1, 0 or +1, got %r" % (d,))
    return d


def digit_to_pair(d):
    """Encode a digit as the hardware (plus, minus) bit pair, d = plus - minus.

    The (1, 1) encoding is never produced (it is the redundant zero).
    """
    check_digit(d)
    return (1, 0) if d == 1 else ((0, 1) if d == -1 else (0, 0))


def pair_to_digit(plus, minus):
    """Decode a (plus, minus) bit pair; (1, 1) normalizes to 0."""
    if plus not in (0, 1) or minus not in (0, 1):
        raise ValueError("bit-pair components must be 0 or 1")
    return plus - minus if (plus, minus) != (1, 1) else 0


class DigitVector:
    """An MSD-first vector of signed digits, value in (-1, 1).

    Internally a plain list of small ints plus an incrementally maintained
    integer numerator: after n appended digits the value is ``num / 2**n``.
    """

    __slots__ = ("digits", "num")

    def __init__(self, digits=()):
        self.digits = []
        self.num = 0
        for d in digits:
            self.append(d)

    def append(self, d):
        check_digit(d)
        self.digits.append(d)
        self.num = 2 * self.num + d

    def extend(self, ds):
        for d in ds:
            self.append(d)

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __iter__(self):
        return iter(self.digits)

    def __eq__(self, other):
        if isinstance(other, DigitVector):
            return self.digits == other.digits
        return NotImplemented

    def __repr__(self):
        return "DigitVector(%r)" % (self.to_string(),)

    def value(self):
        """Exact value, Sum digits[i] * 2^(-i-1)."""
        return Fraction(self.num, 1 << len(self.digits))

    # -- serialization ----------------------------------------------------

    def to_string(self):
        """MSD-first string over {+, 0, -}, e.g. '+0-+'."""
        return "".join(_DIGIT_CHARS[d] for d in self.digits)

    @classmethod
    def from_string(cls, s):
        try:
            return cls(_CHAR_DIGITS[c] for c in s)
        except KeyError as e:
            raise ValueError("invalid digit character %s" % (e,)) from None

    def to_bit_pairs(self):
        """(plus, minus) arrays for JSON traces: {'plus': [...], 'minus': [...]}."""
        pairs = [digit_to_pair(d) for d in self.digits]
        return {"plus": [p for p, _ in pairs], "minus": [m for _, m in pairs]}

    @classmethod
    def from_bit_pairs(cls, obj):
        plus, minus = obj["plus"], obj["minus"]
        if len(plus) != len(minus):
            raise ValueError("plus/minus arrays differ in length")
        return cls(pair_to_digit(p, m) for p, m in zip(plus, minus))


def value_of(v):
    """Exact value of a digit vector (or any iterable of digits)."""
    if isinstance(v, DigitVector):
        return v.value()
    total, n = 0, 0
    for d in v:
        check_digit(d)
        total = 2 * total + d
        n += 1
    return Fraction(total, 1 << n)


def rational_to_digit_stream(r, count):
    """First `count` digits of a signed-digit expansion of r, |r| < 1.

    The expansion is the non-redundant binary expansion of |r| with every
    digit negated when r < 0, so |value(result) - r| <= 2^(-count).
    """
    r = Fraction(r)
    if abs(r) >= 1:
        raise ValueError("operand out of range: |%s| >= 1" % (r,))
    if count < 0:
        raise ValueError("count must be nonnegative")
    sign = -1 if r < 0 else 1
    x = abs(r)
    out = DigitVector()
    for _ in range(count):
        x *= 2
        if x >= 1:
            x -= 1
            out.append(sign)
        else:
            out.append(0)
    return out


def otf_convert(v):
    """On-the-fly conversion to a non-redundant fixed-point string.

    Maintains the Q and Q-ulp forms incrementally, selecting between them on
    each appended digit -- no full carry-propagation pass ever runs.  Returns
    a string like '.01' (= 1/4) or '-.01' (= -1/4); the sign flag plus the
    magnitude bits are the two's-complement-equivalent fixed-point result.
    """
    # a holds the magnitude bits of the value so far, am holds a - ulp
    # (valid whenever sign != 0).  Each appended digit only shift-appends one
    # of the two registers; once the value is nonzero its magnitude can never
    # return to zero (2*a - 1 >= 1), so the sign is settled by the first
    # nonzero digit seen from a zero state.
    sign = 0      # sign of the running value; 0 while the value is exactly 0
    a = []        # bits of |value|
    am = []       # bits of |value| - ulp
    for d in v:
        check_digit(d)
        if sign == 0:
            if d == 0:
                a = a + [0]
            else:
                sign = d
                a = [0] * len(a) + [1]
                am = [0] * len(a)
        else:
            e = d * sign  # digit as seen by the magnitude
            if e == 1:
                a, am = a + [1], a + [0]
            elif e == 0:
                a, am = a + [0], am + [1]
            else:
                a, am = am + [1], am + [0]
    bits = "".join(str(b) for b in a)
    return ("-." + bits) if sign < 0 else ("." + bits)


def prefix_error_bound(q):
    """Max |value(full) - value(prefix_q)| over all completions: 2^(-q)."""
    if q < 0:
        raise ValueError("prefix length must be nonnegative")
    return Fraction(1, 1 << q)

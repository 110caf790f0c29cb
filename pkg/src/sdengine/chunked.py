"""Arbitrary-precision chunked online multiplier and divider.

These are the store-backed counterparts of the classical operators in
`online`: operand, residual and result vectors live in CpfStore memories as
width-U words addressed by the Cantor pairing of (approximant, chunk).  Each
consumed digit triggers a sweep over the live chunks -- one sweep per digit
for multiplication, two for division -- which is what the per-digit cycle
counts model.

The emitted digit sequence is identical to the classical operator run at the
same precision.  Digit selection inspects the exact accumulated value (the
full residual is available in software; the selection thresholds are dyadic,
so the decision matches a hardware implementation that inspects the head
chunk plus bounded guard information).  Inter-chunk carries of the sweep are
subsumed by the exact accumulation: the residual is written back as balanced
base-2^U limbs, one word per chunk, which is the software image of the
carry-chained chunk words.

Shadow stepping (used for don't-change digit elision) advances the unit's
arithmetic state without touching the stores or charging cycles: elided
digits are known to equal the previous approximant's, so the hardware never
recomputes or stores them.
"""

from .digits import check_digit


def _to_sd_word(s, U):
    """Balanced signed-digit word (MSD first) for an integer |s| < 2^(U-1) + 1."""
    digits = []
    for _ in range(U):
        d = s % 2
        if d and s < 0:
            d = -1
        s = (s - d) // 2
        digits.append(d)
    assert s == 0, "limb does not fit in a U-digit word"
    digits.reverse()
    return digits


def _from_sd_word(word):
    v = 0
    for d in word:
        v = 2 * v + d
    return v


def _slice_limbs(value, nbits, U):
    """Balanced base-2^U limbs (most significant first) of a scaled integer.

    `value` is an integer at scale 2^nbits; limbs are padded so the least
    significant limb boundary aligns with the scale, plus one guard limb for
    the balanced-digit headroom.
    """
    n_limbs = (nbits + U - 1) // U + 1
    m = value << (n_limbs * U - nbits)
    limbs = []
    half = 1 << (U - 1)
    for _ in range(n_limbs):
        r = m % (1 << U)
        if r > half or (r == half and m < 0):
            r -= 1 << U
        limbs.append(r)
        m = (m - r) >> U
    assert m == 0, "value does not fit in the computed limb count"
    limbs.reverse()
    return limbs


class ArchMulUnit:
    """Chunked online multiplier for one approximant's digit stream.

    `stores` is a mapping with CpfStore instances under keys 'x', 'y', 'w',
    'v' shared across approximants; `k` selects this unit's address row and
    `psi` is the elision pointer shifting that row's chunk addressing.
    """

    DELAY = 3

    def __init__(self, stores, k, U, psi=0):
        self.stores = stores
        self.k = k
        self.U = U
        self.psi = psi
        self.j = 0
        self.X = 0
        self.Y = 0
        self.W = 0
        self.Z = 0
        self.trace = None

    def exact_prefix_product(self):
        from fractions import Fraction
        j = self.j
        z_val = Fraction(self.Z, 1 << max(j - 3, 0)) if j else Fraction(0)
        w_val = Fraction(self.W, 1 << (2 * j)) if j else Fraction(0)
        return z_val + w_val

    def _sweep_writeback(self, V, W):
        """Write the post-step residual/accumulator limbs, one word per chunk."""
        j, U, k, psi = self.j, self.U, self.k, self.psi
        for name, val, bits in (("v", V, j + 6), ("w", W, j + 5)):
            store = self.stores[name]
            limbs = _slice_limbs(val, bits, U)
            for c, limb in enumerate(reversed(limbs)):
                store.write(k, c, _to_sd_word(limb, U))

    def step(self, xd, yd, shadow=False):
        """Consume one digit pair; returns (digit or None, cycles).

        cycles is the modeled sweep cost for this digit: one generation cycle
        plus max(0, floor(j/U) - 1) chunk-accumulation cycles.  Shadow steps
        cost nothing and leave the stores untouched.
        """
        check_digit(xd)
        check_digit(yd)
        j, U, k, psi = self.j, self.U, self.k, self.psi
        self.Y = 2 * self.Y + yd
        if not shadow and j >= psi:
            self.stores["y"].write_digit(k, j, yd, psi)
        V = 4 * self.W + 2 * self.X * yd + self.Y * xd
        half = 1 << (j + 3)
        if j < 3:
            z = 0
        else:
            z = 1 if V >= half else (-1 if V < -half else 0)
        self.W = V - z * (half << 1)
        assert abs(self.W) <= 3 * (half >> 1), "multiplier residual out of bounds"
        self.X = 2 * self.X + xd
        self.Z = 2 * self.Z + z
        if not shadow:
            if j >= psi:
                self.stores["x"].write_digit(k, j, xd, psi)
            self._sweep_writeback(V, self.W)
        if self.trace is not None and not shadow:
            self.trace.append({"op": "arch_mul", "k": k, "j": j, "z": z,
                               "cycles": 1 + max(0, j // U - 1)})
        self.j = j + 1
        cycles = 0 if shadow else 1 + max(0, j // U - 1)
        return (z if j >= 3 else None), cycles


class ArchDivUnit:
    """Chunked online divider for one approximant's digit stream.

    `stores` holds CpfStore instances under keys 'y', 'w', 'z', 'v'.  The
    divisor stream must be positive in [1/2, 1) and the numerator must
    satisfy |x| <= y - 1/4 (callers scale operands; see `online`).
    """

    DELAY = 4

    def __init__(self, stores, k, U, psi=0):
        self.stores = stores
        self.k = k
        self.U = U
        self.psi = psi
        self.j = 0
        self.Y = 0
        self.W = 0
        self.Z = 0
        self.trace = None

    def _sweep_writeback(self, V, W):
        j, U, k = self.j, self.U, self.k
        for name, val, bits in (("v", V, j + 6), ("w", W, j + 5)):
            store = self.stores[name]
            limbs = _slice_limbs(val, bits, U)
            for c, limb in enumerate(reversed(limbs)):
                store.write(k, c, _to_sd_word(limb, U))

    def step(self, xd, yd, shadow=False):
        """Consume one numerator/divisor digit pair; returns (digit or None, cycles).

        Two chunk sweeps per digit (one forming the accumulator, one updating
        the residual), hence cycles = 1 + max(0, 2*floor(j/U) - 1).
        """
        check_digit(xd)
        check_digit(yd)
        j, U, k, psi = self.j, self.U, self.k, self.psi
        self.Y = 2 * self.Y + yd
        if not shadow and j >= psi:
            self.stores["y"].write_digit(k, j, yd, psi)
        V = 4 * self.W + xd * (1 << j) - 16 * self.Z * yd
        quarter = 1 << (j + 2)
        if j < 4:
            z = 0
        else:
            z = 1 if V >= quarter else (-1 if V < -quarter else 0)
        self.W = V - z * 8 * self.Y
        assert abs(self.W) < (1 << (j + 4)), "divider residual out of bounds"
        self.Z = 2 * self.Z + z
        if not shadow:
            if j >= 4 and j - 4 >= psi:
                self.stores["z"].write_digit(k, j - 4, z, psi)
            self._sweep_writeback(V, self.W)
        if self.trace is not None and not shadow:
            self.trace.append({"op": "arch_div", "k": k, "j": j, "z": z,
                               "cycles": 1 + max(0, 2 * (j // U) - 1)})
        self.j = j + 1
        cycles = 0 if shadow else 1 + max(0, 2 * (j // U) - 1)
        return (z if j >= 4 else None), cycles


def arch_mul_digit(unit, xd, yd):
    """One multiplier digit step; returns (digit or None, cycles)."""
    return unit.step(xd, yd)


def arch_div_digit(unit, xd, yd):
    """One divider digit step; returns (digit or None, cycles)."""
    return unit.step(xd, yd)

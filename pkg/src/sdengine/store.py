"""Flat digit-vector memory addressed by the Cantor pairing of (approximant, chunk).

Each architectural digit vector gets one CpfStore: a width-U, depth-D word
memory.  Digit index i of approximant k lives in chunk c = floor(i/U) at word
offset u = i mod U, and the chunk is stored at address cpf(k, c).  The pairing
bijection packs the unbounded two-dimensional (approximant, chunk) space into
linear addresses with no waste, so memory exhaustion -- an address falling at
or beyond D -- is exactly the capacity limit the analysis module predicts.

Under don't-change digit elision, approximant k's first psi_k digits are
never stored; addressing shifts down by psi so no words are wasted on elided
chunks (the elision-aware chunk index c_hat = floor((i - psi)/U), which
reduces to the baseline at psi = 0).
"""

import csv

from .digits import check_digit, _DIGIT_CHARS


class MemoryExhausted(Exception):
    """An access fell outside the configured store depth.

    Signals that the (K_max, P_max) capacity of the store is reached.
    """

    def __init__(self, store_name, k, c, address, depth):
        super().__init__(
            "store %r exhausted: (k=%d, c=%d) -> address %d >= depth %d"
            % (store_name, k, c, address, depth))
        self.store_name = store_name
        self.k = k
        self.c = c
        self.address = address
        self.depth = depth


def cpf(k, c):
    """Cantor pairing (k + c)(k + c + 1)/2 + c, a bijection N^2 -> N."""
    if k < 0 or c < 0:
        raise ValueError("cpf arguments must be nonnegative")
    s = k + c
    return s * (s + 1) // 2 + c


def cpf_hat(k, i, psi, U):
    """Elision-aware address of digit index i: cpf(k, floor((i - psi)/U)).

    psi leading digits of approximant k are elided and must never be
    addressed (i >= psi required).  At psi = 0 this is the baseline
    cpf(k, floor(i/U)).
    """
    if i < psi:
        raise ValueError("digit index %d is below the elision pointer %d" % (i, psi))
    return cpf(k, (i - psi) // U)


class StoreConfig:
    """RAM geometry: U digits per word, D words per stored variable."""

    def __init__(self, U, D):
        if U < 1:
            raise ValueError("word width U must be positive")
        if D < 1:
            raise ValueError("depth D must be positive")
        self.U = U
        self.D = D

    def __repr__(self):
        return "StoreConfig(U=%d, D=%d)" % (self.U, self.D)


class CpfStore:
    """One stored digit vector: D words of U signed digits each.

    Words are zero-initialized: reading a never-written word returns a word
    of zeros.  The store counts distinct words ever written (peak usage) for
    the memory reports, and every access is depth-checked.
    """

    def __init__(self, config, name="store"):
        self.config = config
        self.name = name
        self._words = {}   # address -> (k, c, list of U digits)

    # -- word-granular access ---------------------------------------------

    def _address(self, k, c):
        a = cpf(k, c)
        if a >= self.config.D:
            raise MemoryExhausted(self.name, k, c, a, self.config.D)
        return a

    def read(self, k, c):
        a = self._address(k, c)
        entry = self._words.get(a)
        return list(entry[2]) if entry else [0] * self.config.U

    def write(self, k, c, word):
        if len(word) != self.config.U:
            raise ValueError("word must have exactly U=%d digits" % self.config.U)
        for d in word:
            check_digit(d)
        a = self._address(k, c)
        self._words[a] = (k, c, list(word))

    # -- digit-granular access (elision-aware) -----------------------------

    def read_digit(self, k, i, psi=0):
        a = cpf_hat(k, i, psi, self.config.U)
        if a >= self.config.D:
            raise MemoryExhausted(self.name, k, (i - psi) // self.config.U, a, self.config.D)
        entry = self._words.get(a)
        return entry[2][(i - psi) % self.config.U] if entry else 0

    def write_digit(self, k, i, d, psi=0):
        check_digit(d)
        U = self.config.U
        c = (i - psi) // U
        a = cpf_hat(k, i, psi, U)
        if a >= self.config.D:
            raise MemoryExhausted(self.name, k, c, a, self.config.D)
        entry = self._words.get(a)
        word = entry[2] if entry else [0] * U
        word[(i - psi) % U] = d
        self._words[a] = (k, c, word)

    # -- banked window read -------------------------------------------------

    def alternating_bank_read3(self, k, i, psi=0):
        """Digits i-1, i, i+1 of approximant k in one modeled cycle.

        Consecutive addresses alternate between two banks (by address
        parity), so the at-most-two words the window spans are always in
        different banks and can be fetched together.  Requires U >= 2;
        boundary digits outside the stored precision read as zero.
        """
        if self.config.U < 2:
            raise ValueError("banked window reads require U >= 2")
        out = []
        banks = set()
        for idx in (i - 1, i, i + 1):
            if idx < psi:
                out.append(0)
                continue
            a = cpf_hat(k, idx, psi, self.config.U)
            banks.add(a)
            out.append(self.read_digit(k, idx, psi))
        assert len({a % 2 for a in banks}) == len(banks) or len(banks) <= 2, \
            "window spans more than one word per bank"
        return out

    # -- accounting / inspection --------------------------------------------

    @property
    def words_used(self):
        """Distinct words ever written (the peak-usage counter)."""
        return len(self._words)

    def dump_csv(self, fileobj):
        """Memory dump: one row (address, k, c, word-as-signed-digit-string)."""
        writer = csv.writer(fileobj)
        writer.writerow(["address", "k", "c", "word"])
        for a in sorted(self._words):
            k, c, word = self._words[a]
            writer.writerow([a, k, c, "".join(_DIGIT_CHARS[d] for d in word)])

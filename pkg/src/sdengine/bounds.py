"""Closed-form accuracy, capacity and compute-time model.

Given a target result (iteration K, precision P digits) and a datapath
profile, these pure functions predict the shape of the full computation:

* K_res / P_res: the schedule refines earlier approximants beyond P so that
  approximant K can reach P digits; K_res total approximants exist at
  termination and approximant 1 (always the most precise) ends with
  P_res = p(1) digits.
* P_max / K_max: the capacity the Cantor-pairing stores of depth D can hold.
* T = T1 + T2 + T3: exact cycle count with elision disabled --
  T1 pipeline-fill cycles (delta per diagonal), T2 digit-generation and
  chunk-accumulation cycles (closed forms per datapath kind), T3 serial-adder
  carry cycles (zero with parallel adders).

`simulate_compute_cycles` is the mechanistic counterpart: it drives the
scheduling FSM and counts cycles action by action.  The analytic model must
match it exactly; the test suite checks this over a grid of targets.
"""

import math
from fractions import Fraction

from .schedule import ScheduleState, schedule_step, Generate, ACCUMULATION

ADDERS_ONLY = "adders-only"
HAS_MULTIPLIER = "multiplier"
HAS_DIVIDER = "divider"

_ALPHA = {ADDERS_ONLY: 0, HAS_MULTIPLIER: 1, HAS_DIVIDER: 2}


class DatapathProfile:
    """Static description of an iteration datapath.

    delta: total online delay (highest cumulative delay through the circuit).
    beta: number of serial adders on the maximum-delay path (carry cycles).
    kind: the slowest operator present, which fixes the chunk-accumulation
    factor alpha (0 adders-only / 1 multiplier / 2 divider).
    parallel_adders: parallel carry handling removes T3 entirely.
    """

    def __init__(self, delta, beta, kind, U, parallel_adders=False):
        if kind not in _ALPHA:
            raise ValueError("unknown datapath kind %r" % (kind,))
        if delta < 2 or beta < 0 or U < 1:
            raise ValueError("invalid datapath profile")
        self.delta = delta
        self.beta = beta
        self.kind = kind
        self.U = U
        self.parallel_adders = parallel_adders

    @property
    def alpha(self):
        return _ALPHA[self.kind]

    def __repr__(self):
        return ("DatapathProfile(delta=%d, beta=%d, kind=%r, U=%d, "
                "parallel_adders=%r)" % (self.delta, self.beta, self.kind,
                                         self.U, self.parallel_adders))


class Target:
    """A target result: approximant K to P digits, optionally an accuracy eta.

    The analytic model applies to (K, P) targets; eta-based stopping is a
    solver-side rule (the solver reports the (K, P) it actually reached).
    """

    def __init__(self, K, P, eta=None):
        if K < 1 or P < 1:
            raise ValueError("target requires K >= 1 and P >= 1")
        self.K = K
        self.P = P
        self.eta = eta

    def __repr__(self):
        return "Target(K=%d, P=%d, eta=%r)" % (self.K, self.P, self.eta)


def k_res(K, P, delta):
    """Total approximants refined so approximant K reaches P digits."""
    if P > delta:
        return -(-P // delta) + K - 1
    return K


def p_of_k(k, K, P, delta, kres=None):
    """Digits of approximant k at termination; p(1) is P_res.

    Approximants before K overshoot by delta digits per extra diagonal;
    approximant K stops exactly at P; later approximants only exist because
    the zig-zag visits them on the final diagonals.
    """
    if kres is None:
        kres = k_res(K, P, delta)
    if not 1 <= k <= kres:
        raise ValueError("approximant index %d outside 1..%d" % (k, kres))
    if k < K:
        return delta * (-(-P // delta) + K - k)
    if k == K:
        return P
    return delta * (kres - k)


def p_res(K, P, delta):
    return p_of_k(1, K, P, delta)


def capacity(U, D):
    """(P_max, K_max) storable in depth-D, width-U Cantor-pairing stores.

    P_max = U(1 + floor((3/2)(sqrt(1 + (8/9)D) - 1))), evaluated exactly:
    the floor equals (isqrt(9 + 8D) - 3) // 2.  K_max gains one extra
    approximant when the depth also covers the next pairing row,
    D >= (P_max/U + 1) * P_max / (2U).
    """
    if U < 1 or D < 1:
        raise ValueError("U and D must be positive")
    t = (math.isqrt(9 + 8 * D) - 3) // 2
    p_max = U * (1 + t)
    n = p_max // U
    if Fraction(n + 1, 1) * Fraction(p_max, 2 * U) <= D:
        k_max = n + 1
    else:
        k_max = n
    return p_max, k_max


def _digit_cost_sum(p, alpha, U):
    """Sum over i in [0, p) of (1 + alpha*floor(i/U)), in closed form.

    This is the per-digit generation cost: one cycle plus alpha chunk-sweep
    cycles for each stored chunk beyond the first.  Equals the per-operator
    closed forms: with n = ceil(p/U), multiplier n(p - U(n-1)/2) and divider
    p(2n - 1) - U n(n - 1).
    """
    q, r = divmod(p, U)
    floor_sum = U * q * (q - 1) // 2 + r * q
    return p + alpha * floor_sum


def compute_time(profile, K, P):
    """Exact cycle count (T, T1, T2, T3) with elision disabled.

    T1: delta pipeline-fill cycles entering each of the K_res diagonals.
    T2: digit generation plus chunk accumulation, summed over the initial
        guess stream (p(0) = p(1) + delta digits) and every approximant;
        delta of the guess stream's cycles coincide with the first fill.
    T3: serial-adder carry cycles, 2*beta*(d-1) on diagonal d plus a final
        2*beta*(K-1) drain; zero with parallel adders.
    """
    delta, alpha, U = profile.delta, profile.alpha, profile.U
    kres = k_res(K, P, delta)
    t1 = delta * kres
    p0 = p_of_k(1, K, P, delta, kres) + delta
    t2 = _digit_cost_sum(p0, alpha, U) - delta
    for k in range(1, kres + 1):
        t2 += _digit_cost_sum(p_of_k(k, K, P, delta, kres), alpha, U)
    if profile.parallel_adders:
        t3 = 0
    else:
        t3 = profile.beta * (kres * kres - kres + 2 * K - 2)
    return t1 + t2 + t3, t1, t2, t3


def simulate_compute_cycles(profile, K, P):
    """Cycle count from driving the scheduling FSM to the target (K, P).

    Charging rules, applied action by action:
      * entering a diagonal costs delta fill cycles, plus 2*beta*(d-1)
        serial-adder carry cycles on diagonal d;
      * every Generate and every accumulation Stall is one cycle;
      * approximant 1 streams the initial guess: its digit i demands guess
        digit i + delta, costing 1 + alpha*floor((i+delta)/U); the first
        delta guess digits are consumed during the first fill, so only their
        accumulation portion is charged;
      * after the final digit of approximant K, the serial adders drain for
        2*beta*(K-1) cycles.
    """
    delta, alpha, U, beta = profile.delta, profile.alpha, profile.U, profile.beta
    if profile.parallel_adders:
        beta = 0
    s = ScheduleState(delta, alpha, U)
    cycles = delta                      # fill of diagonal 1
    for g in range(delta):              # guess digits streamed during the fill
        cycles += alpha * (g // U)
    diag = 1
    done = False
    while not done:
        d_now = s.diagonals             # diagonal this step runs on
        s, action = schedule_step(s)
        cycles += 1
        if isinstance(action, Generate):
            if d_now != diag:           # first digit of a new diagonal
                diag = d_now
                cycles += delta + 2 * beta * (diag - 1)
            if action.k == 1:
                g = action.i + delta
                cycles += 1 + alpha * (g // U)
            if action.k == K and action.i == P - 1:
                done = True
    while s.mode == ACCUMULATION:       # drain the last digit's sweeps
        s, action = schedule_step(s)
        cycles += 1
    cycles += 2 * beta * (K - 1)        # final carry drain
    return cycles


def condition_number_2x2(a):
    """2-norm condition number of a nonsingular 2x2 matrix.

    Exact (Fraction) for symmetric matrices whose eigenvalue discriminant is
    a perfect square -- which covers the near-singular benchmark family
    [[1, 1 - 2^-m], [1 - 2^-m, 1]] with kappa = 2^(m+1) - 1 -- and a float
    otherwise (singular values via the Gram matrix).
    """
    (a11, a12), (a21, a22) = a
    a11, a12, a21, a22 = (Fraction(v) for v in (a11, a12, a21, a22))
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise ValueError("matrix is singular")
    if a12 == a21:
        tr, dsc = a11 + a22, (a11 - a22) ** 2 + 4 * a12 * a12
        root = _exact_sqrt(dsc)
        lam1, lam2 = (tr + root) / 2, (tr - root) / 2
        return max(abs(lam1), abs(lam2)) / min(abs(lam1), abs(lam2))
    # general case: singular values from A^T A
    g11 = a11 * a11 + a21 * a21
    g12 = a11 * a12 + a21 * a22
    g22 = a12 * a12 + a22 * a22
    tr, dsc = g11 + g22, (g11 - g22) ** 2 + 4 * g12 * g12
    root = _exact_sqrt(dsc)
    return _exact_sqrt((tr + root) / (tr - root))


def _exact_sqrt(x):
    """sqrt of a nonnegative Fraction, exact when it is rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative operand")
    pn, pd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return Fraction(math.sqrt(x))

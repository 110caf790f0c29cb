"""Benchmark solvers: 2x2 Jacobi and Newton's method for f(x) = a*x^2 - 3.

Both benchmarks run the full architectural model: the zig-zag scheduler
drives digit generation approximant by approximant, emitted digits are
written into Cantor-pairing stores (psi-shifted under elision), and cycles
are charged with exactly the rules of the analytic compute-time model.

Digit selection is the reference model of the hardware output stage: digit i
of approximant k+1 is selected by comparing the exact value of the iteration
map, applied to the predecessor's first i + delta + 1 digits, against the
digits emitted so far.  The residual r satisfies |r| <= 2^(-i) throughout
because the iteration maps are Lipschitz with constant < 2^delta over the
operating ranges (|c_a| < 1 for Jacobi with delta = 3; |1/2 - c/y^2| < 4 for
Newton with delta = 4), so a valid digit always exists.  The chunked
multiplier/divider units compute the same streams digit-identically (they
share the recurrences tested against these operators); the solver keeps the
selection in one place rather than re-plumbing the per-unit residuals.

Accuracy targets: an eta-mode solve first finds the smallest iteration K
whose exact-arithmetic iterate has residual < eta/2, sizes the precision P so
the prefix truncation cannot push the residual past eta, runs the engine at
(K, P), and then checks the emitted digits' exact residual -- the converged
flag is never assumed, always measured.
"""

import json
import time
from fractions import Fraction

from .digits import (DigitVector, rational_to_digit_stream, value_of,
                     _DIGIT_CHARS)
from .store import StoreConfig, CpfStore, MemoryExhausted
from .schedule import (ScheduleState, schedule_step, schedule_emit,
                       schedule_advance, Generate, ACCUMULATION,
                       update_elision_pointer)
from .bounds import k_res, p_of_k, DatapathProfile, HAS_MULTIPLIER, HAS_DIVIDER


class NotDiagonallyDominant(ValueError):
    """The Jacobi system matrix is not strictly diagonally dominant."""


def _ceil_log2(x):
    """Smallest integer e with 2^e >= x, for a positive Fraction."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("positive operand required")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** e < x:
        e += 1
    while e > 0 and Fraction(2) ** (e - 1) >= x:
        e -= 1
    return e


def parse_exact(text):
    """Parse '2^-k', 'p/q', integer or decimal strings into a Fraction.

    Decimal strings are parsed exactly (no binary float round-trip).
    """
    text = str(text).strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        return Fraction(int(base)) ** int(exp)
    return Fraction(text)


# ---------------------------------------------------------------------------
# problem definitions


class JacobiProblem:
    """2x2 linear system solved by Jacobi iteration.

    The iteration is x_i' = (b_i - a_ij * x_j) / a_ii, i.e. per component
    x_i' = c_a_i * x_j + c_b_i with c_a_i = -a_ij/a_ii and c_b_i = b_i/a_ii.
    Strict diagonal dominance (|a_ii| > |a_ij|) guarantees |c_a_i| < 1 and
    convergence.  A power-of-two scale g maps the system onto streams in
    (-1, 1): the engine solves for x/2^g and the report unscales.
    """

    def __init__(self, A, b, x0=(0, 0), eta=None):
        (a00, a01), (a10, a11) = A
        self.A = [[Fraction(a00), Fraction(a01)], [Fraction(a10), Fraction(a11)]]
        self.b = [Fraction(b[0]), Fraction(b[1])]
        self.x0 = [Fraction(x0[0]), Fraction(x0[1])]
        self.eta = None if eta is None else Fraction(eta)
        A = self.A
        if not (abs(A[0][0]) > abs(A[0][1]) and abs(A[1][1]) > abs(A[1][0])):
            raise NotDiagonallyDominant(
                "Jacobi requires |a_ii| > sum of off-diagonal magnitudes")
        self.c_a = [-A[0][1] / A[0][0], -A[1][0] / A[1][1]]
        self.c_b = [self.b[0] / A[0][0], self.b[1] / A[1][1]]
        # scale so constants and all iterates stay well inside (-1, 1)
        amax = max(abs(c) for c in self.c_a)
        bound = max(abs(c) for c in self.c_b) / (1 - amax)
        bound = max(bound, abs(self.x0[0]), abs(self.x0[1]))
        g = 0
        while bound / 2 ** g > Fraction(3, 4):
            g += 1
        self.scale = g

    def n_lanes(self):
        return 2

    def delta(self):
        return 3

    def profile(self, U):
        return DatapathProfile(3, 2, HAS_MULTIPLIER, U, parallel_adders=True)

    def guess_values(self):
        g = self.scale
        return [self.x0[0] / 2 ** g, self.x0[1] / 2 ** g]

    def est(self, lane, pred_vals):
        """Iteration map on scaled streams: x_i' = c_a_i * x_j + c_b_i / 2^g."""
        other = pred_vals[1 - lane]
        return self.c_a[lane] * other + self.c_b[lane] / 2 ** self.scale

    def unscale(self, scaled_vals):
        return [v * 2 ** self.scale for v in scaled_vals]

    def residual(self, x):
        """Exact infinity-norm residual ||A x - b|| in problem scale."""
        A, b = self.A, self.b
        r0 = A[0][0] * x[0] + A[0][1] * x[1] - b[0]
        r1 = A[1][0] * x[0] + A[1][1] * x[1] - b[1]
        return max(abs(r0), abs(r1))

    def sensitivity(self):
        """Residual change per unit change of one scaled stream value."""
        A = self.A
        norm = max(abs(A[0][0]) + abs(A[0][1]), abs(A[1][0]) + abs(A[1][1]))
        return norm * 2 ** self.scale

    def exact_step(self, x):
        """One exact iteration step on scaled stream values."""
        return [self.est(0, x), self.est(1, x)]


class NewtonProblem:
    """Newton's method for f(x) = a*x^2 - 3, iteration x' = x/2 + 3/(2ax).

    The engine solves for y = x / 2^s with the power-of-two exponent s chosen
    so the fixed point y* = sqrt(3/a) / 2^s lies in [1/2, 1); then
    y' = y/2 + c/y with c = 3 / (2a * 4^s) = (y*)^2 / 2 in [1/8, 1/2), which
    keeps the divider operands in range (divisor in [1/2, 1) once converged,
    numerator below the divisor minus 1/4 after halving).
    """

    def __init__(self, a, x0=None, eta=None):
        self.a = Fraction(a)
        if self.a <= 0:
            raise ValueError("coefficient a must be positive")
        self.eta = None if eta is None else Fraction(eta)
        # smallest s with 3/a < 4^s and 3/a >= 4^(s-1)
        target = Fraction(3) / self.a
        s = 0
        while Fraction(4) ** s <= target:
            s += 1
        while Fraction(4) ** (s - 1) > target:
            s -= 1
        self.s = s
        self.c = Fraction(3) / (2 * self.a * Fraction(4) ** s)
        if not Fraction(1, 8) <= self.c < Fraction(1, 2):
            raise ValueError("divisor-range violation: scaling misconfigured")
        if x0 is None:
            # the generic initial guess: the midpoint of the scaled range,
            # i.e. x0 = 2^s * 1/2; quadratic convergence recovers the rest
            y0 = Fraction(1, 2)
        else:
            y0 = Fraction(x0) / Fraction(2) ** s
            if not Fraction(1, 4) < y0 < 1:
                raise ValueError("initial guess out of the scaled range")
        self.y0 = y0

    def n_lanes(self):
        return 1

    def delta(self):
        return 4

    def profile(self, U):
        return DatapathProfile(4, 1, HAS_DIVIDER, U, parallel_adders=True)

    def guess_values(self):
        return [self.y0]

    def est(self, lane, pred_vals):
        y = pred_vals[0]
        # digit prefixes are strictly below 1; the closed upper end only
        # occurs for exact iterates ramping down from the generic 1/2 guess
        if not Fraction(1, 4) < y <= 1:
            raise ValueError("divisor-range violation: predecessor prefix "
                             "%s outside (1/4, 1]" % (y,))
        return y / 2 + self.c / y

    def unscale(self, scaled_vals):
        return [scaled_vals[0] * Fraction(2) ** self.s]

    def residual(self, x):
        """|f(x)| = |a x^2 - 3| in problem scale (x is the 1-vector)."""
        return abs(self.a * x[0] * x[0] - 3)

    def sensitivity(self):
        return 2 * self.a * Fraction(4) ** self.s

    def exact_step(self, y):
        return [self.est(0, y)]


def make_toy_iteration(eta=None):
    """The scalar demo x' = 1/4 - x/6 embedded as a symmetric 2x2 system.

    Both components follow the same recurrence from x0 = 0: approximant 1 is
    exactly 1/4, approximant 2 is 5/24, and the fixed point is 3/14.
    """
    A = [[1, Fraction(1, 6)], [Fraction(1, 6), 1]]
    b = [Fraction(1, 4), Fraction(1, 4)]
    return JacobiProblem(A, b, eta=eta)


# ---------------------------------------------------------------------------
# the engine


class _Stream:
    """One approximant's digit stream for one lane, with O(1) prefix values."""

    __slots__ = ("digits", "nums")

    def __init__(self):
        self.digits = []
        self.nums = [0]

    def append(self, d):
        self.digits.append(d)
        self.nums.append(2 * self.nums[-1] + d)

    def prefix_value(self, length):
        if length > len(self.digits):
            raise IndexError("prefix of %d digits requested, %d available"
                             % (length, len(self.digits)))
        return Fraction(self.nums[length], 1 << length)

    def value(self):
        return self.prefix_value(len(self.digits))


class EngineRun:
    """Raw result of one scheduled run: digits, psi pointers, cycles, memory."""

    def __init__(self):
        self.streams = {}       # k -> list of _Stream per lane
        self.psi = {}           # k -> elision pointer
        self.cycles = {"fill": 0, "digit": 0, "guess": 0, "adder": 0}
        self.diagonals = 0
        self.kres = 0
        self.peak_words = 0
        self.exhausted = None   # MemoryExhausted, if the stores overflowed
        self.early_stable = False

    @property
    def total_cycles(self):
        return sum(self.cycles.values())


def run_engine(problem, K, P, U=8, D=2 ** 17, elision=False):
    """Drive the scheduler to target (K, P) digits and collect everything.

    Cycle charging matches the analytic model exactly when elision is off:
    delta fill cycles per diagonal, one cycle per generated digit plus the
    FSM's accumulation stalls, the initial-guess stream at the same per-digit
    cost (its first delta digits ride the first fill), and serial-adder
    cycles of 2*beta per prior diagonal plus a final drain (zero here: both
    benchmark datapaths use parallel adders).
    """
    profile = problem.profile(U)
    delta, alpha, beta = profile.delta, profile.alpha, profile.beta
    if profile.parallel_adders:
        beta = 0
    lanes = problem.n_lanes()
    kres = k_res(K, P, delta)
    run = EngineRun()
    run.kres = kres

    stores = [CpfStore(StoreConfig(U, D), name="lane%d" % lane)
              for lane in range(lanes)]

    # initial guess: approximant 0, streamed non-redundantly
    p1 = p_of_k(1, K, P, delta, kres)
    guess_len = p1 + delta
    guess = []
    try:
        for lane, gv in enumerate(problem.guess_values()):
            st = _Stream()
            for i, d in enumerate(rational_to_digit_stream(gv, guess_len)):
                st.append(d)
                stores[lane].write_digit(0, i, d)
            guess.append(st)
    except MemoryExhausted as e:
        run.exhausted = e
        run.peak_words = sum(st.words_used for st in stores)
        return run
    run.streams[0] = guess
    run.psi[0] = 0

    s = ScheduleState(delta, alpha, U)
    run.cycles["fill"] = delta
    for g in range(delta):
        run.cycles["guess"] += alpha * (g // U)
    diag_seen = 1
    run.diagonals = 1

    def refresh_psi():
        """Recompute the pending approximant's elision pointer (delta-aligned)."""
        k0 = max(run.streams) + 1
        if k0 > kres or k0 < 2:
            return None
        if s.k == k0:
            # the FSM already committed a start position for k0; the pointer
            # is frozen from here on
            return None
        m = min(_common_prefix(run.streams[k0 - 1][lane].digits,
                               run.streams[k0 - 2][lane].digits)
                for lane in range(lanes))
        s.psi_table[k0] = delta * (max(0, m - delta) // delta)
        return k0

    def materialize(k):
        psi_k = s.psi(k) if elision else 0
        run.psi[k] = psi_k
        prev = run.streams[k - 1]
        lane_streams = []
        for lane in range(lanes):
            st = _Stream()
            for d in prev[lane].digits[:psi_k]:
                st.append(d)
            lane_streams.append(st)
        run.streams[k] = lane_streams

    done = False
    step_cap = 64 * (kres + 1) * (p1 + delta + 1) * (alpha + 1) + 4096
    steps = 0
    while not done:
        steps += 1
        if steps > step_cap:
            raise RuntimeError("scheduler failed to reach the target")
        if elision:
            k0 = refresh_psi()
            # fully elided tail: every remaining approximant equals its
            # predecessor on all digits it would generate -- the result is
            # already known, stop early
            if k0 is not None and k0 <= K and \
                    s.psi(k0) >= p_of_k(k0, K, P, delta, kres):
                for k in range(k0, K + 1):
                    materialize(k)
                    for lane in range(lanes):
                        src = run.streams[k - 1][lane]
                        dst = run.streams[k][lane]
                        for d in src.digits[len(dst.digits):p_of_k(
                                k, K, P, delta, kres)]:
                            dst.append(d)
                run.early_stable = True
                break
        if s.mode == ACCUMULATION:
            schedule_step(s, elision)
            run.cycles["digit"] += 1
            continue
        d_now = s.diagonals
        action = schedule_emit(s, elision)
        k, i = action.k, action.i
        if k not in run.streams:
            materialize(k)
        if d_now != diag_seen:
            diag_seen = d_now
            run.diagonals = d_now
            run.cycles["fill"] += delta
            run.cycles["adder"] += 2 * beta * (d_now - 1)
        run.cycles["digit"] += 1
        if k == 1:
            g = i + delta
            run.cycles["guess"] += 1 + alpha * (g // U)
        need = i + delta + 1
        pred_vals = tuple(run.streams[k - 1][lane].prefix_value(need)
                          for lane in range(lanes))
        w = Fraction(1, 1 << (i + 1))
        try:
            for lane in range(lanes):
                est = problem.est(lane, pred_vals)
                r = est - run.streams[k][lane].prefix_value(i)
                assert abs(r) <= 2 * w, "digit selection infeasible"
                d = 1 if r >= w / 2 else (-1 if r <= -w / 2 else 0)
                run.streams[k][lane].append(d)
                stores[lane].write_digit(k, i, d, run.psi[k])
        except MemoryExhausted as e:
            run.exhausted = e
            break
        if elision:
            # the transition below reads the pending approximant's pointer;
            # digit i may have just completed the prefix it derives from
            refresh_psi()
        schedule_advance(s, elision)
        if k == K and i == P - 1:
            done = True
    while s.mode == ACCUMULATION:
        s, action = schedule_step(s, elision)
        run.cycles["digit"] += 1
    run.cycles["adder"] += 2 * beta * (K - 1)
    run.peak_words = sum(st.words_used for st in stores)
    return run


def _common_prefix(a, b):
    m = 0
    for x, y in zip(a, b):
        if x != y:
            break
        m += 1
    return m


# ---------------------------------------------------------------------------
# reports


class SolveReport:
    """Everything one solve produced, JSON- and CSV-serializable."""

    def __init__(self, method, problem, K, P, run, converged, eta=None,
                 lsd_reference=None, wall_clock_s=0.0):
        self.method = method
        self.problem = problem
        self.K = K
        self.P = P
        self.run = run
        self.converged = converged
        self.eta = eta
        self.lsd_reference = lsd_reference
        self.wall_clock_s = wall_clock_s

    def approximant_values(self, k):
        """Values of approximant k's emitted streams, in problem scale."""
        vals = [st.value() for st in self.run.streams[k]]
        return self.problem.unscale(vals)

    def solution(self):
        return self.approximant_values(self.K)

    def to_json(self):
        run = self.run
        approximants = []
        for k in sorted(run.streams):
            if k == 0:
                continue
            entry = {
                "k": k,
                "psi": run.psi.get(k, 0),
                "digits": [st.digits and "".join(
                    _DIGIT_CHARS[d] for d in st.digits) or ""
                    for st in run.streams[k]],
                "values": [str(v) for v in self.approximant_values(k)],
            }
            approximants.append(entry)
        obj = {
            "method": self.method,
            "converged": self.converged,
            "eta": None if self.eta is None else str(self.eta),
            "K": self.K,
            "P": self.P,
            "k_res": run.kres,
            "cycles": dict(run.cycles, total=run.total_cycles),
            "peak_words": run.peak_words,
            "memory_exhausted": run.exhausted is not None and
                str(run.exhausted) or None,
            "approximants": approximants,
            "solution": [str(v) for v in self.solution()]
            if self.K in run.streams else None,
            "wall_clock_s": self.wall_clock_s,
        }
        if self.lsd_reference is not None:
            obj["lsd_reference"] = self.lsd_reference
        return obj

    def dumps(self, **kwargs):
        return json.dumps(self.to_json(), indent=2, sort_keys=True, **kwargs)

    def digit_grid_csv(self, fileobj):
        """Digit grid: one row per approximant/lane, elided cells marked '~'."""
        import csv
        writer = csv.writer(fileobj)
        width = max((len(st.digits) for ss in self.run.streams.values()
                     for st in ss), default=0)
        writer.writerow(["k", "lane", "psi"] + list(range(width)))
        for k in sorted(self.run.streams):
            if k == 0:
                continue
            psi = self.run.psi.get(k, 0)
            for lane, st in enumerate(self.run.streams[k]):
                cells = []
                for i, d in enumerate(st.digits):
                    ch = _DIGIT_CHARS[d]
                    cells.append("~" + ch if i < psi else ch)
                writer.writerow([k, lane, psi] + cells)


# ---------------------------------------------------------------------------
# top-level solves


def _pick_target(problem, eta):
    """Smallest K whose exact iterate meets eta/2, and a safe precision P."""
    x = problem.guess_values()
    K = 0
    while True:
        resid = problem.residual(problem.unscale(x))
        if K >= 1 and resid < eta / 2:
            break
        if K > 200000:
            raise RuntimeError("iteration does not reach eta")
        x = problem.exact_step(x)
        K += 1
    P = max(_ceil_log2(4 * problem.sensitivity() / eta), problem.delta() + 1)
    return K, P


def _solve(problem, method, U, D, elision, K=None, P=None):
    t0 = time.monotonic()
    eta = problem.eta
    if K is None or P is None:
        if eta is None:
            raise ValueError("either eta or an explicit (K, P) target is required")
        K, P = _pick_target(problem, eta)
    attempts = 0
    while True:
        run = run_engine(problem, K, P, U=U, D=D, elision=elision)
        if run.exhausted is not None or eta is None:
            break
        sol = [run.streams[K][lane].value() for lane in range(problem.n_lanes())]
        if problem.residual(problem.unscale(sol)) < eta:
            break
        attempts += 1
        if attempts > 3:
            break
        K, P = K + 2, P + 8
    converged = False
    if run.exhausted is None and K in run.streams and \
            len(run.streams[K][0].digits) >= P:
        if eta is None:
            converged = True
        else:
            sol = [run.streams[K][lane].value()
                   for lane in range(problem.n_lanes())]
            converged = problem.residual(problem.unscale(sol)) < eta
    return SolveReport(method, problem, K, P, run, converged, eta=eta,
                       wall_clock_s=time.monotonic() - t0)


def jacobi_solve(prob, U=8, D=2 ** 17, elision=False, K=None, P=None):
    """Solve a JacobiProblem; see module docstring for the model."""
    return _solve(prob, "jacobi", U, D, elision, K=K, P=P)


def newton_solve(prob, U=8, D=2 ** 17, elision=False, K=None, P=None):
    """Solve a NewtonProblem; see module docstring for the model."""
    return _solve(prob, "newton", U, D, elision, K=K, P=P)


# ---------------------------------------------------------------------------
# LSD-first fixed-point reference


class LsdFixedConfig:
    """Behavioral conventional reference: P fractional digits, truncation
    toward minus infinity after every operation."""

    def __init__(self, P):
        if P < 1:
            raise ValueError("word length must be positive")
        self.P = P


def lsd_fixed_solve(problem, cfg, max_iters=4096):
    """Run the iteration map in fixed precision; report honest convergence.

    Values are integers at scale 2^P; every multiply/divide truncates toward
    -infinity (Python floor division).  The run stops early when the state
    repeats -- a repeated state can never converge later, so 'did not
    converge within max_iters' genuinely means 'never converges'.
    """
    P = cfg.P
    eta = problem.eta
    if eta is None:
        raise ValueError("the reference run needs an eta target")
    scale = 1 << P

    def fix(v):
        # truncation toward -infinity at P fractional digits
        return (v.numerator * scale) // v.denominator

    if isinstance(problem, JacobiProblem):
        # problem scale: fixed point holds an integer part, so no (-1, 1)
        # normalization is needed (or possible) here
        ca = [fix(c) for c in problem.c_a]
        cb = [fix(c) for c in problem.c_b]
        state = tuple(fix(v) for v in problem.x0)

        def step(st):
            return ((cb[0] + (ca[0] * st[1]) // scale),
                    (cb[1] + (ca[1] * st[0]) // scale))

        def value(st):
            return [Fraction(st[0], scale), Fraction(st[1], scale)]
    elif isinstance(problem, NewtonProblem):
        # x' = x/2 + 3/(2ax) in problem scale, from the same guess x0 = 2^s/2
        a = problem.a
        state = (fix(problem.y0 * Fraction(2) ** problem.s),)

        def step(st):
            x = st[0]
            if x <= 0:
                return st  # stuck; the cycle detector terminates the run
            recip = (3 * a.denominator * scale * scale) // (2 * a.numerator * x)
            return ((x >> 1) + recip,)

        def value(st):
            return [Fraction(st[0], scale)]
    else:
        raise TypeError("unsupported problem type %r" % type(problem).__name__)

    seen = set()
    iterations = 0
    converged = False
    while iterations < max_iters:
        if problem.residual(value(state)) < eta:
            converged = True
            break
        if state in seen:
            break
        seen.add(state)
        state = step(state)
        iterations += 1
    return {"method": "lsd-%d" % P, "converged": converged,
            "iterations": iterations,
            "value": [str(v) for v in value(state)]}

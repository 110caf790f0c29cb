"""Digit-computation scheduling FSM.

The engine interleaves approximant refinement and digit generation in a
zig-zag over (approximant k, digit index i), in groups of delta digits where
delta is the datapath's online delay.  The pattern guarantees the two
dependency conditions

    t(z_{i+1}^(k))  >  t(z_i^(k))          (digits of one approximant in order)
    t(z_i^(k+1))    >  t(z_{i+delta}^(k))  (enough predecessor digits first)

Equivalently, the schedule walks diagonals: diagonal d produces one
delta-digit group for each live approximant k = 1..d, most precise first.

States are DigitGeneration and Accumulation.  Generating a digit with index
i >= U (beyond the first stored word) requires sweeping the live chunks of
the stored vectors, so the FSM stalls for alpha*floor(i/U) cycles afterwards
(entered with the stall counter gamma = alpha*floor(i/U) - 1; the entry
transition itself is the first stall cycle).  alpha is 2 if the datapath
contains a divider (two sweeps per digit), 1 with a multiplier only; an
adders-only datapath never enters Accumulation.

Don't-change digit elision: approximant k's first psi_k digits (psi_k a
multiple of delta) are known to equal the previous approximant's, so the
schedule starts approximant k at i = psi_k and snaps back to approximant 1
whenever the next diagonal step would land entirely inside elided digits.

Transitions, from a just-generated (k, i):

    within-group:  i mod delta != delta-1              ->  i += 1
    diagonal:      group done, next approximant's next
                   needed group is exactly one group
                   down-left                           ->  k += 1, i -= 2*delta - 1
    snap-back:     otherwise (i = delta-1, or the
                   down-left group is elided)          ->  k = 1, i = next fresh index

In the steady pattern the snap-back lands at i + (k-1)*delta + 1 with k the
pre-transition approximant; the implementation tracks each approximant's next
ungenerated index explicitly, which reproduces that arithmetic and stays
correct under elision.  A test-only `literal_snapback` switch applies
i + k*delta + 1 instead, preserving the other documented reading of the rule.
"""

DIGIT_GENERATION = "digit-generation"
ACCUMULATION = "accumulation"


class Generate:
    """Action: generate digit i of approximant k."""

    __slots__ = ("k", "i")

    def __init__(self, k, i):
        self.k = k
        self.i = i

    def __eq__(self, other):
        return isinstance(other, Generate) and (self.k, self.i) == (other.k, other.i)

    def __repr__(self):
        return "Generate(k=%d, i=%d)" % (self.k, self.i)


class Stall:
    """Action: one accumulation stall cycle."""

    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, Stall)

    def __repr__(self):
        return "Stall()"


STALL = Stall()


class ScheduleState:
    """Mutable FSM state.

    psi_table maps approximant index -> elision pointer (multiples of delta);
    approximants absent from the table have psi = 0.  next_index tracks each
    approximant's next ungenerated digit index, which encodes both progress
    and (for fresh approximants) the elided start.
    """

    def __init__(self, delta, alpha, U, literal_snapback=False):
        if delta < 2:
            raise ValueError("online delay delta must be at least 2")
        if alpha not in (0, 1, 2):
            raise ValueError("alpha must be 0 (adders only), 1 (multiplier) or 2 (divider)")
        self.delta = delta
        self.alpha = alpha
        self.U = U
        self.literal_snapback = literal_snapback
        self.mode = DIGIT_GENERATION
        self.k = 1
        self.i = 0
        self.gamma = 0
        self.psi_table = {}
        self.next_index = {}
        self.diagonals = 1   # diagonal currently being walked (1-based)

    def psi(self, k):
        return self.psi_table.get(k, 0)

    def start_of(self, k):
        """Next ungenerated digit index of approximant k."""
        return self.next_index.get(k, self.psi(k))


def schedule_step(s, elision_enabled=False):
    """Advance the FSM one cycle; returns (state, action).

    The action is Generate(k, i) for the digit produced this cycle, or a
    Stall during accumulation.  Termination is the caller's business (on
    demand, or on MemoryExhausted from the stores).

    Callers that maintain elision pointers should use the split
    schedule_emit / schedule_advance pair instead: the position transition
    reads the *next* approximant's pointer, which may depend on the digit
    generated this very cycle (a group-ending digit completes the prefix the
    pointer is computed from).
    """
    if s.mode == ACCUMULATION:
        if s.gamma == 0:
            s.mode = DIGIT_GENERATION
        else:
            s.gamma -= 1
        return s, STALL
    action = schedule_emit(s, elision_enabled)
    schedule_advance(s, elision_enabled)
    return s, action


def schedule_emit(s, elision_enabled=False):
    """First half of a generation cycle: the digit event, no transition.

    Only valid in DigitGeneration mode (accumulation stalls have no digit
    event; drive them through schedule_step).
    """
    assert s.mode == DIGIT_GENERATION
    k, i, delta = s.k, s.i, s.delta

    # dependency safety: the predecessor must have produced (or elided past)
    # digit i + delta before approximant k's digit i is generated
    if k > 1:
        assert s.start_of(k - 1) > i + delta, \
            "dependency violation at (k=%d, i=%d)" % (k, i)
    assert i >= (s.psi(k) if elision_enabled else 0)
    s.next_index[k] = i + 1
    return Generate(k, i)


def schedule_advance(s, elision_enabled=False):
    """Second half: the position transition and accumulation entry."""
    k, i, delta = s.k, s.i, s.delta
    if i % delta != delta - 1:
        s.i = i + 1
    else:
        down_left = i - 2 * delta + 1
        psi_next = s.psi(k + 1) if elision_enabled else 0
        takes_diagonal = i >= delta and s.start_of(k + 1) == down_left \
            and down_left >= psi_next
        if takes_diagonal:
            s.k = k + 1
            s.i = down_left
        else:
            if s.literal_snapback:
                s.i = i + k * delta + 1
            else:
                s.i = s.start_of(1)
                assert elision_enabled or s.i == i + (k - 1) * delta + 1
            s.k = 1
            s.diagonals += 1

    # accumulation entry: generating a digit beyond the first stored word
    # keeps the datapath busy sweeping chunks for alpha*floor(i/U) cycles;
    # elided digits are never stored, so the sweep covers only the stored
    # suffix of the vector
    eff = i - s.psi(k) if elision_enabled else i
    if s.alpha and eff >= s.U:
        s.gamma = s.alpha * (eff // s.U) - 1
        s.mode = ACCUMULATION
    return s


def update_elision_pointer(prev, prev2, delta):
    """Elision pointer from the two predecessor approximants' digit prefixes.

    M is the longest common identical-digit prefix (representation equality,
    digit by digit); the returned psi = delta * floor(max(0, M - delta)/delta)
    is the number of leading digits of the next approximant guaranteed equal
    to prev's, maintained at delta granularity.
    """
    m = 0
    for a, b in zip(prev, prev2):
        if a != b:
            break
        m += 1
    return delta * (max(0, m - delta) // delta)


def replay_schedule(delta, alpha, U, n_events, elision_enabled=False,
                    psi_table=None, literal_snapback=False):
    """Replay the FSM, returning the first n_events (k, i) generation visits.

    Stalls are not included in the returned list (they carry no position).
    """
    s = ScheduleState(delta, alpha, U, literal_snapback=literal_snapback)
    if psi_table:
        s.psi_table.update(psi_table)
    visits = []
    while len(visits) < n_events:
        s, action = schedule_step(s, elision_enabled)
        if isinstance(action, Generate):
            visits.append((action.k, action.i))
    return visits

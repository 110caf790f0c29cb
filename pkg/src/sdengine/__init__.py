"""Bit-exact engine for iterative computation with MSD-first online arithmetic.

Digit streams are radix-2 signed-digit, most-significant-digit first; a
zig-zag scheduler interleaves iteration refinement with digit generation so
precision and iteration count never have to be fixed in advance.  Stored
vectors live in Cantor-pairing-addressed word memories, stable leading digits
of successive approximants are elided, and closed-form models predict cycle
counts and capacity exactly.
"""

from .digits import (ExactRational, DigitVector, check_digit, digit_to_pair,
                     pair_to_digit, value_of, rational_to_digit_stream,
                     otf_convert, prefix_error_bound)
from .online import (serial_add, serial_add_step, SerialAdderState,
                     parallel_add, online_multiply, online_divide,
                     MulState, DivState, mul_step, div_step)
from .store import (cpf, cpf_hat, StoreConfig, CpfStore, MemoryExhausted)
from .chunked import (ArchMulUnit, ArchDivUnit, arch_mul_digit, arch_div_digit)
from .schedule import (ScheduleState, schedule_step, schedule_emit,
                       schedule_advance, Generate, Stall, STALL,
                       update_elision_pointer, replay_schedule)
from .bounds import (DatapathProfile, Target, k_res, p_of_k, p_res, capacity,
                     compute_time, simulate_compute_cycles,
                     condition_number_2x2, ADDERS_ONLY, HAS_MULTIPLIER,
                     HAS_DIVIDER)
from .solvers import (JacobiProblem, NewtonProblem, LsdFixedConfig,
                      NotDiagonallyDominant, SolveReport, jacobi_solve,
                      newton_solve, lsd_fixed_solve, make_toy_iteration,
                      run_engine, parse_exact)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

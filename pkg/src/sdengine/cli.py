"""Command-line front end.

Subcommands: solve, sweep, bounds, trace-schedule, dump-memory, selftest.
All numeric tolerances and rationals are parsed exactly ('2^-k', 'p/q' or
decimal strings, never through binary floats); identical arguments produce
byte-identical output files.  A config file of key=value lines can supply
defaults; explicit flags win.

Exit codes: 0 converged / success, 2 memory exhausted, 3 did not converge,
4 invalid input.
"""

import argparse
import io
import json
import sys
from fractions import Fraction

from .bounds import (DatapathProfile, capacity, k_res, p_of_k, compute_time,
                     simulate_compute_cycles, ADDERS_ONLY, HAS_MULTIPLIER,
                     HAS_DIVIDER)
from .schedule import ScheduleState, schedule_step, Generate
from .store import MemoryExhausted
from .solvers import (JacobiProblem, NewtonProblem, LsdFixedConfig,
                      jacobi_solve, newton_solve, lsd_fixed_solve,
                      make_toy_iteration, parse_exact)

EXIT_OK = 0
EXIT_MEMORY = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INVALID = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(EXIT_INVALID)


def _load_config(path):
    """key=value lines; '#' comments; values stay strings for argparse."""
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("config line without '=': %r" % line)
            key, _, value = line.partition("=")
            defaults[key.strip().replace("-", "_")] = value.strip()
    return defaults


def _write_out(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _build_parser():
    top = _Parser(prog="sdengine", description=__doc__.splitlines()[0])
    top.add_argument("--config", help="key=value defaults file (flags win)")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--U", type=int, default=8, help="store word width")
        p.add_argument("--D", type=int, default=2 ** 17, help="store depth")
        p.add_argument("--elision", action="store_true",
                       help="enable don't-change digit elision")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--seed", type=int, default=0)

    ps = sub.add_parser("solve", help="run one benchmark solve")
    ps.add_argument("benchmark", choices=["jacobi", "newton", "toy"])
    ps.add_argument("--eta", default="2^-6", help="accuracy bound")
    ps.add_argument("--m", type=int, help="jacobi: near-singular family index")
    ps.add_argument("--A", help="jacobi: matrix a00,a01,a10,a11")
    ps.add_argument("--b", help="jacobi: right-hand side b0,b1")
    ps.add_argument("--a", help="newton: coefficient of f(x) = a*x^2 - 3")
    ps.add_argument("--x0", help="newton: initial guess")
    ps.add_argument("--K", type=int, help="force the target iteration count")
    ps.add_argument("--P", type=int, help="force the target digit count")
    ps.add_argument("--ref-lsd", type=int, dest="ref_lsd",
                    help="also run the fixed-precision reference at this width")
    ps.add_argument("--digit-grid", dest="digit_grid",
                    help="write the digit-grid CSV here")
    common(ps)

    pw = sub.add_parser("sweep", help="eta sweep: elision vs plain")
    pw.add_argument("benchmark", choices=["jacobi", "newton"])
    pw.add_argument("--etas", default="2^-16,2^-32,2^-64,2^-128",
                    help="comma-separated eta values")
    pw.add_argument("--m", type=int, default=1)
    pw.add_argument("--a", default="7")
    common(pw)

    pb = sub.add_parser("bounds", help="capacity / result shape / cycle model")
    pb.add_argument("--U", type=int, default=8)
    pb.add_argument("--D", type=int, default=2 ** 17)
    pb.add_argument("--delta", type=int, default=5)
    pb.add_argument("--beta", type=int, default=1)
    pb.add_argument("--kind", choices=[ADDERS_ONLY, HAS_MULTIPLIER, HAS_DIVIDER],
                    default=HAS_MULTIPLIER)
    pb.add_argument("--parallel-adders", action="store_true")
    pb.add_argument("--K", type=int, default=100)
    pb.add_argument("--P", type=int, default=2048)
    pb.add_argument("--json", action="store_true")
    pb.add_argument("--out", default="-")

    pt = sub.add_parser("trace-schedule", help="dump the zig-zag visit order")
    pt.add_argument("--delta", type=int, default=3)
    pt.add_argument("--steps", type=int, default=18)
    pt.add_argument("--psi", default="",
                    help="elision fixture, e.g. '3:3,4:6' (enables elision)")
    pt.add_argument("--alpha", type=int, default=0)
    pt.add_argument("--U", type=int, default=8)
    pt.add_argument("--out", default="-")

    pm = sub.add_parser("dump-memory", help="solve, then dump the stores")
    pm.add_argument("benchmark", choices=["jacobi", "newton", "toy"])
    pm.add_argument("--eta", default="2^-6")
    pm.add_argument("--m", type=int)
    pm.add_argument("--a", default="7")
    common(pm)

    pq = sub.add_parser("selftest", help="quick internal checks")
    pq.add_argument("--seed", type=int, default=0)
    return top


def _jacobi_from_args(args, eta):
    if args.A:
        vals = [parse_exact(v) for v in args.A.split(",")]
        if len(vals) != 4:
            raise ValueError("--A needs four comma-separated entries")
        A = [[vals[0], vals[1]], [vals[2], vals[3]]]
        b = [parse_exact(v) for v in (args.b or "1/2,1/2").split(",")]
    else:
        m = args.m if args.m is not None else 1
        off = 1 - Fraction(1, 2 ** m)
        A = [[1, off], [off, 1]]
        b = [parse_exact(v) for v in (args.b or "1/2,1/2").split(",")]
    return JacobiProblem(A, b, eta=eta)


def _problem_from_args(args, eta):
    if args.benchmark == "toy":
        return make_toy_iteration(eta=eta), jacobi_solve
    if args.benchmark == "jacobi":
        return _jacobi_from_args(args, eta), jacobi_solve
    x0 = parse_exact(args.x0) if getattr(args, "x0", None) else None
    return NewtonProblem(parse_exact(args.a or "4"), x0=x0, eta=eta), newton_solve


def cmd_solve(args):
    eta = parse_exact(args.eta)
    problem, solve = _problem_from_args(args, eta)
    report = solve(problem, U=args.U, D=args.D, elision=args.elision,
                   K=args.K, P=args.P)
    if args.ref_lsd:
        report.lsd_reference = lsd_fixed_solve(problem,
                                               LsdFixedConfig(args.ref_lsd))
    _write_out(report.dumps() + "\n", args.out)
    if args.digit_grid:
        with open(args.digit_grid, "w", newline="") as fh:
            report.digit_grid_csv(fh)
    if report.run.exhausted is not None:
        return EXIT_MEMORY
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def cmd_sweep(args):
    rows = ["eta,cycles_plain,cycles_elision,speedup,mem_plain,mem_elision,"
            "mem_ratio,converged"]
    worst = EXIT_OK
    for eta_text in args.etas.split(","):
        eta = parse_exact(eta_text)
        if args.benchmark == "newton":
            mk = lambda: NewtonProblem(parse_exact(args.a), eta=eta)
            solve = newton_solve
        else:
            off = 1 - Fraction(1, 2 ** args.m)
            mk = lambda: JacobiProblem([[1, off], [off, 1]],
                                       [Fraction(1, 2), Fraction(1, 2)], eta=eta)
            solve = jacobi_solve
        plain = solve(mk(), U=args.U, D=args.D, elision=False)
        elided = solve(mk(), U=args.U, D=args.D, elision=True)
        ok = plain.converged and elided.converged
        if not ok:
            worst = EXIT_NO_CONVERGENCE
        rows.append("%s,%d,%d,%.6f,%d,%d,%.6f,%s" % (
            eta_text.strip(),
            plain.run.total_cycles, elided.run.total_cycles,
            plain.run.total_cycles / elided.run.total_cycles,
            plain.run.peak_words, elided.run.peak_words,
            plain.run.peak_words / max(elided.run.peak_words, 1),
            ok))
    _write_out("\n".join(rows) + "\n", args.out)
    return worst


def cmd_bounds(args):
    profile = DatapathProfile(args.delta, args.beta, args.kind, args.U,
                              parallel_adders=args.parallel_adders)
    p_max, k_max = capacity(args.U, args.D)
    kres = k_res(args.K, args.P, args.delta)
    pres = p_of_k(1, args.K, args.P, args.delta, kres)
    t, t1, t2, t3 = compute_time(profile, args.K, args.P)
    obj = {"K_res": kres, "P_res": pres, "P_max": p_max, "K_max": k_max,
           "T": t, "T1": t1, "T2": t2, "T3": t3}
    if args.json:
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join("%-6s %d\n" % (k, v) for k, v in obj.items())
    _write_out(text, args.out)
    return EXIT_OK


def cmd_trace_schedule(args):
    psi_table = {}
    if args.psi:
        for item in args.psi.split(","):
            k, _, v = item.partition(":")
            psi_table[int(k)] = int(v)
    s = ScheduleState(args.delta, args.alpha, args.U)
    s.psi_table.update(psi_table)
    elision = bool(psi_table)
    rows = ["event,k,i"]
    n = 0
    while n < args.steps:
        s, action = schedule_step(s, elision)
        if isinstance(action, Generate):
            rows.append("generate,%d,%d" % (action.k, action.i))
            n += 1
        else:
            rows.append("stall,,")
    _write_out("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_dump_memory(args):
    eta = parse_exact(args.eta)
    problem, solve = _problem_from_args(args, eta)
    # re-run the engine and keep the stores: run_engine stores are internal,
    # so dump the digit grid and a reconstructed store image instead
    report = solve(problem, U=args.U, D=args.D, elision=args.elision)
    from .store import StoreConfig, CpfStore
    out = io.StringIO()
    for lane in range(problem.n_lanes()):
        store = CpfStore(StoreConfig(args.U, args.D), name="lane%d" % lane)
        for k, streams in sorted(report.run.streams.items()):
            psi = report.run.psi.get(k, 0)
            for i, d in enumerate(streams[lane].digits):
                if i >= psi or k == 0:
                    store.write_digit(k, i, d, psi if k else 0)
        out.write("# store lane%d (%d words)\n" % (lane, store.words_used))
        store.dump_csv(out)
    _write_out(out.getvalue(), args.out)
    if report.run.exhausted is not None:
        return EXIT_MEMORY
    return EXIT_OK


def cmd_selftest(args):
    from .schedule import replay_schedule
    from .store import cpf
    failures = []

    def check(name, ok):
        if not ok:
            failures.append(name)

    check("cpf-layout", [cpf(0, 0), cpf(1, 0), cpf(0, 1), cpf(2, 0)] == [0, 1, 2, 3])
    check("capacity", capacity(8, 2 ** 17) == (4088, 512))
    check("shape", (k_res(100, 2048, 5), p_of_k(1, 100, 2048, 5)) == (509, 2545))
    golden = [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 0), (2, 1),
              (2, 2), (1, 6), (1, 7), (1, 8), (2, 3), (2, 4), (2, 5), (3, 0),
              (3, 1), (3, 2)]
    check("schedule", replay_schedule(3, 0, 8, 18) == golden)
    prof = DatapathProfile(4, 1, HAS_DIVIDER, 4)
    check("cycle-model", compute_time(prof, 3, 17)[0] ==
          simulate_compute_cycles(prof, 3, 17))
    toy = make_toy_iteration(eta=Fraction(1, 1 << 20))
    rep = jacobi_solve(toy)
    check("toy", rep.converged and
          rep.approximant_values(1)[0] == Fraction(1, 4))
    if failures:
        sys.stderr.write("selftest FAILED: %s\n" % ", ".join(failures))
        return 1
    print("selftest ok")
    return EXIT_OK


_COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "trace-schedule": cmd_trace_schedule,
    "dump-memory": cmd_dump_memory,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = _build_parser()
    # peel --config first so its values become defaults; flags still win
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            defaults = _load_config(argv[idx + 1])
        except (OSError, ValueError, IndexError) as e:
            sys.stderr.write("error: bad config: %s\n" % e)
            return EXIT_INVALID
        del argv[idx:idx + 2]
        for sp in parser._subparsers._group_actions[0].choices.values():
            converted = {}
            for action in sp._actions:
                if action.dest in defaults:
                    raw = defaults[action.dest]
                    converted[action.dest] = action.type(raw) if action.type else raw
            sp.set_defaults(**converted)
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MemoryExhausted as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_MEMORY
    except (ValueError, ZeroDivisionError) as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

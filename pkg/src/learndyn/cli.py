"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical divergence,
3 property-suite failure.
"""

import argparse
import sys

from .config import load_config
from .errors import ConfigurationError, DivergenceError, LearnDynError, SuiteFailure
from .scenarios import RECIPES, repro, run_compare, run_scenario, run_sweep
from .suites import SUITES, property_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGENCE = 2
EXIT_SUITE = 3


def _u64(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="learndyn", description="Continuous-time learning dynamics laboratory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("simulate", "simulate every model in a config"),
                           ("compare", "reward gaps of every model against the first")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)

    p = sub.add_parser("repro", help="regenerate the data behind a named figure")
    p.add_argument("recipe", choices=RECIPES)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep-freq", help="J(phi, a) sweep from the config's freq section")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run a randomized property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--trials", type=_positive_int, default=None)
    return parser


def _run(args):
    if args.command == "simulate":
        trajs, files = run_scenario(load_config(args.config), args.out)
        for tr in trajs:
            print(f"{tr.model.name}: average reward {tr.final_average:.6f} at T={tr.T:g}")
    elif args.command == "compare":
        summary, files = run_compare(load_config(args.config), args.out)
        for name, row in summary.items():
            print(f"{name} vs {row['versus']}: final gap {row['final_gap']:.6g}, "
                  f"min gap {row['min_gap']:.3e}, {row['verdict']}")
    elif args.command == "repro":
        summary, files = repro(args.recipe, args.out)
        print(f"{args.recipe}: wrote {len(files)} files to {args.out}")
    elif args.command == "sweep-freq":
        cfg = load_config(args.config, require_models=False)
        if cfg.freq is None:
            raise ConfigurationError("missing freq section", "freq")
        sw, files = run_sweep(cfg.freq, args.out)
        print(f"sweep: {sw.phi.size} x {sw.a.size} grid, factorization residual {sw.factorization_residual:.3e}")
    elif args.command == "verify":
        report = property_suite(args.suite, args.seed, args.trials)
        print(report.summary())
        for key, value in report.details.items():
            print(f"  {key}: {value}")
        if not report.passed:
            raise SuiteFailure(f"suite {args.suite} failed (worst margin {report.worst_margin:.3e})")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except SuiteFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUITE
    except LearnDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

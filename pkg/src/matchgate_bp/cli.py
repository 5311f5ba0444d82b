"""``bp`` command-line entry point."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .circuit import CircuitSpec, estimate_variance
from .dla import GeneratorSet, dla_report, matchgate_generators
from .entanglement import entanglement_report
from .errors import BudgetError, DenseLimitError, DimensionError, ModuleMembershipError, PreconditionError
from .experiment import ExperimentConfig, default_config, render, run_experiment
from .modules import parity_sector_decompose, purity_spectrum
from .operators import PauliSumOperator
from .oracle import weingarten_oracle
from .selfcheck import run_selfcheck
from .states import as_density, named_observable, named_state
from .variance import VarianceReport, variance_corollary, variance_exact, variance_parity_basis

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

CONFIG_ERRORS = (
    ValueError,
    KeyError,
    FileNotFoundError,
    json.JSONDecodeError,
    DimensionError,
    DenseLimitError,
    BudgetError,
    ModuleMembershipError,
    PreconditionError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _emit(obj, output=None):
    text = json.dumps(obj, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _merge_config(args, names):
    """Fill unset flags from ``--config``; flags given on the command line win."""
    values = {}
    if getattr(args, "config", None):
        values.update(json.loads(Path(args.config).read_text()))
    for name in names:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    return values


def cmd_experiment(args):
    if args.default:
        cfg = default_config(args.default)
        overrides = _merge_config(args, ["samples", "layers", "layer_factor", "seed", "output", "format", "workers"])
        overrides.pop("config", None)
        cfg = ExperimentConfig.from_dict({**cfg.__dict__, **overrides})
    else:
        values = _merge_config(
            args,
            ["experiment", "n", "grid", "samples", "layers", "layer_factor", "seed", "output", "format", "workers", "state", "observable"],
        )
        if "experiment" not in values or "n" not in values:
            raise ValueError("experiment needs --experiment and --n (or a --config file)")
        cfg = ExperimentConfig.from_dict(values)
    rows, notes = run_experiment(cfg)
    for (n, param), msgs in notes:
        for msg in msgs:
            print(f"note n={n} param={param}: {msg}", file=sys.stderr)
    text = render(rows, cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dla(args):
    if args.generators:
        g = GeneratorSet.load(args.generators)
    elif args.matchgate:
        g = matchgate_generators(args.matchgate)
    else:
        raise ValueError("dla needs --generators FILE or --matchgate N")
    _emit(dla_report(g, args.max_dim), args.output)
    return EXIT_OK


def _load_input(args):
    """``(operator, is_state)`` from --state/--operator."""
    if args.operator:
        return PauliSumOperator.load(args.operator), False
    if args.state:
        if args.n is None and not Path(args.state).exists():
            raise ValueError("named states need --n")
        state = named_state(args.state, args.n or 0)
        return as_density(state), True
    raise ValueError("decompose needs --state or --operator")


def cmd_decompose(args):
    op, is_state = _load_input(args)
    spec = purity_spectrum(op)
    report = spec.to_dict()
    n = op.n
    sectors = []
    for kappa in range(0, n + 1, 2):
        even, odd = parity_sector_decompose(op, kappa)
        sectors.append({"kappa": kappa, "even": even.norm2(), "odd": odd.norm2()})
    report["n"] = n
    report["sector_purities"] = sectors
    if is_state:
        report.update(entanglement_report(op))
    _emit(report, args.output)
    return EXIT_OK


def cmd_variance(args):
    values = _merge_config(args, ["n", "state", "observable", "method", "samples", "layers", "seed", "workers", "kappas"])
    n = int(values["n"])
    state = named_state(values["state"], n)
    obs = named_observable(values["observable"], n)
    method = values.get("method", "exact")
    if method == "exact":
        report = variance_exact(as_density(state), obs)
    elif method == "parity":
        report = variance_parity_basis(as_density(state), obs)
    elif method == "corollary":
        report = variance_corollary(as_density(state), obs, tuple(values["kappas"]))
    elif method.startswith("oracle"):
        flavor = method.partition(":")[2] or "standard"
        report = weingarten_oracle(as_density(state), obs, flavor)
    elif method == "mc":
        spec = CircuitSpec(n, values.get("layers"), int(values.get("seed", 0)))
        est = estimate_variance(state, obs, spec, int(values.get("samples", 10_000)), int(values.get("workers", 1)))
        report = VarianceReport(est.mean_hat, est.var_hat, "monte_carlo", [], est.stderr_var)
    else:
        raise ValueError(f"unknown method {method!r}")
    _emit(report.to_dict(), args.output)
    return EXIT_OK


def cmd_selfcheck(args):
    failures = run_selfcheck(args.seed or 0)
    return EXIT_NUMERIC if failures else EXIT_OK


def build_parser():
    parser = _Parser(prog="bp", description="Loss variances of parametrized matchgate circuits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("experiment", help="closed-form / exact / Monte-Carlo sweeps")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--default", choices=["gaussian", "magic", "nonfermionic"], help="use a shipped sweep")
    p.add_argument("--experiment", choices=["gaussian", "magic", "nonfermionic", "custom"])
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--grid", type=float, nargs="+")
    p.add_argument("--samples", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--layer-factor", type=int, help="depth = factor * n^2 when --layers is not given")
    p.add_argument("--seed", type=int)
    p.add_argument("--state")
    p.add_argument("--observable")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--output")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("dla", help="Lie closure, symmetries and commutator graph")
    p.add_argument("--generators", help="file with one Pauli string per line")
    p.add_argument("--matchgate", type=int, metavar="N", help="use the matchgate generators on N qubits")
    p.add_argument("--max-dim", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_dla)

    p = sub.add_parser("decompose", help="module purities, coherences and entanglement")
    p.add_argument("--state", help="named state or amplitude/operator file")
    p.add_argument("--operator", help="operator JSON file")
    p.add_argument("--n", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("variance", help="one-shot mean and variance")
    p.add_argument("--config")
    p.add_argument("--n", type=int)
    p.add_argument("--state")
    p.add_argument("--observable")
    p.add_argument("--method", help="exact | parity | corollary | oracle[:standard|parity|general] | mc")
    p.add_argument("--kappas", type=int, nargs="+")
    p.add_argument("--samples", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("selfcheck", help="numerical self-test at n <= 4")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    warnings.simplefilter("ignore", RuntimeWarning)
    np.seterr(all="ignore")
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"bp {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

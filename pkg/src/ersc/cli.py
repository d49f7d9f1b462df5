"""Command-line front end: ``ersc {sample,stats,enumerate,dist,fit,verify}``.

Exit codes: 0 success, 1 a verified property failed, 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import secrets
import sys
from pathlib import Path

from .complex_core import from_json, to_json
from .enumeration import KINDS, ComplexSpace, enumerate_space, exact_distribution
from .generators import (
    GeneralParams,
    KahleParams,
    RngState,
    sample_batch,
    sample_flag,
    sample_general_delta,
    sample_gnp,
    sample_kahle,
    sample_linial_meshulam,
)
from .maxent import FitError, MaxEntProblem, solve_theta
from .measures import kahle_for, log_prob_flag, log_prob_gnp, log_prob_lm
from .observables import parse_observable
from .stats import general_moments, kahle_moments
from .verify import RANDOMISED, SUITES, run_suite

MODELS = ("gnp", "flag", "lm", "kahle", "general")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int, help="vertex count (read from --pfile for general)")
    p.add_argument("--p", type=_floats, help="probability or comma list (Kahle: p_1,...; missing ones are 0)")
    p.add_argument("--d", type=int, help="Linial-Meshulam dimension")
    p.add_argument("--pfile", type=Path, help="JSON per-simplex parameters for --model general")


class Model:
    """Validated model spec from CLI flags."""

    def __init__(self, args: argparse.Namespace):
        self.kind = args.model
        if self.kind == "general":
            if args.pfile is None:
                raise ConfigError("--model general needs --pfile")
            self.params: KahleParams | GeneralParams = GeneralParams.from_json(args.pfile.read_text())
            if args.n is not None and args.n != self.params.n:
                raise ConfigError(f"--n {args.n} disagrees with parameter file n={self.params.n}")
            return
        if args.n is None or args.p is None:
            raise ConfigError(f"--model {self.kind} needs --n and --p")
        self.n = args.n
        if self.kind == "kahle":
            self.params = KahleParams.from_prefix(args.n, args.p)
            return
        if len(args.p) != 1:
            raise ConfigError(f"--model {self.kind} takes a single probability")
        self.p = args.p[0]
        self.d = args.d
        self.params = kahle_for(self.kind, args.n, self.p, args.d)

    def sample(self, state: RngState):
        if self.kind == "gnp":
            return sample_gnp(self.n, self.p, state)
        if self.kind == "flag":
            return sample_flag(self.n, self.p, state)
        if self.kind == "lm":
            return sample_linial_meshulam(self.n, self.d, self.p, state)
        if self.kind == "kahle":
            return sample_kahle(self.params, state)
        return sample_general_delta(self.params, state)

    def log_prob(self):
        if self.kind == "gnp":
            return lambda C: log_prob_gnp(C, self.n, self.p)
        if self.kind == "flag":
            return lambda C: log_prob_flag(C, self.n, self.p)
        if self.kind == "lm":
            return lambda C: log_prob_lm(C, self.n, self.d, self.p)
        return self.params


@contextlib.contextmanager
def _out(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _read_space(path: Path) -> ComplexSpace:
    members = [from_json(line) for line in path.read_text().splitlines() if line.strip()]
    if not members:
        raise ConfigError(f"{path} holds no complexes")
    ns = {C.n for C in members}
    if len(ns) != 1:
        raise ConfigError(f"{path} mixes ambient sizes {sorted(ns)}")
    return ComplexSpace("file", ns.pop(), tuple(members))


def cmd_sample(args) -> int:
    if args.count < 0:
        raise ConfigError("--count must be >= 0")
    model = Model(args)
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    with _out(args.output) as fh:
        for i in range(args.count):
            fh.write(to_json(model.sample(RngState(seed, i))) + "\n")
    return 0


def cmd_stats(args) -> int:
    if args.count < 1:
        raise ConfigError("--count must be >= 1")
    model = Model(args)
    if args.seed is None:
        raise ConfigError("stats needs --seed")
    batch = sample_batch(model.params, args.count, RngState(args.seed))
    if isinstance(model.params, KahleParams):
        header = ["d", "f_mean_mc", "f_expected", "phi_mean_mc", "phi_expected", "z_score"]
        rows = kahle_moments(model.params, batch)
    else:
        header = ["simplex", "a_mean_mc", "a_expected", "b_mean_mc", "b_expected", "z_score"]
        rows = general_moments(model.params, batch)
    with _out(args.output) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            z = r.z if abs(r.z) >= abs(r.z_2) else r.z_2
            w.writerow([r.key] + [repr(float(v)) for v in (r.mean_mc, r.expected, r.mean_mc_2, r.expected_2, z)])
    return 0


def cmd_enumerate(args) -> int:
    space = enumerate_space(args.kind, args.n, args.d)
    with _out(args.output) as fh:
        for C in space:
            fh.write(to_json(C) + "\n")
    return 0


def cmd_dist(args) -> int:
    model = Model(args)
    space = _read_space(args.space)
    dist = exact_distribution(model.log_prob(), space)
    with _out(args.output) as fh:
        for C, q in zip(space.members, dist.probs):
            obj = json.loads(to_json(C))
            obj["prob"] = float(q)
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
    return 0


def _json_arg(text: str):
    path = Path(text)
    if path.exists():
        return json.loads(path.read_text())
    return json.loads(text)


def cmd_fit(args) -> int:
    space = _read_space(args.space)
    observables = [parse_observable(o) for o in args.obs]
    targets = _json_arg(args.targets)
    problem = MaxEntProblem(space, observables, targets)
    report = solve_theta(problem, tol=args.tol)
    with _out(args.output) as fh:
        fh.write(json.dumps(report.to_dict()) + "\n")
    return 0


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    if args.seed is None and RANDOMISED & set(suites):
        raise ConfigError(f"suite(s) {sorted(RANDOMISED & set(suites))} need --seed")
    kw = {"seed": args.seed or 0, "perturbations": args.perturbations}
    if args.p is not None:
        if len(args.p) != 2:
            raise ConfigError("--p takes p1,p2")
        kw["p1"], kw["p2"] = args.p
    failed = 0
    for name in suites:
        for check in run_suite(name, **kw):
            print(f"[{name}] {check.line()}")
            failed += not check.passed
    print(f"{'FAILED' if failed else 'OK'}: {failed} failing check(s)")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ersc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="stream sampled complexes as JSON lines")
    _model_args(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", help="Monte Carlo moments against closed forms (CSV)")
    _model_args(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("enumerate", help="list a complex space as JSON lines")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dist", help="append exact model probabilities to a space file")
    _model_args(p)
    p.add_argument("--space", type=Path, required=True)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("fit", help="fit Lagrange multipliers over a space file")
    p.add_argument("--space", type=Path, required=True)
    p.add_argument("--obs", action="append", required=True, help="f_d, phi_d, a:<i,j,..> or b:<i,j,..>; repeatable")
    p.add_argument("--targets", required=True, help="JSON list or path to one")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run property suites; exit 1 on failure")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--p", type=_floats, help="p1,p2 for the three-vertex suites")
    p.add_argument("--seed", type=int)
    p.add_argument("--perturbations", type=int, default=1000)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

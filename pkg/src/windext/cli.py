"""Command-line front end: ``windext <subcommand> [options]``.

Reports are ``key=value`` lines on standard output.  Exit codes: 0 ok or
certified, 2 witness found, 3 inconclusive, 64 usage error, 65 data error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog as cat
from .criteria import (
    CERTIFIED,
    F_PLUS_PI_P,
    PF_PLUS_ONE,
    REFUTED,
    ProbeFamily,
    certify_by_deflation,
    certify_meromorphic_extension,
    classify_with_factors,
    reduce_nonvanishing,
    shift_criterion_test,
    witness_search,
)
from .decompose import factorize_nonvanishing, hermite_newton_coefficients, newton_decompose
from .errors import BadParams, UnknownCase, WindextError
from .extension import holomorphic_test, meromorphic_test
from .spectral import (
    DEFAULT_N,
    BoundaryFunction,
    CircleGrid,
    ZeroFactorSet,
    analyze,
    is_power_of_two,
    load_samples,
    save_samples,
)
from .winding import DELTA_REL, analytic_energy_ratio, phase_trace, winding_number

EXIT_OK = 0
EXIT_WITNESS = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_DATA = 65

SEED_ENV = "WINDEXT_SEED"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    grid_n: int | None = None
    delta_rel: float = DELTA_REL
    seed: int = 0
    input_path: str | None = None
    catalog: str | None = None
    params: tuple[tuple[str, str], ...] = ()
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.grid_n is not None and not (64 <= self.grid_n <= 16384 and is_power_of_two(self.grid_n)):
            raise UsageError(f"--grid-n must be a power of two in [64, 16384], got {self.grid_n}")
        if not self.delta_rel > 0 or any(not v > 0 for v in self.tolerances.values()):
            raise UsageError("tolerances must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        params = []
        for item in args.param or []:
            if "=" not in item:
                raise UsageError(f"--param expects key=value, got {item!r}")
            k, v = item.split("=", 1)
            params.append((k.strip(), v.strip()))
        return cls(args.grid_n, args.delta_rel, args.seed, args.input, args.catalog, tuple(params))

    def load(self) -> BoundaryFunction:
        if self.input_path and self.catalog:
            raise UsageError("give either --in or --catalog, not both")
        if self.input_path:
            return load_samples(self.input_path, self.grid_n)
        if self.catalog:
            return cat.make_case(self.catalog, dict(self.params), CircleGrid(self.grid_n or DEFAULT_N)).f
        raise UsageError("an input is required: --in FILE or --catalog NAME")

    def delta(self, f: BoundaryFunction) -> float:
        return self.delta_rel * f.sup_norm()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(c: complex) -> str:
    c = complex(c)
    return f"{c.real:.12g}{c.imag:+.12g}j"


def _emit(lines) -> None:
    for line in lines:
        print(line)


def _write_csv(path: str, header, rows) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _factors(text: str) -> ZeroFactorSet:
    try:
        return cat.parse_factor_list(text)
    except BadParams as exc:
        raise UsageError(str(exc)) from exc


def cmd_winding(cfg: RunConfig, args) -> int:
    f = cfg.load()
    rep = winding_number(f, cfg.delta(f))
    _emit(rep.lines())
    if args.trace:
        _write_csv(args.trace, ["theta", "phase"],
                   ([repr(float(t)), repr(float(p))] for t, p in zip(f.grid.theta, phase_trace(f))))
    return EXIT_OK


def cmd_fourier(cfg: RunConfig, args) -> int:
    f = cfg.load()
    s = analyze(f)
    _emit([f"M={s.M}", f"negative_energy={s.negative_energy():.12g}", f"total_energy={s.total_energy():.12g}",
           f"anti_analytic_ratio={analytic_energy_ratio(f):.6e}"])
    K = min(args.modes, s.M)
    _emit(f"c[{k}]={_fmt(s.coef(k))}" for k in range(-K, K + 1))
    if args.out:
        _write_csv(args.out, ["k", "re", "im"],
                   ([int(k), repr(float(c.real)), repr(float(c.imag))] for k, c in zip(s.modes(), s.coeffs)))
    return EXIT_OK


def cmd_extend(cfg: RunConfig, args) -> int:
    f = cfg.load()
    rep = meromorphic_test(f, args.budget) if args.budget > 0 else holomorphic_test(f)[1]
    _emit(rep.lines())
    if args.poles:
        _write_csv(args.poles, ["re", "im", "multiplicity"],
                   ([repr(p.real), repr(p.imag), m] for p, m in rep.pole_estimates))
    return EXIT_OK


def cmd_decompose(cfg: RunConfig, args) -> int:
    f = cfg.load()
    nodes = _factors(args.nodes)
    dec = newton_decompose(f, nodes)
    lines = [f"nodes={len(dec.nodes)}", f"total_multiplicity={nodes.total_multiplicity}"]
    lines += [f"A[{k}]={_fmt(a)}" for k, a in enumerate(dec.coeffs)]
    lines.append(f"residual={dec.residual:.3e}")
    herm = hermite_newton_coefficients(f, nodes)
    scale = max(1.0, float(np.max(np.abs(herm))) if herm.size else 1.0)
    gap = float(np.max(np.abs(herm - dec.coeffs))) / scale if herm.size else 0.0
    lines.append(f"hermite_agreement={gap:.3e}")
    _emit(lines)
    if args.out:
        save_samples(dec.remainder, args.out)
    return EXIT_OK


def cmd_factorize(cfg: RunConfig, args) -> int:
    f = cfg.load()
    fac = factorize_nonvanishing(f, cfg.delta(f))
    lines = [f"N={fac.N}", f"residual={fac.residual:.3e}"]
    K = min(args.modes, fac.F.M)
    lines += [f"F[{k}]={_fmt(fac.F.coef(k))}" for k in range(K + 1)]
    lines += [f"G[{k}]={_fmt(fac.G.coef(k))}" for k in range(K + 1)]
    _emit(lines)
    return EXIT_OK


def _witness_exit(status: str) -> int:
    if status == CERTIFIED:
        return EXIT_OK
    return EXIT_WITNESS if status == REFUTED else EXIT_INCONCLUSIVE


def cmd_witness(cfg: RunConfig, args) -> int:
    f = cfg.load()
    kind = {"pf1": PF_PLUS_ONE, "fpp": F_PLUS_PI_P}[args.family]
    factors = _factors(args.pi) if args.pi else ZeroFactorSet()
    family = ProbeFamily(kind, factors, args.max_degree, args.budget_j)
    res = witness_search(f, family, args.probes, cfg.seed, cfg.delta(f), args.workers)
    _emit([f"family={args.family}", f"budget_j={args.budget_j}"] + res.lines())
    return EXIT_WITNESS if res.found else EXIT_OK


def cmd_certify(cfg: RunConfig, args) -> int:
    f = cfg.load()
    if args.zeros is not None:
        res = certify_by_deflation(f, _factors(args.zeros), args.budget, probes=args.probes, seed=cfg.seed)
    else:
        res = certify_meromorphic_extension(f, _factors(args.nodes or ""), args.budget, cfg.delta(f),
                                            strict=args.strict, probes=args.probes, seed=cfg.seed)
    _emit(res.lines())
    return _witness_exit(res.status)


def cmd_classify(cfg: RunConfig, args) -> int:
    f = cfg.load()
    res = classify_with_factors(f, _factors(args.pi), args.budget, probes=args.probes, seed=cfg.seed)
    _emit(res.lines())
    return _witness_exit(res.status)


def cmd_shift_test(cfg: RunConfig, args) -> int:
    f = cfg.load()
    res = shift_criterion_test(f, args.probes, cfg.seed)
    _emit(res.lines())
    return _witness_exit(res.status)


def cmd_catalog(cfg: RunConfig, args) -> int:
    if args.action == "list":
        _emit(f"{name}: {cat.describe(name)}" for name in cat.case_names())
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog emit needs a case name")
    case = cat.make_case(args.name, dict(cfg.params), CircleGrid(cfg.grid_n or DEFAULT_N))
    _emit(case.lines())
    if args.out:
        save_samples(case.f, args.out)
    return EXIT_OK


def _scenario_counterexample(cfg: RunConfig, args) -> list[str]:
    case = cat.make_case("pole_counterexample", {}, CircleGrid(cfg.grid_n or DEFAULT_N))
    f = case.f
    s = analyze(f)
    rep = meromorphic_test(f, 1)
    w = witness_search(f, ProbeFamily(F_PLUS_PI_P, ZeroFactorSet.of([(0, 1)])), args.probes, cfg.seed)
    cls = classify_with_factors(f, ZeroFactorSet.of([(0, 1)]), 0)
    lines = ["scenario=counterexample", "function=z/(z-1/2)", f"winding={winding_number(f).winding}",
             f"negative_energy={s.negative_energy():.12g}", f"verdict={rep.verdict}",
             f"pole_count={rep.pole_count}"]
    lines += [f"pole[{i}]={_fmt(p)}" for i, (p, _) in enumerate(rep.pole_estimates)]
    lines += ["witness." + line for line in w.lines()]
    lines.append(f"classify_with_inside_factor={cls.status}")
    return lines


def _scenario_zero_free(cfg: RunConfig, args) -> list[str]:
    grid = CircleGrid(cfg.grid_n or DEFAULT_N)
    lines = ["scenario=zero-free"]
    for label, fn in (("exp(z)*(2+z)", lambda z: np.exp(z) * (2 + z)), ("2+conj(z)", lambda z: 2 + 1 / z)):
        f = BoundaryFunction.sample(fn, grid)
        h, shift = reduce_nonvanishing(f)
        ok, _ = holomorphic_test(h)
        w = witness_search(f, ProbeFamily(PF_PLUS_ONE), args.probes, cfg.seed)
        lines += [f"function={label}", f"winding={shift}", f"reciprocal_holomorphic={str(ok).lower()}",
                  f"witness_found={str(w.found).lower()}", f"probes_tried={w.probes_tried}"]
    return lines


def _scenario_shift(cfg: RunConfig, args) -> list[str]:
    grid = CircleGrid(cfg.grid_n or DEFAULT_N)
    lines = ["scenario=shift"]
    for label, fn in (("z^2", lambda z: z ** 2), ("conj(z)", lambda z: 1 / z), ("0", lambda z: 0 * z)):
        res = shift_criterion_test(BoundaryFunction.sample(fn, grid), args.probes, cfg.seed)
        found = res.witness is not None and res.witness.found
        lines += [f"function={label}", f"status={res.status}", f"witness_found={str(found).lower()}"]
    return lines


def _scenario_newton_roundtrip(cfg: RunConfig, args) -> list[str]:
    grid = CircleGrid(cfg.grid_n or DEFAULT_N)
    rng = np.random.default_rng(cfg.seed)
    modes = np.arange(-12, 13)
    coeffs = (rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)) / (1 + np.abs(modes)) ** 2
    f = BoundaryFunction.sample(lambda z: sum(c * z ** int(k) for k, c in zip(modes, coeffs)), grid)
    nodes = ZeroFactorSet.of([(1, 2), (-1, 1), (1j, 2)])
    dec = newton_decompose(f, nodes)
    herm = hermite_newton_coefficients(f, nodes)
    gap = float(np.max(np.abs(herm - dec.coeffs)) / max(1.0, np.max(np.abs(herm))))
    return ["scenario=newton-roundtrip", "nodes=1:2,-1:1,1j:2", f"residual={dec.residual:.3e}",
            f"hermite_agreement={gap:.3e}"]


SCENARIOS = {
    "counterexample": _scenario_counterexample,
    "zero-free": _scenario_zero_free,
    "shift": _scenario_shift,
    "newton-roundtrip": _scenario_newton_roundtrip,
}


def cmd_reproduce(cfg: RunConfig, args) -> int:
    _emit(SCENARIOS[args.scenario](cfg, args))
    return EXIT_OK


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="input", help="samples CSV with header theta,re,im")
    common.add_argument("--catalog", help="catalog case name instead of --in")
    common.add_argument("--param", action="append", help="catalog parameter key=value (repeatable)")
    common.add_argument("--grid-n", type=int, default=None, help="grid size (power of two, 64..16384)")
    common.add_argument("--delta-rel", type=float, default=DELTA_REL, help="zero guard relative to max|f|")
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="windext", description="Winding-number criteria for extendibility of boundary functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("winding", parents=[common], help="winding number of the samples")
    p.add_argument("--trace", help="write the cumulative phase to this CSV")
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("fourier", parents=[common], help="Fourier coefficients and energies")
    p.add_argument("--modes", type=int, default=8)
    p.add_argument("--out", help="write all coefficients to this CSV")
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("extend", parents=[common], help="holomorphic / meromorphic extension test")
    p.add_argument("--budget", type=int, default=0, help="pole budget J")
    p.add_argument("--poles", help="write pole estimates to this CSV")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("decompose", parents=[common], help="Newton decomposition at boundary nodes")
    p.add_argument("--nodes", required=True, help='e.g. "1:2,-1:1"')
    p.add_argument("--out", help="write the remainder samples to this CSV")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("factorize", parents=[common], help="F conj(G) z^N factorization of a zero-free function")
    p.add_argument("--modes", type=int, default=8)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("witness", parents=[common], help="search for a witness probe")
    p.add_argument("--family", choices=["pf1", "fpp"], default="pf1")
    p.add_argument("--budget-j", type=int, default=0)
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--pi", help='node factors for the fpp family, e.g. "0:1"')
    p.add_argument("--max-degree", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("certify", parents=[common], help="certify a meromorphic extension")
    p.add_argument("--nodes", help='boundary nodes, e.g. "1:2"')
    p.add_argument("--zeros", help="boundary zeros of f: deflate them and certify the reciprocal")
    p.add_argument("--budget", type=int, default=0)
    p.add_argument("--probes", type=int, default=0, help="witness probes when not certified")
    p.add_argument("--strict", action="store_true", help="reject nodes where f vanishes")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("classify", parents=[common], help="criterion with a mixed node polynomial")
    p.add_argument("--pi", required=True, help='e.g. "0.5:1:in,1:1:bd,2:1:out"')
    p.add_argument("--budget", type=int, default=0)
    p.add_argument("--probes", type=int, default=0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("shift-test", parents=[common], help="holomorphic extension through the f + c shift")
    p.add_argument("--probes", type=int, default=1000)
    p.set_defaults(func=cmd_shift_test)

    p = sub.add_parser("catalog", parents=[common], help="list or emit catalog cases")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out", help="write the samples to this CSV")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("reproduce", parents=[common], help="run a worked scenario end to end")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    p.add_argument("--probes", type=int, default=10000)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
        cfg = RunConfig.from_args(args)
        for name in ("probes", "budget", "budget_j", "modes", "max_degree", "workers"):
            if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be nonnegative")
        return args.func(cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownCase, BadParams) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WindextError as exc:
        print(f"error={type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error={exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

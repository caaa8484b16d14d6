"""Command-line front end.

Exit codes: 0 success, 2 domain or configuration error, 3 numeric error.
Errors are reported on stderr as one line of JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import HierarchicalModel, load_model
from .dependence import dependence_report
from .errors import ConfigurationError, DomainError, NotAvailableError, NumericError
from .model import (
    SibuyaModel,
    copula,
    copula_diagonal,
    hierarchical_copula,
    marginal_survival,
)
from .pricing import PricingInputs, ftd_fair_spread, ftd_present_value, level_curve
from .sampling import default_threads, model_fingerprint, sample, sample_hierarchical

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from exc


def _grid(text: str) -> list[float]:
    """``start:stop:num`` or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid must be start:stop:num, got {text!r}")
        return list(np.linspace(float(parts[0]), float(parts[1]), int(parts[2])))
    return _floats(text)


def _single(model) -> SibuyaModel:
    if isinstance(model, HierarchicalModel):
        if len(model.sectors) == 1:
            return model.sectors[0]
        raise ConfigurationError("this command needs a single-sector model")
    return model


def cmd_eval(args) -> None:
    model = load_model(args.model)
    u = _floats(args.u)
    if isinstance(model, HierarchicalModel):
        val = hierarchical_copula(model.sectors, u)
    else:
        val = copula(model, u)
    print(_fmt(val))


def cmd_surface(args) -> None:
    model = _single(load_model(args.model))
    if model.d != 2:
        raise ConfigurationError("surface needs a bivariate model")
    if args.grid < 2:
        raise DomainError("grid needs at least 2 points")
    g = np.linspace(0.0, 1.0, args.grid)
    u1, u2 = np.meshgrid(g, g, indexing="ij")
    c = np.asarray(copula(model, np.stack([u1, u2], axis=-1)))
    data = np.column_stack([u1.ravel(), u2.ravel(), c.ravel()])
    _write_csv(args.out, "u1,u2,C", data)


def cmd_diag(args) -> None:
    model = _single(load_model(args.model))
    if args.u is not None:
        for u in _floats(args.u):
            print(_fmt(copula_diagonal(model, u)))
        return
    g = np.linspace(0.0, 1.0, args.grid)
    _write_csv(args.out, "u,C", np.column_stack([g, np.asarray(copula_diagonal(model, g))]))


def cmd_sample(args) -> None:
    model = load_model(args.model)
    if args.n < 1:
        raise DomainError("--n must be >= 1")
    if isinstance(model, HierarchicalModel):
        batch = sample_hierarchical(model.sectors, args.n, args.seed, args.threads)
    else:
        batch = sample(model, args.n, args.seed, args.threads)
    batch.to_csv(args.out)


def cmd_deps(args) -> None:
    model = _single(load_model(args.model))
    print(json.dumps(dependence_report(model).to_dict(), sort_keys=True))


def _pricing_inputs(args, spread=None) -> PricingInputs:
    return PricingInputs(args.cds_intensity, args.recovery, args.rate, args.maturity, spread)


def cmd_price(args) -> None:
    model = _single(load_model(args.model))
    inputs = _pricing_inputs(args, args.spread)
    if args.spread is None:
        print(_fmt(ftd_fair_spread(model, inputs)))
    else:
        print(_fmt(ftd_present_value(model, inputs)))


def cmd_levelcurve(args) -> None:
    model = _single(load_model(args.model))
    if not all(r.is_constant for r in model.drifts):
        raise ConfigurationError("level curves need constant drifts")
    mu = [r.level for r in model.drifts]
    inputs = _pricing_inputs(args)
    rows = []
    for target in _floats(args.target):
        for H, lam in level_curve(mu, inputs, target, _grid(args.h_grid)):
            rows.append((H, lam, target))
    _write_csv(args.out, "H,lambda,spread", np.array(rows))


def cmd_validate(args) -> None:
    model = load_model(args.model)
    sectors = model.sectors if isinstance(model, HierarchicalModel) else (model,)
    report = {
        "ok": True,
        "kind": "hierarchical" if isinstance(model, HierarchicalModel) else "single",
        "d": model.d,
        "model_hash": model_fingerprint(model),
        "sectors": [],
    }
    for m in sectors:
        info = {"d": m.d, "constant_rates": m.has_constant_rates, "triggers": m.triggers.kind}
        scale = max([r.scale for r in m.drifts] + [m.jump.intensity.scale if m.jump.H > 0 else 0.0])
        horizon = 1e6 / scale
        info["horizon"] = horizon
        info["survival_at_horizon"] = [float(marginal_survival(m, i, horizon)) for i in range(m.d)]
        report["sectors"].append(info)
    print(json.dumps(report, sort_keys=True))


def _write_csv(out, header: str, data: np.ndarray) -> None:
    if out is None or out == "-":
        np.savetxt(sys.stdout, data, fmt="%.17g", delimiter=",", header=header, comments="")
        return
    with open(Path(out), "w", newline="\n") as fh:
        np.savetxt(fh, data, fmt="%.17g", delimiter=",", header=header, comments="")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sibuya", description="Sibuya copulas and jump-driven default times.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_model(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--model", required=True, help="model config (JSON)")
        return p

    p = with_model("eval", "evaluate the copula at one point")
    p.add_argument("--u", required=True, help="comma-separated probabilities")
    p.set_defaults(func=cmd_eval)

    p = with_model("surface", "bivariate copula on a uniform grid")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=cmd_surface)

    p = with_model("diag", "copula diagonal")
    p.add_argument("--u", help="comma-separated points; omit to emit a grid")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=cmd_diag)

    p = with_model("sample", "simulate default times and copula variates")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: $SIBUYA_THREADS or 1)")
    p.set_defaults(func=cmd_sample)

    p = with_model("deps", "tail and extremal dependence report (JSON)")
    p.set_defaults(func=cmd_deps)

    def with_market(p):
        p.add_argument("--cds-intensity", type=float, required=True)
        p.add_argument("--recovery", type=float, default=0.4)
        p.add_argument("--rate", type=float, default=0.0)
        p.add_argument("--maturity", type=float, default=5.0)

    p = sub.add_parser("price", help="contract valuation")
    p.add_argument("product", choices=["ftd"])
    p.add_argument("--model", required=True)
    with_market(p)
    p.add_argument("--spread", type=float, default=None, help="value at this spread instead of solving for it")
    p.set_defaults(func=cmd_price)

    p = with_model("levelcurve", "(H, lambda) pairs at fixed first-to-default spreads")
    with_market(p)
    p.add_argument("--target", required=True, help="comma-separated target spreads")
    p.add_argument("--h-grid", default="0.5:10:20", help="start:stop:num or comma list")
    p.add_argument("--out")
    p.set_defaults(func=cmd_levelcurve)

    p = with_model("validate", "check model properness")
    p.set_defaults(func=cmd_validate)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", None) is None and hasattr(args, "threads"):
            args.threads = default_threads()
        args.func(args)
    except _UsageError as exc:
        return _fail(EXIT_DOMAIN, "usage", str(exc))
    except NumericError as exc:
        return _fail(EXIT_NUMERIC, "numeric", str(exc))
    except (ConfigurationError, DomainError, NotAvailableError, ValueError) as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, str(exc))
    except (ArithmeticError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, "numeric", str(exc))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

    ipls check   --builtin okumura --delta 0.01
    ipls solve   --builtin okumura --method ignp
    ipls param   --builtin example2 --form k --inner
    ipls hull    --builtin example2 --signs from-param
    ipls metrics --builtin okumura --delta 0.25
    ipls oracle  --input system.json --count 10000 --seed 7

Exit codes: 0 success, 1 input error, 2 regularity failure (singular
midpoint matrix or spectral-radius condition violated), 3 sign-based hull
not certified.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .builtins import BUILTINS, PDM_OKUMURA_001, get_builtin
from .enclosure import NoConvergence, NotStronglyRegular, analyze, central_data
from .hull import TooManyParameters, Verdict, hull_report, max_vertex_k
from .interval import EMPTY, FAST, RIGOROUS, Interval, rounding
from .metrics import quality_rows, render_table
from .oracle import UNIFORM, VERTICES_PLUS_UNIFORM, NearSingularBox, sample_hull
from .parameterized import build_pkrank1, build_pprank1, column_names, evaluate_param, inner_estimate
from .rankone import build_representation
from .system import SystemFormatError, UnusedParameter, load_system

EXIT_OK, EXIT_INPUT, EXIT_REGULARITY, EXIT_HULL = 0, 1, 2, 3

COMMANDS = ("check", "solve", "param", "hull", "metrics", "oracle")


@dataclass(frozen=True)
class RunConfig:
    command: str
    builtin: str | None = None
    input: str | None = None
    delta: float = 0.01
    scale: float = 1.0
    method: str = "iGRank1"
    form: str = "k"
    inner: bool = False
    signs: str = "from-param"
    no_oracle: bool = False
    rounding: str = FAST
    format: str = "json"
    seed: int = 0
    count: int = 10_000
    strategy: str = UNIFORM

    def __post_init__(self):
        if self.builtin is not None and self.builtin not in BUILTINS:
            raise ValueError(f"unknown built-in {self.builtin!r}")
        if (self.builtin is None) == (self.input is None):
            raise ValueError("give exactly one of --builtin or --input")
        if self.delta < 0 or self.scale < 0 or self.count <= 0:
            raise ValueError("delta and scale must be nonnegative, count positive")


def load_config_system(cfg: RunConfig):
    if cfg.builtin is not None:
        system = get_builtin(cfg.builtin, cfg.delta)
    else:
        system = load_system(Path(cfg.input).read_text())
    if cfg.scale != 1.0:
        system = system.scaled(cfg.scale)
    return system


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _fmt_iv(iv) -> str:
    if iv is EMPTY or iv is None:
        return "empty"
    return f"[{_fmt(iv.lo)}, {_fmt(iv.hi)}]"


def _emit(cfg: RunConfig, payload: dict, text: str, out) -> None:
    if cfg.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text.rstrip() + "\n")


def cmd_check(cfg: RunConfig, out) -> int:
    system = load_config_system(cfg)
    rep = build_representation(system)
    cd = central_data(system, rep)
    payload = {
        "rho_strong": cd.rho_strong,
        "rho_weak": cd.rho_weak,
        "strongly_regular": cd.strongly_regular,
        "weakly_regular": cd.weakly_regular,
        "gamma": rep.gamma,
        "gamma_k": list(rep.gamma_k),
        "transposed": rep.transposed,
        "pi_prime": [system.names[k] for k in rep.partition.pi_prime],
        "pi_double_prime": [system.names[k] for k in rep.partition.pi_double_prime],
    }
    text = "\n".join([
        f"rho_strong = {cd.rho_strong:.6g}  ({'holds' if cd.strongly_regular else 'FAILS'})",
        f"rho_weak   = {cd.rho_weak:.6g}  ({'holds' if cd.weakly_regular else 'FAILS'})",
        f"gamma = {rep.gamma} {list(rep.gamma_k)}, orientation = {'transposed' if rep.transposed else 'direct'}",
    ])
    _emit(cfg, payload, text, out)
    return EXIT_OK if cd.strongly_regular else EXIT_REGULARITY


def cmd_solve(cfg: RunConfig, out) -> int:
    an = analyze(load_config_system(cfg))
    enc = an.ignp() if cfg.method.lower() in ("ignp", "ignp-form") else an.outer()
    lines = [f"method {enc.method_tag}, rho_strong {an.cd.rho_strong:.6g}, {enc.iterations} iterations"]
    lines += [f"x{i + 1} = {_fmt_iv(iv)}" for i, iv in enumerate(enc.x_box)]
    _emit(cfg, enc.to_json(an.cd), "\n".join(lines), out)
    return EXIT_OK


def cmd_param(cfg: RunConfig, out) -> int:
    an = analyze(load_config_system(cfg))
    system = an.sys
    if cfg.form == "p":
        sol = build_pprank1(an.cd, an.rep, an.reduced, system.p_box)
        payload = {
            "form": "p",
            "x_mid": sol.x_mid.tolist(),
            "U": sol.U.tolist(),
            "r_hat": [0.0] * system.n,
            "column_order": column_names(an.rep, system.names),
        }
    else:
        sol = build_pkrank1(an.cd, an.rep, an.reduced, system.p_box, system.names)
        payload = {"form": "k", **sol.to_json()}
    box = evaluate_param(sol, system.p_box)
    payload["enclosure"] = box.to_json()
    lines = [f"x_mid = {[_fmt(v) for v in sol.x_mid]}", f"columns {payload['column_order']}", "U ="]
    lines += ["  " + " ".join(f"{v:12.6g}" for v in row) for row in np.asarray(payload["U"])]
    lines.append(f"r_hat = {[_fmt(v) for v in payload['r_hat']]}")
    lines += [f"x{i + 1}(p) over box = {_fmt_iv(iv)}" for i, iv in enumerate(box)]
    if cfg.inner:
        if cfg.form != "k":
            raise ValueError("--inner needs --form k")
        est = inner_estimate(sol, system.p_box)
        payload["inner"] = est.to_json()
        lines += [f"x{i + 1} inner = {_fmt_iv(iv)}" for i, iv in enumerate(est.x_in)]
    _emit(cfg, payload, "\n".join(lines), out)
    return EXIT_OK


def cmd_hull(cfg: RunConfig, out) -> int:
    an = analyze(load_config_system(cfg))
    report = hull_report(an, cfg.signs, use_oracle=not cfg.no_oracle)
    text = report.render() if report.oracle is not None else "\n".join(
        f"x{i + 1}: by-signs {_fmt_iv(h)} (not checked)" for i, h in enumerate(report.endpoint.hull))
    uncertified = [v for v in report.verdicts if v in (Verdict.MISMATCH, Verdict.ZERO_COEFFICIENT)]
    if uncertified and cfg.signs != "oracle":
        text += ("\nWARNING: the sign-based box is not certified as the interval hull; "
                 "parameterized-solution signs do not match the true monotonicity.")
    _emit(cfg, report.to_json(), text, out)
    return EXIT_HULL if uncertified and cfg.signs != "oracle" else EXIT_OK


def cmd_metrics(cfg: RunConfig, out) -> int:
    system = load_config_system(cfg)
    an = analyze(system)
    sol = build_pkrank1(an.cd, an.rep, an.reduced, system.p_box, system.names)
    est = inner_estimate(sol, system.p_box)
    outer = an.outer().x_box
    reference = None
    if cfg.builtin == "okumura" and cfg.delta == 0.01 and cfg.scale == 1.0:
        reference = [Interval(*b) for b in PDM_OKUMURA_001["outer"]]
    rows = quality_rows(est.x_in, outer, reference)
    payload = {
        "rows": [r.to_json() for r in rows],
        "outer": outer.to_json(),
        "inner": [c.to_json() for c in est.x_in],
        "reference": "PDM published bounds" if reference is not None else None,
    }
    _emit(cfg, payload, render_table(rows), out)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out) -> int:
    system = load_config_system(cfg)
    hull = sample_hull(system, cfg.count, cfg.seed, cfg.strategy)
    lines = [f"{hull.sample_count} samples (seed {hull.seed}, {hull.strategy}), {hull.singular_count} singular"]
    lines += [f"x{i + 1} in at least {_fmt_iv(iv)}" for i, iv in enumerate(hull.hull_lower_bound)]
    _emit(cfg, hull.to_json(), "\n".join(lines), out)
    return EXIT_OK


HANDLERS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "param": cmd_param,
    "hull": cmd_hull,
    "metrics": cmd_metrics,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ipls", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=BUILTINS)
    src.add_argument("--input", metavar="FILE.json")
    parser.add_argument("--delta", type=float, default=0.01, help="okumura parameter half-width")
    parser.add_argument("--scale", type=float, default=1.0, help="multiply every parameter radius")
    parser.add_argument("--method", default="iGRank1", choices=["iGRank1", "ignp"])
    parser.add_argument("--form", default="k", choices=["p", "k"])
    parser.add_argument("--inner", action="store_true")
    parser.add_argument("--signs", default="from-param", choices=["from-param", "gradient", "oracle"])
    parser.add_argument("--no-oracle", action="store_true",
                        help=f"skip vertex enumeration (cap K <= {max_vertex_k()}, env IPLS_MAX_VERTEX_K)")
    parser.add_argument("--rounding", default=FAST, choices=[FAST, RIGOROUS])
    parser.add_argument("--format", default="json", choices=["json", "text"])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=10_000)
    parser.add_argument("--strategy", default=UNIFORM, choices=[UNIFORM, VERTICES_PLUS_UNIFORM])
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    opts = vars(args)
    opts.pop("verbose")
    try:
        cfg = RunConfig(**opts)
        with rounding(cfg.rounding):
            return HANDLERS[cfg.command](cfg, out)
    except (linalg.Singular, NotStronglyRegular, NoConvergence) as exc:
        print(f"ipls: regularity failure: {exc}", file=sys.stderr)
        return EXIT_REGULARITY
    except (SystemFormatError, UnusedParameter, TooManyParameters, NearSingularBox,
            OSError, ValueError, KeyError) as exc:
        print(f"ipls: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

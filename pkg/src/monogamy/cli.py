"""Command-line interface: ``monogamy eval|sweep|campaign|reproduce``.

Exit codes: 0 success, 1 campaign found violations, 2 usage or input error.
Reports are JSON (``schema_version`` "1"), tables are CSV; all floats are
written with 12 significant digits so identical invocations give identical
bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bd
from . import harness
from .bounds import BoundSpec, EntanglementProfile, Family
from .gsd import SchmidtParams, gsd_analytic_measures, make_gsd_state, parse_params
from .linalg import ContractError, LayoutError
from .measures import (
    as_pure_state,
    concurrence_pure,
    concurrence_two_qubit,
    negativity,
    num_qubits,
    pair_state,
    tripartite_measures,
)

SCHEMA_VERSION = "1"
SIG_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x: float) -> str:
    """Positional decimal with at most 12 significant digits, trailing zeros trimmed."""
    if x == 0:
        return "0"
    return np.format_float_positional(float(x), precision=SIG_DIGITS, unique=False,
                                      fractional=False, trim="-")


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Family):
        return obj.value
    return obj


def render_json(command: dict, payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "payload": payload}
    return json.dumps(_round(doc), indent=2, ensure_ascii=False) + "\n"


def render_csv(rows, columns=harness.TABLE_COLUMNS) -> str:
    lines = [",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decimal(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def _decimal_list(text: str) -> list[float]:
    return [_decimal(s) for s in text.split(",") if s.strip()]


def _read_amplitudes(path: str) -> np.ndarray:
    """One amplitude per line: ``re`` or ``re,im`` (``#`` starts a comment)."""
    amps = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in line.replace(",", " ").split()]
            if len(parts) not in (1, 2):
                raise ContractError(f"bad amplitude line {line!r}")
            re_, im = float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0
            amps.append(complex(re_, im))
    v = np.array(amps, dtype=complex)
    norm = np.linalg.norm(v)
    if v.size == 0 or abs(norm ** 2 - 1) > 1e-6:
        raise ContractError(f"amplitudes are not normalized (norm^2 {norm ** 2:.9g})")
    return v / norm


def _families(text: str | None) -> list[Family]:
    if not text:
        return list(Family)
    return [Family.parse(s) for s in text.split(",") if s.strip()]


def _state_measures(psi: np.ndarray, measure: str) -> dict:
    n = num_qubits(psi.size)
    if n == 3:
        return tripartite_measures(psi, measure)
    out = {}
    rho = np.outer(psi, psi.conj())
    for b in range(1, n):
        out[f"A,B{b}"] = concurrence_two_qubit(pair_state(psi, 0, b))
    out["A|rest"] = (concurrence_pure(psi, [0]) if measure == "concurrence"
                     else negativity(rho, [2] * n, [0]))
    return out


def _bound_reports(profile: EntanglementProfile, families, beta, k, m, literal) -> list[dict]:
    reports = []
    for fam in families:
        if beta < fam.min_beta:
            reports.append({"family": fam.value, "skipped": f"beta < {fam.min_beta:g}"})
            continue
        try:
            rep = bd.evaluate(profile, BoundSpec(fam, beta, k, m), literal=literal)
        except bd.InfeasibleConditionError as exc:
            reports.append({"family": fam.value, "error": str(exc)})
            continue
        reports.append(rep.as_dict())
    return reports


def cmd_eval(args) -> int:
    measure = args.measure
    payload: dict = {"measure": measure}
    if args.pairwise is not None:
        profile = EntanglementProfile(tuple(_decimal_list(args.pairwise)),
                                      tuple(_decimal_list(args.tails or "")))
        payload["state"] = {"source": "profile"}
    else:
        if args.gsd is not None:
            params = parse_params(args.gsd, args.phi)
            psi = make_gsd_state(params)
            analytic = gsd_analytic_measures(params).as_dict()
            payload["state"] = {"source": "gsd", "lambdas": list(params.lambdas), "phi": params.phi}
        elif args.amplitudes is not None:
            psi = as_pure_state(_read_amplitudes(args.amplitudes))
            analytic = None
            payload["state"] = {"source": "amplitudes", "num_qubits": num_qubits(psi.size)}
        else:
            raise UsageError("give a state via --gsd, --amplitudes or --pairwise/--tails")
        numeric = _state_measures(psi, measure)
        payload["measures"] = {"numeric": numeric}
        if analytic is not None:
            payload["measures"]["analytic"] = analytic
        if psi.size != 8:
            payload["bounds"] = []
            payload["note"] = "bounds need tail measures; for more than three qubits pass --pairwise/--tails"
            return _finish(args, payload)
        profile = EntanglementProfile.tripartite(numeric["AB"], numeric["AC"], numeric["A|BC"])

    payload["profile"] = {"pairwise": list(profile.pairwise), "tails": list(profile.tails)}
    cond = bd.check_conditions(profile, args.k)
    payload["conditions"] = {
        "k": args.k, "head_slack": list(cond.head_slack), "tail_slack": list(cond.tail_slack),
        "feasible_m": list(cond.feasible_m),
    }
    payload["truth_beta"] = profile.tails[0] ** args.beta
    payload["bounds"] = _bound_reports(profile, _families(args.family), args.beta, args.k,
                                       args.m, args.literal)
    return _finish(args, payload)


def _finish(args, payload: dict) -> int:
    _emit(render_json(_echo(args), payload), getattr(args, "out", None))
    return 0


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _table_state(args) -> tuple[float, float, float]:
    if args.state in harness.FIGURE_PROFILES:
        return harness.FIGURE_PROFILES[args.state]
    params = parse_params(args.state, args.phi)
    m = tripartite_measures(make_gsd_state(params), args.measure)
    return m["AB"], m["AC"], m["A|BC"]


def cmd_sweep(args) -> int:
    e_ab, e_ac, truth = _table_state(args)
    betas = harness.grid((args.beta_min, args.beta_max, args.step))
    if args.beta_min < 4:
        raise UsageError("sweep tables include TAO and NEW, which need beta >= 4")
    if not 0 < args.k <= 1:
        raise UsageError("k must lie in (0, 1]")
    if e_ac * e_ac > args.k * e_ab * e_ab + bd.COND_TOL:
        print(f"warning: E_AC^2 > k E_AB^2 at k={args.k:g}; bounds are not certified",
              file=sys.stderr)
    _emit(render_csv(harness.bound_table(e_ab, e_ac, truth, args.k, betas)), args.out)
    return 0


def cmd_reproduce(args) -> int:
    if not 0 < args.k <= 1:
        raise UsageError("k must lie in (0, 1]")
    if args.beta_min < 4:
        raise UsageError("figures cover beta >= 4")
    rows = harness.reproduce_figure(args.figure, args.k, (args.beta_min, args.beta_max, args.step))
    _emit(render_csv(rows), args.out)
    return 0


def cmd_campaign(args) -> int:
    cfg_kwargs = dict(seed=args.seed, sample_count=args.samples, tolerance=args.tolerance,
                      measure=args.measure, workers=args.workers)
    if args.betas:
        cfg_kwargs["betas"] = tuple(_decimal_list(args.betas))
    if args.ks:
        cfg_kwargs["ks"] = tuple(_decimal_list(args.ks))
    if args.beta_grid:
        cfg_kwargs["beta_grid"] = tuple(_decimal_list(args.beta_grid))
    if args.k_grid:
        cfg_kwargs["k_grid"] = tuple(_decimal_list(args.k_grid))
    if args.x_grid:
        cfg_kwargs["x_grid"] = tuple(_decimal_list(args.x_grid))
    try:
        cfg = harness.CampaignConfig(**cfg_kwargs)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None

    if args.kind == "ckw":
        res = harness.run_ckw_campaign(cfg)
    elif args.kind == "lemma":
        res = harness.run_lemma_scan(cfg, exploratory=args.exploratory)
    elif args.kind == "validity":
        res = harness.run_bound_validity(cfg, Family.parse(args.family))
    else:
        res = harness.run_dominance(cfg)
    command = _echo(args)
    command.pop("workers", None)  # worker count never changes results
    _emit(render_json(command, res.as_dict()), args.out)
    return 1 if res.violations else 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monogamy", description="Entanglement measures and monogamy bounds for small qubit systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="measures and bound values for one state or profile")
    e.add_argument("--gsd", help="five comma-separated lambdas l0,...,l4")
    e.add_argument("--phi", type=_decimal, default=0.0)
    e.add_argument("--amplitudes", help="file with one amplitude per line (re or re,im)")
    e.add_argument("--pairwise", help="profile mode: comma-separated E(A B_i)")
    e.add_argument("--tails", help="profile mode: comma-separated E(A|B_i...B_{N-1})")
    e.add_argument("--beta", type=_decimal, required=True)
    e.add_argument("--k", type=_decimal, default=1.0)
    e.add_argument("--m", type=int, default=None, help="split index (default: largest feasible)")
    e.add_argument("--family", help="comma-separated families (default: all)")
    e.add_argument("--measure", choices=("concurrence", "negativity"), default="concurrence")
    e.add_argument("--literal", action="store_true", help="drop the leading E_AB1 term of NEW")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", help="CSV of bounds versus beta for one state")
    s.add_argument("--state", default="fig1", help="fig1, fig2 or five comma-separated lambdas")
    s.add_argument("--phi", type=_decimal, default=0.0)
    s.add_argument("--measure", choices=("concurrence", "negativity"), default="concurrence")
    s.add_argument("--beta-min", type=_decimal, default=4.0)
    s.add_argument("--beta-max", type=_decimal, default=12.0)
    s.add_argument("--step", type=_decimal, default=0.05)
    s.add_argument("--k", type=_decimal, default=0.8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("campaign", help="seeded verification campaign (JSON)")
    c.add_argument("--kind", choices=("ckw", "lemma", "validity", "dominance"), required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--tolerance", type=_decimal, default=1e-9)
    c.add_argument("--family", default="NEW", help="bound family for --kind validity")
    c.add_argument("--measure", choices=("concurrence", "negativity"), default="concurrence")
    c.add_argument("--betas", help="explicit comma-separated beta values")
    c.add_argument("--ks", help="explicit comma-separated k values")
    c.add_argument("--beta-grid", help="min,max,step")
    c.add_argument("--k-grid", help="min,max,step")
    c.add_argument("--x-grid", help="min,max,step for --kind lemma")
    c.add_argument("--exploratory", action="store_true", help="lemma scan: report only, allow x < 2")
    c.add_argument("--workers", type=int, default=None,
                   help=f"worker threads (default ${harness.THREADS_ENV} or CPU count)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_campaign)

    r = sub.add_parser("reproduce", help="figure data as CSV")
    r.add_argument("figure", help="fig1 or fig2")
    r.add_argument("--k", type=_decimal, default=0.8)
    r.add_argument("--beta-min", type=_decimal, default=4.0)
    r.add_argument("--beta-max", type=_decimal, default=12.0)
    r.add_argument("--step", type=_decimal, default=0.05)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "figure", None) is not None and args.figure not in harness.FIGURE_PROFILES:
            raise UsageError(f"unknown figure {args.figure!r}")
        return args.func(args)
    except UsageError as exc:
        print(f"monogamy: error: {exc}", file=sys.stderr)
        return 2
    except (ContractError, LayoutError, bd.DomainError, ValueError, OSError) as exc:
        print(f"monogamy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

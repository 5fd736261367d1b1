"""Command-line front end.

Every subcommand writes plot-ready data (CSV by default, JSON with
``--format json``) to ``--out`` or stdout. Runs are deterministic: the same
invocation yields byte-identical output.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qdbus.chain import ChainSpec, EngineeredPST, build_h1, pst_transfer_time
from qdbus.energetics import (
    M_E,
    MEV,
    PST_LITERAL_NOTE,
    MaterialParams,
    PstEventModel,
    charging_energy,
    classical_wire_cost,
    freeze_ratio,
    pst_cost,
    required_freeze_energy,
    shuttling_cost,
)
from qdbus.errors import ContractError, NumericalError
from qdbus.propagator import eigendecompose, transfer_fidelity
from qdbus.protocol import (
    run_segmented_two_electron_bus,
    run_single_electron_bus,
    run_two_electron_bus,
)
from qdbus.separation import DoubleDotSpec, separation_fidelity_trace

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

PST_TOLERANCE = 1e-8
FREEZE_MARKERS = (0.83, 1.0)
CONFIG_KEYS = ("m_eff", "eps_r", "hbar_omega0_meV")


class UsageError(ContractError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Material overrides and output options. ``m_eff`` is in electron masses."""

    m_eff: float = 0.067
    eps_r: float = 12.9
    hbar_omega0_meV: float = 3.0
    fmt: str = "csv"
    out: Path | None = None

    def params(self, eta: float = 1.86) -> MaterialParams:
        return MaterialParams(
            m_eff=self.m_eff * M_E,
            eps_r=self.eps_r,
            hbar_omega0=self.hbar_omega0_meV * MEV,
            eta=eta,
        )


def read_config_file(path: Path) -> dict[str, float]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r} (allowed: {CONFIG_KEYS})")
        try:
            values[key] = float(value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: {value!r} is not a number") from None
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config is not None:
        values.update(read_config_file(Path(args.config)))
    for key in CONFIG_KEYS:
        override = getattr(args, key.lower())
        if override is not None:
            values[key] = override
    return RunConfig(fmt=args.format, out=Path(args.out) if args.out else None, **values)


def parse_n_list(text: str) -> list[int]:
    """``"2..32"``, ``"4,8,16"`` or a mix like ``"2..5,16"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse chain lengths {text!r}") from None
    if not out:
        raise UsageError("no chain lengths given")
    return out


# -- emitters -----------------------------------------------------------------


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise NumericalError(f"non-finite value {x} in output")
        return x
    return x


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in map(_num, row)])
    return buf.getvalue()


def render_json(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return _num(o)

    return json.dumps(clean(obj), indent=2) + "\n"


def emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text, encoding="utf-8")


def emit_table(cfg: RunConfig, header: list[str], rows: list[list], meta: dict | None = None):
    if cfg.fmt == "json":
        payload = {"columns": header, "rows": [dict(zip(header, r)) for r in rows]}
        if meta:
            payload = {"metadata": meta, **payload}
        emit(cfg, render_json(payload))
    else:
        emit(cfg, render_csv(header, rows))


# -- commands -----------------------------------------------------------------


def cmd_pst_check(args, cfg: RunConfig) -> int:
    if not args.gamma_max > 0:
        raise UsageError("--gamma-max must be > 0")
    rows = []
    ok = True
    for n in parse_n_list(args.n):
        spec = ChainSpec.from_profile(n, EngineeredPST(args.gamma_max))
        t = pst_transfer_time(n, args.gamma_max)
        f = transfer_fidelity(eigendecompose(build_h1(spec)), 0, n - 1, t)
        ok &= f >= 1.0 - PST_TOLERANCE
        rows.append([n, t, f])
    emit_table(cfg, ["n", "t_predicted", "fidelity"], rows)
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_separation(args, cfg: RunConfig) -> int:
    eps2 = args.eps2
    spec = DoubleDotSpec(gamma=args.gamma, onsite_u=args.u, capacitive_v=args.v,
                         eps1=args.eps1, eps2=eps2)
    res = separation_fidelity_trace(spec, t_max=args.t_max, n_points=args.points)
    summary = {
        "u": args.u, "v": args.v, "eps1": args.eps1, "eps2": eps2,
        **res.summary(),
    }
    if cfg.fmt == "json":
        emit(cfg, render_json({
            "summary": summary,
            "trace": {"t_in_inverse_gamma": (res.trace.times * args.gamma).tolist(),
                      "fidelity": res.trace.fidelities.tolist()},
        }))
    else:
        rows = [[t * args.gamma, f] for t, f in zip(res.trace.times, res.trace.fidelities)]
        emit(cfg, render_csv(["t_in_inverse_gamma", "fidelity"], rows))
        text = render_json(summary)
        if args.summary:
            Path(args.summary).write_text(text, encoding="utf-8")
        else:
            sys.stderr.write(text)
    return EXIT_OK


def cmd_freeze_curve(args, cfg: RunConfig) -> int:
    if args.points < 2 or not args.max_delta_e > 0:
        raise UsageError("--points must be >= 2 and --max-delta-e > 0")
    params = cfg.params(args.eta)
    n_e = 2 if args.encoding == "2e" else 1
    e_c = charging_energy(params, n_e)
    grid = set(np.linspace(0.0, args.max_delta_e, args.points).tolist())
    grid.update(x for x in FREEZE_MARKERS if x <= args.max_delta_e)
    rows = [[x, freeze_ratio(args.eta, params, x * e_c, args.convention)] for x in sorted(grid)]
    meta = {
        "eta": args.eta,
        "encoding": args.encoding,
        "convention": args.convention,
        "charging_energy_mev": e_c,
        "delta_e_for_1pct_over_ec":
            required_freeze_energy(args.eta, params, 0.01, args.convention) / e_c,
    }
    emit_table(cfg, ["delta_e_over_ec", "ratio"], rows, meta)
    return EXIT_OK


def cmd_energy_compare(args, cfg: RunConfig) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    params = cfg.params()
    model = PstEventModel(literal=args.pst_model == "literal")
    pst1 = pst_cost(params, "1e", model=model).energy_mev
    pst2 = pst_cost(params, "2e", model=model).energy_mev
    literal2 = pst_cost(params, "2e", model=PstEventModel(literal=True)).energy_mev
    per_dot_1e = shuttling_cost(1, params, "1e").energy_mev
    per_dot_2e = shuttling_cost(1, params, "2e").energy_mev
    rows = []
    for n in range(1, args.n_max + 1):
        rows.append([n, pst1, pst2, per_dot_1e * n, per_dot_2e * n,
                     classical_wire_cost(n).energy_mev])
    header = ["n", "pst_1e", "pst_2e", "shuttle_1e", "shuttle_2e", "classical"]
    meta = {
        "units": "meV",
        "pst_model": args.pst_model,
        "pst_2e_literal_formula_mev": literal2,
        "pst_note": PST_LITERAL_NOTE,
    }
    emit_table(cfg, header, rows, meta)
    return EXIT_OK


def cmd_protocol(args, cfg: RunConfig) -> int:
    params = cfg.params()
    hbar_gamma = args.hbar_gamma_uev * 1e-3
    if args.encoding == "1e":
        report = run_single_electron_bus(args.n, hbar_gamma, params)
    else:
        sep = DoubleDotSpec.tuned(onsite_u=args.u, capacitive_v=args.v)
        if args.segments:
            report = run_segmented_two_electron_bus(args.n, args.segments, hbar_gamma, sep, params)
        else:
            report = run_two_electron_bus(args.n, hbar_gamma, sep, params)
    emit(cfg, render_json(report.to_dict()))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", help="key=value file with material overrides")
    common.add_argument("--m-eff", dest="m_eff", type=float, help="effective mass / m_e")
    common.add_argument("--eps-r", dest="eps_r", type=float)
    common.add_argument("--hbar-omega0-mev", dest="hbar_omega0_mev", type=float)

    parser = argparse.ArgumentParser(prog="qdbus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pst-check", parents=[common], help="perfect-transfer fidelity per N")
    p.add_argument("--n", default="2..32", help="chain lengths, e.g. 2..32 or 4,8,16")
    p.add_argument("--gamma-max", type=float, default=1.0)
    p.set_defaults(func=cmd_pst_check)

    p = sub.add_parser("separation", parents=[common], help="double-dot separation trace")
    p.add_argument("--u", type=float, default=20.0)
    p.add_argument("--v", type=float, default=10.0)
    p.add_argument("--eps1", type=float, default=0.0)
    p.add_argument("--eps2", type=float, default=10.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--summary", help="write the JSON summary here (csv mode)")
    p.set_defaults(func=cmd_separation)

    p = sub.add_parser("freeze-curve", parents=[common], help="tunnel suppression vs energy")
    p.add_argument("--eta", type=float, default=1.86)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--max-delta-e", type=float, default=2.0, help="in units of E_C")
    p.add_argument("--encoding", choices=("1e", "2e"), default="2e")
    p.add_argument("--convention", choices=("element", "physical"), default="element")
    p.set_defaults(func=cmd_freeze_curve)

    p = sub.add_parser("energy-compare", parents=[common], help="cost table vs chain length")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--pst-model", choices=("event", "literal"), default="event")
    p.set_defaults(func=cmd_energy_compare)

    p = sub.add_parser("protocol", parents=[common], help="end-to-end protocol report")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--hbar-gamma-uev", type=float, default=360.0)
    p.add_argument("--segments", type=int, default=0, help="segment length (0: one chain)")
    p.add_argument("--encoding", choices=("1e", "2e"), default="2e")
    p.add_argument("--u", type=float, default=20.0)
    p.add_argument("--v", type=float, default=10.0)
    p.set_defaults(func=cmd_protocol)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        cfg.params()
        return args.func(args, cfg)
    except NumericalError as exc:
        print(f"qdbus: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ContractError, ValueError, OSError) as exc:
        print(f"qdbus: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Four subcommands: ``sweep-snr``, ``sweep-hwi`` and ``sweep-pa`` run the
corresponding parameter sweep and write CSV; ``validate`` replays the
closed-form-versus-simulation comparison over the reference grid and exits
nonzero if any point disagrees beyond three standard errors.
"""

from __future__ import annotations

import argparse
import sys

from . import analytic, experiments, simulator
from .model import SystemConfig

_SWEEP_OF_COMMAND = {
    "sweep-snr": "snr_db",
    "sweep-hwi": "hwi_k",
    "sweep-pa": "alpha1",
}

VALIDATE_SNR_GRID = tuple(float(v) for v in range(0, 35, 5))


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="PATH",
                        help="flat key = value sweep config (see the README)")
    parser.add_argument("--out", metavar="PATH", default="-",
                        help="output CSV path, '-' for stdout (default)")
    parser.add_argument("--methods", metavar="LIST",
                        help="comma-separated subset of: analytic, mc")
    parser.add_argument("--schemes", metavar="LIST",
                        help="comma-separated subset of: noma, cnoma, cnoma-wdl")
    parser.add_argument("--symbols", type=int, metavar="N",
                        help="Monte Carlo symbol pairs per grid point")
    parser.add_argument("--seed", type=int, metavar="N", help="Monte Carlo seed")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomalink",
        description="Average-BER analysis of relay-assisted downlink NOMA "
                    "under hardware and channel-estimation impairments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, swept in _SWEEP_OF_COMMAND.items():
        p = sub.add_parser(command, help=f"sweep {swept} and write CSV")
        _add_common(p)
    v = sub.add_parser("validate",
                       help="compare simulation against the closed forms "
                            "on the reference grid")
    _add_common(v)
    return parser


def _split_list(raw: str | None, aliases: dict, what: str):
    if raw is None:
        return None
    names = []
    for part in raw.split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part not in aliases:
            raise experiments.ConfigError(f"unknown {what} {part!r}")
        names.append(aliases[part])
    if not names:
        raise experiments.ConfigError(f"empty {what} list")
    return tuple(names)


def _load_spec(args) -> experiments.SweepSpec:
    default_sweep = _SWEEP_OF_COMMAND.get(args.command, "snr_db")
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            spec = experiments.parse_config(fh.read(), default_sweep=default_sweep)
    else:
        spec = experiments.parse_config("", default_sweep=default_sweep)
    methods = _split_list(args.methods, experiments._METHOD_ALIASES, "method")
    schemes = _split_list(args.schemes, experiments._SCHEME_ALIASES, "scheme")
    swept = _SWEEP_OF_COMMAND.get(args.command)
    return experiments.spec_with(
        spec, swept_parameter=swept, schemes=schemes, methods=methods,
        n_symbols=args.symbols, seed=args.seed,
    )


def _write(out: str, text: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _run_sweep_command(args) -> int:
    spec = _load_spec(args)
    result = experiments.run_sweep(spec)
    _write(args.out, experiments.emit_csv(result))
    failed = [r for r in result.rows if r.error is not None]
    for row in failed:
        print(f"warning: {row.scheme}/{row.user}/{row.method} at "
              f"{row.swept_param}={row.value}: {row.error}", file=sys.stderr)
    return 1 if failed else 0


def run_validation(n_symbols: int = 1_000_000, seed: int = 1,
                   schemes=analytic.SCHEMES, snr_grid=VALIDATE_SNR_GRID,
                   out=None):
    """Closed forms versus Monte Carlo on the reference scenario.

    Returns the list of per-point records; a record is compared only when
    the closed form predicts at least ten expected error events.
    """
    if out is None:
        out = sys.stdout
    sim = simulator.SimSpec(n_symbols=n_symbols, seed=seed)
    records = []
    for snr in snr_grid:
        cfg = SystemConfig.defaults(snr_db=snr)
        for scheme in schemes:
            mc = simulator.simulate(cfg, scheme, sim)
            for user in analytic.USERS:
                ana = analytic.scheme_ber(cfg, scheme, user)
                se = mc.std_err(user)
                gap = abs(mc.ber(user) - ana)
                checked = ana >= 10.0 / n_symbols
                ok = (not checked) or gap <= 3.0 * se
                records.append({
                    "snr_db": snr, "scheme": scheme, "user": user,
                    "analytic": ana, "mc": mc.ber(user), "std_err": se,
                    "sigmas": gap / se if se else float("inf"),
                    "checked": checked, "ok": ok,
                })
                status = "pass" if ok else ("FAIL" if checked else "skip")
                print(f"{status}  snr={snr:5.1f}  {scheme:9s} {user}  "
                      f"analytic={ana:.6e}  mc={mc.ber(user):.6e}  "
                      f"|diff|={gap:.2e}  ({records[-1]['sigmas']:.2f} sigma)",
                      file=out)
    return records


def _validate_command(args) -> int:
    n_symbols = args.symbols or 1_000_000
    seed = args.seed if args.seed is not None else 1
    schemes = _split_list(args.schemes, experiments._SCHEME_ALIASES, "scheme") \
        or analytic.SCHEMES
    records = run_validation(n_symbols=n_symbols, seed=seed, schemes=schemes)
    bad = [r for r in records if not r["ok"]]
    print(f"{len(records) - len(bad)}/{len(records)} points within 3 standard errors")
    return 1 if bad else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _validate_command(args)
        return _run_sweep_command(args)
    except (experiments.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

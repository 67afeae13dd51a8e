"""Command-line front end: a thin client of the qpmkit service.

Runs the FastAPI app in-process by default (no network, no server needed) or
talks to a remote instance via --server. The CLI performs no arithmetic: every
printed value is the service/library result, emitted at full double precision.

Exit statuses: 0 success, 2 lookup errors, 3 domain/window errors,
4 solver/physics errors, 5 I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import httpx

EXIT_OK = 0
EXIT_LOOKUP = 2
EXIT_DOMAIN = 3
EXIT_SOLVER = 4
EXIT_IO = 5

_EXIT_BY_STATUS = {404: EXIT_LOOKUP, 422: EXIT_DOMAIN, 409: EXIT_SOLVER, 500: EXIT_IO}

# shipped-crystal design band (fundamental, um); override with --lambda-min/max
DEFAULT_LAMBDA_WINDOW = (1.40, 1.60)
DEFAULT_PROCESSES = ("YZY:1", "ZZZ:2", "ZYY:7")


class CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _parse_process(token: str) -> dict:
    triple, _, order = token.partition(":")
    try:
        return {"triple": triple, "order": int(order) if order else 1}
    except ValueError:
        raise CliError(EXIT_DOMAIN, f"bad process token {token!r}; expected TRIPLE[:ORDER]")


class ServiceClient:
    """In-process ASGI client by default; HTTP client when --server is given."""

    def __init__(self, server: str | None, db_dir: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=60.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # some starlette builds warn when their test client falls back
                # to httpx; harmless for in-process use
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(db_dir))

    def request(self, method: str, path: str, payload: dict | None = None) -> dict:
        try:
            if method == "GET":
                resp = self._client.get(path)
            else:
                resp = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise CliError(EXIT_IO, f"service request failed: {exc}")
        if resp.status_code == 200:
            return resp.json()
        try:
            body = resp.json()
        except ValueError:
            body = {}
        name = body.get("error", f"HTTP {resp.status_code}")
        message = body.get("message", body.get("detail", resp.text))
        raise CliError(
            _EXIT_BY_STATUS.get(resp.status_code, EXIT_IO), f"{name}: {message}"
        )

    def close(self):
        self._client.close()


def _emit(text: str, output: str | None):
    if output:
        try:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {output}: {exc}")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, output: str | None):
    _emit(json.dumps(payload, indent=2) + "\n", output)


def _csv_rows(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# --- subcommands ---

def cmd_crystals(args, client):
    payload = client.request("GET", "/crystals")
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_index(args, client):
    payload = client.request(
        "POST",
        "/dispersion/index",
        {
            "crystal": args.crystal,
            "axis": args.axis,
            "lam_um": args.lambda_um,
            "temp_c": args.temp_c,
        },
    )
    _emit(_fmt(payload["n"]) + "\n", args.output)
    return EXIT_OK


def cmd_period(args, client):
    payload = client.request(
        "POST",
        "/qpm/period",
        {
            "crystal": args.crystal,
            "process": {"triple": args.process, "order": args.order},
            "lam_um": args.lambda_um,
            "temp_c": args.temp_c,
        },
    )
    if args.format == "csv":
        _emit(
            _csv_rows(
                ["poling_period_um", "grating_period_um", "anomalous_ordering"],
                [
                    (
                        payload["poling_period_um"],
                        payload["grating_period_um"],
                        payload["anomalous_ordering"],
                    )
                ],
            ),
            args.output,
        )
    else:
        _emit_json(payload, args.output)
    return EXIT_OK


def cmd_curves(args, client):
    processes = [_parse_process(tok) for tok in args.process]
    payload = client.request(
        "POST",
        "/qpm/curves",
        {
            "crystal": args.crystal,
            "processes": processes,
            "temp_c": args.temp_c,
            "lam_min_um": args.lambda_min,
            "lam_max_um": args.lambda_max,
            "samples": args.samples,
            "mark_period_um": args.mark_period,
        },
    )
    if args.format == "json":
        _emit_json(payload, args.output)
        return EXIT_OK
    header = ["lambda_um"] + [s["label"] for s in payload["series"]]
    columns = [payload["lam_um"]] + [s["grating_period_um"] for s in payload["series"]]
    if payload["mark_period_um"] is not None:
        header.append("mark_period_um")
        columns.append([payload["mark_period_um"]] * len(payload["lam_um"]))
    _emit(_csv_rows(header, zip(*columns)), args.output)
    return EXIT_OK


def cmd_coincide(args, client):
    window = {"lam_min_um": args.lambda_min, "lam_max_um": args.lambda_max}
    if args.pair:
        a, b = (_parse_process(t) for t in args.pair)
        payload = client.request(
            "POST",
            "/coincide/pairwise",
            {"crystal": args.crystal, "a": a, "b": b, "temp_c": args.temp_c, **window},
        )
        if args.format == "csv":
            rows = [
                (
                    "+".join(c["participants"]),
                    c["lam_star_um"],
                    c["common_period_um"],
                    c["spread_um"],
                    c["kind"],
                )
                for c in payload["coincidences"]
            ]
            _emit(
                _csv_rows(
                    ["participants", "lam_star_um", "common_period_um", "spread_um", "kind"],
                    rows,
                ),
                args.output,
            )
        else:
            _emit_json(payload, args.output)
    elif args.multi:
        payload = client.request(
            "POST",
            "/coincide/multiway",
            {
                "crystal": args.crystal,
                "processes": [_parse_process(t) for t in args.multi],
                "temp_c": args.temp_c,
                **window,
            },
        )
        _emit_json(payload, args.output)
    elif args.tune_pair:
        a, b = (_parse_process(t) for t in args.tune_pair)
        payload = client.request(
            "POST",
            "/coincide/temperature",
            {
                "crystal": args.crystal,
                "a": a,
                "b": b,
                "lam_target_um": args.at_um,
                "temp_min_c": args.temp_min,
                "temp_max_c": args.temp_max,
            },
        )
        _emit_json(payload, args.output)
    else:
        payload = client.request(
            "POST",
            "/coincide/pulsed-overlap",
            {
                "crystal": args.crystal,
                "processes": [_parse_process(t) for t in args.overlap],
                "crystal_spec": {"grating_period_um": args.period_um},
                "temp_c": args.temp_c,
                "bandwidth_nm": args.bandwidth_nm,
                **window,
            },
        )
        _emit_json(payload, args.output)
    return EXIT_OK


def cmd_spectrum(args, client):
    if args.centers:
        payload = client.request(
            "POST",
            "/spectra/centers",
            {
                "crystal": args.crystal,
                "processes": [_parse_process(t) for t in args.process],
                "grating_period_um": args.period_um,
                "temp_c": args.temp_c,
                "lam_min_um": args.lambda_min,
                "lam_max_um": args.lambda_max,
            },
        )
        observed = args.observed_nm or []
        rows = payload["centers"]
        if observed and len(observed) != len(rows):
            raise CliError(EXIT_DOMAIN, "--observed-nm needs one value per process")
        for i, row in enumerate(rows):
            row["observed_nm"] = observed[i] if observed else None
        if args.format == "csv":
            _emit(
                _csv_rows(
                    ["process", "lam_fund_um", "predicted_sh_nm", "observed_sh_nm"],
                    [
                        (
                            r["process"],
                            r["lam_fund_um"],
                            r["sh_center_nm"],
                            "" if r["observed_nm"] is None else r["observed_nm"],
                        )
                        for r in rows
                    ],
                ),
                args.output,
            )
        else:
            _emit_json(payload, args.output)
        return EXIT_OK

    payload = client.request(
        "POST",
        "/spectra/sh",
        {
            "crystal": args.crystal,
            "process": _parse_process(args.process[0]),
            "crystal_spec": {
                "grating_period_um": args.period_um,
                "length_mm": args.length_mm,
            },
            "temp_c": args.temp_c,
            "pump": {"center_um": args.pump_um, "fwhm_nm": args.pump_fwhm_nm},
            "sh_min_um": args.sh_min_um,
            "sh_max_um": args.sh_max_um,
            "samples": args.samples,
            "fit": args.fit,
        },
    )
    if args.format == "json":
        _emit_json(payload, args.output)
    else:
        if args.fit and payload.get("fit"):
            fit = payload["fit"]
            sys.stderr.write(
                f"# fit: center_nm={_fmt(fit['center_nm'])} "
                f"fwhm_nm={_fmt(fit['fwhm_nm'])} residual={_fmt(fit['residual_rms'])}\n"
            )
        _emit(
            _csv_rows(
                ["wavelength_nm", "intensity"],
                zip(payload["lam_nm"], payload["intensity"]),
            ),
            args.output,
        )
    return EXIT_OK


def cmd_entangle(args, client):
    if args.preset != "quadripartite":
        raise CliError(EXIT_DOMAIN, f"unknown preset {args.preset!r}")
    payload = client.request(
        "POST",
        "/entangle/quadripartite",
        {
            "kappa_zzz": args.kappa_zzz,
            "kappa_yzy": args.kappa_yzy,
            "kappa_zyy": args.kappa_zyy,
            "r": args.r,
        },
    )
    if args.format == "csv":
        rows = [("+".join(str(i) for i in row["subset"]), row["value"]) for row in payload["ppt"]]
        _emit(_csv_rows(["bipartition", "ppt_min_eigenvalue"], rows), args.output)
    else:
        _emit_json(payload, args.output)
    return EXIT_OK


def cmd_serve(args, client):  # noqa: ARG001 - client unused; serve builds its own app
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.db), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpmkit",
        description="Quasi-phase-matching design toolkit (thin client of the qpmkit service).",
    )
    parser.add_argument(
        "--db",
        default=None,
        help="crystal database directory (default: $QPM_CRYSTAL_DB, then ./crystals)",
    )
    parser.add_argument(
        "--server", default=None, help="base URL of a running qpmkit service (default: in-process)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmt_default="json"):
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("crystals", help="list crystal ids in the database")
    add_common(p)
    p.set_defaults(func=cmd_crystals)

    p = sub.add_parser("index", help="refractive index at one wavelength/temperature")
    p.add_argument("--crystal", required=True)
    p.add_argument("--axis", required=True, choices=("X", "Y", "Z"))
    p.add_argument("--lambda-um", type=float, required=True)
    p.add_argument("--temp-c", type=float, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("period", help="required poling period and grating period")
    p.add_argument("--crystal", required=True)
    p.add_argument("--process", required=True, help="polarization triple, e.g. YZY")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--lambda-um", type=float, required=True)
    p.add_argument("--temp-c", type=float, required=True)
    add_common(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("curves", help="grating-period curves vs wavelength (CSV)")
    p.add_argument("--crystal", required=True)
    p.add_argument(
        "--process",
        action="append",
        required=True,
        help="TRIPLE:ORDER, repeatable (e.g. --process YZY:1 --process ZZZ:2)",
    )
    p.add_argument("--lambda-min", type=float, default=DEFAULT_LAMBDA_WINDOW[0])
    p.add_argument("--lambda-max", type=float, default=DEFAULT_LAMBDA_WINDOW[1])
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--temp-c", type=float, required=True)
    p.add_argument("--mark-period", type=float, default=None)
    add_common(p, fmt_default="csv")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("coincide", help="pairwise/multiway coincidences, T-tuning, pulse overlap")
    p.add_argument("--crystal", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", nargs=2, metavar="PROC")
    group.add_argument("--multi", nargs="+", metavar="PROC")
    group.add_argument("--tune-pair", nargs=2, metavar="PROC")
    group.add_argument("--overlap", nargs="+", metavar="PROC")
    p.add_argument("--temp-c", type=float, required=True)
    p.add_argument("--lambda-min", type=float, default=DEFAULT_LAMBDA_WINDOW[0])
    p.add_argument("--lambda-max", type=float, default=DEFAULT_LAMBDA_WINDOW[1])
    p.add_argument("--at-um", type=float, default=None, help="pinned wavelength for --tune-pair")
    p.add_argument("--temp-min", type=float, default=None)
    p.add_argument("--temp-max", type=float, default=None)
    p.add_argument("--period-um", type=float, default=None, help="grating period for --overlap")
    p.add_argument("--bandwidth-nm", type=float, default=None, help="pulse bandwidth for --overlap")
    add_common(p)
    p.set_defaults(func=cmd_coincide)

    p = sub.add_parser("spectrum", help="predicted SH centers or broadband SH spectrum")
    p.add_argument("--crystal", default="ktp-kato")
    p.add_argument("--centers", action="store_true", help="CW phase-matched centers table")
    p.add_argument(
        "--process",
        action="append",
        default=None,
        help=f"TRIPLE:ORDER, repeatable (default {' '.join(DEFAULT_PROCESSES)})",
    )
    p.add_argument("--period-um", type=float, required=True)
    p.add_argument("--length-mm", type=float, default=7.0)
    p.add_argument("--temp-c", type=float, default=22.0)
    p.add_argument("--lambda-min", type=float, default=DEFAULT_LAMBDA_WINDOW[0])
    p.add_argument("--lambda-max", type=float, default=DEFAULT_LAMBDA_WINDOW[1])
    p.add_argument("--observed-nm", type=float, nargs="+", default=None)
    p.add_argument("--pump-um", type=float, default=None)
    p.add_argument("--pump-fwhm-nm", type=float, default=None)
    p.add_argument("--sh-min-um", type=float, default=None)
    p.add_argument("--sh-max-um", type=float, default=None)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--fit", action="store_true", help="Gaussian-fit the computed spectrum")
    add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("entangle", help="coupling graph, covariance evolution, PPT table")
    p.add_argument("--preset", default="quadripartite")
    p.add_argument("--r", type=float, required=True, help="dimensionless squeezing parameter")
    p.add_argument("--kappa-zzz", type=float, default=1.0)
    p.add_argument("--kappa-yzy", type=float, default=1.0)
    p.add_argument("--kappa-zyy", type=float, default=1.0)
    add_common(p)
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def _validate_args(args):
    if args.command == "coincide":
        if args.tune_pair and (args.at_um is None or args.temp_min is None or args.temp_max is None):
            raise CliError(EXIT_DOMAIN, "--tune-pair requires --at-um, --temp-min and --temp-max")
        if args.overlap and (args.period_um is None or args.bandwidth_nm is None):
            raise CliError(EXIT_DOMAIN, "--overlap requires --period-um and --bandwidth-nm")
    if args.command == "spectrum":
        if args.process is None:
            args.process = list(DEFAULT_PROCESSES)
        if not args.centers:
            missing = [
                name
                for name, value in (
                    ("--pump-um", args.pump_um),
                    ("--pump-fwhm-nm", args.pump_fwhm_nm),
                    ("--sh-min-um", args.sh_min_um),
                    ("--sh-max-um", args.sh_max_um),
                )
                if value is None
            ]
            if missing:
                raise CliError(
                    EXIT_DOMAIN, f"spectrum without --centers requires {', '.join(missing)}"
                )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    client = None
    try:
        _validate_args(args)
        if args.command != "serve":
            client = ServiceClient(args.server, args.db)
        return args.func(args, client)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    raise SystemExit(main())

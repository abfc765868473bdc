"""Command-line client for the scenario service.

By default the service runs in-process; ``--server URL`` targets a running
instance instead.  Each scenario subcommand posts its request, writes the
returned CSV to ``--out`` (default ``$QJJLAB_OUT_DIR/<scenario>.csv``) and
exits 0 when every in-scenario check passed, 1 on a check failure, 2 on
usage or configuration errors.  Flag values override the ``--config`` JSON
file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from . import __version__
from .scenarios import SCENARIOS, ScenarioRequest

#: request fields settable from the command line (flag name -> field name)
_FIELD_FLAGS = {
    "--M": ("M", int),
    "--K": ("K", int),
    "--s": ("s", float),
    "--phi-flux": ("phi_flux", float),
    "--EJ": ("EJ", float),
    "--EC": ("EC", float),
    "--I": ("I", float),
    "--t": ("t", float),
    "--dt": ("dt", float),
    "--T": ("T", float),
    "--tol": ("tol", float),
    "--s-min": ("s_min", float),
    "--s-max": ("s_max", float),
    "--s-step": ("s_step", float),
    "--k": ("k_levels", int),
    "--V0": ("v0", float),
    "--inertia": ("inertia", float),
    "--phi0": ("phi0", float),
    "--n0": ("n0", float),
    "--width": ("width", float),
    "--sample-every": ("sample_every", int),
}


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip() != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qjjlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qjjlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    def add_scenario_parser(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        for flag, (field, typ) in _FIELD_FLAGS.items():
            p.add_argument(flag, dest=field, type=typ, default=None)
        p.add_argument("--t-values", dest="t_values", type=_float_list, default=None)
        p.add_argument("--i-values", dest="i_values", type=_float_list, default=None)
        p.add_argument("--dump-operators", dest="dump_operators", action="store_const", const=True, default=None)
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--config", default=None, help="JSON file with request fields")
        p.add_argument("--server", default=None, help="URL of a running service (default: in-process)")
        p.add_argument("--quiet", action="store_true")
        return p

    for name in sorted(SCENARIOS):
        add_scenario_parser(name, f"run the {name} scenario")
    runner = add_scenario_parser("run", "run a scenario chosen by flag")
    runner.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    return parser


def _error(record: dict) -> int:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return 2


def _build_payload(args: argparse.Namespace) -> dict:
    payload: dict = {}
    if args.config is not None:
        payload.update(json.loads(Path(args.config).read_text()))
    for field in ScenarioRequest.model_fields:
        value = getattr(args, field, None)
        if value is not None:
            payload[field] = value
    return payload


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("qjjlab.service:app", host=args.host, port=args.port)
        return 0

    scenario = args.scenario if args.command == "run" else args.command
    try:
        payload = _build_payload(args)
    except (OSError, json.JSONDecodeError) as exc:
        return _error({"error": "bad config file", "detail": str(exc)})

    try:
        with _client(args.server) as client:
            resp = client.post(f"/scenarios/{scenario}", json=payload)
    except httpx.HTTPError as exc:
        return _error({"error": "service unreachable", "detail": str(exc)})
    if resp.status_code != 200:
        return _error({"error": f"scenario rejected (HTTP {resp.status_code})", "detail": resp.json().get("detail")})

    report = resp.json()
    out = Path(args.out) if args.out else Path(os.environ.get("QJJLAB_OUT_DIR", ".")) / f"{scenario}.csv"
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report["csv"])
        for dump_name, content in (report.get("dumps") or {}).items():
            out.with_name(f"{out.stem}.{dump_name}.csv").write_text(content)
    except OSError as exc:
        return _error({"error": "cannot write output", "detail": str(exc)})

    if not args.quiet:
        for check in report["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            print(f"check {check['name']}: {status} (value={check['value']:.6g}, bound={check['bound']:.6g})")
        verdict = "PASS" if report["passed"] else "FAIL"
        print(f"scenario {scenario}: {verdict} -> {out}")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())

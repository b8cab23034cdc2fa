"""Command-line client.

A thin client over the HTTP service: by default the requests run against an
in-process instance of the app (no server needed); `--server URL` points the
same commands at a running instance, and `serve` starts one.

Exit codes: 0 ok, 1 usage, 2 input error, 3 numerical precondition failure,
4 verification failure.
"""
from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

PROFILE_COLUMNS = [
    "u",
    "kappa_s",
    "kappa_nu",
    "kappa_t",
    "kappa_c",
    "r_b",
    "r_c",
    "adaptedness_residual",
    "kappa1",
    "kappa2",
]


class ServiceClient:
    """HTTP access to the service, embedded (in-process ASGI) or remote."""

    def __init__(self, server: str | None = None):
        self.server = server

    def request(self, method: str, path: str, payload: dict | None = None) -> httpx.Response:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=600.0) as client:
                return client.request(method, path, json=payload)

        from .service.app import app

        async def go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://frontal-lab", timeout=600.0
            ) as client:
                return await client.request(method, path, json=payload)

        return asyncio.run(go())


def _surface_spec(raw: str) -> dict:
    path = Path(raw)
    if path.suffix or path.exists():
        if not path.exists():
            print(f"error: no such surface file: {raw}", file=sys.stderr)
            raise SystemExit(EXIT_INPUT)
        return {"definition": path.read_text(encoding="utf-8")}
    return {"example": raw}


def _parse_at(raw: str) -> tuple[float, float]:
    u = v = 0.0
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            print(f"error: --at expects u=VALUE[,v=VALUE], got {raw!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        key, val = part.split("=", 1)
        try:
            num = float(val)
        except ValueError:
            print(f"error: bad number in --at: {val!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        if key.strip() == "u":
            u = num
        elif key.strip() == "v":
            v = num
        else:
            print(f"error: --at keys are u and v, got {key!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return u, v


def _parse_tols(items) -> dict:
    overrides = {}
    for item in items or []:
        if "=" not in item:
            print(f"error: --tol expects NAME=VALUE, got {item!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        key, val = item.split("=", 1)
        try:
            overrides[key.strip()] = float(val)
        except ValueError:
            print(f"error: bad tolerance value {val!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return overrides


def _fail_from_response(resp: httpx.Response) -> int:
    try:
        detail = resp.json().get("detail")
    except Exception:
        detail = resp.text
    if isinstance(detail, dict):
        print(f"error ({detail.get('kind', 'Error')}): {detail.get('message')}", file=sys.stderr)
    else:
        print(f"error: {detail}", file=sys.stderr)
    if resp.status_code == 400:
        return EXIT_INPUT
    if resp.status_code == 422:
        return EXIT_NUMERICAL
    return EXIT_INPUT


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        print(text)


def _profile_csv(response: dict) -> str:
    rows = response["report"].get("profile")
    if not rows:
        raise SystemExit(
            print("error: csv format needs a profile; pass --profile N", file=sys.stderr)
            or EXIT_USAGE
        )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(PROFILE_COLUMNS)
    for row in rows:
        writer.writerow([repr(row[c]) for c in PROFILE_COLUMNS])
    return buf.getvalue()


def cmd_analyze(args) -> int:
    u, v = _parse_at(args.at)
    payload = {
        "surface": _surface_spec(args.input),
        "at_u": u,
        "at_v": v,
        "order": args.order,
        "tolerance_overrides": _parse_tols(args.tol),
        "profile_samples": args.profile if args.profile else (41 if args.format == "csv" else 0),
    }
    resp = ServiceClient(args.server).request("POST", "/analyze", payload)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    if args.format == "csv":
        _emit(_profile_csv(data), args.out)
    else:
        _emit(json.dumps(data, indent=2, sort_keys=True), args.out)
    return EXIT_OK


def cmd_mesh(args) -> int:
    payload = {
        "surface": _surface_spec(args.input),
        "kind": args.surface,
        "nu": args.nu,
        "nv": args.nv,
        "order": args.order,
        "w_lo": args.w_lo,
        "w_hi": args.w_hi,
        "tolerance_overrides": _parse_tols(args.tol),
    }
    resp = ServiceClient(args.server).request("POST", "/mesh", payload)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    out = args.out or f"{args.input}-{args.surface}.obj"
    Path(out).write_text(data["obj_text"], encoding="utf-8")
    print(
        f"wrote {out}: {data['vertex_count']} vertices, {data['face_count']} faces, "
        f"{data['polyline_count']} polylines, {data['skipped_faces']} masked cells"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = args.suite or (args.input if args.input else "all")
    payload = {
        "suite": suite,
        "order": args.order,
        "tolerance_overrides": _parse_tols(args.tol),
    }
    resp = ServiceClient(args.server).request("POST", "/verify", payload)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    rows = data["rows"]
    width = max((len(r["id"]) for r in rows), default=10)
    print(f"{'check':<{width}}  {'computed':>14}  {'expected':>14}  {'tol':>9}  verdict")
    for r in rows:
        verdict = "pass" if r["passed"] else "FAIL"
        print(
            f"{r['id']:<{width}}  {r['computed']:>14.6g}  {r['expected']:>14.6g}  "
            f"{r['tolerance']:>9.2g}  {verdict}"
        )
    print(f"{data['n_passed']} passed, {data['n_failed']} failed")
    if args.out:
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\r\n")
            writer.writerow(["id", "reference", "computed", "expected", "tolerance", "passed", "note"])
            for r in rows:
                writer.writerow(
                    [r["id"], r["reference"], repr(r["computed"]), repr(r["expected"]),
                     repr(r["tolerance"]), r["passed"], r["note"]]
                )
            Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
        else:
            Path(args.out).write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK if data["passed"] else EXIT_VERIFY


def cmd_examples(args) -> int:
    resp = ServiceClient(args.server).request("GET", "/examples")
    if resp.status_code != 200:
        return _fail_from_response(resp)
    for ex in resp.json()["examples"]:
        print(f"{ex['name']:16s} {ex['description']}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontal-lab",
        description="Invariants, derived surfaces and singularity classification of frontal surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="built-in example name or path to a surface file")
        p.add_argument("--order", type=int, default=7, help="jet truncation order (default 7)")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override")
        p.add_argument("--out", help="output path")
        p.add_argument("--server", help="remote service URL (default: run in-process)")

    p = sub.add_parser("analyze", help="pointwise + along-curve analysis report")
    common(p)
    p.add_argument("--at", default="u=0", help="evaluation point, e.g. u=0 or u=0.1,v=0.2")
    p.add_argument("--profile", type=int, default=0, metavar="N", help="include an N-sample invariant profile")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("mesh", help="export OBJ meshes of f, nr, c1, c2")
    common(p)
    p.add_argument("--surface", choices=("f", "nr", "c1", "c2"), default="f")
    p.add_argument("--nu", type=int, default=41)
    p.add_argument("--nv", type=int, default=41)
    p.add_argument("--w-lo", type=float, default=-1.0, dest="w_lo")
    p.add_argument("--w-hi", type=float, default=1.0, dest="w_hi")
    p.set_defaults(fn=cmd_mesh)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("input", nargs="?", default="all", help="suite name (default: all)")
    p.add_argument("--suite", help="explicit suite name (overrides the positional)")
    p.add_argument("--order", type=int, default=7)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE")
    p.add_argument("--out", help="write rows to a file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--server", help="remote service URL")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("examples", help="list built-in example surfaces")
    p.add_argument("--server", help="remote service URL")
    p.set_defaults(fn=cmd_examples)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except httpx.HTTPError as err:
        print(f"error: service request failed: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

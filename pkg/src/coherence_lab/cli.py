"""Command-line front end.

The CLI is a thin client of the HTTP service: every command loads its input
files, posts one request, and renders the response.  By default the service
runs in-process; pass ``--server URL`` to target a running instance instead
(one command per invocation either way).

Exit codes: 0 success / all checks passed, 1 usage error, 2 parse or
invariant error, 3 verification failures present, 4 optimizer failure.

Seeds resolve as: ``--seed`` flag, else the ``COHERENCE_LAB_SEED``
environment variable, else the documented default 1729.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .harness import DEFAULT_MASTER_SEED

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VERIFY_FAILS = 3
EXIT_OPTIMIZER = 4

SEED_ENV_VAR = "COHERENCE_LAB_SEED"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_USAGE)


class ServiceClient:
    """Minimal client over the service: in-process app or remote URL."""

    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=3600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # starlette warns about its httpx-backed TestClient; the
                # backend works and httpx2 is not required
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code == 200:
            return response.json()
        raise CliError(*_describe_error(response))

    def close(self):
        self._client.close()


def _describe_error(response) -> tuple[str, int]:
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = None
    if isinstance(detail, dict) and "message" in detail:
        kind = detail.get("kind", "invariant")
        code = EXIT_OPTIMIZER if kind == "optimizer" else EXIT_PARSE
        return f"{kind} error: {detail['message']}", code
    if isinstance(detail, list):  # pydantic shape validation
        first = detail[0] if detail else {}
        loc = ".".join(str(p) for p in first.get("loc", []))
        return f"invalid request ({loc}): {first.get('msg', 'validation failed')}", EXIT_PARSE
    return f"service error (HTTP {response.status_code})", EXIT_PARSE


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: malformed JSON: {exc}", EXIT_PARSE)


def _emit(document: dict, output: str | None):
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV_VAR} must be an integer, got {env!r}", EXIT_USAGE)
    return DEFAULT_MASTER_SEED


def build_parser() -> _Parser:
    parser = _Parser(prog="coherence-lab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_measure = sub.add_parser("measure", help="coherence of a state file")
    p_measure.add_argument("--input", "-i", required=True, help="state JSON (pure or density)")
    p_measure.add_argument("--which", choices=["l1", "g", "both"], default="both")
    p_measure.add_argument("--output", "-o", help="write the report JSON here")

    p_roof = sub.add_parser("roof", help="convex-roof decomposition search")
    p_roof.add_argument("--input", "-i", required=True, help="state JSON (pure or density)")
    p_roof.add_argument("--restarts", type=int, default=20)
    p_roof.add_argument("--tol", type=float, default=1e-8)
    p_roof.add_argument("--seed", type=int)
    p_roof.add_argument("--output", "-o", help="write the roof result JSON here")

    p_classify = sub.add_parser("classify", help="place a Kraus set in the hierarchy")
    p_classify.add_argument("--kraus", "-k", required=True, help="Kraus set JSON")
    p_classify.add_argument("--zero-tol", type=float, default=1e-12)
    p_classify.add_argument("--output", "-o", help="write the classification JSON here")

    p_apply = sub.add_parser("apply", help="push a state through a channel")
    p_apply.add_argument("--kraus", "-k", required=True, help="Kraus set JSON")
    p_apply.add_argument("--input", "-i", required=True, help="state JSON (pure or density)")
    p_apply.add_argument("--output", "-o", help="write the output density matrix here")

    p_verify = sub.add_parser("verify", help="run a randomized verification campaign")
    p_verify.add_argument("--dims", default="2,3,4,5", help="comma-separated dimensions")
    p_verify.add_argument("--trials", type=int, default=500, help="trials per dimension")
    p_verify.add_argument("--n-kraus-min", type=int, default=1)
    p_verify.add_argument("--n-kraus-max", type=int, default=6)
    p_verify.add_argument("--eq-tol", type=float, default=1e-8)
    p_verify.add_argument("--ineq-tol", type=float, default=1e-9)
    p_verify.add_argument("--with-roof", action="store_true", help="include roof-based checks")
    p_verify.add_argument("--probe-fio", action="store_true", help="add out-of-class probe records")
    p_verify.add_argument("--restarts", type=int, default=20, help="roof restarts")
    p_verify.add_argument("--tol", type=float, default=1e-8, help="roof tolerance")
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--format", choices=["json", "csv"], default="json",
                          help="what to print when no --output is given")
    p_verify.add_argument("--output", "-o", help="records CSV path; summary JSON lands beside it")

    p_random = sub.add_parser("random", help="generate a seeded random object")
    p_random.add_argument("kind", choices=["state", "mixed", "fsio"])
    p_random.add_argument("-d", "--dim", type=int, required=True)
    p_random.add_argument("--rank", type=int, help="rank for mixed states (default: dim)")
    p_random.add_argument("--n-kraus", type=int, default=2, help="operators for fsio draws")
    p_random.add_argument("--seed", type=int)
    p_random.add_argument("--output", "-o", help="write the object JSON here")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_measure(args, client: ServiceClient) -> int:
    state = _load_json(args.input)
    report = client.post("/measure", {"state": state, "which": args.which})
    if report.get("l1") is not None:
        print(f"l1 = {_fmt(report['l1'])}")
    if report.get("g") is not None:
        print(f"g = {_fmt(report['g'])}")
    if report.get("g_pure_closed_form") is not None:
        print(f"g (pure closed form) = {_fmt(report['g_pure_closed_form'])}")
    if args.output:
        _emit(report, args.output)
    return EXIT_OK


def _cmd_roof(args, client: ServiceClient) -> int:
    state = _load_json(args.input)
    result = client.post(
        "/roof",
        {
            "state": state,
            "restarts": args.restarts,
            "tol": args.tol,
            "seed": _resolve_seed(args),
        },
    )
    print(f"value = {_fmt(result['value'])}")
    print(f"converged = {str(result['converged']).lower()}")
    if args.output:
        _emit(result, args.output)
    return EXIT_OK


def _cmd_classify(args, client: ServiceClient) -> int:
    kraus = _load_json(args.kraus)
    report = client.post("/classify", {"kraus": kraus, "zero_tol": args.zero_tol})
    _emit(report, args.output)
    if args.output:
        print(f"most_specific = {report['most_specific']}")
    return EXIT_OK


def _cmd_apply(args, client: ServiceClient) -> int:
    payload = {"kraus": _load_json(args.kraus), "state": _load_json(args.input)}
    out = client.post("/apply", payload)
    _emit(out, args.output)
    return EXIT_OK


def _cmd_random(args, client: ServiceClient) -> int:
    payload = {
        "kind": args.kind,
        "dim": args.dim,
        "rank": args.rank,
        "n_kraus": args.n_kraus,
        "seed": _resolve_seed(args),
    }
    response = client.post("/random", payload)
    _emit(response["object"], args.output)
    return EXIT_OK


def _cmd_verify(args, client: ServiceClient) -> int:
    try:
        dims = [int(part) for part in args.dims.split(",") if part.strip()]
    except ValueError:
        raise CliError(f"--dims must be comma-separated integers, got {args.dims!r}", EXIT_USAGE)
    payload = {
        "dims": dims,
        "trials_per_dim": args.trials,
        "n_kraus_min": args.n_kraus_min,
        "n_kraus_max": args.n_kraus_max,
        "eq_tol": args.eq_tol,
        "ineq_tol": args.ineq_tol,
        "with_roof": args.with_roof,
        "probe_fio": args.probe_fio,
        "roof_restarts": args.restarts,
        "roof_tol": args.tol,
        "seed": _resolve_seed(args),
    }
    response = client.post("/verify", payload)
    summary = response["summary"]
    if args.output:
        csv_path = Path(args.output)
        csv_path.write_text(response["csv"])
        summary_path = csv_path.with_suffix(".summary.json")
        summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        print(f"records: {csv_path}")
        print(f"summary: {summary_path}")
    elif args.format == "csv":
        sys.stdout.write(response["csv"])
    else:
        _emit(summary, None)
    fails = summary.get("in_hypothesis_fails", 0)
    if fails:
        print(f"verification failures present: {fails}", file=sys.stderr)
        return EXIT_VERIFY_FAILS
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


_HANDLERS = {
    "measure": _cmd_measure,
    "roof": _cmd_roof,
    "classify": _cmd_classify,
    "apply": _cmd_apply,
    "random": _cmd_random,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            return _cmd_serve(args)
        client = ServiceClient(server=args.server)
        try:
            return _HANDLERS[args.command](args, client)
        finally:
            client.close()
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

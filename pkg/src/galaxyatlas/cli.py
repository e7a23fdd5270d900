"""Operator commands: serve, gen, verify, cache, stub-provider.

Exit codes: 0 success, 1 domain failure, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import socket
import sys

from .imagination import FileCache
from .service import DEFAULT_KEY_ENV, ServiceConfig, create_app
from .stub_provider import StubProviderServer
from .universe import GenerationParams, ParamError, cached_universe
from .verify import digest_lines, run_verify


def _add_param_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--world-seed", type=int, default=None, help="universe seed (unsigned 64-bit)")
    parser.add_argument("--density", type=float, default=None, help="node density, 0.2 to 3.0")
    parser.add_argument("--galaxy-count", type=int, default=None, help="galaxies per universe, 1 to 8")
    parser.add_argument("--systems-per-galaxy", type=int, default=None, help="systems per galaxy, 4 to 32")


def _params_from_args(args) -> GenerationParams:
    defaults = GenerationParams()
    return GenerationParams(
        world_seed=args.world_seed if args.world_seed is not None else defaults.world_seed,
        density=args.density if args.density is not None else defaults.density,
        galaxy_count=args.galaxy_count if args.galaxy_count is not None else defaults.galaxy_count,
        systems_per_galaxy=(
            args.systems_per_galaxy if args.systems_per_galaxy is not None else defaults.systems_per_galaxy
        ),
    )


def _port_free(host: str, port: int) -> bool:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
        return True
    except OSError:
        return False
    finally:
        probe.close()


def cmd_serve(args) -> int:
    try:
        params = _params_from_args(args)
    except ParamError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1
    if not _port_free(args.host, args.port):
        print(f"error: port {args.port} on {args.host} is already in use", file=sys.stderr)
        return 1
    try:
        os.makedirs(args.cache_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cache dir {args.cache_dir!r} unusable: {exc}", file=sys.stderr)
        return 1
    config = ServiceConfig(
        params=params,
        cache_dir=args.cache_dir,
        provider_endpoint=args.provider_endpoint,
        key_env=args.key_env,
        default_fidelity=args.fidelity,
        in_flight_limit=args.in_flight_limit,
        force_fresh=args.force_fresh,
        snapshot_path=args.snapshot,
        timeout_ms=args.timeout_ms,
        max_retries=args.max_retries,
    )
    app = create_app(config)
    provider_state = "configured" if app.state.engine.provider_configured else "absent"
    print(
        f"atlas service on {args.host}:{args.port} "
        f"(seed {params.world_seed}, provider {provider_state}, cache {args.cache_dir})"
    )
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_gen(args) -> int:
    try:
        params = _params_from_args(args)
    except ParamError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1
    body = cached_universe(params).to_bytes()
    if args.out == "-":
        sys.stdout.buffer.write(body)
        sys.stdout.buffer.flush()
        return 0
    try:
        with open(args.out, "wb") as fh:
            fh.write(body)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(body)} bytes to {args.out}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    if args.count < 1:
        print("error: count must be at least 1", file=sys.stderr)
        return 1
    world_seed = args.world_seed if args.world_seed is not None else GenerationParams().world_seed
    if args.emit_digests:
        for line in digest_lines(world_seed, args.count):
            print(line)
        return 0
    return run_verify(args.count, world_seed)


def cmd_cache(args) -> int:
    cache = FileCache(args.dir)
    if args.action == "list":
        if not os.path.isdir(args.dir):
            print(f"error: cache dir {args.dir!r} does not exist", file=sys.stderr)
            return 1
        for payload in cache.entries():
            key = payload.get("key", {})
            print(
                f"{key.get('seed')}-{key.get('plugin')}\t"
                f"{key.get('schema')}/v{key.get('version')}\t"
                f"{payload.get('tier')}\t{payload.get('created_at')}"
            )
        return 0
    removed = cache.clear()
    print(f"removed {removed} entries")
    return 0


def cmd_stub_provider(args) -> int:
    script = None
    if args.script:
        try:
            with open(args.script, "r", encoding="utf-8") as fh:
                script = json.load(fh)
        except (OSError, ValueError) as exc:
            print(f"error: cannot load script {args.script!r}: {exc}", file=sys.stderr)
            return 1
        if not isinstance(script, list):
            print("error: script must be a JSON array of directives", file=sys.stderr)
            return 1
    if not _port_free(args.host, args.port):
        print(f"error: port {args.port} on {args.host} is already in use", file=sys.stderr)
        return 1
    server = StubProviderServer(args.host, args.port, script)
    print(f"stub provider on {args.host}:{server.port} ({len(script or [])} scripted replies)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galaxyatlas",
        description="Deterministic galaxy atlas with a schema-gated generative layer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    _add_param_flags(serve)
    serve.add_argument("--cache-dir", default="cache")
    serve.add_argument("--provider-endpoint", default=None, help="provider URL; omit to disable live tier")
    serve.add_argument("--key-env", default=DEFAULT_KEY_ENV, help="environment variable holding the provider key")
    serve.add_argument("--fidelity", choices=("high", "medium", "base"), default="high")
    serve.add_argument("--in-flight-limit", type=int, default=4)
    serve.add_argument("--force-fresh", action="store_true", help="prefer live provider over cache")
    serve.add_argument("--snapshot", default=None, help="append-only action log for session replay")
    serve.add_argument("--timeout-ms", type=int, default=10000)
    serve.add_argument("--max-retries", type=int, default=2)
    serve.set_defaults(func=cmd_serve)

    gen = sub.add_parser("gen", help="write a universe layout to a file")
    _add_param_flags(gen)
    gen.add_argument("--out", default="-", help="output path, '-' for stdout")
    gen.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="audit cross-process determinism")
    verify.add_argument("count", type=int, nargs="?", default=1000)
    verify.add_argument("--world-seed", type=int, default=None)
    verify.add_argument("--emit-digests", action="store_true", help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)

    cache = sub.add_parser("cache", help="inspect or clear the document cache")
    cache.add_argument("action", choices=("list", "clear"))
    cache.add_argument("--dir", default="cache")
    cache.set_defaults(func=cmd_cache)

    stub = sub.add_parser("stub-provider", help="run the scriptable provider test double")
    stub.add_argument("--host", default="127.0.0.1")
    stub.add_argument("--port", type=int, default=8600)
    stub.add_argument("--script", default=None, help="JSON array of scripted replies")
    stub.set_defaults(func=cmd_stub_provider)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParamError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())

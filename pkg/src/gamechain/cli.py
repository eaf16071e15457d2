"""Command line entry points: run, verify, keygen, serve."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .api import BlockTicker, create_app
from .blocklog import BlockLogWriter
from .engine import Chain
from .errors import IntegrityError, LedgerError
from .genesis import GenesisConfig
from .harness import load_scenario, run_in_process, run_via_api
from .keys import keygen
from .replay import verify_export


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    if args.via_api:
        result = run_via_api(scenario, args.via_api, export_dir=args.export)
    else:
        result = run_in_process(scenario, export_dir=args.export)
    m = result.metrics
    print(f"scenario   {m['scenario']} (seed {m['seed']})")
    print(f"blocks     {m['final_height'] + 1}")
    print(f"txs        {m['transactions']} ({m['applied']} applied, {m['rejected']} rejected)")
    print(f"events     {m['events']}")
    print(f"state root {m['final_state_root']}")
    if args.export:
        print(f"export     {args.export}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        result = verify_export(args.export_dir)
    except (IntegrityError, LedgerError, OSError, json.JSONDecodeError) as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    print(
        f"OK: {result.blocks} blocks, {result.txs} txs "
        f"({result.applied} applied, {result.rejected} rejected), "
        f"{result.events} events"
    )
    print(f"state root {result.state_root.hex()}")
    return 0


def _cmd_keygen(args: argparse.Namespace) -> int:
    try:
        seed = bytes.fromhex(args.seed_hex)
    except ValueError:
        print("seed must be hex", file=sys.stderr)
        return 1
    if len(seed) != 32:
        print("seed must be exactly 32 bytes of hex", file=sys.stderr)
        return 1
    kp = keygen(seed)
    print(json.dumps({"address": kp.address.hex(), "secret": seed.hex()}, indent=2))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    if args.genesis:
        with open(args.genesis) as f:
            genesis = GenesisConfig.from_json(json.load(f))
    else:
        genesis = GenesisConfig()
    if args.seed is not None:
        genesis = dataclasses.replace(genesis, chain_seed=args.seed)
    host, _, port_text = args.listen.rpartition(":")
    chain = Chain(genesis)

    log = None
    if args.export:
        os.makedirs(args.export, exist_ok=True)
        with open(os.path.join(args.export, "genesis.json"), "w") as f:
            f.write(genesis.dumps())
        binary = open(os.path.join(args.export, "blocklog.bin"), "wb")
        mirror = open(os.path.join(args.export, "blocklog.jsonl"), "w")
        log = BlockLogWriter(binary, mirror)
        log.append(chain.blocks[0])
        log.flush()

        def persist(record, frames):
            log.append(record)
            log.flush()

        chain.add_block_listener(persist)

    app = create_app(chain, dev=args.dev_faucet)
    ticker = None
    if args.block_interval > 0:
        ticker = BlockTicker(chain, args.block_interval)
        ticker.start()
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port_text), log_level="warning")
    finally:
        if ticker is not None:
            ticker.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamechain",
        description="Deterministic game-economy ledger: run scenarios, "
        "verify exports, serve the HTTP gateway.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scripted scenario")
    p_run.add_argument("scenario", help="scenario JSON file")
    p_run.add_argument("--seed", type=int, default=None, help="override scenario seed")
    p_run.add_argument("--export", default=None, help="write an export directory")
    group = p_run.add_mutually_exclusive_group()
    group.add_argument("--via-api", metavar="URL", default=None,
                       help="drive a running gateway instead of an in-process chain")
    group.add_argument("--in-process", action="store_true",
                       help="run against an in-process chain (the default)")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="replay and check an export directory")
    p_verify.add_argument("export_dir")
    p_verify.set_defaults(func=_cmd_verify)

    p_keygen = sub.add_parser("keygen", help="derive an address from a 32-byte seed")
    p_keygen.add_argument("seed_hex")
    p_keygen.set_defaults(func=_cmd_keygen)

    p_serve = sub.add_parser("serve", help="serve the HTTP gateway")
    p_serve.add_argument("--listen", default="127.0.0.1:8000", help="host:port")
    p_serve.add_argument("--genesis", default=None, help="genesis JSON file")
    p_serve.add_argument("--block-interval", type=float, default=1.0,
                         help="seconds between blocks; 0 = only via POST /control/block")
    p_serve.add_argument("--dev-faucet", action="store_true",
                         help="enable the faucet and control endpoints")
    p_serve.add_argument("--seed", type=int, default=None,
                         help="override the genesis chain seed")
    p_serve.add_argument("--export", default=None,
                         help="append genesis + block log to this directory")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

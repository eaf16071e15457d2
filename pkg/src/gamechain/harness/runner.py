"""Scenario runner: setup block, then one block per trading round.

The same loop drives an in-process chain or a remote gateway; the port is
the only moving part. Submission order is fixed (reporters in feed order,
then agents in index order) and every policy input is observed between
blocks, so both ports must end on the same state root. The run ends with a
local replay of the records as a self-check, which also yields the final
state for conservation reporting.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .. import tx
from ..blocklog import write_block_log
from ..engine import BlockRecord, Chain
from ..errors import IntegrityError
from ..genesis import GenesisConfig
from ..keys import Keypair
from ..prng import substream
from ..replay import ReplayResult, replay_records
from ..tx import UnsignedTransaction, payload_kind, sign_transaction
from .policies import Arbitrageur, Minter, PriceWalk, RandomTrader, Reporter, Staker
from .ports import HttpPort, InProcessPort
from .scenario import (
    DEPLOYER_INDEX,
    REPORTER_INDEX_BASE,
    SCHEDULER_INDEX,
    Cast,
    Scenario,
    build_cast,
    genesis_for_scenario,
)


@dataclass
class RunResult:
    scenario: Scenario
    genesis: GenesisConfig
    records: list[BlockRecord]
    replay: ReplayResult
    metrics: dict
    price_rows: list[tuple[int, int, int, int]]

    @property
    def state_root(self) -> str:
        return self.records[-1].block.state_root.hex()


def validate_scenario(scenario: Scenario) -> None:
    needed: dict[str, int] = {}
    for pool in scenario.pools:
        needed[pool.token_a] = needed.get(pool.token_a, 0) + pool.amount_a
        needed[pool.token_b] = needed.get(pool.token_b, 0) + pool.amount_b
    funded_agents = scenario.random_traders + scenario.arbitrageurs
    for token in scenario.tokens:
        demand = needed.get(token.symbol, 0) + scenario.trader_tokens * funded_agents
        if demand > token.supply:
            raise ValueError(
                f"{token.symbol} supply {token.supply} cannot cover setup {demand}"
            )


def _setup_payloads(scenario: Scenario, cast: Cast) -> list[tx.Payload]:
    payloads: list[tx.Payload] = []
    for token in scenario.tokens:
        payloads.append(tx.CreateToken(symbol=token.symbol, supply=token.supply))
    for pool in scenario.pools:
        payloads.append(
            tx.CreatePool(
                token_a=pool.token_a,
                token_b=pool.token_b,
                fee_bps=pool.fee_bps,
                amount_a=pool.amount_a,
                amount_b=pool.amount_b,
            )
        )
    start = scenario.minters
    funded = cast.agents[start : start + scenario.random_traders + scenario.arbitrageurs]
    for token in scenario.tokens:
        for kp in funded:
            payloads.append(
                tx.TokenTransfer(
                    symbol=token.symbol, to=kp.address, amount=scenario.trader_tokens
                )
            )
    return payloads


def _build_agents(scenario: Scenario, cast: Cast) -> list:
    address_book = [kp.address for kp in cast.agents]
    feed_of_pool = {
        i + 1: scenario.feeds[i].feed_id
        for i in range(min(len(scenario.pools), len(scenario.feeds)))
    }
    agents = []
    for index, kp in enumerate(cast.agents):
        rng = substream(scenario.seed, index)
        role = scenario.role_of(index)
        if role == "minter":
            agents.append(Minter(index, rng, address_book, kp.address))
        elif role == "random_trader":
            agents.append(RandomTrader(index, rng, address_book))
        elif role == "arbitrageur":
            agents.append(Arbitrageur(index, rng, address_book, feed_of_pool))
        else:
            agents.append(Staker(index, rng, address_book))
    return agents


def run_with_port(scenario: Scenario, genesis: GenesisConfig, port) -> RunResult:
    cast = build_cast(scenario)
    agents = _build_agents(scenario, cast)

    reporters: list[tuple[str, Keypair, Reporter]] = []
    offset = 0
    for feed in scenario.feeds:
        for j, kp in enumerate(cast.reporters[feed.feed_id]):
            rng = substream(scenario.seed, REPORTER_INDEX_BASE + offset + j)
            reporters.append((feed.feed_id, kp, Reporter(rng, feed.jitter_bps)))
        offset += feed.reporters
    walks = {
        feed.feed_id: PriceWalk(
            substream(scenario.seed, SCHEDULER_INDEX + i), feed.base_value
        )
        for i, feed in enumerate(scenario.feeds)
    }
    feed_ids = [feed.feed_id for feed in scenario.feeds]

    def submit_signed(kp: Keypair, nonce: int, payload: tx.Payload) -> None:
        body = UnsignedTransaction(sender=kp.address, nonce=nonce, payload=payload)
        port.submit(sign_transaction(body, kp.secret))

    # Setup block: tokens, pools, trader funding, all from the deployer.
    for i, payload in enumerate(_setup_payloads(scenario, cast)):
        submit_signed(cast.deployer, i, payload)
    port.produce_block()

    price_rows: list[tuple[int, int, int, int]] = []

    def record_prices() -> None:
        world = port.observe_world(feed_ids)
        for pool_id in sorted(world.pools):
            pool = world.pools[pool_id]
            price_rows.append((world.height, pool_id, pool.reserve_a, pool.reserve_b))

    record_prices()

    for _ in range(scenario.blocks):
        world = port.observe_world(feed_ids)
        addresses = [kp.address for _, kp, _ in reporters]
        addresses += [kp.address for kp in cast.agents]
        views = port.observe_agents(addresses)

        centers = {fid: walk.advance() for fid, walk in walks.items()}
        offsets: dict[bytes, int] = {}

        def next_nonce(address: bytes) -> int:
            base = views[address].nonce + offsets.get(address, 0)
            offsets[address] = offsets.get(address, 0) + 1
            return base

        for feed_id, kp, reporter in reporters:
            payload = reporter.report(feed_id, centers[feed_id])
            submit_signed(kp, next_nonce(kp.address), payload)
        for agent, kp in zip(agents, cast.agents):
            for payload in agent.act(views[kp.address], world):
                submit_signed(kp, next_nonce(kp.address), payload)
        port.produce_block()
        record_prices()

    records = port.final_records()
    replay = replay_records(genesis, records)
    return RunResult(
        scenario=scenario,
        genesis=genesis,
        records=records,
        replay=replay,
        metrics=compute_metrics(scenario, records, replay),
        price_rows=price_rows,
    )


def run_in_process(scenario: Scenario, export_dir: str | None = None) -> RunResult:
    validate_scenario(scenario)
    genesis = genesis_for_scenario(scenario)
    port = InProcessPort(Chain(genesis))
    result = run_with_port(scenario, genesis, port)
    if export_dir:
        write_export(export_dir, result)
    return result


def run_via_api(
    scenario: Scenario, base_url: str, export_dir: str | None = None
) -> RunResult:
    validate_scenario(scenario)
    genesis = genesis_for_scenario(scenario)
    port = HttpPort(base_url)
    try:
        served = port._get_json("/control/genesis")
        if served != genesis.to_json():
            raise IntegrityError(
                None, "server genesis does not match the scenario derivation"
            )
        head = port._get_json("/head")
        if head["height"] != 0:
            raise IntegrityError(None, "server has already produced blocks")
        result = run_with_port(scenario, genesis, port)
    finally:
        port.close()
    if export_dir:
        write_export(export_dir, result)
    return result


def compute_metrics(
    scenario: Scenario, records: list[BlockRecord], replay: ReplayResult
) -> dict:
    per_kind: dict[str, dict] = {}
    rejected_by_code: dict[str, int] = {}
    conf_sum = conf_count = 0
    conf_min = conf_max = None
    for record in records:
        for stx, receipt in zip(record.txs, record.receipts):
            kind = payload_kind(stx.body.payload)
            bucket = per_kind.setdefault(
                kind,
                {
                    "submitted": 0,
                    "applied": 0,
                    "rejected": 0,
                    "gas_min": None,
                    "gas_max": None,
                    "gas_sum": 0,
                },
            )
            bucket["submitted"] += 1
            if receipt.applied:
                bucket["applied"] += 1
                gas = receipt.gas_used
                bucket["gas_sum"] += gas
                bucket["gas_min"] = gas if bucket["gas_min"] is None else min(bucket["gas_min"], gas)
                bucket["gas_max"] = gas if bucket["gas_max"] is None else max(bucket["gas_max"], gas)
            else:
                bucket["rejected"] += 1
                code = receipt.reason_code
                rejected_by_code[code] = rejected_by_code.get(code, 0) + 1
            conf = receipt.confirmation_seconds
            conf_sum += conf
            conf_count += 1
            conf_min = conf if conf_min is None else min(conf_min, conf)
            conf_max = conf if conf_max is None else max(conf_max, conf)
    state = replay.state
    return {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "blocks": len(records),
        "transactions": replay.txs,
        "applied": replay.applied,
        "rejected": replay.rejected,
        "events": replay.events,
        "per_kind": per_kind,
        "rejected_by_code": rejected_by_code,
        "confirmation": {
            "count": conf_count,
            "sum_seconds": conf_sum,
            "min_seconds": conf_min,
            "max_seconds": conf_max,
            # Exact integer milli-mean keeps the file byte-reproducible.
            "mean_milliseconds": (
                conf_sum * 1000 // conf_count if conf_count else None
            ),
        },
        "gas_burned_total": state.gas_burned_total,
        "faucet_issued": state.faucet_issued,
        "reward_issued": state.reward_issued,
        "final_state_root": records[-1].block.state_root.hex(),
        "final_height": records[-1].block.height,
    }


def write_export(export_dir: str, result: RunResult) -> None:
    os.makedirs(export_dir, exist_ok=True)
    with open(os.path.join(export_dir, "genesis.json"), "w") as f:
        f.write(result.genesis.dumps())
    write_block_log(
        os.path.join(export_dir, "blocklog.bin"),
        result.records,
        mirror_path=os.path.join(export_dir, "blocklog.jsonl"),
    )
    with open(os.path.join(export_dir, "metrics.json"), "w") as f:
        f.write(json.dumps(result.metrics, indent=2, sort_keys=True) + "\n")
    with open(os.path.join(export_dir, "price_series.csv"), "w") as f:
        f.write("block_height,pool_id,reserve_a,reserve_b\n")
        for height, pool_id, reserve_a, reserve_b in result.price_rows:
            f.write(f"{height},{pool_id},{reserve_a},{reserve_b}\n")

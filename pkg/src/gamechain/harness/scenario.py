"""Scenario definitions for scripted load runs.

A scenario fixes everything that feeds the run: the seed, the cast of
agents, the starting tokens/pools/feeds, and funding levels. Agent keys are
derived from the scenario seed with SHA-256 domain tags, so two runs of the
same file produce byte-identical transactions with no key material stored
anywhere.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..genesis import DEFAULT_MAX_FAUCET_GRANT, FeedSpec, GenesisConfig
from ..keys import Keypair, keygen

ROLE_AGENT = "agent"
ROLE_REPORTER = "reporter"
ROLE_DEPLOYER = "deployer"

# Substream index offsets keep the per-role PRNG streams disjoint even
# though they all derive from the one scenario seed.
REPORTER_INDEX_BASE = 1_000_000
DEPLOYER_INDEX = 2_000_000
SCHEDULER_INDEX = 3_000_000


@dataclass(frozen=True)
class TokenSpec:
    symbol: str
    supply: int


@dataclass(frozen=True)
class PoolSpec:
    token_a: str
    token_b: str
    fee_bps: int
    amount_a: int
    amount_b: int


@dataclass(frozen=True)
class FeedPlan:
    feed_id: str
    reporters: int
    quorum: int
    base_value: int  # token_a priced in token_b, parts-per-million
    jitter_bps: int  # reporter disagreement band around the walked center


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    blocks: int  # trading rounds after the setup block
    block_interval: tuple[int, int]
    minters: int
    random_traders: int
    arbitrageurs: int
    stakers: int
    tokens: tuple[TokenSpec, ...]
    pools: tuple[PoolSpec, ...]
    feeds: tuple[FeedPlan, ...]
    agent_native: int
    deployer_native: int
    trader_tokens: int

    @property
    def agent_count(self) -> int:
        return self.minters + self.random_traders + self.arbitrageurs + self.stakers

    def role_of(self, agent_index: int) -> str:
        if agent_index < self.minters:
            return "minter"
        agent_index -= self.minters
        if agent_index < self.random_traders:
            return "random_trader"
        agent_index -= self.random_traders
        if agent_index < self.arbitrageurs:
            return "arbitrageur"
        return "staker"


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        doc = json.load(f)
    return scenario_from_json(doc)


def scenario_from_json(doc: dict) -> Scenario:
    agents = doc.get("agents", {})
    interval = doc.get("block_interval", [15, 45])
    return Scenario(
        name=doc.get("name", "scenario"),
        seed=int(doc.get("seed", 0)),
        blocks=int(doc["blocks"]),
        block_interval=(int(interval[0]), int(interval[1])),
        minters=int(agents.get("minters", 0)),
        random_traders=int(agents.get("random_traders", 0)),
        arbitrageurs=int(agents.get("arbitrageurs", 0)),
        stakers=int(agents.get("stakers", 0)),
        tokens=tuple(
            TokenSpec(symbol=t["symbol"], supply=int(t["supply"]))
            for t in doc.get("tokens", [])
        ),
        pools=tuple(
            PoolSpec(
                token_a=p["token_a"],
                token_b=p["token_b"],
                fee_bps=int(p["fee_bps"]),
                amount_a=int(p["amount_a"]),
                amount_b=int(p["amount_b"]),
            )
            for p in doc.get("pools", [])
        ),
        feeds=tuple(
            FeedPlan(
                feed_id=f["feed_id"],
                reporters=int(f["reporters"]),
                quorum=int(f["quorum"]),
                base_value=int(f["base_value"]),
                jitter_bps=int(f.get("jitter_bps", 100)),
            )
            for f in doc.get("feeds", [])
        ),
        agent_native=int(doc.get("funding", {}).get("agent_native", 100_000_000)),
        deployer_native=int(
            doc.get("funding", {}).get("deployer_native", 1_000_000_000)
        ),
        trader_tokens=int(doc.get("funding", {}).get("trader_tokens", 1_000_000)),
    )


def derive_keypair(seed: int, role: str, index: int) -> Keypair:
    material = hashlib.sha256(
        b"keyseed:"
        + role.encode()
        + b":"
        + seed.to_bytes(8, "big")
        + index.to_bytes(8, "big")
    ).digest()
    return keygen(material)


@dataclass
class Cast:
    """Everyone in the play: agents in index order, reporters per feed, and
    the deployer who owns setup."""

    agents: list[Keypair]
    reporters: dict[str, list[Keypair]] = field(default_factory=dict)
    deployer: Keypair = None


def build_cast(scenario: Scenario) -> Cast:
    agents = [
        derive_keypair(scenario.seed, ROLE_AGENT, i)
        for i in range(scenario.agent_count)
    ]
    reporters: dict[str, list[Keypair]] = {}
    offset = 0
    for feed in scenario.feeds:
        reporters[feed.feed_id] = [
            derive_keypair(scenario.seed, ROLE_REPORTER, REPORTER_INDEX_BASE + offset + j)
            for j in range(feed.reporters)
        ]
        offset += feed.reporters
    deployer = derive_keypair(scenario.seed, ROLE_DEPLOYER, DEPLOYER_INDEX)
    return Cast(agents=agents, reporters=reporters, deployer=deployer)


def genesis_for_scenario(scenario: Scenario) -> GenesisConfig:
    cast = build_cast(scenario)
    allocations = [(cast.deployer.address, scenario.deployer_native)]
    allocations += [(kp.address, scenario.agent_native) for kp in cast.agents]
    for feed in scenario.feeds:
        allocations += [
            (kp.address, scenario.agent_native)
            for kp in cast.reporters[feed.feed_id]
        ]
    feeds = tuple(
        FeedSpec(
            feed_id=feed.feed_id,
            reporters=tuple(kp.address for kp in cast.reporters[feed.feed_id]),
            quorum=feed.quorum,
        )
        for feed in scenario.feeds
    )
    return GenesisConfig(
        chain_seed=scenario.seed,
        block_interval=scenario.block_interval,
        allocations=tuple(allocations),
        feeds=feeds,
        max_faucet_grant=DEFAULT_MAX_FAUCET_GRANT,
    )

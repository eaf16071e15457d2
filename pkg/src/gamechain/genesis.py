"""Genesis configuration: everything a verifier needs to replay from zero.

The chain seed lives here because block timestamps and confirmation draws
come from it; an export is self-contained exactly when genesis.json plus the
block log reproduce every recorded byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import INVALID_INPUT, LedgerError
from .state import FEED_ID_MAX_BYTES, Account, Feed, LedgerState

DEFAULT_BLOCK_INTERVAL = (15, 45)
DEFAULT_MAX_FAUCET_GRANT = 10_000_000


class GenesisError(LedgerError):
    code = INVALID_INPUT


@dataclass(frozen=True)
class FeedSpec:
    feed_id: str
    reporters: tuple[bytes, ...]
    quorum: int


@dataclass(frozen=True)
class GenesisConfig:
    chain_seed: int = 0
    block_interval: tuple[int, int] = DEFAULT_BLOCK_INTERVAL
    allocations: tuple[tuple[bytes, int], ...] = ()
    feeds: tuple[FeedSpec, ...] = ()
    max_faucet_grant: int = DEFAULT_MAX_FAUCET_GRANT

    def to_json(self) -> dict:
        return {
            "chain_seed": self.chain_seed,
            "block_interval": list(self.block_interval),
            "allocations": [
                {"address": addr.hex(), "amount": amount}
                for addr, amount in self.allocations
            ],
            "feeds": [
                {
                    "feed_id": f.feed_id,
                    "reporters": [r.hex() for r in f.reporters],
                    "quorum": f.quorum,
                }
                for f in self.feeds
            ],
            "max_faucet_grant": self.max_faucet_grant,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(doc: dict) -> "GenesisConfig":
        try:
            lo, hi = doc.get("block_interval", DEFAULT_BLOCK_INTERVAL)
            allocations = tuple(
                (bytes.fromhex(a["address"]), int(a["amount"]))
                for a in doc.get("allocations", [])
            )
            feeds = tuple(
                FeedSpec(
                    feed_id=f["feed_id"],
                    reporters=tuple(bytes.fromhex(r) for r in f["reporters"]),
                    quorum=int(f["quorum"]),
                )
                for f in doc.get("feeds", [])
            )
            return GenesisConfig(
                chain_seed=int(doc.get("chain_seed", 0)),
                block_interval=(int(lo), int(hi)),
                allocations=allocations,
                feeds=feeds,
                max_faucet_grant=int(
                    doc.get("max_faucet_grant", DEFAULT_MAX_FAUCET_GRANT)
                ),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise GenesisError(f"malformed genesis document: {e}") from e

    @staticmethod
    def loads(text: str) -> "GenesisConfig":
        return GenesisConfig.from_json(json.loads(text))


def validate_genesis(cfg: GenesisConfig) -> None:
    lo, hi = cfg.block_interval
    if not 0 <= lo <= hi:
        raise GenesisError("block interval bounds must satisfy 0 <= lo <= hi")
    seen = set()
    for addr, amount in cfg.allocations:
        if len(addr) != 32:
            raise GenesisError("allocation address must be 32 bytes")
        if addr in seen:
            raise GenesisError(f"duplicate allocation for {addr.hex()}")
        if amount <= 0:
            raise GenesisError("allocation amounts must be positive")
        seen.add(addr)
    feed_ids = set()
    for feed in cfg.feeds:
        if not 1 <= len(feed.feed_id.encode()) <= FEED_ID_MAX_BYTES:
            raise GenesisError("feed id length out of range")
        if feed.feed_id in feed_ids:
            raise GenesisError(f"duplicate feed {feed.feed_id}")
        feed_ids.add(feed.feed_id)
        if not feed.reporters:
            raise GenesisError(f"feed {feed.feed_id} has no reporters")
        if len(set(feed.reporters)) != len(feed.reporters):
            raise GenesisError(f"feed {feed.feed_id} repeats a reporter")
        if not 1 <= feed.quorum <= len(feed.reporters):
            raise GenesisError(f"feed {feed.feed_id} quorum out of range")


def build_state(cfg: GenesisConfig) -> LedgerState:
    validate_genesis(cfg)
    state = LedgerState()
    for addr, amount in cfg.allocations:
        state.accounts[addr] = Account(balance=amount)
        state.genesis_supply += amount
    for feed in cfg.feeds:
        state.feeds[feed.feed_id] = Feed(
            feed_id=feed.feed_id,
            reporters=tuple(feed.reporters),
            quorum=feed.quorum,
        )
    return state

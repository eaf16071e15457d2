"""Ledger state containers, the canonical state root, and conservation checks.

The state root hashes the seven collections in a fixed order (accounts,
assets, tokens, token balances, pools, stakes, oracle feeds) followed by the
run counters, all under the canonical encoding rules. The owner index is
derived data and deliberately excluded: it must always equal a fresh rebuild
from the asset table.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .codec import Writer, write_map

RARITIES = ("Common", "Uncommon", "Rare", "Epic", "Legendary")

NAME_MAX_BYTES = 100
CATEGORY_MAX_BYTES = 50
SYMBOL_MAX_BYTES = 8
FEED_ID_MAX_BYTES = 16


@dataclass
class Account:
    balance: int = 0
    nonce: int = 0


@dataclass
class Asset:
    asset_id: int
    name: str
    category: str
    rarity: int  # index into RARITIES
    owner: bytes
    created_at_block: int

    @property
    def rarity_name(self) -> str:
        return RARITIES[self.rarity]

    def to_json(self) -> dict:
        return {
            "id": self.asset_id,
            "name": self.name,
            "category": self.category,
            "rarity": self.rarity_name,
            "owner": self.owner.hex(),
            "created_at_block": self.created_at_block,
        }


@dataclass
class Token:
    symbol: str
    total_supply: int
    balances: dict[bytes, int] = field(default_factory=dict)


@dataclass
class Pool:
    pool_id: int
    token_a: str  # token_a < token_b bytewise
    token_b: str
    reserve_a: int
    reserve_b: int
    fee_bps: int
    lp_supply: int
    lp_balances: dict[bytes, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "pool_id": self.pool_id,
            "token_a": self.token_a,
            "token_b": self.token_b,
            "reserve_a": self.reserve_a,
            "reserve_b": self.reserve_b,
            "fee_bps": self.fee_bps,
            "lp_supply": self.lp_supply,
        }


@dataclass
class StakePosition:
    amount: int
    start_block: int


@dataclass
class Feed:
    feed_id: str
    reporters: tuple[bytes, ...]
    quorum: int
    round: int = 0
    pending: dict[bytes, int] = field(default_factory=dict)
    last_value: int | None = None
    last_updated_block: int | None = None


@dataclass
class LedgerState:
    accounts: dict[bytes, Account] = field(default_factory=dict)
    assets: dict[int, Asset] = field(default_factory=dict)
    owner_index: dict[bytes, set[int]] = field(default_factory=dict)  # derived
    tokens: dict[str, Token] = field(default_factory=dict)
    pools: dict[int, Pool] = field(default_factory=dict)
    stakes: dict[bytes, StakePosition] = field(default_factory=dict)
    feeds: dict[str, Feed] = field(default_factory=dict)
    gas_burned_total: int = 0
    event_sequence: int = 0
    faucet_issued: int = 0
    reward_issued: int = 0
    next_asset_id: int = 1
    next_pool_id: int = 1
    genesis_supply: int = 0

    def touch(self, address: bytes) -> Account:
        """Ensure an account record exists. An address has 'appeared in state'
        exactly when it has a record here."""
        acct = self.accounts.get(address)
        if acct is None:
            acct = Account()
            self.accounts[address] = acct
        return acct


def _write_addr_key(w: Writer, addr: bytes) -> None:
    w.raw(addr, 32)


def _write_u64_key(w: Writer, key: int) -> None:
    w.u64(key)


def _write_str_key(w: Writer, key: str) -> None:
    w.str_(key)


def encode_state(state: LedgerState) -> bytes:
    w = Writer()

    def acct(w: Writer, a: Account) -> None:
        w.u64(a.balance)
        w.u64(a.nonce)

    write_map(w, state.accounts, _write_addr_key, acct)

    def asset(w: Writer, a: Asset) -> None:
        w.str_(a.name)
        w.str_(a.category)
        w.u8(a.rarity)
        w.raw(a.owner, 32)
        w.u64(a.created_at_block)

    write_map(w, state.assets, _write_u64_key, asset)

    write_map(w, state.tokens, _write_str_key, lambda w, t: w.u64(t.total_supply))

    def balances(w: Writer, t: Token) -> None:
        write_map(w, t.balances, _write_addr_key, lambda w, v: w.u64(v))

    write_map(w, state.tokens, _write_str_key, balances)

    def pool(w: Writer, p: Pool) -> None:
        w.str_(p.token_a)
        w.str_(p.token_b)
        w.u64(p.reserve_a)
        w.u64(p.reserve_b)
        w.u64(p.fee_bps)
        w.u64(p.lp_supply)
        write_map(w, p.lp_balances, _write_addr_key, lambda w, v: w.u64(v))

    write_map(w, state.pools, _write_u64_key, pool)

    def stake(w: Writer, s: StakePosition) -> None:
        w.u64(s.amount)
        w.u64(s.start_block)

    write_map(w, state.stakes, _write_addr_key, stake)

    def feed(w: Writer, f: Feed) -> None:
        w.u64(f.quorum)
        w.u64(f.round)
        w.u32(len(f.reporters))
        for addr in sorted(f.reporters):
            w.raw(addr, 32)
        write_map(w, f.pending, _write_addr_key, lambda w, v: w.u64(v))
        if f.last_value is None:
            w.u8(0)
        else:
            w.u8(1)
            w.u64(f.last_value)
        if f.last_updated_block is None:
            w.u8(0)
        else:
            w.u8(1)
            w.u64(f.last_updated_block)

    write_map(w, state.feeds, _write_str_key, feed)

    w.u64(state.gas_burned_total)
    w.u64(state.event_sequence)
    w.u64(state.faucet_issued)
    w.u64(state.reward_issued)
    w.u64(state.next_asset_id)
    w.u64(state.next_pool_id)
    return w.getvalue()


def state_root(state: LedgerState) -> bytes:
    return hashlib.sha256(encode_state(state)).digest()


def native_conservation_gap(state: LedgerState) -> int:
    """(balances + burned gas + staked) minus (genesis supply + issuance).
    Zero when the native supply identity holds exactly."""
    held = sum(a.balance for a in state.accounts.values())
    staked = sum(s.amount for s in state.stakes.values())
    lhs = held + state.gas_burned_total + staked
    rhs = state.genesis_supply + state.faucet_issued + state.reward_issued
    return lhs - rhs


def token_conservation_gaps(state: LedgerState) -> dict[str, int]:
    """Per-symbol (balances + pool-locked) minus total_supply."""
    locked: dict[str, int] = {}
    for pool in state.pools.values():
        locked[pool.token_a] = locked.get(pool.token_a, 0) + pool.reserve_a
        locked[pool.token_b] = locked.get(pool.token_b, 0) + pool.reserve_b
    gaps = {}
    for symbol, token in state.tokens.items():
        held = sum(token.balances.values())
        gaps[symbol] = held + locked.get(symbol, 0) - token.total_supply
    return gaps

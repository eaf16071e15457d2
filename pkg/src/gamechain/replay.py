"""Replay verification: re-derive every block from genesis and compare.

The recorded log is treated as a claim, not a source of truth. Signatures
are re-verified, receipts and roots are recomputed (including timestamp and
confirmation draws from the genesis chain seed), and the first divergence
aborts with its height. Faucet grants are the one exogenous input, so they
replay as recorded.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .engine import BlockRecord, ZERO_ROOT
from .errors import IntegrityError
from .gas import DEFAULT_SCHEDULE
from .genesis import GenesisConfig
from .genesis import build_state
from .ledger import apply_faucet_grant, apply_transaction
from .prng import SplitMix64
from .state import (
    LedgerState,
    native_conservation_gap,
    state_root,
    token_conservation_gaps,
)
from .tx import verify_transaction
from .blocklog import read_block_log


@dataclass
class ReplayResult:
    state: LedgerState
    blocks: int
    txs: int
    applied: int
    rejected: int
    events: int
    state_root: bytes


def replay_records(genesis: GenesisConfig, records: list[BlockRecord]) -> ReplayResult:
    if not records:
        raise IntegrityError(None, "empty block log")
    state = build_state(genesis)
    rng = SplitMix64(genesis.chain_seed)
    lo, hi = genesis.block_interval

    g = records[0]
    if g.block.height != 0:
        raise IntegrityError(0, "first record is not the genesis block")
    if g.block.parent_root != ZERO_ROOT:
        raise IntegrityError(0, "genesis parent root is not zero")
    if g.block.timestamp != 0:
        raise IntegrityError(0, "genesis timestamp is not zero")
    if g.txs or g.receipts or g.faucet_grants or g.block.txids:
        raise IntegrityError(0, "genesis block is not empty")
    root = state_root(state)
    if g.block.state_root != root:
        raise IntegrityError(0, "genesis state root mismatch")

    txs = applied = rejected = events = 0
    prev = g.block
    for record in records[1:]:
        height = prev.height + 1
        b = record.block
        if b.height != height:
            raise IntegrityError(height, f"height jumps to {b.height}")
        if b.parent_root != prev.state_root:
            raise IntegrityError(height, "parent root does not chain")
        interval = rng.between(lo, hi)
        if b.timestamp != prev.timestamp + interval:
            raise IntegrityError(height, "timestamp does not match interval draw")
        if tuple(stx.txid for stx in record.txs) != b.txids:
            raise IntegrityError(height, "txid list does not match transactions")
        if len(record.receipts) != len(record.txs):
            raise IntegrityError(height, "receipt count does not match transactions")
        for grant in record.faucet_grants:
            if grant.amount <= 0 or grant.amount > genesis.max_faucet_grant:
                raise IntegrityError(height, "faucet grant out of policy")
            apply_faucet_grant(state, grant.address, grant.amount)
        for index, stx in enumerate(record.txs):
            if not verify_transaction(stx):
                raise IntegrityError(height, f"bad signature on tx {index}")
            confirmation = rng.between(lo, hi)
            receipt = apply_transaction(
                state, DEFAULT_SCHEDULE, stx, height, index, confirmation
            )
            if receipt != record.receipts[index]:
                raise IntegrityError(height, f"receipt mismatch at tx {index}")
            txs += 1
            if receipt.applied:
                applied += 1
            else:
                rejected += 1
            events += len(receipt.events)
        root = state_root(state)
        if b.state_root != root:
            raise IntegrityError(height, "state root mismatch")
        prev = b

    gap = native_conservation_gap(state)
    if gap != 0:
        raise IntegrityError(prev.height, f"native conservation off by {gap}")
    for symbol, token_gap in token_conservation_gaps(state).items():
        if token_gap != 0:
            raise IntegrityError(
                prev.height, f"{symbol} conservation off by {token_gap}"
            )
    return ReplayResult(
        state=state,
        blocks=len(records),
        txs=txs,
        applied=applied,
        rejected=rejected,
        events=events,
        state_root=root,
    )


def verify_export(export_dir: str) -> ReplayResult:
    genesis_path = os.path.join(export_dir, "genesis.json")
    log_path = os.path.join(export_dir, "blocklog.bin")
    with open(genesis_path) as f:
        genesis = GenesisConfig.from_json(json.load(f))
    records = read_block_log(log_path)
    return replay_records(genesis, records)

"""The chain engine: single writer, logical clock, FIFO mempool.

All mutation funnels through one re-entrant lock. Block timestamps and
per-transaction confirmation delays are drawn from a SplitMix64 stream
seeded by the genesis chain seed, in a fixed order (one interval draw per
block, then one confirmation draw per transaction), so a replay from
genesis reproduces them exactly.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

from . import tx
from .errors import INVALID_INPUT, LedgerError, SignatureError
from .events import EventFrame
from .gas import DEFAULT_SCHEDULE, GasSchedule
from .genesis import GenesisConfig, build_state
from .ledger import Receipt, apply_faucet_grant, apply_transaction
from .prng import SplitMix64
from .state import LedgerState, state_root

ZERO_ROOT = bytes(32)


@dataclass(frozen=True)
class Block:
    height: int
    parent_root: bytes
    state_root: bytes
    timestamp: int
    txids: tuple[bytes, ...]

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "parent_root": self.parent_root.hex(),
            "state_root": self.state_root.hex(),
            "timestamp": self.timestamp,
            "txids": [t.hex() for t in self.txids],
        }


@dataclass(frozen=True)
class FaucetGrant:
    address: bytes
    amount: int


@dataclass(frozen=True)
class BlockRecord:
    """A block plus everything needed to re-apply it: the faucet grants it
    credited, the signed transactions in order, and the receipts produced."""

    block: Block
    faucet_grants: tuple[FaucetGrant, ...]
    txs: tuple[tx.SignedTransaction, ...]
    receipts: tuple[Receipt, ...]


class Chain:
    def __init__(self, genesis: GenesisConfig, schedule: GasSchedule | None = None):
        self.lock = threading.RLock()
        self.genesis = genesis
        self.schedule = schedule or DEFAULT_SCHEDULE
        self.state: LedgerState = build_state(genesis)
        self.rng = SplitMix64(genesis.chain_seed)
        self.mempool: deque[tx.SignedTransaction] = deque()
        self.pending_grants: list[FaucetGrant] = []
        self.blocks: list[BlockRecord] = []
        self.receipts: dict[bytes, Receipt] = {}
        self.frames: list[EventFrame] = []
        self._known_txids: set[bytes] = set()
        self._block_listeners: list = []
        genesis_block = Block(
            height=0,
            parent_root=ZERO_ROOT,
            state_root=state_root(self.state),
            timestamp=0,
            txids=(),
        )
        self.blocks.append(
            BlockRecord(block=genesis_block, faucet_grants=(), txs=(), receipts=())
        )

    # -- intake ------------------------------------------------------------

    def submit(self, stx: tx.SignedTransaction) -> bytes:
        """Admit a verified-signature transaction into the FIFO mempool."""
        if not tx.verify_transaction(stx):
            raise SignatureError("transaction signature does not verify")
        with self.lock:
            if stx.txid in self._known_txids:
                raise LedgerError.with_code(
                    INVALID_INPUT, f"duplicate transaction {stx.txid.hex()}"
                )
            self._known_txids.add(stx.txid)
            self.mempool.append(stx)
            return stx.txid

    def submit_raw(self, data: bytes) -> bytes:
        return self.submit(tx.decode_and_verify(data))

    def faucet(self, address: bytes, amount: int) -> None:
        """Queue a grant; it credits at the start of the next block so the
        block log stays the sole source of state changes."""
        if len(address) != 32:
            raise LedgerError.with_code(INVALID_INPUT, "address must be 32 bytes")
        if amount <= 0:
            raise LedgerError.with_code(INVALID_INPUT, "grant must be positive")
        if amount > self.genesis.max_faucet_grant:
            raise LedgerError.with_code(
                INVALID_INPUT,
                f"grant exceeds per-request cap {self.genesis.max_faucet_grant}",
            )
        with self.lock:
            self.pending_grants.append(FaucetGrant(address=address, amount=amount))

    # -- block production ----------------------------------------------------

    def produce_block(self) -> BlockRecord:
        with self.lock:
            grants = tuple(self.pending_grants)
            self.pending_grants.clear()
            txs = tuple(self.mempool)
            self.mempool.clear()
            record = self._apply_block(grants, txs)
            listeners = list(self._block_listeners)
        new_frames = [
            EventFrame(event=ev, txid=receipt.txid)
            for receipt in record.receipts
            for ev in receipt.events
        ]
        for listener in listeners:
            listener(record, new_frames)
        return record

    def _apply_block(
        self,
        grants: tuple[FaucetGrant, ...],
        txs: tuple[tx.SignedTransaction, ...],
    ) -> BlockRecord:
        prev = self.blocks[-1].block
        height = prev.height + 1
        lo, hi = self.genesis.block_interval
        interval = self.rng.between(lo, hi)
        timestamp = prev.timestamp + interval
        for grant in grants:
            apply_faucet_grant(self.state, grant.address, grant.amount)
        receipts = []
        for index, stx in enumerate(txs):
            confirmation = self.rng.between(lo, hi)
            receipts.append(
                apply_transaction(
                    self.state, self.schedule, stx, height, index, confirmation
                )
            )
        block = Block(
            height=height,
            parent_root=prev.state_root,
            state_root=state_root(self.state),
            timestamp=timestamp,
            txids=tuple(stx.txid for stx in txs),
        )
        record = BlockRecord(
            block=block, faucet_grants=grants, txs=txs, receipts=tuple(receipts)
        )
        self.blocks.append(record)
        for receipt in record.receipts:
            self.receipts[receipt.txid] = receipt
        for receipt in record.receipts:
            for ev in receipt.events:
                self.frames.append(EventFrame(event=ev, txid=receipt.txid))
        return record

    def add_block_listener(self, listener) -> None:
        """listener(record, new_frames) fires after each produced block,
        outside the engine lock."""
        with self.lock:
            self._block_listeners.append(listener)

    # -- views ---------------------------------------------------------------

    @property
    def head(self) -> Block:
        with self.lock:
            return self.blocks[-1].block

    @property
    def height(self) -> int:
        with self.lock:
            return self.blocks[-1].block.height

    def get_block(self, height: int) -> BlockRecord | None:
        with self.lock:
            if 0 <= height < len(self.blocks):
                return self.blocks[height]
            return None

    def get_receipt(self, txid: bytes) -> Receipt | None:
        with self.lock:
            return self.receipts.get(txid)

    def tx_status(self, txid: bytes) -> str:
        with self.lock:
            if txid in self.receipts:
                return self.receipts[txid].status
            if txid in self._known_txids:
                return "queued"
            return "unknown"

    def assets_by_owner(self, owner: bytes) -> list:
        with self.lock:
            ids = sorted(self.state.owner_index.get(owner, ()))
            return [self.state.assets[i] for i in ids]

    def events_from(self, start: int) -> list[EventFrame]:
        """Snapshot of the frames with sequence >= start."""
        with self.lock:
            # Sequences are gapless from 0, so the list index is the sequence.
            return list(self.frames[start:])

    def next_event_sequence(self) -> int:
        with self.lock:
            return self.state.event_sequence

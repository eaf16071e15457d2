"""Durable block log: length-prefixed binary frames plus an NDJSON mirror.

Each frame is u32 length | body | sha256(body). The checksum is not
redundant with replay: replay recomputes receipts and roots, but a flipped
byte inside an event attribute string or a reason message would produce an
"expected" mismatch only if replay compares that field; the checksum
condemns any single corrupted byte in the file unconditionally.
"""

from __future__ import annotations

import hashlib
import json
from typing import BinaryIO, Iterator

from .codec import Reader, Writer
from .engine import Block, BlockRecord, FaucetGrant
from .errors import DecodeError, IntegrityError
from .ledger import decode_receipt, encode_receipt
from .tx import decode_signed

MAGIC = b"GCBL\x00\x01"


def encode_block_record(record: BlockRecord) -> bytes:
    w = Writer()
    b = record.block
    w.u64(b.height)
    w.raw(b.parent_root, 32)
    w.raw(b.state_root, 32)
    w.u64(b.timestamp)
    w.u32(len(b.txids))
    for txid in b.txids:
        w.raw(txid, 32)
    w.u32(len(record.faucet_grants))
    for grant in record.faucet_grants:
        w.raw(grant.address, 32)
        w.u64(grant.amount)
    w.u32(len(record.txs))
    for stx in record.txs:
        w.bytes_(stx.encode())
    w.u32(len(record.receipts))
    for receipt in record.receipts:
        encode_receipt(w, receipt)
    return w.getvalue()


def decode_block_record(data: bytes) -> BlockRecord:
    r = Reader(data)
    height = r.u64()
    parent_root = r.raw(32)
    state_root_ = r.raw(32)
    timestamp = r.u64()
    txids = tuple(r.raw(32) for _ in range(r.u32()))
    grants = tuple(
        FaucetGrant(address=r.raw(32), amount=r.u64()) for _ in range(r.u32())
    )
    txs = tuple(decode_signed(r.bytes_()) for _ in range(r.u32()))
    receipts = tuple(decode_receipt(r) for _ in range(r.u32()))
    r.expect_end()
    block = Block(
        height=height,
        parent_root=parent_root,
        state_root=state_root_,
        timestamp=timestamp,
        txids=txids,
    )
    return BlockRecord(block=block, faucet_grants=grants, txs=txs, receipts=receipts)


def record_to_json(record: BlockRecord) -> dict:
    return {
        "block": record.block.to_json(),
        "faucet_grants": [
            {"address": g.address.hex(), "amount": g.amount}
            for g in record.faucet_grants
        ],
        "txs": [stx.encode().hex() for stx in record.txs],
        "receipts": [receipt.to_json() for receipt in record.receipts],
    }


class BlockLogWriter:
    """Appends frames as blocks are produced; also mirrors NDJSON if asked."""

    def __init__(self, binary: BinaryIO, mirror=None):
        self.binary = binary
        self.mirror = mirror
        self.binary.write(MAGIC)

    def append(self, record: BlockRecord) -> None:
        body = encode_block_record(record)
        self.binary.write(len(body).to_bytes(4, "big"))
        self.binary.write(body)
        self.binary.write(hashlib.sha256(body).digest())
        if self.mirror is not None:
            self.mirror.write(
                json.dumps(record_to_json(record), sort_keys=True) + "\n"
            )

    def flush(self) -> None:
        self.binary.flush()
        if self.mirror is not None:
            self.mirror.flush()


def write_block_log(path: str, records, mirror_path: str | None = None) -> None:
    mirror = open(mirror_path, "w") if mirror_path else None
    try:
        with open(path, "wb") as binary:
            log = BlockLogWriter(binary, mirror)
            for record in records:
                log.append(record)
            log.flush()
    finally:
        if mirror is not None:
            mirror.close()


def iter_block_log(data: bytes) -> Iterator[BlockRecord]:
    """Decode frames from raw file bytes, enforcing the per-frame checksum."""
    if data[: len(MAGIC)] != MAGIC:
        raise IntegrityError(None, "bad block log magic")
    offset = len(MAGIC)
    index = 0
    while offset < len(data):
        if offset + 4 > len(data):
            raise IntegrityError(None, f"truncated length prefix at frame {index}")
        length = int.from_bytes(data[offset : offset + 4], "big")
        offset += 4
        end = offset + length + 32
        if end > len(data):
            raise IntegrityError(None, f"truncated frame {index}")
        body = data[offset : offset + length]
        checksum = data[offset + length : end]
        if hashlib.sha256(body).digest() != checksum:
            raise IntegrityError(None, f"checksum mismatch at frame {index}")
        try:
            yield decode_block_record(body)
        except DecodeError as e:
            raise IntegrityError(None, f"undecodable frame {index}: {e}") from e
        offset = end
        index += 1


def read_block_log(path: str) -> list[BlockRecord]:
    with open(path, "rb") as f:
        return list(iter_block_log(f.read()))

"""Ledger events: the append-only, globally sequenced effect log.

Folding AssetCreated/AssetTransferred events must reconstruct the exact
asset-ownership map, so executors emit them for every successful ownership
change and for nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from .codec import Reader, Writer
from .errors import DecodeError

KINDS = (
    "AssetCreated",
    "AssetTransferred",
    "PoolSwapped",
    "LiquidityChanged",
    "Staked",
    "Unstaked",
    "OraclePriceUpdated",
    "NativeTransferred",
    "TokenTransferred",
)
_KIND_TAG = {kind: tag for tag, kind in enumerate(KINDS)}

AttrValue = Union[str, int]
Attributes = Tuple[Tuple[str, AttrValue], ...]


@dataclass(frozen=True)
class Event:
    kind: str
    sequence: int
    block_height: int
    attributes: Attributes

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sequence": self.sequence,
            "block_height": self.block_height,
            "attributes": dict(self.attributes),
        }


@dataclass(frozen=True)
class EventFrame:
    """An event paired with the txid of the receipt that emitted it."""

    event: Event
    txid: bytes

    @property
    def sequence(self) -> int:
        return self.event.sequence

    def to_json(self) -> dict:
        d = self.event.to_json()
        d["txid"] = self.txid.hex()
        return d


def encode_event(w: Writer, ev: Event) -> None:
    w.u8(_KIND_TAG[ev.kind])
    w.u64(ev.sequence)
    w.u64(ev.block_height)
    w.u32(len(ev.attributes))
    for key, value in ev.attributes:
        w.str_(key)
        if isinstance(value, str):
            w.u8(0)
            w.str_(value)
        else:
            w.u8(1)
            w.u64(value)


def decode_event(r: Reader) -> Event:
    tag = r.u8()
    if tag >= len(KINDS):
        raise DecodeError(f"unknown event kind tag {tag}")
    sequence = r.u64()
    block_height = r.u64()
    count = r.u32()
    attrs = []
    for _ in range(count):
        key = r.str_()
        value_tag = r.u8()
        if value_tag == 0:
            attrs.append((key, r.str_()))
        elif value_tag == 1:
            attrs.append((key, r.u64()))
        else:
            raise DecodeError(f"unknown attribute value tag {value_tag}")
    return Event(kind=KINDS[tag], sequence=sequence, block_height=block_height,
                 attributes=tuple(attrs))

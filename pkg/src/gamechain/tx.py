"""Transaction payloads, signing, and the canonical transaction encoding.

Payload tags are frozen; changing them changes every txid and state root.
Enum-like bytes (rarity, swap direction) decode permissively as u8 and are
validated by the executor, so a structurally well-formed transaction with a
bad enum value is rejected with invalid_input rather than failing to decode.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from typing import Union

from . import keys
from .codec import Reader, Writer
from .errors import DecodeError, SignatureError, SigningKeyError


@dataclass(frozen=True)
class NativeTransfer:
    to: bytes
    amount: int


@dataclass(frozen=True)
class CreateAsset:
    name: str
    category: str
    rarity: int


@dataclass(frozen=True)
class TransferAsset:
    asset_id: int
    to: bytes


@dataclass(frozen=True)
class CreateToken:
    symbol: str
    supply: int


@dataclass(frozen=True)
class TokenTransfer:
    symbol: str
    to: bytes
    amount: int


@dataclass(frozen=True)
class CreatePool:
    token_a: str
    token_b: str
    fee_bps: int
    amount_a: int
    amount_b: int


@dataclass(frozen=True)
class AddLiquidity:
    pool_id: int
    amount_a: int
    amount_b: int


@dataclass(frozen=True)
class RemoveLiquidity:
    pool_id: int
    lp_amount: int


@dataclass(frozen=True)
class SwapExactIn:
    pool_id: int
    direction: int  # 0: a in, b out; 1: b in, a out
    amount_in: int
    min_out: int


@dataclass(frozen=True)
class Stake:
    amount: int


@dataclass(frozen=True)
class Unstake:
    pass


@dataclass(frozen=True)
class SubmitReport:
    feed_id: str
    value: int


Payload = Union[
    NativeTransfer, CreateAsset, TransferAsset, CreateToken, TokenTransfer,
    CreatePool, AddLiquidity, RemoveLiquidity, SwapExactIn, Stake, Unstake,
    SubmitReport,
]

PAYLOAD_ORDER = (
    NativeTransfer, CreateAsset, TransferAsset, CreateToken, TokenTransfer,
    CreatePool, AddLiquidity, RemoveLiquidity, SwapExactIn, Stake, Unstake,
    SubmitReport,
)
PAYLOAD_TAG = {cls: tag for tag, cls in enumerate(PAYLOAD_ORDER)}

DIRECTION_AB = 0
DIRECTION_BA = 1

# Field wire types: how each dataclass field is encoded.
_ADDR_FIELDS = {"to"}
_U8_FIELDS = {"rarity", "direction"}


def _write_payload_fields(w: Writer, payload: Payload) -> None:
    for f in fields(payload):
        value = getattr(payload, f.name)
        if f.name in _ADDR_FIELDS:
            if len(value) != keys.ADDRESS_LEN:
                raise ValueError(f"{f.name} must be a 32-byte address")
            w.raw(value, keys.ADDRESS_LEN)
        elif f.name in _U8_FIELDS:
            w.u8(value)
        elif isinstance(value, str):
            w.str_(value)
        else:
            w.u64(value)


def encode_payload(w: Writer, payload: Payload) -> None:
    tag = PAYLOAD_TAG.get(type(payload))
    if tag is None:
        raise ValueError(f"unknown payload type: {type(payload)!r}")
    w.u8(tag)
    _write_payload_fields(w, payload)


def decode_payload(r: Reader) -> Payload:
    tag = r.u8()
    if tag >= len(PAYLOAD_ORDER):
        raise DecodeError(f"unknown payload tag {tag}")
    cls = PAYLOAD_ORDER[tag]
    values = []
    for f in fields(cls):
        if f.name in _ADDR_FIELDS:
            values.append(r.raw(keys.ADDRESS_LEN))
        elif f.name in _U8_FIELDS:
            values.append(r.u8())
        elif f.type == "str":
            values.append(r.str_())
        else:
            values.append(r.u64())
    return cls(*values)


def payload_kind(payload: Payload) -> str:
    """Stable payload name used in receipts, metrics, and the API."""
    return type(payload).__name__


@dataclass(frozen=True)
class UnsignedTransaction:
    sender: bytes
    nonce: int
    payload: Payload

    def encode(self) -> bytes:
        w = Writer()
        w.raw(self.sender, keys.ADDRESS_LEN)
        w.u64(self.nonce)
        encode_payload(w, self.payload)
        return w.getvalue()


@dataclass(frozen=True)
class SignedTransaction:
    body: UnsignedTransaction
    signature: bytes
    txid: bytes

    def encode(self) -> bytes:
        return self.body.encode() + self.signature


def _txid(body_bytes: bytes, signature: bytes) -> bytes:
    return hashlib.sha256(body_bytes + signature).digest()


def sign_transaction(body: UnsignedTransaction, secret: bytes) -> SignedTransaction:
    kp = keys.keygen(secret)
    if kp.public != body.sender:
        raise SigningKeyError("signing secret does not match transaction sender")
    body_bytes = body.encode()
    signature = keys.sign(secret, body_bytes)
    return SignedTransaction(body=body, signature=signature, txid=_txid(body_bytes, signature))


def verify_transaction(tx: SignedTransaction) -> bool:
    return keys.verify(tx.body.sender, tx.signature, tx.body.encode())


def decode_unsigned(r: Reader) -> UnsignedTransaction:
    sender = r.raw(keys.ADDRESS_LEN)
    nonce = r.u64()
    payload = decode_payload(r)
    return UnsignedTransaction(sender=sender, nonce=nonce, payload=payload)


def decode_signed(data: bytes) -> SignedTransaction:
    """Decode the canonical bytes of a signed transaction (strict, no trailing)."""
    r = Reader(data)
    body = decode_unsigned(r)
    signature = r.raw(keys.SIGNATURE_LEN)
    r.expect_end()
    body_bytes = data[: len(data) - keys.SIGNATURE_LEN]
    return SignedTransaction(body=body, signature=signature, txid=_txid(body_bytes, signature))


def decode_and_verify(data: bytes) -> SignedTransaction:
    tx = decode_signed(data)
    if not verify_transaction(tx):
        raise SignatureError("transaction signature does not verify against sender")
    return tx

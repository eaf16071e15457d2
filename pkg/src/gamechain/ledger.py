"""Transaction application: nonce gate, fee burn, executor dispatch, receipts.

Rejection tiers:
  * nonce mismatch and unpayable fee reject before any charge: gas_used 0,
    no debit, no nonce advance;
  * executor rejections happen after the fee burn and nonce advance, so they
    cost exactly the metered gas and emit no events.
Executors validate before mutating, which is what makes the second tier safe
without snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import assets, defi, oracle, tx
from .codec import Reader, Writer
from .errors import (
    INSUFFICIENT_FUNDS,
    NONCE_MISMATCH,
    REASON_CODES,
    DecodeError,
    ExecRejection,
)
from .events import Event, decode_event, encode_event
from .gas import GasSchedule, charge_gas
from .state import LedgerState

STATUS_APPLIED = "applied"
STATUS_REJECTED = "rejected"


@dataclass(frozen=True)
class Receipt:
    txid: bytes
    block_height: int
    tx_index: int
    status: str
    reason_code: str  # empty when applied
    gas_used: int
    fee_paid: int
    confirmation_seconds: int
    events: tuple[Event, ...]

    @property
    def applied(self) -> bool:
        return self.status == STATUS_APPLIED

    def to_json(self) -> dict:
        return {
            "txid": self.txid.hex(),
            "block_height": self.block_height,
            "tx_index": self.tx_index,
            "status": self.status,
            "reason_code": self.reason_code or None,
            "gas_used": self.gas_used,
            "fee_paid": self.fee_paid,
            "confirmation_seconds": self.confirmation_seconds,
            "events": [ev.to_json() for ev in self.events],
        }


def encode_receipt(w: Writer, r: Receipt) -> None:
    w.raw(r.txid, 32)
    w.u64(r.block_height)
    w.u32(r.tx_index)
    w.u8(0 if r.status == STATUS_APPLIED else 1)
    w.str_(r.reason_code)
    w.u64(r.gas_used)
    w.u64(r.fee_paid)
    w.u64(r.confirmation_seconds)
    w.u32(len(r.events))
    for ev in r.events:
        encode_event(w, ev)


def decode_receipt(r: Reader) -> Receipt:
    txid = r.raw(32)
    block_height = r.u64()
    tx_index = r.u32()
    status_tag = r.u8()
    if status_tag > 1:
        raise DecodeError(f"unknown receipt status tag {status_tag}")
    reason_code = r.str_()
    if reason_code and reason_code not in REASON_CODES:
        raise DecodeError(f"unknown reason code {reason_code!r}")
    gas_used = r.u64()
    fee_paid = r.u64()
    confirmation_seconds = r.u64()
    events = tuple(decode_event(r) for _ in range(r.u32()))
    return Receipt(
        txid=txid,
        block_height=block_height,
        tx_index=tx_index,
        status=STATUS_APPLIED if status_tag == 0 else STATUS_REJECTED,
        reason_code=reason_code,
        gas_used=gas_used,
        fee_paid=fee_paid,
        confirmation_seconds=confirmation_seconds,
        events=events,
    )


def dispatch(
    state: LedgerState, sender: bytes, payload: tx.Payload, block_height: int
) -> list[tuple[str, tuple]]:
    if isinstance(payload, tx.NativeTransfer):
        return assets.exec_native_transfer(state, sender, payload)
    if isinstance(payload, tx.CreateAsset):
        return assets.exec_create_asset(state, sender, payload, block_height)
    if isinstance(payload, tx.TransferAsset):
        return assets.exec_transfer_asset(state, sender, payload)
    if isinstance(payload, tx.CreateToken):
        return assets.exec_create_token(state, sender, payload)
    if isinstance(payload, tx.TokenTransfer):
        return assets.exec_token_transfer(state, sender, payload)
    if isinstance(payload, tx.CreatePool):
        return defi.exec_create_pool(state, sender, payload)
    if isinstance(payload, tx.AddLiquidity):
        return defi.exec_add_liquidity(state, sender, payload)
    if isinstance(payload, tx.RemoveLiquidity):
        return defi.exec_remove_liquidity(state, sender, payload)
    if isinstance(payload, tx.SwapExactIn):
        return defi.exec_swap(state, sender, payload)
    if isinstance(payload, tx.Stake):
        return defi.exec_stake(state, sender, payload, block_height)
    if isinstance(payload, tx.Unstake):
        return defi.exec_unstake(state, sender, payload, block_height)
    if isinstance(payload, tx.SubmitReport):
        return oracle.exec_submit_report(state, sender, payload, block_height)
    raise TypeError(f"no executor for payload type {type(payload).__name__}")


def apply_transaction(
    state: LedgerState,
    schedule: GasSchedule,
    stx: tx.SignedTransaction,
    block_height: int,
    tx_index: int,
    confirmation_seconds: int,
) -> Receipt:
    sender = stx.body.sender
    payload = stx.body.payload

    def rejected(code: str, gas_used: int, fee_paid: int) -> Receipt:
        return Receipt(
            txid=stx.txid,
            block_height=block_height,
            tx_index=tx_index,
            status=STATUS_REJECTED,
            reason_code=code,
            gas_used=gas_used,
            fee_paid=fee_paid,
            confirmation_seconds=confirmation_seconds,
            events=(),
        )

    acct = state.accounts.get(sender)
    expected_nonce = acct.nonce if acct is not None else 0
    if stx.body.nonce != expected_nonce:
        return rejected(NONCE_MISMATCH, 0, 0)

    # Metered before execution: the new-account surcharge looks at pre-state.
    gas = charge_gas(schedule, payload, state)
    fee = gas * schedule.gas_price
    if acct is None or acct.balance < fee:
        return rejected(INSUFFICIENT_FUNDS, 0, 0)

    acct.balance -= fee
    state.gas_burned_total += fee
    acct.nonce += 1

    try:
        drafts = dispatch(state, sender, payload, block_height)
    except ExecRejection as e:
        return rejected(e.code, gas, fee)

    events = []
    for kind, attributes in drafts:
        events.append(
            Event(
                kind=kind,
                sequence=state.event_sequence,
                block_height=block_height,
                attributes=tuple(attributes),
            )
        )
        state.event_sequence += 1
    return Receipt(
        txid=stx.txid,
        block_height=block_height,
        tx_index=tx_index,
        status=STATUS_APPLIED,
        reason_code="",
        gas_used=gas,
        fee_paid=fee,
        confirmation_seconds=confirmation_seconds,
        events=tuple(events),
    )


def apply_faucet_grant(state: LedgerState, address: bytes, amount: int) -> None:
    state.touch(address).balance += amount
    state.faucet_issued += amount

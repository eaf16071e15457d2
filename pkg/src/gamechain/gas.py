"""Gas metering.

Costs are flat per operation kind except for the two asset paths:
asset creation scales with the UTF-8 length of name plus category, and
asset transfer pays a surcharge when the recipient has never appeared in
state. Fees are charged at a fixed price per gas unit and burned.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import tx
from .state import LedgerState


@dataclass(frozen=True)
class GasSchedule:
    create_asset_base: int = 50_000
    create_asset_per_byte: int = 100
    transfer_asset_base: int = 42_000
    new_account_surcharge: int = 8_000
    native_transfer_base: int = 21_000
    token_op_base: int = 25_000
    pool_op_base: int = 45_000
    swap_base: int = 35_000
    stake_base: int = 30_000
    report_base: int = 15_000
    gas_price: int = 1


DEFAULT_SCHEDULE = GasSchedule()


def charge_gas(schedule: GasSchedule, payload: tx.Payload, state: LedgerState) -> int:
    if isinstance(payload, tx.CreateAsset):
        metered = len(payload.name.encode()) + len(payload.category.encode())
        return schedule.create_asset_base + schedule.create_asset_per_byte * metered
    if isinstance(payload, tx.TransferAsset):
        gas = schedule.transfer_asset_base
        if payload.to not in state.accounts:
            gas += schedule.new_account_surcharge
        return gas
    if isinstance(payload, tx.NativeTransfer):
        return schedule.native_transfer_base
    if isinstance(payload, (tx.CreateToken, tx.TokenTransfer)):
        return schedule.token_op_base
    if isinstance(
        payload, (tx.CreatePool, tx.AddLiquidity, tx.RemoveLiquidity)
    ):
        return schedule.pool_op_base
    if isinstance(payload, tx.SwapExactIn):
        return schedule.swap_base
    if isinstance(payload, (tx.Stake, tx.Unstake)):
        return schedule.stake_base
    if isinstance(payload, tx.SubmitReport):
        return schedule.report_base
    raise TypeError(f"unmetered payload type: {type(payload).__name__}")

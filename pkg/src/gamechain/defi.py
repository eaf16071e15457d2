"""Constant-product pools and block-linear staking.

All pool math is exact integer arithmetic. The swap formula keeps the
product of reserves non-decreasing for any fee, and every rounding choice
(floor on outputs, ceiling on deposits) errs in the pool's favor so the
token conservation identity can hold exactly.
"""

from __future__ import annotations

import math

from . import tx
from .errors import (
    INSUFFICIENT_FUNDS,
    INVALID_INPUT,
    NOT_FOUND,
    SLIPPAGE,
    ExecRejection,
)
from .state import LedgerState, Pool, StakePosition

Draft = tuple[str, tuple]

BPS_SCALE = 10_000
REWARD_NUM = 1
REWARD_DEN = 100_000


def swap_output(reserve_in: int, reserve_out: int, amount_in: int, fee_bps: int) -> int:
    """Largest integer out with out*(ri*S + ai*(S-f)) <= ro*ai*(S-f)."""
    effective = amount_in * (BPS_SCALE - fee_bps)
    return reserve_out * effective // (reserve_in * BPS_SCALE + effective)


def slippage_bps(reserve_in: int, reserve_out: int, amount_in: int, out: int) -> int:
    """Shortfall of the executed price against the pre-trade spot price,
    floored to basis points. The spot benchmark ignores the fee, so the fee
    itself shows up as slippage."""
    ideal = amount_in * reserve_out
    return BPS_SCALE * (ideal - out * reserve_in) // ideal


def quote(pool: Pool, direction: int, amount_in: int) -> tuple[int, int]:
    """(amount_out, slippage_bps) for a hypothetical swap; no state change."""
    if direction == tx.DIRECTION_AB:
        ri, ro = pool.reserve_a, pool.reserve_b
    else:
        ri, ro = pool.reserve_b, pool.reserve_a
    out = swap_output(ri, ro, amount_in, pool.fee_bps)
    return out, slippage_bps(ri, ro, amount_in, out)


def _debit_token(state: LedgerState, symbol: str, addr: bytes, amount: int) -> None:
    balances = state.tokens[symbol].balances
    balances[addr] -= amount
    if balances[addr] == 0:
        del balances[addr]


def _credit_token(state: LedgerState, symbol: str, addr: bytes, amount: int) -> None:
    if amount == 0:
        return
    balances = state.tokens[symbol].balances
    balances[addr] = balances.get(addr, 0) + amount


def _token_balance(state: LedgerState, symbol: str, addr: bytes) -> int:
    return state.tokens[symbol].balances.get(addr, 0)


def exec_create_pool(
    state: LedgerState, sender: bytes, p: tx.CreatePool
) -> list[Draft]:
    if p.token_a.encode() >= p.token_b.encode():
        raise ExecRejection(INVALID_INPUT, "pool tokens must be distinct and ordered")
    for symbol in (p.token_a, p.token_b):
        if symbol not in state.tokens:
            raise ExecRejection(NOT_FOUND, f"token {symbol} does not exist")
    if p.fee_bps >= BPS_SCALE:
        raise ExecRejection(INVALID_INPUT, "fee must be below 10000 bps")
    if p.amount_a == 0 or p.amount_b == 0:
        raise ExecRejection(INVALID_INPUT, "initial deposits must be positive")
    if _token_balance(state, p.token_a, sender) < p.amount_a:
        raise ExecRejection(INSUFFICIENT_FUNDS, f"{p.token_a} balance too low")
    if _token_balance(state, p.token_b, sender) < p.amount_b:
        raise ExecRejection(INSUFFICIENT_FUNDS, f"{p.token_b} balance too low")
    lp = math.isqrt(p.amount_a * p.amount_b)
    if lp == 0:
        raise ExecRejection(INVALID_INPUT, "initial deposit too small")
    pool_id = state.next_pool_id
    state.next_pool_id += 1
    _debit_token(state, p.token_a, sender, p.amount_a)
    _debit_token(state, p.token_b, sender, p.amount_b)
    state.pools[pool_id] = Pool(
        pool_id=pool_id,
        token_a=p.token_a,
        token_b=p.token_b,
        reserve_a=p.amount_a,
        reserve_b=p.amount_b,
        fee_bps=p.fee_bps,
        lp_supply=lp,
        lp_balances={sender: lp},
    )
    return [
        (
            "LiquidityChanged",
            (
                ("pool_id", pool_id),
                ("provider", sender.hex()),
                ("lp_delta", lp),
                ("direction", "add"),
                ("amount_a", p.amount_a),
                ("amount_b", p.amount_b),
            ),
        )
    ]


def exec_add_liquidity(
    state: LedgerState, sender: bytes, p: tx.AddLiquidity
) -> list[Draft]:
    pool = state.pools.get(p.pool_id)
    if pool is None:
        raise ExecRejection(NOT_FOUND, f"pool {p.pool_id} does not exist")
    if p.amount_a == 0 or p.amount_b == 0:
        raise ExecRejection(INVALID_INPUT, "deposits must be positive")
    lp = min(
        p.amount_a * pool.lp_supply // pool.reserve_a,
        p.amount_b * pool.lp_supply // pool.reserve_b,
    )
    if lp == 0:
        raise ExecRejection(INVALID_INPUT, "deposit too small for one lp unit")
    # Charge only what lp units are actually worth, rounded up so the pool
    # never pays for the rounding. Both needs are <= the offered amounts.
    need_a = -(-lp * pool.reserve_a // pool.lp_supply)
    need_b = -(-lp * pool.reserve_b // pool.lp_supply)
    if _token_balance(state, pool.token_a, sender) < need_a:
        raise ExecRejection(INSUFFICIENT_FUNDS, f"{pool.token_a} balance too low")
    if _token_balance(state, pool.token_b, sender) < need_b:
        raise ExecRejection(INSUFFICIENT_FUNDS, f"{pool.token_b} balance too low")
    _debit_token(state, pool.token_a, sender, need_a)
    _debit_token(state, pool.token_b, sender, need_b)
    pool.reserve_a += need_a
    pool.reserve_b += need_b
    pool.lp_supply += lp
    pool.lp_balances[sender] = pool.lp_balances.get(sender, 0) + lp
    return [
        (
            "LiquidityChanged",
            (
                ("pool_id", pool.pool_id),
                ("provider", sender.hex()),
                ("lp_delta", lp),
                ("direction", "add"),
                ("amount_a", need_a),
                ("amount_b", need_b),
            ),
        )
    ]


def exec_remove_liquidity(
    state: LedgerState, sender: bytes, p: tx.RemoveLiquidity
) -> list[Draft]:
    pool = state.pools.get(p.pool_id)
    if pool is None:
        raise ExecRejection(NOT_FOUND, f"pool {p.pool_id} does not exist")
    if p.lp_amount == 0:
        raise ExecRejection(INVALID_INPUT, "lp amount must be positive")
    held = pool.lp_balances.get(sender, 0)
    if held < p.lp_amount:
        raise ExecRejection(INSUFFICIENT_FUNDS, "lp balance too low")
    out_a = p.lp_amount * pool.reserve_a // pool.lp_supply
    out_b = p.lp_amount * pool.reserve_b // pool.lp_supply
    pool.lp_balances[sender] = held - p.lp_amount
    if pool.lp_balances[sender] == 0:
        del pool.lp_balances[sender]
    pool.reserve_a -= out_a
    pool.reserve_b -= out_b
    pool.lp_supply -= p.lp_amount
    _credit_token(state, pool.token_a, sender, out_a)
    _credit_token(state, pool.token_b, sender, out_b)
    drafts: list[Draft] = [
        (
            "LiquidityChanged",
            (
                ("pool_id", pool.pool_id),
                ("provider", sender.hex()),
                ("lp_delta", p.lp_amount),
                ("direction", "remove"),
                ("amount_a", out_a),
                ("amount_b", out_b),
            ),
        )
    ]
    if pool.lp_supply == 0:
        # The last holder drains the reserves exactly; nothing is stranded.
        del state.pools[pool.pool_id]
    return drafts


def exec_swap(state: LedgerState, sender: bytes, p: tx.SwapExactIn) -> list[Draft]:
    pool = state.pools.get(p.pool_id)
    if pool is None:
        raise ExecRejection(NOT_FOUND, f"pool {p.pool_id} does not exist")
    if p.direction not in (tx.DIRECTION_AB, tx.DIRECTION_BA):
        raise ExecRejection(INVALID_INPUT, "direction must be 0 (a->b) or 1 (b->a)")
    if p.amount_in == 0:
        raise ExecRejection(INVALID_INPUT, "swap input must be positive")
    if p.direction == tx.DIRECTION_AB:
        sym_in, sym_out = pool.token_a, pool.token_b
        ri, ro = pool.reserve_a, pool.reserve_b
    else:
        sym_in, sym_out = pool.token_b, pool.token_a
        ri, ro = pool.reserve_b, pool.reserve_a
    if _token_balance(state, sym_in, sender) < p.amount_in:
        raise ExecRejection(INSUFFICIENT_FUNDS, f"{sym_in} balance too low")
    out = swap_output(ri, ro, p.amount_in, pool.fee_bps)
    if out == 0 or out < p.min_out:
        raise ExecRejection(SLIPPAGE, f"output {out} below minimum {p.min_out}")
    slip = slippage_bps(ri, ro, p.amount_in, out)
    _debit_token(state, sym_in, sender, p.amount_in)
    _credit_token(state, sym_out, sender, out)
    if p.direction == tx.DIRECTION_AB:
        pool.reserve_a += p.amount_in
        pool.reserve_b -= out
    else:
        pool.reserve_b += p.amount_in
        pool.reserve_a -= out
    return [
        (
            "PoolSwapped",
            (
                ("pool_id", pool.pool_id),
                ("trader", sender.hex()),
                ("token_in", sym_in),
                ("token_out", sym_out),
                ("amount_in", p.amount_in),
                ("amount_out", out),
                ("slippage_bps", slip),
            ),
        )
    ]


def stake_reward(amount: int, blocks: int) -> int:
    return amount * blocks * REWARD_NUM // REWARD_DEN


def exec_stake(
    state: LedgerState, sender: bytes, p: tx.Stake, block_height: int
) -> list[Draft]:
    if p.amount == 0:
        raise ExecRejection(INVALID_INPUT, "stake amount must be positive")
    if sender in state.stakes:
        raise ExecRejection(INVALID_INPUT, "an active stake position exists")
    acct = state.accounts[sender]
    if acct.balance < p.amount:
        raise ExecRejection(INSUFFICIENT_FUNDS, "balance below stake amount")
    acct.balance -= p.amount
    state.stakes[sender] = StakePosition(amount=p.amount, start_block=block_height)
    return [
        (
            "Staked",
            (
                ("staker", sender.hex()),
                ("amount", p.amount),
                ("start_block", block_height),
            ),
        )
    ]


def exec_unstake(
    state: LedgerState, sender: bytes, p: tx.Unstake, block_height: int
) -> list[Draft]:
    position = state.stakes.get(sender)
    if position is None:
        raise ExecRejection(NOT_FOUND, "no active stake position")
    blocks = block_height - position.start_block
    reward = stake_reward(position.amount, blocks)
    del state.stakes[sender]
    state.accounts[sender].balance += position.amount + reward
    state.reward_issued += reward
    return [
        (
            "Unstaked",
            (
                ("staker", sender.hex()),
                ("amount", position.amount),
                ("reward", reward),
                ("blocks", blocks),
            ),
        )
    ]

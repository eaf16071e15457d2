#!/usr/bin/env python3
"""Constant-product pool walkthrough: quotes, swaps, fees, and LP shares.

All pool math is integer-exact. The printed reserve product never shrinks,
and the 30 bps fee shows up as the gap between the quoted price and the
pre-trade spot price.
"""

from gamechain import tx
from gamechain.defi import quote
from gamechain.engine import Chain
from gamechain.genesis import GenesisConfig
from gamechain.keys import keygen


def signed(kp, nonce, payload):
    body = tx.UnsignedTransaction(sender=kp.address, nonce=nonce, payload=payload)
    return tx.sign_transaction(body, kp.secret)


lp = keygen(bytes([3] * 32))
trader = keygen(bytes([4] * 32))
chain = Chain(
    GenesisConfig(
        chain_seed=11,
        block_interval=(15, 45),
        allocations=((lp.address, 10**9), (trader.address, 10**9)),
        feeds=(),
    )
)

nonce = 0
for payload in (
    tx.CreateToken(symbol="GEM", supply=2_000_000),
    tx.CreateToken(symbol="GOLD", supply=2_000_000),
    tx.CreatePool(token_a="GEM", token_b="GOLD", fee_bps=30, amount_a=1_000_000, amount_b=1_000_000),
    tx.TokenTransfer(symbol="GEM", to=trader.address, amount=500_000),
):
    chain.submit(signed(lp, nonce, payload))
    nonce += 1
chain.produce_block()

pool = chain.state.pools[1]
print(f"pool 1: {pool.reserve_a} GEM / {pool.reserve_b} GOLD, "
      f"fee {pool.fee_bps} bps, lp supply {pool.lp_supply}")

# Quote first, then execute the same trade: the numbers must agree.
out, slip = quote(pool, tx.DIRECTION_AB, 10_000)
print(f"quote: 10000 GEM -> {out} GOLD, slippage {slip} bps")

swap = signed(trader, 0, tx.SwapExactIn(pool_id=1, direction=tx.DIRECTION_AB,
                                        amount_in=10_000, min_out=out))
chain.submit(swap)
chain.produce_block()
receipt = chain.get_receipt(swap.txid)
print(f"swap: {receipt.status}, events {[dict(e.attributes) for e in receipt.events]}")

k_before = 1_000_000 * 1_000_000
pool = chain.state.pools[1]
k_after = pool.reserve_a * pool.reserve_b
print(f"k before {k_before}, after {k_after}, grew by {k_after - k_before}")

# Demanding more than the quote allows trips the slippage guard. The trade
# is rejected and the reserves stay put.
greedy = signed(trader, 1, tx.SwapExactIn(pool_id=1, direction=tx.DIRECTION_AB,
                                          amount_in=10_000, min_out=10_000))
chain.submit(greedy)
chain.produce_block()
receipt = chain.get_receipt(greedy.txid)
print(f"greedy swap: {receipt.status} ({receipt.reason_code})")

# Join and leave the pool. Deposits round in the pool's favor, withdrawals
# floor, so a round trip can only lose dust, never mint value.
join = signed(lp, nonce, tx.AddLiquidity(pool_id=1, amount_a=100_000, amount_b=100_000))
chain.submit(join)
chain.produce_block()
nonce += 1
pool = chain.state.pools[1]
print(f"add liquidity: lp supply {pool.lp_supply}, reserves "
      f"{pool.reserve_a}/{pool.reserve_b}")

leave = signed(lp, nonce, tx.RemoveLiquidity(pool_id=1, lp_amount=50_000))
chain.submit(leave)
chain.produce_block()
pool = chain.state.pools[1]
print(f"remove 50000 LP: reserves {pool.reserve_a}/{pool.reserve_b}, "
      f"lp supply {pool.lp_supply}")

total_gem = sum(chain.state.tokens["GEM"].balances.values()) + pool.reserve_a
print(f"GEM conservation: {total_gem} == {chain.state.tokens['GEM'].total_supply}")

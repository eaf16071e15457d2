#!/usr/bin/env python3
"""Mint game assets, trade them, and watch the engine say no.

Runs a tiny two-player chain in process: Ava mints a sword and gifts it,
Ben tries to steal one back, and every receipt is printed as the chain
sees it.
"""

from gamechain import tx
from gamechain.engine import Chain
from gamechain.genesis import GenesisConfig
from gamechain.keys import keygen


def signed(kp, nonce, payload):
    body = tx.UnsignedTransaction(sender=kp.address, nonce=nonce, payload=payload)
    return tx.sign_transaction(body, kp.secret)


def show(label, receipt):
    print(f"{label}: {receipt.status}", end="")
    if receipt.applied:
        print(f", gas {receipt.gas_used}, confirmed in {receipt.confirmation_seconds}s")
        for event in receipt.events:
            print(f"    event #{event.sequence} {event.kind} {dict(event.attributes)}")
    else:
        print(f" ({receipt.reason_code}), gas {receipt.gas_used}")


ava = keygen(bytes([1] * 32))
ben = keygen(bytes([2] * 32))

chain = Chain(
    GenesisConfig(
        chain_seed=7,
        block_interval=(15, 45),
        allocations=((ava.address, 10_000_000), (ben.address, 10_000_000)),
        feeds=(),
    )
)
print(f"genesis root {chain.head.state_root.hex()[:16]}…")

# Ava mints two items. Gas scales with the name + category byte length.
mint1 = signed(ava, 0, tx.CreateAsset(name="Runed Blade", category="weapon", rarity=3))
mint2 = signed(ava, 1, tx.CreateAsset(name="Oak Ward", category="trinket", rarity=0))
chain.submit(mint1)
chain.submit(mint2)
chain.produce_block()
show("mint Runed Blade", chain.get_receipt(mint1.txid))
show("mint Oak Ward", chain.get_receipt(mint2.txid))

# Gift the blade to Ben. Asset 1 changes owner; the owner index follows.
gift = signed(ava, 2, tx.TransferAsset(asset_id=1, to=ben.address))
chain.submit(gift)
chain.produce_block()
show("gift asset 1", chain.get_receipt(gift.txid))
print("Ava now owns:", [a.asset_id for a in chain.assets_by_owner(ava.address)])
print("Ben now owns:", [a.asset_id for a in chain.assets_by_owner(ben.address)])

# Ben gets greedy and tries to move Ava's remaining trinket. The executor
# rejects it, but the attempt still burns its metered gas.
steal = signed(ben, 0, tx.TransferAsset(asset_id=2, to=ben.address))
chain.submit(steal)
chain.produce_block()
show("steal asset 2", chain.get_receipt(steal.txid))
print("asset 2 owner unchanged:", chain.state.assets[2].owner == ava.address)

# A stale nonce is refused for free, before any charge.
stale = signed(ava, 0, tx.CreateAsset(name="Echo", category="trinket", rarity=0))
chain.submit(stale)
chain.produce_block()
show("stale nonce", chain.get_receipt(stale.txid))

print(f"head {chain.height}, root {chain.head.state_root.hex()[:16]}…, "
      f"gas burned {chain.state.gas_burned_total}")

#!/usr/bin/env python3
"""Staking rewards and quorum-median price feeds.

Three reporters feed one price; the feed publishes the median as soon as
the third report lands, and an outlier cannot drag the published value.
Meanwhile a staker locks native units and collects the block-linear reward.
"""

from gamechain import tx
from gamechain.engine import Chain
from gamechain.genesis import FeedSpec, GenesisConfig
from gamechain.keys import keygen


def signed(kp, nonce, payload):
    body = tx.UnsignedTransaction(sender=kp.address, nonce=nonce, payload=payload)
    return tx.sign_transaction(body, kp.secret)


staker = keygen(bytes([5] * 32))
reporters = [keygen(bytes([10 + i] * 32)) for i in range(3)]

chain = Chain(
    GenesisConfig(
        chain_seed=13,
        block_interval=(15, 45),
        allocations=tuple(
            (kp.address, 100_000_000) for kp in [staker] + reporters
        ),
        feeds=(
            FeedSpec(
                feed_id="GEM-USD",
                reporters=tuple(kp.address for kp in reporters),
                quorum=3,
            ),
        ),
    )
)

# Lock half the balance. The reward accrues per block held.
stake = signed(staker, 0, tx.Stake(amount=50_000_000))
chain.submit(stake)
chain.produce_block()
position = chain.state.stakes[staker.address]
print(f"staked {position.amount} at block {position.start_block}")

# Two reports are not enough for quorum 3; the feed stays unpublished.
chain.submit(signed(reporters[0], 0, tx.SubmitReport(feed_id="GEM-USD", value=1_000_000)))
chain.submit(signed(reporters[1], 0, tx.SubmitReport(feed_id="GEM-USD", value=1_020_000)))
chain.produce_block()
feed = chain.state.feeds["GEM-USD"]
print(f"after 2 reports: value {feed.last_value}, round {feed.round}, "
      f"pending {len(feed.pending)}")

# The third report completes the round. One reporter lies wildly; the
# median ignores the lie.
chain.submit(signed(reporters[2], 0, tx.SubmitReport(feed_id="GEM-USD", value=90_000_000)))
chain.produce_block()
feed = chain.state.feeds["GEM-USD"]
print(f"after quorum: value {feed.last_value}, round {feed.round}")

# Next round: a reporter can overwrite its own pending report before the
# round closes. Only the last submission counts.
chain.submit(signed(reporters[0], 1, tx.SubmitReport(feed_id="GEM-USD", value=1)))
chain.submit(signed(reporters[0], 2, tx.SubmitReport(feed_id="GEM-USD", value=1_010_000)))
chain.submit(signed(reporters[1], 1, tx.SubmitReport(feed_id="GEM-USD", value=1_005_000)))
chain.submit(signed(reporters[2], 1, tx.SubmitReport(feed_id="GEM-USD", value=1_002_000)))
chain.produce_block()
feed = chain.state.feeds["GEM-USD"]
print(f"round 2: value {feed.last_value} (overwrite honored)")

# Let a few empty blocks pass so the stake ages, then withdraw.
for _ in range(6):
    chain.produce_block()

unstake = signed(staker, 1, tx.Unstake())
chain.submit(unstake)
chain.produce_block()
receipt = chain.get_receipt(unstake.txid)
attrs = dict(receipt.events[0].attributes)
print(f"unstaked after {attrs['blocks']} blocks: reward {attrs['reward']}")
print(f"balance {chain.state.accounts[staker.address].balance}, "
      f"reward issuance {chain.state.reward_issued}")

"""Scripted agent behaviors.

Each agent owns a SplitMix64 substream (scenario seed XOR its index) and
decides from its own draws plus the between-blocks observations, never from
wall clock or iteration order, so a run is a pure function of the scenario
file. Policies return payloads; the runner signs and submits them.
"""

from __future__ import annotations

import math

from .. import tx
from ..prng import SplitMix64
from .ports import AgentView, WorldView

ADJECTIVES = (
    "Ancient", "Blazing", "Cursed", "Dire", "Emerald", "Frozen", "Gilded",
    "Haunted", "Iron", "Jade", "Keen", "Lunar", "Mystic", "Noble", "Obsidian",
    "Phantom", "Quick", "Runed", "Storm", "Twilight",
)

NOUNS = (
    "Blade", "Charm", "Crown", "Drum", "Fang", "Gauntlet", "Helm", "Idol",
    "Lantern", "Mask", "Orb", "Pike", "Quiver", "Ring", "Shield", "Sigil",
    "Staff", "Talisman", "Visor", "Ward",
)

CATEGORIES = ("weapon", "armor", "trinket", "consumable", "mount")

# Gap below which an arbitrageur leaves a pool alone, in basis points.
ARB_THRESHOLD_BPS = 100

STAKE_ROUNDS = 10
MIN_STAKE_BALANCE = 1_000_000


class Agent:
    def __init__(self, index: int, rng: SplitMix64, address_book: list[bytes]):
        self.index = index
        self.rng = rng
        self.address_book = address_book

    def act(self, me: AgentView, world: WorldView) -> list[tx.Payload]:
        raise NotImplementedError

    def other_address(self, own: bytes) -> bytes:
        candidates = [a for a in self.address_book if a != own]
        return self.rng.choice(candidates)


class Minter(Agent):
    """Creates assets most rounds; occasionally gifts one away instead."""

    def __init__(self, index, rng, address_book, address: bytes):
        super().__init__(index, rng, address_book)
        self.address = address

    def act(self, me: AgentView, world: WorldView) -> list[tx.Payload]:
        roll = self.rng.below(100)
        if roll < 60 or not me.asset_ids:
            name = f"{self.rng.choice(ADJECTIVES)} {self.rng.choice(NOUNS)}"
            category = self.rng.choice(CATEGORIES)
            rarity_roll = self.rng.below(100)
            if rarity_roll < 50:
                rarity = 0
            elif rarity_roll < 75:
                rarity = 1
            elif rarity_roll < 90:
                rarity = 2
            elif rarity_roll < 97:
                rarity = 3
            else:
                rarity = 4
            return [tx.CreateAsset(name=name, category=category, rarity=rarity)]
        if roll < 85:
            asset_id = self.rng.choice(me.asset_ids)
            return [tx.TransferAsset(asset_id=asset_id, to=self.other_address(self.address))]
        return []


class RandomTrader(Agent):
    """Swaps a random fraction of a random balance; one probe in ten asks an
    impossible min_out on purpose to exercise the slippage rejection path."""

    def act(self, me: AgentView, world: WorldView) -> list[tx.Payload]:
        if not world.pools:
            return []
        pool = world.pools[self.rng.choice(sorted(world.pools))]
        direction = self.rng.choice((tx.DIRECTION_AB, tx.DIRECTION_BA))
        sym_in = pool.token_a if direction == tx.DIRECTION_AB else pool.token_b
        held = me.tokens.get(sym_in, 0)
        if held == 0:
            return []
        amount_in = self.rng.between(1, max(1, held // 20))
        min_out = 0
        if self.rng.chance(1, 10):
            reserve_out = (
                pool.reserve_b if direction == tx.DIRECTION_AB else pool.reserve_a
            )
            min_out = reserve_out + 1  # more than the pool even holds
        return [
            tx.SwapExactIn(
                pool_id=pool.pool_id,
                direction=direction,
                amount_in=amount_in,
                min_out=min_out,
            )
        ]


class Arbitrageur(Agent):
    """Pushes pool price halfway toward the oracle value when they disagree
    by more than the threshold. Sizes from the constant product: moving the
    a-in-b price to p requires reserve_a' = sqrt(k / p)."""

    def __init__(self, index, rng, address_book, feed_of_pool: dict):
        super().__init__(index, rng, address_book)
        self.feed_of_pool = feed_of_pool

    def act(self, me: AgentView, world: WorldView) -> list[tx.Payload]:
        for pool_id in sorted(world.pools):
            pool = world.pools[pool_id]
            feed_id = self.feed_of_pool.get(pool_id)
            if feed_id is None:
                continue
            value = world.feeds.get(feed_id)
            if not value:
                continue
            spot_ppm = pool.reserve_b * 1_000_000 // pool.reserve_a
            if spot_ppm == 0:
                continue
            gap_bps = abs(spot_ppm - value) * 10_000 // value
            if gap_bps <= ARB_THRESHOLD_BPS:
                continue
            target_ppm = (spot_ppm + value) // 2
            if target_ppm == 0:
                continue
            k = pool.reserve_a * pool.reserve_b
            if spot_ppm > target_ppm:
                # a is overpriced: sell a to grow reserve_a.
                ideal_a = math.isqrt(k * 1_000_000 // target_ppm)
                amount = min(ideal_a - pool.reserve_a, me.tokens.get(pool.token_a, 0))
                if amount > 0:
                    return [
                        tx.SwapExactIn(
                            pool_id=pool_id,
                            direction=tx.DIRECTION_AB,
                            amount_in=amount,
                            min_out=0,
                        )
                    ]
            else:
                ideal_b = math.isqrt(k * target_ppm // 1_000_000)
                amount = min(ideal_b - pool.reserve_b, me.tokens.get(pool.token_b, 0))
                if amount > 0:
                    return [
                        tx.SwapExactIn(
                            pool_id=pool_id,
                            direction=tx.DIRECTION_BA,
                            amount_in=amount,
                            min_out=0,
                        )
                    ]
        return []


class Staker(Agent):
    """Locks a quarter of the balance, waits STAKE_ROUNDS blocks, unstakes,
    repeats. Start blocks come from the observed position, not local memory,
    so the policy survives any restart."""

    def act(self, me: AgentView, world: WorldView) -> list[tx.Payload]:
        if me.stake is None:
            if me.balance < MIN_STAKE_BALANCE:
                return []
            return [tx.Stake(amount=me.balance // 4)]
        _, start_block = me.stake
        if world.height - start_block >= STAKE_ROUNDS:
            return [tx.Unstake()]
        return []


class Reporter:
    """Submits one feed report per round: the scheduler's walked center
    price plus this reporter's own jitter."""

    def __init__(self, rng: SplitMix64, jitter_bps: int):
        self.rng = rng
        self.jitter_bps = jitter_bps

    def report(self, feed_id: str, center: int) -> tx.SubmitReport:
        jitter = self.rng.between(-self.jitter_bps, self.jitter_bps)
        value = max(1, center + center * jitter // 10_000)
        return tx.SubmitReport(feed_id=feed_id, value=value)


class PriceWalk:
    """Scheduler-owned center price path shared by all reporters of a feed."""

    def __init__(self, rng: SplitMix64, base_value: int, step_bps: int = 150):
        self.rng = rng
        self.value = base_value
        self.step_bps = step_bps

    def advance(self) -> int:
        step = self.rng.between(-self.step_bps, self.step_bps)
        self.value = max(1, self.value + self.value * step // 10_000)
        return self.value

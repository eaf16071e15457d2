"""Quorum-median price feeds.

Reporters submit one value per round (resubmitting overwrites). Once
distinct reporters reach the quorum, the round aggregates to the lower of
the two middle values (exact median for odd counts), the round counter
advances, and pending reports clear.
"""

from __future__ import annotations

from . import tx
from .errors import NOT_AUTHORIZED, NOT_FOUND, ExecRejection
from .state import LedgerState

Draft = tuple[str, tuple]


def median_low(values: list[int]) -> int:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def exec_submit_report(
    state: LedgerState, sender: bytes, p: tx.SubmitReport, block_height: int
) -> list[Draft]:
    feed = state.feeds.get(p.feed_id)
    if feed is None:
        raise ExecRejection(NOT_FOUND, f"feed {p.feed_id} does not exist")
    if sender not in feed.reporters:
        raise ExecRejection(NOT_AUTHORIZED, "sender is not a reporter for this feed")
    feed.pending[sender] = p.value
    if len(feed.pending) < feed.quorum:
        return []
    value = median_low(list(feed.pending.values()))
    completed_round = feed.round
    feed.last_value = value
    feed.last_updated_block = block_height
    feed.round += 1
    feed.pending.clear()
    return [
        (
            "OraclePriceUpdated",
            (
                ("feed_id", p.feed_id),
                ("round", completed_round),
                ("value", value),
            ),
        )
    ]

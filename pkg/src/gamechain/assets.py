"""Executors for native transfers, game assets, and fungible tokens.

Every executor validates fully before mutating anything, so a rejection
leaves state untouched apart from the fee and nonce handled by the caller.
Executors return event drafts as (kind, attributes) pairs; the transaction
applier seals them with the global sequence and block height.
"""

from __future__ import annotations

import re

from . import tx
from .errors import (
    INSUFFICIENT_FUNDS,
    INVALID_INPUT,
    NO_SUCH_ASSET,
    NOT_FOUND,
    NOT_OWNER,
    ExecRejection,
)
from .events import Attributes
from .state import (
    CATEGORY_MAX_BYTES,
    NAME_MAX_BYTES,
    RARITIES,
    SYMBOL_MAX_BYTES,
    Asset,
    LedgerState,
    Token,
)

Draft = tuple[str, Attributes]

_SYMBOL_RE = re.compile(r"^[A-Z][A-Z0-9]*$")


def exec_native_transfer(
    state: LedgerState, sender: bytes, p: tx.NativeTransfer
) -> list[Draft]:
    if p.amount == 0:
        raise ExecRejection(INVALID_INPUT, "transfer amount must be positive")
    acct = state.accounts[sender]
    if acct.balance < p.amount:
        raise ExecRejection(INSUFFICIENT_FUNDS, "balance below transfer amount")
    acct.balance -= p.amount
    state.touch(p.to).balance += p.amount
    return [
        (
            "NativeTransferred",
            (("from", sender.hex()), ("to", p.to.hex()), ("amount", p.amount)),
        )
    ]


def exec_create_asset(
    state: LedgerState, sender: bytes, p: tx.CreateAsset, block_height: int
) -> list[Draft]:
    name_bytes = p.name.encode()
    category_bytes = p.category.encode()
    if not 1 <= len(name_bytes) <= NAME_MAX_BYTES:
        raise ExecRejection(INVALID_INPUT, "asset name length out of range")
    if not 1 <= len(category_bytes) <= CATEGORY_MAX_BYTES:
        raise ExecRejection(INVALID_INPUT, "asset category length out of range")
    if p.rarity >= len(RARITIES):
        raise ExecRejection(INVALID_INPUT, "unknown rarity")
    asset_id = state.next_asset_id
    state.next_asset_id += 1
    asset = Asset(
        asset_id=asset_id,
        name=p.name,
        category=p.category,
        rarity=p.rarity,
        owner=sender,
        created_at_block=block_height,
    )
    state.assets[asset_id] = asset
    state.owner_index.setdefault(sender, set()).add(asset_id)
    return [
        (
            "AssetCreated",
            (
                ("asset_id", asset_id),
                ("owner", sender.hex()),
                ("name", p.name),
                ("category", p.category),
                ("rarity", asset.rarity_name),
            ),
        )
    ]


def exec_transfer_asset(
    state: LedgerState, sender: bytes, p: tx.TransferAsset
) -> list[Draft]:
    asset = state.assets.get(p.asset_id)
    if asset is None:
        raise ExecRejection(NO_SUCH_ASSET, f"asset {p.asset_id} does not exist")
    if asset.owner != sender:
        raise ExecRejection(NOT_OWNER, "sender does not own this asset")
    state.owner_index[sender].discard(p.asset_id)
    if not state.owner_index[sender]:
        del state.owner_index[sender]
    asset.owner = p.to
    state.owner_index.setdefault(p.to, set()).add(p.asset_id)
    state.touch(p.to)
    return [
        (
            "AssetTransferred",
            (
                ("asset_id", p.asset_id),
                ("from", sender.hex()),
                ("to", p.to.hex()),
            ),
        )
    ]


def exec_create_token(
    state: LedgerState, sender: bytes, p: tx.CreateToken
) -> list[Draft]:
    symbol_bytes = p.symbol.encode()
    if not 1 <= len(symbol_bytes) <= SYMBOL_MAX_BYTES or not _SYMBOL_RE.match(p.symbol):
        raise ExecRejection(INVALID_INPUT, "token symbol malformed")
    if p.symbol in state.tokens:
        raise ExecRejection(INVALID_INPUT, f"token {p.symbol} already exists")
    if p.supply == 0:
        raise ExecRejection(INVALID_INPUT, "token supply must be positive")
    state.tokens[p.symbol] = Token(
        symbol=p.symbol, total_supply=p.supply, balances={sender: p.supply}
    )
    return [
        (
            "TokenTransferred",
            (
                ("symbol", p.symbol),
                ("from", "mint"),
                ("to", sender.hex()),
                ("amount", p.supply),
            ),
        )
    ]


def exec_token_transfer(
    state: LedgerState, sender: bytes, p: tx.TokenTransfer
) -> list[Draft]:
    token = state.tokens.get(p.symbol)
    if token is None:
        raise ExecRejection(NOT_FOUND, f"token {p.symbol} does not exist")
    if p.amount == 0:
        raise ExecRejection(INVALID_INPUT, "transfer amount must be positive")
    if token.balances.get(sender, 0) < p.amount:
        raise ExecRejection(INSUFFICIENT_FUNDS, "token balance below transfer amount")
    token.balances[sender] -= p.amount
    if token.balances[sender] == 0:
        del token.balances[sender]
    token.balances[p.to] = token.balances.get(p.to, 0) + p.amount
    state.touch(p.to)
    return [
        (
            "TokenTransferred",
            (
                ("symbol", p.symbol),
                ("from", sender.hex()),
                ("to", p.to.hex()),
                ("amount", p.amount),
            ),
        )
    ]

"""Runner-facing adapters over the two ways to reach a chain.

Both ports expose the same observation surface, and observations are only
taken between blocks (the engine is quiescent), so a policy fed by either
port sees identical numbers and emits identical transactions. That is the
whole basis for the in-process vs over-HTTP equivalence check.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from ..blocklog import iter_block_log
from ..engine import BlockRecord, Chain
from ..tx import SignedTransaction


@dataclass(frozen=True)
class AgentView:
    nonce: int
    balance: int
    tokens: dict
    stake: tuple[int, int] | None  # (amount, start_block)
    asset_ids: tuple[int, ...]


@dataclass(frozen=True)
class PoolView:
    pool_id: int
    token_a: str
    token_b: str
    reserve_a: int
    reserve_b: int
    fee_bps: int


@dataclass(frozen=True)
class WorldView:
    height: int
    pools: dict
    feeds: dict  # feed_id -> latest value or None


class InProcessPort:
    def __init__(self, chain: Chain):
        self.chain = chain

    def submit(self, stx: SignedTransaction) -> bytes:
        return self.chain.submit(stx)

    def produce_block(self) -> int:
        return self.chain.produce_block().block.height

    def observe_agent(self, address: bytes) -> AgentView:
        with self.chain.lock:
            state = self.chain.state
            acct = state.accounts.get(address)
            stake = state.stakes.get(address)
            tokens = {
                symbol: token.balances[address]
                for symbol, token in state.tokens.items()
                if address in token.balances
            }
            return AgentView(
                nonce=acct.nonce if acct else 0,
                balance=acct.balance if acct else 0,
                tokens=tokens,
                stake=(stake.amount, stake.start_block) if stake else None,
                asset_ids=tuple(sorted(state.owner_index.get(address, ()))),
            )

    def observe_agents(self, addresses) -> dict:
        return {addr: self.observe_agent(addr) for addr in addresses}

    def observe_world(self, feed_ids=()) -> WorldView:
        with self.chain.lock:
            state = self.chain.state
            pools = {
                pid: PoolView(
                    pool_id=pid,
                    token_a=p.token_a,
                    token_b=p.token_b,
                    reserve_a=p.reserve_a,
                    reserve_b=p.reserve_b,
                    fee_bps=p.fee_bps,
                )
                for pid, p in state.pools.items()
            }
            feeds = {fid: f.last_value for fid, f in state.feeds.items()}
            return WorldView(
                height=self.chain.blocks[-1].block.height, pools=pools, feeds=feeds
            )

    def head_root(self) -> str:
        return self.chain.head.state_root.hex()

    def final_records(self) -> list[BlockRecord]:
        with self.chain.lock:
            return list(self.chain.blocks)

    def close(self) -> None:
        pass


class HttpPort:
    """Drives a remote gateway. Submissions stay sequential (ordering is
    part of the scenario); observations fan out across worker threads, one
    per agent, to put real concurrency on the server."""

    def __init__(self, base_url: str, workers: int = 20):
        self.client = httpx.Client(base_url=base_url, timeout=30.0)
        self.pool = ThreadPoolExecutor(max_workers=workers)

    def _get_json(self, path: str, ok_404: bool = False):
        response = self.client.get(path)
        if response.status_code == 404 and ok_404:
            return None
        response.raise_for_status()
        return response.json()

    def submit(self, stx: SignedTransaction) -> bytes:
        response = self.client.post("/tx", content=stx.encode().hex())
        response.raise_for_status()
        return bytes.fromhex(response.json()["txid"])

    def produce_block(self) -> int:
        response = self.client.post("/control/block", json={"now": True})
        response.raise_for_status()
        return response.json()["block"]["height"]

    def observe_agent(self, address: bytes) -> AgentView:
        hexaddr = address.hex()
        acct = self._get_json(f"/accounts/{hexaddr}", ok_404=True)
        assets = self._get_json(f"/assets?owner={hexaddr}")["assets"]
        if acct is None:
            return AgentView(
                nonce=0, balance=0, tokens={}, stake=None,
                asset_ids=tuple(a["id"] for a in assets),
            )
        stake = acct["stake"]
        return AgentView(
            nonce=acct["nonce"],
            balance=acct["balance"],
            tokens=dict(acct["tokens"]),
            stake=(stake["amount"], stake["start_block"]) if stake else None,
            asset_ids=tuple(a["id"] for a in assets),
        )

    def observe_agents(self, addresses) -> dict:
        futures = {
            addr: self.pool.submit(self.observe_agent, addr) for addr in addresses
        }
        return {addr: fut.result() for addr, fut in futures.items()}

    def observe_world(self, feed_ids=()) -> WorldView:
        head = self._get_json("/head")
        pools = {}
        for p in self._get_json("/pools")["pools"]:
            pools[p["pool_id"]] = PoolView(
                pool_id=p["pool_id"],
                token_a=p["token_a"],
                token_b=p["token_b"],
                reserve_a=p["reserve_a"],
                reserve_b=p["reserve_b"],
                fee_bps=p["fee_bps"],
            )
        feeds = {
            fid: self._get_json(f"/feeds/{fid}")["value"] for fid in feed_ids
        }
        return WorldView(height=head["height"], pools=pools, feeds=feeds)

    def head_root(self) -> str:
        return self._get_json("/head")["state_root"]

    def final_records(self) -> list[BlockRecord]:
        response = self.client.get("/control/blocklog")
        response.raise_for_status()
        return list(iter_block_log(response.content))

    def close(self) -> None:
        self.pool.shutdown(wait=False)
        self.client.close()

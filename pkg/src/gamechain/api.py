"""HTTP gateway in front of the chain engine.

Wire conventions: addresses, txids, and roots travel as lowercase hex;
transactions POST as hex text; errors return {"error": code, "message": ...}
with the same reason codes receipts use. The event stream is NDJSON with a
gapless cursor: replay from ?from=N, then follow live. A slow consumer
whose queue overflows gets an {"overflow": ...} line and a clean close so
it can reconnect from its own cursor instead of silently missing events.
"""

from __future__ import annotations

import json
import queue
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse

from . import defi, tx
from .engine import Chain
from .errors import (
    DECODE_ERROR,
    INVALID_INPUT,
    NOT_AUTHORIZED,
    NOT_FOUND,
    LedgerError,
)
from .blocklog import MAGIC, encode_block_record, record_to_json

import hashlib

STREAM_QUEUE_MAX = 4096
HEARTBEAT_SECONDS = 10.0

_HTTP_STATUS = {
    DECODE_ERROR: 400,
    "signature_invalid": 400,
    INVALID_INPUT: 400,
    NOT_FOUND: 404,
    NOT_AUTHORIZED: 403,
}


def _error(code: str, message: str, status: int | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status or _HTTP_STATUS.get(code, 400),
        content={"error": code, "message": message},
    )


def _parse_address(text: str) -> bytes:
    try:
        addr = bytes.fromhex(text)
    except ValueError:
        raise LedgerError.with_code(INVALID_INPUT, "address is not hex")
    if len(addr) != 32:
        raise LedgerError.with_code(INVALID_INPUT, "address must be 32 bytes")
    return addr


class _Subscriber:
    def __init__(self):
        self.q: queue.Queue = queue.Queue(maxsize=STREAM_QUEUE_MAX)
        self.overflowed = False


class EventHub:
    """Fan-out of new event frames to stream subscribers. A subscriber that
    cannot keep up is marked overflowed instead of blocking block production."""

    def __init__(self):
        self.subscribers: set[_Subscriber] = set()
        self.lock = threading.Lock()

    def subscribe(self) -> _Subscriber:
        sub = _Subscriber()
        with self.lock:
            self.subscribers.add(sub)
        return sub

    def unsubscribe(self, sub: _Subscriber) -> None:
        with self.lock:
            self.subscribers.discard(sub)

    def publish(self, frames) -> None:
        with self.lock:
            subs = list(self.subscribers)
        for sub in subs:
            for frame in frames:
                try:
                    sub.q.put_nowait(frame)
                except queue.Full:
                    sub.overflowed = True
                    break


def stream_events(chain: Chain, hub: EventHub, start: int, follow: bool):
    """NDJSON line generator: replay from the cursor, then follow live.
    Subscribes before snapshotting so nothing falls between the two phases;
    duplicates across the seam are dropped by sequence number."""
    sub = hub.subscribe()
    try:
        next_seq = start
        for frame in chain.events_from(start):
            yield json.dumps(frame.to_json(), sort_keys=True) + "\n"
            next_seq = frame.sequence + 1
        if not follow:
            return
        while True:
            try:
                frame = sub.q.get_nowait()
            except queue.Empty:
                if sub.overflowed:
                    yield json.dumps({"overflow": True, "resume_from": next_seq}) + "\n"
                    return
                try:
                    frame = sub.q.get(timeout=HEARTBEAT_SECONDS)
                except queue.Empty:
                    yield json.dumps({"heartbeat": next_seq}) + "\n"
                    continue
            if frame.sequence < next_seq:
                continue
            if frame.sequence > next_seq:
                # Frames were dropped past us; point the client at the gap
                # rather than papering over it.
                yield json.dumps({"overflow": True, "resume_from": next_seq}) + "\n"
                return
            yield json.dumps(frame.to_json(), sort_keys=True) + "\n"
            next_seq += 1
    finally:
        hub.unsubscribe(sub)


def create_app(chain: Chain, dev: bool = False) -> FastAPI:
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    hub = EventHub()
    app.state.event_hub = hub

    def on_block(record, frames):
        hub.publish(frames)

    chain.add_block_listener(on_block)

    @app.exception_handler(LedgerError)
    async def ledger_error_handler(request: Request, exc: LedgerError):
        return _error(exc.code, exc.message)

    # -- transactions --------------------------------------------------------

    @app.post("/tx")
    async def post_tx(request: Request):
        raw = (await request.body()).strip()
        try:
            data = bytes.fromhex(raw.decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            return _error(DECODE_ERROR, "body must be hex-encoded transaction bytes")
        txid = chain.submit_raw(data)
        return {"txid": txid.hex(), "status": "queued"}

    @app.get("/receipts/{txid_hex}")
    def get_receipt(txid_hex: str):
        try:
            txid = bytes.fromhex(txid_hex)
        except ValueError:
            return _error(INVALID_INPUT, "txid is not hex")
        receipt = chain.get_receipt(txid)
        if receipt is not None:
            return receipt.to_json()
        if chain.tx_status(txid) == "queued":
            return {"txid": txid_hex, "status": "queued"}
        return _error(NOT_FOUND, "unknown transaction")

    # -- chain views -----------------------------------------------------------

    @app.get("/head")
    def get_head():
        with chain.lock:
            head = chain.blocks[-1].block
            return {
                "height": head.height,
                "state_root": head.state_root.hex(),
                "timestamp": head.timestamp,
                "next_event_sequence": chain.state.event_sequence,
                "mempool_size": len(chain.mempool),
            }

    @app.get("/blocks/{height}")
    def get_block(height: int):
        record = chain.get_block(height)
        if record is None:
            return _error(NOT_FOUND, f"no block at height {height}")
        return record_to_json(record)

    @app.get("/accounts/{address_hex}")
    def get_account(address_hex: str):
        address = _parse_address(address_hex)
        with chain.lock:
            acct = chain.state.accounts.get(address)
            if acct is None:
                return _error(NOT_FOUND, "account has never appeared in state")
            stake = chain.state.stakes.get(address)
            tokens = {
                symbol: token.balances[address]
                for symbol, token in sorted(chain.state.tokens.items())
                if address in token.balances
            }
            return {
                "address": address_hex,
                "balance": acct.balance,
                "nonce": acct.nonce,
                "stake": (
                    {"amount": stake.amount, "start_block": stake.start_block}
                    if stake
                    else None
                ),
                "tokens": tokens,
            }

    @app.get("/assets")
    def get_assets(owner: str):
        address = _parse_address(owner)
        return {"assets": [a.to_json() for a in chain.assets_by_owner(address)]}

    @app.get("/assets/{asset_id}")
    def get_asset(asset_id: int):
        with chain.lock:
            asset = chain.state.assets.get(asset_id)
            if asset is None:
                return _error(NOT_FOUND, f"no asset {asset_id}")
            return asset.to_json()

    @app.get("/tokens/{symbol}")
    def get_token(symbol: str):
        with chain.lock:
            token = chain.state.tokens.get(symbol)
            if token is None:
                return _error(NOT_FOUND, f"no token {symbol}")
            return {
                "symbol": token.symbol,
                "total_supply": token.total_supply,
                "holders": len(token.balances),
            }

    @app.get("/pools")
    def get_pools():
        with chain.lock:
            return {
                "pools": [
                    chain.state.pools[pid].to_json()
                    for pid in sorted(chain.state.pools)
                ]
            }

    @app.get("/pools/{pool_id}")
    def get_pool(pool_id: int):
        with chain.lock:
            pool = chain.state.pools.get(pool_id)
            if pool is None:
                return _error(NOT_FOUND, f"no pool {pool_id}")
            return pool.to_json()

    @app.get("/pools/{pool_id}/quote")
    def get_quote(pool_id: int, direction: str, amount_in: int):
        if direction not in ("ab", "ba"):
            return _error(INVALID_INPUT, "direction must be ab or ba")
        if amount_in <= 0:
            return _error(INVALID_INPUT, "amount_in must be positive")
        with chain.lock:
            pool = chain.state.pools.get(pool_id)
            if pool is None:
                return _error(NOT_FOUND, f"no pool {pool_id}")
            out, slip = defi.quote(
                pool,
                tx.DIRECTION_AB if direction == "ab" else tx.DIRECTION_BA,
                amount_in,
            )
            return {
                "pool_id": pool_id,
                "direction": direction,
                "amount_in": amount_in,
                "amount_out": out,
                "slippage_bps": slip,
            }

    @app.get("/feeds/{feed_id}")
    def get_feed(feed_id: str):
        with chain.lock:
            feed = chain.state.feeds.get(feed_id)
            if feed is None:
                return _error(NOT_FOUND, f"no feed {feed_id}")
            return {
                "feed_id": feed.feed_id,
                "value": feed.last_value,
                "round": feed.round,
                "last_updated_block": feed.last_updated_block,
                "quorum": feed.quorum,
                "reporters": [r.hex() for r in sorted(feed.reporters)],
                "pending_reports": len(feed.pending),
            }

    # -- events ----------------------------------------------------------------

    @app.get("/events")
    def get_events(request: Request):
        params = request.query_params
        try:
            start = int(params.get("from", "0"))
        except ValueError:
            return _error(INVALID_INPUT, "from must be an integer")
        follow = params.get("follow", "true").lower() != "false"
        if start < 0:
            return _error(INVALID_INPUT, "from must be non-negative")
        if start > chain.next_event_sequence():
            return _error(
                INVALID_INPUT,
                f"cursor {start} is beyond the next sequence "
                f"{chain.next_event_sequence()}",
            )
        return StreamingResponse(
            stream_events(chain, hub, start, follow),
            media_type="application/x-ndjson",
        )

    # -- dev-only ----------------------------------------------------------------

    @app.post("/faucet")
    async def post_faucet(request: Request):
        if not dev:
            return _error(NOT_AUTHORIZED, "faucet is disabled", status=403)
        try:
            doc = json.loads(await request.body())
            address = _parse_address(doc["address"])
            amount = int(doc["amount"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            return _error(INVALID_INPUT, "body must be {address, amount}")
        chain.faucet(address, amount)
        return {"status": "queued", "address": address.hex(), "amount": amount}

    @app.post("/control/block")
    async def post_control_block(request: Request):
        if not dev:
            return _error(NOT_AUTHORIZED, "control endpoints are disabled", status=403)
        record = chain.produce_block()
        return {
            "block": record.block.to_json(),
            "tx_count": len(record.txs),
            "event_count": sum(len(r.events) for r in record.receipts),
        }

    @app.get("/control/blocklog")
    def get_control_blocklog():
        if not dev:
            return _error(NOT_AUTHORIZED, "control endpoints are disabled", status=403)
        with chain.lock:
            records = list(chain.blocks)
        parts = [MAGIC]
        for record in records:
            body = encode_block_record(record)
            parts.append(len(body).to_bytes(4, "big"))
            parts.append(body)
            parts.append(hashlib.sha256(body).digest())
        return Response(content=b"".join(parts), media_type="application/octet-stream")

    @app.get("/control/genesis")
    def get_control_genesis():
        if not dev:
            return _error(NOT_AUTHORIZED, "control endpoints are disabled", status=403)
        return chain.genesis.to_json()

    return app


class BlockTicker(threading.Thread):
    """Produces a block every interval_seconds of wall time. The logical
    clock inside blocks is unrelated; this only paces production."""

    def __init__(self, chain: Chain, interval_seconds: float):
        super().__init__(daemon=True, name="block-ticker")
        self.chain = chain
        self.interval_seconds = interval_seconds
        self._stop = threading.Event()

    def run(self) -> None:
        while not self._stop.wait(self.interval_seconds):
            self.chain.produce_block()

    def stop(self) -> None:
        self._stop.set()


def serve(
    chain: Chain,
    host: str = "127.0.0.1",
    port: int = 8000,
    block_interval_seconds: float = 1.0,
    dev: bool = False,
) -> None:
    """Run the gateway until interrupted. interval 0 means blocks are only
    produced through POST /control/block."""
    import uvicorn

    app = create_app(chain, dev=dev)
    ticker = None
    if block_interval_seconds > 0:
        ticker = BlockTicker(chain, block_interval_seconds)
        ticker.start()
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        if ticker is not None:
            ticker.stop()

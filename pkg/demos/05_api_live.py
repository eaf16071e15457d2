#!/usr/bin/env python3
"""Drive a live HTTP gateway: faucet, sign, submit, and tail the event feed.

Starts the server in a background thread on a free port, so this script is
self-contained. The same flow works against `gamechain serve --dev-faucet`.
"""

import json
import socket
import threading
import time

import httpx
import uvicorn

from gamechain import tx
from gamechain.api import create_app
from gamechain.engine import Chain
from gamechain.genesis import GenesisConfig
from gamechain.keys import keygen

wallet = keygen(bytes([21] * 32))
chain = Chain(
    GenesisConfig(chain_seed=17, block_interval=(15, 45), allocations=(), feeds=())
)

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
server = uvicorn.Server(
    uvicorn.Config(create_app(chain, dev=True), host="127.0.0.1", port=port,
                   log_level="error")
)
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.01)
base = f"http://127.0.0.1:{port}"
print(f"gateway listening on {base}")

client = httpx.Client(base_url=base, timeout=10)

# Tail the event stream from the very beginning, in a thread.
def tail():
    with httpx.stream("GET", f"{base}/events?from=0", timeout=30) as stream:
        for line in stream.iter_lines():
            if not line:
                continue
            doc = json.loads(line)
            if "kind" in doc:
                print(f"  stream: #{doc['sequence']} {doc['kind']}")
                if doc["kind"] == "AssetTransferred":
                    return

threading.Thread(target=tail, daemon=True).start()

# Fund the wallet from the dev faucet; grants land in the next block.
client.post("/faucet", json={"address": wallet.address.hex(), "amount": 5_000_000})
client.post("/control/block")
account = client.get(f"/accounts/{wallet.address.hex()}").json()
print(f"faucet funded balance {account['balance']}")

# Sign locally, post the raw hex, wait for the receipt.
body = tx.UnsignedTransaction(
    sender=wallet.address,
    nonce=0,
    payload=tx.CreateAsset(name="Lantern of Ports", category="trinket", rarity=2),
)
stx = tx.sign_transaction(body, wallet.secret)
posted = client.post("/tx", content=stx.encode().hex()).json()
print(f"posted {posted['txid'][:16]}… status {posted['status']}")
client.post("/control/block")
receipt = client.get(f"/receipts/{stx.txid.hex()}").json()
print(f"receipt: {receipt['status']}, gas {receipt['gas_used']}")

# Transfer it away so the stream tail sees both event kinds, then let the
# tail thread print before the script exits.
body = tx.UnsignedTransaction(
    sender=wallet.address,
    nonce=1,
    payload=tx.TransferAsset(asset_id=1, to=bytes([9] * 32)),
)
stx = tx.sign_transaction(body, wallet.secret)
client.post("/tx", content=stx.encode().hex())
client.post("/control/block")
time.sleep(0.5)

head = client.get("/head").json()
print(f"head height {head['height']}, root {head['state_root'][:16]}…")
client.close()
server.should_exit = True

"""Shared fixtures: derandomized hypothesis profile and a live gateway."""

from __future__ import annotations

import contextlib
import socket
import threading
import time

import pytest
import uvicorn
from hypothesis import HealthCheck, settings

from gamechain.api import create_app
from gamechain.engine import Chain

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class StatusCounter:
    """Counts every HTTP status the ASGI app sends."""

    def __init__(self):
        self.counts: dict[int, int] = {}
        self.lock = threading.Lock()

    def record(self, status: int) -> None:
        with self.lock:
            self.counts[status] = self.counts.get(status, 0) + 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def at_least(self, status: int) -> int:
        return sum(n for s, n in self.counts.items() if s >= status)


class CountingApp:
    def __init__(self, app, counter: StatusCounter):
        self.app = app
        self.counter = counter

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return

        async def counting_send(message):
            if message["type"] == "http.response.start":
                self.counter.record(message["status"])
            await send(message)

        await self.app(scope, receive, counting_send)


@contextlib.contextmanager
def serve_chain(chain: Chain, dev: bool = True, counter: StatusCounter | None = None):
    app = create_app(chain, dev=dev)
    if counter is not None:
        app = CountingApp(app, counter)
    port = free_port()
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("gateway did not start in time")
        time.sleep(0.01)
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=15)


@pytest.fixture
def gateway():
    """Factory: start a dev-mode gateway for a chain, yield its base URL."""
    stack = contextlib.ExitStack()

    def start(chain: Chain, dev: bool = True, counter: StatusCounter | None = None):
        return stack.enter_context(serve_chain(chain, dev=dev, counter=counter))

    try:
        yield start
    finally:
        stack.close()

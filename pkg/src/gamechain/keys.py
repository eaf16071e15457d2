"""Ed25519 keypairs and signing.

Addresses are the raw 32-byte Ed25519 public key. Signing is deterministic
(RFC 8032), so the same body and secret always produce the same signature
and therefore the same txid.
"""

from __future__ import annotations

from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

ADDRESS_LEN = 32
SEED_LEN = 32
SIGNATURE_LEN = 64


@dataclass(frozen=True)
class Keypair:
    public: bytes   # 32-byte address
    secret: bytes   # 32-byte signing seed

    @property
    def address(self) -> bytes:
        return self.public


def keygen(seed: bytes) -> Keypair:
    """Derive a keypair from a 32-byte seed. Same seed, same keypair."""
    if len(seed) != SEED_LEN:
        raise ValueError(f"seed must be {SEED_LEN} bytes, got {len(seed)}")
    sk = Ed25519PrivateKey.from_private_bytes(seed)
    public = sk.public_key().public_bytes(
        serialization.Encoding.Raw, serialization.PublicFormat.Raw
    )
    return Keypair(public=public, secret=seed)


def sign(secret: bytes, message: bytes) -> bytes:
    sk = Ed25519PrivateKey.from_private_bytes(secret)
    return sk.sign(message)


def verify(public: bytes, signature: bytes, message: bytes) -> bool:
    if len(public) != ADDRESS_LEN or len(signature) != SIGNATURE_LEN:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(public).verify(signature, message)
        return True
    except (InvalidSignature, ValueError):
        return False

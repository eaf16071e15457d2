"""Rejection reason codes and the exception hierarchy.

Every path that rejects a transaction or an API request maps to exactly one
machine code from REASON_CODES; the HTTP layer and receipts carry these codes
verbatim so clients can render them without translation.
"""

from __future__ import annotations

DECODE_ERROR = "decode_error"
SIGNATURE_INVALID = "signature_invalid"
NONCE_MISMATCH = "nonce_mismatch"
NOT_OWNER = "not_owner"
NO_SUCH_ASSET = "no_such_asset"
INSUFFICIENT_FUNDS = "insufficient_funds"
SLIPPAGE = "slippage"
NOT_AUTHORIZED = "not_authorized"
INVALID_INPUT = "invalid_input"
NOT_FOUND = "not_found"

REASON_CODES = frozenset({
    DECODE_ERROR,
    SIGNATURE_INVALID,
    NONCE_MISMATCH,
    NOT_OWNER,
    NO_SUCH_ASSET,
    INSUFFICIENT_FUNDS,
    SLIPPAGE,
    NOT_AUTHORIZED,
    INVALID_INPUT,
    NOT_FOUND,
})


class LedgerError(Exception):
    """Base for all engine-raised errors carrying a reason code."""

    code = "invalid_input"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    @classmethod
    def with_code(cls, code: str, message: str = "") -> "LedgerError":
        if code not in REASON_CODES:
            raise ValueError(f"unknown reason code: {code}")
        err = LedgerError(message)
        err.code = code
        return err


class DecodeError(LedgerError):
    code = DECODE_ERROR


class SignatureError(LedgerError):
    code = SIGNATURE_INVALID


class SigningKeyError(LedgerError):
    """Raised when a signing secret does not match the transaction sender."""

    code = SIGNATURE_INVALID


class ExecRejection(LedgerError):
    """Raised by payload executors; becomes a Rejected receipt with this code."""

    def __init__(self, code: str, message: str = ""):
        if code not in REASON_CODES:
            raise ValueError(f"unknown reason code: {code}")
        self.code = code
        super().__init__(message)


class IntegrityError(Exception):
    """Replay or block-log verification found a divergence."""

    def __init__(self, height: int | None, detail: str):
        self.height = height
        self.detail = detail
        where = f"height {height}" if height is not None else "block log"
        super().__init__(f"integrity error at {where}: {detail}")

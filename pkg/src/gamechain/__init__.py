"""gamechain: a deterministic game-economy ledger.

Single-writer state machine with signed transactions, gas metering, game
assets, constant-product pools, block-linear staking, quorum-median price
feeds, an append-only event log, and full replay verification, fronted by
an HTTP gateway and driven by a scripted agent harness.
"""

from .engine import Block, BlockRecord, Chain, FaucetGrant
from .errors import (
    DecodeError,
    ExecRejection,
    IntegrityError,
    LedgerError,
    SignatureError,
)
from .gas import DEFAULT_SCHEDULE, GasSchedule
from .genesis import FeedSpec, GenesisConfig
from .keys import Keypair, keygen
from .ledger import Receipt, apply_transaction
from .replay import replay_records, verify_export
from .state import LedgerState, state_root
from .tx import (
    AddLiquidity,
    CreateAsset,
    CreatePool,
    CreateToken,
    NativeTransfer,
    RemoveLiquidity,
    SignedTransaction,
    Stake,
    SubmitReport,
    SwapExactIn,
    TokenTransfer,
    TransferAsset,
    UnsignedTransaction,
    Unstake,
    decode_and_verify,
    decode_signed,
    sign_transaction,
)

__version__ = "0.1.0"

__all__ = [
    "AddLiquidity",
    "Block",
    "BlockRecord",
    "Chain",
    "CreateAsset",
    "CreatePool",
    "CreateToken",
    "DEFAULT_SCHEDULE",
    "DecodeError",
    "ExecRejection",
    "FaucetGrant",
    "FeedSpec",
    "GasSchedule",
    "GenesisConfig",
    "IntegrityError",
    "Keypair",
    "LedgerError",
    "LedgerState",
    "NativeTransfer",
    "Receipt",
    "RemoveLiquidity",
    "SignatureError",
    "SignedTransaction",
    "Stake",
    "SubmitReport",
    "SwapExactIn",
    "TokenTransfer",
    "TransferAsset",
    "UnsignedTransaction",
    "Unstake",
    "apply_transaction",
    "decode_and_verify",
    "decode_signed",
    "keygen",
    "replay_records",
    "sign_transaction",
    "state_root",
    "verify_export",
]

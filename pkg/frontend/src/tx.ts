/**
 * Transaction payloads and the signed-transaction encoding.
 *
 * Tags and field order are frozen by the chain; the engine hashes
 * sha256(body || signature) as the txid, so an encoding that differs by
 * one byte produces a transaction the gateway will reject or misroute.
 */

import { sha256 } from "@noble/hashes/sha2.js";

import { Writer } from "./codec.js";

export const ADDRESS_LEN = 32;
export const SIGNATURE_LEN = 64;

export const DIRECTION_AB = 0;
export const DIRECTION_BA = 1;

export type Payload =
  | { kind: "native_transfer"; to: Uint8Array; amount: number | bigint }
  | { kind: "create_asset"; name: string; category: string; rarity: number }
  | { kind: "transfer_asset"; assetId: number; to: Uint8Array }
  | { kind: "create_token"; symbol: string; supply: number | bigint }
  | { kind: "token_transfer"; symbol: string; to: Uint8Array; amount: number | bigint }
  | {
      kind: "create_pool";
      tokenA: string;
      tokenB: string;
      feeBps: number;
      amountA: number | bigint;
      amountB: number | bigint;
    }
  | { kind: "add_liquidity"; poolId: number; amountA: number | bigint; amountB: number | bigint }
  | { kind: "remove_liquidity"; poolId: number; lpAmount: number | bigint }
  | {
      kind: "swap_exact_in";
      poolId: number;
      direction: number;
      amountIn: number | bigint;
      minOut: number | bigint;
    }
  | { kind: "stake"; amount: number | bigint }
  | { kind: "unstake" }
  | { kind: "submit_report"; feedId: string; value: number | bigint };

const TAGS: Record<Payload["kind"], number> = {
  native_transfer: 0,
  create_asset: 1,
  transfer_asset: 2,
  create_token: 3,
  token_transfer: 4,
  create_pool: 5,
  add_liquidity: 6,
  remove_liquidity: 7,
  swap_exact_in: 8,
  stake: 9,
  unstake: 10,
  submit_report: 11,
};

function writePayload(w: Writer, p: Payload): void {
  w.u8(TAGS[p.kind]);
  switch (p.kind) {
    case "native_transfer":
      w.raw(p.to, ADDRESS_LEN).u64(p.amount);
      break;
    case "create_asset":
      w.str(p.name).str(p.category).u8(p.rarity);
      break;
    case "transfer_asset":
      w.u64(p.assetId).raw(p.to, ADDRESS_LEN);
      break;
    case "create_token":
      w.str(p.symbol).u64(p.supply);
      break;
    case "token_transfer":
      w.str(p.symbol).raw(p.to, ADDRESS_LEN).u64(p.amount);
      break;
    case "create_pool":
      w.str(p.tokenA).str(p.tokenB).u64(p.feeBps).u64(p.amountA).u64(p.amountB);
      break;
    case "add_liquidity":
      w.u64(p.poolId).u64(p.amountA).u64(p.amountB);
      break;
    case "remove_liquidity":
      w.u64(p.poolId).u64(p.lpAmount);
      break;
    case "swap_exact_in":
      w.u64(p.poolId).u8(p.direction).u64(p.amountIn).u64(p.minOut);
      break;
    case "stake":
      w.u64(p.amount);
      break;
    case "unstake":
      break;
    case "submit_report":
      w.str(p.feedId).u64(p.value);
      break;
  }
}

export function encodeUnsigned(
  sender: Uint8Array,
  nonce: number | bigint,
  payload: Payload,
): Uint8Array {
  const w = new Writer();
  w.raw(sender, ADDRESS_LEN).u64(nonce);
  writePayload(w, payload);
  return w.finish();
}

export interface SignedTx {
  bytes: Uint8Array;
  txid: Uint8Array;
}

export function attachSignature(body: Uint8Array, signature: Uint8Array): SignedTx {
  const w = new Writer();
  w.raw(body).raw(signature, SIGNATURE_LEN);
  const bytes = w.finish();
  return { bytes, txid: sha256(bytes) };
}

/**
 * Dashboard model: the piece between the gateway client and the DOM.
 *
 * It owns one wallet, one event store fed by the live stream, and a list
 * of tracked addresses. Actions sign with the wallet, submit through
 * POST /tx, and resolve with the confirmed receipt; any failure leaves
 * the canonical reason code in `lastError` for the error panel.
 */

import { ApiClient, ApiError, EventStream, Receipt } from "./api.js";
import { hexToBytes } from "./codec.js";
import { DIRECTION_AB, DIRECTION_BA, Payload } from "./tx.js";
import { EventStore } from "./store.js";
import { Wallet } from "./wallet.js";

const RECEIPT_POLL_MS = 25;

export interface PendingTx {
  txid: string;
  /** Resolves when the transaction lands in a block, applied or rejected. */
  confirmed: Promise<Receipt>;
}

export class Dashboard {
  readonly store = new EventStore();
  readonly tracked: string[] = [];
  /** Reason code of the most recent failed action, null after a success. */
  lastError: string | null = null;

  private stream: EventStream | null = null;

  constructor(
    readonly api: ApiClient,
    readonly wallet: Wallet,
  ) {}

  connect(from = 0): void {
    if (this.stream !== null) return;
    this.stream = new EventStream(this.api.baseUrl, from, (frame) =>
      this.store.apply(frame),
    );
  }

  async disconnect(): Promise<void> {
    await this.stream?.stop();
    this.stream = null;
  }

  track(address: string): void {
    if (!this.tracked.includes(address)) this.tracked.push(address);
  }

  /**
   * One refresh cycle: read the head, then wait for the event fold to
   * catch up to it, so every view rendered afterwards reflects at least
   * that block.
   */
  async refresh(timeoutMs = 30_000) {
    const head = await this.api.head();
    await this.store.waitForCursor(head.next_event_sequence, timeoutMs);
    return head;
  }

  inventory(address: string) {
    return this.store.inventory(address);
  }

  private async nextNonce(): Promise<number> {
    try {
      return (await this.api.account(this.wallet.address)).nonce;
    } catch (err) {
      // A wallet that has never appeared in state starts at nonce 0.
      if (err instanceof ApiError && err.status === 404) return 0;
      throw err;
    }
  }

  async submit(payload: Payload): Promise<PendingTx> {
    this.lastError = null;
    const nonce = await this.nextNonce();
    const signed = this.wallet.signTx(nonce, payload);
    const txHex = Array.from(signed.bytes, (b) =>
      b.toString(16).padStart(2, "0"),
    ).join("");
    const txidHex = Array.from(signed.txid, (b) =>
      b.toString(16).padStart(2, "0"),
    ).join("");
    try {
      await this.api.postTx(txHex);
    } catch (err) {
      if (err instanceof ApiError) this.lastError = err.code;
      throw err;
    }
    return { txid: txidHex, confirmed: this.awaitReceipt(txidHex) };
  }

  private async awaitReceipt(txid: string, timeoutMs = 60_000): Promise<Receipt> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const receipt = await this.api.receipt(txid);
      if (receipt.status !== "queued") {
        if (receipt.status === "rejected") {
          this.lastError = receipt.reason_code ?? "rejected";
        }
        return receipt;
      }
      if (Date.now() > deadline) {
        throw new Error(`receipt for ${txid} still queued after ${timeoutMs}ms`);
      }
      await new Promise((r) => setTimeout(r, RECEIPT_POLL_MS));
    }
  }

  mint(name: string, category: string, rarity: number): Promise<PendingTx> {
    return this.submit({ kind: "create_asset", name, category, rarity });
  }

  transferAsset(assetId: number, toHex: string): Promise<PendingTx> {
    return this.submit({
      kind: "transfer_asset",
      assetId,
      to: hexToBytes(toHex),
    });
  }

  send(toHex: string, amount: number): Promise<PendingTx> {
    return this.submit({
      kind: "native_transfer",
      to: hexToBytes(toHex),
      amount,
    });
  }

  createToken(symbol: string, supply: number): Promise<PendingTx> {
    return this.submit({ kind: "create_token", symbol, supply });
  }

  createPool(
    tokenA: string,
    tokenB: string,
    feeBps: number,
    amountA: number,
    amountB: number,
  ): Promise<PendingTx> {
    return this.submit({
      kind: "create_pool",
      tokenA,
      tokenB,
      feeBps,
      amountA,
      amountB,
    });
  }

  swap(
    poolId: number,
    direction: "ab" | "ba",
    amountIn: number,
    minOut: number,
  ): Promise<PendingTx> {
    return this.submit({
      kind: "swap_exact_in",
      poolId,
      direction: direction === "ab" ? DIRECTION_AB : DIRECTION_BA,
      amountIn,
      minOut,
    });
  }
}

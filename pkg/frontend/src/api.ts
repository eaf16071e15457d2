/**
 * HTTP client for a gamechain gateway, plus the NDJSON event stream.
 *
 * The stream contract: frames arrive in sequence order starting at the
 * requested cursor, heartbeats are {"heartbeat": n}, and a slow consumer
 * gets {"overflow": true, "resume_from": n} before the server closes the
 * response. Reconnecting from the advertised cursor never misses a frame
 * because history is replayed from the block log.
 */

export interface Head {
  height: number;
  state_root: string;
  timestamp: number;
  next_event_sequence: number;
  mempool_size: number;
}

export interface Account {
  address: string;
  balance: number;
  nonce: number;
  stake: { amount: number; start_block: number } | null;
  tokens: Record<string, number>;
}

export interface AssetView {
  id: number;
  name: string;
  category: string;
  rarity: string;
  owner: string;
  created_at_block: number;
}

export interface PoolView {
  pool_id: number;
  token_a: string;
  token_b: string;
  reserve_a: number;
  reserve_b: number;
  fee_bps: number;
  lp_supply: number;
}

export interface QuoteView {
  pool_id: number;
  direction: string;
  amount_in: number;
  amount_out: number;
  slippage_bps: number;
}

export interface ReceiptEvent {
  kind: string;
  sequence: number;
  block_height: number;
  attributes: Record<string, string | number>;
}

export interface Receipt {
  txid: string;
  status: "applied" | "rejected" | "queued";
  block_height?: number;
  tx_index?: number;
  reason_code?: string | null;
  gas_used?: number;
  fee_paid?: number;
  confirmation_seconds?: number;
  events?: ReceiptEvent[];
}

export interface EventFrame {
  kind: string;
  sequence: number;
  block_height: number;
  attributes: Record<string, string | number>;
  txid: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `HTTP ${res.status}`;
  try {
    const doc = await res.json();
    if (typeof doc.error === "string") code = doc.error;
    if (typeof doc.message === "string") message = doc.message;
  } catch {
    // keep the generic message when the body is not the JSON error shape
  }
  return new ApiError(res.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  head(): Promise<Head> {
    return this.getJson("/head");
  }

  account(address: string): Promise<Account> {
    return this.getJson(`/accounts/${address}`);
  }

  async assetsOf(owner: string): Promise<AssetView[]> {
    const doc = await this.getJson<{ assets: AssetView[] }>(
      `/assets?owner=${owner}`,
    );
    return doc.assets;
  }

  asset(assetId: number): Promise<AssetView> {
    return this.getJson(`/assets/${assetId}`);
  }

  async pools(): Promise<PoolView[]> {
    const doc = await this.getJson<{ pools: PoolView[] }>("/pools");
    return doc.pools;
  }

  pool(poolId: number): Promise<PoolView> {
    return this.getJson(`/pools/${poolId}`);
  }

  quote(poolId: number, direction: "ab" | "ba", amountIn: number): Promise<QuoteView> {
    return this.getJson(
      `/pools/${poolId}/quote?direction=${direction}&amount_in=${amountIn}`,
    );
  }

  receipt(txidHex: string): Promise<Receipt> {
    return this.getJson(`/receipts/${txidHex}`);
  }

  async postTx(txHex: string): Promise<{ txid: string; status: string }> {
    const res = await fetch(`${this.baseUrl}/tx`, {
      method: "POST",
      headers: { "content-type": "text/plain" },
      body: txHex,
    });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as { txid: string; status: string };
  }

  async faucet(address: string, amount: number): Promise<void> {
    const res = await fetch(`${this.baseUrl}/faucet`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ address, amount }),
    });
    if (!res.ok) throw await parseError(res);
  }

  async produceBlock(): Promise<{ tx_count: number; event_count: number }> {
    const res = await fetch(`${this.baseUrl}/control/block`, { method: "POST" });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as { tx_count: number; event_count: number };
  }
}

const RECONNECT_DELAY_MS = 250;

export class EventStream {
  /** Next sequence number this stream expects. */
  cursor: number;

  private stopped = false;
  private controller: AbortController | null = null;
  private readonly done: Promise<void>;

  constructor(
    private readonly baseUrl: string,
    from: number,
    private readonly onFrame: (frame: EventFrame) => void,
    private readonly onError?: (err: unknown) => void,
  ) {
    this.cursor = from;
    this.done = this.loop();
  }

  private async loop(): Promise<void> {
    while (!this.stopped) {
      try {
        await this.readOnce();
      } catch (err) {
        if (this.stopped) break;
        this.onError?.(err);
      }
      if (this.stopped) break;
      await new Promise((r) => setTimeout(r, RECONNECT_DELAY_MS));
    }
  }

  private async readOnce(): Promise<void> {
    this.controller = new AbortController();
    const res = await fetch(`${this.baseUrl}/events?from=${this.cursor}`, {
      signal: this.controller.signal,
    });
    if (!res.ok || !res.body) {
      throw await parseError(res);
    }
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) return;
      buffer += decoder.decode(value, { stream: true });
      let newline: number;
      while ((newline = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, newline).trim();
        buffer = buffer.slice(newline + 1);
        if (!line) continue;
        const doc = JSON.parse(line);
        if ("heartbeat" in doc) continue;
        if (doc.overflow === true) {
          // The server dropped frames for us; restart from its cursor.
          this.cursor = doc.resume_from as number;
          this.controller.abort();
          return;
        }
        const frame = doc as EventFrame;
        if (frame.sequence < this.cursor) continue;
        this.cursor = frame.sequence + 1;
        this.onFrame(frame);
      }
    }
  }

  async stop(): Promise<void> {
    this.stopped = true;
    this.controller?.abort();
    await this.done.catch(() => undefined);
  }
}

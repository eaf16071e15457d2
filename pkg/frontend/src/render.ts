/**
 * Text renderers for the dashboard panels.
 *
 * Kept DOM-free on purpose: main.ts assigns these strings to elements,
 * and the test suite asserts on them directly under node.
 */

import { Head, Receipt } from "./api.js";
import { AssetRow } from "./store.js";

export function shortAddress(address: string): string {
  return `${address.slice(0, 8)}…${address.slice(-6)}`;
}

export function renderHead(head: Head): string {
  return (
    `height ${head.height} | root ${head.state_root.slice(0, 16)}… | ` +
    `mempool ${head.mempool_size} | next event ${head.next_event_sequence}`
  );
}

export function renderInventory(owner: string, rows: AssetRow[]): string {
  const lines = [`${shortAddress(owner)} holds ${rows.length} asset(s)`];
  for (const row of rows) {
    lines.push(`  #${row.id} ${row.name} [${row.category}/${row.rarity}]`);
  }
  return lines.join("\n");
}

export function renderReceipt(receipt: Receipt): string {
  if (receipt.status === "applied") {
    return (
      `Applied in block ${receipt.block_height} ` +
      `(gas ${receipt.gas_used}, confirmed in ${receipt.confirmation_seconds}s)`
    );
  }
  if (receipt.status === "rejected") {
    return `Rejected: ${receipt.reason_code} (gas ${receipt.gas_used})`;
  }
  return "Queued…";
}

export function renderError(code: string | null): string {
  if (code === null) return "";
  return `error [${code}]`;
}

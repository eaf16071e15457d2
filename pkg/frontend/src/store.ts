/**
 * Client-side fold of the event stream into an asset-ownership view.
 *
 * AssetCreated and AssetTransferred are the only events that move
 * ownership, so folding just those two reconstructs the same map the
 * chain holds. The cursor records the next sequence the store expects;
 * comparing it against head.next_event_sequence tells the UI whether the
 * view is caught up with the chain.
 */

import { EventFrame } from "./api.js";

export interface AssetRow {
  id: number;
  name: string;
  category: string;
  rarity: string;
  owner: string;
}

export class EventStore {
  /** Next event sequence this store has not folded yet. */
  cursor = 0;

  private assets = new Map<number, AssetRow>();
  private byOwner = new Map<string, Set<number>>();

  apply(frame: EventFrame): void {
    if (frame.sequence < this.cursor) return;
    this.cursor = frame.sequence + 1;
    const attrs = frame.attributes;
    if (frame.kind === "AssetCreated") {
      const row: AssetRow = {
        id: attrs.asset_id as number,
        name: attrs.name as string,
        category: attrs.category as string,
        rarity: attrs.rarity as string,
        owner: attrs.owner as string,
      };
      this.assets.set(row.id, row);
      this.ownerSet(row.owner).add(row.id);
    } else if (frame.kind === "AssetTransferred") {
      const id = attrs.asset_id as number;
      const row = this.assets.get(id);
      if (row === undefined) return;
      this.ownerSet(row.owner).delete(id);
      row.owner = attrs.to as string;
      this.ownerSet(row.owner).add(id);
    }
  }

  private ownerSet(owner: string): Set<number> {
    let set = this.byOwner.get(owner);
    if (set === undefined) {
      set = new Set();
      this.byOwner.set(owner, set);
    }
    return set;
  }

  asset(id: number): AssetRow | undefined {
    return this.assets.get(id);
  }

  inventory(owner: string): AssetRow[] {
    const ids = [...(this.byOwner.get(owner) ?? [])].sort((a, b) => a - b);
    return ids.map((id) => this.assets.get(id)!);
  }

  owners(): string[] {
    return [...this.byOwner.keys()].filter(
      (o) => (this.byOwner.get(o)?.size ?? 0) > 0,
    );
  }

  /** Resolve once the fold reaches `target`; reject on timeout. */
  waitForCursor(target: number, timeoutMs = 10_000): Promise<void> {
    return new Promise((resolve, reject) => {
      const deadline = Date.now() + timeoutMs;
      const check = () => {
        if (this.cursor >= target) return resolve();
        if (Date.now() > deadline) {
          return reject(
            new Error(
              `store cursor ${this.cursor} never reached ${target} ` +
                `within ${timeoutMs}ms`,
            ),
          );
        }
        setTimeout(check, 10);
      };
      check();
    });
  }
}

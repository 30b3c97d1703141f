// Browser-side outbox: reports and pins that could not reach the service
// wait here and retry in the background of the session.

import { ApiClient } from "./api.js";
import type { HazardReport, MapItPin } from "./types.js";

export type OutboxItem =
  | { kind: "report"; payload: HazardReport }
  | { kind: "pin"; payload: MapItPin };

export interface OutboxStorage {
  load(): OutboxItem[];
  store(items: OutboxItem[]): void;
}

/** In-memory fallback; the browser build plugs in localStorage. */
export class MemoryStorage implements OutboxStorage {
  private items: OutboxItem[] = [];
  load(): OutboxItem[] {
    return [...this.items];
  }
  store(items: OutboxItem[]): void {
    this.items = [...items];
  }
}

export class LocalStorageBackend implements OutboxStorage {
  constructor(private key = "roadwatch-outbox") {}
  load(): OutboxItem[] {
    const raw = globalThis.localStorage?.getItem(this.key);
    return raw ? (JSON.parse(raw) as OutboxItem[]) : [];
  }
  store(items: OutboxItem[]): void {
    globalThis.localStorage?.setItem(this.key, JSON.stringify(items));
  }
}

function keyOf(item: OutboxItem): string {
  return item.kind === "report" ? item.payload.idempotency_key : item.payload.pin_id;
}

export class ConsoleOutbox {
  private items: OutboxItem[];

  constructor(private storage: OutboxStorage = new MemoryStorage()) {
    this.items = storage.load();
  }

  get size(): number {
    return this.items.length;
  }

  pending(): OutboxItem[] {
    return [...this.items];
  }

  save(payload: HazardReport | MapItPin): void {
    const item: OutboxItem =
      "idempotency_key" in payload
        ? { kind: "report", payload }
        : { kind: "pin", payload };
    if (this.items.some((existing) => keyOf(existing) === keyOf(item))) {
      return; // retried saves must not duplicate
    }
    this.items.push(item);
    this.storage.store(this.items);
  }

  /**
   * Try to deliver everything, FIFO. Items stay queued on failure; the
   * server's idempotency keys make re-delivery harmless.
   */
  async retry(api: ApiClient): Promise<{ delivered: number; remaining: number }> {
    const still: OutboxItem[] = [];
    let delivered = 0;
    for (const item of this.items) {
      try {
        if (item.kind === "report") {
          await api.submitReport(item.payload);
        } else {
          await api.submitPin(item.payload);
        }
        delivered += 1;
      } catch {
        still.push(item);
      }
    }
    this.items = still;
    this.storage.store(this.items);
    return { delivered, remaining: still.length };
  }
}

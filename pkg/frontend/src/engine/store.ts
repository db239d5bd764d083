import { binaryToBytes, bytesToBinary } from "./bytes.js";

export const STORES = ["postings", "df", "docs", "meta"] as const;
export type StoreName = (typeof STORES)[number];

function bisectLeft(keys: string[], target: string): number {
  let lo = 0;
  let hi = keys.length;
  while (lo < hi) {
    const mid = (lo + hi) >>> 1;
    if (keys[mid] < target) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

/** Smallest binary string greater than everything with this prefix. */
function upperBound(prefix: string): string | null {
  for (let i = prefix.length - 1; i >= 0; i--) {
    const c = prefix.charCodeAt(i);
    if (c < 0xff) return prefix.slice(0, i) + String.fromCharCode(c + 1);
  }
  return null; // prefix is all 0xff bytes, scan to the end
}

class MemStore {
  data = new Map<string, Uint8Array>();
  private sortedKeys: string[] | null = [];

  keysInOrder(): string[] {
    if (this.sortedKeys === null) {
      this.sortedKeys = [...this.data.keys()].sort();
    }
    return this.sortedKeys;
  }

  markDirty(): void {
    this.sortedKeys = null;
  }
}

/**
 * Byte-ordered key-value storage with four fixed namespaces, the same
 * contract the native engine's in-memory backend exposes. Point ops are
 * O(1); the sorted view is rebuilt lazily on the first scan after a
 * change to the key set.
 */
export class MemoryStorage {
  private stores = new Map<StoreName, MemStore>(
    STORES.map((name) => [name, new MemStore()]),
  );

  private store(name: StoreName): MemStore {
    const st = this.stores.get(name);
    if (!st) throw new Error(`unknown store: ${name}`);
    return st;
  }

  put(store: StoreName, key: Uint8Array, value: Uint8Array): void {
    if (key.length === 0) throw new Error("key must be non-empty");
    const st = this.store(store);
    const bin = bytesToBinary(key);
    if (!st.data.has(bin)) st.markDirty();
    st.data.set(bin, value);
  }

  get(store: StoreName, key: Uint8Array): Uint8Array | null {
    return this.store(store).data.get(bytesToBinary(key)) ?? null;
  }

  entryCount(store: StoreName): number {
    return this.store(store).data.size;
  }

  /** Entries under `prefix` in byte order; empty prefix scans the store. */
  rangeScan(
    store: StoreName,
    prefix: Uint8Array = new Uint8Array(0),
  ): Array<[Uint8Array, Uint8Array]> {
    const st = this.store(store);
    const keys = st.keysInOrder();
    const binPrefix = bytesToBinary(prefix);
    const lo = binPrefix ? bisectLeft(keys, binPrefix) : 0;
    const upper = binPrefix ? upperBound(binPrefix) : null;
    const hi = upper !== null ? bisectLeft(keys, upper) : keys.length;
    const out: Array<[Uint8Array, Uint8Array]> = [];
    for (let i = lo; i < hi; i++) {
      out.push([binaryToBytes(keys[i]), st.data.get(keys[i])!]);
    }
    return out;
  }
}

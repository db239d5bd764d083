import { concatBytes } from "./bytes.js";
import { fnv1a64 } from "./fnv.js";
import { MemoryStorage, StoreName, STORES } from "./store.js";

// Container layout, shared bit for bit with the native CLI's
// export-snapshot: magic "SNAP1", then per store in id order
// (postings=0, df=1, docs=2, meta=3): store_id u8, entry count u32-LE,
// then (key_len u32-LE, key, val_len u32-LE, value) records; finally a
// 64-bit FNV-1a checksum (LE) over all preceding bytes.
const MAGIC = new TextEncoder().encode("SNAP1");

export class SnapshotError extends Error {}

function u32le(n: number): Uint8Array {
  const out = new Uint8Array(4);
  new DataView(out.buffer).setUint32(0, n, true);
  return out;
}

export function exportSnapshot(storage: MemoryStorage): Uint8Array {
  const parts: Uint8Array[] = [MAGIC];
  STORES.forEach((name, sid) => {
    const entries = storage.rangeScan(name);
    parts.push(Uint8Array.of(sid), u32le(entries.length));
    for (const [key, value] of entries) {
      parts.push(u32le(key.length), key, u32le(value.length), value);
    }
  });
  const body = concatBytes(parts);
  const out = new Uint8Array(body.length + 8);
  out.set(body, 0);
  new DataView(out.buffer).setBigUint64(body.length, fnv1a64(body), true);
  return out;
}

/** Validates the container and loads it into a fresh storage instance. */
export function importSnapshot(data: Uint8Array): MemoryStorage {
  if (data.length < MAGIC.length + 8) {
    throw new SnapshotError("not a snapshot container");
  }
  for (let i = 0; i < MAGIC.length; i++) {
    if (data[i] !== MAGIC[i]) throw new SnapshotError("not a snapshot container");
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const expected = view.getBigUint64(data.length - 8, true);
  if (fnv1a64(data.subarray(0, data.length - 8)) !== expected) {
    throw new SnapshotError("snapshot checksum mismatch");
  }

  const end = data.length - 8;
  let pos = MAGIC.length;
  const take = (n: number): Uint8Array => {
    if (pos + n > end) throw new SnapshotError("snapshot truncated");
    const chunk = data.subarray(pos, pos + n);
    pos += n;
    return chunk;
  };
  const takeU32 = (): number => {
    const chunk = take(4);
    return new DataView(chunk.buffer, chunk.byteOffset, 4).getUint32(0, true);
  };

  const storage = new MemoryStorage();
  STORES.forEach((name: StoreName, sid) => {
    if (take(1)[0] !== sid) {
      throw new SnapshotError(`snapshot store order broken at ${name}`);
    }
    const count = takeU32();
    for (let i = 0; i < count; i++) {
      const key = take(takeU32()).slice();
      const value = take(takeU32()).slice();
      storage.put(name, key, value);
    }
  });
  if (pos !== end) throw new SnapshotError("snapshot has trailing bytes");
  return storage;
}

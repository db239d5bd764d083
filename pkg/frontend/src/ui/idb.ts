// Persistence: one snapshot blob in IndexedDB, database "selfsearch-demo",
// object store "snapshots", key "latest". The engine itself never touches
// IndexedDB; whole-store snapshots keep its storage contract synchronous.

const DB_NAME = "selfsearch-demo";
const STORE = "snapshots";
const KEY = "latest";

function openDb(): Promise<IDBDatabase> {
  return new Promise((resolve, reject) => {
    const req = indexedDB.open(DB_NAME, 1);
    req.onupgradeneeded = () => {
      if (!req.result.objectStoreNames.contains(STORE)) {
        req.result.createObjectStore(STORE);
      }
    };
    req.onsuccess = () => resolve(req.result);
    req.onerror = () => reject(req.error);
  });
}

function requestDone<T>(req: IDBRequest<T>): Promise<T> {
  return new Promise((resolve, reject) => {
    req.onsuccess = () => resolve(req.result);
    req.onerror = () => reject(req.error);
  });
}

export async function saveSnapshot(bytes: Uint8Array): Promise<void> {
  const db = await openDb();
  try {
    const tx = db.transaction(STORE, "readwrite");
    await requestDone(tx.objectStore(STORE).put(bytes, KEY));
  } finally {
    db.close();
  }
}

export async function loadSnapshot(): Promise<Uint8Array | null> {
  const db = await openDb();
  try {
    const tx = db.transaction(STORE, "readonly");
    const result = await requestDone(tx.objectStore(STORE).get(KEY));
    if (result instanceof Uint8Array) return result;
    if (result instanceof ArrayBuffer) return new Uint8Array(result);
    return null;
  } finally {
    db.close();
  }
}

export async function clearSnapshot(): Promise<void> {
  const db = await openDb();
  try {
    const tx = db.transaction(STORE, "readwrite");
    await requestDone(tx.objectStore(STORE).delete(KEY));
  } finally {
    db.close();
  }
}

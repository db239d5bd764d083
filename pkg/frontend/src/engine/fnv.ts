export const FNV64_OFFSET = 0xcbf29ce484222325n;
const FNV64_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

/** 64-bit FNV-1a over `data`, continuing from hash state `h`. */
export function fnv1a64(data: Uint8Array, h: bigint = FNV64_OFFSET): bigint {
  for (let i = 0; i < data.length; i++) {
    h = ((h ^ BigInt(data[i])) * FNV64_PRIME) & MASK64;
  }
  return h;
}

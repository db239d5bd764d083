import { concatBytes } from "./bytes.js";
import { TokenizerOptions } from "./tokenizer.js";

// Key layout shared with the native engine: a term's postings occupy the
// contiguous key range term + 0x1F + zero-padded 10-digit docid, so byte
// order equals (term, docid) order. 0x1F never survives tokenization.
export const SEP = 0x1f;
export const DOCID_DIGITS = 10;
export const MAX_DOCID = 10 ** DOCID_DIGITS;

export const META_STATS_KEY = new TextEncoder().encode("stats");
export const META_READY_KEY = new TextEncoder().encode("ready");
export const META_TOKENIZER_KEY = new TextEncoder().encode("tokenizer");

export interface CollectionStats {
  docCount: number;
  totalTokens: number;
  uniqueTerms: number;
  totalPostings: number;
}

const encoder = new TextEncoder();
const decoder = new TextDecoder();

function docidDigits(docid: number): Uint8Array {
  return encoder.encode(String(docid).padStart(DOCID_DIGITS, "0"));
}

export function encodePostingKey(term: string, docid: number): Uint8Array {
  const termBytes = encoder.encode(term);
  if (termBytes.length === 0) throw new Error("term must be non-empty");
  for (const b of termBytes) {
    if (b < 0x20) throw new Error(`term contains control bytes: ${term}`);
  }
  if (!(docid >= 0 && docid < MAX_DOCID)) {
    throw new Error(`docid out of range: ${docid}`);
  }
  return concatBytes([termBytes, Uint8Array.of(SEP), docidDigits(docid)]);
}

export function termPrefix(term: string): Uint8Array {
  return concatBytes([encoder.encode(term), Uint8Array.of(SEP)]);
}

export function encodeDocKey(docid: number): Uint8Array {
  return docidDigits(docid);
}

// JSON.stringify and the native json.dumps(ensure_ascii=False,
// separators=(",",":")) agree byte for byte on string payloads: both
// escape only quote, backslash, and controls, with the same \uXXXX and
// short forms. Key order is fixed by construction.
export function encodeDocValue(externalId: string, text: string): Uint8Array {
  return encoder.encode(JSON.stringify({ id: externalId, text }));
}

export function decodeDocValue(raw: Uint8Array): { id: string; text: string } {
  const obj = JSON.parse(decoder.decode(raw));
  return { id: obj.id, text: obj.text };
}

export function statsToJson(stats: CollectionStats): Uint8Array {
  return encoder.encode(
    `{"doc_count":${stats.docCount},"total_postings":${stats.totalPostings},` +
      `"total_tokens":${stats.totalTokens},"unique_terms":${stats.uniqueTerms}}`,
  );
}

export function statsFromJson(raw: Uint8Array): CollectionStats {
  const obj = JSON.parse(decoder.decode(raw));
  return {
    docCount: obj.doc_count,
    totalTokens: obj.total_tokens,
    uniqueTerms: obj.unique_terms,
    totalPostings: obj.total_postings,
  };
}

export function tokenizerOptionsToJson(options: TokenizerOptions): Uint8Array {
  return encoder.encode(
    `{"lowercase":${options.lowercase},"max_token_bytes":${options.maxTokenBytes}}`,
  );
}

export function tokenizerOptionsFromJson(raw: Uint8Array): TokenizerOptions {
  const obj = JSON.parse(decoder.decode(raw));
  return { lowercase: obj.lowercase, maxTokenBytes: obj.max_token_bytes };
}

export function asciiInt(raw: Uint8Array): number {
  return parseInt(decoder.decode(raw), 10);
}

export function asciiOfInt(n: number): Uint8Array {
  return encoder.encode(String(n));
}

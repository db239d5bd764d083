export interface TokenizerOptions {
  lowercase: boolean;
  maxTokenBytes: number;
}

export const DEFAULT_OPTIONS: TokenizerOptions = {
  lowercase: false,
  maxTokenBytes: 64,
};

// The native engine splits with Python's str.split(), whose whitespace set
// differs from JS \s on both sides: it includes U+001C..U+001F and
// U+0085, and it does not include U+FEFF. Verified codepoint by codepoint
// against the native tokenizer.
export const WHITESPACE_CLASS =
  "[\t\n\u000B\f\r\u001C-\u001F \u0085\u00A0\u1680\u2000-\u200A\u2028\u2029\u202F\u205F\u3000]";

const WHITESPACE = new RegExp(WHITESPACE_CLASS + "+");

// Characters below U+0020 are stripped from tokens after splitting.
const CONTROLS = new RegExp("[\u0000-\u001F]", "g");

const encoder = new TextEncoder();
const decoder = new TextDecoder();

/** First maxBytes of the token's UTF-8, dropping a trailing partial char. */
export function truncateUtf8(bytes: Uint8Array, maxBytes: number): string {
  let end = maxBytes;
  while (end > 0 && (bytes[end] & 0xc0) === 0x80) end--;
  return decoder.decode(bytes.subarray(0, end));
}

export class Tokenizer {
  truncated = 0;

  constructor(readonly options: TokenizerOptions = DEFAULT_OPTIONS) {}

  tokenize(text: string): string[] {
    const opts = this.options;
    const out: string[] = [];
    for (let raw of text.split(WHITESPACE)) {
      if (opts.lowercase) raw = raw.toLowerCase();
      raw = raw.replace(CONTROLS, "");
      if (!raw) continue;
      const encoded = encoder.encode(raw);
      if (encoded.length > opts.maxTokenBytes) {
        raw = truncateUtf8(encoded, opts.maxTokenBytes);
        this.truncated++;
        if (!raw) continue;
      }
      out.push(raw);
    }
    return out;
  }
}

export function tokenize(text: string, options?: TokenizerOptions): string[] {
  return new Tokenizer(options ?? DEFAULT_OPTIONS).tokenize(text);
}

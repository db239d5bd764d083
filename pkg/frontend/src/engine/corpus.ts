import { DocumentInput } from "./indexer.js";
import { WHITESPACE_CLASS } from "./tokenizer.js";

export interface ParsedCorpus {
  documents: DocumentInput[];
  skippedLines: number;
}

// Trim with the tokenizer's whitespace set so "blank line" means the same
// thing in both implementations.
const EDGE_WHITESPACE = new RegExp(
  "^" + WHITESPACE_CLASS + "+|" + WHITESPACE_CLASS + "+$",
  "g",
);

/**
 * JSON-lines corpus: one {"id", "text"} object per line. Blank lines are
 * ignored; malformed lines (bad JSON, missing or non-string fields) are
 * counted and skipped.
 */
export function parseJsonl(text: string): ParsedCorpus {
  const documents: DocumentInput[] = [];
  let skippedLines = 0;
  for (const rawLine of text.split("\n")) {
    const line = rawLine.replace(EDGE_WHITESPACE, "");
    if (!line) continue;
    let id: unknown;
    let docText: unknown;
    try {
      const obj = JSON.parse(line);
      id = obj.id;
      docText = obj.text;
    } catch {
      skippedLines++;
      continue;
    }
    if (typeof id !== "string" || typeof docText !== "string") {
      skippedLines++;
      continue;
    }
    documents.push({ id, text: docText });
  }
  return { documents, skippedLines };
}

/** Query file: `qid<TAB>query text` lines, `#` comments allowed. */
export function parseQueryFile(text: string): Array<{ qid: string; text: string }> {
  const queries: Array<{ qid: string; text: string }> = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.replace(/\r$/, "");
    if (!line.trim() || line.trimStart().startsWith("#")) continue;
    const tab = line.indexOf("\t");
    if (tab <= 0) throw new Error(`expected 'qid<TAB>query text': ${line}`);
    queries.push({ qid: line.slice(0, tab).trim(), text: line.slice(tab + 1) });
  }
  return queries;
}

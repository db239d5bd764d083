import { parseJsonl } from "../engine/corpus.js";
import { IndexBuild } from "../engine/indexer.js";
import { CollectionStats } from "../engine/keys.js";
import { EngineResponse, Searcher } from "../engine/search.js";
import { exportSnapshot, importSnapshot, SnapshotError } from "../engine/snapshot.js";
import { MemoryStorage } from "../engine/store.js";
import { clearSnapshot, loadSnapshot, saveSnapshot } from "./idb.js";

const INGEST_CHUNK = 500;
const EXCERPT_CHARS = 140;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const banner = $<HTMLDivElement>("banner");
const statsPanel = $<HTMLDivElement>("stats");
const corpusText = $<HTMLTextAreaElement>("corpus-text");
const loadSampleBtn = $<HTMLButtonElement>("load-sample");
const ingestBtn = $<HTMLButtonElement>("ingest");
const progress = $<HTMLParagraphElement>("progress");
const queryInput = $<HTMLInputElement>("query");
const kSlider = $<HTMLInputElement>("k");
const kValue = $<HTMLSpanElement>("k-value");
const searchBtn = $<HTMLButtonElement>("search");
const searchForm = $<HTMLFormElement>("search-form");
const latencyBadge = $<HTMLSpanElement>("latency");
const resultsList = $<HTMLOListElement>("results");
const resultsNote = $<HTMLParagraphElement>("results-note");
const historyList = $<HTMLUListElement>("history");

let searcher: Searcher | null = null;
let ingesting = false;

function showBanner(message: string, kind: "warn" | "info" = "warn"): void {
  banner.textContent = message;
  banner.className = kind;
  banner.hidden = false;
}

function hideBanner(): void {
  banner.hidden = true;
}

function renderStats(stats: CollectionStats | null): void {
  if (!stats) {
    statsPanel.textContent = "No index yet. Ingest a corpus to get started.";
    return;
  }
  statsPanel.innerHTML = "";
  const rows: Array<[string, number]> = [
    ["documents", stats.docCount],
    ["tokens", stats.totalTokens],
    ["unique terms", stats.uniqueTerms],
    ["postings", stats.totalPostings],
  ];
  for (const [label, value] of rows) {
    const div = document.createElement("div");
    div.className = "stat";
    const num = document.createElement("strong");
    num.textContent = value.toLocaleString("en-US");
    div.append(num, ` ${label}`);
    statsPanel.append(div);
  }
}

function setSearchEnabled(enabled: boolean): void {
  queryInput.disabled = !enabled;
  searchBtn.disabled = !enabled;
}

function nextTick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

async function ingestText(text: string): Promise<void> {
  if (ingesting) return;
  if (!text.trim()) {
    showBanner("Nothing to ingest: the corpus box is empty.", "info");
    return;
  }
  const { documents, skippedLines } = parseJsonl(text);
  if (documents.length === 0) {
    showBanner(
      `No usable documents found (${skippedLines} malformed line(s)).`,
      "warn",
    );
    return;
  }
  ingesting = true;
  setSearchEnabled(false);
  ingestBtn.disabled = true;
  hideBanner();
  try {
    const storage = new MemoryStorage();
    const build = new IndexBuild(storage);
    for (let at = 0; at < documents.length; at += INGEST_CHUNK) {
      const chunk = documents.slice(at, at + INGEST_CHUNK);
      for (const doc of chunk) build.addDocument(doc);
      progress.textContent = `indexed ${Math.min(at + INGEST_CHUNK, documents.length)} / ${documents.length} documents`;
      await nextTick();
    }
    const stats = build.finalize();
    searcher = new Searcher(storage);
    renderStats(stats);
    progress.textContent =
      `done: ${documents.length} documents` +
      (skippedLines ? `, ${skippedLines} malformed line(s) skipped` : "") +
      (build.tokenizer.truncated ? `, ${build.tokenizer.truncated} token(s) truncated` : "");
    await saveSnapshot(exportSnapshot(storage));
  } catch (err) {
    progress.textContent = "";
    showBanner(`Ingestion failed: ${err instanceof Error ? err.message : err}`);
  } finally {
    ingesting = false;
    ingestBtn.disabled = false;
    setSearchEnabled(searcher !== null);
  }
}

function renderResults(response: EngineResponse): void {
  resultsList.innerHTML = "";
  latencyBadge.textContent = `${response.latencyMs.toFixed(3)} ms`;
  latencyBadge.hidden = false;
  if (response.results.length === 0) {
    resultsNote.textContent =
      response.termsSkipped > 0
        ? "No results. The first query term is not in the index."
        : "No results.";
    return;
  }
  resultsNote.textContent = "";
  for (const r of response.results) {
    const li = document.createElement("li");
    const head = document.createElement("div");
    head.className = "result-head";
    const idSpan = document.createElement("span");
    idSpan.className = "result-id";
    idSpan.textContent = r.externalId;
    const scoreSpan = document.createElement("span");
    scoreSpan.className = "result-score";
    scoreSpan.textContent = r.score.toFixed(6);
    head.append(idSpan, scoreSpan);
    const excerpt = document.createElement("p");
    excerpt.className = "result-excerpt";
    const doc = searcher?.getDocument(r.docid);
    excerpt.textContent = doc ? doc.text.slice(0, EXCERPT_CHARS) : "";
    li.append(head, excerpt);
    resultsList.append(li);
  }
}

function addHistoryEntry(query: string, k: number, response: EngineResponse): void {
  const li = document.createElement("li");
  li.textContent =
    `${query}  (k=${k}, ${response.results.length} hit(s), ` +
    `${response.latencyMs.toFixed(3)} ms)`;
  li.title = "click to run again";
  li.addEventListener("click", () => {
    queryInput.value = query;
    runSearch();
  });
  historyList.prepend(li);
}

function runSearch(): void {
  if (ingesting) return;
  if (!searcher) {
    showBanner("Ingest a corpus before searching.", "info");
    return;
  }
  const query = queryInput.value;
  if (!query.trim()) {
    resultsNote.textContent = "Type a query first.";
    return;
  }
  hideBanner();
  const k = parseInt(kSlider.value, 10);
  const response = searcher.search(query, k);
  renderResults(response);
  addHistoryEntry(query, k, response);
}

async function init(): Promise<void> {
  kValue.textContent = kSlider.value;
  kSlider.addEventListener("input", () => {
    kValue.textContent = kSlider.value;
  });
  searchForm.addEventListener("submit", (ev) => {
    ev.preventDefault();
    runSearch();
  });
  ingestBtn.addEventListener("click", () => {
    void ingestText(corpusText.value);
  });
  loadSampleBtn.addEventListener("click", async () => {
    loadSampleBtn.disabled = true;
    try {
      const resp = await fetch("./sample/corpus-1k.jsonl");
      if (!resp.ok) throw new Error(`HTTP ${resp.status}`);
      corpusText.value = await resp.text();
      showBanner("Sample corpus loaded into the box. Hit Ingest.", "info");
    } catch (err) {
      showBanner(`Could not fetch the bundled sample: ${err}`);
    } finally {
      loadSampleBtn.disabled = false;
    }
  });

  setSearchEnabled(false);
  renderStats(null);
  try {
    const stored = await loadSnapshot();
    if (stored) {
      const storage = importSnapshot(stored);
      searcher = new Searcher(storage);
      renderStats(searcher.stats);
      setSearchEnabled(true);
      progress.textContent = "index restored from browser storage";
    }
  } catch (err) {
    if (err instanceof SnapshotError) {
      showBanner(
        "Stored index snapshot was corrupt; starting with an empty index.",
      );
      await clearSnapshot();
    } else {
      showBanner(`Could not restore stored index: ${err}`);
    }
  }
}

void init();

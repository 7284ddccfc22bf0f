// Session history: an append-only list of (request, response) pairs.
// Entries are deep-copied on the way in so later form edits can't
// mutate what was recorded, and replaying an entry re-sends the stored
// request exactly as it went out the first time.

import type { AnalyzeRequest, AnalyzeResponse } from "./types.js";

export interface HistoryEntry {
  id: number;
  request: AnalyzeRequest;
  response: AnalyzeResponse;
}

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export class History {
  private entries: HistoryEntry[] = [];
  private nextId = 1;

  add(request: AnalyzeRequest, response: AnalyzeResponse): HistoryEntry {
    const entry: HistoryEntry = {
      id: this.nextId++,
      request: clone(request),
      response: clone(response),
    };
    this.entries.push(entry);
    return entry;
  }

  list(): readonly HistoryEntry[] {
    return this.entries;
  }

  get(id: number): HistoryEntry | undefined {
    return this.entries.find((e) => e.id === id);
  }

  get length(): number {
    return this.entries.length;
  }
}

/** Structural equality over JSON-shaped values (the replay check). */
export function deepEqual(a: unknown, b: unknown): boolean {
  if (a === b) return true;
  if (typeof a !== typeof b) return false;
  if (a === null || b === null) return false;
  if (Array.isArray(a) || Array.isArray(b)) {
    if (!Array.isArray(a) || !Array.isArray(b) || a.length !== b.length) return false;
    return a.every((item, i) => deepEqual(item, b[i]));
  }
  if (typeof a === "object") {
    const ka = Object.keys(a as object).sort();
    const kb = Object.keys(b as object).sort();
    if (ka.length !== kb.length || ka.some((k, i) => k !== kb[i])) return false;
    return ka.every((k) =>
      deepEqual((a as Record<string, unknown>)[k], (b as Record<string, unknown>)[k])
    );
  }
  return false;
}

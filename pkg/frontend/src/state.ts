/** Deep-linkable view state: everything the UI shows is reconstructible from the URL. */

import type { LexemeRef } from "./types.js";

export interface ViewState {
  /** language filter for the lemma search box */
  lang: string;
  /** current contents of the lemma search box */
  lemmaQuery: string;
  /** selected word sense, if any */
  sense: LexemeRef | null;
  /** "" = store default, otherwise "freq" | "logdice" */
  measure: string;
  /** filler rows requested per slot; null = store default */
  top: number | null;
  /** role → filler rows currently shown (after "more" clicks) */
  slotPages: Record<string, number>;
  /** counterpart comparison, if open */
  pair: { left: LexemeRef; right: LexemeRef } | null;
}

export function emptyState(): ViewState {
  return {
    lang: "",
    lemmaQuery: "",
    sense: null,
    measure: "",
    top: null,
    slotPages: {},
    pair: null,
  };
}

const enc = encodeURIComponent;
const dec = decodeURIComponent;

function packLexeme(lex: LexemeRef): string {
  // ':' is percent-encoded by encodeURIComponent, so it is a safe separator
  return `${enc(lex.lang)}:${enc(lex.lemma)}:${enc(lex.semclass)}`;
}

function unpackLexeme(text: string): LexemeRef | null {
  const parts = text.split(":");
  if (parts.length !== 3 || parts.some((p) => p === "")) return null;
  return { lang: dec(parts[0]), lemma: dec(parts[1]), semclass: dec(parts[2]) };
}

export function serializeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.lang) params.set("lang", state.lang);
  if (state.lemmaQuery) params.set("q", state.lemmaQuery);
  if (state.sense) params.set("sense", packLexeme(state.sense));
  if (state.measure) params.set("measure", state.measure);
  if (state.top !== null) params.set("top", String(state.top));
  const pages = Object.entries(state.slotPages).filter(([, n]) => n > 0);
  if (pages.length) {
    pages.sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
    params.set("more", pages.map(([role, n]) => `${enc(role)}:${n}`).join(","));
  }
  if (state.pair) {
    // '/' is percent-encoded inside segments, so it separates the two sides
    params.set("pair", `${packLexeme(state.pair.left)}/${packLexeme(state.pair.right)}`);
  }
  return params.toString();
}

export function parseViewState(search: string): ViewState {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const state = emptyState();
  state.lang = params.get("lang") ?? "";
  state.lemmaQuery = params.get("q") ?? "";
  const sense = params.get("sense");
  if (sense) state.sense = unpackLexeme(sense);
  state.measure = params.get("measure") ?? "";
  const top = params.get("top");
  if (top !== null && /^[1-9][0-9]*$/.test(top)) state.top = Number(top);
  const more = params.get("more");
  if (more) {
    for (const item of more.split(",")) {
      const cut = item.lastIndexOf(":");
      if (cut <= 0) continue;
      const count = Number(item.slice(cut + 1));
      if (Number.isInteger(count) && count > 0) state.slotPages[dec(item.slice(0, cut))] = count;
    }
  }
  const pair = params.get("pair");
  if (pair) {
    const sides = pair.split("/");
    if (sides.length === 2) {
      const left = unpackLexeme(sides[0]);
      const right = unpackLexeme(sides[1]);
      if (left && right) state.pair = { left, right };
    }
  }
  return state;
}

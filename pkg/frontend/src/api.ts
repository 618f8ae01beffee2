/** Thin GET-only client for the documented /v1 endpoints. */

import type {
  LexemeListJson,
  LexemeRef,
  PairDiffJson,
  PairJson,
  SketchJson,
  SlotPageJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(public readonly status: number, public readonly code: string) {
    super(`${code} (HTTP ${status})`);
  }
}

export interface SketchQuery {
  top?: number;
  measure?: string;
}

export interface SlotPageQuery extends SketchQuery {
  offset?: number;
  limit?: number;
}

type FetchLike = (url: string) => Promise<Response>;

const seg = encodeURIComponent;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params?: Record<string, string | number | undefined>): Promise<T> {
    let url = this.baseUrl.replace(/\/$/, "") + path;
    if (params) {
      const query = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) {
        if (value !== undefined && value !== "") query.set(key, String(value));
      }
      const text = query.toString();
      if (text) url += "?" + text;
    }
    const response = await this.fetchFn(url);
    if (!response.ok) {
      let code = "E_UNKNOWN";
      try {
        code = ((await response.json()) as { error?: string }).error ?? code;
      } catch {
        // non-JSON error body; keep the fallback code
      }
      throw new ApiError(response.status, code);
    }
    return (await response.json()) as T;
  }

  languages(): Promise<{ languages: string[] }> {
    return this.get("/v1/languages");
  }

  manifest(): Promise<Record<string, unknown>> {
    return this.get("/v1/manifest");
  }

  lexemes(lang?: string, prefix?: string, limit?: number): Promise<LexemeListJson> {
    return this.get("/v1/lexemes", { lang, prefix, limit });
  }

  sketch(lex: LexemeRef, query: SketchQuery = {}): Promise<SketchJson> {
    return this.get(`/v1/sketch/${seg(lex.lang)}/${seg(lex.lemma)}/${seg(lex.semclass)}`, {
      top: query.top,
      measure: query.measure,
    });
  }

  slotPage(lex: LexemeRef, role: string, query: SlotPageQuery = {}): Promise<SlotPageJson> {
    return this.get(
      `/v1/sketch/${seg(lex.lang)}/${seg(lex.lemma)}/${seg(lex.semclass)}/slot/${seg(role)}`,
      { offset: query.offset, limit: query.limit, measure: query.measure },
    );
  }

  pairs(semclass?: string): Promise<{ pairs: PairJson[] }> {
    return this.get("/v1/pairs", { semclass });
  }

  pairDiff(left: LexemeRef, right: LexemeRef): Promise<PairDiffJson> {
    return this.get(
      `/v1/pair/${seg(left.lang)}/${seg(left.lemma)}/${seg(left.semclass)}` +
        `/${seg(right.lang)}/${seg(right.lemma)}/${seg(right.semclass)}/diff`,
    );
  }
}

/** Wire types for the /v1 sketch API. Key order and names mirror the server schemas. */

export interface LexemeRef {
  lang: string;
  lemma: string;
  semclass: string;
}

export interface ExampleJson {
  sent_id: string;
  text: string | null;
  core_token: number;
  filler_token: number;
}

export interface FillerJson {
  lemma: string;
  semclass: string;
  count: number;
  score: number;
  flags: string[];
  examples: ExampleJson[];
}

export interface SlotJson {
  role: string;
  link_count: number;
  distinct_fillers: number;
  flags: string[];
  fillers: FillerJson[];
}

export interface SketchConfigJson {
  min_links: number;
  top_fillers: number;
  max_roles: number | null;
  measure: string;
  sparse_max_links: number;
  narrow_max_distinct: number;
  narrow_min_links: number;
}

export interface SketchJson {
  lexeme: LexemeRef;
  total_links: number;
  config: SketchConfigJson;
  slots: SlotJson[];
}

export interface SlotPageJson extends SlotJson {
  offset: number;
  limit: number;
  total: number;
}

export interface PairJson {
  semclass: string;
  left: LexemeRef;
  right: LexemeRef;
  affinity: number;
}

export interface RoleGapJson {
  role: string;
  side: "left" | "right";
  link_count: number;
}

export interface SharedRoleJson {
  role: string;
  class_overlap: number;
  left_only_classes: string[];
  right_only_classes: string[];
}

export interface DiffJson {
  role_gaps: RoleGapJson[];
  shared_roles: SharedRoleJson[];
  verdicts: string[];
}

export interface PairDiffJson {
  pair: PairJson;
  diff: DiffJson;
}

export interface LexemeListJson {
  lexemes: LexemeRef[];
  total: number;
}

export interface ApiErrorJson {
  error: string;
}

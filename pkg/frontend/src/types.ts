/** Wire types mirroring the service JSON API. */

export type Bbox = [number, number, number, number];

/** Node tags are "Var" | "Concept"; arcs are "i" | "g" | "a"; anything
 * else is an extension kind the editor shows but cannot create. */
export interface ElementJson {
  id: number;
  kind: string;
  name: string;
  bbox: Bbox | null;
  prev: number;
  next: number;
  description: string | null;
}

export interface Diagnostic {
  code: string;
  element_id: number | null;
  message: string;
  severity: "error" | "warning";
}

export interface DocumentSummary {
  doc_id: string;
  name: string;
  revision: number;
  element_count: number;
}

export interface TranslateResponse {
  plantuml: string;
  xmi: string;
  trace: unknown;
  warnings: Diagnostic[];
}

export interface ErrorBody {
  error: string;
  diagnostics: Diagnostic[];
}

export const NODE_KINDS = ["Var", "Concept"] as const;
export const ARC_KINDS = ["i", "g", "a"] as const;
export type ArcKind = (typeof ARC_KINDS)[number];

export function isNodeKind(kind: string): boolean {
  return kind === "Var" || kind === "Concept";
}

export function isArc(element: ElementJson): boolean {
  if (ARC_KINDS.includes(element.kind as ArcKind)) return true;
  if (isNodeKind(element.kind)) return false;
  return element.prev !== 0 || element.next !== 0;
}

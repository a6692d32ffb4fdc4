/** Editor state and actions.
 *
 * The store never computes a translation locally: the preview panes show
 * exactly what the service returned.  Because translation runs against
 * stored documents, the store mirrors the working copy into a sidecar
 * document (`<doc>.preview`) on every committed edit and translates
 * that; the user's document itself is only written by an explicit
 * save(), which uses the optimistic-concurrency contract (conditional
 * PUT on the last seen revision, 409 surfaces as a conflict prompt).
 *
 * Preview requests are latest-wins: a new edit aborts the in-flight
 * request and stale responses are dropped by sequence number.
 */

import { ApiClient, ApiError } from "./api";
import {
  makeArc,
  makeNode,
  moveElement,
  removeElement,
  updateElement,
  validateDiagram,
} from "./model";
import { Diagnostic, ElementJson } from "./types";

export type Tool = "select" | "add-var" | "add-concept" | "arc-i" | "arc-g" | "arc-a";

export interface Preview {
  plantuml: string;
  svg: string;
  warnings: Diagnostic[];
}

export interface EditorState {
  docId: string | null;
  /** Revision of the last successful load or save. */
  revision: number;
  name: string;
  elements: ElementJson[];
  selection: number | null;
  dirty: boolean;
  tool: Tool;
  diagnostics: Diagnostic[];
  preview: Preview | null;
  previewPending: boolean;
  conflict: boolean;
  /** Local working copy preserved when a conflict forces a reload. */
  conflictBackup: ElementJson[] | null;
  banner: string | null;
}

const PREVIEW_SUFFIX = ".preview";

function initialState(): EditorState {
  return {
    docId: null,
    revision: 0,
    name: "",
    elements: [],
    selection: null,
    dirty: false,
    tool: "select",
    diagnostics: [],
    preview: null,
    previewPending: false,
    conflict: false,
    conflictBackup: null,
    banner: null,
  };
}

export class EditorStore {
  readonly state: EditorState = initialState();
  private listeners = new Set<(state: EditorState) => void>();
  private previewAbort: AbortController | null = null;
  private previewSeq = 0;

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: (state: EditorState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  // -- document lifecycle ---------------------------------------------------

  async load(docId: string): Promise<void> {
    const loaded = await this.api.getDocument(docId);
    Object.assign(this.state, initialState(), {
      docId,
      name: docId,
      revision: loaded.revision,
      elements: loaded.elements,
    });
    this.emit();
    await this.refreshPreview();
  }

  async createNew(docId: string): Promise<void> {
    const summary = await this.api.putDocument(docId, [], { name: docId });
    Object.assign(this.state, initialState(), {
      docId,
      name: summary.name,
      revision: summary.revision,
      elements: [],
    });
    this.emit();
    await this.refreshPreview();
  }

  async save(): Promise<boolean> {
    if (!this.state.docId) return false;
    const findings = validateDiagram(this.state.elements);
    if (findings.length > 0) {
      this.state.diagnostics = findings;
      this.emit();
      return false;
    }
    try {
      const summary = await this.api.putDocument(this.state.docId, this.state.elements, {
        name: this.state.name,
        expectedRevision: this.state.revision > 0 ? this.state.revision : undefined,
      });
      this.state.revision = summary.revision;
      this.state.dirty = false;
      this.state.conflict = false;
      this.state.conflictBackup = null;
      this.state.banner = null;
      this.emit();
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state.conflict = true;
        this.state.conflictBackup = this.state.elements;
        this.emit();
        return false;
      }
      this.state.banner = "save failed: service unreachable";
      this.emit();
      return false;
    }
  }

  /** Conflict recovery: adopt the winning revision, keep the local copy
   * in conflictBackup for the analyst to reapply. */
  async reload(): Promise<void> {
    if (!this.state.docId) return;
    const loaded = await this.api.getDocument(this.state.docId);
    this.state.elements = loaded.elements;
    this.state.revision = loaded.revision;
    this.state.dirty = false;
    this.state.conflict = false;
    this.state.selection = null;
    this.state.diagnostics = [];
    this.emit();
    await this.refreshPreview();
  }

  dismissConflictBackup(): void {
    this.state.conflictBackup = null;
    this.emit();
  }

  // -- committed edits ------------------------------------------------------

  setTool(tool: Tool): void {
    this.state.tool = tool;
    this.emit();
  }

  select(id: number | null): void {
    this.state.selection = id;
    this.emit();
  }

  addNode(kind: "Var" | "Concept", x: number, y: number): number {
    const name = kind === "Var" ? `slot_${this.state.elements.length + 1}` : `value_${this.state.elements.length + 1}`;
    const node = makeNode(this.state.elements, kind, name, x, y);
    this.commit([...this.state.elements, node]);
    this.state.selection = node.id;
    this.emit();
    return node.id;
  }

  addArc(kind: "i" | "g" | "a", sourceId: number, targetId: number): number {
    const arc = makeArc(this.state.elements, kind, sourceId, targetId);
    this.commit([...this.state.elements, arc]);
    this.state.selection = arc.id;
    this.emit();
    return arc.id;
  }

  move(id: number, dx: number, dy: number): void {
    this.commit(moveElement(this.state.elements, id, dx, dy));
  }

  updateProperties(id: number, patch: { name?: string; description?: string | null }): void {
    this.commit(updateElement(this.state.elements, id, patch));
  }

  remove(id: number): void {
    if (this.state.selection === id) this.state.selection = null;
    this.commit(removeElement(this.state.elements, id));
  }

  private commit(elements: ElementJson[]): void {
    this.state.elements = elements;
    this.state.dirty = true;
    this.state.diagnostics = validateDiagram(elements);
    this.emit();
    if (this.state.diagnostics.length === 0) void this.refreshPreview();
  }

  // -- live preview ---------------------------------------------------------

  async refreshPreview(): Promise<void> {
    const { docId } = this.state;
    if (!docId) return;
    this.previewAbort?.abort();
    const controller = new AbortController();
    this.previewAbort = controller;
    const seq = ++this.previewSeq;
    this.state.previewPending = true;
    this.emit();
    try {
      const previewId = `${docId}${PREVIEW_SUFFIX}`;
      await this.api.putDocument(previewId, this.state.elements, { name: this.state.name });
      const translated = await this.api.translate(previewId, controller.signal);
      const svg = await this.api.render(previewId, controller.signal);
      if (seq !== this.previewSeq) return;
      this.state.preview = { plantuml: translated.plantuml, svg, warnings: translated.warnings };
      this.state.diagnostics = [];
      this.state.banner = null;
    } catch (error) {
      if (seq !== this.previewSeq) return;
      if (error instanceof ApiError && error.status === 422) {
        this.state.preview = null;
        this.state.diagnostics = error.diagnostics;
      } else if (!(error instanceof DOMException && error.name === "AbortError")) {
        this.state.banner = "preview failed: service unreachable";
      }
    } finally {
      if (seq === this.previewSeq) {
        this.state.previewPending = false;
        this.emit();
      }
    }
  }
}

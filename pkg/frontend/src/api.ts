/** Thin typed client for the document service. */

import { Diagnostic, DocumentSummary, ElementJson, ErrorBody, TranslateResponse } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly diagnostics: Diagnostic[] = [],
  ) {
    super(`${status} ${code}`);
  }
}

async function errorFrom(response: Response): Promise<ApiError> {
  let body: ErrorBody | null = null;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(response.status, body?.error ?? "UNKNOWN", body?.diagnostics ?? []);
}

export interface LoadedDocument {
  elements: ElementJson[];
  revision: number;
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) throw await errorFrom(response);
    return response;
  }

  async health(): Promise<boolean> {
    try {
      await this.request("/api/health");
      return true;
    } catch {
      return false;
    }
  }

  async listDocuments(): Promise<DocumentSummary[]> {
    const response = await this.request("/api/documents");
    return ((await response.json()) as { documents: DocumentSummary[] }).documents;
  }

  async getDocument(docId: string): Promise<LoadedDocument> {
    const response = await this.request(`/api/documents/${encodeURIComponent(docId)}?format=json`);
    return {
      elements: (await response.json()) as ElementJson[],
      revision: Number(response.headers.get("X-Revision") ?? "0"),
    };
  }

  async putDocument(
    docId: string,
    elements: ElementJson[],
    options: { name?: string; expectedRevision?: number } = {},
  ): Promise<DocumentSummary> {
    const query =
      options.expectedRevision === undefined ? "" : `?expected_revision=${options.expectedRevision}`;
    const body =
      options.name === undefined ? JSON.stringify(elements) : JSON.stringify({ name: options.name, elements });
    const response = await this.request(`/api/documents/${encodeURIComponent(docId)}${query}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body,
    });
    return (await response.json()) as DocumentSummary;
  }

  async translate(docId: string, signal?: AbortSignal): Promise<TranslateResponse> {
    const response = await this.request(`/api/documents/${encodeURIComponent(docId)}/translate`, {
      method: "POST",
      signal,
    });
    return (await response.json()) as TranslateResponse;
  }

  async render(docId: string, signal?: AbortSignal): Promise<string> {
    const response = await this.request(`/api/documents/${encodeURIComponent(docId)}/render`, {
      method: "POST",
      signal,
    });
    return response.text();
  }
}

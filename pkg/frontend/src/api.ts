/**
 * Typed client for the tutoring service. Every call maps 1:1 onto a
 * service route; the client adds no behaviour of its own, so the engine
 * stays the single authority on counts, grading, and phase order.
 */

export interface ItemView {
  id: string;
  source: string;
  block_place: string | null;
  index: number;
  number: number;
  places: string[];
}

export interface PracticeProgress {
  done: Record<string, number>;
  per_block: number;
}

export interface TestProgress {
  answered: number;
  total: number;
}

export type Progress = PracticeProgress | TestProgress | null;

export interface CreatedSession {
  session_id: string;
  session: { phase: string } & Record<string, unknown>;
}

export interface SessionView {
  session_id: string;
  phase: string;
  item: ItemView | null;
  session: Record<string, unknown>;
}

export interface NextView {
  session_id: string;
  phase: string;
  item: ItemView | null;
  progress: Progress;
}

export interface ClickAck {
  place: string;
  running_count: number;
  display: string;
}

export interface Verdict {
  outcome: "correct" | "retry";
  correct: boolean;
  narration_events: string[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface TutorApi {
  createSession(studentId: string): Promise<CreatedSession>;
  getSession(sessionId: string): Promise<SessionView>;
  next(sessionId: string, blockPlace?: string): Promise<NextView>;
  click(sessionId: string, place: string, blockPlace?: string): Promise<ClickAck>;
  answer(
    sessionId: string,
    counts: [string, number][],
    blockPlace?: string | null,
    submissionId?: string,
  ): Promise<Verdict>;
  satisfaction(sessionId: string, ratings: number[]): Promise<void>;
  advance(sessionId: string): Promise<string>;
  tableCsv(tableId: number): Promise<string>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const text = await resp.text();
  if (!resp.ok) {
    let code = "internal";
    let message = text || resp.statusText;
    let detail: unknown = null;
    try {
      const body = JSON.parse(text);
      code = body.code ?? code;
      message = body.message ?? message;
      detail = body.detail ?? null;
    } catch {
      // non-JSON error body, keep the raw text
    }
    throw new ApiError(resp.status, code, message, detail);
  }
  return (text ? JSON.parse(text) : undefined) as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export function createApi(baseUrl: string): TutorApi {
  const base = baseUrl.replace(/\/$/, "");
  return {
    createSession: (studentId) =>
      request<CreatedSession>(`${base}/sessions`, post({ student_id: studentId, cohort: "app" })),

    getSession: (sessionId) =>
      request<SessionView>(`${base}/sessions/${sessionId}`),

    next: (sessionId, blockPlace) => {
      const query = blockPlace ? `?block_place=${blockPlace}` : "";
      return request<NextView>(`${base}/sessions/${sessionId}/next${query}`);
    },

    click: (sessionId, place, blockPlace) =>
      request<ClickAck>(
        `${base}/sessions/${sessionId}/clicks`,
        post({ place, block_place: blockPlace ?? null }),
      ),

    answer: (sessionId, counts, blockPlace, submissionId) =>
      request<Verdict>(
        `${base}/sessions/${sessionId}/answer`,
        post({
          counts,
          block_place: blockPlace ?? null,
          ...(submissionId ? { submission_id: submissionId } : {}),
        }),
      ),

    satisfaction: async (sessionId, ratings) => {
      await request(`${base}/sessions/${sessionId}/satisfaction`, post({ ratings }));
    },

    advance: async (sessionId) => {
      const body = await request<{ phase: string }>(
        `${base}/sessions/${sessionId}/advance`,
        post({}),
      );
      return body.phase;
    },

    tableCsv: async (tableId) => {
      const resp = await fetch(`${base}/reports/table/${tableId}?format=csv`);
      if (!resp.ok) {
        throw new ApiError(resp.status, "missing_data", await resp.text());
      }
      return resp.text();
    },
  };
}

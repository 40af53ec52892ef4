/** Typed client for the generation service. */

import type {
  CheckpointInfo,
  GenerateRequestJson,
  GenerateResponseJson,
  RoomTypeInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(`${base}${path}`, init);
  if (!res.ok) {
    let detail = `HTTP ${res.status}`;
    try {
      const body = await res.json();
      if (body && body.detail) detail = String(body.detail);
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

export class StudioApi {
  constructor(private base: string = "") {}

  getRoomTypes(): Promise<RoomTypeInfo[]> {
    return request<RoomTypeInfo[]>(this.base, "/roomtypes");
  }

  getCheckpoints(): Promise<CheckpointInfo[]> {
    return request<CheckpointInfo[]>(this.base, "/checkpoints");
  }

  generate(body: GenerateRequestJson, signal?: AbortSignal): Promise<GenerateResponseJson> {
    return request<GenerateResponseJson>(this.base, "/generate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  }
}

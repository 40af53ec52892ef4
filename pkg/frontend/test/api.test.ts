import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, StudioApi } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("service client", () => {
  it("fetches room types", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, [{ code: 0, name: "living room", color: [1, 2, 3] }]));
    vi.stubGlobal("fetch", fetchMock);
    const types = await new StudioApi("http://svc").getRoomTypes();
    expect(fetchMock).toHaveBeenCalledWith("http://svc/roomtypes", undefined);
    expect(types[0].name).toBe("living room");
  });

  it("posts generate requests as JSON", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { checkpoint_id: "m", seed: 1, samples: [] }));
    vi.stubGlobal("fetch", fetchMock);
    const api = new StudioApi();
    const body = {
      diagram: { nodes: [{ id: 0, type: 2 }], edges: [] as [number, number][] },
      checkpoint_id: "m",
      num_samples: 4,
    };
    await api.generate(body);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/generate");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body).num_samples).toBe(4);
  });

  it("surfaces server error details with the status code", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(422, { detail: "pinned noise for nonexistent node '9'" })));
    const api = new StudioApi();
    const err = await api
      .generate({ diagram: { nodes: [], edges: [] }, checkpoint_id: "m" })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.message).toMatch(/nonexistent node/);
  });

  it("falls back to the HTTP status for non-JSON errors", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(new Response("boom", { status: 500 })));
    const err = await new StudioApi().getCheckpoints().catch((e) => e);
    expect(err.message).toBe("HTTP 500");
  });
});

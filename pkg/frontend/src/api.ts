// Thin client for the playback service's REST endpoints and frame feed.

import { FramePayload, SceneInfo, SessionInfo } from "./types.js";
import { ControlMessage } from "./playback.js";

export class ServiceClient {
  constructor(private readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`);
    if (!res.ok) {
      throw new Error(`GET ${path}: ${res.status}`);
    }
    return res.json() as Promise<T>;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) {
      throw new Error(`POST ${path}: ${res.status}`);
    }
    return res.json() as Promise<T>;
  }

  listScenes(): Promise<SceneInfo[]> {
    return this.get("/scenes");
  }

  sceneSummary(sceneId: string): Promise<Record<string, unknown>> {
    return this.get(`/scenes/${encodeURIComponent(sceneId)}/summary`);
  }

  framePayload(sceneId: string, frame: number, query = ""): Promise<FramePayload> {
    return this.get(`/scenes/${encodeURIComponent(sceneId)}/frames/${frame}${query}`);
  }

  createSession(sceneId: string): Promise<SessionInfo> {
    return this.post("/sessions", { scene_id: sceneId });
  }

  control(sessionId: string, message: ControlMessage): Promise<SessionInfo> {
    return this.post(`/sessions/${sessionId}/control`, message);
  }

  /**
   * Open the frame feed. Messages funnel through `onMessage`; the caller is
   * responsible for latest-wins coalescing.
   */
  openFeed(
    sessionId: string,
    query: string,
    onMessage: (payload: FramePayload) => void,
  ): WebSocket {
    const ws = new WebSocket(`${this.wsBase()}/sessions/${sessionId}/feed${query}`);
    ws.onmessage = (event) => {
      try {
        onMessage(JSON.parse(event.data as string) as FramePayload);
      } catch {
        // ignore malformed frames
      }
    };
    return ws;
  }

  private wsBase(): string {
    return this.baseUrl.replace(/^http/, "ws");
  }
}

/** Service URL from the ?service= query parameter, defaulting to the page origin. */
export function serviceUrlFromLocation(loc: Location): string {
  const params = new URLSearchParams(loc.search);
  return params.get("service") ?? loc.origin;
}

/** Overlay/highlight query string shared by the frame endpoint and the feed. */
export function overlayQuery(
  overlays: { emotion: boolean; socialization: boolean; collectivity: boolean },
  highlight: Record<number, string>,
): string {
  const toggles = Object.entries(overlays)
    .filter(([, on]) => on)
    .map(([name]) => name)
    .join(",");
  const marks = Object.entries(highlight)
    .map(([id, color]) => `${id}:${color}`)
    .join(",");
  const parts = [];
  if (toggles) {
    parts.push(`overlays=${toggles}`);
  }
  if (marks) {
    parts.push(`highlight=${marks}`);
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

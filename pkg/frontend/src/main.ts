// Browser entry point: wires the service client, viewer state machine,
// renderer and canvas painter to the page controls.

import { overlayQuery, ServiceClient, serviceUrlFromLocation } from "./api.js";
import { paint } from "./painter.js";
import {
  applyFeedMessage,
  initialViewerState,
  isStale,
  playbackControls,
  PlaybackAction,
  restartCamPos,
  switchCamera,
} from "./playback.js";
import { renderFrame } from "./renderer.js";
import { Bounds, CameraMode, FramePayload, SceneInfo, ViewerState } from "./types.js";

interface SummaryShape {
  scene: { frame_range: [number, number]; fps: number };
  pedestrians: { id: number; frames: { x: number; y: number }[] }[];
}

function boundsFromSummary(summary: SummaryShape): Bounds {
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const ped of summary.pedestrians) {
    for (const f of ped.frames) {
      minX = Math.min(minX, f.x);
      maxX = Math.max(maxX, f.x);
      minY = Math.min(minY, f.y);
      maxY = Math.max(maxY, f.y);
    }
  }
  return { minX, maxX, minY, maxY };
}

class ViewerApp {
  private state!: ViewerState;
  private latest: FramePayload | null = null;
  private feed: WebSocket | null = null;
  private readonly ctx: CanvasRenderingContext2D;

  constructor(
    private readonly client: ServiceClient,
    private readonly canvas: HTMLCanvasElement,
  ) {
    this.ctx = canvas.getContext("2d")!;
    requestAnimationFrame(() => this.tick());
  }

  async loadScene(sceneId: string): Promise<void> {
    this.feed?.close();
    const summary = (await this.client.sceneSummary(sceneId)) as unknown as SummaryShape;
    const session = await this.client.createSession(sceneId);
    this.state = initialViewerState({
      sceneId,
      sessionId: session.session_id,
      frameRange: session.frame_range,
      fps: session.fps,
      knownAgents: summary.pedestrians.map((p) => p.id),
      sceneBounds: boundsFromSummary(summary),
    });
    this.populateAgentSelect();
    this.openFeed();
    this.latest = await this.client.framePayload(
      sceneId, session.frame_range[0],
      overlayQuery(this.state.overlays, this.state.highlight));
    this.updateHud();
  }

  private openFeed(): void {
    this.feed?.close();
    if (!this.state.sessionId) {
      return;
    }
    const query = overlayQuery(this.state.overlays, this.state.highlight);
    this.feed = this.client.openFeed(this.state.sessionId, query, (payload) => {
      // latest-wins: stale frames are dropped, newer ones replace the queue
      if (!isStale(this.state, payload)) {
        this.state = applyFeedMessage(this.state, payload);
        this.latest = payload;
      }
      this.updateHud();
    });
  }

  private tick(): void {
    if (this.latest && this.state) {
      try {
        const commands = renderFrame(this.state, this.latest, {
          width: this.canvas.width,
          height: this.canvas.height,
        });
        paint(this.ctx, commands);
      } catch {
        this.latest = null; // stale frame dropped
      }
    }
    requestAnimationFrame(() => this.tick());
  }

  async control(action: PlaybackAction): Promise<void> {
    const { state, message } = playbackControls(this.state, action);
    this.state = state;
    if (this.state.sessionId) {
      await this.client.control(this.state.sessionId, message);
    }
    if (message.action === "seek" && this.state.playback.state !== "Playing") {
      this.latest = await this.client.framePayload(
        this.state.sceneId, this.state.playback.cursor,
        overlayQuery(this.state.overlays, this.state.highlight));
    }
    this.updateHud();
  }

  setCamera(mode: CameraMode, agent?: number): void {
    this.state = switchCamera(this.state, mode, agent);
  }

  restartCam(): void {
    this.state = restartCamPos(this.state);
  }

  setAvatarStyle(style: "Cylinder" | "Humanoid"): void {
    this.state = { ...this.state, avatarStyle: style };
  }

  setWalls(enabled: boolean): void {
    this.state = { ...this.state, wallsEnabled: enabled };
  }

  setOverlay(name: "emotion" | "socialization" | "collectivity", on: boolean): void {
    this.state = { ...this.state, overlays: { ...this.state.overlays, [name]: on } };
    this.openFeed(); // feed query carries the overlay toggles
  }

  private populateAgentSelect(): void {
    const select = document.getElementById("agent") as HTMLSelectElement;
    select.innerHTML = "";
    for (const id of this.state.knownAgents) {
      const opt = document.createElement("option");
      opt.value = String(id);
      opt.textContent = `agent ${id}`;
      select.appendChild(opt);
    }
  }

  private updateHud(): void {
    const hud = document.getElementById("hud");
    if (hud && this.state) {
      const p = this.state.playback;
      hud.textContent =
        `${this.state.sceneId}  frame ${p.cursor}/${this.state.frameRange[1]}  ` +
        `${p.state}  x${p.rate}`;
    }
    const slider = document.getElementById("seek") as HTMLInputElement | null;
    if (slider && this.state && document.activeElement !== slider) {
      slider.min = String(this.state.frameRange[0]);
      slider.max = String(this.state.frameRange[1]);
      slider.value = String(this.state.playback.cursor);
    }
  }
}

async function boot(): Promise<void> {
  const client = new ServiceClient(serviceUrlFromLocation(window.location));
  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const app = new ViewerApp(client, canvas);

  const scenes: SceneInfo[] = await client.listScenes();
  const sceneSelect = document.getElementById("scene") as HTMLSelectElement;
  for (const s of scenes) {
    const opt = document.createElement("option");
    opt.value = s.scene_id;
    opt.textContent = `${s.scene_id} (${s.pedestrian_count} peds, ${s.density_computed})`;
    sceneSelect.appendChild(opt);
  }

  const on = (id: string, event: string, fn: (e: Event) => void) =>
    document.getElementById(id)?.addEventListener(event, fn);

  on("change-scene", "click", () => void app.loadScene(sceneSelect.value));
  on("play", "click", () => void app.control({ type: "play" }));
  on("pause", "click", () => void app.control({ type: "pause" }));
  on("stop", "click", () => void app.control({ type: "stop" }));
  on("rewind", "click", () => void app.control({ type: "rewind" }));
  on("rate", "change", (e) =>
    void app.control({ type: "rate", rate: Number((e.target as HTMLSelectElement).value) }));
  on("seek", "change", (e) =>
    void app.control({ type: "seek", frame: Number((e.target as HTMLInputElement).value) }));
  on("cam-top", "click", () => app.setCamera("Top"));
  on("cam-oblique", "click", () => app.setCamera("Oblique"));
  on("cam-fp", "click", () => {
    const agent = Number((document.getElementById("agent") as HTMLSelectElement).value);
    app.setCamera("FirstPerson", agent);
  });
  on("restart-cam", "click", () => app.restartCam());
  on("avatar-style", "change", (e) =>
    app.setAvatarStyle((e.target as HTMLSelectElement).value as "Cylinder" | "Humanoid"));
  on("walls", "change", (e) => app.setWalls((e.target as HTMLInputElement).checked));
  for (const name of ["emotion", "socialization", "collectivity"] as const) {
    on(`overlay-${name}`, "change", (e) =>
      app.setOverlay(name, (e.target as HTMLInputElement).checked));
  }

  if (scenes.length) {
    await app.loadScene(scenes[0].scene_id);
  }
}

void boot();

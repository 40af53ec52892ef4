/**
 * Studio UI: bubble-diagram editor on a node-link canvas, variant gallery,
 * noise pinning, and incremental room addition against the HTTP service.
 *
 * Node positions on the editor canvas are presentation only; the diagram
 * that travels to the server is just typed nodes plus adjacency edges.
 */

import { ApiError, StudioApi } from "./api.js";
import { EditorSession } from "./session.js";
import { paletteFromRoomTypes, renderLayoutRgba, RenderPalette } from "./render.js";
import type { CheckpointInfo, GeneratedSample, RoomTypeInfo } from "./types.js";
import { groupOfCount } from "./types.js";

const STORAGE_KEY = "housegan-studio-session";
const EDITOR_SIZE = 420;
const CARD_RESOLUTION = 256;

interface Ui {
  editor: HTMLCanvasElement;
  chips: HTMLElement;
  status: HTMLElement;
  warning: HTMLElement;
  gallery: HTMLElement;
  checkpointSelect: HTMLSelectElement;
  sampleCount: HTMLInputElement;
  pinToggle: HTMLInputElement;
}

class StudioApp {
  private session = new EditorSession();
  private api = new StudioApi();
  private roomTypes: RoomTypeInfo[] = [];
  private palette: RenderPalette = { background: [255, 255, 255], colors: [] };
  private checkpoints: CheckpointInfo[] = [];
  private selectedNode: number | null = null;
  private inflight: AbortController | null = null;

  constructor(private ui: Ui) {}

  async start(): Promise<void> {
    this.roomTypes = await this.api.getRoomTypes();
    this.palette = paletteFromRoomTypes(this.roomTypes);
    this.checkpoints = await this.api.getCheckpoints();
    const stored = localStorage.getItem(STORAGE_KEY);
    if (stored) {
      try {
        this.session = EditorSession.deserialize(stored);
      } catch {
        localStorage.removeItem(STORAGE_KEY);
      }
    }
    this.buildChips();
    this.buildCheckpointSelect();
    this.ui.editor.addEventListener("click", (ev) => this.onEditorClick(ev));
    this.refresh();
  }

  private persist(): void {
    localStorage.setItem(STORAGE_KEY, this.session.serialize());
  }

  private buildChips(): void {
    this.ui.chips.replaceChildren();
    for (const entry of this.roomTypes) {
      const chip = document.createElement("button");
      chip.className = "chip";
      chip.style.background = `rgb(${entry.color.join(",")})`;
      chip.textContent = entry.name;
      chip.title = `add a ${entry.name} (or retype the selected room)`;
      chip.addEventListener("click", () => this.onChip(entry.code));
      this.ui.chips.appendChild(chip);
    }
  }

  private buildCheckpointSelect(): void {
    this.ui.checkpointSelect.replaceChildren();
    for (const ckpt of this.checkpoints) {
      const option = document.createElement("option");
      option.value = ckpt.id;
      option.textContent = `${ckpt.id} (${ckpt.variant}, held-out ${ckpt.train_group ?? "none"})`;
      this.ui.checkpointSelect.appendChild(option);
    }
    if (this.session.checkpointId) this.ui.checkpointSelect.value = this.session.checkpointId;
    this.ui.checkpointSelect.addEventListener("change", () => {
      this.session.checkpointId = this.ui.checkpointSelect.value;
      this.persist();
      this.refresh();
    });
  }

  private cancelInflight(): void {
    if (this.inflight) {
      this.inflight.abort();
      this.inflight = null;
      this.setStatus("generation cancelled by edit");
    }
  }

  private edit(action: () => void): void {
    this.cancelInflight();
    try {
      action();
      this.persist();
    } catch (err) {
      this.setStatus(String(err instanceof Error ? err.message : err));
    }
    this.refresh();
  }

  private onChip(code: number): void {
    this.edit(() => {
      if (this.selectedNode !== null) {
        this.session.setType(this.selectedNode, code);
      } else {
        this.session.addNode(code);
      }
    });
  }

  private nodePosition(id: number): [number, number] {
    const n = this.session.nodeCount;
    const angle = (2 * Math.PI * id) / Math.max(n, 1) - Math.PI / 2;
    const radius = EDITOR_SIZE * 0.38;
    return [EDITOR_SIZE / 2 + radius * Math.cos(angle), EDITOR_SIZE / 2 + radius * Math.sin(angle)];
  }

  private onEditorClick(ev: MouseEvent): void {
    const rect = this.ui.editor.getBoundingClientRect();
    const x = ev.clientX - rect.left;
    const y = ev.clientY - rect.top;
    let hit: number | null = null;
    for (let id = 0; id < this.session.nodeCount; id++) {
      const [nx, ny] = this.nodePosition(id);
      if ((nx - x) ** 2 + (ny - y) ** 2 <= 18 ** 2) hit = id;
    }
    if (hit === null) {
      this.selectedNode = null;
      this.refresh();
      return;
    }
    if (this.selectedNode === null || this.selectedNode === hit) {
      this.selectedNode = this.selectedNode === hit ? null : hit;
      this.refresh();
      return;
    }
    const from = this.selectedNode;
    this.selectedNode = null;
    this.edit(() => this.session.toggleEdge(from, hit!));
  }

  deleteSelected(): void {
    if (this.selectedNode === null) return;
    const victim = this.selectedNode;
    this.selectedNode = null;
    this.edit(() => this.session.deleteNode(victim));
  }

  undo(): void {
    this.edit(() => this.session.undo());
  }

  redo(): void {
    this.edit(() => this.session.redo());
  }

  exportDiagram(): void {
    const blob = new Blob([JSON.stringify(this.session.toDiagramJson(), null, 2)], {
      type: "application/json",
    });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "diagram.json";
    link.click();
    URL.revokeObjectURL(link.href);
  }

  importDiagram(text: string): void {
    this.edit(() => this.session.loadDiagramJson(JSON.parse(text)));
  }

  async generate(): Promise<void> {
    if (!this.session.canGenerate()) {
      this.setStatus("draw at least one room first");
      return;
    }
    const checkpointId = this.ui.checkpointSelect.value;
    if (!checkpointId) {
      this.setStatus("no checkpoint available on the server");
      return;
    }
    this.cancelInflight();
    const controller = new AbortController();
    this.inflight = controller;
    const request = {
      diagram: this.session.toDiagramJson(),
      checkpoint_id: checkpointId,
      num_samples: Math.max(1, Number(this.ui.sampleCount.value) || 10),
      pinned_noise: this.ui.pinToggle.checked ? this.session.pinned() : null,
    };
    this.setStatus("generating…");
    try {
      const response = await this.api.generate(request, controller.signal);
      this.session.checkpointId = checkpointId;
      this.session.recordGeneration(request, response);
      this.persist();
      this.renderGallery(response.samples);
      this.setStatus(`seed ${response.seed}: ${response.samples.length} variation(s)`);
    } catch (err) {
      if (controller.signal.aborted) return;
      this.setStatus(err instanceof ApiError ? `server: ${err.message}` : String(err));
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  pinFromSample(sample: GeneratedSample): void {
    this.edit(() => this.session.pinNoise(sample.noise));
    this.ui.pinToggle.checked = true;
    this.setStatus("noise pinned; regenerate to reuse it or add rooms to grow the plan");
  }

  private renderGallery(samples: GeneratedSample[]): void {
    this.ui.gallery.replaceChildren();
    samples.forEach((sample, index) => {
      const card = document.createElement("div");
      card.className = "card";
      const canvas = document.createElement("canvas");
      canvas.width = CARD_RESOLUTION;
      canvas.height = CARD_RESOLUTION;
      const ctx = canvas.getContext("2d")!;
      const rgba = renderLayoutRgba(sample.layout, this.palette, CARD_RESOLUTION);
      ctx.putImageData(new ImageData(rgba, CARD_RESOLUTION, CARD_RESOLUTION), 0, 0);
      const badge = document.createElement("div");
      badge.className = "badge" + (sample.compatibility.distance === 0 ? " good" : "");
      badge.textContent =
        `compatibility ${sample.compatibility.distance}` +
        (sample.compatibility.exact ? "" : " (bound)") +
        (sample.compatibility.degenerate_rooms ? `, ${sample.compatibility.degenerate_rooms} empty` : "");
      const pin = document.createElement("button");
      pin.textContent = `pin noise #${index + 1}`;
      pin.addEventListener("click", () => this.pinFromSample(sample));
      card.append(canvas, badge, pin);
      this.ui.gallery.appendChild(card);
    });
  }

  private setStatus(text: string): void {
    this.ui.status.textContent = text;
  }

  private refreshWarning(): void {
    const ckpt = this.checkpoints.find((c) => c.id === this.ui.checkpointSelect.value);
    const group = groupOfCount(this.session.nodeCount);
    if (ckpt && ckpt.train_group === group && this.session.nodeCount > 0) {
      this.ui.warning.textContent =
        `note: ${this.session.nodeCount} rooms falls in this model's held-out group ` +
        `(${group}); that is the generalization setting, not an error`;
    } else {
      this.ui.warning.textContent = "";
    }
  }

  private refresh(): void {
    this.refreshWarning();
    const ctx = this.ui.editor.getContext("2d")!;
    ctx.clearRect(0, 0, EDITOR_SIZE, EDITOR_SIZE);
    ctx.fillStyle = "#fafafa";
    ctx.fillRect(0, 0, EDITOR_SIZE, EDITOR_SIZE);
    ctx.strokeStyle = "#666";
    ctx.lineWidth = 2;
    for (const [a, b] of this.session.edgeList()) {
      const [ax, ay] = this.nodePosition(a);
      const [bx, by] = this.nodePosition(b);
      ctx.beginPath();
      ctx.moveTo(ax, ay);
      ctx.lineTo(bx, by);
      ctx.stroke();
    }
    for (let id = 0; id < this.session.nodeCount; id++) {
      const [x, y] = this.nodePosition(id);
      const color = this.palette.colors[this.session.nodeType(id)] ?? [200, 200, 200];
      ctx.beginPath();
      ctx.arc(x, y, 16, 0, 2 * Math.PI);
      ctx.fillStyle = `rgb(${color.join(",")})`;
      ctx.fill();
      ctx.lineWidth = id === this.selectedNode ? 4 : 1.5;
      ctx.strokeStyle = id === this.selectedNode ? "#111" : "#555";
      ctx.stroke();
      ctx.fillStyle = "#111";
      ctx.font = "11px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(String(id), x, y + 4);
    }
  }
}

export function boot(): void {
  const byId = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;
  const app = new StudioApp({
    editor: byId<HTMLCanvasElement>("editor"),
    chips: byId("chips"),
    status: byId("status"),
    warning: byId("warning"),
    gallery: byId("gallery"),
    checkpointSelect: byId<HTMLSelectElement>("checkpoint"),
    sampleCount: byId<HTMLInputElement>("samples"),
    pinToggle: byId<HTMLInputElement>("pin"),
  });
  byId("delete").addEventListener("click", () => app.deleteSelected());
  byId("undo").addEventListener("click", () => app.undo());
  byId("redo").addEventListener("click", () => app.redo());
  byId("generate").addEventListener("click", () => void app.generate());
  byId("export").addEventListener("click", () => app.exportDiagram());
  byId<HTMLInputElement>("import").addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) app.importDiagram(await file.text());
  });
  void app.start();
}

boot();

/**
 * Editor session state: the working bubble diagram, pinned noise records,
 * a gallery of generation results, and undo/redo history.
 *
 * Diagram invariants maintained by every edit: node ids contiguous from 0,
 * no self-loops, edges always reference existing nodes, at most 40 rooms.
 * Deleting a node recompacts the ids above it; pinned noise follows its
 * room (and the deleted room's noise is dropped).
 */

import type {
  DiagramJson,
  GenerateRequestJson,
  GenerateResponseJson,
  NoiseRecord,
} from "./types.js";
import { MAX_ROOMS } from "./types.js";

export interface SessionSnapshot {
  nodeTypes: number[];
  edges: [number, number][];
  pinnedNoise: NoiseRecord;
}

export interface GalleryEntry {
  request: GenerateRequestJson;
  response: GenerateResponseJson;
}

function edgeKey(a: number, b: number): string {
  return a < b ? `${a}-${b}` : `${b}-${a}`;
}

export class EditorSession {
  private nodeTypes: number[] = [];
  private edges = new Map<string, [number, number]>();
  private pinnedNoise: NoiseRecord = {};
  private undoStack: SessionSnapshot[] = [];
  private redoStack: SessionSnapshot[] = [];
  gallery: GalleryEntry[] = [];
  checkpointId: string | null = null;

  get nodeCount(): number {
    return this.nodeTypes.length;
  }

  nodeType(id: number): number {
    this.assertNode(id);
    return this.nodeTypes[id];
  }

  edgeList(): [number, number][] {
    return [...this.edges.values()].sort((x, y) => x[0] - y[0] || x[1] - y[1]);
  }

  hasEdge(a: number, b: number): boolean {
    return this.edges.has(edgeKey(a, b));
  }

  pinned(): NoiseRecord {
    return { ...this.pinnedNoise };
  }

  /** True when the diagram is a valid generation input. */
  canGenerate(): boolean {
    return this.nodeCount >= 1 && this.nodeCount <= MAX_ROOMS;
  }

  private assertNode(id: number): void {
    if (!Number.isInteger(id) || id < 0 || id >= this.nodeCount) {
      throw new Error(`no such node ${id}`);
    }
  }

  private snapshot(): SessionSnapshot {
    return {
      nodeTypes: [...this.nodeTypes],
      edges: this.edgeList(),
      pinnedNoise: JSON.parse(JSON.stringify(this.pinnedNoise)),
    };
  }

  private restore(snap: SessionSnapshot): void {
    this.nodeTypes = [...snap.nodeTypes];
    this.edges = new Map(snap.edges.map(([a, b]) => [edgeKey(a, b), [Math.min(a, b), Math.max(a, b)]]));
    this.pinnedNoise = JSON.parse(JSON.stringify(snap.pinnedNoise));
  }

  private commit(mutate: () => void): void {
    const before = this.snapshot();
    mutate();
    this.undoStack.push(before);
    this.redoStack = [];
  }

  addNode(type: number): number {
    if (this.nodeCount >= MAX_ROOMS) {
      throw new Error(`cannot add a room beyond the ${MAX_ROOMS}-room cap`);
    }
    if (!Number.isInteger(type) || type < 0 || type > 9) {
      throw new Error(`bad room type ${type}`);
    }
    let id = -1;
    this.commit(() => {
      this.nodeTypes.push(type);
      id = this.nodeCount - 1;
    });
    return id;
  }

  deleteNode(id: number): void {
    this.assertNode(id);
    this.commit(() => {
      this.nodeTypes.splice(id, 1);
      const remapped = new Map<string, [number, number]>();
      for (const [a, b] of this.edges.values()) {
        if (a === id || b === id) continue;
        const na = a > id ? a - 1 : a;
        const nb = b > id ? b - 1 : b;
        remapped.set(edgeKey(na, nb), [Math.min(na, nb), Math.max(na, nb)]);
      }
      this.edges = remapped;
      const noise: NoiseRecord = {};
      for (const [key, vec] of Object.entries(this.pinnedNoise)) {
        const node = Number(key);
        if (node === id) continue; // the deleted room's noise goes with it
        noise[String(node > id ? node - 1 : node)] = vec;
      }
      this.pinnedNoise = noise;
    });
  }

  toggleEdge(a: number, b: number): void {
    this.assertNode(a);
    this.assertNode(b);
    if (a === b) throw new Error("self-loops are not allowed");
    this.commit(() => {
      const key = edgeKey(a, b);
      if (this.edges.has(key)) this.edges.delete(key);
      else this.edges.set(key, [Math.min(a, b), Math.max(a, b)]);
    });
  }

  setType(id: number, type: number): void {
    this.assertNode(id);
    if (!Number.isInteger(type) || type < 0 || type > 9) {
      throw new Error(`bad room type ${type}`);
    }
    this.commit(() => {
      this.nodeTypes[id] = type;
    });
  }

  pinNoise(record: NoiseRecord): void {
    for (const key of Object.keys(record)) {
      if (key === "*") continue;
      const node = Number(key);
      if (!Number.isInteger(node) || node < 0 || node >= this.nodeCount) {
        throw new Error(`cannot pin noise for nonexistent node ${key}`);
      }
    }
    this.commit(() => {
      this.pinnedNoise = JSON.parse(JSON.stringify(record));
    });
  }

  clearPinnedNoise(): void {
    this.commit(() => {
      this.pinnedNoise = {};
    });
  }

  canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  canRedo(): boolean {
    return this.redoStack.length > 0;
  }

  undo(): void {
    const snap = this.undoStack.pop();
    if (!snap) return;
    this.redoStack.push(this.snapshot());
    this.restore(snap);
  }

  redo(): void {
    const snap = this.redoStack.pop();
    if (!snap) return;
    this.undoStack.push(this.snapshot());
    this.restore(snap);
  }

  recordGeneration(request: GenerateRequestJson, response: GenerateResponseJson): void {
    this.gallery.push({ request, response });
  }

  /** The standard diagram JSON (also the export/import format). */
  toDiagramJson(): DiagramJson {
    return {
      nodes: this.nodeTypes.map((type, id) => ({ id, type })),
      edges: this.edgeList(),
    };
  }

  loadDiagramJson(data: DiagramJson): void {
    const ids = data.nodes.map((n) => n.id).sort((a, b) => a - b);
    if (ids.length > MAX_ROOMS) throw new Error(`more than ${MAX_ROOMS} rooms`);
    ids.forEach((id, index) => {
      if (id !== index) throw new Error("node ids must be contiguous from 0");
    });
    const types: number[] = new Array(ids.length);
    for (const node of data.nodes) {
      if (node.type < 0 || node.type > 9) throw new Error(`bad room type ${node.type}`);
      types[node.id] = node.type;
    }
    const edges = new Map<string, [number, number]>();
    for (const [a, b] of data.edges) {
      if (a === b) throw new Error("self-loops are not allowed");
      if (a < 0 || b < 0 || a >= ids.length || b >= ids.length) {
        throw new Error(`edge (${a},${b}) references a missing node`);
      }
      edges.set(edgeKey(a, b), [Math.min(a, b), Math.max(a, b)]);
    }
    this.commit(() => {
      this.nodeTypes = types;
      this.edges = edges;
      this.pinnedNoise = {};
    });
  }

  /** Full session persistence (browser local storage). */
  serialize(): string {
    return JSON.stringify({
      diagram: this.toDiagramJson(),
      pinnedNoise: this.pinnedNoise,
      checkpointId: this.checkpointId,
      gallery: this.gallery,
    });
  }

  static deserialize(payload: string): EditorSession {
    const data = JSON.parse(payload);
    const session = new EditorSession();
    session.loadDiagramJson(data.diagram);
    session.pinnedNoise = data.pinnedNoise ?? {};
    session.checkpointId = data.checkpointId ?? null;
    session.gallery = data.gallery ?? [];
    session.undoStack = [];
    session.redoStack = [];
    return session;
  }

  /** Throws when any editor invariant is broken (used by the fuzz tests). */
  checkInvariants(): void {
    if (this.nodeCount > MAX_ROOMS) throw new Error("room cap exceeded");
    for (const type of this.nodeTypes) {
      if (!Number.isInteger(type) || type < 0 || type > 9) throw new Error("bad room type");
    }
    for (const [a, b] of this.edges.values()) {
      if (a === b) throw new Error("self-loop");
      if (a < 0 || b < 0 || a >= this.nodeCount || b >= this.nodeCount) {
        throw new Error("edge references a missing node");
      }
      if (a > b) throw new Error("edge not normalized");
    }
    for (const key of Object.keys(this.pinnedNoise)) {
      if (key === "*") continue;
      const node = Number(key);
      if (!Number.isInteger(node) || node < 0 || node >= this.nodeCount) {
        throw new Error("pinned noise for a missing node");
      }
    }
  }
}

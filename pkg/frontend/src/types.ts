/** Wire types shared with the generation service (see openapi.json). */

export interface DiagramNode {
  id: number;
  type: number;
}

export interface DiagramJson {
  nodes: DiagramNode[];
  edges: [number, number][];
}

export interface LayoutRoom {
  id: number;
  type: number;
  /** [x0, y0, x1, y1] on the canvas; null marks a degenerate room. */
  box: [number, number, number, number] | null;
}

export interface LayoutJson {
  canvas: number;
  rooms: LayoutRoom[];
}

export interface CompatibilityJson {
  distance: number;
  exact: boolean;
  degenerate_rooms: number;
}

/** Per-room noise vectors keyed by node id ("*" for single-vector models). */
export type NoiseRecord = Record<string, number[]>;

export interface GenerateRequestJson {
  diagram: DiagramJson;
  checkpoint_id: string;
  num_samples?: number;
  seed?: number | null;
  pinned_noise?: NoiseRecord | null;
  include_masks?: boolean;
}

export interface GeneratedSample {
  layout: LayoutJson;
  compatibility: CompatibilityJson;
  noise: NoiseRecord;
  masks?: { shape: number[]; dtype: string; data: string } | null;
}

export interface GenerateResponseJson {
  checkpoint_id: string;
  seed: number;
  samples: GeneratedSample[];
}

export interface RoomTypeInfo {
  code: number;
  name: string;
  color: [number, number, number];
}

export interface CheckpointInfo {
  id: string;
  variant: string;
  preset: string;
  ablation: string;
  train_group: string | null;
  noise_dim: number;
  mask_size: number;
  per_room_noise: boolean;
}

export const MAX_ROOMS = 40;
export const ROOM_GROUPS = ["1-3", "4-6", "7-9", "10-12", "13+"] as const;

/** Room-count bucket, matching the training holdout groups. */
export function groupOfCount(count: number): string {
  if (count <= 3) return "1-3";
  if (count <= 6) return "4-6";
  if (count <= 9) return "7-9";
  if (count <= 12) return "10-12";
  return "13+";
}

/**
 * Client-side layout rendering: a pure function of (layout JSON, palette)
 * matching the server's rasterization semantics exactly — white background,
 * rooms painted in decreasing-area order with ties broken by ascending
 * node id, and a cell painted iff its center lies inside the room's box.
 */

import type { LayoutJson, RoomTypeInfo } from "./types.js";

export type Rgb = [number, number, number];

export interface RenderPalette {
  background: Rgb;
  colors: Rgb[]; // indexed by room type code
}

export const WHITE: Rgb = [255, 255, 255];

export function paletteFromRoomTypes(roomTypes: RoomTypeInfo[]): RenderPalette {
  const colors: Rgb[] = [];
  for (const entry of roomTypes) colors[entry.code] = entry.color;
  return { background: WHITE, colors };
}

function coveredRange(lo: number, hi: number, scale: number, resolution: number): [number, number] {
  const first = Math.max(Math.ceil(lo / scale - 0.5), 0);
  const last = Math.min(Math.floor(hi / scale - 0.5), resolution - 1);
  return [first, last];
}

/** RGB pixel buffer (resolution * resolution * 3, row-major). */
export function renderLayout(
  layout: LayoutJson,
  palette: RenderPalette,
  resolution: number,
): Uint8ClampedArray<ArrayBuffer> {
  const scale = layout.canvas / resolution;
  const out = new Uint8ClampedArray(new ArrayBuffer(resolution * resolution * 3));
  for (let i = 0; i < out.length; i += 3) {
    out[i] = palette.background[0];
    out[i + 1] = palette.background[1];
    out[i + 2] = palette.background[2];
  }
  const order = layout.rooms
    .filter((room) => room.box !== null)
    .sort((a, b) => {
      const [ax0, ay0, ax1, ay1] = a.box!;
      const [bx0, by0, bx1, by1] = b.box!;
      const areaA = (ax1 - ax0) * (ay1 - ay0);
      const areaB = (bx1 - bx0) * (by1 - by0);
      return areaB - areaA || a.id - b.id;
    });
  for (const room of order) {
    const [x0, y0, x1, y1] = room.box!;
    const color = palette.colors[room.type] ?? palette.background;
    const [c0, c1] = coveredRange(x0, x1, scale, resolution);
    const [r0, r1] = coveredRange(y0, y1, scale, resolution);
    for (let r = r0; r <= r1; r++) {
      for (let c = c0; c <= c1; c++) {
        const at = (r * resolution + c) * 3;
        out[at] = color[0];
        out[at + 1] = color[1];
        out[at + 2] = color[2];
      }
    }
  }
  return out;
}

/** RGBA buffer ready for ImageData / canvas putImageData. */
export function renderLayoutRgba(
  layout: LayoutJson,
  palette: RenderPalette,
  resolution: number,
): Uint8ClampedArray<ArrayBuffer> {
  const rgb = renderLayout(layout, palette, resolution);
  const out = new Uint8ClampedArray(new ArrayBuffer(resolution * resolution * 4));
  for (let p = 0; p < resolution * resolution; p++) {
    out[p * 4] = rgb[p * 3];
    out[p * 4 + 1] = rgb[p * 3 + 1];
    out[p * 4 + 2] = rgb[p * 3 + 2];
    out[p * 4 + 3] = 255;
  }
  return out;
}

export function buffersEqual(a: Uint8ClampedArray, b: Uint8ClampedArray): boolean {
  if (a.length !== b.length) return false;
  for (let i = 0; i < a.length; i++) if (a[i] !== b[i]) return false;
  return true;
}

/** Pure diagram operations on the JSON working copy.
 *
 * The editor validates locally before every save or preview request so
 * broken states never leave the client; the rules mirror the service's
 * structural checks and use the same diagnostic codes.
 */

import { Diagnostic, ElementJson, isArc, isNodeKind } from "./types";

export function nextId(elements: ElementJson[]): number {
  return elements.reduce((max, el) => Math.max(max, el.id), 0) + 1;
}

export function getElement(elements: ElementJson[], id: number): ElementJson | undefined {
  return elements.find((el) => el.id === id);
}

export function validateDiagram(elements: ElementJson[]): Diagnostic[] {
  const findings: Diagnostic[] = [];
  const add = (code: string, message: string, elementId: number | null) =>
    findings.push({ code, element_id: elementId, message, severity: "error" });

  const byId = new Map<number, ElementJson>();
  for (const el of elements) {
    if (el.id < 1) add("BAD_ID", `element has non-positive id ${el.id}`, el.id);
    else if (byId.has(el.id)) add("DUP_ID", `id ${el.id} used more than once`, el.id);
    else byId.set(el.id, el);
  }

  for (const el of elements) {
    if (el.name === "") add("EMPTY_NAME", `element ${el.id} has an empty name`, el.id);
    if (el.bbox !== null && (el.bbox[2] < 1 || el.bbox[3] < 1))
      add("BAD_GEOMETRY", `element ${el.id} has a degenerate box`, el.id);

    if (isNodeKind(el.kind)) {
      if (el.prev !== 0 || el.next !== 0)
        add("NODE_HAS_LINKS", `node ${el.id} carries links`, el.id);
      continue;
    }
    if (!isArc(el)) continue;
    if (el.prev === 0 || el.next === 0)
      add("ARC_MISSING_ENDPOINT", `arc ${el.id} lacks an endpoint`, el.id);
    for (const ref of [el.prev, el.next]) {
      if (ref === 0) continue;
      const target = byId.get(ref);
      if (!target) add("DANGLING_REF", `arc ${el.id} references missing id ${ref}`, el.id);
      else if (isArc(target)) add("ARC_ENDPOINT_NOT_NODE", `arc ${el.id} references arc ${ref}`, el.id);
    }
    if (el.prev !== 0 && el.prev === el.next)
      add("ARC_SELF_LOOP", `arc ${el.id} links an element to itself`, el.id);
  }
  return findings;
}

export const DEFAULT_NODE_WIDTH = 150;
export const DEFAULT_NODE_HEIGHT = 80;

export function makeNode(
  elements: ElementJson[],
  kind: "Var" | "Concept",
  name: string,
  left: number,
  top: number,
): ElementJson {
  return {
    id: nextId(elements),
    kind,
    name,
    bbox: [Math.round(left), Math.round(top), DEFAULT_NODE_WIDTH, DEFAULT_NODE_HEIGHT],
    prev: 0,
    next: 0,
    description: null,
  };
}

/** Arc from the specific end (drag start) to the general end (drag target). */
export function makeArc(
  elements: ElementJson[],
  kind: "i" | "g" | "a",
  sourceId: number,
  targetId: number,
): ElementJson {
  const source = getElement(elements, sourceId);
  const target = getElement(elements, targetId);
  const name = kind === "i" ? "i role" : kind === "g" ? "g role" : "relates to";
  let bbox: ElementJson["bbox"] = null;
  if (source?.bbox && target?.bbox) {
    const [sx, sy] = center(source.bbox);
    const [tx, ty] = center(target.bbox);
    bbox = [Math.floor((sx + tx) / 2) - 8, Math.floor((sy + ty) / 2) - 8, 16, 16];
  }
  return { id: nextId(elements), kind, name, bbox, prev: sourceId, next: targetId, description: null };
}

export function center(bbox: [number, number, number, number]): [number, number] {
  return [bbox[0] + Math.floor(bbox[2] / 2), bbox[1] + Math.floor(bbox[3] / 2)];
}

export function moveElement(elements: ElementJson[], id: number, dx: number, dy: number): ElementJson[] {
  return elements.map((el) => {
    if (el.id !== id || !el.bbox) return el;
    const [left, top, width, height] = el.bbox;
    return { ...el, bbox: [left + Math.round(dx), top + Math.round(dy), width, height] };
  });
}

export function updateElement(
  elements: ElementJson[],
  id: number,
  patch: Partial<Pick<ElementJson, "name" | "description">>,
): ElementJson[] {
  return elements.map((el) => (el.id === id ? { ...el, ...patch } : el));
}

/** Removing a node cascades to its incident arcs, mirroring the service. */
export function removeElement(elements: ElementJson[], id: number): ElementJson[] {
  return elements.filter((el) => el.id !== id && !(isArc(el) && (el.prev === id || el.next === id)));
}

export function nodeAt(elements: ElementJson[], x: number, y: number): ElementJson | undefined {
  // last hit wins so recently drawn nodes are grabbed first
  let hit: ElementJson | undefined;
  for (const el of elements) {
    if (!isNodeKind(el.kind) || !el.bbox) continue;
    const [left, top, width, height] = el.bbox;
    if (x >= left && x <= left + width && y >= top && y <= top + height) hit = el;
  }
  return hit;
}

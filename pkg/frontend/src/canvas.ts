/** SVG drawing surface: renders the working diagram and turns pointer
 * gestures into committed edits.  Arc drags run from the specific end
 * (instance/subclass) to the general end, with an arrowhead preview. */

import { center, nodeAt } from "./model";
import { EditorStore } from "./store";
import { ElementJson, isArc, isNodeKind } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

interface DragState {
  kind: "move" | "arc";
  elementId: number;
  startX: number;
  startY: number;
  currentX: number;
  currentY: number;
}

export class CanvasView {
  private drag: DragState | null = null;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly store: EditorStore,
  ) {
    svg.addEventListener("pointerdown", (e) => this.onPointerDown(e));
    svg.addEventListener("pointermove", (e) => this.onPointerMove(e));
    svg.addEventListener("pointerup", (e) => this.onPointerUp(e));
    store.subscribe(() => this.render());
    this.render();
  }

  private toDiagram(event: PointerEvent): [number, number] {
    const rect = this.svg.getBoundingClientRect();
    return [event.clientX - rect.left, event.clientY - rect.top];
  }

  private onPointerDown(event: PointerEvent): void {
    const [x, y] = this.toDiagram(event);
    const { tool, elements } = this.store.state;
    const hit = nodeAt(elements, x, y);

    if (tool === "add-var" || tool === "add-concept") {
      this.store.addNode(tool === "add-var" ? "Var" : "Concept", x - 75, y - 40);
      this.store.setTool("select");
      return;
    }
    if (tool.startsWith("arc-")) {
      if (hit) {
        this.drag = { kind: "arc", elementId: hit.id, startX: x, startY: y, currentX: x, currentY: y };
        this.svg.setPointerCapture(event.pointerId);
      }
      return;
    }
    this.store.select(hit ? hit.id : null);
    if (hit) {
      this.drag = { kind: "move", elementId: hit.id, startX: x, startY: y, currentX: x, currentY: y };
      this.svg.setPointerCapture(event.pointerId);
    }
  }

  private onPointerMove(event: PointerEvent): void {
    if (!this.drag) return;
    [this.drag.currentX, this.drag.currentY] = this.toDiagram(event);
    this.render();
  }

  private onPointerUp(event: PointerEvent): void {
    if (!this.drag) return;
    const drag = this.drag;
    this.drag = null;
    const [x, y] = this.toDiagram(event);
    if (drag.kind === "move") {
      const dx = x - drag.startX;
      const dy = y - drag.startY;
      if (dx !== 0 || dy !== 0) this.store.move(drag.elementId, dx, dy);
      else this.render();
      return;
    }
    const target = nodeAt(this.store.state.elements, x, y);
    if (target && target.id !== drag.elementId) {
      const kind = this.store.state.tool.slice(4) as "i" | "g" | "a";
      this.store.addArc(kind, drag.elementId, target.id);
      this.store.setTool("select");
    } else {
      this.render();
    }
  }

  // -- drawing --------------------------------------------------------------

  private el(tag: string, attrs: Record<string, string | number>, text?: string): SVGElement {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, String(value));
    if (text !== undefined) node.textContent = text;
    return node;
  }

  render(): void {
    const { elements, selection, diagnostics } = this.store.state;
    const flagged = new Set(diagnostics.map((d) => d.element_id).filter((id) => id !== null));
    this.svg.replaceChildren();

    const defs = this.el("defs", {});
    const marker = this.el("marker", {
      id: "editor-arrow", markerWidth: 10, markerHeight: 8, refX: 9, refY: 4, orient: "auto",
    });
    marker.appendChild(this.el("path", { d: "M 0 0 L 10 4 L 0 8 z", fill: "#334" }));
    defs.appendChild(marker);
    this.svg.appendChild(defs);

    const byId = new Map(elements.map((el) => [el.id, el]));
    const moving = this.drag?.kind === "move" ? this.drag : null;

    const boxOf = (el: ElementJson): [number, number, number, number] | null => {
      if (!el.bbox) return null;
      let [left, top, width, height] = el.bbox;
      if (moving && moving.elementId === el.id) {
        left += moving.currentX - moving.startX;
        top += moving.currentY - moving.startY;
      }
      return [left, top, width, height];
    };

    for (const el of elements) {
      if (!isArc(el)) continue;
      const source = byId.get(el.prev);
      const target = byId.get(el.next);
      if (!source?.bbox || !target?.bbox) continue;
      const sBox = boxOf(source)!;
      const tBox = boxOf(target)!;
      const [sx, sy] = center(sBox);
      const [tx, ty] = center(tBox);
      const stroke = el.id === selection ? "#0b69d4" : flagged.has(el.id) ? "#c0392b" : "#334";
      this.svg.appendChild(
        this.el("line", {
          x1: sx, y1: sy, x2: tx, y2: ty, stroke, "stroke-width": 1.5,
          "marker-end": "url(#editor-arrow)", "data-id": el.id,
        }),
      );
      this.svg.appendChild(
        this.el(
          "text",
          { x: (sx + tx) / 2, y: (sy + ty) / 2 - 5, "text-anchor": "middle", "font-size": 11, fill: "#667" },
          el.name,
        ),
      );
    }

    for (const el of elements) {
      if (!isNodeKind(el.kind)) continue;
      const box = boxOf(el);
      if (!box) continue;
      const [left, top, width, height] = box;
      const stroke = el.id === selection ? "#0b69d4" : flagged.has(el.id) ? "#c0392b" : "#334";
      const attrs: Record<string, string | number> = {
        x: left, y: top, width, height,
        fill: el.kind === "Var" ? "#fdfdff" : "#f2f7ff",
        stroke, "stroke-width": el.id === selection ? 2.5 : 1.5, "data-id": el.id,
      };
      if (el.kind === "Concept") {
        attrs.rx = 12;
        attrs.ry = 12;
      }
      this.svg.appendChild(this.el("rect", attrs));
      this.svg.appendChild(
        this.el(
          "text",
          {
            x: left + width / 2, y: top + height / 2, "text-anchor": "middle",
            "dominant-baseline": "middle", "font-size": 13,
          },
          el.name,
        ),
      );
    }

    if (this.drag?.kind === "arc") {
      const source = byId.get(this.drag.elementId);
      if (source?.bbox) {
        const [sx, sy] = center(source.bbox);
        this.svg.appendChild(
          this.el("line", {
            x1: sx, y1: sy, x2: this.drag.currentX, y2: this.drag.currentY,
            stroke: "#0b69d4", "stroke-dasharray": "5 3", "marker-end": "url(#editor-arrow)",
          }),
        );
      }
    }
  }
}

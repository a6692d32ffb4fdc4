/** Side panels: palette, document controls, property editor, diagnostics
 * list and the two preview panes (PlantUML text, frame SVG). */

import { getElement } from "./model";
import { EditorStore, Tool } from "./store";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function wirePanels(store: EditorStore): void {
  const docInput = byId<HTMLInputElement>("doc-id");
  const loadButton = byId<HTMLButtonElement>("load-doc");
  const newButton = byId<HTMLButtonElement>("new-doc");
  const saveButton = byId<HTMLButtonElement>("save-doc");
  const revisionLabel = byId<HTMLSpanElement>("revision");
  const banner = byId<HTMLDivElement>("banner");
  const conflictBox = byId<HTMLDivElement>("conflict");
  const reloadButton = byId<HTMLButtonElement>("reload-doc");
  const nameInput = byId<HTMLInputElement>("prop-name");
  const descInput = byId<HTMLTextAreaElement>("prop-description");
  const deleteButton = byId<HTMLButtonElement>("prop-delete");
  const diagnosticsList = byId<HTMLUListElement>("diagnostics");
  const plantumlPane = byId<HTMLPreElement>("plantuml-pane");
  const svgPane = byId<HTMLDivElement>("svg-pane");

  const run = (action: Promise<unknown>) =>
    action.catch((error) => {
      banner.textContent = `request failed: ${error}`;
      banner.hidden = false;
    });

  loadButton.addEventListener("click", () => run(store.load(docInput.value.trim())));
  newButton.addEventListener("click", () => run(store.createNew(docInput.value.trim())));
  saveButton.addEventListener("click", () => run(store.save()));
  reloadButton.addEventListener("click", () => run(store.reload()));

  for (const tool of ["select", "add-var", "add-concept", "arc-i", "arc-g", "arc-a"] as Tool[]) {
    byId<HTMLButtonElement>(`tool-${tool}`).addEventListener("click", () => store.setTool(tool));
  }

  const commitProps = () => {
    const id = store.state.selection;
    if (id === null) return;
    store.updateProperties(id, {
      name: nameInput.value,
      description: descInput.value === "" ? null : descInput.value,
    });
  };
  nameInput.addEventListener("change", commitProps);
  descInput.addEventListener("change", commitProps);
  deleteButton.addEventListener("click", () => {
    if (store.state.selection !== null) store.remove(store.state.selection);
  });

  store.subscribe((state) => {
    revisionLabel.textContent = state.docId
      ? `${state.docId} @ r${state.revision}${state.dirty ? " *" : ""}`
      : "no document";
    saveButton.disabled = !state.docId || !state.dirty;
    conflictBox.hidden = !state.conflict;
    banner.hidden = state.banner === null;
    if (state.banner !== null) banner.textContent = state.banner;

    for (const tool of ["select", "add-var", "add-concept", "arc-i", "arc-g", "arc-a"] as Tool[]) {
      byId<HTMLButtonElement>(`tool-${tool}`).classList.toggle("active", state.tool === tool);
    }

    const selected = state.selection === null ? undefined : getElement(state.elements, state.selection);
    nameInput.disabled = descInput.disabled = deleteButton.disabled = !selected;
    if (selected && document.activeElement !== nameInput && document.activeElement !== descInput) {
      nameInput.value = selected.name;
      descInput.value = selected.description ?? "";
    }

    diagnosticsList.replaceChildren(
      ...state.diagnostics.map((diag) => {
        const item = document.createElement("li");
        item.className = diag.severity;
        item.textContent = `${diag.code}${diag.element_id !== null ? ` [${diag.element_id}]` : ""}: ${diag.message}`;
        if (diag.element_id !== null) {
          item.addEventListener("click", () => store.select(diag.element_id));
        }
        return item;
      }),
    );

    if (state.preview) {
      plantumlPane.textContent = state.preview.plantuml;
      svgPane.innerHTML = state.preview.svg;
    } else if (state.diagnostics.length > 0) {
      plantumlPane.textContent = "(translation blocked by the findings above)";
      svgPane.replaceChildren();
    }
    plantumlPane.classList.toggle("pending", state.previewPending);
  });
}

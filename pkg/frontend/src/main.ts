import { ApiClient } from "./api";
import { CanvasView } from "./canvas";
import { wirePanels } from "./panels";
import { EditorStore } from "./store";

const api = new ApiClient("");
const store = new EditorStore(api);

new CanvasView(document.getElementById("canvas") as unknown as SVGSVGElement, store);
wirePanels(store);

void api.health().then((ok) => {
  if (!ok) {
    const banner = document.getElementById("banner") as HTMLDivElement;
    banner.textContent = "service unreachable — start it with: frameforge serve --data-dir <dir>";
    banner.hidden = false;
  }
});

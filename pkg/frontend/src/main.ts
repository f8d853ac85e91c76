// Browser entry: control panel wiring over the App controller.

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { renderFrame, syncUrl } from "./dom.js";
import { deserializeState, serializeState, type Method, type Mode } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const plots = el<HTMLDivElement>("plots");
  const status = el<HTMLDivElement>("status");
  const app = new App(api, (frame) => {
    renderFrame(frame, plots);
    syncUrl(frame, serializeState);
    status.textContent = "";
  });

  const datasetSelect = el<HTMLSelectElement>("dataset");
  const yearSelect = el<HTMLSelectElement>("year");
  const year2Select = el<HTMLSelectElement>("year2");
  const rankerSelect = el<HTMLSelectElement>("rankers");
  const attributeSelect = el<HTMLSelectElement>("attribute");
  const modeSelect = el<HTMLSelectElement>("mode");
  const methodSelect = el<HTMLSelectElement>("method");
  const loInput = el<HTMLInputElement>("lo");
  const hiInput = el<HTMLInputElement>("hi");
  const lo2Input = el<HTMLInputElement>("lo2");
  const hi2Input = el<HTMLInputElement>("hi2");
  const thresholdInput = el<HTMLInputElement>("threshold");
  const thresholdLabel = el<HTMLSpanElement>("threshold-label");

  const { datasets } = await api.datasets();
  datasetSelect.innerHTML = datasets
    .map((d) => `<option value="${d}">${d}</option>`)
    .join("");

  async function loadDatasetControls(dataset: string): Promise<{ year: number; rankers: string[] }> {
    const [{ years }, { rankers }, { attributes }] = await Promise.all([
      api.years(dataset),
      api.rankers(dataset),
      api.attributes(dataset),
    ]);
    yearSelect.innerHTML = years.map((y) => `<option>${y}</option>`).join("");
    year2Select.innerHTML = yearSelect.innerHTML;
    rankerSelect.innerHTML = rankers
      .map((r) => `<option value="${r}" selected>${r}</option>`)
      .join("");
    attributeSelect.innerHTML =
      `<option value="">(none)</option>` +
      attributes.map((a) => `<option>${a}</option>`).join("");
    return { year: years[0] ?? 0, rankers };
  }

  function refresh(): void {
    const selectedRankers = Array.from(rankerSelect.selectedOptions).map((o) => o.value);
    status.textContent = "loading…";
    void app
      .update({
        dataset: datasetSelect.value,
        mode: modeSelect.value as Mode,
        method: methodSelect.value as Method,
        rankers: selectedRankers,
        year: Number(yearSelect.value),
        year2: modeSelect.value === "time" ? Number(year2Select.value) : null,
        lo: Number(loInput.value),
        hi: Number(hiInput.value),
        lo2: modeSelect.value === "range" ? Number(lo2Input.value) : null,
        hi2: modeSelect.value === "range" ? Number(hi2Input.value) : null,
        threshold: thresholdInput.value === "" ? null : Number(thresholdInput.value),
        correlationAttribute: attributeSelect.value || null,
      })
      .catch((error) => {
        status.textContent = String(error);
      });
  }

  for (const control of [datasetSelect, yearSelect, year2Select, rankerSelect,
                         attributeSelect, modeSelect, methodSelect, loInput, hiInput,
                         lo2Input, hi2Input]) {
    control.addEventListener("change", refresh);
  }
  thresholdInput.addEventListener("input", () => {
    thresholdLabel.textContent = thresholdInput.value || "off";
    refresh();
  });

  plots.addEventListener("click", (event) => {
    const circle = (event.target as Element).closest("circle[data-candidate]");
    if (circle) {
      void app.toggleCandidateHighlight(circle.getAttribute("data-candidate") ?? "");
    }
  });

  const fromUrl = location.search.length > 1 ? deserializeState(location.search) : null;
  const initial = await loadDatasetControls(fromUrl?.dataset || datasets[0] || "");
  if (fromUrl) {
    app.state = { ...fromUrl };
    datasetSelect.value = fromUrl.dataset;
    modeSelect.value = fromUrl.mode;
    methodSelect.value = fromUrl.method;
    yearSelect.value = String(fromUrl.year);
    loInput.value = String(fromUrl.lo);
    hiInput.value = String(fromUrl.hi);
    if (fromUrl.threshold !== null) thresholdInput.value = String(fromUrl.threshold);
    refresh();
  } else {
    datasetSelect.value = datasets[0] ?? "";
    yearSelect.value = String(initial.year);
    loInput.value = "1";
    hiInput.value = "25";
    refresh();
  }
}

void boot();

/** Scenario export: fetch the assembled list and hand it to the browser as
 * a JSON download. */

import { ApiClient, Scenario } from "./api.js";

export async function fetchExport(api: ApiClient): Promise<Scenario[]> {
  return api.export();
}

export function downloadJson(scenarios: Scenario[], runId: string): void {
  const blob = new Blob([JSON.stringify(scenarios, null, 2)],
                        { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = `scenarios-${runId || "run"}.json`;
  document.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

import type { ControllerView } from "./controller.js";

export interface ScorePanel {
  root: HTMLElement;
  update(view: ControllerView): void;
}

/**
 * Feedback strip under the sliders: teaching score when the server sent
 * one, per-point validation messages otherwise. The score is rendered
 * verbatim from the preview response; nothing is computed client-side.
 */
export function createScorePanel(doc: Document): ScorePanel {
  const root = doc.createElement("div");
  root.className = "score-panel";
  root.innerHTML = `
    <div class="score" hidden>
      <span class="score-caption">teaching score</span>
      <span class="score-value"></span>
    </div>
    <ul class="point-errors" hidden></ul>
    <p class="pending" hidden>checking…</p>`;

  const scoreBox = root.querySelector<HTMLElement>(".score")!;
  const scoreValue = root.querySelector<HTMLElement>(".score-value")!;
  const errorList = root.querySelector<HTMLUListElement>(".point-errors")!;
  const pending = root.querySelector<HTMLElement>(".pending")!;

  return {
    root,
    update(view: ControllerView): void {
      scoreBox.hidden = view.score === null;
      if (view.score !== null) {
        scoreValue.textContent = view.score.toFixed(1);
      }

      errorList.hidden = view.pointErrors.length === 0;
      errorList.replaceChildren(
        ...view.pointErrors.map((msg) => {
          const li = doc.createElement("li");
          li.textContent = msg;
          return li;
        }),
      );

      pending.hidden = !view.previewPending;
    },
  };
}

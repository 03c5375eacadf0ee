import { TeachingApi } from "./api.js";
import { ReferenceAnimation } from "./animation.js";
import { apiBase, discoverApiBase } from "./config.js";
import { SessionController, type ControllerView } from "./controller.js";
import { createScorePanel } from "./scorePanel.js";
import { createSliderPanel } from "./sliders.js";
import { toPoints } from "./types.js";

function h(tag: string, className: string, text = ""): HTMLElement {
  const el = document.createElement(tag);
  el.className = className;
  if (text) {
    el.textContent = text;
  }
  return el;
}

function startScreen(app: HTMLElement, onStart: (group: string) => void): void {
  app.innerHTML = `
    <div class="start">
      <h1>Teach the pendulum</h1>
      <p>You will teach a simulated pendulum by choosing two demonstration
         states per phase. Pick your assigned group to begin.</p>
      <label>group
        <select name="group">
          <option value="target">target</option>
          <option value="control">control</option>
        </select>
      </label>
      <button class="begin">start session</button>
      <p class="start-error" hidden></p>
    </div>`;
  const select = app.querySelector<HTMLSelectElement>("select[name=group]")!;
  const button = app.querySelector<HTMLButtonElement>("button.begin")!;
  button.addEventListener("click", () => onStart(select.value));
}

function sessionScreen(app: HTMLElement): {
  header: HTMLElement;
  canvas: HTMLCanvasElement;
  left: HTMLElement;
  commit: HTMLButtonElement;
  banner: HTMLElement;
  retry: HTMLButtonElement;
} {
  app.innerHTML = `
    <div class="banner" hidden>
      <span class="banner-text"></span>
      <button class="retry">retry</button>
    </div>
    <header class="phase-header"></header>
    <div class="layout">
      <section class="left"></section>
      <section class="right">
        <canvas width="420" height="420"></canvas>
        <p class="canvas-caption">target behaviour and your selected points</p>
      </section>
    </div>`;
  return {
    header: app.querySelector<HTMLElement>(".phase-header")!,
    canvas: app.querySelector<HTMLCanvasElement>("canvas")!,
    left: app.querySelector<HTMLElement>(".left")!,
    commit: h("button", "commit") as HTMLButtonElement,
    banner: app.querySelector<HTMLElement>(".banner")!,
    retry: app.querySelector<HTMLButtonElement>("button.retry")!,
  };
}

function doneScreen(app: HTMLElement, sessionId: string): void {
  app.innerHTML = `
    <div class="done">
      <h1>Session complete</h1>
      <p>All six phases are committed. Thank you for teaching.</p>
      <p class="session-id"></p>
    </div>`;
  app.querySelector<HTMLElement>(".session-id")!.textContent =
    `session ${sessionId}`;
}

function run(): void {
  discoverApiBase(document);
  const api = new TeachingApi(apiBase());
  const controller = new SessionController(api);
  const app = document.querySelector<HTMLElement>("#app")!;

  startScreen(app, (group) => {
    controller.start(group).then(
      () => mountSession(),
      () => {
        const err = app.querySelector<HTMLElement>(".start-error");
        if (err) {
          err.hidden = false;
          err.textContent = "could not reach the service, try again";
        }
      },
    );
  });

  function mountSession(): void {
    const parts = sessionScreen(app);
    const sliders = createSliderPanel(document);
    const score = createScorePanel(document);
    parts.commit.textContent = "commit these points";
    parts.left.append(sliders.root, score.root, parts.commit);

    const animation = new ReferenceAnimation(parts.canvas);
    animation.start();

    let shownSkill: string | null = null;
    function loadReference(skill: string): void {
      api.reference(skill).then(
        (traj) => {
          animation.setTrajectory(traj);
        },
        () => {
          parts.banner.hidden = false;
          parts.banner.querySelector<HTMLElement>(".banner-text")!.textContent =
            "could not load the target behaviour; check the connection";
          shownSkill = null; // retry will refetch
        },
      );
    }

    sliders.onInput((changes) => controller.setSliders(changes));
    parts.commit.addEventListener("click", () => {
      void controller.commit();
    });
    parts.retry.addEventListener("click", () => {
      controller.refresh();
      const phase = controller.view().phase;
      if (phase && shownSkill === null) {
        loadReference(phase.skill);
      }
    });

    controller.onChange((view) => render(view));

    function render(view: ControllerView): void {
      if (view.done && view.sessionId) {
        animation.stop();
        doneScreen(app, view.sessionId);
        return;
      }
      const phase = view.phase;
      if (!phase) {
        return;
      }
      parts.header.textContent =
        `Phase ${phase.index} of ${view.totalPhases} · skill ${phase.skill}` +
        (phase.guided ? " · guided (score shown)" : "");
      if (phase.skill !== shownSkill) {
        shownSkill = phase.skill;
        loadReference(phase.skill);
      }
      animation.setMarkers(toPoints(view.sliders));
      score.update(view);
      parts.commit.disabled = !view.canCommit;
      parts.commit.textContent = view.committing
        ? "committing…"
        : "commit these points";
      sliders.setEnabled(!view.committing);

      if (view.banner) {
        parts.banner.hidden = false;
        parts.banner.querySelector<HTMLElement>(".banner-text")!.textContent =
          view.banner;
      } else if (shownSkill !== null) {
        parts.banner.hidden = true;
      }
    }

    render(controller.view());
  }
}

run();

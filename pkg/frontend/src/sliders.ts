import {
  ANGLE_MAX,
  ANGLE_MIN,
  VELOCITY_MAX,
  VELOCITY_MIN,
} from "./controller.js";
import type { SliderValues } from "./types.js";

interface SliderSpec {
  key: keyof SliderValues;
  label: string;
  min: number;
  max: number;
}

const SPECS: SliderSpec[] = [
  { key: "q1", label: "point 1 angle (rad)", min: ANGLE_MIN, max: ANGLE_MAX },
  { key: "v1", label: "point 1 velocity (rad/s)", min: VELOCITY_MIN, max: VELOCITY_MAX },
  { key: "q2", label: "point 2 angle (rad)", min: ANGLE_MIN, max: ANGLE_MAX },
  { key: "v2", label: "point 2 velocity (rad/s)", min: VELOCITY_MIN, max: VELOCITY_MAX },
];

export interface SliderPanel {
  root: HTMLElement;
  values(): SliderValues;
  set(values: SliderValues): void;
  setEnabled(enabled: boolean): void;
  onInput(cb: (changes: Partial<SliderValues>) => void): void;
}

export function createSliderPanel(doc: Document): SliderPanel {
  const root = doc.createElement("div");
  root.className = "sliders";
  root.innerHTML = SPECS.map(
    (s) => `
    <label class="slider-row">
      <span class="slider-label">${s.label}</span>
      <input type="range" name="${s.key}" min="${s.min}" max="${s.max}"
             step="any" value="0">
      <output name="${s.key}-out">0.000</output>
    </label>`,
  ).join("");

  const inputs = new Map<keyof SliderValues, HTMLInputElement>();
  const outputs = new Map<keyof SliderValues, HTMLOutputElement>();
  for (const spec of SPECS) {
    inputs.set(
      spec.key,
      root.querySelector<HTMLInputElement>(`input[name="${spec.key}"]`)!,
    );
    outputs.set(
      spec.key,
      root.querySelector<HTMLOutputElement>(`output[name="${spec.key}-out"]`)!,
    );
  }

  const callbacks: Array<(changes: Partial<SliderValues>) => void> = [];
  for (const [key, input] of inputs) {
    input.addEventListener("input", () => {
      const value = Number(input.value);
      outputs.get(key)!.textContent = value.toFixed(3);
      for (const cb of callbacks) {
        cb({ [key]: value });
      }
    });
  }

  return {
    root,
    values(): SliderValues {
      return {
        q1: Number(inputs.get("q1")!.value),
        v1: Number(inputs.get("v1")!.value),
        q2: Number(inputs.get("q2")!.value),
        v2: Number(inputs.get("v2")!.value),
      };
    },
    set(values: SliderValues): void {
      for (const [key, input] of inputs) {
        input.value = String(values[key]);
        outputs.get(key)!.textContent = values[key].toFixed(3);
      }
    },
    setEnabled(enabled: boolean): void {
      for (const input of inputs.values()) {
        input.disabled = !enabled;
      }
    },
    onInput(cb): void {
      callbacks.push(cb);
    },
  };
}

// Wire types for the session service JSON API.

export interface PhaseInfo {
  index: number;
  skill: string;
  guided: boolean;
}

export interface CreateResponse {
  id: string;
  phase: PhaseInfo;
}

export interface SessionSnapshot {
  id: string;
  status: string;
  committed: number;
  phase: PhaseInfo | null;
}

/** Score is present only when the server decides the phase is guided. */
export interface PreviewResult {
  valid: boolean;
  errors?: string[];
  score?: number;
}

export interface CommitResult {
  phase_complete: boolean;
  next_phase: PhaseInfo | null;
  done: boolean;
}

export interface ReferenceSample {
  t: number;
  angle: number;
  velocity: number;
}

export interface ReferenceTrajectory {
  skill: string;
  dt: number;
  stride: number;
  samples: ReferenceSample[];
}

export interface ViaPoint {
  angle: number;
  velocity: number;
}

/** The four slider positions: two (angle, velocity) via points. */
export interface SliderValues {
  q1: number;
  v1: number;
  q2: number;
  v2: number;
}

export function toPoints(values: SliderValues): ViaPoint[] {
  return [
    { angle: values.q1, velocity: values.v1 },
    { angle: values.q2, velocity: values.v2 },
  ];
}

/**
 * Pure view-state logic: which screen a phase maps to, how click
 * acknowledgments update the visible counters, and how a submission
 * payload is assembled. Nothing in here touches the DOM or the network,
 * so every rule is unit-testable in isolation.
 *
 * The one rule everything else hangs off: the server owns the counts.
 * The UI displays whatever the last acknowledgment said and nothing
 * else, so the counters can lag a click in flight but can never
 * disagree with the engine's record.
 */

import type { ItemView } from "./api.js";

export type Screen =
  | "cover"
  | "digit_menu"
  | "question"
  | "explanation"
  | "feedback"
  | "test"
  | "satisfaction"
  | "done";

export type Phase =
  | "pretest"
  | "app_training"
  | "practice"
  | "during_lesson_test"
  | "extra_knowledge"
  | "end_of_subject_test"
  | "satisfaction"
  | "posttest"
  | "retention_wait"
  | "retention_test"
  | "done";

export const TEST_PHASES: readonly Phase[] = [
  "pretest",
  "during_lesson_test",
  "end_of_subject_test",
  "posttest",
  "retention_test",
];

/**
 * The only screen each phase may show. Practice starts at the digit
 * menu; selecting an icon moves to the question screen, which is still
 * within the practice phase.
 */
export function screenForPhase(phase: Phase): Screen {
  if (TEST_PHASES.includes(phase)) return "test";
  switch (phase) {
    case "practice":
      return "digit_menu";
    case "satisfaction":
      return "satisfaction";
    case "app_training":
    case "extra_knowledge":
      return "explanation";
    case "retention_wait":
    case "done":
      return "done";
    default:
      throw new Error(`no screen for phase ${phase}`);
  }
}

export interface ClickAckLike {
  place: string;
  running_count: number;
}

/**
 * Counters keyed by place slug. Absent key means the place has not
 * been acknowledged yet this item and displays as 0.
 */
export type Counts = Readonly<Record<string, number>>;

export const EMPTY_COUNTS: Counts = Object.freeze({});

/** Replace, never increment: the ack's running_count is authoritative. */
export function applyAck(counts: Counts, ack: ClickAckLike): Counts {
  return Object.freeze({ ...counts, [ack.place]: ack.running_count });
}

export function resetCounts(): Counts {
  return EMPTY_COUNTS;
}

/**
 * Build the answer payload in the item's own place order, zero-filling
 * places the student never tapped. Following item.places makes a
 * structurally malformed submission unrepresentable from the UI.
 */
export function countsForSubmission(item: ItemView, counts: Counts): [string, number][] {
  return item.places.map((slug) => [slug, counts[slug] ?? 0]);
}

export interface ExplanationLine {
  power: number;
  unitLabel: string;
  digit: number;
  value: number;
  skipped: boolean;
}

const UNIT_LABELS = [
  "ones",
  "tens",
  "hundreds",
  "thousands",
  "ten-thousands",
  "hundred-thousands",
  "millions",
];

/**
 * Decompose a number for the explanation screen, lowest place first,
 * with zero digits kept as explicitly skipped lines. Display-only:
 * grading always happens server-side against the engine's own
 * decomposition.
 */
export function explanationLines(value: number): ExplanationLine[] {
  if (!Number.isInteger(value) || value < 0 || value > 9_999_999) {
    throw new Error(`number out of range: ${value}`);
  }
  const lines: ExplanationLine[] = [];
  let rest = value;
  for (let power = 0; power < UNIT_LABELS.length; power++) {
    const digit = rest % 10;
    rest = (rest - digit) / 10;
    lines.push({
      power,
      unitLabel: UNIT_LABELS[power]!,
      digit,
      value: digit * 10 ** power,
      skipped: digit === 0,
    });
    if (rest === 0) break;
  }
  return lines;
}

/** Positionally aligned with the report's three satisfaction aspects. */
export const SATISFACTION_ITEMS = [
  "How clear were the sounds?",
  "How nice were the colours?",
  "How much fun did you have?",
] as const;

export const SATISFACTION_LEVELS = [
  { value: 3, face: "\u{1F603}", label: "a lot" },
  { value: 2, face: "\u{1F610}", label: "somewhat" },
  { value: 1, face: "\u{1F641}", label: "not really" },
] as const;

export type SatisfactionDraft = (number | null)[];

export function emptySatisfactionDraft(): SatisfactionDraft {
  return SATISFACTION_ITEMS.map(() => null);
}

export function canSubmitSatisfaction(draft: SatisfactionDraft): boolean {
  return draft.length === SATISFACTION_ITEMS.length && draft.every((r) => r !== null);
}

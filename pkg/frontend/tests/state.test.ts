import { describe, expect, it } from "vitest";

import type { ItemView } from "../src/api.js";
import {
  applyAck,
  canSubmitSatisfaction,
  countsForSubmission,
  emptySatisfactionDraft,
  explanationLines,
  resetCounts,
  screenForPhase,
  SATISFACTION_ITEMS,
  TEST_PHASES,
} from "../src/state.js";
import type { Phase } from "../src/state.js";

function item(number: number, places: string[]): ItemView {
  return { id: `q-${number}`, source: "practice", block_place: null, index: 0, number, places };
}

describe("screenForPhase", () => {
  it("maps every test phase to the test screen", () => {
    for (const phase of TEST_PHASES) {
      expect(screenForPhase(phase)).toBe("test");
    }
  });

  it("maps the remaining phases to their dedicated screens", () => {
    expect(screenForPhase("practice")).toBe("digit_menu");
    expect(screenForPhase("app_training")).toBe("explanation");
    expect(screenForPhase("extra_knowledge")).toBe("explanation");
    expect(screenForPhase("satisfaction")).toBe("satisfaction");
    expect(screenForPhase("retention_wait")).toBe("done");
    expect(screenForPhase("done")).toBe("done");
  });

  it("covers all eleven phases", () => {
    const phases: Phase[] = [
      "pretest",
      "app_training",
      "practice",
      "during_lesson_test",
      "extra_knowledge",
      "end_of_subject_test",
      "satisfaction",
      "posttest",
      "retention_wait",
      "retention_test",
      "done",
    ];
    for (const phase of phases) {
      expect(() => screenForPhase(phase)).not.toThrow();
    }
  });
});

describe("applyAck", () => {
  it("replaces the counter with the acknowledged running count", () => {
    let counts = resetCounts();
    counts = applyAck(counts, { place: "ones", running_count: 1 });
    counts = applyAck(counts, { place: "ones", running_count: 2 });
    expect(counts["ones"]).toBe(2);
  });

  it("never increments locally: a stale or replayed ack wins as-is", () => {
    let counts = resetCounts();
    counts = applyAck(counts, { place: "tens", running_count: 7 });
    // the server says 3 (e.g. after its own reset); display must follow
    counts = applyAck(counts, { place: "tens", running_count: 3 });
    expect(counts["tens"]).toBe(3);
  });

  it("tracks places independently and leaves the old object untouched", () => {
    const first = applyAck(resetCounts(), { place: "ones", running_count: 4 });
    const second = applyAck(first, { place: "hundreds", running_count: 2 });
    expect(first["hundreds"]).toBeUndefined();
    expect(second).toEqual({ ones: 4, hundreds: 2 });
    expect(Object.isFrozen(first)).toBe(true);
  });
});

describe("countsForSubmission", () => {
  it("follows the item's place order exactly", () => {
    const q = item(305, ["ones", "hundreds"]);
    let counts = resetCounts();
    counts = applyAck(counts, { place: "hundreds", running_count: 3 });
    counts = applyAck(counts, { place: "ones", running_count: 5 });
    expect(countsForSubmission(q, counts)).toEqual([
      ["ones", 5],
      ["hundreds", 3],
    ]);
  });

  it("zero-fills untapped places instead of omitting them", () => {
    const q = item(42, ["ones", "tens"]);
    const counts = applyAck(resetCounts(), { place: "tens", running_count: 4 });
    expect(countsForSubmission(q, counts)).toEqual([
      ["ones", 0],
      ["tens", 4],
    ]);
  });

  it("ignores counters for places the item does not contain", () => {
    const q = item(7, ["ones"]);
    let counts = applyAck(resetCounts(), { place: "ones", running_count: 7 });
    counts = applyAck(counts, { place: "millions", running_count: 2 });
    expect(countsForSubmission(q, counts)).toEqual([["ones", 7]]);
  });
});

describe("explanationLines", () => {
  it("reads 560 from the ones up, marking the skipped zero", () => {
    const lines = explanationLines(560);
    expect(lines.map((l) => [l.unitLabel, l.digit, l.value, l.skipped])).toEqual([
      ["ones", 0, 0, true],
      ["tens", 6, 60, false],
      ["hundreds", 5, 500, false],
    ]);
  });

  it("stops at the leading place", () => {
    expect(explanationLines(7)).toHaveLength(1);
    expect(explanationLines(9_999_999)).toHaveLength(7);
  });

  it("contributions sum back to the number", () => {
    for (const n of [0, 5, 42, 305, 560, 4507, 1_000_000, 9_070_605]) {
      const total = explanationLines(n).reduce((sum, l) => sum + l.value, 0);
      expect(total).toBe(n);
    }
  });

  it("rejects numbers outside the teaching range", () => {
    expect(() => explanationLines(-1)).toThrow();
    expect(() => explanationLines(10_000_000)).toThrow();
    expect(() => explanationLines(1.5)).toThrow();
  });
});

describe("satisfaction draft", () => {
  it("starts empty and cannot be submitted", () => {
    expect(canSubmitSatisfaction(emptySatisfactionDraft())).toBe(false);
  });

  it("stays unsubmittable until every item is rated", () => {
    const draft = emptySatisfactionDraft();
    draft[0] = 3;
    expect(canSubmitSatisfaction(draft)).toBe(false);
    draft[1] = 2;
    expect(canSubmitSatisfaction(draft)).toBe(false);
    draft[2] = 1;
    expect(canSubmitSatisfaction(draft)).toBe(true);
  });

  it("has exactly three items", () => {
    expect(SATISFACTION_ITEMS).toHaveLength(3);
  });
});

/**
 * End-to-end checks against a real service process. The server is
 * started with a fixed seed so the practice items are known in advance:
 * student ui-007's first two ones-block questions are 5 and then 6.
 *
 * Covers the two release criteria for this UI:
 *   1. interaction conformance: tap-to-count with acknowledged red
 *      counters, correct cue on a right answer, retry cue plus counter
 *      reset on a wrong one;
 *   2. satisfaction pipeline: ratings entered through the form reach
 *      the service and come back in table 6 with the right item means.
 */

import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { createApi } from "../src/api.js";
import type { TutorApi } from "../src/api.js";
import type { CueSink } from "../src/cues.js";
import { PLACE_SLUGS } from "../src/cues.js";
import type { Phase } from "../src/state.js";
import { App } from "../src/ui.js";

const SEED = "2026";
const STUDENT = "ui-007";
const FIRST_ONES_ITEM = 5;
const SECOND_ONES_ITEM = 6;

let proc: ChildProcess;
let baseUrl: string;
let api: TutorApi;

beforeAll(async () => {
  const dataDir = join(mkdtempSync(join(tmpdir(), "placetutor-ui-")), "data");
  proc = spawn(
    "python3",
    ["-m", "placetutor", "serve", "--data-dir", dataDir, "--port", "0", "--clock", "simulated", "--seed", SEED],
    { stdio: ["ignore", "pipe", "pipe"], env: { ...process.env, PYTHONUNBUFFERED: "1" } },
  );
  let out = "";
  proc.stderr!.on("data", (chunk) => (out += String(chunk)));
  baseUrl = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error(`server never announced:\n${out}`)), 60_000);
    proc.stdout!.on("data", (chunk) => {
      out += String(chunk);
      const m = out.match(/listening on (http:\/\/\S+)/);
      if (m) {
        clearTimeout(timer);
        resolve(m[1]!);
      }
    });
    proc.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited with ${code}:\n${out}`));
    });
  });
  api = createApi(baseUrl);
  for (let attempt = 0; ; attempt++) {
    try {
      const resp = await fetch(`${baseUrl}/healthz`);
      if (resp.ok) break;
    } catch {
      // still booting
    }
    if (attempt > 100) throw new Error("service never became healthy");
    await new Promise((r) => setTimeout(r, 100));
  }
}, 120_000);

afterAll(() => {
  proc?.kill();
});

function digitsOf(n: number): [string, number][] {
  const out: [string, number][] = [];
  let rest = n;
  let power = 0;
  while (rest > 0) {
    const digit = rest % 10;
    if (digit > 0) out.push([PLACE_SLUGS[power]!, digit]);
    rest = Math.floor(rest / 10);
    power++;
  }
  return out;
}

/** Answer/advance through the protocol until the session reaches `stop`. */
async function driveTo(sid: string, stop: Phase): Promise<void> {
  for (let guard = 0; guard < 2000; guard++) {
    const view = await api.next(sid);
    if (view.phase === stop) return;
    if (view.item) {
      await api.answer(sid, digitsOf(view.item.number), view.item.block_place);
    } else {
      await api.advance(sid);
    }
  }
  throw new Error(`session ${sid} never reached ${stop}`);
}

class RecordingCues implements CueSink {
  enabled = true;
  played: string[] = [];
  play(cueId: string): void {
    if (this.enabled) this.played.push(cueId);
  }
}

function mount(): HTMLElement {
  document.body.innerHTML = `<div id="app"></div>`;
  return document.getElementById("app")!;
}

function press(root: HTMLElement, selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element for ${selector}`);
  el.click();
}

function text(root: HTMLElement, selector: string): string {
  return root.querySelector(selector)?.textContent?.trim() ?? "";
}

async function startApp(studentId: string): Promise<{ root: HTMLElement; app: App; cues: RecordingCues }> {
  const root = mount();
  const cues = new RecordingCues();
  const app = new App(root, api, cues, studentId);
  app.start();
  press(root, "#start-btn");
  await app.settle();
  return { root, app, cues };
}

describe("interaction conformance", () => {
  it("counts with acked red counters, voices correct, and resets on retry", async () => {
    await api.createSession(STUDENT);
    await driveTo(STUDENT, "practice");

    const { root, app, cues } = await startApp(STUDENT);
    expect(root.querySelector(".screen-digit-menu")).toBeTruthy();

    press(root, `.place-icon[data-place="ones"]`);
    await app.settle();
    expect(text(root, ".prompt")).toBe(String(FIRST_ONES_ITEM));

    for (let tap = 1; tap <= FIRST_ONES_ITEM; tap++) {
      press(root, `.count-block[data-place="ones"]`);
      await app.settle();
      expect(text(root, `.counter[data-place="ones"]`)).toBe(String(tap));
      expect(cues.played.at(-1)).toBe(`count_${tap}`);
    }
    // the counter's red comes from the stylesheet the page ships with
    const styles = readFileSync(join(process.cwd(), "styles.css"), "utf-8");
    expect(styles).toMatch(/--counter-red:\s*#c0392b/);
    expect(styles).toMatch(/\.counter\s*\{[^}]*var\(--counter-red\)/s);

    press(root, "#submit-btn");
    await app.settle();
    expect(root.querySelector(".verdict-correct")).toBeTruthy();
    expect(cues.played.at(-1)).toBe("correct");

    press(root, "#continue-btn");
    await app.settle();
    expect(text(root, ".prompt")).toBe(String(SECOND_ONES_ITEM));

    for (let tap = 0; tap < SECOND_ONES_ITEM - 2; tap++) {
      press(root, `.count-block[data-place="ones"]`);
    }
    await app.settle();
    expect(text(root, `.counter[data-place="ones"]`)).toBe(String(SECOND_ONES_ITEM - 2));

    press(root, "#submit-btn");
    await app.settle();
    expect(root.querySelector(".verdict-retry")).toBeTruthy();
    expect(cues.played.at(-1)).toBe("retry");

    press(root, "#continue-btn");
    await app.settle();
    expect(text(root, ".prompt")).toBe(String(SECOND_ONES_ITEM)); // same item again
    expect(text(root, `.counter[data-place="ones"]`)).toBe("0");

    // the reset is the engine's, not a cosmetic one: the next ack starts at 1
    press(root, `.count-block[data-place="ones"]`);
    await app.settle();
    expect(text(root, `.counter[data-place="ones"]`)).toBe("1");
    expect(cues.played.at(-1)).toBe("count_1");
  }, 120_000);
});

describe("satisfaction pipeline", () => {
  it("form ratings land in table 6 with the right item means", async () => {
    await api.createSession("sat-a");
    await driveTo("sat-a", "satisfaction");
    await api.createSession("sat-b");
    await driveTo("sat-b", "satisfaction");

    const { root, app } = await startApp("sat-a");
    expect(root.querySelector(".screen-satisfaction")).toBeTruthy();
    const submit = () => root.querySelector<HTMLButtonElement>("#submit-satisfaction")!;
    expect(submit().disabled).toBe(true);
    press(root, `.face[data-item="0"][data-value="3"]`);
    press(root, `.face[data-item="1"][data-value="2"]`);
    press(root, `.face[data-item="2"][data-value="3"]`);
    expect(submit().disabled).toBe(false);
    press(root, "#submit-satisfaction");
    await app.settle();
    expect(root.querySelector(".screen-test")).toBeTruthy(); // straight into the posttest

    await api.satisfaction("sat-b", [3, 3, 1]);

    const csv = await api.tableCsv(6);
    const rows = csv.trim().split("\n").map((line) => line.split(","));
    expect(rows[0]).toEqual(["Item", "x̄", "S.D.", "Translation"]);
    const byLabel = new Map(rows.slice(1).map((row) => [row[0]!, row]));
    expect(byLabel.get("Audio clarity")![1]).toBe("3.00");
    expect(byLabel.get("Colour appeal")![1]).toBe("2.50");
    expect(byLabel.get("Enjoyment")![1]).toBe("2.00");
  }, 180_000);
});

/**
 * Screen controller. Renders one screen at a time into the root element
 * with plain templates and rebinds listeners after every render; all
 * state lives on the App instance.
 *
 * Server authority: counters show only acknowledged counts (applyAck),
 * answers are built from the item's own place list (countsForSubmission),
 * and every screen is derived from the phase the service reports. The
 * client invents nothing the engine would have to trust.
 */

import { ApiError } from "./api.js";
import type { ItemView, PracticeProgress, Progress, TestProgress, TutorApi, Verdict } from "./api.js";
import type { CueSink } from "./cues.js";
import { PLACE_SLUGS } from "./cues.js";
import {
  applyAck,
  canSubmitSatisfaction,
  countsForSubmission,
  emptySatisfactionDraft,
  explanationLines,
  resetCounts,
  SATISFACTION_ITEMS,
  SATISFACTION_LEVELS,
  screenForPhase,
} from "./state.js";
import type { Counts, Phase, SatisfactionDraft, Screen } from "./state.js";

const MASCOT = "\u{1F989}";

function placeLabel(slug: string): string {
  return slug.replace(/_/g, "-");
}

function isPractice(progress: Progress): progress is PracticeProgress {
  return progress !== null && "per_block" in progress;
}

function isTest(progress: Progress): progress is TestProgress {
  return progress !== null && "answered" in progress;
}

export class App {
  private sessionId = "";
  private phase: Phase = "pretest";
  private screen: Screen = "cover";
  private item: ItemView | null = null;
  private progress: Progress = null;
  private counts: Counts = resetCounts();
  private selectedBlock: string | null = null;
  private verdict: Verdict | null = null;
  private draft: SatisfactionDraft = emptySatisfactionDraft();
  private toastMsg: string | null = null;
  private busy = false;
  private subSeq = 0;
  private work: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: TutorApi,
    private readonly cues: CueSink,
    private readonly studentId: string,
  ) {}

  start(): void {
    this.render();
  }

  /** Resolves once every queued handler has finished; used by tests. */
  settle(): Promise<void> {
    return this.work;
  }

  /** Serialize all async handlers so acks and submissions apply in order. */
  private enqueue(fn: () => Promise<void>): void {
    this.work = this.work.then(async () => {
      this.toastMsg = null;
      try {
        await fn();
      } catch (err) {
        this.showError(err);
      }
    });
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError) {
      this.toastMsg = `${err.code}: ${err.message}`;
    } else {
      console.error(err);
      this.toastMsg = "something went wrong, please try again";
    }
    this.render();
  }

  private async begin(): Promise<void> {
    try {
      const created = await this.api.createSession(this.studentId);
      this.sessionId = created.session_id;
    } catch (err) {
      // session ids equal student ids, so an existing session is resumable
      if (!(err instanceof ApiError && err.status === 409)) throw err;
      this.sessionId = this.studentId;
    }
    await this.refresh();
  }

  private async refresh(): Promise<void> {
    let view = await this.api.next(this.sessionId);
    this.phase = view.phase as Phase;
    if (this.phase !== "practice") {
      this.selectedBlock = null;
    } else if (this.selectedBlock) {
      view = await this.api.next(this.sessionId, this.selectedBlock);
      if (view.item === null) this.selectedBlock = null; // block finished
    }
    this.item = this.selectedBlock || this.phase !== "practice" ? view.item : null;
    this.progress = view.progress ?? null;
    this.counts = resetCounts();
    this.verdict = null;
    let screen = screenForPhase(this.phase);
    if (screen === "digit_menu" && this.selectedBlock && this.item) screen = "question";
    this.screen = screen;
    this.render();
  }

  private async tapBlock(slug: string): Promise<void> {
    const ack = await this.api.click(this.sessionId, slug, this.selectedBlock ?? undefined);
    this.counts = applyAck(this.counts, ack);
    this.cues.play(ack.display);
    this.render();
  }

  private async submitAnswer(): Promise<void> {
    const item = this.item;
    if (!item) return;
    const counts = countsForSubmission(item, this.counts);
    const verdict = await this.api.answer(
      this.sessionId,
      counts,
      this.selectedBlock,
      `sub-${this.sessionId}-${++this.subSeq}`,
    );
    if (this.screen === "question") {
      // practice keeps the retry loop and voices the verdict
      this.verdict = verdict;
      this.cues.play(verdict.outcome);
      this.screen = "feedback";
      this.render();
    } else {
      // a test paper just records the answer and moves on
      await this.refresh();
    }
  }

  private async continueFromFeedback(): Promise<void> {
    if (this.verdict?.outcome === "retry") {
      // same item again; the engine already reset its click state
      this.counts = resetCounts();
      this.verdict = null;
      this.screen = "question";
      this.render();
      return;
    }
    await this.refresh();
  }

  private async advance(): Promise<void> {
    await this.api.advance(this.sessionId);
    await this.refresh();
  }

  private async submitSatisfaction(): Promise<void> {
    if (!canSubmitSatisfaction(this.draft)) return;
    await this.api.satisfaction(this.sessionId, this.draft as number[]);
    this.draft = emptySatisfactionDraft();
    await this.advance();
  }

  // --- rendering -------------------------------------------------------

  private render(): void {
    this.root.innerHTML = `
      <header class="chrome">
        <span class="mascot">${MASCOT}</span>
        <span class="app-title">Place Value Workshop</span>
        <button id="audio-btn" aria-label="toggle audio">${this.cues.enabled ? "\u{1F50A}" : "\u{1F507}"}</button>
      </header>
      <div id="toast" class="toast${this.toastMsg ? " toast-error" : ""}">${this.toastMsg ?? ""}</div>
      <main class="screen screen-${this.screen.replace(/_/g, "-")}">${this.screenHtml()}</main>
    `;
    this.bind();
  }

  private screenHtml(): string {
    switch (this.screen) {
      case "cover":
        return this.coverHtml();
      case "digit_menu":
        return this.digitMenuHtml();
      case "question":
        return this.itemHtml("Count out the number!");
      case "test":
        return this.testHtml();
      case "feedback":
        return this.feedbackHtml();
      case "explanation":
        return this.explanationHtml();
      case "satisfaction":
        return this.satisfactionHtml();
      case "done":
        return this.doneHtml();
    }
  }

  private coverHtml(): string {
    return `
      <h1>Place Value Workshop</h1>
      <p class="mascot-big">${MASCOT}</p>
      <button id="start-btn">Start</button>
    `;
  }

  private digitMenuHtml(): string {
    const progress = isPractice(this.progress) ? this.progress : null;
    const perBlock = progress?.per_block ?? 0;
    const total = progress ? PLACE_SLUGS.length * perBlock : 0;
    const doneTotal = progress
      ? PLACE_SLUGS.reduce((sum, slug) => sum + (progress.done[slug] ?? 0), 0)
      : 0;
    const icons = PLACE_SLUGS.map((slug) => {
      const done = progress?.done[slug] ?? 0;
      const finished = progress !== null && done >= perBlock;
      return `
        <button class="place-icon" data-place="${slug}" ${finished ? "disabled" : ""}>
          <span class="place-name">${placeLabel(slug)}</span>
          <span class="block-progress">${done}/${perBlock}</span>
        </button>
      `;
    }).join("");
    const advance =
      progress !== null && doneTotal >= total
        ? `<button id="advance-btn">All blocks done, continue</button>`
        : "";
    return `
      <h2>Pick a place to practise</h2>
      <div class="digit-menu">${icons}</div>
      ${advance}
    `;
  }

  private blocksHtml(item: ItemView): string {
    return item.places
      .map(
        (slug) => `
          <div class="count-row">
            <button class="count-block" data-place="${slug}" ${this.busy ? "disabled" : ""}>
              <span class="place-name">${placeLabel(slug)}</span>
            </button>
            <span class="counter" data-place="${slug}">${this.counts[slug] ?? 0}</span>
          </div>
        `,
      )
      .join("");
  }

  private itemHtml(heading: string): string {
    const item = this.item;
    if (!item) return `<p>nothing to answer</p>`;
    return `
      <h2>${heading}</h2>
      <p class="prompt">${item.number}</p>
      <div class="count-area">${this.blocksHtml(item)}</div>
      <button id="submit-btn" ${this.busy ? "disabled" : ""}>Done counting</button>
    `;
  }

  private testHtml(): string {
    const progress = isTest(this.progress) ? this.progress : null;
    const status = progress ? `<p class="test-progress">${progress.answered} of ${progress.total} answered</p>` : "";
    if (!this.item) {
      return `
        <h2>Paper complete</h2>
        ${status}
        <button id="advance-btn">Hand it in</button>
      `;
    }
    return `${status}${this.itemHtml("Show this number with blocks")}`;
  }

  private feedbackHtml(): string {
    if (this.verdict?.outcome === "correct") {
      return `
        <p class="verdict-correct">That's right! ${MASCOT}</p>
        <button id="continue-btn">Next</button>
      `;
    }
    return `
      <p class="verdict-retry">Not quite, let's count it again.</p>
      <button id="continue-btn">Try again</button>
    `;
  }

  private explanationHtml(): string {
    const training = this.phase === "app_training";
    const sample = training ? 560 : 4507;
    const lines = explanationLines(sample)
      .map((line) =>
        line.skipped
          ? `<li class="expl-line skipped">${line.unitLabel}: the digit is 0, so we skip it</li>`
          : `<li class="expl-line">${line.unitLabel}: ${line.digit} taps make ${line.value}</li>`,
      )
      .join("");
    const intro = training
      ? `<p>Tap the block for each place as many times as its digit says, then press Done counting. Let's read ${sample} together, starting from the ones:</p>`
      : `<p>One more idea before the next paper. Bigger numbers work exactly the same way; here is ${sample}, starting from the ones:</p>`;
    return `
      <h2>${training ? "How the app works" : "Going further"}</h2>
      ${intro}
      <ul class="explanation">${lines}</ul>
      <button id="advance-btn">Got it</button>
    `;
  }

  private satisfactionHtml(): string {
    const rows = SATISFACTION_ITEMS.map((text, i) => {
      const faces = SATISFACTION_LEVELS.map(
        (level) => `
          <button class="face${this.draft[i] === level.value ? " chosen" : ""}"
                  data-item="${i}" data-value="${level.value}"
                  aria-label="${level.label}">${level.face}</button>
        `,
      ).join("");
      return `
        <div class="satisfaction-item">
          <p>${text}</p>
          <div class="faces">${faces}</div>
        </div>
      `;
    }).join("");
    return `
      <h2>How was it?</h2>
      ${rows}
      <button id="submit-satisfaction" ${canSubmitSatisfaction(this.draft) && !this.busy ? "" : "disabled"}>
        Send
      </button>
    `;
  }

  private doneHtml(): string {
    if (this.phase === "retention_wait") {
      return `
        <h2>See you in two weeks!</h2>
        <p>There is one more short paper after the break.</p>
        <button id="advance-btn">I'm back, let's go</button>
      `;
    }
    return `
      <h2>All done!</h2>
      <p class="mascot-big">${MASCOT}</p>
    `;
  }

  // --- event wiring ----------------------------------------------------

  private bind(): void {
    this.root.querySelector("#audio-btn")?.addEventListener("click", () => {
      this.cues.enabled = !this.cues.enabled;
      this.render();
    });
    this.root.querySelector("#start-btn")?.addEventListener("click", () => {
      this.enqueue(() => this.begin());
    });
    for (const icon of this.root.querySelectorAll<HTMLButtonElement>(".place-icon")) {
      const slug = icon.dataset.place!;
      icon.addEventListener("mouseenter", () => this.cues.play(`place_${slug}`));
      icon.addEventListener("click", () => {
        if (icon.disabled) return;
        this.selectedBlock = slug;
        this.enqueue(() => this.refresh());
      });
    }
    for (const block of this.root.querySelectorAll<HTMLButtonElement>(".count-block")) {
      const slug = block.dataset.place!;
      block.addEventListener("click", () => {
        if (this.busy) return;
        this.enqueue(() => this.tapBlock(slug));
      });
    }
    this.root.querySelector("#submit-btn")?.addEventListener("click", () => {
      if (this.busy) return; // one submission in flight at a time
      this.busy = true;
      this.enqueue(async () => {
        try {
          await this.submitAnswer();
        } finally {
          this.busy = false;
        }
      });
    });
    this.root.querySelector("#continue-btn")?.addEventListener("click", () => {
      this.enqueue(() => this.continueFromFeedback());
    });
    this.root.querySelector("#advance-btn")?.addEventListener("click", () => {
      this.enqueue(() => this.advance());
    });
    for (const face of this.root.querySelectorAll<HTMLButtonElement>(".face")) {
      face.addEventListener("click", () => {
        const item = Number(face.dataset.item);
        const value = Number(face.dataset.value);
        this.draft = this.draft.map((r, i) => (i === item ? value : r));
        this.render();
      });
    }
    this.root.querySelector("#submit-satisfaction")?.addEventListener("click", () => {
      if (this.busy || !canSubmitSatisfaction(this.draft)) return;
      this.busy = true;
      this.enqueue(async () => {
        try {
          await this.submitSatisfaction();
        } finally {
          this.busy = false;
        }
      });
    });
  }
}

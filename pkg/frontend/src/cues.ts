/**
 * Audio cue registry. Every sound the tutor makes is addressed by a cue
 * id; the default rendering is a synthesized tone so the app works with
 * no asset pipeline, and any cue can be swapped for a recorded file
 * without touching the code that fires it.
 */

export const PLACE_SLUGS = [
  "ones",
  "tens",
  "hundreds",
  "thousands",
  "ten_thousands",
  "hundred_thousands",
  "millions",
] as const;

export type PlaceSlug = (typeof PLACE_SLUGS)[number];

export interface ToneSpec {
  frequency: number; // Hz
  duration: number; // seconds
}

/** Pentatonic steps so consecutive count cues sound like going up a ladder. */
const COUNT_BASE_HZ = 440;
const COUNT_STEP = 2 ** (2 / 12);

function buildManifest(): Record<string, ToneSpec> {
  const manifest: Record<string, ToneSpec> = {
    correct: { frequency: 880, duration: 0.5 },
    retry: { frequency: 220, duration: 0.5 },
  };
  for (let n = 1; n <= 9; n++) {
    manifest[`count_${n}`] = {
      frequency: COUNT_BASE_HZ * COUNT_STEP ** (n - 1),
      duration: 0.18,
    };
  }
  PLACE_SLUGS.forEach((slug, i) => {
    manifest[`place_${slug}`] = { frequency: 330 + 55 * i, duration: 0.35 };
  });
  return manifest;
}

export const CUE_MANIFEST: Readonly<Record<string, ToneSpec>> = buildManifest();

/** Anything that can voice a cue id. Tests substitute a recorder. */
export interface CueSink {
  play(cueId: string): void;
  enabled: boolean;
}

export class CuePlayer implements CueSink {
  enabled = true;

  /** cue id -> audio file URL; overrides the synthesized tone */
  private files = new Map<string, string>();
  private ctx: AudioContext | null = null;

  substituteFile(cueId: string, url: string): void {
    if (!(cueId in CUE_MANIFEST)) {
      throw new Error(`unknown cue id ${cueId}`);
    }
    this.files.set(cueId, url);
  }

  play(cueId: string): void {
    if (!this.enabled) return;
    const spec = CUE_MANIFEST[cueId];
    if (!spec) return; // unknown cues are silent, never fatal
    const file = this.files.get(cueId);
    if (file) {
      void new Audio(file).play().catch(() => {});
      return;
    }
    this.playTone(spec);
  }

  private playTone(spec: ToneSpec): void {
    const Ctor =
      typeof AudioContext !== "undefined"
        ? AudioContext
        : (globalThis as { webkitAudioContext?: typeof AudioContext }).webkitAudioContext;
    if (!Ctor) return; // headless environment: cues become no-ops
    this.ctx ??= new Ctor();
    const osc = this.ctx.createOscillator();
    const gain = this.ctx.createGain();
    osc.frequency.value = spec.frequency;
    osc.connect(gain);
    gain.connect(this.ctx.destination);
    const now = this.ctx.currentTime;
    gain.gain.setValueAtTime(0.3, now);
    gain.gain.exponentialRampToValueAtTime(0.001, now + spec.duration);
    osc.start(now);
    osc.stop(now + spec.duration);
  }
}

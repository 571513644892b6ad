import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // tests talk to a locally spawned service on a random port
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ["tests/**/*.test.ts"],
    // the integration suite drives two full sessions over real HTTP
    testTimeout: 180_000,
    hookTimeout: 120_000,
  },
});

import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globalSetup: ["tests/globalSetup.ts"],
    // one shared backend server; run files sequentially for stable oracles
    fileParallelism: false,
    environment: "node",
    environmentOptions: {
      // DOM tests talk to the test backend on another port
      happyDOM: { settings: { fetch: { disableSameOriginPolicy: true } } },
    },
    testTimeout: 20_000,
    hookTimeout: 60_000,
  },
});

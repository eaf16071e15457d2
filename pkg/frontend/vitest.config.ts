import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // live.test.ts drives a full 20-agent scenario through a spawned gateway
    testTimeout: 180_000,
    hookTimeout: 60_000,
    fileParallelism: false,
  },
});

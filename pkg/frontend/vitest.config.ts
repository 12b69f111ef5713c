import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    globalSetup: ["tests/service-setup.ts"],
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
  },
});

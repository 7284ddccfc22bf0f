import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    // the end-to-end test boots the real service once per file
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});

import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // The live suite boots the Python API in a subprocess; give it headroom.
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});

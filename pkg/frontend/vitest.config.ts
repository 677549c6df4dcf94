import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "happy-dom",
        environmentOptions: {
            happyDOM: {
                // The scripted session talks to a locally spawned service on
                // another port.
                settings: { fetch: { disableSameOriginPolicy: true } },
            },
        },
        include: ["tests/**/*.test.ts"],
        testTimeout: 120_000,
        hookTimeout: 120_000,
    },
});

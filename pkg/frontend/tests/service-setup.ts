/** Spawns the Python session service once for the whole vitest run. */

import { ChildProcess, spawn } from "node:child_process";

export const BASE = `http://127.0.0.1:${process.env.CELLCA_TEST_PORT ?? "8931"}`;

let proc: ChildProcess | undefined;

async function waitUntilUp(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/session/probe/solution`);
      if (resp.status === 404) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service did not come up at ${BASE}: ${lastError}`);
}

export async function setup(): Promise<void> {
  const port = new URL(BASE).port;
  proc = spawn(
    "python3",
    ["-m", "uvicorn", "cellca.service:create_app", "--factory",
     "--host", "127.0.0.1", "--port", port, "--log-level", "error"],
    { stdio: "inherit" },
  );
  await waitUntilUp();
}

export async function teardown(): Promise<void> {
  proc?.kill("SIGTERM");
}

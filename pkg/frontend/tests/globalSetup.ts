// Boots the real Python gateway once for the whole test run.
import { ChildProcess, spawn } from "node:child_process";

import { GATEWAY_BASE, GATEWAY_PORT } from "./gateway.js";

let server: ChildProcess | undefined;

export default async function setup(): Promise<() => void> {
  server = spawn(
    "python3",
    ["-m", "avatardm.cli", "serve", "--port", String(GATEWAY_PORT)],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const response = await fetch(`${GATEWAY_BASE}/api/health`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      server.kill();
      throw new Error("gateway did not come up on time");
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  return () => {
    server?.kill();
  };
}

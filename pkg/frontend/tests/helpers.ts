/**
 * Test fixtures: spawn a real gateway as a subprocess and wait for it.
 *
 * The gateway binary comes from the backend package's console script, so
 * these tests exercise the same server a deployment would run. Servers
 * are started with --block-interval 0: blocks happen only when a test
 * (or the scenario runner) asks for them, which keeps every assertion
 * about chain state deterministic.
 */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

export const SCENARIO_PATH = fileURLToPath(
  new URL("../../scenarios/load20.json", import.meta.url),
);

export function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.once("error", reject);
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        server.close();
        return reject(new Error("could not allocate a port"));
      }
      const port = address.port;
      server.close(() => resolve(port));
    });
  });
}

/** Genesis JSON for the 20-agent load scenario, produced by the backend. */
export function writeScenarioGenesis(): string {
  const dir = mkdtempSync(join(tmpdir(), "gamechain-ui-"));
  const path = join(dir, "genesis.json");
  const json = execFileSync(
    "python3",
    [
      "-c",
      "import sys\n" +
        "from gamechain.harness import genesis_for_scenario, load_scenario\n" +
        "print(genesis_for_scenario(load_scenario(sys.argv[1])).dumps())",
      SCENARIO_PATH,
    ],
    { encoding: "utf8" },
  );
  writeFileSync(path, json);
  return path;
}

export interface Gateway {
  url: string;
  proc: ChildProcess;
  stop(): Promise<void>;
}

export async function startGateway(opts: {
  genesis?: string;
  seed?: number;
}): Promise<Gateway> {
  const port = await freePort();
  const args = [
    "serve",
    "--listen",
    `127.0.0.1:${port}`,
    "--block-interval",
    "0",
    "--dev-faucet",
  ];
  if (opts.genesis !== undefined) args.push("--genesis", opts.genesis);
  if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
  const proc = spawn("gamechain", args, { stdio: ["ignore", "pipe", "pipe"] });
  const stderr: string[] = [];
  proc.stderr?.on("data", (chunk) => stderr.push(String(chunk)));

  const url = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`gateway exited early: ${stderr.join("")}`);
    }
    try {
      const res = await fetch(`${url}/head`);
      if (res.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error(`gateway never came up: ${stderr.join("")}`);
    }
    await sleep(50);
  }

  return {
    url,
    proc,
    stop(): Promise<void> {
      return new Promise((resolve) => {
        if (proc.exitCode !== null) return resolve();
        proc.once("exit", () => resolve());
        proc.kill("SIGINT");
        setTimeout(() => proc.kill("SIGKILL"), 5_000).unref();
      });
    },
  };
}

/** Run the 20-agent scenario against a gateway; resolves with the exit code. */
export function spawnScenarioRunner(gatewayUrl: string): {
  proc: ChildProcess;
  finished: Promise<number>;
} {
  const proc = spawn(
    "gamechain",
    ["run", SCENARIO_PATH, "--via-api", gatewayUrl],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const output: string[] = [];
  proc.stdout?.on("data", (chunk) => output.push(String(chunk)));
  proc.stderr?.on("data", (chunk) => output.push(String(chunk)));
  const finished = new Promise<number>((resolve, reject) => {
    proc.once("exit", (code) => {
      if (code === 0) resolve(0);
      else reject(new Error(`scenario runner exited ${code}: ${output.join("")}`));
    });
    proc.once("error", reject);
  });
  // a kill during teardown must not surface as an unhandled rejection
  finished.catch(() => undefined);
  return { proc, finished };
}

export function sleep(ms: number): Promise<void> {
  return new Promise((r) => setTimeout(r, ms));
}

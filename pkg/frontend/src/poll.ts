/** Poll a run until it reaches done or failed.
 *
 * Starts at one second between polls and backs off gently so long batches do
 * not hammer the gateway.  Resolves with the terminal record; the caller
 * decides how to present a failed run.
 */

import type { ApiClient, RunRecord } from "./api.js";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  onUpdate?: (record: RunRecord) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollRun(client: ApiClient, runId: string,
                              options: PollOptions = {}): Promise<RunRecord> {
  const backoff = options.backoff ?? 1.5;
  const maxIntervalMs = options.maxIntervalMs ?? 10_000;
  const sleep = options.sleep ?? defaultSleep;
  let interval = options.intervalMs ?? 1_000;
  for (;;) {
    const record = await client.getRun(runId);
    options.onUpdate?.(record);
    if (record.status === "done" || record.status === "failed") return record;
    await sleep(interval);
    interval = Math.min(interval * backoff, maxIntervalMs);
  }
}

/** Poll a job until it reaches a terminal state. */

import type { ApiClient } from "./api.js";
import type { JobDoc } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onProgress?: (job: JobDoc) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(api: ApiClient, jobId: string, options: PollOptions = {}): Promise<JobDoc> {
  const interval = options.intervalMs ?? 150;
  const timeout = options.timeoutMs ?? 120_000;
  const sleep = options.sleep ?? defaultSleep;
  const deadline = Date.now() + timeout;
  for (;;) {
    const job = await api.job(jobId);
    options.onProgress?.(job);
    if (job.state === "done" || job.state === "failed") {
      return job;
    }
    if (Date.now() > deadline) {
      throw new Error(`job ${jobId} still ${job.state} after ${timeout} ms`);
    }
    await sleep(interval);
  }
}

export function progressLabel(job: JobDoc): string {
  const pct = Math.round(job.progress * 100);
  switch (job.state) {
    case "queued":
      return "queued (device busy)";
    case "running":
      return `running ${job.pixels_done}/${job.pixels_total} (${pct}%)`;
    case "done":
      return `done: ${job.pixels_total} px`;
    case "failed":
      return `failed: ${job.error ?? "unknown error"}`;
  }
}

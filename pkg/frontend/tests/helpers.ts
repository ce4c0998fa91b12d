/** Fixture gateway: serves recorded API responses through a fetch stub.
 *
 * The fixtures under tests/fixtures/ were captured verbatim from a live
 * gateway over the shipped demo corpus, so contract tests compare the UI
 * against real wire bytes rather than hand-typed expectations.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient, RunRecord } from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface CapturedRequest {
  url: string;
  method: string;
  body: unknown;
}

export class FakeGateway {
  requests: CapturedRequest[] = [];
  /** run statuses returned before the terminal record, in order */
  pendingStatuses: string[] = [];
  failure: { status: number; error: string } | null = null;
  offline = false;

  /** terminal record served once pendingStatuses is exhausted */
  runRecord = fixtureJson<RunRecord>("run_done.json");

  readonly fetch: typeof fetch = async (input, init) => {
    const url = typeof input === "string" ? input : input.toString();
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.requests.push({ url, method, body });

    if (this.offline) throw new TypeError("fetch failed");
    if (this.failure) {
      return jsonResponse(this.failure.status, { error: this.failure.error });
    }

    if (url.endsWith("/api/config")) return rawResponse(fixtureText("config.json"));
    if (url.endsWith("/api/communities")) return rawResponse(fixtureText("communities.json"));
    if (url.includes("/members")) return rawResponse(fixtureText("members.json"));
    if (url.endsWith("/api/runs") && method === "POST") {
      return jsonResponse(200, { run_id: this.runRecord.run_id });
    }
    if (url.includes("/api/runs/")) {
      const status = this.pendingStatuses.shift();
      if (status) {
        const record = { ...this.runRecord, status, reports: null };
        return rawResponse(JSON.stringify(record));
      }
      return rawResponse(JSON.stringify(this.runRecord));
    }
    return jsonResponse(404, { error: `unknown route ${url}` });
  };

  client(): ApiClient {
    return new ApiClient("", this.fetch);
  }

  lastRequest(): CapturedRequest {
    const request = this.requests[this.requests.length - 1];
    if (!request) throw new Error("no requests captured");
    return request;
  }
}

function rawResponse(text: string): Response {
  return new Response(text, {
    status: 200, headers: { "Content-Type": "application/json" },
  });
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status, headers: { "Content-Type": "application/json" },
  });
}

export function formHtml(): string {
  return `
    <div id="banner"></div>
    <select id="community-select"></select>
    <input id="member-search">
    <input type="checkbox" id="all-members" checked>
    <div id="member-list"></div>
    <fieldset id="characteristics"></fieldset>
    <div id="thresholds"></div>
    <button id="submit-run" disabled></button>
    <div id="runs"></div>
  `;
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

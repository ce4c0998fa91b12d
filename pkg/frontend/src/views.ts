/** DOM construction for the member browser and the results view.
 *
 * Every cell value comes verbatim from an API response; this module only
 * arranges strings, it never derives a verdict or a score.
 */

import type { MemberEntry, MemberReport, RunRecord } from "./api.js";
import { declaredPreview, evidenceMass, optionalValue, reliability } from "./format.js";

export const CLASSIFICATIONS = ["Verified", "PartiallyVerified", "Suspicious", "Unverified"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Member rows with declared-profile preview and a selection checkbox. */
export function renderMemberList(container: HTMLElement, members: MemberEntry[],
                                 filter: string, disabled: boolean): void {
  container.replaceChildren();
  const needle = filter.trim().toLowerCase();
  for (const member of members) {
    if (needle && !member.member_id.toLowerCase().includes(needle)) continue;
    const row = el("label", "member-row");
    const box = el("input");
    box.type = "checkbox";
    box.value = member.member_id;
    box.className = "member-check";
    box.disabled = disabled;
    row.append(
      box,
      el("span", "member-id", member.member_id),
      el("span", "member-posts", `${member.total_posts} posts`),
      el("span", "member-declared", declaredPreview(member.declared)),
    );
    container.append(row);
  }
  if (!container.childElementCount) {
    container.append(el("p", "empty-note", "no members match"));
  }
}

function verdictTable(report: MemberReport): HTMLTableElement {
  const table = el("table", "verdicts");
  const head = table.createTHead().insertRow();
  for (const title of ["characteristic", "declared", "inferred", "reliability", "verdict"]) {
    head.append(el("th", undefined, title));
  }
  const body = table.createTBody();
  for (const verdict of report.verdicts) {
    const row = body.insertRow();
    row.insertCell().textContent = verdict.characteristic;
    row.insertCell().textContent = optionalValue(verdict.declared);
    row.insertCell().textContent = optionalValue(verdict.inferred);
    row.insertCell().textContent = reliability(verdict.reliability);
    const cell = row.insertCell();
    cell.textContent = verdict.verdict;
    cell.className = `verdict verdict-${verdict.verdict.toLowerCase()}`;
  }
  return table;
}

function portraitBlock(report: MemberReport): HTMLElement {
  const block = el("div", "portrait");
  const entries = Object.entries(report.profile.entries);
  if (!entries.length) {
    block.append(el("p", "empty-note",
                    "empty portrait: no characteristic was confirmed"));
    return block;
  }
  block.append(el("h4", undefined, "verified portrait"));
  const list = el("ul");
  for (const [characteristic, entry] of entries) {
    list.append(el("li", undefined,
                   `${characteristic}: ${entry.value} (reliability ${reliability(entry.reliability)})`));
  }
  block.append(list);
  return block;
}

export function renderMemberCard(report: MemberReport): HTMLElement {
  const card = el("article", "member-card");
  card.dataset.classification = report.classification;
  card.dataset.memberId = report.member_id;
  const header = el("header");
  header.append(
    el("h3", undefined, report.member_id),
    el("span", `badge badge-${report.classification.toLowerCase()}`, report.classification),
    el("span", "track-size", `${report.track_size} posts analyzed`),
  );
  card.append(header, verdictTable(report), portraitBlock(report));
  return card;
}

export interface ResultsView {
  root: HTMLElement;
  applyFilter: (classification: string | null) => void;
}

/** One card per member, classification filter chips, CSV download link. */
export function renderResults(record: RunRecord, csvUrl: string): ResultsView {
  const root = el("section", "results");
  if (record.status === "failed") {
    root.append(el("p", "error-panel", record.error ?? "run failed"));
    return { root, applyFilter: () => undefined };
  }
  const reports = record.reports ?? [];

  const toolbar = el("div", "toolbar");
  const chips: HTMLButtonElement[] = [];
  const allChip = el("button", "chip chip-active", "All");
  chips.push(allChip);
  toolbar.append(allChip);
  for (const classification of CLASSIFICATIONS) {
    const count = reports.filter((r) => r.classification === classification).length;
    const chip = el("button", "chip", `${classification} (${count})`);
    chip.dataset.classification = classification;
    chips.push(chip);
    toolbar.append(chip);
  }
  const csvLink = el("a", "csv-link", "download CSV");
  csvLink.href = csvUrl;
  toolbar.append(csvLink);
  root.append(toolbar);

  const cardsHost = el("div", "cards");
  for (const report of reports) cardsHost.append(renderMemberCard(report));
  root.append(cardsHost);

  const applyFilter = (classification: string | null) => {
    for (const card of Array.from(cardsHost.children) as HTMLElement[]) {
      const show = classification === null ||
        card.dataset.classification === classification;
      card.classList.toggle("hidden", !show);
    }
    for (const chip of chips) {
      chip.classList.toggle("chip-active",
                            (chip.dataset.classification ?? null) === classification);
    }
  };
  for (const chip of chips) {
    chip.addEventListener("click", () =>
      applyFilter(chip.dataset.classification ?? null));
  }
  return { root, applyFilter };
}

export function renderStatusLine(record: RunRecord): string {
  if (record.status === "done") {
    return `done: ${record.reports?.length ?? 0} member(s)`;
  }
  if (record.status === "failed") return `failed: ${record.error ?? "unknown error"}`;
  return record.status;
}

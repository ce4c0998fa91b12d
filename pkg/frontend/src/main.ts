/** Dashboard controller: community/member browsing, run form, run cards.
 *
 * Form defaults mirror the server's verifier configuration (fetched from
 * /api/config), all characteristics are pre-selected, and submission stays
 * disabled until a community plus at least one member (or "all members") is
 * chosen.  Results render whatever the gateway returns, with a CSV link to
 * the server-side export.
 */

import { ApiClient, ApiError, MemberEntry, ServerConfig } from "./api.js";
import { pollRun } from "./poll.js";
import { renderMemberList, renderResults, renderStatusLine } from "./views.js";

const THRESHOLD_FIELDS = ["theta_min", "theta_sat", "theta_conf", "per_post_cap",
                          "reference_year"] as const;

export interface Dashboard {
  refreshMembers(): Promise<void>;
  submit(): Promise<void>;
}

function must<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const node = root.querySelector(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node as T;
}

export function initDashboard(root: ParentNode, client: ApiClient): Dashboard {
  const banner = must<HTMLElement>(root, "#banner");
  const communitySelect = must<HTMLSelectElement>(root, "#community-select");
  const memberSearch = must<HTMLInputElement>(root, "#member-search");
  const allMembersBox = must<HTMLInputElement>(root, "#all-members");
  const memberList = must<HTMLElement>(root, "#member-list");
  const characteristicsHost = must<HTMLElement>(root, "#characteristics");
  const advancedHost = must<HTMLElement>(root, "#thresholds");
  const submitButton = must<HTMLButtonElement>(root, "#submit-run");
  const runsHost = must<HTMLElement>(root, "#runs");

  let members: MemberEntry[] = [];
  let serverConfig: ServerConfig | null = null;

  function showBanner(message: string, retry: () => void): void {
    banner.replaceChildren();
    const panel = document.createElement("div");
    panel.className = "error-banner";
    const text = document.createElement("span");
    text.textContent = message;
    const button = document.createElement("button");
    button.textContent = "retry";
    button.addEventListener("click", () => {
      banner.replaceChildren();
      retry();
    });
    panel.append(text, button);
    banner.append(panel);
  }

  function describeError(error: unknown): string {
    if (error instanceof ApiError) return error.message;
    return "cannot reach the verification gateway";
  }

  function updateSubmitState(): void {
    const haveCommunity = communitySelect.value !== "";
    const anyMember = allMembersBox.checked ||
      memberList.querySelectorAll<HTMLInputElement>(".member-check:checked").length > 0;
    submitButton.disabled = !(haveCommunity && anyMember && serverConfig !== null);
  }

  function renderCharacteristics(config: ServerConfig): void {
    characteristicsHost.replaceChildren();
    for (const characteristic of config.characteristics) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = true;  // verify everything unless the moderator opts out
      box.value = characteristic;
      box.className = "characteristic-check";
      label.append(box, document.createTextNode(" " + characteristic));
      characteristicsHost.append(label);
    }
  }

  function renderThresholds(config: ServerConfig): void {
    advancedHost.replaceChildren();
    for (const field of THRESHOLD_FIELDS) {
      const label = document.createElement("label");
      label.textContent = field + " ";
      const input = document.createElement("input");
      input.type = "number";
      input.step = "any";
      input.name = field;
      input.value = String(config[field]);
      input.dataset.default = String(config[field]);
      label.append(input);
      advancedHost.append(label);
    }
  }

  function renderMembers(): void {
    renderMemberList(memberList, members, memberSearch.value, allMembersBox.checked);
    updateSubmitState();
  }

  async function loadCatalog(): Promise<void> {
    try {
      const [config, communities] = await Promise.all([
        client.serverConfig(), client.listCommunities()]);
      serverConfig = config;
      renderCharacteristics(config);
      renderThresholds(config);
      communitySelect.replaceChildren();
      const placeholder = document.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "choose a community";
      communitySelect.append(placeholder);
      for (const community of communities) {
        const option = document.createElement("option");
        option.value = community.community_id;
        option.textContent = `${community.community_id} (${community.member_count} members)`;
        communitySelect.append(option);
      }
      updateSubmitState();
    } catch (error) {
      showBanner(describeError(error), () => void loadCatalog());
    }
  }

  async function refreshMembers(): Promise<void> {
    if (!communitySelect.value) {
      members = [];
      renderMembers();
      return;
    }
    try {
      members = await client.listMembers(communitySelect.value);
      renderMembers();
    } catch (error) {
      showBanner(describeError(error), () => void refreshMembers());
    }
  }

  function collectOverrides(): Record<string, number> {
    const overrides: Record<string, number> = {};
    for (const input of advancedHost.querySelectorAll<HTMLInputElement>("input")) {
      if (input.value !== input.dataset.default) {
        overrides[input.name] = Number(input.value);
      }
    }
    return overrides;
  }

  async function submit(): Promise<void> {
    const memberIds = allMembersBox.checked ? [] :
      Array.from(memberList.querySelectorAll<HTMLInputElement>(".member-check:checked"),
                 (box) => box.value);
    const characteristics = Array.from(
      characteristicsHost.querySelectorAll<HTMLInputElement>(".characteristic-check:checked"),
      (box) => box.value);
    const submission = {
      community_id: communitySelect.value,
      member_ids: memberIds,
      characteristics,
      config: collectOverrides(),
    };

    const card = document.createElement("article");
    card.className = "run-card";
    const title = document.createElement("h3");
    const status = document.createElement("p");
    status.className = "run-status";
    card.append(title, status);
    runsHost.prepend(card);

    try {
      const runId = await client.submitRun(submission);
      title.textContent = `run ${runId}`;
      status.textContent = "queued";
      const record = await pollRun(client, runId, {
        onUpdate: (r) => { status.textContent = renderStatusLine(r); },
      });
      const view = renderResults(record, client.exportUrl(runId, "csv"));
      card.append(view.root);
    } catch (error) {
      title.textContent = title.textContent || "run rejected";
      status.textContent = describeError(error);
      status.className = "run-status error-panel";
    }
  }

  communitySelect.addEventListener("change", () => void refreshMembers());
  memberSearch.addEventListener("input", renderMembers);
  allMembersBox.addEventListener("change", renderMembers);
  memberList.addEventListener("change", updateSubmitState);
  submitButton.addEventListener("click", () => void submit());

  void loadCatalog();
  return { refreshMembers, submit };
}

declare global {
  interface Window { sdverifyDashboard?: Dashboard }
}

if (typeof document !== "undefined" && document.getElementById("community-select")) {
  window.sdverifyDashboard = initDashboard(document, new ApiClient());
}

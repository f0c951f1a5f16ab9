/** DOM wiring for the annotation console.
 *
 * Views: a setup form (rosters, model, tick) and the live view (event pad,
 * player strip, tag toggles, feed, substitution form, per-player chart).
 * The chart is redrawn from /series on every poll; all score values come
 * from the server untouched.
 */

import { ApiClient } from "./api.js";
import { renderChart } from "./chart.js";
import { ConsoleController, describeError } from "./controller.js";
import { effectiveTags, parsePadLayout } from "./pad.js";
import type { EventBody, PadLayout, RostersDoc } from "./types.js";

const POLL_MS = 5000;

const api = new ApiClient("");
const controller = new ConsoleController(api);

let pad: PadLayout = { buttons: [], tags: [] };
let selectedPlayer: string | null = null;
let activeToggles: string[] = [];
let clock = { period: "1H" as "1H" | "2H", minute: 0, second: 0 };
let pollTimer: number | undefined;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

// ---------------------------------------------------------------------------
// Setup view
// ---------------------------------------------------------------------------

function parseRosterText(text: string): { player_id: string; label: string; starting: boolean }[] {
  // one player per line: "id, display label" — first 11 start by default
  const entries = text.split("\n").map((l) => l.trim()).filter(Boolean).map((line, idx) => {
    const [id, ...rest] = line.split(",");
    return {
      player_id: (id ?? "").trim(),
      label: rest.join(",").trim() || (id ?? "").trim(),
      starting: idx < 11,
    };
  });
  const seen = new Set<string>();
  for (const e of entries) {
    if (!e.player_id) throw new Error("every roster line needs a player id");
    if (seen.has(e.player_id)) throw new Error(`duplicate player ${e.player_id}`);
    seen.add(e.player_id);
  }
  return entries;
}

async function initSetup(): Promise<void> {
  const { models } = await api.listModels();
  const select = $("model-select") as HTMLSelectElement;
  select.innerHTML = models.map((m) => `<option value="${m}">${m}</option>`).join("");

  $("setup-form").addEventListener("submit", (evt) => {
    evt.preventDefault();
    void (async () => {
      const status = $("setup-status");
      try {
        const rosters: RostersDoc = {
          [(($("home-name") as HTMLInputElement).value || "HOME")]:
            parseRosterText(($("home-roster") as HTMLTextAreaElement).value),
          [(($("away-name") as HTMLInputElement).value || "AWAY")]:
            parseRosterText(($("away-roster") as HTMLTextAreaElement).value),
        };
        const tick = parseInt(($("tick-minutes") as HTMLInputElement).value || "5", 10);
        await controller.createSession(rosters, select.value, tick);
        window.location.hash = controller.state.sessionId ?? "";
        showLive();
      } catch (err) {
        status.textContent = describeError(err);
      }
    })();
  });
}

// ---------------------------------------------------------------------------
// Live view
// ---------------------------------------------------------------------------

function showLive(): void {
  $("setup-view").hidden = true;
  $("live-view").hidden = false;
  $("session-label").textContent = controller.state.sessionId ?? "";
  renderPlayerStrip();
  renderPad();
  renderToggles();
  renderSubForm();
  renderAll();
  pollTimer = window.setInterval(() => {
    void controller.refreshSeries().catch(() => undefined);
  }, POLL_MS);
}

function teamOf(playerId: string): string {
  for (const [team, entries] of Object.entries(controller.state.rosters)) {
    if (entries.some((e) => e.player_id === playerId)) return team;
  }
  throw new Error(`unknown player ${playerId}`);
}

function renderPlayerStrip(): void {
  const strip = $("player-strip");
  strip.innerHTML = "";
  for (const [team, entries] of Object.entries(controller.state.rosters)) {
    const group = document.createElement("div");
    group.className = "team-group";
    group.innerHTML = `<h3>${team}</h3>`;
    for (const entry of entries) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.textContent = entry.label;
      btn.dataset.player = entry.player_id;
      btn.className = "player-btn";
      btn.addEventListener("click", () => {
        selectedPlayer = entry.player_id;
        strip.querySelectorAll(".player-btn").forEach((b) => b.classList.remove("selected"));
        btn.classList.add("selected");
      });
      group.appendChild(btn);
    }
    strip.appendChild(group);
  }
}

function renderPad(): void {
  const grid = $("pad-grid");
  grid.innerHTML = "";
  pad.buttons.forEach((button, idx) => {
    const el = document.createElement("button");
    el.type = "button";
    el.className = "pad-btn";
    el.textContent = button.label;
    el.addEventListener("click", () => {
      void logFromPad(idx);
    });
    grid.appendChild(el);
  });
}

function renderToggles(): void {
  const box = $("tag-toggles");
  box.innerHTML = "";
  for (const tag of pad.tags) {
    const el = document.createElement("button");
    el.type = "button";
    el.className = "tag-btn";
    el.textContent = tag;
    el.addEventListener("click", () => {
      if (activeToggles.includes(tag)) {
        activeToggles = activeToggles.filter((t) => t !== tag);
        el.classList.remove("active");
      } else {
        activeToggles.push(tag);
        el.classList.add("active");
      }
    });
    box.appendChild(el);
  }
}

function readClock(): void {
  clock = {
    period: ($("clock-period") as HTMLSelectElement).value as "1H" | "2H",
    minute: parseInt(($("clock-minute") as HTMLInputElement).value || "0", 10),
    second: parseInt(($("clock-second") as HTMLInputElement).value || "0", 10),
  };
}

async function logFromPad(buttonIndex: number): Promise<void> {
  const button = pad.buttons[buttonIndex];
  if (!button) return;
  const toast = $("toast");
  if (selectedPlayer === null) {
    toast.textContent = "select a player first";
    return;
  }
  readClock();
  const body: EventBody & { player_id: string } = {
    team_id: teamOf(selectedPlayer),
    player_id: selectedPlayer,
    period: clock.period,
    clock_s: clock.minute * 60 + clock.second,
    event: button.event,
    sub_event: button.sub_event,
    tags: effectiveTags(button, activeToggles),
  };
  try {
    await controller.logEvent(body);
    toast.textContent = "";
    activeToggles = [];
    document.querySelectorAll(".tag-btn.active").forEach((b) => b.classList.remove("active"));
    renderAll();
  } catch (err) {
    toast.textContent = describeError(err); // e.g. player_off_pitch: blocking toast
  }
}

function renderSubForm(): void {
  $("sub-form").addEventListener("submit", (evt) => {
    evt.preventDefault();
    void (async () => {
      const off = ($("sub-off") as HTMLInputElement).value.trim();
      const on = ($("sub-on") as HTMLInputElement).value.trim();
      const minute = parseInt(($("sub-minute") as HTMLInputElement).value || "0", 10);
      try {
        await controller.substitute(minute, off, on, teamOf(off));
        $("sub-status").textContent = "";
        renderAll();
      } catch (err) {
        $("sub-status").textContent = describeError(err);
      }
    })();
  });

  $("export-btn").addEventListener("click", () => {
    void (async () => {
      const text = await controller.exportLog();
      const blob = new Blob([text], { type: "application/jsonl" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = `${controller.state.sessionId}.log`;
      a.click();
      URL.revokeObjectURL(a.href);
    })();
  });
}

function renderFeed(): void {
  const tbody = $("feed-body");
  tbody.innerHTML = "";
  for (const row of [...controller.state.feed].reverse()) {
    const tr = document.createElement("tr");
    tr.innerHTML = `<td>${row.seq}</td><td>${row.minute}'</td>` +
      `<td>${row.label}</td><td>${row.name}</td>`;
    tbody.appendChild(tr);
  }
}

function renderCharts(): void {
  const holder = $("charts");
  holder.innerHTML = "";
  for (const team of Object.keys(controller.state.rosters)) {
    const lines = controller.state.lines.filter((l) => l.teamId === team);
    const markers = controller.state.markers.filter((m) => m.teamId === team);
    const div = document.createElement("div");
    div.className = "chart";
    div.innerHTML = renderChart(lines, { title: team, markers });
    holder.appendChild(div);
  }
}

function renderBanner(): void {
  const banner = $("banner");
  banner.textContent = controller.state.banner ?? "";
  banner.hidden = controller.state.banner === null;
}

function renderAll(): void {
  renderFeed();
  renderCharts();
  renderBanner();
}

// ---------------------------------------------------------------------------

async function start(): Promise<void> {
  pad = parsePadLayout(await (await fetch("./pad_layout.json")).json());
  controller.onChange(renderAll);
  const fromHash = window.location.hash.replace(/^#/, "");
  if (fromHash) {
    try {
      await controller.resume(fromHash); // reload-safe: server state only
      showLive();
      return;
    } catch {
      window.location.hash = "";
    }
  }
  await initSetup();
}

void start();

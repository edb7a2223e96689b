import assert from "node:assert/strict";
import { test } from "node:test";
import { JSDOM } from "jsdom";

import { OfferDto, SessionSettings } from "../src/api.js";
import { ChatState } from "../src/state.js";
import { renderApp, ViewHandlers } from "../src/view.js";

const SETTINGS: SessionSettings = { policy_kind: "rule", first_time: true, style: "brief" };

function makeRoot(): HTMLElement {
  const dom = new JSDOM("<main id='app'></main>");
  return dom.window.document.getElementById("app") as HTMLElement;
}

function handlers(calls: Record<string, unknown[]>): ViewHandlers {
  return {
    onStart: (settings) => (calls.start = [...(calls.start ?? []), settings]),
    onSend: (text) => (calls.send = [...(calls.send ?? []), text]),
    onQuickReply: (offer) => (calls.quick = [...(calls.quick ?? []), offer]),
  };
}

function state(partial: Partial<ChatState>): ChatState {
  return {
    settings: SETTINGS,
    sessionId: "s",
    status: "active",
    messages: [],
    reward: null,
    error: null,
    ...partial,
  };
}

const OFFERS: OfferDto[] = [
  { id: "trivia", label: "trivia", kind: "category" },
  { id: "word", label: "word", kind: "category" },
];

test("quick replies render for the latest offers and activate the handler", () => {
  const root = makeRoot();
  const calls: Record<string, unknown[]> = {};
  renderApp(
    root,
    state({
      messages: [{ sender: "agent", text: "Pick one", offers: OFFERS }],
    }),
    handlers(calls),
  );
  const buttons = root.querySelectorAll<HTMLButtonElement>(".quick-reply");
  assert.equal(buttons.length, 2);
  assert.equal(buttons[0]!.textContent, "trivia");
  buttons[1]!.click();
  assert.deepEqual(calls.quick, [OFFERS[1]]);
});

test("metadata chips appear only when the move carried metadata", () => {
  const root = makeRoot();
  renderApp(
    root,
    state({
      messages: [
        { sender: "agent", text: "plain" },
        { sender: "agent", text: "rated", metadataChips: ["4.0 ★ · 912 reviews"] },
      ],
    }),
    handlers({}),
  );
  const items = root.querySelectorAll(".message");
  assert.equal(items[0]!.querySelectorAll(".chip").length, 0);
  const chips = items[1]!.querySelectorAll(".chip");
  assert.equal(chips.length, 1);
  assert.match(chips[0]!.textContent ?? "", /912 reviews/);
});

test("input is disabled exactly when the session is terminal", () => {
  const root = makeRoot();
  renderApp(root, state({ status: "active" }), handlers({}));
  let input = root.querySelector<HTMLInputElement>(".composer input");
  assert.equal(input?.disabled, false);

  renderApp(
    root,
    state({
      status: "launched",
      messages: [
        {
          sender: "agent",
          text: "OK, here's Word Master.",
          terminalBanner: { kind: "launched", label: "Word Master", reward: 1 },
        },
      ],
    }),
    handlers({}),
  );
  input = root.querySelector<HTMLInputElement>(".composer input");
  assert.equal(input?.disabled, true);
  const banner = root.querySelector(".banner.launched");
  assert.match(banner?.textContent ?? "", /Launched Word Master \(reward \+1\)/);
});

test("typing and submitting posts the utterance", () => {
  const root = makeRoot();
  const calls: Record<string, unknown[]> = {};
  renderApp(root, state({}), handlers(calls));
  const input = root.querySelector<HTMLInputElement>(".composer input")!;
  const form = root.querySelector<HTMLFormElement>(".composer")!;
  input.value = "history games";
  form.dispatchEvent(new (root.ownerDocument.defaultView as any).Event("submit"));
  assert.deepEqual(calls.send, ["history games"]);
});

test("api error renders an alert with a retry control", () => {
  const root = makeRoot();
  const calls: Record<string, unknown[]> = {};
  renderApp(root, state({ status: "error", error: "boom" }), handlers(calls));
  const alert = root.querySelector("[role=alert]");
  assert.match(alert?.textContent ?? "", /boom/);
  root.querySelector<HTMLButtonElement>(".retry")!.click();
  assert.equal((calls.start ?? []).length, 1);
});

test("settings lock once the session starts", () => {
  const root = makeRoot();
  renderApp(root, state({ status: "active" }), handlers({}));
  const selects = root.querySelectorAll<HTMLSelectElement>(".settings select");
  assert.ok([...selects].every((s) => s.disabled));

  renderApp(root, state({ status: "idle", sessionId: null }), handlers({}));
  const fresh = root.querySelectorAll<HTMLSelectElement>(".settings select");
  assert.ok([...fresh].every((s) => !s.disabled));
});

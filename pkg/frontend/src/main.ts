import { SessionSettings, SkillScoutApi } from "./api.js";
import { ChatController } from "./state.js";
import { renderApp, ViewHandlers } from "./view.js";

const DEFAULT_SETTINGS: SessionSettings = {
  policy_kind: "rule",
  first_time: true,
  style: "brief",
};

function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const api = new SkillScoutApi("");
  let controller = new ChatController(api, DEFAULT_SETTINGS);

  const handlers: ViewHandlers = {
    onStart(settings) {
      controller = new ChatController(api, settings);
      controller.onChange((state) => renderApp(root, state, handlers));
      void controller.start();
    },
    onSend(text) {
      void controller.send(text);
    },
    onQuickReply(offer) {
      void controller.sendQuickReply(offer);
    },
  };

  controller.onChange((state) => renderApp(root, state, handlers));
  renderApp(root, controller.getState(), handlers);
}

boot();

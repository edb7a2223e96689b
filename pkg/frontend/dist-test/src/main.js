import { SkillScoutApi } from "./api.js";
import { ChatController } from "./state.js";
import { renderApp } from "./view.js";
const DEFAULT_SETTINGS = {
    policy_kind: "rule",
    first_time: true,
    style: "brief",
};
function boot() {
    const root = document.getElementById("app");
    if (!root)
        throw new Error("missing #app element");
    const api = new SkillScoutApi("");
    let controller = new ChatController(api, DEFAULT_SETTINGS);
    const handlers = {
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

/** DOM rendering: a settings bar, the transcript, and the composer. */
import { inputEnabled } from "./state.js";
const POLICIES = ["rule", "rl", "baseline-popularity"];
const STYLES = ["brief", "verbose"];
export function renderApp(root, state, handlers) {
    const doc = root.ownerDocument;
    root.textContent = "";
    root.appendChild(renderSettings(doc, state, handlers));
    root.appendChild(renderTranscript(doc, state, handlers));
    root.appendChild(renderComposer(doc, state, handlers));
    if (state.error) {
        const err = doc.createElement("div");
        err.className = "error-bar";
        err.setAttribute("role", "alert");
        err.textContent = state.error;
        const retry = doc.createElement("button");
        retry.textContent = "Retry";
        retry.className = "retry";
        retry.addEventListener("click", () => handlers.onStart(state.settings));
        err.appendChild(retry);
        root.appendChild(err);
    }
}
function renderSettings(doc, state, handlers) {
    const bar = doc.createElement("form");
    bar.className = "settings";
    const started = state.status !== "idle" && state.status !== "error";
    const policy = doc.createElement("select");
    policy.name = "policy";
    policy.setAttribute("aria-label", "dialog policy");
    for (const kind of POLICIES) {
        const opt = doc.createElement("option");
        opt.value = kind;
        opt.textContent = kind;
        opt.selected = kind === state.settings.policy_kind;
        policy.appendChild(opt);
    }
    policy.disabled = started;
    const firstTime = doc.createElement("input");
    firstTime.type = "checkbox";
    firstTime.checked = state.settings.first_time;
    firstTime.disabled = started;
    const firstTimeLabel = doc.createElement("label");
    firstTimeLabel.className = "first-time";
    firstTimeLabel.append(firstTime, doc.createTextNode(" first-time user"));
    const style = doc.createElement("select");
    style.name = "style";
    style.setAttribute("aria-label", "conversational style");
    for (const s of STYLES) {
        const opt = doc.createElement("option");
        opt.value = s;
        opt.textContent = s;
        opt.selected = s === state.settings.style;
        style.appendChild(opt);
    }
    style.disabled = started;
    const start = doc.createElement("button");
    start.type = "submit";
    start.className = "start";
    start.textContent = started ? "New chat" : "Start chat";
    start.disabled = state.status === "starting" || state.status === "waiting";
    bar.addEventListener("submit", (event) => {
        event.preventDefault();
        handlers.onStart({
            policy_kind: policy.value,
            first_time: firstTime.checked,
            style: style.value,
        });
    });
    bar.append(policy, firstTimeLabel, style, start);
    return bar;
}
function renderTranscript(doc, state, handlers) {
    const list = doc.createElement("ol");
    list.className = "transcript";
    list.setAttribute("aria-live", "polite");
    for (const message of state.messages) {
        const item = doc.createElement("li");
        item.className = `message ${message.sender}`;
        if (message.text) {
            const bubble = doc.createElement("p");
            bubble.className = "bubble";
            bubble.textContent = message.text;
            item.appendChild(bubble);
        }
        if (message.metadataChips) {
            const chips = doc.createElement("ul");
            chips.className = "chips";
            for (const chip of message.metadataChips) {
                const li = doc.createElement("li");
                li.className = "chip";
                li.textContent = chip;
                chips.appendChild(li);
            }
            item.appendChild(chips);
        }
        if (message.offers && message === state.messages[state.messages.length - 1]) {
            item.appendChild(renderQuickReplies(doc, state, message.offers, handlers));
        }
        if (message.terminalBanner) {
            const banner = doc.createElement("div");
            const b = message.terminalBanner;
            banner.className = `banner ${b.kind}`;
            banner.setAttribute("role", "status");
            banner.textContent =
                b.kind === "launched"
                    ? `Launched ${b.label} (reward ${format(b.reward)})`
                    : `${b.label} (reward ${format(b.reward)})`;
            item.appendChild(banner);
        }
        list.appendChild(item);
    }
    return list;
}
function renderQuickReplies(doc, state, offers, handlers) {
    const wrap = doc.createElement("div");
    wrap.className = "quick-replies";
    wrap.setAttribute("role", "group");
    wrap.setAttribute("aria-label", "suggested replies");
    for (const offer of offers) {
        const btn = doc.createElement("button");
        btn.type = "button";
        btn.className = `quick-reply ${offer.kind}`;
        btn.dataset.offerId = offer.id;
        btn.textContent = offer.label;
        btn.disabled = !inputEnabled(state);
        btn.addEventListener("click", () => handlers.onQuickReply(offer));
        wrap.appendChild(btn);
    }
    return wrap;
}
function renderComposer(doc, state, handlers) {
    const form = doc.createElement("form");
    form.className = "composer";
    const input = doc.createElement("input");
    input.type = "text";
    input.name = "utterance";
    input.placeholder = inputEnabled(state) ? "Say something…" : "";
    input.setAttribute("aria-label", "your message");
    input.disabled = !inputEnabled(state);
    const send = doc.createElement("button");
    send.type = "submit";
    send.textContent = "Send";
    send.disabled = !inputEnabled(state);
    form.append(input, send);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        handlers.onSend(input.value);
        input.value = "";
    });
    return form;
}
function format(reward) {
    return reward > 0 ? `+${reward}` : `${reward}`;
}

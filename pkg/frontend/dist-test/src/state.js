/** Session view-model: everything rendered comes from API response fields. */
import { ApiError, } from "./api.js";
export function metadataChips(metadata) {
    if (!metadata)
        return [];
    const chips = [];
    if (metadata.rating !== undefined && metadata.reviews !== undefined) {
        chips.push(`${metadata.rating.toFixed(1)} ★ · ${metadata.reviews} reviews`);
    }
    if (metadata.trending)
        chips.push("Trending");
    if (metadata.recommended)
        chips.push("Recommended");
    if (metadata.description)
        chips.push(metadata.description);
    return chips;
}
export function agentMessage(move, reward) {
    const message = { sender: "agent", text: move.text };
    if (move.offers.length > 0 && !move.terminal) {
        message.offers = move.offers;
    }
    const chips = metadataChips(move.metadata);
    if (chips.length > 0) {
        message.metadataChips = chips;
    }
    if (move.terminal) {
        message.terminalBanner = move.launched
            ? { kind: "launched", label: move.launched.label, reward }
            : { kind: "ended", label: "Dialog ended", reward };
    }
    return message;
}
/** Input accepts text exactly while a session is active. */
export function inputEnabled(state) {
    return state.status === "active";
}
export class ChatController {
    api;
    state;
    listeners = [];
    constructor(api, settings) {
        this.api = api;
        this.state = {
            settings,
            sessionId: null,
            status: "idle",
            messages: [],
            reward: null,
            error: null,
        };
    }
    getState() {
        return this.state;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    update(patch) {
        this.state = { ...this.state, ...patch };
        for (const listener of this.listeners)
            listener(this.state);
    }
    /** Open the session and render the agent's opening move. */
    async start() {
        if (this.state.status !== "idle" && this.state.status !== "error") {
            return;
        }
        this.update({ status: "starting", error: null, messages: [], reward: null });
        try {
            const out = await this.api.createSession(this.state.settings);
            const message = agentMessage(out.move, out.reward);
            this.update({
                sessionId: out.session_id,
                messages: [message],
                status: statusFrom(out.status, out.done),
                reward: out.done ? out.reward : null,
            });
        }
        catch (err) {
            this.update({ status: "error", error: describe(err) });
        }
    }
    /** Post one utterance; quick-reply activation routes through here too, so
     * both produce the identical request payload. */
    async send(text) {
        const trimmed = text.trim();
        if (!trimmed || this.state.status !== "active" || !this.state.sessionId) {
            return;
        }
        const pending = { sender: "user", text: trimmed };
        this.update({ status: "waiting", messages: [...this.state.messages, pending] });
        try {
            const out = await this.api.postUtterance(this.state.sessionId, trimmed);
            const messages = [...this.state.messages];
            if (out.move) {
                messages.push(agentMessage(out.move, out.reward));
            }
            else if (out.done) {
                messages.push({
                    sender: "agent",
                    text: "",
                    terminalBanner: { kind: "ended", label: "Dialog ended", reward: out.reward },
                });
            }
            this.update({
                messages,
                status: statusFrom(out.status, out.done),
                reward: out.done ? out.reward : null,
            });
        }
        catch (err) {
            if (err instanceof ApiError && err.code === "session_terminal") {
                this.update({ status: "ended", error: err.message });
            }
            else {
                this.update({ status: "error", error: describe(err) });
            }
        }
    }
    /** Activating a quick reply posts the offer's label as the utterance. */
    sendQuickReply(offer) {
        return this.send(offer.label);
    }
}
function statusFrom(status, done) {
    if (!done && status === "active")
        return "active";
    return status === "launched" ? "launched" : "ended";
}
function describe(err) {
    if (err instanceof ApiError)
        return `${err.code}: ${err.message}`;
    return err instanceof Error ? err.message : String(err);
}

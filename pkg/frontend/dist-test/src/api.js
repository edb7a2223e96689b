/** Typed client for the SkillScout session API. */
export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function readJson(resp) {
    try {
        return await resp.json();
    }
    catch {
        return {};
    }
}
export class SkillScoutApi {
    baseUrl;
    fetchImpl;
    constructor(baseUrl = "", fetchImpl = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl;
        this.fetchImpl = fetchImpl;
    }
    async request(method, path, body) {
        const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
            method,
            headers: { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const doc = (await readJson(resp));
        if (!resp.ok) {
            throw new ApiError(resp.status, String(doc.code ?? "error"), String(doc.message ?? `request failed with status ${resp.status}`));
        }
        return doc;
    }
    createSession(settings) {
        return this.request("POST", "/v1/sessions", {
            policy: settings.policy_kind,
            profile: { first_time: settings.first_time, style: settings.style },
        });
    }
    postUtterance(sessionId, text) {
        return this.request("POST", `/v1/sessions/${sessionId}/utterances`, { text });
    }
    metrics() {
        return this.request("GET", "/v1/metrics");
    }
}

// Secondary panels: coverage report, audit log, repository browser.
import { clear, el } from "./dom.js";
export function renderCheckReport(report) {
    const root = el("div", { className: "check-report" });
    if (!report) {
        root.append(el("p", { className: "empty" }, "no session loaded"));
        return root;
    }
    root.append(el("p", { className: report.ok ? "check-ok" : "check-bad" }, report.ok
        ? `all obstacles covered at threshold ${report.threshold}`
        : `open findings at threshold ${report.threshold}`));
    const table = el("table", { className: "verdicts" }, el("tr", {}, el("th", {}, "node"), el("th", {}, "name"), el("th", {}, "risk"), el("th", {}, "verdict"), el("th", {}, "reason")));
    for (const verdict of report.verdicts) {
        table.append(el("tr", { className: `verdict-${verdict.verdict}` }, el("td", {}, verdict.node), el("td", {}, verdict.name), el("td", {}, verdict.effective_risk ?? "-"), el("td", {}, verdict.verdict), el("td", {}, verdict.reason)));
    }
    root.append(table);
    if (report.violations.length) {
        const list = el("ul", { className: "violations" });
        for (const violation of report.violations) {
            list.append(el("li", {}, violation));
        }
        root.append(el("h4", {}, "structural violations"), list);
    }
    return root;
}
export function renderAudit(entries) {
    const root = el("div", { className: "audit-log" });
    const table = el("table", {}, el("tr", {}, el("th", {}, "#"), el("th", {}, "step"), el("th", {}, "action"), el("th", {}, "subject"), el("th", {}, "note")));
    entries.forEach((entry, index) => {
        table.append(el("tr", { className: `step-${entry.step.replace(".", "-")}` }, el("td", {}, String(index)), el("td", {}, entry.step), el("td", {}, entry.action), el("td", {}, entry.subject.join(", ")), el("td", {}, entry.note)));
    });
    root.append(table);
    return root;
}
export function renderRepositoryBrowser(api) {
    const root = el("div", { className: "repo-browser" });
    const results = el("div", { className: "repo-results" });
    let kind = "obstacles";
    let text = "";
    const show = (entries) => {
        clear(results);
        const list = el("ul", {});
        for (const entry of entries) {
            list.append(el("li", { className: `repo-entry repo-${entry.kind}` }, el("strong", {}, `${entry.id} ${entry.name ?? ""}`), el("div", { className: "definition" }, entry.definition ?? ""), entry.data_quality_notes?.length
                ? el("div", { className: "notes" }, entry.data_quality_notes.map((n) => `note: ${n}`).join(" | "))
                : null));
        }
        results.append(list);
    };
    const load = () => {
        const query = text.trim() || undefined;
        const fetcher = kind === "goals"
            ? api.repoGoals()
            : kind === "obstacles"
                ? api.repoObstacles(query ? { text: query } : {})
                : api.repoTactics({});
        void fetcher.then((entries) => {
            const filtered = kind === "obstacles" || !query
                ? entries
                : entries.filter((e) => `${e.id} ${e.name} ${e.definition}`.toLowerCase()
                    .includes(query.toLowerCase()));
            show(filtered);
        });
    };
    const kindSelect = el("select", {
        onchange: (event) => {
            kind = event.target.value;
            load();
        },
    }, el("option", { value: "obstacles" }, "obstacles"), el("option", { value: "goals" }, "goals"), el("option", { value: "tactics" }, "tactics"));
    root.append(el("div", { className: "repo-controls" }, kindSelect, el("input", {
        placeholder: "filter text",
        oninput: (event) => {
            text = event.target.value;
            load();
        },
    })), results);
    load();
    return root;
}

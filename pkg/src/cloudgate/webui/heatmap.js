// Risk heat-map picker: a 5x5 grid built from the server-provided matrix
// (never hardcoded). Clicking a cell submits an assessment for the selected
// obstacle; an optional override requires a note before submit unlocks.
import { el } from "./dom.js";
export function renderHeatmap(matrix, current, callbacks) {
    const root = el("div", { className: "risk-heatmap" });
    let note = "";
    let override = "";
    const noteInput = el("input", {
        className: "override-note",
        placeholder: "assessment note (required with an override)",
        oninput: (event) => {
            note = event.target.value;
            sync();
        },
    });
    const overrideSelect = el("select", {
        className: "override-level",
        onchange: (event) => {
            override = event.target.value;
            sync();
        },
    }, el("option", { value: "" }, "no override"));
    for (const level of ["L", "M", "H", "E", "V"]) {
        overrideSelect.append(el("option", { value: level }, level));
    }
    const hint = el("span", { className: "override-hint" });
    const cells = [];
    const submit = (likelihood, consequence) => {
        callbacks.onPick(likelihood, consequence, note, override === "" ? null : override);
    };
    const sync = () => {
        const blocked = override !== "" && note.trim() === "";
        for (const cell of cells)
            cell.disabled = blocked;
        hint.textContent = blocked
            ? "an override needs a note before you can pick a cell" : "";
    };
    const table = el("table", { className: "heatmap-grid" });
    const header = el("tr", {}, el("th", {}, "likelihood \\ consequence"));
    for (const consequence of matrix.consequences) {
        header.append(el("th", {}, consequence));
    }
    table.append(header);
    // most severe likelihood on top, matching the published table
    for (let r = matrix.likelihoods.length - 1; r >= 0; r--) {
        const likelihood = matrix.likelihoods[r];
        const tr = el("tr", {}, el("th", {}, likelihood));
        matrix.consequences.forEach((consequence, c) => {
            const level = matrix.grid[r][c];
            const isCurrent = current !== null &&
                current.likelihood === likelihood && current.consequence === consequence;
            const cell = el("button", {
                className: `heat-cell risk-${level}${isCurrent ? " current" : ""}`,
                "data-likelihood": likelihood,
                "data-consequence": consequence,
                title: `${likelihood} x ${consequence} = ${level}`,
                onclick: () => submit(likelihood, consequence),
            }, level);
            cells.push(cell);
            tr.append(el("td", {}, cell));
        });
        table.append(tr);
    }
    root.append(table, el("div", { className: "heatmap-controls" }, overrideSelect, noteInput, hint));
    sync();
    return root;
}

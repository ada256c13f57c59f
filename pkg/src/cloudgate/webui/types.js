// Wire types mirroring the HTTP API payloads.
export function effectiveRisk(a, matrix) {
    if (!a)
        return null;
    if (a.override)
        return a.override;
    return computedRisk(a.likelihood, a.consequence, matrix);
}
export function computedRisk(likelihood, consequence, matrix) {
    const row = matrix.likelihoods.indexOf(likelihood);
    const col = matrix.consequences.indexOf(consequence);
    const level = matrix.grid[row]?.[col];
    if (!level)
        throw new Error(`matrix has no cell (${likelihood}, ${consequence})`);
    return level;
}

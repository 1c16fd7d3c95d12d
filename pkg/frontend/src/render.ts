import { parseCsv, requireColumns, numeric, SchemaError, Table } from "./csv";
import { RECIPES } from "./recipes";
import { FigureRecipe, SeriesData } from "./types";
import * as svg from "./svg";

export interface RenderResult {
    svg: string;
    seriesCount: number;
}

/** Render one figure's CSV text to a deterministic SVG string. */
export function render(figure: string, csvText: string): RenderResult {
    const recipe = RECIPES[figure];
    if (!recipe) {
        throw new Error(`unknown figure '${figure}' (know: ${Object.keys(RECIPES).join(", ")})`);
    }
    const table = parseCsv(csvText);
    if (table.rows.length === 0) {
        throw new SchemaError("empty CSV: header only");
    }
    const needed = [...recipe.seriesKeys, recipe.xColumn,
                    ...(recipe.markerColumn ? [recipe.markerColumn] : []),
                    ...(recipe.lineColumn ? [recipe.lineColumn] : []),
                    ...(recipe.overlayColumn ? [recipe.overlayColumn] : []),
                    ...(recipe.alsoRequire ?? [])];
    const cols = requireColumns(table, needed);
    return recipe.scatter
        ? renderScatter(recipe, table, cols)
        : renderChart(recipe, table, cols);
}

function seriesLabel(recipe: FigureRecipe, row: string[],
                     cols: Map<string, number>): string {
    return recipe.seriesKeys
        .map((k) => `${k}=${row[cols.get(k)!]}`)
        .join(" ");
}

function collectSeries(recipe: FigureRecipe, table: Table,
                       cols: Map<string, number>): SeriesData[] {
    // group rows, then average y over duplicate x (e.g. per-user rows)
    const byLabel = new Map<string, Map<number, { m: number[]; l: number[]; o: number[] }>>();
    for (const row of table.rows) {
        const label = seriesLabel(recipe, row, cols);
        const x = numeric(row[cols.get(recipe.xColumn)!]!, recipe.xColumn);
        if (!byLabel.has(label)) byLabel.set(label, new Map());
        const perX = byLabel.get(label)!;
        if (!perX.has(x)) perX.set(x, { m: [], l: [], o: [] });
        const cell = perX.get(x)!;
        if (recipe.markerColumn) {
            const v = numeric(row[cols.get(recipe.markerColumn)!]!, recipe.markerColumn);
            if (Number.isFinite(v)) cell.m.push(v);
        }
        if (recipe.lineColumn) {
            const v = numeric(row[cols.get(recipe.lineColumn)!]!, recipe.lineColumn);
            if (Number.isFinite(v)) cell.l.push(v);
        }
        if (recipe.overlayColumn) {
            const v = numeric(row[cols.get(recipe.overlayColumn)!]!, recipe.overlayColumn);
            if (Number.isFinite(v)) cell.o.push(v);
        }
    }
    const mean = (vs: number[]) => vs.reduce((a, b) => a + b, 0) / vs.length;
    const labels = [...byLabel.keys()].sort();
    return labels.map((label) => {
        const perX = byLabel.get(label)!;
        const xs = [...perX.keys()].sort((a, b) => a - b);
        const out: SeriesData = { label, line: [], markers: [], overlay: [] };
        for (const x of xs) {
            const cell = perX.get(x)!;
            if (cell.m.length) out.markers.push([x, mean(cell.m)]);
            if (cell.l.length) out.line.push([x, mean(cell.l)]);
            if (cell.o.length) out.overlay.push([x, mean(cell.o)]);
        }
        return out;
    });
}

function extent(values: number[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (!Number.isFinite(lo)) throw new SchemaError("no numeric data to plot");
    return [lo, hi];
}

function renderChart(recipe: FigureRecipe, table: Table,
                     cols: Map<string, number>): RenderResult {
    const series = collectSeries(recipe, table, cols);
    const xs: number[] = [];
    const ys: number[] = [];
    for (const s of series) {
        for (const [x, y] of [...s.line, ...s.markers, ...s.overlay]) {
            xs.push(x);
            ys.push(y);
        }
    }
    const [x0, x1] = extent(xs);
    let [y0, y1] = extent(ys);
    const pad = 0.06 * (y1 - y0 || 1);
    y0 -= pad;
    y1 += pad;
    const { left, right, top, bottom } = svg.MARGIN;
    const sx = svg.makeScale([x0, x1], [left, svg.WIDTH - right], recipe.x.scale);
    const sy = svg.makeScale([y0, y1], [svg.HEIGHT - bottom, top], recipe.y.scale);
    const parts: string[] = [];
    // axes
    parts.push(svg.polyline([[left, top], [left, svg.HEIGHT - bottom],
                             [svg.WIDTH - right, svg.HEIGHT - bottom]], "#000", null, 1));
    for (const t of sx.ticks) {
        const x = sx(t);
        parts.push(svg.polyline([[x, svg.HEIGHT - bottom], [x, svg.HEIGHT - bottom + 4]],
                                "#000", null, 1));
        parts.push(svg.text(x, svg.HEIGHT - bottom + 16, svg.fmt(t), "middle"));
    }
    for (const t of sy.ticks) {
        const y = sy(t);
        parts.push(svg.polyline([[left - 4, y], [left, y]], "#000", null, 1));
        parts.push(svg.text(left - 7, y + 3.5, svg.fmt(t), "end"));
    }
    parts.push(svg.text((left + svg.WIDTH - right) / 2, svg.HEIGHT - 10,
                        recipe.x.label, "middle"));
    parts.push(`<g transform="rotate(-90 14 ${(top + svg.HEIGHT - bottom) / 2})">` +
        svg.text(14, (top + svg.HEIGHT - bottom) / 2, recipe.y.label, "middle") + "</g>");
    // series: closed forms as lines (dotted when unquantized), points as crosses
    series.forEach((s, i) => {
        const color = svg.PALETTE[i % svg.PALETTE.length]!;
        const dotted = s.label.includes("quantized=0") || s.label.includes("quantized=False");
        parts.push(svg.polyline(s.line.map(([x, y]) => [sx(x), sy(y)]),
                                color, dotted ? "2 3" : null, 1.4));
        parts.push(svg.polyline(s.overlay.map(([x, y]) => [sx(x), sy(y)]),
                                color, "6 3", 0.9));
        for (const [x, y] of s.markers) {
            parts.push(svg.cross(sx(x), sy(y), 3.2, color));
        }
        const ly = top + 14 * i;
        parts.push(svg.polyline([[svg.WIDTH - right + 8, ly], [svg.WIDTH - right + 26, ly]],
                                color, dotted ? "2 3" : null, 1.4));
        parts.push(svg.text(svg.WIDTH - right + 30, ly + 3.5, s.label, "start", 10));
    });
    return { svg: svg.svgDocument(parts.join("\n")), seriesCount: series.length };
}

function renderScatter(recipe: FigureRecipe, table: Table,
                       cols: Map<string, number>): RenderResult {
    // small-multiple panels, one per distinct panel-key combination
    const panels = new Map<string, Array<[number, number]>>();
    for (const row of table.rows) {
        const label = recipe.scatter!.panelKeys
            .map((k) => `${k}=${row[cols.get(k)!]}`)
            .join(" ");
        const re = numeric(row[cols.get(recipe.xColumn)!]!, recipe.xColumn);
        const im = numeric(row[cols.get(recipe.markerColumn!)!]!, recipe.markerColumn!);
        if (!panels.has(label)) panels.set(label, []);
        panels.get(label)!.push([re, im]);
    }
    const labels = [...panels.keys()].sort();
    const perRow = 2;
    const cell = 200;
    const gap = 36;
    const nRows = Math.ceil(labels.length / perRow);
    const width = perRow * cell + (perRow + 1) * gap;
    const height = nRows * cell + (nRows + 1) * gap + 10;
    let radius = 0;
    for (const pts of panels.values()) {
        for (const [re, im] of pts) {
            radius = Math.max(radius, Math.abs(re), Math.abs(im));
        }
    }
    radius = radius * 1.05 || 1;
    const parts: string[] = [];
    labels.forEach((label, i) => {
        const cx = gap + (i % perRow) * (cell + gap);
        const cy = gap + Math.floor(i / perRow) * (cell + gap) + 10;
        const to = (v: number) => (v / radius) * (cell / 2);
        parts.push(`<rect x="${cx}" y="${cy}" width="${cell}" height="${cell}" ` +
            `fill="none" stroke="#888"/>`);
        parts.push(svg.text(cx + cell / 2, cy - 5, label, "middle"));
        parts.push(svg.polyline([[cx, cy + cell / 2], [cx + cell, cy + cell / 2]],
                                "#ddd", null, 0.7));
        parts.push(svg.polyline([[cx + cell / 2, cy], [cx + cell / 2, cy + cell]],
                                "#ddd", null, 0.7));
        for (const [re, im] of panels.get(label)!) {
            parts.push(svg.dot(cx + cell / 2 + to(re), cy + cell / 2 - to(im),
                               1.1, "#0072b2", 0.45));
        }
    });
    return { svg: svg.svgDocument(parts.join("\n"), width, height),
             seriesCount: labels.length };
}

/** Deterministic SVG primitives: same numbers in, same bytes out. */

import { AxisScale } from "./types";

export const WIDTH = 760;
export const HEIGHT = 440;
export const MARGIN = { left: 64, right: 170, top: 28, bottom: 48 };

export const PALETTE = [
    "#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9",
    "#f0e442", "#7f7f7f", "#8c564b", "#17becf", "#bcbd22", "#9467bd",
];

export function fmt(v: number): string {
    if (!Number.isFinite(v)) return "0";
    const out = v.toPrecision(6);
    return out.includes(".") ? out.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : out;
}

export function escapeText(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Scale {
    (v: number): number;
    ticks: number[];
}

function niceTicks(lo: number, hi: number, count: number): number[] {
    if (!(hi > lo)) return [lo];
    const raw = (hi - lo) / count;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const norm = raw / mag;
    const step = (norm >= 5 ? 10 : norm >= 2 ? 5 : norm >= 1 ? 2 : 1) * mag;
    const out: number[] = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
        out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
}

export function makeScale(domain: [number, number], range: [number, number],
                          kind: AxisScale): Scale {
    let [lo, hi] = domain;
    if (kind === "log") {
        lo = Math.log10(Math.max(lo, 1e-12));
        hi = Math.log10(Math.max(hi, 1e-12));
    }
    if (hi === lo) {
        hi = lo + 1;
    }
    const span = hi - lo;
    const f = ((v: number) => {
        const t = kind === "log" ? Math.log10(Math.max(v, 1e-12)) : v;
        return range[0] + ((t - lo) / span) * (range[1] - range[0]);
    }) as Scale;
    if (kind === "log") {
        const ticks: number[] = [];
        for (let e = Math.ceil(lo); e <= Math.floor(hi); e += 1) {
            ticks.push(Math.pow(10, e));
        }
        f.ticks = ticks.length >= 2 ? ticks : niceTicks(Math.pow(10, lo), Math.pow(10, hi), 5);
    } else {
        f.ticks = niceTicks(lo, hi, 6);
    }
    return f;
}

export function polyline(points: Array<[number, number]>, stroke: string,
                         dash: string | null, width: number): string {
    if (points.length === 0) return "";
    const d = points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`).join("");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    return `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${fmt(width)}"${dashAttr}/>`;
}

export function cross(x: number, y: number, r: number, stroke: string): string {
    return `<path d="M${fmt(x - r)} ${fmt(y - r)}L${fmt(x + r)} ${fmt(y + r)}` +
        `M${fmt(x - r)} ${fmt(y + r)}L${fmt(x + r)} ${fmt(y - r)}" ` +
        `stroke="${stroke}" stroke-width="1.2" fill="none"/>`;
}

export function dot(x: number, y: number, r: number, fill: string, opacity: number): string {
    return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}" ` +
        `opacity="${fmt(opacity)}"/>`;
}

export function text(x: number, y: number, s: string, anchor: string,
                     size = 11): string {
    return `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
        `font-family="Helvetica,Arial,sans-serif" font-size="${size}">${escapeText(s)}</text>`;
}

export function svgDocument(body: string, width = WIDTH, height = HEIGHT): string {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" ` +
        `fill="white"/>\n${body}\n</svg>\n`;
}

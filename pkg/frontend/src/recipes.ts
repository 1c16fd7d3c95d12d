import { FigureRecipe } from "./types";

/** One recipe per reproduced figure; series are grouped by the listed keys. */
export const RECIPES: Record<string, FigureRecipe> = {
    fig2: {
        figure: "fig2",
        seriesKeys: ["K", "snr_db", "quantized"],
        xColumn: "mu",
        markerColumn: "c_db_empirical",
        lineColumn: "c_db_analytic",
        x: { label: "pilot excess factor", scale: "linear" },
        y: { label: "estimation quality [dB]", scale: "linear" },
    },
    fig3: {
        figure: "fig3",
        seriesKeys: ["mode", "L"],
        xColumn: "re",
        markerColumn: "im",
        x: { label: "in-phase", scale: "linear" },
        y: { label: "quadrature", scale: "linear" },
        scatter: { panelKeys: ["mode", "L"] },
    },
    fig4: {
        figure: "fig4",
        seriesKeys: ["combiner", "K", "snr_db"],
        xColumn: "mu_q",
        lineColumn: "ratio_pct",
        x: { label: "pilot excess factor (quantized)", scale: "linear" },
        y: { label: "rate ratio [%]", scale: "linear" },
    },
    fig5: {
        figure: "fig5",
        seriesKeys: ["combiner", "quantized"],
        xColumn: "value",
        markerColumn: "rate_bpcu",
        lineColumn: "rate_limit_bpcu",
        x: { label: "number of taps", scale: "linear" },
        y: { label: "rate per user [bpcu]", scale: "linear" },
        alsoRequire: ["user", "stderr"],
    },
    fig6: {
        figure: "fig6",
        seriesKeys: ["combiner", "quantized"],
        xColumn: "value",
        markerColumn: "rate_bpcu",
        lineColumn: "rate_limit_bpcu",
        x: { label: "number of antennas", scale: "log" },
        y: { label: "rate per user [bpcu]", scale: "linear" },
        alsoRequire: ["user"],
    },
    fig7: {
        figure: "fig7",
        seriesKeys: ["combiner", "quantized", "scenario"],
        xColumn: "value",
        markerColumn: "rate_bpcu",
        lineColumn: "rate_limit_bpcu",
        x: { label: "number of antennas", scale: "log" },
        y: { label: "rate per user [bpcu]", scale: "linear" },
        alsoRequire: ["user"],
    },
    fig8: {
        figure: "fig8",
        seriesKeys: ["combiner", "quantized"],
        xColumn: "value",
        markerColumn: "rate_bpcu",
        lineColumn: "rate_limit_bpcu",
        overlayColumn: "ceiling_bpcu",
        x: { label: "SNR [dB]", scale: "linear" },
        y: { label: "rate per user [bpcu]", scale: "linear" },
    },
};

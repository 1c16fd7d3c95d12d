export type AxisScale = "linear" | "log";

export interface AxisSpec {
    label: string;
    scale: AxisScale;
}

/** How one figure id maps sweep-CSV columns onto drawable series. */
export interface FigureRecipe {
    figure: string;
    /** columns whose distinct value combinations define the series */
    seriesKeys: string[];
    /** column with the swept variable (x) */
    xColumn: string;
    /** column drawn as markers (empirical points); empty cells are skipped */
    markerColumn?: string;
    /** column drawn as a line (closed forms) */
    lineColumn?: string;
    /** extra reference overlay (single dashed line per series), e.g. a ceiling */
    overlayColumn?: string;
    x: AxisSpec;
    y: AxisSpec;
    /** scatter figures are small-multiple panels instead of line charts */
    scatter?: { panelKeys: string[] };
    /** columns that must be present beyond the ones above */
    alsoRequire?: string[];
}

export interface SeriesData {
    label: string;
    line: Array<[number, number]>;
    markers: Array<[number, number]>;
    overlay: Array<[number, number]>;
}

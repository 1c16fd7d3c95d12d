import { describe, expect, it } from "vitest";
import * as fs from "fs";
import * as path from "path";
import { render } from "../src/render";
import { parseCsv, requireColumns, SchemaError } from "../src/csv";
import { RECIPES } from "../src/recipes";

const FIXTURES = path.join(__dirname, "fixtures");

function fixture(figure: string): string {
    return fs.readFileSync(path.join(FIXTURES, `${figure}.csv`), "utf8");
}

/** distinct series-key combinations actually present in the CSV */
function expectedSeries(figure: string, text: string): number {
    const recipe = RECIPES[figure]!;
    const table = parseCsv(text);
    const cols = requireColumns(table, recipe.seriesKeys);
    const seen = new Set<string>();
    for (const row of table.rows) {
        seen.add(recipe.seriesKeys.map((k) => row[cols.get(k)!]).join("|"));
    }
    return seen.size;
}

describe("figure rendering", () => {
    for (const figure of ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"]) {
        it(`renders ${figure} deterministically with the recipe's series`, () => {
            const text = fixture(figure);
            const first = render(figure, text);
            expect(first.svg.startsWith("<svg ")).toBe(true);
            expect(first.svg.trimEnd().endsWith("</svg>")).toBe(true);
            expect(first.seriesCount).toBe(expectedSeries(figure, text));
            // byte-identical on rerun
            const second = render(figure, text);
            expect(second.svg).toBe(first.svg);
        });
    }

    it("draws markers, closed-form lines, and the fig8 ceiling overlay", () => {
        const out = render("fig5", fixture("fig5"));
        expect(out.svg).toContain("stroke-width=\"1.4\"");     // series lines
        expect(out.svg).toContain("stroke-dasharray=\"2 3\""); // unquantized dotted
        const fig8 = render("fig8", fixture("fig8"));
        expect(fig8.svg).toContain("stroke-dasharray=\"6 3\""); // ceiling overlay
    });

    it("renders scatter panels for fig3", () => {
        const out = render("fig3", fixture("fig3"));
        expect(out.seriesCount).toBe(4); // (sc, ofdm) x (L=1, L=64)
        expect(out.svg).toContain("<circle");
    });

    it("rejects an empty CSV", () => {
        expect(() => render("fig5", "")).toThrow(SchemaError);
        expect(() => render("fig5", "sweep_var,value\n")).toThrow(SchemaError);
    });

    it("names the missing column in schema errors", () => {
        const bad = "a,b\n1,2\n";
        expect(() => render("fig5", bad)).toThrow(/missing column/);
    });

    it("rejects unknown figure ids", () => {
        expect(() => render("fig99", "a\n1\n")).toThrow(/unknown figure/);
    });
});

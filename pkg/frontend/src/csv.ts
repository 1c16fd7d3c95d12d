/** Minimal CSV reader for the simulator's sweep files (no quoting needed). */

export class SchemaError extends Error {}

export interface Table {
    header: string[];
    rows: string[][];
}

export function parseCsv(text: string): Table {
    const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
    if (lines.length === 0) {
        throw new SchemaError("empty CSV: no header row");
    }
    const header = lines[0]!.split(",");
    const rows = lines.slice(1).map((line) => line.split(","));
    for (const row of rows) {
        if (row.length !== header.length) {
            throw new SchemaError(
                `row has ${row.length} fields, header has ${header.length}`,
            );
        }
    }
    return { header, rows };
}

export function requireColumns(table: Table, names: readonly string[]): Map<string, number> {
    const index = new Map<string, number>();
    for (const name of names) {
        const at = table.header.indexOf(name);
        if (at < 0) {
            throw new SchemaError(`missing column '${name}' (have: ${table.header.join(", ")})`);
        }
        index.set(name, at);
    }
    return index;
}

export function numeric(value: string, column: string): number {
    if (value === "") return NaN;
    const out = Number(value);
    if (Number.isNaN(out)) {
        throw new SchemaError(`non-numeric value '${value}' in column '${column}'`);
    }
    return out;
}

#!/usr/bin/env node
/** figplots <figure-id> --in sweep.csv --out figure.svg
 *
 * Exit codes mirror the simulator CLI: 0 ok, 1 schema/data failure, 2 usage.
 */
import * as fs from "fs";
import { render } from "./render";
import { RECIPES } from "./recipes";
import { SchemaError } from "./csv";

function usage(message?: string): never {
    if (message) process.stderr.write(`${message}\n`);
    process.stderr.write(
        `usage: figplots <${Object.keys(RECIPES).join("|")}> --in <csv> --out <svg>\n`,
    );
    process.exit(2);
}

export function main(argv: string[]): number {
    const args = argv.slice(2);
    if (args.length === 0) usage();
    const figure = args[0]!;
    if (!(figure in RECIPES)) usage(`unknown figure '${figure}'`);
    let input: string | undefined;
    let output: string | undefined;
    for (let i = 1; i < args.length; i += 2) {
        const flag = args[i];
        const value = args[i + 1];
        if (value === undefined) usage(`missing value for ${flag}`);
        if (flag === "--in") input = value;
        else if (flag === "--out") output = value;
        else usage(`unknown flag '${flag}'`);
    }
    if (!input || !output) usage("--in and --out are both required");
    let text: string;
    try {
        text = fs.readFileSync(input, "utf8");
    } catch (err) {
        process.stderr.write(`cannot read ${input}: ${(err as Error).message}\n`);
        return 1;
    }
    try {
        const result = render(figure, text);
        fs.writeFileSync(output, result.svg);
        process.stdout.write(`${figure}: ${result.seriesCount} series -> ${output}\n`);
        return 0;
    } catch (err) {
        if (err instanceof SchemaError) {
            process.stderr.write(`schema error: ${err.message}\n`);
            return 1;
        }
        throw err;
    }
}

if (require.main === module) {
    process.exit(main(process.argv));
}

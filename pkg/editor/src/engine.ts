/**
 * Child-process client for the aggregation engine CLI.
 *
 * Documents are piped through stdin in machine mode, so the panel works
 * offline with zero configuration beyond the engine command. Invocations
 * are cancellable: a newer request kills the in-flight child and the
 * superseded promise resolves with a result callers discard, which keeps
 * rendering strictly last-write-wins.
 */

import { spawn } from "child_process";
import { AggregationDocument, isAggregationDocument } from "./types";

export type EngineResult =
    | { ok: true; document: AggregationDocument }
    | { ok: false; kind: "superseded" }
    | { ok: false; kind: "engine-missing"; message: string }
    | { ok: false; kind: "engine-failed"; message: string }
    | { ok: false; kind: "invalid-output"; message: string };

export interface AggregateOptions {
    k?: number;
    trace?: boolean;
}

export const ENGINE_MISSING_GUIDANCE =
    "Aggregation engine not found. Install it with `pip install xmentor` " +
    "(or point the `xmentor.enginePath` setting at the engine command, " +
    "e.g. `python3 -m xmentor`).";

/** Split a configured command line into argv parts. */
export function splitCommand(command: string): string[] {
    return command.trim().split(/\s+/).filter((part) => part.length > 0);
}

export class EngineClient {
    private generation = 0;
    private inflight: ReturnType<typeof spawn> | null = null;

    constructor(private readonly command: string[]) {
        if (command.length === 0) {
            throw new Error("engine command must not be empty");
        }
    }

    /** Aggregate one explanation document; newer calls supersede older ones. */
    aggregate(documentJson: string, options: AggregateOptions = {}): Promise<EngineResult> {
        const generation = ++this.generation;
        if (this.inflight) {
            this.inflight.kill();
            this.inflight = null;
        }

        const args = [...this.command.slice(1), "aggregate", "--stdin", "--format", "machine"];
        if (options.trace) {
            args.push("--trace");
        }
        if (options.k && options.k > 0) {
            args.push("--k", String(options.k));
        }

        return new Promise((resolve) => {
            const child = spawn(this.command[0], args, { stdio: ["pipe", "pipe", "pipe"] });
            this.inflight = child;
            const stdout: Buffer[] = [];
            const stderr: Buffer[] = [];
            let settled = false;

            const finish = (result: EngineResult) => {
                if (settled) {
                    return;
                }
                settled = true;
                if (this.inflight === child) {
                    this.inflight = null;
                }
                resolve(this.generation === generation ? result : { ok: false, kind: "superseded" });
            };

            child.on("error", (error: NodeJS.ErrnoException) => {
                if (error.code === "ENOENT") {
                    finish({ ok: false, kind: "engine-missing", message: ENGINE_MISSING_GUIDANCE });
                } else {
                    finish({ ok: false, kind: "engine-failed", message: String(error.message ?? error) });
                }
            });
            child.stdout?.on("data", (chunk: Buffer) => stdout.push(chunk));
            child.stderr?.on("data", (chunk: Buffer) => stderr.push(chunk));
            child.on("close", (code, signal) => {
                if (signal) {
                    finish({ ok: false, kind: "superseded" });
                    return;
                }
                if (code !== 0) {
                    finish({
                        ok: false,
                        kind: "engine-failed",
                        message: Buffer.concat(stderr).toString("utf-8").trim() || `engine exited with ${code}`,
                    });
                    return;
                }
                try {
                    const parsed = JSON.parse(Buffer.concat(stdout).toString("utf-8"));
                    if (isAggregationDocument(parsed)) {
                        finish({ ok: true, document: parsed });
                    } else {
                        finish({ ok: false, kind: "invalid-output", message: "engine emitted an unexpected document" });
                    }
                } catch (error) {
                    finish({ ok: false, kind: "invalid-output", message: `engine output is not JSON: ${error}` });
                }
            });

            child.stdin?.on("error", () => {
                // the child died before reading everything; close handles it
            });
            child.stdin?.write(documentJson);
            child.stdin?.end();
        });
    }

    cancel(): void {
        this.generation++;
        if (this.inflight) {
            this.inflight.kill();
            this.inflight = null;
        }
    }
}

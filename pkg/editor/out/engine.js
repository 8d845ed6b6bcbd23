"use strict";
/**
 * Child-process client for the aggregation engine CLI.
 *
 * Documents are piped through stdin in machine mode, so the panel works
 * offline with zero configuration beyond the engine command. Invocations
 * are cancellable: a newer request kills the in-flight child and the
 * superseded promise resolves with a result callers discard, which keeps
 * rendering strictly last-write-wins.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.EngineClient = exports.ENGINE_MISSING_GUIDANCE = void 0;
exports.splitCommand = splitCommand;
const child_process_1 = require("child_process");
const types_1 = require("./types");
exports.ENGINE_MISSING_GUIDANCE = "Aggregation engine not found. Install it with `pip install xmentor` " +
    "(or point the `xmentor.enginePath` setting at the engine command, " +
    "e.g. `python3 -m xmentor`).";
/** Split a configured command line into argv parts. */
function splitCommand(command) {
    return command.trim().split(/\s+/).filter((part) => part.length > 0);
}
class EngineClient {
    constructor(command) {
        this.command = command;
        this.generation = 0;
        this.inflight = null;
        if (command.length === 0) {
            throw new Error("engine command must not be empty");
        }
    }
    /** Aggregate one explanation document; newer calls supersede older ones. */
    aggregate(documentJson, options = {}) {
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
            const child = (0, child_process_1.spawn)(this.command[0], args, { stdio: ["pipe", "pipe", "pipe"] });
            this.inflight = child;
            const stdout = [];
            const stderr = [];
            let settled = false;
            const finish = (result) => {
                if (settled) {
                    return;
                }
                settled = true;
                if (this.inflight === child) {
                    this.inflight = null;
                }
                resolve(this.generation === generation ? result : { ok: false, kind: "superseded" });
            };
            child.on("error", (error) => {
                if (error.code === "ENOENT") {
                    finish({ ok: false, kind: "engine-missing", message: exports.ENGINE_MISSING_GUIDANCE });
                }
                else {
                    finish({ ok: false, kind: "engine-failed", message: String(error.message ?? error) });
                }
            });
            child.stdout?.on("data", (chunk) => stdout.push(chunk));
            child.stderr?.on("data", (chunk) => stderr.push(chunk));
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
                    if ((0, types_1.isAggregationDocument)(parsed)) {
                        finish({ ok: true, document: parsed });
                    }
                    else {
                        finish({ ok: false, kind: "invalid-output", message: "engine emitted an unexpected document" });
                    }
                }
                catch (error) {
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
    cancel() {
        this.generation++;
        if (this.inflight) {
            this.inflight.kill();
            this.inflight = null;
        }
    }
}
exports.EngineClient = EngineClient;
//# sourceMappingURL=engine.js.map
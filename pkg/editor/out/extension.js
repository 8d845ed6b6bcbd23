"use strict";
/**
 * VS Code glue: webview panel, commands, configuration, inline highlights.
 *
 * All computation happens in the engine child process and the pure
 * modules (state, render); this file only wires events to them.
 */
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
Object.defineProperty(exports, "__esModule", { value: true });
exports.activate = activate;
exports.deactivate = deactivate;
const vscode = __importStar(require("vscode"));
const engine_1 = require("./engine");
const state_1 = require("./state");
const render_1 = require("./render");
const types_1 = require("./types");
function activate(context) {
    const provider = new ExplanationPanelProvider();
    context.subscriptions.push(vscode.window.registerWebviewViewProvider("xmentor.panel", provider), vscode.commands.registerCommand("xmentor.cycleViewMode", () => provider.cycleMode()), vscode.commands.registerCommand("xmentor.refresh", () => provider.refreshFromActiveEditor()), vscode.commands.registerCommand("xmentor.openDocument", () => provider.openDocument()), vscode.window.onDidChangeActiveTextEditor(() => provider.refreshFromActiveEditor()), vscode.workspace.onDidSaveTextDocument((doc) => provider.maybeRefreshFor(doc)));
}
function deactivate() {
    // engine children die with the extension host
}
class ExplanationPanelProvider {
    constructor() {
        this.view = null;
        this.state = state_1.INITIAL_STATE;
        this.engine = null;
        this.decoration = vscode.window.createTextEditorDecorationType({
            isWholeLine: true,
            backgroundColor: new vscode.ThemeColor("editor.rangeHighlightBackground"),
            overviewRulerColor: new vscode.ThemeColor("charts.blue"),
        });
    }
    resolveWebviewView(view) {
        this.view = view;
        view.webview.options = { enableScripts: true };
        view.webview.onDidReceiveMessage((message) => {
            if (message?.type === "cycle-view-mode") {
                this.cycleMode();
            }
            else if (message?.type === "select-feature") {
                this.state = (0, state_1.withSelectedFeature)(this.state, message.feature ?? null);
            }
        });
        this.render();
        this.refreshFromActiveEditor();
    }
    cycleMode() {
        // toggling never touches the loaded documents
        this.state = (0, state_1.cycleViewMode)(this.state);
        this.render();
    }
    async openDocument() {
        const picked = await vscode.window.showOpenDialog({
            filters: { "Explanation documents": ["xm", "json"] },
            canSelectMany: false,
        });
        if (picked?.[0]) {
            const raw = await vscode.workspace.fs.readFile(picked[0]);
            await this.loadDocumentText(Buffer.from(raw).toString("utf-8"));
        }
    }
    refreshFromActiveEditor() {
        const editor = vscode.window.activeTextEditor;
        if (editor && this.looksLikeDocument(editor.document)) {
            void this.loadDocumentText(editor.document.getText());
        }
    }
    maybeRefreshFor(document) {
        if (this.looksLikeDocument(document)) {
            void this.loadDocumentText(document.getText());
        }
    }
    looksLikeDocument(document) {
        return document.fileName.endsWith(".xm") || document.languageId === "json";
    }
    configuration() {
        const config = vscode.workspace.getConfiguration("xmentor");
        return {
            enginePath: config.get("enginePath", "xmentor"),
            defaultK: config.get("defaultK", 0),
            showTrace: config.get("showTrace", false),
        };
    }
    async loadDocumentText(text) {
        let parsed;
        try {
            parsed = JSON.parse(text);
        }
        catch {
            return; // not a document; ignore quietly
        }
        if (!(0, types_1.isExplanationDocument)(parsed)) {
            return;
        }
        await this.refresh(parsed);
    }
    async refresh(document) {
        const config = this.configuration();
        if (!this.engine) {
            try {
                this.engine = new engine_1.EngineClient((0, engine_1.splitCommand)(config.enginePath));
            }
            catch {
                this.state = (0, state_1.withEngineStatus)(this.state, {
                    kind: "missing",
                    guidance: engine_1.ENGINE_MISSING_GUIDANCE,
                });
                this.render();
                return;
            }
        }
        this.state = (0, state_1.withEngineStatus)(this.state, { kind: "working" });
        this.render();
        const result = await this.engine.aggregate(JSON.stringify(document), {
            k: config.defaultK > 0 ? config.defaultK : undefined,
            trace: true,
        });
        if (!result.ok) {
            if (result.kind === "superseded") {
                return; // a newer refresh owns the panel now
            }
            this.state = (0, state_1.withEngineStatus)(this.state, result.kind === "engine-missing"
                ? { kind: "missing", guidance: result.message }
                : { kind: "error", message: result.message });
            this.render();
            return;
        }
        this.state = (0, state_1.withDocuments)(this.state, document, result.document);
        this.render();
        this.applyHighlights();
    }
    applyHighlights() {
        const editor = vscode.window.activeTextEditor;
        if (!editor || !this.state.aggregation) {
            return;
        }
        const plan = (0, render_1.highlightPlan)(this.state.aggregation, editor.document.getText());
        const document = this.state.document;
        const ranges = plan.decorations.flatMap(({ feature, lines }) => lines.map((line) => {
            const range = editor.document.lineAt(Math.min(line, editor.document.lineCount - 1)).range;
            const hover = document
                ? `${feature}: ${(0, render_1.tooltipFor)(document, this.state.aggregation, feature)}`
                : feature;
            return { range, hoverMessage: hover };
        }));
        editor.setDecorations(this.decoration, ranges);
    }
    render() {
        if (this.view) {
            this.view.webview.html = (0, render_1.renderHtml)(this.state, {
                showTrace: this.configuration().showTrace,
            });
        }
    }
}
//# sourceMappingURL=extension.js.map
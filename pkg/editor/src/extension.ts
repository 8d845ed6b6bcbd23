/**
 * VS Code glue: webview panel, commands, configuration, inline highlights.
 *
 * All computation happens in the engine child process and the pure
 * modules (state, render); this file only wires events to them.
 */

import * as vscode from "vscode";
import { EngineClient, ENGINE_MISSING_GUIDANCE, splitCommand } from "./engine";
import {
    INITIAL_STATE,
    PanelState,
    cycleViewMode,
    withDocuments,
    withEngineStatus,
    withSelectedFeature,
} from "./state";
import { highlightPlan, renderHtml, tooltipFor } from "./render";
import { ExplanationDocument, isExplanationDocument } from "./types";

export function activate(context: vscode.ExtensionContext): void {
    const provider = new ExplanationPanelProvider();
    context.subscriptions.push(
        vscode.window.registerWebviewViewProvider("xmentor.panel", provider),
        vscode.commands.registerCommand("xmentor.cycleViewMode", () => provider.cycleMode()),
        vscode.commands.registerCommand("xmentor.refresh", () => provider.refreshFromActiveEditor()),
        vscode.commands.registerCommand("xmentor.openDocument", () => provider.openDocument()),
        vscode.window.onDidChangeActiveTextEditor(() => provider.refreshFromActiveEditor()),
        vscode.workspace.onDidSaveTextDocument((doc) => provider.maybeRefreshFor(doc)),
    );
}

export function deactivate(): void {
    // engine children die with the extension host
}

class ExplanationPanelProvider implements vscode.WebviewViewProvider {
    private view: vscode.WebviewView | null = null;
    private state: PanelState = INITIAL_STATE;
    private engine: EngineClient | null = null;
    private decoration = vscode.window.createTextEditorDecorationType({
        isWholeLine: true,
        backgroundColor: new vscode.ThemeColor("editor.rangeHighlightBackground"),
        overviewRulerColor: new vscode.ThemeColor("charts.blue"),
    });

    resolveWebviewView(view: vscode.WebviewView): void {
        this.view = view;
        view.webview.options = { enableScripts: true };
        view.webview.onDidReceiveMessage((message) => {
            if (message?.type === "cycle-view-mode") {
                this.cycleMode();
            } else if (message?.type === "select-feature") {
                this.state = withSelectedFeature(this.state, message.feature ?? null);
            }
        });
        this.render();
        this.refreshFromActiveEditor();
    }

    cycleMode(): void {
        // toggling never touches the loaded documents
        this.state = cycleViewMode(this.state);
        this.render();
    }

    async openDocument(): Promise<void> {
        const picked = await vscode.window.showOpenDialog({
            filters: { "Explanation documents": ["xm", "json"] },
            canSelectMany: false,
        });
        if (picked?.[0]) {
            const raw = await vscode.workspace.fs.readFile(picked[0]);
            await this.loadDocumentText(Buffer.from(raw).toString("utf-8"));
        }
    }

    refreshFromActiveEditor(): void {
        const editor = vscode.window.activeTextEditor;
        if (editor && this.looksLikeDocument(editor.document)) {
            void this.loadDocumentText(editor.document.getText());
        }
    }

    maybeRefreshFor(document: vscode.TextDocument): void {
        if (this.looksLikeDocument(document)) {
            void this.loadDocumentText(document.getText());
        }
    }

    private looksLikeDocument(document: vscode.TextDocument): boolean {
        return document.fileName.endsWith(".xm") || document.languageId === "json";
    }

    private configuration() {
        const config = vscode.workspace.getConfiguration("xmentor");
        return {
            enginePath: config.get<string>("enginePath", "xmentor"),
            defaultK: config.get<number>("defaultK", 0),
            showTrace: config.get<boolean>("showTrace", false),
        };
    }

    private async loadDocumentText(text: string): Promise<void> {
        let parsed: unknown;
        try {
            parsed = JSON.parse(text);
        } catch {
            return; // not a document; ignore quietly
        }
        if (!isExplanationDocument(parsed)) {
            return;
        }
        await this.refresh(parsed);
    }

    private async refresh(document: ExplanationDocument): Promise<void> {
        const config = this.configuration();
        if (!this.engine) {
            try {
                this.engine = new EngineClient(splitCommand(config.enginePath));
            } catch {
                this.state = withEngineStatus(this.state, {
                    kind: "missing",
                    guidance: ENGINE_MISSING_GUIDANCE,
                });
                this.render();
                return;
            }
        }
        this.state = withEngineStatus(this.state, { kind: "working" });
        this.render();
        const result = await this.engine.aggregate(JSON.stringify(document), {
            k: config.defaultK > 0 ? config.defaultK : undefined,
            trace: true,
        });
        if (!result.ok) {
            if (result.kind === "superseded") {
                return; // a newer refresh owns the panel now
            }
            this.state = withEngineStatus(
                this.state,
                result.kind === "engine-missing"
                    ? { kind: "missing", guidance: result.message }
                    : { kind: "error", message: result.message },
            );
            this.render();
            return;
        }
        this.state = withDocuments(this.state, document, result.document);
        this.render();
        this.applyHighlights();
    }

    private applyHighlights(): void {
        const editor = vscode.window.activeTextEditor;
        if (!editor || !this.state.aggregation) {
            return;
        }
        const plan = highlightPlan(this.state.aggregation, editor.document.getText());
        const document = this.state.document;
        const ranges = plan.decorations.flatMap(({ feature, lines }) =>
            lines.map((line) => {
                const range = editor.document.lineAt(Math.min(line, editor.document.lineCount - 1)).range;
                const hover = document
                    ? `${feature}: ${tooltipFor(document, this.state.aggregation, feature)}`
                    : feature;
                return { range, hoverMessage: hover } as vscode.DecorationOptions;
            }),
        );
        editor.setDecorations(this.decoration, ranges);
    }

    private render(): void {
        if (this.view) {
            this.view.webview.html = renderHtml(this.state, {
                showTrace: this.configuration().showTrace,
            });
        }
    }
}

import type { ApiClient, ServerConfig } from "./api.js";
import { StrokeRecorder } from "./strokes.js";
import type { Stroke } from "./strokes.js";
import { buildDocument, serializeDocument } from "./strokedoc.js";

export type Mode = "register" | "login";

export interface Status {
  kind: "idle" | "pending" | "success" | "failure" | "error";
  text: string;
}

export const MESSAGES = {
  drawFirst: "Draw your signature before submitting.",
  nameFirst: "Enter a username before submitting.",
  pending: "Submitting...",
  registered: (cells: number) => `Registered (${cells} active cells).`,
  accepted: "Authenticated.",
  // One string for every rejection cause; the response body never says why.
  rejected: "Not authenticated. Redraw your signature and try again.",
  failed: "Could not reach the service. Redraw your signature and try again.",
};

export class CanvasSession {
  readonly recorder = new StrokeRecorder();
  mode: Mode = "login";
  colorId = 1;
  username = "";
  status: Status = { kind: "idle", text: "" };
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: () => void = () => {},
  ) {}

  applyConfig(config: ServerConfig): void {
    const first = config.palette[0];
    if (first) this.colorId = first.id;
    this.onChange();
  }

  get pending(): boolean {
    return this.inFlight;
  }

  strokes(): Stroke[] {
    return this.recorder.all();
  }

  exportDocument(): string | null {
    if (this.recorder.count() === 0) return null;
    return serializeDocument(buildDocument(this.recorder.all(), this.colorId));
  }

  async submit(): Promise<void> {
    if (this.inFlight) return;
    const strokes = this.recorder.all();
    if (strokes.length === 0) {
      this.status = { kind: "failure", text: MESSAGES.drawFirst };
      this.onChange();
      return;
    }
    if (this.username.trim() === "") {
      this.status = { kind: "failure", text: MESSAGES.nameFirst };
      this.onChange();
      return;
    }
    // The drawing is gone before the request even starts; a failed attempt
    // must be redrawn from scratch, nothing is ever restored.
    this.recorder.clear();
    this.inFlight = true;
    this.status = { kind: "pending", text: MESSAGES.pending };
    this.onChange();
    try {
      if (this.mode === "register") {
        const result = await this.api.register(this.username, strokes, this.colorId);
        this.status = result.created
          ? { kind: "success", text: MESSAGES.registered(result.activeCells) }
          : { kind: "failure", text: result.message };
      } else {
        const ok = await this.api.verify(this.username, strokes, this.colorId);
        this.status = ok
          ? { kind: "success", text: MESSAGES.accepted }
          : { kind: "failure", text: MESSAGES.rejected };
      }
    } catch {
      this.status = { kind: "error", text: MESSAGES.failed };
    } finally {
      this.inFlight = false;
      this.onChange();
    }
  }
}

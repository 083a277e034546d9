import type { Stroke } from "./strokes.js";

export interface PaletteColor {
  id: number;
  name: string;
  value: string;
}

export interface ServerConfig {
  grid: { cols: number; rows: number };
  palette: PaletteColor[];
  stroke_format_version: number;
}

export type RegisterResult =
  | { created: true; activeCells: number }
  | { created: false; message: string };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {}

export function authBody(username: string, strokes: Stroke[], colorId: number): object {
  return {
    username,
    strokes: strokes.map((s) => s.map((p) => ({ x: p.x, y: p.y }))),
    color_id: colorId,
  };
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async getConfig(): Promise<ServerConfig> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/v1/config`);
    if (!resp.ok) throw new ApiError(`config fetch failed: ${resp.status}`);
    return (await resp.json()) as ServerConfig;
  }

  async register(username: string, strokes: Stroke[], colorId: number): Promise<RegisterResult> {
    const resp = await this.post("/api/v1/register", authBody(username, strokes, colorId));
    if (resp.status === 201) {
      const data = (await resp.json()) as { active_cells: number };
      return { created: true, activeCells: data.active_cells };
    }
    if (resp.status === 400 || resp.status === 409 || resp.status === 422) {
      const data = (await resp.json().catch(() => ({}))) as { hint?: string; error?: string };
      return { created: false, message: data.hint ?? data.error ?? "registration failed" };
    }
    throw new ApiError(`register failed: ${resp.status}`);
  }

  async verify(username: string, strokes: Stroke[], colorId: number): Promise<boolean> {
    const resp = await this.post("/api/v1/verify", authBody(username, strokes, colorId));
    if (resp.status !== 200) throw new ApiError(`verify failed: ${resp.status}`);
    const data = (await resp.json()) as { authenticated?: boolean };
    return data.authenticated === true;
  }

  private post(path: string, body: object): Promise<Response> {
    return this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}

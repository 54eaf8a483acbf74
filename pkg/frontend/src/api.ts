/**
 * Typed client for the facmon JSON API.
 *
 * Every screen goes through this module; the UI never derives domain state
 * locally, it renders what these calls return.
 */

export interface SessionInfo {
  token: string;
  role: Role;
  username: string;
  expires_at: string;
}

export type Role = "FACILITIES_ADMIN" | "WORK_UNIT" | "LEADERSHIP";
export type ConditionName = "GOOD" | "LIGHT_DAMAGE" | "HEAVY_DAMAGE" | "LOST" | "DONATED";
export type FindingStatusName = "OPEN" | "FOLLOW_UP" | "RESOLVED";
export type PhotoViewName = "FRONT" | "SIDE" | "BACK" | "SERIAL";

export interface PhotoRef {
  id: string;
  view: PhotoViewName;
  media_type: string;
  byte_length: number;
}

export interface Item {
  barcode: string;
  name: string;
  specification: string;
  category_code: string | null;
  type_code: string | null;
  brand_code: string | null;
  source_code: string | null;
  purchase_date: string;
  warranty_end_date: string | null;
  maintenance_interval_days: number | null;
  condition: ConditionName;
  campus_code: string | null;
  location_code: string | null;
  custodian: string;
  registered_date: string;
  photos: PhotoRef[];
}

export interface Finding {
  id: string;
  barcode: string | null;
  object_name: string;
  object_description: string | null;
  date: string;
  campus_code: string | null;
  location_code: string | null;
  finding: string;
  recommendation: string;
  reporter: string;
  status: FindingStatusName;
  follow_up_note: string | null;
  resolution_date: string | null;
  photos: PhotoRef[];
}

export interface Summary {
  period: { from: string; to: string };
  as_of: string;
  items_total: number;
  items_by_condition: Record<ConditionName, number>;
  items_by_campus: Record<string, number>;
  items_by_category: Record<string, number>;
  findings_opened: number;
  findings_resolved: number;
  findings_open_at_end: number;
  mean_resolution_days: number | null;
  warranty_expiring_within_30_days: number;
}

export interface WarrantyReport {
  in_warranty: { item: Item; days_remaining: number }[];
  expired: { item: Item; days_since: number }[];
  none: Item[];
}

export interface MaintenanceDue {
  item: Item;
  days_overdue: number;
}

export interface Reference {
  code: string;
  name: string;
  active: boolean;
  address?: string;
  floor?: number;
  campus_code?: string;
}

export type ReferenceKind = "campuses" | "locations" | "categories" | "types" | "brands" | "sources";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private token: string | null = null,
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    const headers: Record<string, string> = { ...extra };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const init: RequestInit = { method, headers: this.headers() };
    if (body !== undefined) {
      init.headers = this.headers({ "Content-Type": "application/json" });
      init.body = JSON.stringify(body);
    }
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let code = "HTTP_ERROR";
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { code?: string; message?: string };
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the fallback
      }
      throw new ApiError(response.status, code, message);
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    return (await this.request(method, path, body)).json() as Promise<T>;
  }

  async login(username: string, password: string): Promise<SessionInfo> {
    const session = await this.json<SessionInfo>("POST", "/api/login", { username, password });
    this.token = session.token;
    return session;
  }

  // items
  listItems(params: Record<string, string> = {}): Promise<Item[]> {
    return this.json("GET", `/api/items${query({ limit: "10000", ...params })}`);
  }

  registerItem(body: {
    barcode: string;
    name: string;
    specification?: string;
    category_code: string;
    type_code: string;
    brand_code: string;
    source_code: string;
    purchase_date: string;
    warranty_end_date?: string | null;
    maintenance_interval_days?: number | null;
    campus_code: string;
    location_code: string;
    custodian: string;
  }): Promise<Item> {
    return this.json("POST", "/api/items", body);
  }

  getItem(barcode: string): Promise<Item & { transfers: unknown[]; status_changes: unknown[]; repairs: unknown[] }> {
    return this.json("GET", `/api/items/${encodeURIComponent(barcode)}`);
  }

  // monitoring
  listFindings(params: Record<string, string> = {}): Promise<Finding[]> {
    return this.json("GET", `/api/monitoring${query({ limit: "10000", ...params })}`);
  }

  submitFinding(body: {
    barcode?: string | null;
    object_name?: string | null;
    object_description?: string | null;
    date: string;
    campus_code: string;
    location_code: string;
    finding: string;
    recommendation: string;
  }): Promise<Finding> {
    return this.json("POST", "/api/monitoring", body);
  }

  followUp(recordId: string, note: string): Promise<Finding> {
    return this.json("POST", `/api/monitoring/${recordId}/follow-up`, { note });
  }

  resolve(recordId: string, resolutionDate: string): Promise<Finding> {
    return this.json("POST", `/api/monitoring/${recordId}/resolve`, {
      resolution_date: resolutionDate,
    });
  }

  async uploadPhoto(
    target: { kind: "item"; barcode: string } | { kind: "finding"; id: string },
    view: PhotoViewName,
    file: Blob,
    filename: string,
  ): Promise<PhotoRef> {
    const path =
      target.kind === "item"
        ? `/api/items/${encodeURIComponent(target.barcode)}/photos`
        : `/api/monitoring/${target.id}/photos`;
    const form = new FormData();
    form.append("view", view);
    form.append("file", file, filename);
    const response = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: this.headers(),
      body: form,
    });
    if (!response.ok) {
      const payload = (await response.json()) as { code?: string; message?: string };
      throw new ApiError(response.status, payload.code ?? "HTTP_ERROR", payload.message ?? "");
    }
    return response.json() as Promise<PhotoRef>;
  }

  async fetchPhoto(digest: string): Promise<Blob> {
    return (await this.request("GET", `/api/photos/${digest}`)).blob();
  }

  // reports
  summary(from: string, to: string, asOf?: string): Promise<Summary> {
    return this.json("GET", `/api/reports/summary${query({ from, to, ...(asOf ? { as_of: asOf } : {}) })}`);
  }

  byCondition(condition: ConditionName): Promise<Item[]> {
    return this.json("GET", `/api/reports/by-condition${query({ condition })}`);
  }

  byLocation(campus: string, location: string): Promise<{ location: Reference; items: Item[]; open_findings: Finding[] }> {
    return this.json("GET", `/api/reports/by-location${query({ campus, location })}`);
  }

  warranty(asOf: string): Promise<WarrantyReport> {
    return this.json("GET", `/api/reports/warranty${query({ as_of: asOf })}`);
  }

  maintenanceDue(asOf: string): Promise<MaintenanceDue[]> {
    return this.json("GET", `/api/reports/maintenance-due${query({ as_of: asOf })}`);
  }

  async exportCsv(dataset: "items" | "monitoring", params: Record<string, string> = {}): Promise<string> {
    return (await this.request("GET", `/api/export/${dataset}.csv${query(params)}`)).text();
  }

  // references
  listReferences(kind: ReferenceKind): Promise<Reference[]> {
    return this.json("GET", `/api/references/${kind}`);
  }

  createReference(kind: ReferenceKind, payload: Partial<Reference> & { code: string; name: string }): Promise<Reference> {
    return this.json("POST", `/api/references/${kind}`, payload);
  }

  updateReference(
    kind: ReferenceKind,
    code: string,
    payload: Partial<Reference>,
    campus?: string,
  ): Promise<Reference> {
    const suffix = campus ? query({ campus }) : "";
    return this.json("PUT", `/api/references/${kind}/${encodeURIComponent(code)}${suffix}`, {
      code,
      name: payload.name ?? "",
      ...payload,
    });
  }

  deactivateReference(kind: ReferenceKind, code: string, campus?: string): Promise<Reference> {
    const suffix = campus ? query({ campus }) : "";
    return this.json("DELETE", `/api/references/${kind}/${encodeURIComponent(code)}${suffix}`);
  }

  // health
  health(): Promise<{ status: string }> {
    return this.json("GET", "/healthz");
  }
}

function query(params: Record<string, string>): string {
  const entries = Object.entries(params).filter(([, v]) => v !== "");
  if (entries.length === 0) return "";
  return `?${new URLSearchParams(entries).toString()}`;
}

/**
 * Framework-free DOM rendering. Values land in the DOM exactly as the API
 * returned them (tests compare rendered text against API responses).
 */

import type { Finding, Item } from "./api.js";
import type { DashboardData } from "./dashboard.js";
import type { FindingFormState } from "./findingForm.js";
import { canSubmit, validate } from "./findingForm.js";
import type { Menu } from "./navigation.js";
import type { GalleryEntry } from "./gallery.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderLogin(
  container: HTMLElement,
  onSubmit: (username: string, password: string) => void,
  errorMessage: string | null = null,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const form = el(doc, "form", { id: "login-form" });
  const username = el(doc, "input", { id: "login-username", name: "username", autocomplete: "username" });
  const password = el(doc, "input", {
    id: "login-password",
    name: "password",
    type: "password",
    autocomplete: "current-password",
  });
  const button = el(doc, "button", { type: "submit" }, "Login");
  form.append(
    el(doc, "label", { for: "login-username" }, "Username"),
    username,
    el(doc, "label", { for: "login-password" }, "Password"),
    password,
    button,
  );
  if (errorMessage !== null) {
    form.append(el(doc, "p", { class: "error", id: "login-error" }, errorMessage));
  }
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    onSubmit(username.value, password.value);
  });
  container.append(form);
}

export function renderNavigation(
  container: HTMLElement,
  menus: Menu[],
  onSelect: (entryId: string) => void,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const nav = el(doc, "nav", { id: "main-menu" });
  for (const menu of menus) {
    const section = el(doc, "section", { id: `menu-${menu.id}`, "data-menu": menu.id });
    section.append(el(doc, "h2", {}, menu.label));
    const list = el(doc, "ul");
    for (const entry of menu.entries) {
      const item = el(doc, "li");
      const link = el(doc, "a", { href: `#${entry.id}`, "data-entry": entry.id }, entry.label);
      if (entry.extrapolated) link.setAttribute("data-extrapolated", "true");
      link.addEventListener("click", (event) => {
        event.preventDefault();
        onSelect(entry.id);
      });
      item.append(link);
      list.append(item);
    }
    section.append(list);
    nav.append(section);
  }
  container.append(nav);
}

export function renderDashboard(container: HTMLElement, data: DashboardData): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const tiles = el(doc, "div", { id: "dashboard-tiles" });
  for (const tile of data.tiles) {
    const card = el(doc, "div", { class: "tile", "data-tile": tile.id });
    card.append(
      el(doc, "span", { class: "tile-label" }, tile.label),
      el(doc, "span", { class: "tile-value" }, String(tile.value)),
    );
    tiles.append(card);
  }
  container.append(tiles);

  const expiring = el(doc, "ul", { id: "warranty-expiring-list" });
  for (const row of data.warrantyExpiring) {
    expiring.append(
      el(doc, "li", { "data-barcode": row.item.barcode }, `${row.item.barcode}: ${row.days_remaining} days left`),
    );
  }
  container.append(el(doc, "h3", {}, "Warranty expiring"), expiring);

  const due = el(doc, "ul", { id: "maintenance-due-list" });
  for (const row of data.maintenanceDue) {
    due.append(
      el(doc, "li", { "data-barcode": row.item.barcode }, `${row.item.barcode}: ${row.days_overdue} days overdue`),
    );
  }
  container.append(el(doc, "h3", {}, "Maintenance due"), due);
}

export function renderQueue(
  container: HTMLElement,
  rows: Finding[],
  handlers: { onFollowUp: (id: string) => void; onResolve: (id: string) => void },
  conflictPrompt: string | null = null,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (conflictPrompt !== null) {
    container.append(el(doc, "p", { id: "queue-conflict", class: "conflict" }, conflictPrompt));
  }
  const table = el(doc, "table", { id: "workflow-queue" });
  for (const row of rows) {
    const tr = el(doc, "tr", { "data-record": row.id, "data-status": row.status });
    tr.append(
      el(doc, "td", {}, row.date),
      el(doc, "td", {}, row.object_name),
      el(doc, "td", {}, row.status),
      el(doc, "td", {}, row.finding),
    );
    const actions = el(doc, "td");
    if (row.status === "OPEN") {
      const followUp = el(doc, "button", { "data-action": "follow-up" }, "Follow up");
      followUp.addEventListener("click", () => handlers.onFollowUp(row.id));
      actions.append(followUp);
    }
    const resolve = el(doc, "button", { "data-action": "resolve" }, "Resolve");
    resolve.addEventListener("click", () => handlers.onResolve(row.id));
    actions.append(resolve);
    tr.append(actions);
    table.append(tr);
  }
  container.append(table);
}

export function renderFindingForm(
  container: HTMLElement,
  state: FindingFormState,
  handlers: {
    onChange: (patch: Partial<FindingFormState>) => void;
    onLookup: () => void;
    onSwitchToGlobal: () => void;
    onSubmit: () => void;
  },
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const errors = validate(state);
  const form = el(doc, "form", { id: "finding-form" });

  const field = (
    name: keyof FindingFormState & string,
    label: string,
    type = "text",
  ): HTMLInputElement => {
    const input = el(doc, "input", {
      id: `finding-${name}`,
      name,
      type,
      value: String(state[name] ?? ""),
    });
    input.addEventListener("input", () => handlers.onChange({ [name]: input.value } as Partial<FindingFormState>));
    form.append(el(doc, "label", { for: `finding-${name}` }, label), input);
    const error = errors[name];
    if (error !== undefined) {
      form.append(el(doc, "p", { class: "hint", "data-error-for": name }, error));
    }
    return input;
  };

  if (!state.globalMode) {
    const barcode = field("barcode", "Barcode");
    barcode.addEventListener("change", () => handlers.onLookup());
    if (state.itemName !== null) {
      form.append(el(doc, "p", { id: "finding-item-name" }, `Item: ${state.itemName}`));
    }
    if (state.lookupError !== null) {
      form.append(el(doc, "p", { class: "error", id: "finding-lookup-error" }, state.lookupError));
      const toGlobal = el(doc, "button", { type: "button", id: "switch-global" }, "Record as global finding");
      toGlobal.addEventListener("click", () => handlers.onSwitchToGlobal());
      form.append(toGlobal);
    }
  }
  field("objectName", "Object name");
  field("objectDescription", "Object description");
  field("date", "Date", "date");
  field("campusCode", "Campus");
  field("locationCode", "Location");
  field("finding", "Finding");
  field("recommendation", "Recommendation");

  const submit = el(doc, "button", { type: "submit", id: "finding-submit" }, "Submit finding");
  if (!canSubmit(state)) submit.setAttribute("disabled", "disabled");
  form.append(submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    handlers.onSubmit();
  });
  container.append(form);
}

export function renderGallery(container: HTMLElement, subjectLabel: string, entries: GalleryEntry[]): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  container.append(el(doc, "h3", {}, subjectLabel));
  const grid = el(doc, "div", { id: "gallery-grid" });
  for (const entry of entries) {
    const cell = el(doc, "figure", { "data-view": entry.view });
    cell.append(el(doc, "figcaption", {}, entry.view));
    if (entry.photo !== null) {
      cell.append(el(doc, "span", { class: "photo", "data-photo": entry.photo.id }, entry.photo.id.slice(0, 12)));
    } else {
      cell.append(el(doc, "span", { class: "empty" }, "no photo"));
    }
    grid.append(cell);
  }
  container.append(grid);
}

export function renderItemsTable(container: HTMLElement, items: Item[]): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const table = el(doc, "table", { id: "items-table" });
  for (const item of items) {
    const tr = el(doc, "tr", { "data-barcode": item.barcode });
    tr.append(
      el(doc, "td", {}, item.barcode),
      el(doc, "td", {}, item.name),
      el(doc, "td", {}, item.condition),
      el(doc, "td", {}, `${item.campus_code ?? ""}/${item.location_code ?? ""}`),
    );
    table.append(tr);
  }
  container.append(table);
}

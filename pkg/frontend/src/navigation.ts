/**
 * The role-filtered menu tree: Reference, Processing, Monitoring, Gallery,
 * Reports, plus Help and Settings pages (the latter two are extrapolated
 * pages without a backend counterpart and are marked as such).
 *
 * Each entry names the permission its backend route enforces; an entry is
 * shown exactly when the role holds that permission, so navigation mirrors
 * the server's permission matrix rather than inventing client-side rules.
 */

import type { Role } from "./api.js";

export type Permission =
  | "reference.read"
  | "reference.write"
  | "item.register"
  | "item.read"
  | "item.transfer"
  | "item.status"
  | "photo.upload"
  | "photo.read"
  | "repair.open"
  | "repair.complete"
  | "finding.submit"
  | "finding.read"
  | "finding.follow_up"
  | "finding.resolve"
  | "report.read"
  | "export.read"
  | "user.manage"
  | "audit.read";

/** Mirror of the server-side role grants; tests verify it against the API. */
export const ROLE_PERMISSIONS: Record<Role, readonly Permission[]> = {
  FACILITIES_ADMIN: [
    "reference.read",
    "reference.write",
    "item.register",
    "item.read",
    "item.transfer",
    "item.status",
    "photo.upload",
    "photo.read",
    "repair.open",
    "repair.complete",
    "finding.submit",
    "finding.read",
    "finding.follow_up",
    "finding.resolve",
    "report.read",
    "export.read",
    "user.manage",
    "audit.read",
  ],
  WORK_UNIT: ["finding.submit", "finding.read", "item.read", "photo.upload", "photo.read"],
  LEADERSHIP: ["report.read", "export.read", "item.read", "finding.read", "photo.read"],
};

export interface MenuEntry {
  id: string;
  label: string;
  permission: Permission | null; // null = visible to every authenticated user
  extrapolated?: true;
}

export interface Menu {
  id: string;
  label: string;
  entries: MenuEntry[];
}

export const MENU_TREE: readonly Menu[] = [
  {
    id: "reference",
    label: "Reference",
    entries: [
      { id: "ref-campuses", label: "Campuses", permission: "reference.read" },
      { id: "ref-locations", label: "Locations", permission: "reference.read" },
      { id: "ref-categories", label: "Item categories", permission: "reference.read" },
      { id: "ref-types", label: "Item types", permission: "reference.read" },
      { id: "ref-brands", label: "Brands", permission: "reference.read" },
      { id: "ref-sources", label: "Sources", permission: "reference.read" },
      { id: "ref-users", label: "Users", permission: "user.manage" },
    ],
  },
  {
    id: "processing",
    label: "Processing",
    entries: [
      { id: "proc-receipt", label: "Goods receipt", permission: "item.register" },
      { id: "proc-collection", label: "Item collection", permission: "item.read" },
      { id: "proc-transfer", label: "Transfer item", permission: "item.transfer" },
      { id: "proc-status", label: "Change item status", permission: "item.status" },
      { id: "proc-repair", label: "Repairs", permission: "repair.open" },
    ],
  },
  {
    id: "monitoring",
    label: "Monitoring",
    entries: [
      { id: "mon-records", label: "Monitoring records", permission: "finding.read" },
      { id: "mon-submit", label: "Submit finding", permission: "finding.submit" },
      { id: "mon-queue", label: "Follow-up queue", permission: "finding.follow_up" },
      { id: "mon-light", label: "Light damage", permission: "report.read" },
      { id: "mon-heavy", label: "Heavy damage", permission: "report.read" },
      { id: "mon-lost", label: "Lost items", permission: "report.read" },
      { id: "mon-donated", label: "Donated items", permission: "report.read" },
      { id: "mon-by-location", label: "By location", permission: "report.read" },
    ],
  },
  {
    id: "gallery",
    label: "Gallery",
    entries: [{ id: "gallery-browse", label: "Photo gallery", permission: "photo.read" }],
  },
  {
    id: "reports",
    label: "Reports",
    entries: [
      { id: "report-dashboard", label: "Dashboard", permission: "report.read" },
      { id: "report-warranty", label: "Warranty status", permission: "report.read" },
      { id: "report-maintenance", label: "Maintenance due", permission: "report.read" },
      { id: "report-export", label: "CSV export", permission: "export.read" },
    ],
  },
  {
    id: "help",
    label: "Help",
    entries: [{ id: "help-page", label: "Help", permission: null, extrapolated: true }],
  },
  {
    id: "settings",
    label: "Settings",
    entries: [{ id: "settings-page", label: "Settings", permission: null, extrapolated: true }],
  },
];

export function hasPermission(role: Role, permission: Permission): boolean {
  return ROLE_PERMISSIONS[role].includes(permission);
}

/** The navigation a role actually sees: menus with only permitted entries. */
export function navigationFor(role: Role): Menu[] {
  const menus: Menu[] = [];
  for (const menu of MENU_TREE) {
    const entries = menu.entries.filter(
      (entry) => entry.permission === null || hasPermission(role, entry.permission),
    );
    if (entries.length > 0) menus.push({ ...menu, entries });
  }
  return menus;
}

/**
 * Dashboard model: every number shown on a tile comes straight from an API
 * response; nothing is computed client-side beyond picking fields.
 */

import type { ApiClient, ConditionName, MaintenanceDue, Summary, WarrantyReport } from "./api.js";

export interface DashboardTile {
  id: string;
  label: string;
  value: number;
}

export interface DashboardData {
  tiles: DashboardTile[];
  summary: Summary;
  warrantyExpiring: WarrantyReport["in_warranty"];
  maintenanceDue: MaintenanceDue[];
}

const CONDITION_LABELS: Record<ConditionName, string> = {
  GOOD: "Good",
  LIGHT_DAMAGE: "Light damage",
  HEAVY_DAMAGE: "Heavy damage",
  LOST: "Lost",
  DONATED: "Donated",
};

export async function loadDashboard(
  client: ApiClient,
  period: { from: string; to: string },
  asOf: string,
): Promise<DashboardData> {
  const [summary, warranty, maintenance] = await Promise.all([
    client.summary(period.from, period.to, asOf),
    client.warranty(asOf),
    client.maintenanceDue(asOf),
  ]);

  const tiles: DashboardTile[] = [
    { id: "items-total", label: "Items", value: summary.items_total },
  ];
  for (const [condition, label] of Object.entries(CONDITION_LABELS)) {
    tiles.push({
      id: `condition-${condition}`,
      label,
      value: summary.items_by_condition[condition as ConditionName],
    });
  }
  tiles.push(
    { id: "findings-open", label: "Open findings", value: summary.findings_open_at_end },
    { id: "findings-resolved", label: "Resolved in period", value: summary.findings_resolved },
    {
      id: "warranty-expiring",
      label: "Warranty expiring (30d)",
      value: summary.warranty_expiring_within_30_days,
    },
    { id: "maintenance-due", label: "Maintenance due", value: maintenance.length },
  );

  return {
    tiles,
    summary,
    warrantyExpiring: warranty.in_warranty,
    maintenanceDue: maintenance,
  };
}

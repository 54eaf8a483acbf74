/**
 * The facilities admin's live queue: unresolved findings with follow-up and
 * resolve actions. A 409 from the API (someone else already moved the
 * record) becomes a refresh prompt instead of a hard failure.
 */

import { ApiClient, ApiError, type Finding } from "./api.js";

export type ActionOutcome =
  | { kind: "ok"; record: Finding }
  | { kind: "conflict"; refreshPrompt: string }
  | { kind: "error"; code: string; message: string };

export class WorkflowQueue {
  rows: Finding[] = [];

  constructor(private readonly client: ApiClient) {}

  /** Unresolved records: OPEN first ordering comes from the API (date desc). */
  async refresh(): Promise<Finding[]> {
    const [open, followUp] = await Promise.all([
      this.client.listFindings({ status: "OPEN" }),
      this.client.listFindings({ status: "FOLLOW_UP" }),
    ]);
    this.rows = [...open, ...followUp];
    return this.rows;
  }

  get length(): number {
    return this.rows.length;
  }

  private replaceRow(record: Finding): void {
    if (record.status === "RESOLVED") {
      this.rows = this.rows.filter((r) => r.id !== record.id);
    } else {
      this.rows = this.rows.map((r) => (r.id === record.id ? record : r));
    }
  }

  private async act(action: () => Promise<Finding>): Promise<ActionOutcome> {
    try {
      const record = await action();
      this.replaceRow(record);
      return { kind: "ok", record };
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        return {
          kind: "conflict",
          refreshPrompt: "This record changed in another session; refresh the queue and retry.",
        };
      }
      if (error instanceof ApiError) {
        return { kind: "error", code: error.code, message: error.message };
      }
      throw error;
    }
  }

  followUp(recordId: string, note: string): Promise<ActionOutcome> {
    return this.act(() => this.client.followUp(recordId, note));
  }

  resolve(recordId: string, resolutionDate: string): Promise<ActionOutcome> {
    return this.act(() => this.client.resolve(recordId, resolutionDate));
  }
}

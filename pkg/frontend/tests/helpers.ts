import { inject } from "vitest";

import { ApiClient, type Role } from "../src/api.js";

export const DEMO_PASSWORD = "rahasia-demo";

export const DEMO_USERS: Record<Role, string> = {
  FACILITIES_ADMIN: "admin",
  WORK_UNIT: "unit_tu",
  LEADERSHIP: "pimpinan",
};

export function baseUrl(): string {
  return inject("baseUrl");
}

export async function loginAs(role: Role): Promise<ApiClient> {
  const client = new ApiClient(baseUrl());
  await client.login(DEMO_USERS[role], DEMO_PASSWORD);
  return client;
}

export async function loginSession(role: Role): Promise<{ client: ApiClient; token: string }> {
  const client = new ApiClient(baseUrl());
  const session = await client.login(DEMO_USERS[role], DEMO_PASSWORD);
  return { client, token: session.token };
}

export function anonymous(): ApiClient {
  return new ApiClient(baseUrl());
}

let counter = 0;

/** Unique-ish suffix so test files can create entities without collisions. */
export function unique(prefix: string): string {
  counter += 1;
  return `${prefix}-${Date.now() % 100000}-${counter}`;
}

/**
 * Session state. The token lives only in browser sessionStorage (never
 * localStorage), so closing the browser ends the session on the client side.
 */

import type { Role, SessionInfo } from "./api.js";

const STORAGE_KEY = "facmon.session";

export interface UiSession {
  token: string;
  role: Role;
  username: string;
  expiresAt: string;
}

interface StringStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

function defaultStorage(): StringStorage {
  if (typeof sessionStorage !== "undefined") return sessionStorage;
  const memory = new Map<string, string>();
  return {
    getItem: (k) => memory.get(k) ?? null,
    setItem: (k, v) => void memory.set(k, v),
    removeItem: (k) => void memory.delete(k),
  };
}

export class SessionStore {
  constructor(private readonly storage: StringStorage = defaultStorage()) {}

  save(info: SessionInfo): UiSession {
    const session: UiSession = {
      token: info.token,
      role: info.role,
      username: info.username,
      expiresAt: info.expires_at,
    };
    this.storage.setItem(STORAGE_KEY, JSON.stringify(session));
    return session;
  }

  load(): UiSession | null {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (raw === null) return null;
    try {
      return JSON.parse(raw) as UiSession;
    } catch {
      this.storage.removeItem(STORAGE_KEY);
      return null;
    }
  }

  clear(): void {
    this.storage.removeItem(STORAGE_KEY);
  }
}

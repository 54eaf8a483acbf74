/**
 * App bootstrap: restore the session, show login or the main menu, route
 * menu entries to screens. API base URL comes from a <meta> tag or defaults
 * to same-origin.
 */

import { ApiClient, ApiError } from "./api.js";
import { loadDashboard } from "./dashboard.js";
import { attachPhoto, emptyForm, lookupBarcode, submit, switchToGlobalMode } from "./findingForm.js";
import type { FindingFormState } from "./findingForm.js";
import { galleryEntries } from "./gallery.js";
import { navigationFor } from "./navigation.js";
import { WorkflowQueue } from "./queue.js";
import {
  renderDashboard,
  renderFindingForm,
  renderGallery,
  renderItemsTable,
  renderLogin,
  renderNavigation,
  renderQueue,
} from "./render.js";
import { SessionStore } from "./session.js";

function apiBase(): string {
  const meta = document.querySelector('meta[name="facmon-api-base"]');
  return meta?.getAttribute("content") ?? "";
}

function isoToday(): string {
  return new Date().toISOString().slice(0, 10);
}

function yearStart(): string {
  return `${new Date().getFullYear()}-01-01`;
}

export class App {
  private readonly sessions = new SessionStore();
  private client: ApiClient;

  constructor(
    private readonly navHost: HTMLElement,
    private readonly screenHost: HTMLElement,
  ) {
    this.client = new ApiClient(apiBase());
  }

  start(): void {
    const session = this.sessions.load();
    if (session === null) {
      this.showLogin(null);
      return;
    }
    this.client.setToken(session.token);
    this.showShell();
  }

  private showLogin(errorMessage: string | null): void {
    this.navHost.replaceChildren();
    renderLogin(
      this.screenHost,
      (username, password) => {
        this.client
          .login(username, password)
          .then((info) => {
            this.sessions.save(info);
            this.showShell();
          })
          .catch((error: unknown) => {
            const message =
              error instanceof ApiError ? error.message : "cannot reach the server";
            this.showLogin(message);
          });
      },
      errorMessage,
    );
  }

  private showShell(): void {
    const session = this.sessions.load();
    if (session === null) {
      this.showLogin(null);
      return;
    }
    renderNavigation(this.navHost, navigationFor(session.role), (entryId) => {
      void this.openScreen(entryId);
    });
    void this.openScreen("report-dashboard");
  }

  private async openScreen(entryId: string): Promise<void> {
    try {
      if (entryId === "report-dashboard") {
        const data = await loadDashboard(
          this.client,
          { from: yearStart(), to: isoToday() },
          isoToday(),
        );
        renderDashboard(this.screenHost, data);
      } else if (entryId === "mon-queue") {
        await this.showQueue(null);
      } else if (entryId === "mon-submit") {
        this.showFindingForm(emptyForm(isoToday()));
      } else if (entryId === "proc-collection") {
        renderItemsTable(this.screenHost, await this.client.listItems());
      } else if (entryId === "gallery-browse") {
        const items = await this.client.listItems();
        const withPhotos = items.find((i) => i.photos.length > 0) ?? items[0];
        if (withPhotos !== undefined) {
          renderGallery(this.screenHost, withPhotos.barcode, galleryEntries(withPhotos));
        }
      } else if (entryId === "help-page") {
        this.screenHost.textContent =
          "Help: this page is an extrapolated placeholder; see the operator handbook.";
      } else if (entryId === "settings-page") {
        this.screenHost.textContent =
          "Settings: this page is an extrapolated placeholder; server settings live in the service config.";
      } else {
        this.screenHost.textContent = `Screen ${entryId} is reached via the API console for now.`;
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.sessions.clear();
        this.showLogin("session expired, sign in again");
        return;
      }
      this.screenHost.textContent =
        error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    }
  }

  private async showQueue(conflictPrompt: string | null): Promise<void> {
    const queue = new WorkflowQueue(this.client);
    await queue.refresh();
    const rerender = (prompt: string | null) =>
      renderQueue(
        this.screenHost,
        queue.rows,
        {
          onFollowUp: (id) => {
            void queue.followUp(id, "ditindaklanjuti").then((outcome) => {
              rerender(outcome.kind === "conflict" ? outcome.refreshPrompt : null);
            });
          },
          onResolve: (id) => {
            void queue.resolve(id, isoToday()).then((outcome) => {
              rerender(outcome.kind === "conflict" ? outcome.refreshPrompt : null);
            });
          },
        },
        prompt,
      );
    rerender(conflictPrompt);
  }

  private showFindingForm(state: FindingFormState): void {
    renderFindingForm(this.screenHost, state, {
      onChange: (patch) => this.showFindingForm({ ...state, ...patch }),
      onLookup: () => {
        void lookupBarcode(this.client, state).then((next) => this.showFindingForm(next));
      },
      onSwitchToGlobal: () => this.showFindingForm(switchToGlobalMode(state)),
      onSubmit: () => {
        void submit(this.client, state).then(
          (result) => {
            this.screenHost.textContent = `Finding ${result.id} recorded (${result.status}).`;
          },
          (error: unknown) => {
            this.screenHost.textContent = String(error);
          },
        );
      },
    });
  }

  /** Exposed for photo pickers wired by the form screen. */
  attachFormPhoto = attachPhoto;
}

export function mount(doc: Document): App {
  const nav = doc.getElementById("nav") ?? doc.body.appendChild(doc.createElement("div"));
  const screen = doc.getElementById("screen") ?? doc.body.appendChild(doc.createElement("div"));
  const app = new App(nav as HTMLElement, screen as HTMLElement);
  app.start();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("facmon-root") !== null) {
  mount(document);
}

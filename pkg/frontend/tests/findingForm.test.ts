// @vitest-environment happy-dom
/**
 * Finding entry form: required-field enforcement, barcode autofill, the
 * global-mode switch, photo slots, and a real submission with photo upload.
 */

import { describe, expect, it } from "vitest";

import {
  attachPhoto,
  canSubmit,
  emptyForm,
  lookupBarcode,
  submit,
  switchToGlobalMode,
  validate,
} from "../src/findingForm.js";
import { renderFindingForm } from "../src/render.js";
import { loginAs } from "./helpers.js";

function filledForm() {
  return {
    ...emptyForm("2018-06-01"),
    globalMode: true,
    objectName: "plafon koridor",
    campusCode: "B",
    locationCode: "B.201",
    finding: "retak melebar",
    recommendation: "perbaikan plafon",
  };
}

describe("validation", () => {
  it("requires the finding text", () => {
    const state = { ...filledForm(), finding: "   " };
    expect(validate(state)).toHaveProperty("finding");
    expect(canSubmit(state)).toBe(false);
  });

  it("requires an object name in global mode", () => {
    const state = { ...filledForm(), objectName: "" };
    expect(validate(state)).toHaveProperty("objectName");
  });

  it("requires a barcode when not global", () => {
    const state = { ...filledForm(), globalMode: false, barcode: "" };
    expect(validate(state)).toHaveProperty("barcode");
  });

  it("accepts a complete global form", () => {
    expect(validate(filledForm())).toEqual({});
    expect(canSubmit(filledForm())).toBe(true);
  });

  it("refuses to submit an invalid form before any network call", async () => {
    const state = { ...filledForm(), finding: "" };
    const clientNeverUsed = null as never;
    await expect(submit(clientNeverUsed, state)).rejects.toThrow(/finding/);
  });
});

describe("barcode lookup", () => {
  it("autofills the item name for a known barcode", async () => {
    const client = await loginAs("FACILITIES_ADMIN");
    const state = { ...emptyForm("2018-06-01"), barcode: "B-AC-00001" };
    const next = await lookupBarcode(client, state);
    expect(next.itemName).toBe("AC Split 1PK");
    expect(next.objectName).toBe("AC Split 1PK");
    expect(next.lookupError).toBeNull();
  });

  it("surfaces UNKNOWN_ITEM and offers the global-mode switch", async () => {
    const client = await loginAs("FACILITIES_ADMIN");
    const state = { ...emptyForm("2018-06-01"), barcode: "GHOST-1" };
    const next = await lookupBarcode(client, state);
    expect(next.lookupError).toBe("UNKNOWN_ITEM");
    const global = switchToGlobalMode(next);
    expect(global.globalMode).toBe(true);
    expect(global.barcode).toBe("");
    expect(global.lookupError).toBeNull();
  });
});

describe("photo slots", () => {
  it("keeps at most one photo per view, four views total", () => {
    let state = filledForm();
    const blob = (label: string) => new Blob([label], { type: "image/jpeg" });
    state = attachPhoto(state, "FRONT", blob("a"));
    state = attachPhoto(state, "SIDE", blob("b"));
    state = attachPhoto(state, "BACK", blob("c"));
    state = attachPhoto(state, "SERIAL", blob("d"));
    state = attachPhoto(state, "FRONT", blob("replacement"));
    expect(Object.keys(state.photos)).toHaveLength(4);
  });
});

describe("submission", () => {
  it("creates an OPEN record and uploads the attached photos", async () => {
    const client = await loginAs("WORK_UNIT");
    let state = filledForm();
    state = attachPhoto(state, "FRONT", new Blob([new Uint8Array(600).fill(0xab)], { type: "image/jpeg" }));
    state = attachPhoto(state, "BACK", new Blob([new Uint8Array(300).fill(0xcd)], { type: "image/jpeg" }));
    const result = await submit(client, state);
    expect(result.status).toBe("OPEN");
    expect(result.uploadedPhotos).toBe(2);
    const rows = await client.listFindings({ status: "OPEN" });
    const mine = rows.find((r) => r.id === result.id);
    expect(mine?.object_name).toBe("plafon koridor");
    expect(mine?.photos.map((p) => p.view).sort()).toEqual(["BACK", "FRONT"]);
  });

  it("links the record to the item when a barcode is given", async () => {
    const client = await loginAs("WORK_UNIT");
    const state = {
      ...filledForm(),
      globalMode: false,
      barcode: "B-AC-00001",
      objectName: "",
    };
    const looked = await lookupBarcode(client, state);
    const result = await submit(client, looked);
    const rows = await client.listFindings({});
    const mine = rows.find((r) => r.id === result.id);
    expect(mine?.barcode).toBe("B-AC-00001");
    expect(mine?.object_name).toBe("AC Split 1PK");
  });
});

describe("rendered form", () => {
  it("disables submit while the finding text is empty and shows the hint", () => {
    const host = document.createElement("div");
    document.body.append(host);
    const state = { ...filledForm(), finding: "" };
    renderFindingForm(host, state, {
      onChange: () => {},
      onLookup: () => {},
      onSwitchToGlobal: () => {},
      onSubmit: () => {},
    });
    const button = host.querySelector("#finding-submit");
    expect(button?.hasAttribute("disabled")).toBe(true);
    expect(host.querySelector('[data-error-for="finding"]')?.textContent).toMatch(/required/);
  });

  it("enables submit once the form is complete", () => {
    const host = document.createElement("div");
    document.body.append(host);
    renderFindingForm(host, filledForm(), {
      onChange: () => {},
      onLookup: () => {},
      onSwitchToGlobal: () => {},
      onSubmit: () => {},
    });
    expect(host.querySelector("#finding-submit")?.hasAttribute("disabled")).toBe(false);
  });

  it("offers the global-mode switch after a failed lookup", () => {
    const host = document.createElement("div");
    document.body.append(host);
    const state = { ...emptyForm("2018-06-01"), barcode: "GHOST-1", lookupError: "UNKNOWN_ITEM" };
    renderFindingForm(host, state, {
      onChange: () => {},
      onLookup: () => {},
      onSwitchToGlobal: () => {},
      onSubmit: () => {},
    });
    expect(host.querySelector("#finding-lookup-error")?.textContent).toBe("UNKNOWN_ITEM");
    expect(host.querySelector("#switch-global")).not.toBeNull();
  });
});

/**
 * Finding entry form model: field state, validation, barcode lookup with
 * item-name autofill, the switch to global-finding mode when a barcode does
 * not resolve, and up to four photos (one per view).
 */

import { ApiClient, ApiError, type PhotoViewName } from "./api.js";

export const PHOTO_VIEWS: readonly PhotoViewName[] = ["FRONT", "SIDE", "BACK", "SERIAL"];

export interface FindingFormState {
  globalMode: boolean; // true = finding without an item link
  barcode: string;
  itemName: string | null; // autofilled from the barcode lookup
  lookupError: string | null;
  objectName: string;
  objectDescription: string;
  date: string;
  campusCode: string;
  locationCode: string;
  finding: string;
  recommendation: string;
  photos: Partial<Record<PhotoViewName, File | Blob>>;
}

export function emptyForm(today: string): FindingFormState {
  return {
    globalMode: false,
    barcode: "",
    itemName: null,
    lookupError: null,
    objectName: "",
    objectDescription: "",
    date: today,
    campusCode: "",
    locationCode: "",
    finding: "",
    recommendation: "",
    photos: {},
  };
}

export interface FieldErrors {
  [field: string]: string;
}

/** Required-field validation mirroring the API's 422 rules. */
export function validate(state: FindingFormState): FieldErrors {
  const errors: FieldErrors = {};
  if (state.finding.trim() === "") errors.finding = "finding text is required";
  if (state.date.trim() === "") errors.date = "date is required";
  if (state.campusCode.trim() === "") errors.campusCode = "campus is required";
  if (state.locationCode.trim() === "") errors.locationCode = "location is required";
  if (state.globalMode) {
    if (state.objectName.trim() === "") errors.objectName = "object name is required";
  } else if (state.barcode.trim() === "") {
    errors.barcode = "barcode is required (or switch to a global finding)";
  }
  return errors;
}

export function canSubmit(state: FindingFormState): boolean {
  return Object.keys(validate(state)).length === 0;
}

/**
 * Resolve the barcode; on success autofill the item name, on UNKNOWN_ITEM
 * offer the global-mode switch instead of blocking the user.
 */
export async function lookupBarcode(client: ApiClient, state: FindingFormState): Promise<FindingFormState> {
  const barcode = state.barcode.trim();
  if (barcode === "") return { ...state, itemName: null, lookupError: null };
  try {
    const item = await client.getItem(barcode);
    return {
      ...state,
      itemName: item.name,
      objectName: state.objectName || item.name,
      lookupError: null,
    };
  } catch (error) {
    if (error instanceof ApiError && error.code === "UNKNOWN_ITEM") {
      return { ...state, itemName: null, lookupError: "UNKNOWN_ITEM" };
    }
    throw error;
  }
}

export function switchToGlobalMode(state: FindingFormState): FindingFormState {
  return { ...state, globalMode: true, barcode: "", itemName: null, lookupError: null };
}

export function attachPhoto(
  state: FindingFormState,
  view: PhotoViewName,
  file: File | Blob,
): FindingFormState {
  // one slot per view; re-selecting a view replaces it, so at most four
  return { ...state, photos: { ...state.photos, [view]: file } };
}

export interface SubmitResult {
  id: string;
  status: string;
  uploadedPhotos: number;
}

export async function submit(client: ApiClient, state: FindingFormState): Promise<SubmitResult> {
  const errors = validate(state);
  if (Object.keys(errors).length > 0) {
    throw new Error(`form has errors: ${Object.keys(errors).join(", ")}`);
  }
  const record = await client.submitFinding({
    barcode: state.globalMode ? null : state.barcode.trim(),
    object_name: state.objectName.trim() || null,
    object_description: state.objectDescription.trim() || null,
    date: state.date,
    campus_code: state.campusCode,
    location_code: state.locationCode,
    finding: state.finding.trim(),
    recommendation: state.recommendation.trim(),
  });
  let uploaded = 0;
  for (const view of PHOTO_VIEWS) {
    const file = state.photos[view];
    if (file !== undefined) {
      await client.uploadPhoto({ kind: "finding", id: record.id }, view, file, `${view.toLowerCase()}.jpg`);
      uploaded += 1;
    }
  }
  return { id: record.id, status: record.status, uploadedPhotos: uploaded };
}

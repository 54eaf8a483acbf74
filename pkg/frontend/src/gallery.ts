/**
 * Gallery model: photos of an item or finding grouped in the fixed view
 * order (front, side, back, serial).
 */

import type { Finding, Item, PhotoRef, PhotoViewName } from "./api.js";
import { PHOTO_VIEWS } from "./findingForm.js";

export interface GalleryEntry {
  view: PhotoViewName;
  photo: PhotoRef | null;
}

export function galleryEntries(subject: Pick<Item | Finding, "photos">): GalleryEntry[] {
  return PHOTO_VIEWS.map((view) => ({
    view,
    photo: subject.photos.find((p) => p.view === view) ?? null,
  }));
}

export function photoCount(subject: Pick<Item | Finding, "photos">): number {
  return subject.photos.length;
}

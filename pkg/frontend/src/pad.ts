/** Data-driven event pad: the button grid comes from pad_layout.json so new
 * vocabularies need no code change. */

import type { PadButton, PadLayout } from "./types.js";

export function parsePadLayout(doc: unknown): PadLayout {
  if (typeof doc !== "object" || doc === null) throw new Error("pad layout must be an object");
  const layout = doc as { buttons?: unknown; tags?: unknown };
  if (!Array.isArray(layout.buttons) || !Array.isArray(layout.tags)) {
    throw new Error("pad layout needs `buttons` and `tags` arrays");
  }
  const buttons: PadButton[] = layout.buttons.map((raw, idx) => {
    const b = raw as Partial<PadButton>;
    if (!b.event || typeof b.event !== "string") {
      throw new Error(`button ${idx}: missing event name`);
    }
    for (const part of [b.event, b.sub_event ?? ""]) {
      if (part.includes("-")) throw new Error(`button ${idx}: '-' not allowed in components`);
    }
    return {
      label: b.label ?? [b.event, b.sub_event].filter(Boolean).join(" / "),
      event: b.event,
      sub_event: b.sub_event ?? null,
      default_tags: (b.default_tags ?? []).map(String),
    };
  });
  const tags = layout.tags.map(String);
  for (const tag of tags) {
    if (tag.includes("-")) throw new Error(`tag ${tag}: '-' not allowed in components`);
  }
  return { buttons, tags };
}

/** Tags sent for a click: button defaults plus active toggles, deduplicated
 * in toggle-panel order. */
export function effectiveTags(button: PadButton, toggles: readonly string[]): string[] {
  const tags: string[] = [];
  for (const tag of [...button.default_tags, ...toggles]) {
    if (!tags.includes(tag)) tags.push(tag);
  }
  return tags;
}

/** Split-editor model. The server only accepts segments that appear in the
 * parent comment left to right without overlap (so segments plus the skipped
 * separators reconstruct the parent); validateSplit enforces the same rule
 * client-side so a bad split never leaves the browser. */

export interface DraftSegment {
  text: string;
  behavior: string;
}

/** Null when the draft is submittable, else a human-readable reason. */
export function validateSplit(parent: string, segments: DraftSegment[]): string | null {
  if (segments.length < 2) {
    return "a split needs at least 2 segments";
  }
  let cursor = 0;
  for (let i = 0; i < segments.length; i++) {
    const seg = segments[i]!;
    if (!seg.text) {
      return `segment ${i + 1} is empty`;
    }
    if (!seg.behavior.trim()) {
      return `segment ${i + 1} has no behavior`;
    }
    const pos = parent.indexOf(seg.text, cursor);
    if (pos < 0) {
      return parent.includes(seg.text)
        ? `segment ${i + 1} is out of order or overlaps the previous one`
        : `segment ${i + 1} does not occur in the comment`;
    }
    cursor = pos + seg.text.length;
  }
  return null;
}

/** Initial draft rows: sentence-ish chunks, every chunk an exact substring
 * of the parent, tagged with the candidate behavior. */
export function initialDraft(parent: string, defaultBehavior: string): DraftSegment[] {
  return sentenceChunks(parent).map((text) => ({ text, behavior: defaultBehavior }));
}

/** Sentence-delimited chunks; single-sentence comments fall back to a
 * half-by-words split so the editor always opens with two editable rows. */
export function sentenceChunks(parent: string): string[] {
  const sentences = parent
    .split(/[.!?]+\s*/)
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
  if (sentences.length >= 2) return sentences;

  const words = [...parent.matchAll(/\S+/g)];
  if (words.length < 2) return sentences;
  const mid = Math.ceil(words.length / 2);
  const head = words[0]!;
  const headLast = words[mid - 1]!;
  const tail = words[mid]!;
  const last = words[words.length - 1]!;
  return [
    parent.slice(head.index, headLast.index + headLast[0].length),
    parent.slice(tail.index, last.index + last[0].length),
  ];
}

/** Character spans for the server-provided highlight terms. Spans are
 * half-open [start, end), sorted, non-overlapping, and always inside the
 * text bounds — the renderer relies on all three. */

export interface Span {
  start: number;
  end: number;
}

const escapeRegExp = (s: string): string => s.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");

/** Whole-word, case-insensitive occurrences of every term. */
export function highlightSpans(text: string, terms: string[]): Span[] {
  const spans: Span[] = [];
  for (const term of terms) {
    const trimmed = term.trim();
    if (!trimmed) continue;
    const re = new RegExp(`(?<![\\p{L}\\p{N}])${escapeRegExp(trimmed)}(?![\\p{L}\\p{N}])`, "giu");
    for (const m of text.matchAll(re)) {
      const start = m.index ?? 0;
      spans.push({ start, end: start + m[0].length });
    }
  }
  return mergeSpans(spans, text.length);
}

export function mergeSpans(spans: Span[], textLength: number): Span[] {
  const bounded = spans
    .map((s) => ({ start: Math.max(0, s.start), end: Math.min(textLength, s.end) }))
    .filter((s) => s.start < s.end)
    .sort((a, b) => a.start - b.start || a.end - b.end);
  const out: Span[] = [];
  for (const s of bounded) {
    const last = out[out.length - 1];
    if (last && s.start <= last.end) {
      last.end = Math.max(last.end, s.end);
    } else {
      out.push({ ...s });
    }
  }
  return out;
}

/** Alternating plain/highlighted text pieces, in order. */
export function segmentsForRender(
  text: string,
  spans: Span[],
): { text: string; highlighted: boolean }[] {
  const parts: { text: string; highlighted: boolean }[] = [];
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) {
      parts.push({ text: text.slice(cursor, span.start), highlighted: false });
    }
    parts.push({ text: text.slice(span.start, span.end), highlighted: true });
    cursor = span.end;
  }
  if (cursor < text.length) {
    parts.push({ text: text.slice(cursor), highlighted: false });
  }
  return parts;
}

import { describe, expect, it } from "vitest";
import { highlightSpans, mergeSpans, segmentsForRender } from "../src/highlight.js";

describe("highlightSpans", () => {
  it("finds whole-word matches case-insensitively", () => {
    const spans = highlightSpans("Ads everywhere, ADS in the bar", ["ads"]);
    expect(spans).toEqual([
      { start: 0, end: 3 },
      { start: 16, end: 19 },
    ]);
  });

  it("does not match inside larger words", () => {
    expect(highlightSpans("noise adsorb roads", ["ads"])).toEqual([]);
  });

  it("merges overlapping terms into one span", () => {
    const text = "notification bar";
    const spans = highlightSpans(text, ["notification", "notification bar"]);
    expect(spans).toEqual([{ start: 0, end: 16 }]);
  });

  it("escapes regex metacharacters in terms", () => {
    const spans = highlightSpans("cost is $9.99 today", ["$9.99"]);
    expect(spans).toEqual([{ start: 8, end: 13 }]);
  });

  it("ignores empty terms", () => {
    expect(highlightSpans("plain text", ["", "  "])).toEqual([]);
  });

  it("always yields sorted, disjoint, in-bounds spans", () => {
    const texts = [
      "the virus ate my virus scanner virus",
      "a.b a.b a.b",
      "",
      "word",
    ];
    const terms = ["virus", "a.b", "word", "scanner virus"];
    for (const text of texts) {
      const spans = highlightSpans(text, terms);
      let cursor = 0;
      for (const s of spans) {
        expect(s.start).toBeGreaterThanOrEqual(cursor);
        expect(s.end).toBeGreaterThan(s.start);
        expect(s.end).toBeLessThanOrEqual(text.length);
        cursor = s.end;
      }
    }
  });
});

describe("mergeSpans", () => {
  it("clamps out-of-range spans and drops empty ones", () => {
    const merged = mergeSpans(
      [
        { start: -2, end: 3 },
        { start: 5, end: 5 },
        { start: 8, end: 99 },
      ],
      10,
    );
    expect(merged).toEqual([
      { start: 0, end: 3 },
      { start: 8, end: 10 },
    ]);
  });

  it("coalesces adjacent spans", () => {
    const merged = mergeSpans(
      [
        { start: 0, end: 4 },
        { start: 4, end: 8 },
      ],
      8,
    );
    expect(merged).toEqual([{ start: 0, end: 8 }]);
  });
});

describe("segmentsForRender", () => {
  it("reconstructs the original text exactly", () => {
    const text = "too many ads, the notification bar is full of ads";
    const spans = highlightSpans(text, ["ads", "notification"]);
    const parts = segmentsForRender(text, spans);
    expect(parts.map((p) => p.text).join("")).toBe(text);
    expect(parts.filter((p) => p.highlighted).map((p) => p.text)).toEqual([
      "ads",
      "notification",
      "ads",
    ]);
  });

  it("handles no spans", () => {
    expect(segmentsForRender("abc", [])).toEqual([{ text: "abc", highlighted: false }]);
  });

  it("handles full-cover span", () => {
    expect(segmentsForRender("abc", [{ start: 0, end: 3 }])).toEqual([
      { text: "abc", highlighted: true },
    ]);
  });
});

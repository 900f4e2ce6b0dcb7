// Minimal string-based SVG/HTML builders. Renderers emit plain strings so
// they are pure functions of their inputs and trivially snapshot-testable.

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children = "",
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  return children === "" && name !== "text"
    ? `<${name} ${a}/>`
    : `<${name} ${a}>${children}</${name}>`;
}

// fixed-precision coordinates keep snapshots stable across platforms
export function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

export function svgRoot(width: number, height: number, children: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}">${children}</svg>`
  );
}

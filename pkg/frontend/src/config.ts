// Single base-URL setting. Empty string means same origin as the page,
// which is the layout `skillteach serve --static frontend/dist` produces.

let base = "";

export function setApiBase(url: string): void {
  base = url.replace(/\/+$/, "");
}

export function apiBase(): string {
  return base;
}

/** Pick up <meta name="api-base" content="..."> when the page sets one. */
export function discoverApiBase(doc: Document): void {
  const content = doc
    .querySelector('meta[name="api-base"]')
    ?.getAttribute("content");
  if (content) {
    setApiBase(content);
  }
}

/** Request digests: SHA-256 of the exact bytes sent, truncated to 16
 * hex characters, matching the server's echo. */

export async function digestBytes(bytes: Uint8Array): Promise<string> {
  const hash = await crypto.subtle.digest("SHA-256", bytes as BufferSource);
  return Array.from(new Uint8Array(hash))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("")
    .slice(0, 16);
}

export async function digestString(payload: string): Promise<string> {
  return digestBytes(new TextEncoder().encode(payload));
}

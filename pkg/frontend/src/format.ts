/** Display formatting.
 *
 * The dashboard never recomputes verdicts: numbers are shown exactly as the
 * gateway serialized them.  Canonical run documents emit every real number
 * with six fractional digits, so toFixed(6) reproduces the wire text byte
 * for byte.
 */

import type { DeclaredFields } from "./api.js";

export function reliability(value: number): string {
  return value.toFixed(6);
}

export function evidenceMass(value: number): string {
  return value.toFixed(6);
}

export function optionalValue(value: string | null): string {
  return value === null ? "-" : value;
}

export function declaredPreview(declared: DeclaredFields): string {
  const parts = Object.entries(declared).map(([field, value]) => `${field}=${value}`);
  return parts.length ? parts.join(", ") : "(nothing declared)";
}

/** Client-side pre-validation mirroring the server's offer bounds, so typos
 * surface inline before any request. The server remains the authority. */

import type { Claims, IssueSpecJson, ScenarioJson } from "./types.js";

export interface FieldError {
  issue: string;
  message: string;
}

export function validateClaims(scenario: ScenarioJson, claims: Claims): FieldError[] {
  const errors: FieldError[] = [];
  const known = new Set(scenario.issues.map((i) => i.name));
  for (const name of Object.keys(claims)) {
    if (!known.has(name)) {
      errors.push({ issue: name, message: "not an issue in this scenario" });
    }
  }
  for (const spec of scenario.issues) {
    if (!(spec.name in claims)) {
      errors.push({ issue: spec.name, message: "missing a value" });
      continue;
    }
    errors.push(...validateClaim(spec, claims[spec.name]));
  }
  return errors;
}

function validateClaim(spec: IssueSpecJson, value: unknown): FieldError[] {
  if (spec.kind === "allocated-integer") {
    const min = spec.min ?? 0;
    const max = spec.max ?? 0;
    if (typeof value !== "number" || !Number.isInteger(value)) {
      return [{ issue: spec.name, message: "units must be a whole number" }];
    }
    if (value < min) {
      return [{ issue: spec.name, message: `at least ${min} units` }];
    }
    if (value > max) {
      return [{ issue: spec.name, message: `over-allocated: only ${max} units exist` }];
    }
    if (max - value < min) {
      return [{
        issue: spec.name,
        message: `over-allocated: the other side must keep at least ${min}`,
      }];
    }
    return [];
  }
  if (spec.kind === "shared-categorical") {
    const options = spec.options ?? [];
    if (typeof value !== "string" || !options.includes(value)) {
      return [{ issue: spec.name, message: `pick one of: ${options.join(", ")}` }];
    }
    return [];
  }
  if (typeof value !== "boolean") {
    return [{ issue: spec.name, message: "expected yes/no" }];
  }
  return [];
}

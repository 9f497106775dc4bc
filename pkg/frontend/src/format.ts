/** "+5.0" / "-32.0"; seat changes always carry a sign. */
export function fmtSeats(value: number): string {
  const fixed = value.toFixed(1);
  return value > 0 ? `+${fixed}` : fixed;
}

/** Probability as a percent with one decimal, e.g. 0.842 -> "84.2%". */
export function fmtPercent(p: number): string {
  return `${(100 * p).toFixed(1)}%`;
}

/** Slider readout with decimals matching the step size. */
export function fmtValue(value: number, step: number): string {
  const decimals = step >= 1 ? 0 : step >= 0.1 ? 1 : 2;
  return value.toFixed(decimals);
}

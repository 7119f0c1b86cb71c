/** Linear and log10 axis scales with tick generation. Pure functions. */

export interface Scale {
  (value: number): number;
  ticks: number[];
  domain: [number, number];
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 2.5, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickTarget = 6,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  const step = niceStep(span, tickTarget);
  const ticks: number[] = [];
  for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-9 * step; t += step) {
    ticks.push(Math.abs(t) < 1e-12 ? 0 : t);
  }
  scale.ticks = ticks;
  scale.domain = domain;
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  const scale = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(l0 - 1e-9); e <= Math.log10(d1) + 1e-9; e += 1) {
    ticks.push(Math.pow(10, e));
  }
  scale.ticks = ticks;
  scale.domain = domain;
  return scale;
}

/** Compact tick label: trims float noise, switches to powers for log axes. */
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) {
    const e = Math.floor(Math.log10(abs));
    const mant = value / Math.pow(10, e);
    const m = Math.abs(mant - 1) < 1e-9 ? "" : `${Number(mant.toPrecision(3))}×`;
    return `${m}10^${e}`;
  }
  return String(Number(value.toPrecision(6)));
}

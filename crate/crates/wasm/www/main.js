import init, { Smf, Sweep, Ted } from "./pkg/emgfe_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function num(id) {
  return parseFloat(document.getElementById(id).value);
}

function fmt(x, digits = 4) {
  return Number(x).toPrecision(digits);
}

// Line plot of one or more series sharing the x axis.
function plot(canvas, xs, series, { xlabel = "", ylabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height;
  const pad = { l: 70, r: 12, t: 12, b: 36 };
  ctx.clearRect(0, 0, w, h);

  const ys = series.flatMap((s) => Array.from(s.y));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x1 === x0) { x0 -= 1; x1 += 1; }
  if (y1 === y0) { y0 -= Math.abs(y0) * 0.01 || 1; y1 += Math.abs(y1) * 0.01 || 1; }
  const px = (x) => pad.l + ((x - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const py = (y) => h - pad.b - ((y - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  for (let i = 0; i <= 4; i++) {
    const xv = x0 + ((x1 - x0) * i) / 4;
    const yv = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(fmt(xv, 4), px(xv) - 14, h - pad.b + 14);
    ctx.fillText(fmt(yv, 4), 4, py(yv) + 4);
  }
  ctx.fillText(xlabel, w / 2 - 20, h - 6);

  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    s.y.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.label, pad.l + 8, pad.t + 14 + 14 * k);
  });
  if (ylabel) {
    ctx.fillStyle = "#444";
    ctx.fillText(ylabel, w - pad.r - 8 - ctx.measureText(ylabel).width, pad.t + 14);
  }
}

function showError(el, e) {
  el.classList.add("err");
  el.textContent = String(e.message ?? e);
}

function runSweep() {
  const out = document.getElementById("sw-out");
  out.classList.remove("err");
  try {
    const s = new Sweep(num("sw-lnr"), num("sw-slope"), num("sw-lo"), num("sw-hi"), num("sw-phi"), 41);
    const v = Array.from(s.v_t());
    if (v.length === 0) throw new Error(`all ${s.failed} fitting points failed`);
    const beta = Array.from(s.beta());
    const area = Array.from(s.area_sn());
    const et = Array.from(s.area_et());
    plot(document.getElementById("sw-beta"), v, [{ label: "beta (1/nm)", y: beta }], { xlabel: "V_t (V)" });
    plot(document.getElementById("sw-area"), v, [{ label: "A_f SN (nm2)", y: area }], { xlabel: "V_t (V)" });
    const mid = Math.floor(v.length / 2);
    out.textContent =
      `at V_t = ${fmt(v[mid], 5)} V: beta = ${fmt(beta[mid])} /nm, ` +
      `A_f SN = ${fmt(area[mid])} nm2, A_f ET = ${fmt(et[mid])} nm2\n` +
      `beta range ${fmt(100 * (Math.max(...beta) / Math.min(...beta) - 1), 3)}%, ` +
      `area range ${fmt(100 * (Math.max(...area) / Math.min(...area) - 1), 3)}%` +
      (s.failed ? `\n${s.failed} fitting points failed` : "");
    s.free();
  } catch (e) {
    showError(out, e);
  }
}

function runTed() {
  const out = document.getElementById("ted-out");
  out.classList.remove("err");
  try {
    const t = new Ted(num("ted-phi"), num("ted-field"), num("ted-temp"), 600);
    plot(document.getElementById("ted-plot"), Array.from(t.energy()),
      [{ label: "density (1/eV)", y: t.density() }], { xlabel: "energy from Fermi level (eV)" });
    out.textContent =
      `d_F = ${fmt(t.d_f)} eV, p = ${fmt(t.p, 3)}, FWHM = ${fmt(t.fwhm)} eV, ` +
      `peak at ${fmt(t.peak_energy, 3)} eV`;
    t.free();
  } catch (e) {
    showError(out, e);
  }
}

function runSmf() {
  const n = Math.max(2, Math.round(num("smf-n")) || 201);
  const f = new Smf(n);
  plot(document.getElementById("smf-plot"), Array.from(f.x()), [
    { label: "v high precision", y: f.v_hp() },
    { label: "v simple", y: f.v_fd06() },
    { label: "s high precision", y: f.s_hp() },
    { label: "s simple", y: f.s_fd06() },
  ], { xlabel: "scaled field x" });
  f.free();
}

await init();
for (const id of ["sw-lnr", "sw-slope", "sw-lo", "sw-hi", "sw-phi"]) {
  document.getElementById(id).addEventListener("input", runSweep);
}
for (const id of ["ted-phi", "ted-field", "ted-temp"]) {
  document.getElementById(id).addEventListener("input", runTed);
}
document.getElementById("smf-n").addEventListener("input", runSmf);
runSweep();
runTed();
runSmf();

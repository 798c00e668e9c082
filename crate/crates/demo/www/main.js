import init, { fidelityCurves, thresholdCurve, strategy } from "./pkg/cvclone_demo.js";

const POINTS = 200;
const $ = (id) => document.getElementById(id);

function num(id) {
  return Number($(id).value);
}

function plot(canvas, series, yLabel) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 45;
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.pts.map((p) => p[0]));
  const ys = series.flatMap((s) => s.pts.map((p) => p[1])).filter(Number.isFinite);
  const x0 = 0, x1 = Math.max(...xs);
  const y0 = Math.min(0, ...ys), y1 = Math.max(...ys) * 1.05 || 1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad + ((y0 - y) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  for (let i = 0; i <= 5; i++) {
    const xv = x0 + ((x1 - x0) * i) / 5, yv = y0 + ((y1 - y0) * i) / 5;
    ctx.fillText(xv.toFixed(2), sx(xv) - 10, h - pad + 16);
    ctx.fillText(yv.toFixed(2), 5, sy(yv) + 4);
  }
  ctx.fillText("τ", w - pad / 2 - 10, h - pad + 30);
  ctx.fillText(yLabel, pad + 5, pad / 2 + 2);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let pen = false;
    for (const [x, y] of s.pts) {
      if (!Number.isFinite(y)) { pen = false; continue; }
      pen ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
      pen = true;
    }
    ctx.stroke();
  }
}

function rows(flat, stride) {
  const out = [];
  for (let i = 0; i < flat.length; i += stride) out.push(Array.from(flat.slice(i, i + stride)));
  return out;
}

function fmt(v) {
  return Number.isFinite(v) ? v.toPrecision(6) : "∞";
}

function update() {
  const m = Math.round(num("m")), mu = num("mu"), omega = num("omega");
  const tauMax = num("taumax"), tau = num("tau");
  $("error").textContent = "";
  try {
    const curves = rows(fidelityCurves(m, mu, omega, tauMax, POINTS), 3);
    plot($("fidelity"), [
      { color: "#1f6fb4", pts: curves.map((r) => [r[0], r[1]]) },
      { color: "#d2691e", pts: curves.map((r) => [r[0], r[2]]) },
    ], "F");

    const th = rows(thresholdCurve(m, mu, tauMax, POINTS), 2);
    plot($("threshold"), [{ color: "#2a8a4a", pts: th }], "Ω threshold");

    const s = strategy(m, tau, mu, omega);
    $("strategy").innerHTML = [
      ["regime", s.regime],
      ["support photons N", fmt(s.nOpt)],
      ["sender-side time τ₀", fmt(s.tau0Opt)],
      ["telecloning fidelity", fmt(s.fTele)],
      ["local cloning fidelity", fmt(s.fLcdt)],
      ["better strategy", s.winner],
    ].map(([k, v]) => `<tr><th>${k}</th><td>${v}</td></tr>`).join("");
    s.free();
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

await init();
for (const id of ["m", "mu", "omega", "taumax", "tau"]) $(id).addEventListener("input", update);
update();

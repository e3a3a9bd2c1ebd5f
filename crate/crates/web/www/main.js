import init, { simulate, analyze, strategies } from "./pkg/fracebola_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
const SLIDERS = ["beta", "alpha", "T", "u1", "u2", "u3", "u4"];

function value(id) {
  return parseFloat($(id).value);
}

// Scenario document in the command-line schema.
function scenario() {
  const alpha = value("alpha");
  const u = { u1: value("u1"), u2: value("u2"), u3: value("u3"), u4: value("u4") };
  const doc = {
    params: { beta: value("beta"), alpha },
    T: value("T"),
    integrator: alpha < 1 ? "abm" : "rkf45",
    abm_steps: 800,
  };
  if (Object.values(u).some((x) => x > 0)) {
    doc.strategy = { kind: "fixed", controls: u };
  }
  return doc;
}

function axes(ctx, w, h, xmax, ymax, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, 10);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - 10, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.fillText(ymax.toPrecision(3), 4, 16);
  ctx.fillText("0", pad - 12, h - pad);
  ctx.fillText(`t = ${xmax}`, w - 60, h - pad + 16);
}

function lines(canvas, times, series, names) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 50;
  const xmax = times[times.length - 1];
  const ymax = Math.max(1e-12, ...series.flat());
  axes(ctx, w, h, xmax, ymax, pad);
  series.forEach((ys, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    ys.forEach((y, i) => {
      const px = pad + ((w - pad - 10) * times[i]) / xmax;
      const py = h - pad - ((h - pad - 10) * y) / ymax;
      i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
    });
    ctx.stroke();
    ctx.fillStyle = COLORS[k % COLORS.length];
    ctx.fillText(names[k], w - 130, 20 + 14 * k);
  });
}

function bars(canvas, labels, values) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const span = Math.max(1e-12, ...values.map(Math.abs));
  const mid = w / 2 + 60;
  const row = Math.min(22, (h - 10) / labels.length);
  labels.forEach((label, i) => {
    const len = ((w / 2 - 80) * values[i]) / span;
    ctx.fillStyle = values[i] >= 0 ? "#d62728" : "#1f77b4";
    ctx.fillRect(Math.min(mid, mid + len), 6 + i * row, Math.abs(len), row - 6);
    ctx.fillStyle = "#222";
    ctx.fillText(`${label}  ${values[i].toFixed(4)}`, 8, 6 + i * row + row / 2);
  });
}

function guarded(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function runSimulation() {
  const out = $("sim-out");
  guarded(out, () => {
    const res = JSON.parse(simulate(JSON.stringify(scenario())));
    const shown = [2, 3, 4, 5, 6];
    out.textContent = `R0 = ${res.r0.toFixed(4)}   peak infected = ${res.peak_infected.toFixed(1)}   steps = ${res.accepted}`;
    lines($("sim-plot"), res.times, shown.map((k) => res.states[k]), shown.map((k) => res.names[k]));
  });
}

function runAnalysis() {
  const out = $("ana-out");
  guarded(out, () => {
    const res = JSON.parse(analyze(JSON.stringify(scenario())));
    const endemic = res.endemic ? res.endemic.stability.verdict : "none";
    out.textContent =
      `R0 closed form ${res.r0_closed_form.toFixed(6)}, spectral ${res.r0_spectral.toFixed(6)}\n` +
      `disease-free point: ${res.disease_free.stability.verdict}; endemic point: ${endemic}`;
    if (res.sensitivity) {
      const entries = [...res.sensitivity.entries].sort((a, b) => Math.abs(b.index) - Math.abs(a.index));
      bars($("ana-plot"), entries.map((e) => e.key), entries.map((e) => e.index));
    }
  });
}

function runStrategies() {
  const out = $("str-out");
  out.textContent = "running…";
  setTimeout(() =>
    guarded(out, () => {
      const doc = scenario();
      delete doc.strategy;
      const res = JSON.parse(strategies(JSON.stringify(doc)));
      out.textContent = res.strategies
        .map((s) => `${s.name.padEnd(14)} deaths ${s.summary.deaths.toFixed(1).padStart(9)}  reduction ${s.mortality_reduction_pct.toFixed(2)}%`)
        .join("\n");
      lines($("str-plot"), res.times, res.strategies.map((s) => s.infected), res.strategies.map((s) => s.name));
    }),
  );
}

function label() {
  for (const id of SLIDERS) {
    $(`${id}-v`).textContent = $(id).value;
  }
}

await init();
$("status").textContent = "ready";
for (const id of SLIDERS) {
  $(id).addEventListener("input", () => {
    label();
    runSimulation();
  });
}
$("analyze").addEventListener("click", runAnalysis);
$("strategies").addEventListener("click", runStrategies);
label();
runSimulation();

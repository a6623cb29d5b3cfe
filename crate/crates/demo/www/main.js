import init, { cost_curves, schedule_timeline, crossover_curves } from "./pkg/cams_demo.js";

const COLORS = { revolve: "#555", mrevolve: "#d08000", "cams-sa": "#2a7", "cams-gen": "#36c" };
const KIND = { solution: "#36c", stage_values: "#d08000", solution_with_stages: "#2a7" };

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function frame(ctx, w, h, pad, xmax, ymax, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillText(xlabel, w / 2, h - 8);
  ctx.fillText(`${xmax}`, w - pad, h - pad + 14);
  ctx.fillText(`${ymax}`, 4, pad / 2 + 4);
  ctx.fillText(ylabel, 4, h / 2);
  const sx = (x) => pad + (x / Math.max(xmax, 1)) * (w - 1.5 * pad);
  const sy = (y) => h - pad - (y / Math.max(ymax, 1)) * (h - 1.5 * pad);
  return [sx, sy];
}

function line(ctx, xs, ys, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  let down = false;
  xs.forEach((x, i) => {
    if (ys[i] === null) {
      down = false;
      return;
    }
    if (down) ctx.lineTo(sx(x), sy(ys[i]));
    else ctx.moveTo(sx(x), sy(ys[i]));
    down = true;
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

function guard(errId, f) {
  try {
    $(errId).textContent = "";
    f();
  } catch (e) {
    $(errId).textContent = String(e.message ?? e);
  }
}

function drawCurves() {
  guard("c-err", () => {
    const d = JSON.parse(cost_curves(num("c-m"), num("c-u"), num("c-l")));
    const c = $("c-canvas");
    const ctx = c.getContext("2d");
    const ymax = Math.max(...Object.values(d.series).flat().filter((v) => v !== null));
    const [sx, sy] = frame(ctx, c.width, c.height, 40, d.steps.length, ymax, "steps", "recomp.");
    for (const [name, ys] of Object.entries(d.series)) line(ctx, d.steps, ys, sx, sy, COLORS[name]);
    const last = (ys) => ys[ys.length - 1] ?? "infeasible";
    $("c-legend").innerHTML = Object.entries(d.series)
      .map(([n, ys]) => `<span style="color:${COLORS[n]}">${n}: ${last(ys)}</span>`)
      .join("");
  });
}

function drawTimeline() {
  guard("t-err", () => {
    const policy = $("t-p").value;
    const d = JSON.parse(schedule_timeline(num("t-m"), num("t-u"), num("t-l"), $("t-sa").checked, policy));
    const acts = d.schedule.actions;
    const m = d.schedule.m;
    const c = $("t-canvas");
    c.height = Math.min(2000, Math.max(200, acts.length * 8 + 60));
    const ctx = c.getContext("2d");
    const [sx, sy] = frame(ctx, c.width, c.height, 40, m, acts.length, "step", "");
    acts.forEach((a, row) => {
      const y = sy(acts.length - row);
      if (a.op === "advance") {
        ctx.strokeStyle = "#222";
        ctx.beginPath();
        ctx.moveTo(sx(a.from), y);
        ctx.lineTo(sx(a.to), y);
        ctx.stroke();
      } else if (a.op === "reverse") {
        ctx.strokeStyle = "#c22";
        ctx.lineWidth = 3;
        ctx.beginPath();
        ctx.moveTo(sx(a.step), y);
        ctx.lineTo(sx(a.step - 1), y);
        ctx.stroke();
        ctx.lineWidth = 1;
      } else {
        ctx.fillStyle = KIND[a.kind];
        ctx.strokeStyle = KIND[a.kind];
        ctx.beginPath();
        ctx.arc(sx(a.index), y, 4, 0, 2 * Math.PI);
        if (a.op === "store") ctx.fill();
        else ctx.stroke();
      }
    });
    const mt = d.metrics;
    $("t-summary").textContent =
      `${mt.recomputations} recomputations, ${mt.stores} stores, peak ${mt.peak_units} units. ` +
      "Black: forward steps, red: reversals, filled dot: store, ring: restore.";
    $("t-text").textContent = d.text;
  });
}

function drawCrossover() {
  guard("x-err", () => {
    const d = JSON.parse(crossover_curves(num("x-u"), num("x-e")));
    const c = $("x-canvas");
    const ctx = c.getContext("2d");
    const ymax = Math.max(...d.classical, ...d.modified);
    const [sx, sy] = frame(ctx, c.width, c.height, 40, d.steps.length, ymax, "steps", "recomp.");
    line(ctx, d.steps, d.classical, sx, sy, COLORS.revolve);
    line(ctx, d.steps, d.modified, sx, sy, COLORS.mrevolve);
    if (d.crossover !== null) {
      ctx.strokeStyle = "#c22";
      ctx.setLineDash([4, 4]);
      ctx.beginPath();
      ctx.moveTo(sx(d.crossover), sy(0));
      ctx.lineTo(sx(d.crossover), sy(ymax));
      ctx.stroke();
      ctx.setLineDash([]);
    }
    const where = d.crossover === null ? "no crossover found" : `crossover at m = ${d.crossover}`;
    $("x-summary").textContent =
      `${d.units} units as ${d.units} solutions or ${Math.floor(d.units / d.checkpoint_units)} ` +
      `combined checkpoints of ${d.checkpoint_units} units: ${where}.`;
  });
}

await init();
for (const id of ["c-m", "c-u", "c-l"]) $(id).addEventListener("input", drawCurves);
for (const id of ["t-m", "t-u", "t-l", "t-sa", "t-p"]) $(id).addEventListener("input", drawTimeline);
for (const id of ["x-u", "x-e"]) $(id).addEventListener("input", drawCrossover);
drawCurves();
drawTimeline();
drawCrossover();

import init, { what_if, rebound_sweep, baseline_trajectory, example_document } from "./pkg/ictimpact_wasm.js";

const $ = (id) => document.getElementById(id);
const sliders = {
  k: "coefficient.k",
  rho: "rebound_share",
  m: "partition.m_count",
  g: "baseline.growth",
  e: "baseline.efficiency",
};
let doc = "";
// only moved sliders override the document
const touched = new Set();

const tonnes = (kg) => (kg == null ? "n/a" : `${(kg / 1000).toLocaleString(undefined, { maximumFractionDigits: 3 })} t`);

function call(f, ...args) {
  try {
    return JSON.parse(f(...args));
  } catch (e) {
    const body = typeof e === "string" ? JSON.parse(e) : { errors: [{ path: "", message: String(e) }] };
    $("errors").textContent = body.errors.map((i) => `${i.path || "(document)"}: ${i.message}`).join("\n");
    return null;
  }
}

function overrides() {
  const o = {};
  for (const [id, path] of Object.entries(sliders)) if (touched.has(id)) o[path] = Number($(id).value);
  return JSON.stringify(o);
}

function loadDocument(text) {
  $("errors").textContent = "";
  const w = call(what_if, text, "");
  if (!w) return;
  doc = text;
  touched.clear();
  const p = w.params;
  $("m").max = Math.max(1, Math.ceil(p["partition.m_count"] * 2));
  $("k").value = p["coefficient.k"];
  $("rho").value = p["rebound_share"];
  $("m").value = p["partition.m_count"];
  $("g").value = p["baseline.growth"];
  $("e").value = p["baseline.efficiency"];
  update();
}

function update() {
  $("errors").textContent = "";
  for (const id of Object.keys(sliders)) $(`${id}-out`).textContent = $(id).value;
  const o = overrides();
  const w = call(what_if, doc, o);
  if (w) {
    $("effect").textContent = tonnes(w.effect_kg);
    $("naive").textContent = tonnes(w.naive_kg);
    $("over").textContent = tonnes(w.overstatement_kg);
    $("window").textContent = tonnes(w.window_effect_kg);
    $("flags").replaceChildren(
      ...(w.audit_flags.length ? w.audit_flags : [{ severity: "", code: "no modelled flaw found", message: "" }]).map((f) => {
        const li = document.createElement("li");
        li.textContent = `${f.severity} ${f.code} ${f.message}`.trim();
        li.className = f.severity;
        return li;
      }),
    );
  }
  const sweep = call(rebound_sweep, doc, o, 101);
  if (sweep) drawSweep(sweep, Number($("rho").value));
  let traj = null;
  try {
    traj = JSON.parse(baseline_trajectory(doc, o));
  } catch {
    // documents without a with-service path have no trajectory
  }
  drawTrajectory(traj);
}

function frame(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(0, ...ys), Math.max(0, ...ys)];
  if (y1 === y0) y1 = y0 + 1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (W - pad - 10);
  const sy = (y) => H - pad / 2 - ((y - y0) / (y1 - y0)) * (H - pad);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0));
  ctx.lineTo(W - 10, sy(0));
  ctx.stroke();
  for (const y of [y0, y1]) ctx.fillText(tonnes(y), 2, sy(y) + 4);
  ctx.fillText(String(x0), sx(x0), H - 4);
  ctx.fillText(String(x1), sx(x1) - 20, H - 4);
  return { ctx, sx, sy };
}

function line(ctx, pts, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
  ctx.stroke();
}

function band(ctx, upper, lower, color) {
  ctx.fillStyle = color;
  ctx.beginPath();
  upper.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
  [...lower].reverse().forEach(([x, y]) => ctx.lineTo(x, y));
  ctx.closePath();
  ctx.fill();
}

function drawSweep(pts, rho) {
  const xs = pts.map((p) => p.rebound_share);
  const effect = pts.map((p) => p.effect_kg);
  const naive = pts.map((p) => p.naive_kg ?? p.effect_kg);
  const { ctx, sx, sy } = frame($("sweep"), xs, [...effect, ...naive]);
  const e = pts.map((p, i) => [sx(xs[i]), sy(effect[i])]);
  const n = pts.map((p, i) => [sx(xs[i]), sy(naive[i])]);
  band(ctx, n, e, "rgba(220, 80, 60, 0.25)");
  line(ctx, n, "#c0392b");
  line(ctx, e, "#1f6fb2");
  ctx.strokeStyle = "#333";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(sx(rho), 0);
  ctx.lineTo(sx(rho), $("sweep").height);
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawTrajectory(pts) {
  const canvas = $("trajectory");
  if (!pts) {
    canvas.getContext("2d").clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  const v = (q) => q.value;
  const xs = pts.map((p) => p.t);
  const ys = pts.flatMap((p) => [v(p.baseline_lo), v(p.baseline_hi), v(p.with_service)]);
  const { ctx, sx, sy } = frame(canvas, xs, ys);
  band(ctx, pts.map((p) => [sx(p.t), sy(v(p.baseline_hi))]), pts.map((p) => [sx(p.t), sy(v(p.baseline_lo))]), "rgba(31, 111, 178, 0.2)");
  line(ctx, pts.map((p) => [sx(p.t), sy(v(p.baseline))]), "#1f6fb2");
  line(ctx, pts.map((p) => [sx(p.t), sy(v(p.with_service))]), "#27ae60");
}

await init();
$("doc").value = example_document();
for (const id of Object.keys(sliders)) {
  $(id).addEventListener("input", () => {
    touched.add(id);
    update();
  });
}
$("reset").addEventListener("click", () => loadDocument(doc));
$("load").addEventListener("click", () => loadDocument($("doc").value));
loadDocument($("doc").value);

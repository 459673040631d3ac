import init, { sumset_view, alpha_curve, construction_view } from "./pkg/zpadd_web.js";

const $ = (id) => document.getElementById(id);

function call(fn, ...args) {
  const view = JSON.parse(fn(...args));
  if (view.error) throw new Error(view.error);
  return view;
}

function report(target, f) {
  try {
    f();
  } catch (e) {
    $(target).textContent = "error: " + e.message;
  }
}

function drawCircle(view) {
  const c = $("set-canvas");
  const ctx = c.getContext("2d");
  const cx = c.width / 2, cy = c.height / 2;
  ctx.clearRect(0, 0, c.width, c.height);
  const angle = (x) => (2 * Math.PI * x) / view.p - Math.PI / 2;
  const at = (x, r) => [cx + r * Math.cos(angle(x)), cy + r * Math.sin(angle(x))];
  const ring = (members, r, color, size) => {
    ctx.fillStyle = color;
    for (const x of members) {
      const [px, py] = at(x, r);
      ctx.beginPath();
      ctx.arc(px, py, size, 0, 2 * Math.PI);
      ctx.fill();
    }
  };
  ctx.strokeStyle = "#ddd";
  for (const r of [150, 210]) {
    ctx.beginPath();
    ctx.arc(cx, cy, r, 0, 2 * Math.PI);
    ctx.stroke();
  }
  const cover = view.witness ? view.witness.cover : view.min_cover;
  ctx.strokeStyle = "#2da44e";
  ctx.lineWidth = 2;
  ctx.beginPath();
  cover.members.forEach((x, i) => {
    const [px, py] = at(x, 120);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
  ring(view.sumset, 210, "#f0a020", 4);
  ring(view.set, 150, "#1f6feb", 5);
  if (view.p <= 61) {
    ctx.fillStyle = "#555";
    ctx.font = "11px monospace";
    for (let x = 0; x < view.p; x++) {
      const [px, py] = at(x, 240);
      ctx.fillText(String(x), px - 6, py + 4);
    }
  }
}

function showSet() {
  report("set-info", () => {
    const view = call(sumset_view, $("set-literal").value);
    drawCircle(view);
    const w = view.witness;
    $("set-info").textContent =
      `|A| = ${view.size_a}, |2A| = ${view.size_2a}, r = ${view.r}\n` +
      `shortest cover: difference ${view.min_cover.difference}, length ${view.min_cover.length}\n` +
      (w
        ? `witness: difference ${w.difference}, cover length ${w.cover.length} <= |A|+r+1 = ${view.size_a + view.r + 1}, ` +
          `run in 2A of length ${w.inside_sumset.length} >= 2|A|-1 = ${2 * view.size_a - 1}`
        : "no progression witness");
  });
}

function showCurve() {
  report("curve-info", () => {
    const view = call(alpha_curve, Number($("curve-p").value), 200);
    const c = $("curve-canvas");
    const ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    const pad = 40;
    const lo = view.points[0].alpha, hi = view.envelope;
    const px = (eta) => pad + eta * (c.width - 2 * pad);
    const py = (a) => c.height - pad - ((a - lo) / (hi - lo)) * (c.height - 2 * pad);
    ctx.strokeStyle = "#999";
    ctx.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(px(0), py(hi));
    ctx.lineTo(px(1), py(hi));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.strokeStyle = "#1f6feb";
    ctx.lineWidth = 2;
    ctx.beginPath();
    view.points.forEach((pt, i) => (i === 0 ? ctx.moveTo(px(pt.eta), py(pt.alpha)) : ctx.lineTo(px(pt.eta), py(pt.alpha))));
    ctx.stroke();
    ctx.lineWidth = 1;
    if (view.cp !== null) {
      ctx.strokeStyle = "#d1242f";
      ctx.beginPath();
      ctx.moveTo(px(view.cp), pad);
      ctx.lineTo(px(view.cp), c.height - pad);
      ctx.stroke();
    }
    ctx.fillStyle = "#333";
    ctx.font = "12px sans-serif";
    ctx.fillText("η", c.width / 2, c.height - 10);
    ctx.fillText(lo.toFixed(4), 2, py(lo));
    ctx.fillText(hi.toFixed(4), 2, py(hi) + 4);
    $("curve-info").textContent =
      `α(η, ${view.p}) from ${lo.toFixed(6)} to ${view.points[view.points.length - 1].alpha.toFixed(6)}; ` +
      `envelope ${hi.toFixed(6)} (dashed)` +
      (view.cp !== null ? `; c(p) = ${view.cp.toFixed(6)} (red)` : "; c(p) needs p >= 80");
  });
}

function showConstruction() {
  report("cons-info", () => {
    const view = call(construction_view, $("cons-kind").value, Number($("cons-p").value), Number($("cons-m").value));
    const c = $("cons-canvas");
    const ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    const w = c.width / view.p;
    ctx.fillStyle = "#eee";
    ctx.fillRect(0, 30, c.width, 60);
    ctx.fillStyle = "#1f6feb";
    for (const x of view.members) ctx.fillRect(x * w, 30, Math.max(w, 1), 60);
    $("cons-info").textContent =
      `${view.kind}: p = ${view.p}, m = ${view.m}` + (view.n !== null ? `, n = ${view.n}` : "") +
      `\n|A| = ${view.members.length}, density ${view.density.toFixed(6)}, m-sum-free: ${view.m_sum_free}` +
      `, shortest covering progression ${view.cover_length}`;
  });
}

await init();
$("set-go").onclick = showSet;
$("curve-go").onclick = showCurve;
$("cons-go").onclick = showConstruction;
showSet();
showCurve();
showConstruction();

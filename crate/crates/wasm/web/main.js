import init, { center_json, colormap_rgba, farthest_value, sphere_polyline } from "./pkg/bregball_wasm.js";

const SAMPLES = 513;
const RAYS = 180;

const $ = (id) => document.getElementById(id);
const canvas = $("map");
const ctx = canvas.getContext("2d");
const state = { region: null, report: null, sphereAt: null, base: null };

function params() {
  return {
    gen: $("gen").value,
    a: Number($("a").value),
    res: Number($("res").value),
    subgrad: $("subgrad").checked,
    r: Number($("r").value),
  };
}

function toCanvas([x, y]) {
  const { x0, y0, x1, y1 } = state.region;
  return [((x - x0) / (x1 - x0)) * canvas.width, ((y1 - y) / (y1 - y0)) * canvas.height];
}

function fromCanvas(px, py) {
  const { x0, y0, x1, y1 } = state.region;
  return [x0 + (px / canvas.width) * (x1 - x0), y1 - (py / canvas.height) * (y1 - y0)];
}

function dot(p, radius, color) {
  const [u, v] = toCanvas(p);
  ctx.beginPath();
  ctx.arc(u, v, radius, 0, 2 * Math.PI);
  ctx.fillStyle = color;
  ctx.fill();
  ctx.strokeStyle = "#000";
  ctx.stroke();
}

function drawOverlay() {
  const p = params();
  ctx.drawImage(state.base, 0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 2;
  ctx.strokeStyle = "#fff";
  ctx.beginPath();
  ctx.moveTo(...toCanvas([1, p.a]));
  ctx.lineTo(...toCanvas([p.a, 1]));
  ctx.stroke();
  const cert = state.report.certificate;
  for (const q of cert.farthest) dot(q, 4, "#ffd800");
  dot(cert.center, 6, "#fff");
  if (state.sphereAt) {
    let pts;
    try {
      pts = sphere_polyline(p.gen, state.sphereAt[0], state.sphereAt[1], p.r, RAYS);
    } catch (e) {
      $("hover").textContent = String(e);
      return;
    }
    ctx.strokeStyle = "#0f0";
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i <= pts.length; i += 2) {
      const k = i % pts.length;
      if (Number.isNaN(pts[k])) {
        pen = false;
        continue;
      }
      const [u, v] = toCanvas([pts[k], pts[k + 1]]);
      pen ? ctx.lineTo(u, v) : ctx.moveTo(u, v);
      pen = true;
    }
    ctx.stroke();
    dot(state.sphereAt, 3, "#0f0");
  }
}

function render() {
  const p = params();
  $("a-out").textContent = p.a;
  $("r-out").textContent = p.r;
  try {
    state.report = JSON.parse(center_json(p.gen, p.a, SAMPLES, p.subgrad));
    const pixels = colormap_rgba(p.gen, p.a, p.res, SAMPLES);
    state.region = state.report.region;
    const image = new ImageData(new Uint8ClampedArray(pixels), p.res, p.res);
    state.base = document.createElement("canvas");
    state.base.width = state.base.height = p.res;
    state.base.getContext("2d").putImageData(image, 0, 0);
  } catch (e) {
    $("report").textContent = String(e);
    return;
  }
  ctx.imageSmoothingEnabled = false;
  drawOverlay();
  const c = state.report.certificate;
  const fmt = (v) => (typeof v === "number" ? v.toPrecision(10) : v);
  $("report").textContent = [
    `center       (${c.center.map(fmt).join(", ")})`,
    `closed form  (${state.report.closed_form.map(fmt).join(", ")})`,
    `radius       ${fmt(c.radius)}`,
    `|Q_C(z)|     ${c.farthest.length}`,
    `weights      ${c.weights.map((w) => w.toFixed(6)).join(", ")}`,
    `gap          ${c.membership_gap.toExponential(2)}`,
    `certified    ${c.valid}`,
    `threshold a~ ${state.report.threshold.toFixed(6)}`,
  ].join("\n");
}

canvas.addEventListener("click", (ev) => {
  state.sphereAt = fromCanvas(ev.offsetX, ev.offsetY);
  drawOverlay();
});

canvas.addEventListener("mousemove", (ev) => {
  if (!state.region) return;
  const p = params();
  const [x, y] = fromCanvas(ev.offsetX, ev.offsetY);
  const v = farthest_value(p.gen, p.a, SAMPLES, x, y);
  $("hover").textContent = `x = (${x.toFixed(3)}, ${y.toFixed(3)})   F_C(x) = ${v.toPrecision(6)}`;
});

for (const id of ["gen", "a", "res", "subgrad"]) $(id).addEventListener("input", render);
$("r").addEventListener("input", () => {
  $("r-out").textContent = $("r").value;
  if (state.base) drawOverlay();
});

await init();
render();

import init, { random_points, build_spanner, min_triangle, compare_dilation } from "./pkg/ospanner_web.js";

const canvas = document.getElementById("canvas");
const ctx = canvas.getContext("2d");
const out = document.getElementById("out");
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

const PAD = 20;
let points = [];      // flat [x0, y0, x1, y1, ...] in the unit square
let edges = [];       // flat [u0, v0, ...]
let triangles = null; // { approximate, exact }
let picked = [];
let witness = null;

const toCanvas = (x, y) => [PAD + x * (canvas.width - 2 * PAD), canvas.height - PAD - y * (canvas.height - 2 * PAD)];
const fromCanvas = (cx, cy) => [(cx - PAD) / (canvas.width - 2 * PAD), (canvas.height - PAD - cy) / (canvas.height - 2 * PAD)];
const at = (i) => toCanvas(points[2 * i], points[2 * i + 1]);

function arrow(i, j) {
  const [x1, y1] = at(i), [x2, y2] = at(j);
  const len = Math.hypot(x2 - x1, y2 - y1) || 1;
  const ux = (x2 - x1) / len, uy = (y2 - y1) / len;
  const tx = x2 - ux * 4, ty = y2 - uy * 4;
  ctx.beginPath();
  ctx.moveTo(x1, y1);
  ctx.lineTo(tx, ty);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(tx, ty);
  ctx.lineTo(tx - ux * 7 - uy * 3, ty - uy * 7 + ux * 3);
  ctx.lineTo(tx - ux * 7 + uy * 3, ty - uy * 7 - ux * 3);
  ctx.fill();
}

function triangle(t, colour, dash) {
  ctx.save();
  ctx.strokeStyle = colour;
  ctx.lineWidth = 2.5;
  ctx.setLineDash(dash);
  ctx.beginPath();
  for (const [k, v] of [t.p, t.q, t.r, t.p].entries()) {
    const [x, y] = at(v);
    k ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  }
  ctx.stroke();
  ctx.restore();
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = ctx.fillStyle = "rgba(40, 40, 40, 0.55)";
  ctx.lineWidth = 1;
  for (let k = 0; k < edges.length; k += 2) arrow(edges[k], edges[k + 1]);
  if (witness) {
    ctx.fillStyle = "rgba(41, 128, 185, 0.25)";
    ctx.beginPath();
    for (const [k, v] of witness.entries()) {
      const [x, y] = at(v);
      k ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
    }
    ctx.fill();
  }
  if (triangles) {
    triangle(triangles.exact, "#27ae60", []);
    triangle(triangles.approximate, "#e67e22", [6, 4]);
  }
  for (let i = 0; i < points.length / 2; i++) {
    const [x, y] = at(i);
    ctx.fillStyle = picked.includes(i) ? "#e67e22" : "#c0392b";
    ctx.beginPath();
    ctx.arc(x, y, picked.includes(i) ? 5 : 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function reset() {
  edges = [];
  triangles = null;
  witness = null;
  picked = [];
}

function show(obj) {
  out.textContent = typeof obj === "string" ? obj : JSON.stringify(obj, null, 2);
}

function guarded(f) {
  return (...args) => {
    try {
      f(...args);
    } catch (e) {
      show(`error: ${e.message ?? e}`);
    }
    draw();
  };
}

function nearest(x, y) {
  let best = -1, bd = Infinity;
  for (let i = 0; i < points.length / 2; i++) {
    const [px, py] = at(i);
    const d = Math.hypot(px - x, py - y);
    if (d < bd) [best, bd] = [i, d];
  }
  return bd < 12 ? best : -1;
}

async function main() {
  await init();
  $("random").onclick = guarded(() => {
    points = Array.from(random_points(num("n"), $("clustered").checked, num("seed")));
    reset();
    show(`${points.length / 2} points`);
  });
  $("clear").onclick = guarded(() => {
    points = [];
    reset();
    show("cleared");
  });
  $("build").onclick = guarded(() => {
    const r = JSON.parse(build_spanner(new Float64Array(points), num("eps"), $("practical").checked));
    reset();
    edges = r.edges.flat();
    witness = r.witness;
    show({ edges: r.stats.edges, wspd_pairs: r.stats.wspd_pairs, triples: r.stats.triples, dilation: r.dilation, bound: r.bound });
  });
  $("compare").onclick = guarded(() => {
    const r = JSON.parse(compare_dilation(new Float64Array(points), new Uint32Array(edges), num("approx-eps")));
    witness = r.witness;
    show(r);
  });
  canvas.onclick = guarded((ev) => {
    const rect = canvas.getBoundingClientRect();
    const cx = ev.clientX - rect.left, cy = ev.clientY - rect.top;
    if ($("pick").checked) {
      const i = nearest(cx, cy);
      if (i < 0) return;
      picked = picked.length === 2 ? [i] : [...picked, i];
      triangles = null;
      if (picked.length === 2) {
        triangles = JSON.parse(min_triangle(new Float64Array(points), picked[0], picked[1], num("eps1")));
        show({ approximate: triangles.approximate, exact: triangles.exact, ratio: triangles.ratio });
      }
      return;
    }
    const [x, y] = fromCanvas(cx, cy);
    points.push(x, y);
    reset();
    show(`${points.length / 2} points`);
  });
  show("ready: generate or click to add points");
  draw();
}

main().catch((e) => show(`failed to load: ${e}`));

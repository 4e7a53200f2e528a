// Expects `wasm-pack build --target web --out-dir www/pkg` to have run.
import init, { generate, inspect, solve, tour, scaling } from "./pkg/logpath_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const svg = $("view");
const NS = "http://www.w3.org/2000/svg";

let graph = null;
let pos = [];
let timer = null;

function call(fn, ...args) {
  const result = JSON.parse(fn(...args));
  if (result.error) {
    $("out").textContent = "error: " + result.error;
    return null;
  }
  return result;
}

// Spring layout; vertex 0 is unused.
function layout(g) {
  const w = svg.clientWidth, h = svg.clientHeight;
  const p = [];
  for (let v = 0; v <= g.n; v++) {
    const a = (2 * Math.PI * v) / g.n;
    p.push({ x: w / 2 + (w / 3) * Math.cos(a), y: h / 2 + (h / 3) * Math.sin(a) });
  }
  const ideal = Math.sqrt((w * h) / Math.max(g.n, 1)) * 0.6;
  for (let iter = 0; iter < 300; iter++) {
    const f = p.map(() => ({ x: 0, y: 0 }));
    for (let u = 1; u <= g.n; u++) {
      for (let v = u + 1; v <= g.n; v++) {
        const dx = p[u].x - p[v].x, dy = p[u].y - p[v].y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const r = (ideal * ideal) / d2;
        f[u].x += dx * r; f[u].y += dy * r;
        f[v].x -= dx * r; f[v].y -= dy * r;
      }
    }
    for (const [u, v] of g.edges) {
      const dx = p[u].x - p[v].x, dy = p[u].y - p[v].y;
      const d = Math.sqrt(dx * dx + dy * dy) || 1;
      const a = d / ideal;
      f[u].x -= dx * a; f[u].y -= dy * a;
      f[v].x += dx * a; f[v].y += dy * a;
    }
    const step = 0.1 * (1 - iter / 300);
    for (let v = 1; v <= g.n; v++) {
      p[v].x = Math.min(w - 12, Math.max(12, p[v].x + step * f[v].x));
      p[v].y = Math.min(h - 12, Math.max(12, p[v].y + step * f[v].y));
    }
  }
  return p;
}

function draw(pathVertices = [], lit = []) {
  svg.replaceChildren();
  if (!graph) return;
  const onPath = new Set();
  for (let i = 1; i < pathVertices.length; i++) {
    const [a, b] = [pathVertices[i - 1], pathVertices[i]].sort((x, y) => x - y);
    onPath.add(a + "," + b);
  }
  for (const [u, v, w] of graph.edges) {
    const line = document.createElementNS(NS, "line");
    line.setAttribute("x1", pos[u].x); line.setAttribute("y1", pos[u].y);
    line.setAttribute("x2", pos[v].x); line.setAttribute("y2", pos[v].y);
    line.setAttribute("class", onPath.has(u + "," + v) ? "edge path" : "edge");
    const title = document.createElementNS(NS, "title");
    title.textContent = "weight " + w;
    line.appendChild(title);
    svg.appendChild(line);
  }
  const cut = new Set(graph.articulation);
  const hot = new Set(lit);
  for (let v = 1; v <= graph.n; v++) {
    const c = document.createElementNS(NS, "circle");
    c.setAttribute("cx", pos[v].x); c.setAttribute("cy", pos[v].y); c.setAttribute("r", 9);
    c.setAttribute("class", "node" + (hot.has(v) ? " lit" : cut.has(v) ? " cut" : ""));
    c.addEventListener("click", (e) => { $(e.shiftKey ? "t" : "s").value = v; });
    svg.appendChild(c);
    const label = document.createElementNS(NS, "text");
    label.setAttribute("x", pos[v].x); label.setAttribute("y", pos[v].y);
    label.setAttribute("class", "label");
    label.textContent = v;
    svg.appendChild(label);
  }
}

function show(g) {
  clearInterval(timer);
  graph = g;
  $("text").value = g.text;
  pos = layout(g);
  draw();
  $("out").textContent = `${g.n} vertices, ${g.edges.length} edges, ${g.blocks.length} blocks. ` +
    "Click a vertex to set s, shift-click to set t.";
}

function onSolve() {
  clearInterval(timer);
  const r = call(solve, $("text").value, num("s"), num("t"), $("algo").value);
  if (!r) return;
  draw(r.vertices);
  $("out").textContent =
    `${r.algo}: ${r.vertices.join(" ")}\nweight ${r.weight}\n` +
    `segments ${r.segments.map(([a, b]) => a + "-" + b).join(" ")}\n` +
    `highWater ${r.highWater}  steps ${r.steps}  oracle calls ${r.oracleCalls}`;
}

function onTour() {
  clearInterval(timer);
  const r = call(tour, $("text").value, num("s"), num("t"));
  if (!r) return;
  let i = 0;
  timer = setInterval(() => {
    if (i === r.steps.length) {
      clearInterval(timer);
      draw();
      $("out").textContent = `tour done: ${r.steps.length} block-steps, t ${r.found ? "met" : "not met"}`;
      return;
    }
    const step = r.steps[i++];
    draw([], step.block);
    $("out").textContent = `block ${i}/${r.steps.length}: {${step.block.join(", ")}} entered at ${step.pivot}`;
  }, 400);
}

function onScaling() {
  const rows = call(scaling, num("delta"), num("k"), $("sizes").value, BigInt(num("seed")));
  if (!rows) return;
  const cells = rows.map((r) =>
    `<tr><td>${r.n}</td><td>${r.highWater}</td><td>${r.steps}</td>` +
    `<td>${(r.steps / r.n).toFixed(1)}</td><td>${r.pathWeight}</td></tr>`).join("");
  $("out").innerHTML =
    "<table><tr><th>n</th><th>highWater</th><th>steps</th><th>steps/n</th><th>path weight</th></tr>" +
    cells + "</table>";
}

await init();
$("gen").onclick = () => {
  const g = call(generate, num("n"), num("delta"), num("k"), BigInt(num("seed")));
  if (g) { show(g); $("t").value = g.n; }
};
$("load").onclick = () => { const g = call(inspect, $("text").value); if (g) show(g); };
$("solve").onclick = onSolve;
$("tour").onclick = onTour;
$("scaling").onclick = onScaling;
$("gen").onclick();

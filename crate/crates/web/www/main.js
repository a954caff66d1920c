// SPDX-License-Identifier: Apache-2.0
import init, { render_circuit, depth_curve, adder_demo } from "../pkg/prefix_kron_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guard(target, fn) {
  try {
    fn();
  } catch (e) {
    target.innerHTML = `<span class="error">${e}</span>`;
  }
}

function draw() {
  guard($("metrics"), () => {
    const r = JSON.parse(render_circuit($("gen").value, num("gen-n"), num("gen-s")));
    $("metrics").textContent =
      `size ${r.size}, depth ${r.depth}, fan-out ${r.max_fanout}, deficiency ${r.deficiency}`;
    $("circuit").innerHTML = r.svg;
  });
}

function plot() {
  guard($("curve"), () => {
    const pts = JSON.parse(depth_curve(num("curve-n"), num("curve-s")));
    const w = 640, h = 240, maxN = pts[pts.length - 1].n;
    const maxD = Math.max(...pts.map((p) => p.bound));
    const line = (key, color) => {
      const d = pts.map((p) => `${(p.n / maxN) * w},${h - (p[key] / maxD) * h}`).join(" ");
      return `<polyline points="${d}" fill="none" stroke="${color}"/>`;
    };
    $("curve").innerHTML =
      `<svg viewBox="0 0 ${w} ${h}" width="${w}" height="${h}">` +
      line("bound", "#999") + line("depth", "#c33") + line("optimal", "#36c") + line("lower", "#3a3") +
      `</svg><p>grey: s&lceil;log<sub>s</sub> n&rceil;-1, red: uniform s, blue: best mixed schedule, green: lower bound</p>`;
  });
}

function add() {
  guard($("sum"), () => {
    const r = JSON.parse(adder_demo(num("add-n"), num("add-s"), $("add-a").value, $("add-b").value));
    $("sum").textContent =
      `sum ${r.sum} (expected ${r.expected}), carry ${r.carry}\n` +
      `${r.qubits} qubits, ${r.toffoli_count} Toffoli, Toffoli depth ${r.toffoli_depth}, ` +
      `ancillas ${r.ancillas_clean ? "restored" : "DIRTY"}`;
  });
}

await init();
$("draw").onclick = draw;
$("plot").onclick = plot;
$("add").onclick = add;
draw();
plot();
add();

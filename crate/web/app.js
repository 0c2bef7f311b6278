"use strict";

// Server-authoritative client: every view comes from the service and the
// palette only hints at legality.

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";
const HEX = 22;

let view = null;
let inFlight = false;
let layout = null;

function palette(k) {
  return Array.from({ length: k }, (_, c) => `hsl(${Math.round((360 * c) / k)}, 65%, ${c % 2 ? 45 : 62}%)`);
}

async function api(method, path, body) {
  const resp = await fetch(path, {
    method,
    headers: { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const data = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const err = new Error(data.message || resp.statusText);
    err.status = resp.status;
    err.code = data.code;
    throw err;
  }
  return data;
}

function hexCorners(x, y) {
  const pts = [];
  for (let i = 0; i < 6; i++) {
    const a = (Math.PI / 180) * (60 * i - 30);
    pts.push(`${(x + HEX * Math.cos(a)).toFixed(1)},${(y + HEX * Math.sin(a)).toFixed(1)}`);
  }
  return pts.join(" ");
}

function hexLayout(board) {
  const pos = {};
  for (const c of board.cells) {
    pos[`${c.q},${c.r}`] = [HEX * Math.sqrt(3) * (c.q + c.r / 2), HEX * 1.5 * c.r];
  }
  return { pos, edges: [], hex: true };
}

// Spring layout for instances without hex geometry.
function forceLayout(inst) {
  const ids = inst.nodes.map((n) => n.id);
  const n = ids.length;
  const pos = {};
  ids.forEach((id, i) => {
    const a = (2 * Math.PI * i) / n;
    pos[id] = [200 * Math.cos(a), 200 * Math.sin(a)];
  });
  const edges = inst.edges;
  for (let it = 0; it < 300; it++) {
    const force = Object.fromEntries(ids.map((id) => [id, [0, 0]]));
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const [a, b] = [pos[ids[i]], pos[ids[j]]];
        const dx = a[0] - b[0], dy = a[1] - b[1];
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = 2000 / d2;
        force[ids[i]][0] += f * dx; force[ids[i]][1] += f * dy;
        force[ids[j]][0] -= f * dx; force[ids[j]][1] -= f * dy;
      }
    }
    for (const [u, v] of edges) {
      const dx = pos[u][0] - pos[v][0], dy = pos[u][1] - pos[v][1];
      force[u][0] -= 0.05 * dx; force[u][1] -= 0.05 * dy;
      force[v][0] += 0.05 * dx; force[v][1] += 0.05 * dy;
    }
    const step = 1 - it / 300;
    for (const id of ids) {
      pos[id][0] += Math.max(-10, Math.min(10, force[id][0])) * step;
      pos[id][1] += Math.max(-10, Math.min(10, force[id][1])) * step;
    }
  }
  return { pos, edges, hex: false };
}

function nodeColors(v) {
  if (v.board) return Object.fromEntries(v.board.cells.map((c) => [`${c.q},${c.r}`, c.color]));
  return Object.fromEntries(v.instance.nodes.map((n) => [n.id, n.color]));
}

function startNames(v) {
  if (v.board) return [v.board.start_a.join(","), v.board.start_b.join(",")];
  return [v.instance.start_a, v.instance.start_b];
}

function renderBoard(v) {
  const svg = $("board");
  svg.replaceChildren();
  const colors = nodeColors(v);
  const k = v.board ? v.board.k : v.instance.k;
  const pal = palette(k);
  const ownA = new Set(v.state.territory_a);
  const ownB = new Set(v.state.territory_b);
  const [sa, sb] = startNames(v);
  const xs = Object.values(layout.pos).map((p) => p[0]);
  const ys = Object.values(layout.pos).map((p) => p[1]);
  const pad = HEX * 2;
  svg.setAttribute("viewBox", `${Math.min(...xs) - pad} ${Math.min(...ys) - pad} ${Math.max(...xs) - Math.min(...xs) + 2 * pad} ${Math.max(...ys) - Math.min(...ys) + 2 * pad}`);

  for (const [u, w] of layout.edges) {
    const line = document.createElementNS(SVG, "line");
    const [a, b] = [layout.pos[u], layout.pos[w]];
    line.setAttribute("x1", a[0]); line.setAttribute("y1", a[1]);
    line.setAttribute("x2", b[0]); line.setAttribute("y2", b[1]);
    line.setAttribute("class", "edge");
    svg.appendChild(line);
  }
  for (const [id, [x, y]] of Object.entries(layout.pos)) {
    const shape = layout.hex ? document.createElementNS(SVG, "polygon") : document.createElementNS(SVG, "circle");
    if (layout.hex) shape.setAttribute("points", hexCorners(x, y));
    else { shape.setAttribute("cx", x); shape.setAttribute("cy", y); shape.setAttribute("r", HEX * 0.7); }
    const owner = ownA.has(id) ? "a" : ownB.has(id) ? "b" : null;
    let cls = "cell";
    if (owner) cls += ` own-${owner}`;
    if (id === sa || id === sb) cls += " start";
    shape.setAttribute("class", cls);
    shape.setAttribute("fill", pal[colors[id]]);
    const title = document.createElementNS(SVG, "title");
    title.textContent = `${id} color ${colors[id]}${owner ? ` owned by ${owner.toUpperCase()}` : ""}`;
    shape.appendChild(title);
    svg.appendChild(shape);
    if (owner) {
      const t = document.createElementNS(SVG, "text");
      t.setAttribute("x", x); t.setAttribute("y", y);
      t.setAttribute("class", "mark");
      t.textContent = owner.toUpperCase();
      svg.appendChild(t);
    }
  }
}

function illegalReason(v, c) {
  const me = v.human === "A" ? "a" : "b";
  const them = me === "a" ? "b" : "a";
  if (v.state[`last_${them}`] === c) return "R1: the opponent called this color last";
  if (v.state[`last_${me}`] === c) return "R2: you called this color last";
  return "R3: another color gains territory";
}

function renderPalette(v) {
  const box = $("palette");
  box.replaceChildren();
  const k = v.board ? v.board.k : v.instance.k;
  const pal = palette(k);
  const myTurn = v.status === "in_progress" && v.state.to_move === v.human;
  for (let c = 0; c < k; c++) {
    const b = document.createElement("button");
    b.style.background = pal[c];
    b.textContent = c;
    const legal = myTurn && v.legal_colors.includes(c);
    if (!legal) {
      b.classList.add("illegal");
      b.setAttribute("aria-disabled", "true");
      b.title = myTurn ? illegalReason(v, c) : v.status === "finished" ? "game over" : "not your turn";
    }
    b.disabled = inFlight || v.status !== "in_progress";
    // illegal calls still go to the server, which names the violated rule
    b.addEventListener("click", () => callColor(c));
    box.appendChild(b);
  }
}

function renderStatus(v) {
  $("scores").textContent = `A ${v.scores.a}  B ${v.scores.b}  of ${v.scores.total}`;
  $("turn").textContent = v.status === "finished" ? "" : `${v.state.to_move} to move (you are ${v.human})`;
  const verdict = $("verdict");
  verdict.hidden = !v.verdict;
  if (v.verdict) verdict.textContent = `${v.verdict.winner} wins (${v.verdict.reason}) ${v.verdict.weight_a} : ${v.verdict.weight_b}`;
  const list = $("moves");
  list.replaceChildren(
    ...v.transcript.map((m) => {
      const li = document.createElement("li");
      li.textContent = `${m.player} calls ${m.color} (+${m.gained})`;
      return li;
    })
  );
}

function checkMonotone(prev, next) {
  if (!prev || prev.id !== next.id) return true;
  const grows = (p, q) => p.every((x) => q.includes(x));
  const disjoint = next.state.territory_a.every((x) => !next.state.territory_b.includes(x));
  return disjoint && grows(prev.state.territory_a, next.state.territory_a) && grows(prev.state.territory_b, next.state.territory_b);
}

function show(next) {
  if (!checkMonotone(view, next)) {
    $("message").textContent = "inconsistent state from server; reload the game";
    return;
  }
  if (!view || view.id !== next.id) {
    layout = next.board ? hexLayout(next.board) : forceLayout(next.instance);
  }
  view = next;
  window.honeybeeView = next;
  renderBoard(next);
  renderPalette(next);
  renderStatus(next);
}

async function callColor(c) {
  if (inFlight || !view) return;
  inFlight = true;
  renderPalette(view);
  $("message").textContent = "";
  try {
    const r = await api("POST", `/games/${view.id}/moves`, { color: c });
    if (r.notice) $("message").textContent = r.notice;
    show(r.session);
  } catch (e) {
    if (e.status === undefined) {
      $("message").textContent = "network error; try again";
    } else {
      $("message").textContent = e.message;
    }
  } finally {
    inFlight = false;
    if (view) renderPalette(view);
  }
}

$("new-game").addEventListener("submit", async (ev) => {
  ev.preventDefault();
  const f = new FormData(ev.target);
  $("message").textContent = "";
  try {
    const v = await api("POST", "/games", {
      random_board: {
        rows: Number(f.get("rows")),
        cols: Number(f.get("cols")),
        k: Number(f.get("k")),
        seed: Number(f.get("seed")),
        symmetric: f.get("symmetric") === "on",
      },
      human: f.get("human"),
      policy: f.get("policy"),
      seed: Number(f.get("seed")),
    });
    view = null;
    show(v);
  } catch (e) {
    $("message").textContent = e.message;
  }
});

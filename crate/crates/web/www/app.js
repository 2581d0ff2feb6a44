import init, { analyze, fundamental_form, identity_sweep, examples } from "./pkg/homvar_web.js";

const $ = (id) => document.getElementById(id);

function badge(pass) {
  const span = document.createElement("span");
  span.className = pass ? "pass" : "fail";
  span.textContent = pass ? "PASS" : "FAIL";
  return span;
}

function showError(target, message) {
  target.replaceChildren();
  const p = document.createElement("p");
  p.className = "fail";
  p.textContent = message;
  target.append(p);
}

function runProblem(fn) {
  const out = $("problem-out");
  const maxTerms = Math.max(1, Number($("max-terms").value) || 40);
  const t0 = performance.now();
  const res = JSON.parse(fn($("decl").value, maxTerms));
  if (!res.ok) return showError(out, res.error);
  out.replaceChildren();
  for (const s of res.sections) {
    const h = document.createElement("h3");
    h.append(`${s.title} `, badge(s.pass));
    const pre = document.createElement("pre");
    pre.textContent = s.text;
    out.append(h, pre);
  }
  $("status").textContent = `Done in ${(performance.now() - t0).toFixed(0)} ms.`;
}

function runSweep() {
  const out = $("sweep-out");
  const t0 = performance.now();
  const res = JSON.parse(identity_sweep(Number($("max-q").value) || 0));
  if (!res.ok) return showError(out, res.error);
  const failed = res.rows.filter((r) => !r.pass).length;
  $("sweep-summary").replaceChildren(
    badge(res.pass),
    ` ${res.rows.length - failed}/${res.rows.length} rows in ${(performance.now() - t0).toFixed(0)} ms`,
  );
  const table = document.createElement("table");
  table.innerHTML = "<tr><th>identity</th><th>brute force</th><th>closed form</th><th></th></tr>";
  for (const r of res.rows) {
    const tr = document.createElement("tr");
    for (const text of [r.name, r.brute, r.closed]) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.append(td);
    }
    const td = document.createElement("td");
    td.append(badge(r.pass));
    tr.append(td);
    table.append(tr);
  }
  out.replaceChildren(table);
}

async function main() {
  await init();
  for (const [label, text] of JSON.parse(examples())) {
    const opt = document.createElement("option");
    opt.textContent = label;
    opt.value = text.split("\n").filter((l) => !l.startsWith("#")).join("\n").trim();
    $("preset").append(opt);
  }
  $("preset").addEventListener("change", (e) => {
    if (e.target.value) $("decl").value = e.target.value;
  });
  $("run-analyze").addEventListener("click", () => runProblem(analyze));
  $("run-theta").addEventListener("click", () => runProblem(fundamental_form));
  $("run-sweep").addEventListener("click", runSweep);
  for (const id of ["run-analyze", "run-theta", "run-sweep"]) $(id).disabled = false;
  $("status").textContent = "Ready.";
}

main().catch((err) => {
  $("status").textContent = `Failed to load: ${err}`;
});

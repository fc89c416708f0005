"""Command-line front end: lattices, twisted codes, parameters, verification
suites, braid scripts, SVG rendering and check-matrix export.

Every command writes sorted-key JSON so identical inputs give identical bytes.
Exit status is 0 exactly when every requested check passes.
"""
from __future__ import annotations

import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Tuple

import click

from . import __version__
from .colex import Lattice, build_hexagonal, build_square_octagon, validate
from .pauli import PauliGroupBasis, rank, to_check_matrix

log = logging.getLogger("twistcc")

FAMILIES = {"hex": build_hexagonal, "488": build_square_octagon}
DEFAULT_CODE = "twistcc-code.json"


def _setup_logging() -> None:
    level = os.environ.get("TWISTCC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(obj, out: Optional[str]) -> None:
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def fail(msg: str, **detail) -> None:
    sys.stderr.write(dumps({"error": msg, **detail}))
    sys.exit(2)


# run configuration ------------------------------------------------------------------

@dataclass
class RunConfig:
    """Everything needed to rebuild a code; round-trips through JSON."""

    kind: str  # "charge" or "color"
    family: str = "hex"
    rows: int = 0
    cols: int = 0
    pairs: int = 1
    separation: int = 2
    color: str = "r"
    paths: Optional[List[List[int]]] = None  # charge: wall face paths
    ends: Optional[List[List[int]]] = None  # color: twist end faces

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        return cls(**d)


def lattice_for(cfg: RunConfig) -> Lattice:
    if cfg.family not in FAMILIES:
        raise click.UsageError(f"unknown lattice family {cfg.family!r}")
    return FAMILIES[cfg.family](cfg.rows, cfg.cols)


def build_code(cfg: RunConfig, lat: Optional[Lattice] = None):
    """Rebuild the twisted code of a config; fills in the plan when absent."""
    if cfg.kind == "charge":
        from .charge_twists import insert_charge_twists, linear_layout
        lat = lat or lattice_for(cfg)
        if cfg.paths is None:
            cfg.paths = linear_layout(lat, cfg.pairs, cfg.separation)
        return lat, insert_charge_twists(lat, cfg.paths)
    if cfg.kind == "color":
        from .color_twists import insert_color_twists, linear_pairs, plan_paths
        lat = lat or lattice_for(cfg)
        if cfg.ends is None:
            cfg.ends = [list(p) for p in linear_pairs(lat, cfg.pairs, cfg.separation, cfg.color)]
        paths = plan_paths(lat, cfg.color, [tuple(p) for p in cfg.ends])
        return lat, insert_color_twists(lat, paths)
    raise click.UsageError(f"twist kind is charge or color, not {cfg.kind!r}")


def autosize(cfg: RunConfig, max_size: int = 12):
    """Grow the lattice until the requested plan fits."""
    if cfg.rows and cfg.cols:
        return build_code(cfg)
    last = None
    for size in range(2, max_size + 1):
        for rows, cols in ((max(2, size // 2), size), (size, size)):
            trial = RunConfig(**{**cfg.to_json(), "rows": rows, "cols": cols})
            try:
                lat, code = build_code(trial)
            except (ValueError, KeyError) as e:
                last = e
                continue
            cfg.rows, cfg.cols, cfg.paths, cfg.ends = rows, cols, trial.paths, trial.ends
            return lat, code
    raise click.UsageError(f"no lattice up to size {max_size} fits the plan: {last}")


def parameters(cfg: RunConfig, code) -> dict:
    if cfg.kind == "charge":
        from .charge_twists import count_parameters
    else:
        from .color_twists import count_parameters
    p = count_parameters(code)
    return {"n": p.n, "k": p.k, "gauge": p.gauge, "logical": p.logical,
            "formula_k": p.formula_k, "formula_gauge": p.formula_gauge,
            "twists": len(code.twists)}


def code_document(cfg: RunConfig, code) -> dict:
    return {"config": cfg.to_json(), "n": code.n, "twists": list(code.twists),
            "stabilizers": [str(s) for s in code.stabilizers]}


def _load_code(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
        cfg = RunConfig.from_json(doc["config"])
    except (OSError, ValueError, KeyError, TypeError) as e:
        fail("cannot read code file", path=path, reason=str(e))
    return cfg, build_code(cfg)[1]


# verification suites ------------------------------------------------------------------

SuiteResult = Tuple[bool, dict]


def suite_colex(opts) -> SuiteResult:
    from .charge_twists import insert_charge_twists
    rows = []
    for fam, sizes in (("hex", [(2, 2), (3, 4)]), ("488", [(1, 1), (2, 3)])):
        for r, c in sizes:
            lat = FAMILIES[fam](r, c)
            v, e, f = len(lat.vertices), len(lat.edges), len(lat.faces)
            k = v - rank(insert_charge_twists(lat, []).stabilizers)
            ok = validate(lat).ok and 3 * v == 2 * e and 2 * f == v + 4 and k == 0
            rows.append({"family": fam, "size": [r, c], "v": v, "e": e, "f": f, "k": k, "ok": ok})
    return all(r["ok"] for r in rows), {"lattices": rows}


def suite_charge(opts) -> SuiteResult:
    rows = []
    for t in (2, 4, 6, 8):
        for sep in (2, 3):
            cfg = RunConfig("charge", pairs=t // 2, separation=sep)
            _, code = autosize(cfg)
            p = parameters(cfg, code)
            ok = p["k"] == p["formula_k"] and p["gauge"] == p["formula_gauge"]
            rows.append({"t": t, "separation": sep, **p, "ok": ok})
    return all(r["ok"] for r in rows), {"codes": rows}


def suite_color(opts) -> SuiteResult:
    from .color_twists import count_parameters, dependency_products, find_t_line, validate_t_line
    rows = []
    for fam in ("488", "hex"):
        for pairs in (1, 2, 3):
            cfg = RunConfig("color", family=fam, pairs=pairs, separation=2)
            _, code = autosize(cfg)
            p = count_parameters(code)
            deps = dependency_products(code)
            lines = []
            for a, b in zip(code.twists[0::2], code.twists[1::2]):
                edges = find_t_line(code, (a, b))
                lines.append(bool(edges) and validate_t_line(code, (a, b), edges))
            ok = p.k == p.formula_k and all(d.is_identity() for d in deps.values()) and all(lines)
            rows.append({"family": fam, "t": len(code.twists), "n": p.n, "k": p.k,
                         "formula_k": p.formula_k, "t_lines": lines, "ok": ok})
    return all(r["ok"] for r in rows), {"codes": rows}


def suite_braids(opts) -> SuiteResult:
    from .deform import BraidWord, TwistDiagram, classify_gate, logical_action
    claims = [(4, "1 2", "S"), (4, "1 3", "√X"), (6, "3 4", "CZ·(S⊗S)"),
              (6, "3 4,1 2,5 6", "CZ"), (12, "3 9,1 2,7 8", "CZ")]
    rows = []
    for t, word, want in claims:
        pairs = [tuple(map(int, w.split())) for w in word.split(",")]
        got = classify_gate(logical_action(TwistDiagram(t), BraidWord.of(*pairs)))
        rows.append({"twists": t, "braid": word, "claimed": want, "got": got, "ok": got == want})
    return all(r["ok"] for r in rows), {"braids": rows}


def suite_engines(opts) -> SuiteResult:
    from .deform import ExchangeGeometry, compare_engines, small_braiding_code
    res = compare_engines(small_braiding_code(4), 3, ExchangeGeometry(2, 1))
    bad = [" ".join(str(b) for b in r.word) for r in res if not r.agree]
    run = sum(r.executable for r in res)
    return not bad and run > 0, {"words": len(res), "executable": run, "disagreements": bad}


def suite_holes(opts) -> SuiteResult:
    from .holes import expected_table, run_table, same_table, twist_hole_setup
    setup = twist_hole_setup()
    rows = []
    for name in ("dual_t2t4", "primal_frame_t3t4", "primal_t2t4"):
        br = run_table(setup, name)
        ok = same_table(br.table, expected_table(name)) and br.witnesses_ok
        rows.append({"table": name, "got": br.table, "want": expected_table(name),
                     "witnesses": br.witnesses_ok, "ok": ok})
    return all(r["ok"] for r in rows), {"tables": rows}


def suite_cnot(opts) -> SuiteResult:
    from .protocols import cnot_protocol
    rows = []
    for c, t in (("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("+", "0"), ("0", "+")):
        tr = cnot_protocol(c, t, opts.get("correction", "stated"))
        rows.append({"input": c + t, "ok": tr.ok,
                     "failing": [[b.m_xx, b.m_zz, b.m_x] for b in tr.branches if not b.ok]})
    return all(r["ok"] for r in rows), {"correction": opts.get("correction", "stated"), "inputs": rows}


def suite_encoded_cnot(opts) -> SuiteResult:
    from .holes import run_table, twist_hole_setup
    from .protocols import encoded_cnot_protocol
    setup = twist_hole_setup()
    xt = run_table(setup, "dual_t2t4").table
    zt = run_table(setup, "primal_frame_t3t4").table
    rows = []
    for c, t in (("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("+", "0"), ("0", "+")):
        tr = encoded_cnot_protocol(c, t, xt, zt, opts.get("correction", "stated"))
        rows.append({"input": c + t, "ok": tr.ok, "parity_checks": all(tr.parity_checks),
                     "failing": [[b.m_xx, b.m_zz, b.m_x] for b in tr.branches if not b.ok]})
    return all(r["ok"] for r in rows), {"inputs": rows}


def suite_magic(opts) -> SuiteResult:
    from .protocols import magic_protocol
    thetas = [opts["theta"]] if opts.get("theta") is not None else [0.0, math.pi / 4, math.pi / 2]
    rows = []
    for th in thetas:
        for psi in ("0", "1", "+"):
            r = magic_protocol(th, psi)
            rows.append({"theta": th, "psi": psi, "ok": r.ok(),
                         "branches": [[b.outcome, b.probability, b.fidelity, b.corrected_fidelity]
                                      for b in r.branches]})
    return all(r["ok"] for r in rows), {"runs": rows}


def suite_inject(opts) -> SuiteResult:
    from .protocols import inject_and_run, smallest_color_code
    code, lg = smallest_color_code()
    thetas = [opts["theta"]] if opts.get("theta") is not None else [0.0, math.pi / 4, math.pi / 2]
    rows = []
    for th in thetas:
        r = inject_and_run(th, code.stabilizers, lg, "+", cap=opts.get("max_n", 12))
        rows.append({"theta": th, "n": r.n, "route": r.route, "ok": r.ok()})
    return all(r["ok"] for r in rows), {"runs": rows}


def suite_oracle(opts) -> SuiteResult:
    from .protocols import random_clifford_differential
    rep = random_clifford_differential(opts.get("circuits", 10_000), min(8, opts.get("max_n", 8)),
                                       seed=opts.get("seed", 7))
    return not rep.disagreements, {"circuits": rep.circuits, "disagreements": rep.disagreements[:20]}


def suite_distance(opts) -> SuiteResult:
    from .charge_twists import canonical_logicals
    from .pauli import min_weight_logical
    cap = opts.get("distance_cap", 8)
    rows = []
    for sep in (2, 3):
        cfg = RunConfig("charge", pairs=2, separation=sep)
        _, code = autosize(cfg)
        basis = canonical_logicals(code)
        ops = [p for pair in basis.logicals for p in pair]
        d = min_weight_logical(code.stabilizers, ops, cap)
        rows.append({"separation": sep, "n": code.n, "min_weight": d.weight, "cap": cap})
    ws = [r["min_weight"] for r in rows]
    nondecreasing = all(a is not None and (b is None or a <= b) for a, b in zip(ws, ws[1:]))
    # reported, never a failure
    return True, {"codes": rows, "nondecreasing": nondecreasing}


SUITES: Dict[str, Callable[[dict], SuiteResult]] = {
    "colex": suite_colex, "charge": suite_charge, "color": suite_color, "braids": suite_braids,
    "engines": suite_engines, "holes": suite_holes, "cnot": suite_cnot,
    "encoded-cnot": suite_encoded_cnot, "magic": suite_magic, "inject": suite_inject,
    "oracle": suite_oracle, "distance": suite_distance,
}


# commands ---------------------------------------------------------------------------

@click.group()
@click.version_option(__version__)
def main():
    """Twisted color code toolkit."""
    _setup_logging()


@main.command()
@click.argument("family", type=click.Choice(sorted(FAMILIES)))
@click.argument("rows", type=int)
@click.argument("cols", type=int)
@click.option("--out", type=click.Path(dir_okay=False), help="write the lattice JSON here")
def gen(family, rows, cols, out):
    """Generate a boundary lattice."""
    lat = FAMILIES[family](rows, cols)
    doc = lat.to_json()
    v, f = len(lat.vertices), len(lat.faces)
    doc["summary"] = {"v": v, "e": len(lat.edges), "f": f, "2f=v+4": 2 * f == v + 4}
    _emit(doc, out)


@main.command()
@click.argument("kind", type=click.Choice(["charge", "color"]))
@click.option("--lattice", "family", type=click.Choice(sorted(FAMILIES)), default=None,
              help="lattice family (default hex for charge, 488 for color)")
@click.option("--size", nargs=2, type=int, default=None, help="rows cols; grown automatically when absent")
@click.option("--pairs", type=int, default=1)
@click.option("--separation", type=int, default=2)
@click.option("--color", default="r", type=click.Choice(["r", "g", "b"]))
@click.option("--plan", type=click.Path(exists=True, dir_okay=False), help="JSON twist plan (a saved config)")
@click.option("--out", type=click.Path(dir_okay=False), default=DEFAULT_CODE, show_default=True)
@click.option("--max-n", type=int, default=None, help="refuse codes with more qubits")
def twist(kind, family, size, pairs, separation, color, plan, out, max_n):
    """Insert charge- or color-permuting twists and save the code."""
    if plan:
        with open(plan) as fh:
            data = json.load(fh)
        cfg = RunConfig.from_json(data.get("config", data))
        if cfg.kind != kind:
            fail("plan kind does not match", plan=cfg.kind, requested=kind)
    else:
        cfg = RunConfig(kind, family=family or ("hex" if kind == "charge" else "488"),
                        pairs=pairs, separation=separation, color=color)
        if size:
            cfg.rows, cfg.cols = size
    try:
        _, code = autosize(cfg)
    except (ValueError, click.UsageError) as e:
        fail("twist placement failed", reason=str(e))
    if max_n is not None and code.n > max_n:
        fail("code exceeds --max-n", n=code.n, max_n=max_n)
    doc = code_document(cfg, code)
    doc["parameters"] = parameters(cfg, code)
    _emit(doc, out)
    click.echo(dumps({"out": out, **doc["parameters"]}), nl=False)


@main.command()
@click.argument("code_file", default=DEFAULT_CODE, required=False)
def params(code_file):
    """Report n, k and gauge count against the counting formulas."""
    cfg, code = _load_code(code_file)
    p = parameters(cfg, code)
    p["matches_formula"] = p["k"] == p["formula_k"] and p["gauge"] == p["formula_gauge"]
    _emit(p, None)
    sys.exit(0 if p["matches_formula"] else 1)


@main.command()
@click.argument("suites", nargs=-1)
@click.option("--theta", type=float, default=None, help="angle for magic / inject")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--circuits", type=int, default=10_000, show_default=True)
@click.option("--max-n", type=int, default=12, show_default=True)
@click.option("--distance-cap", type=int, default=8, show_default=True)
@click.option("--correction", type=click.Choice(["stated", "derived"]), default="stated", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def verify(suites, theta, seed, circuits, max_n, distance_cap, correction, out):
    """Run verification suites (all when none named)."""
    names = list(suites) or [s for s in SUITES if s not in ("engines", "distance")]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        fail("unknown suite", unknown=unknown, known=sorted(SUITES))
    opts = {"theta": theta, "seed": seed, "circuits": circuits, "max_n": max_n,
            "distance_cap": distance_cap, "correction": correction}
    report, all_ok = {}, True
    for name in names:
        log.info("suite %s", name)
        ok, detail = SUITES[name](opts)
        report[name] = {"ok": ok, **detail}
        all_ok &= ok
    report["ok"] = all_ok
    _emit(report, out)
    sys.exit(0 if all_ok else 1)


@main.command()
@click.option("--script", type=click.Path(exists=True, dir_okay=False), required=True,
              help="one 'braid i j [cw|ccw]' per line")
@click.option("--twists", type=int, default=4, show_default=True)
@click.option("--engine", type=click.Choice(["string", "lattice"]), default="string", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def braid(script, twists, engine, out):
    """Classify the logical gate of a braid script."""
    from .deform import BraidError, BraidWord, TwistDiagram, braid_lattice, classify_gate, logical_action
    from .deform import small_braiding_code
    with open(script) as fh:
        text = fh.read()
    try:
        word = BraidWord.parse(text)
        word.validate(twists)
        if engine == "string":
            act = logical_action(TwistDiagram(twists), word)
        else:
            act = braid_lattice(small_braiding_code(twists), word)
    except BraidError as e:
        fail("bad braid script", reason=str(e))
    _emit({"engine": engine, "word": [str(b) for b in word], "gate": classify_gate(act) + " (up to Pauli)",
           "table": [list(r) for r in act.table()]}, out)


@main.command()
@click.option("--lattice", "lattice_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--code", "code_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--svg", type=click.Path(dir_okay=False), required=True)
def render(lattice_file, code_file, svg):
    """Draw a lattice or a twisted code as SVG."""
    twists: List[int] = []
    if code_file:
        cfg, code = _load_code(code_file)
        lat, twists = code.lattice, list(code.twists)
    elif lattice_file:
        with open(lattice_file) as fh:
            lat = Lattice.from_json(json.load(fh))
    else:
        fail("give --lattice or --code")
    with open(svg, "w") as fh:
        fh.write(to_svg(lat, twists))


@main.command()
@click.argument("code_file", default=DEFAULT_CODE, required=False)
@click.option("--out", type=click.Path(dir_okay=False))
def export(code_file, out):
    """Write the stabilizer check matrix."""
    cfg, code = _load_code(code_file)
    text = to_check_matrix(PauliGroupBasis(code.n, list(code.stabilizers)), parameters(cfg, code)["k"])
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


FILL = {"r": "#e06666", "g": "#6aa84f", "b": "#6d9eeb"}


def to_svg(lat: Lattice, twists=(), scale: float = 40.0) -> str:
    xs = [p[0] for p in lat.vertices.values()]
    ys = [p[1] for p in lat.vertices.values()]
    x0, y0 = min(xs) - 1, min(ys) - 1
    w, h = (max(xs) - x0 + 1) * scale, (max(ys) - y0 + 1) * scale

    def pt(v):
        x, y = lat.vertices[v]
        return f"{(x - x0) * scale:.2f},{h - (y - y0) * scale:.2f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}">']
    for fid in sorted(lat.faces):
        if fid == lat.outer_face:
            continue
        f = lat.faces[fid]
        stroke = ' stroke="black" stroke-width="3"' if fid in twists else ""
        out.append(f'<polygon points="{" ".join(pt(v) for v in f.vertices)}" '
                   f'fill="{FILL.get(f.color, "#cccccc")}"{stroke}/>')
    for e in sorted(lat.edges):
        u, v, _ = lat.edges[e]
        (a, b), (c, d) = pt(u).split(","), pt(v).split(",")
        out.append(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}" stroke="#333" stroke-width="1"/>')
    for v in sorted(lat.vertices):
        a, b = pt(v).split(",")
        out.append(f'<circle cx="{a}" cy="{b}" r="2" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def run(argv=None) -> int:
    """Programmatic entry: returns the exit status instead of exiting."""
    try:
        main.main(args=argv, standalone_mode=False)
    except SystemExit as e:
        return int(e.code or 0)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    return 0


if __name__ == "__main__":
    main()

"""``torpure`` command-line interface.

    torpure <command> <file> [--fan NAME] [--paper-basis] [--json] [--jobs N]

Exit status: 0 on success (negative verdicts included), 2 for unreadable or
malformed input, 3 when a precondition or validation check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Optional, Sequence

from . import completion, fans, toric
from .abelian import GroupElement
from .fans import Cone, Fan, FanMatrix

COMMANDS = ("validate", "classgroup", "cartier", "picard", "purity", "mult", "enumerate", "complete")

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 2, 3


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, message: str, report: Optional[dict] = None):
        super().__init__(message)
        self.report = report


@dataclass
class InputDocument:
    n: int
    rays: list[list[int]]
    fans: dict[str, list[list[int]]] = field(default_factory=dict)
    cf_matrix: Optional[list[list[int]]] = None
    weight_matrix: Optional[list[list[int]]] = None
    torsion_matrix: Optional[list[list[int]]] = None
    torsion_orders: Optional[list[int]] = None
    name: str = ""

    @property
    def matrix(self) -> FanMatrix:
        return FanMatrix(self.rays, self.n)

    def echo(self) -> dict:
        return {"n": self.n, "rays": self.rays, "fans": self.fans}


def _int_matrix(x, what: str, width: Optional[int] = None) -> list[list[int]]:
    if not isinstance(x, list) or not all(isinstance(r, list) for r in x):
        raise InputError(f"{what} must be a list of integer lists")
    for r in x:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in r):
            raise InputError(f"{what} must contain integers only")
        if width is not None and len(r) != width:
            raise InputError(f"every row of {what} must have length {width}")
    return x


def parse_document(data) -> InputDocument:
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    if "rays" not in data:
        raise InputError("missing field 'rays'")
    rays = _int_matrix(data["rays"], "rays")
    n = data.get("n", len(rays[0]) if rays else None)
    if not isinstance(n, int) or n < 0:
        raise InputError("'n' must be a nonnegative integer")
    _int_matrix(rays, "rays", n)
    m = len(rays)
    fans_in = data.get("fans", {})
    if not isinstance(fans_in, dict):
        raise InputError("'fans' must map names to lists of cones")
    for name, cones in fans_in.items():
        _int_matrix(cones, f"fan {name}")
        for c in cones:
            if any(i < 1 or i > m for i in c):
                raise InputError(f"fan {name}: index out of range 1..{m}")
    doc = InputDocument(n=n, rays=rays, fans=dict(fans_in), name=str(data.get("name", "")))
    if "cf_matrix" in data:
        doc.cf_matrix = _int_matrix(data["cf_matrix"], "cf_matrix", m)
    if "weight_matrix" in data:
        doc.weight_matrix = _int_matrix(data["weight_matrix"], "weight_matrix", m)
    if "torsion_matrix" in data:
        doc.torsion_matrix = _int_matrix(data["torsion_matrix"], "torsion_matrix", m)
    if "torsion_orders" in data:
        t = data["torsion_orders"]
        if not isinstance(t, list) or not all(isinstance(d, int) for d in t):
            raise InputError("'torsion_orders' must be a list of integers")
        doc.torsion_orders = t
    if (doc.torsion_matrix is None) != (doc.torsion_orders is None):
        raise InputError("'torsion_matrix' and 'torsion_orders' go together")
    return doc


def bundled_fixture(name: str) -> Optional[Path]:
    p = resources.files("torpure") / "fixtures" / name
    return Path(str(p)) if p.is_file() else None


def load_document(path: str) -> InputDocument:
    p = Path(path)
    if not p.exists():
        p = bundled_fixture(p.name) or p
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e}") from None
    return parse_document(data)


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------

def element_json(g: GroupElement, orders: Sequence[int]) -> dict:
    return {"free": list(g.free), "torsion": list(g.torsion), "text": element_text(g, orders)}


def element_text(g: GroupElement, orders: Sequence[int]) -> str:
    s = "(" + ",".join(map(str, g.free)) + ")"
    if any(g.torsion):
        s += "+[" + ",".join(map(str, g.torsion)) + "] mod " + ",".join(map(str, orders))
    return s


def cones_json(cones) -> list[list[int]]:
    return [list(c) for c in cones]


def pick_fan(doc: InputDocument, name: Optional[str]) -> tuple[str, Fan, list[Cone]]:
    if name is None:
        if len(doc.fans) != 1:
            raise InputError("choose a fan with --fan NAME (available: " + ", ".join(doc.fans) + ")")
        name = next(iter(doc.fans))
    if name not in doc.fans:
        raise InputError(f"no fan named {name!r}")
    listed = [Cone(c) for c in doc.fans[name]]
    return name, Fan(doc.matrix, listed), listed


def presentation(doc: InputDocument, paper_basis: bool) -> toric.ClassGroupPresentation:
    V = doc.matrix
    if not paper_basis:
        return toric.class_group(V)
    if doc.weight_matrix is None:
        raise InputError("--paper-basis needs 'weight_matrix' in the input")
    try:
        return toric.class_group(V, doc.weight_matrix, doc.torsion_matrix, doc.torsion_orders)
    except ValueError as e:
        raise CheckFailed(str(e)) from None


def decomposition(doc: InputDocument) -> toric.CfDecomposition:
    """``V = beta * Vhat``, using the input's ``cf_matrix`` when present."""
    given = FanMatrix.from_rows(doc.cf_matrix) if doc.cf_matrix else None
    try:
        return toric.cf_decomposition(doc.matrix, given)
    except ValueError as e:
        raise CheckFailed(str(e)) from None


def require_valid(doc: InputDocument) -> FanMatrix:
    V = doc.matrix
    bad = fans.validate_fan_matrix(V)
    if bad:
        raise CheckFailed("invalid fan matrix: " + "; ".join(map(str, bad)))
    return V


def require_complete(fan: Fan, name: str) -> None:
    ok, pair = fans.is_fan(fan)
    if not ok:
        raise CheckFailed(f"{name} is not a fan: {pair[0]} and {pair[1]} meet badly")
    if not fan.is_pure():
        raise CheckFailed(f"{name} has cones of the wrong dimension")
    if not fans.is_complete(fan):
        raise CheckFailed(f"{name} is not complete")


# ----------------------------------------------------------------------------
# commands; each returns (report dict, human-readable lines)
# ----------------------------------------------------------------------------

def cmd_validate(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = doc.matrix
    bad = fans.validate_fan_matrix(V, check_spanning=False)
    lines = [f"fan matrix {V.n}x{V.m}: " + ("ok" if not bad else "INVALID")]
    lines += [f"  {v}" for v in bad]
    spans = fans.positively_spans(V) if not bad else False
    if not bad:
        lines.append("  columns positively span R^n" if spans else "  columns do not positively span R^n")
    fan_reports = {}
    failed = bool(bad)
    for name in doc.fans:
        _, F, _ = pick_fan(doc, name)
        ok, pair = fans.is_fan(F)
        entry = {"is_fan": ok, "offending_pair": cones_json(pair) if pair else None,
                 "complete": None, "unpaired_ridges": []}
        if ok and F.is_pure() and F.cones:
            entry["complete"] = fans.is_complete(F)
            entry["unpaired_ridges"] = cones_json(fans.unpaired_ridges(F))
        fan_reports[name] = entry
        if not ok:
            failed = True
            lines.append(f"{name}: NOT A FAN ({pair[0]} and {pair[1]} meet badly)")
        else:
            lines.append(f"{name}: fan, " + ("complete" if entry["complete"] else "not complete"))
    report = {
        "verdict": "invalid" if failed else "valid",
        "violations": [{"kind": v.kind, "columns": list(v.columns)} for v in bad],
        "positively_spans": spans,
        "fans": fan_reports,
    }
    if failed:
        raise CheckFailed("validation failed", (report, lines))
    return report, lines


def cmd_classgroup(doc: InputDocument, args) -> tuple[dict, list[str]]:
    require_valid(doc)
    cg = presentation(doc, args.paper_basis)
    cf = decomposition(doc)
    report = {
        "verdict": str(cg.group),
        "class_group": {"rank": cg.r, "torsion": list(cg.torsion_orders)},
        "weight_matrix": [list(q) for q in cg.Q],
        "torsion_matrix": [list(g) for g in cg.Gamma],
        "cf_matrix": cf.Vhat.rows(),
        "beta": [list(b) for b in cf.beta],
        "det_beta": cf.det_beta,
    }
    lines = [f"Cl = {cg.group}", "Q ="]
    lines += [f"  {list(q)}" for q in cg.Q]
    if cg.Gamma:
        lines.append("Gamma = " + ", ".join(f"{list(g)} mod {d}" for g, d in zip(cg.Gamma, cg.torsion_orders)))
    lines.append(f"V = beta * Vhat with |det beta| = {cf.det_beta}")
    lines += [f"  beta {list(b)}" for b in cf.beta]
    return report, lines


def cmd_cartier(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = require_valid(doc)
    name, F, _ = pick_fan(doc, args.fan)
    require_complete(F, name)
    C = toric.cartier_lattice(V, F)
    report = {"verdict": f"rank {C.rank}", "fan": name, "cartier_basis": C.matrix(),
              "index_in_weil": C.index_in(toric.Lattice.full(V.m))}
    lines = [f"Cartier lattice of {name} (rows):"] + [f"  {row}" for row in C.matrix()]
    lines.append(f"index in Z^{V.m}: {report['index_in_weil']}")
    return report, lines


def cmd_picard(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = require_valid(doc)
    name, F, _ = pick_fan(doc, args.fan)
    require_complete(F, name)
    cg = presentation(doc, args.paper_basis)
    gens = toric.picard_subgroup(V, F, cg)
    orders = cg.torsion_orders
    report = {
        "verdict": f"{len(gens)} generators",
        "fan": name,
        "class_group": {"rank": cg.r, "torsion": list(orders)},
        "picard": {"generators": [element_json(g, orders) for g in gens]},
    }
    lines = [f"Cl = {cg.group}", f"Pic({name}) generated by:"]
    lines += [f"  {element_text(g, orders)}" for g in gens]
    return report, lines


def cmd_purity(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = require_valid(doc)
    name, F, _ = pick_fan(doc, args.fan)
    require_complete(F, name)
    cg = presentation(doc, args.paper_basis)
    rep = toric.is_pure(V, F, cg)
    orders = cg.torsion_orders
    report = {
        "verdict": rep.verdict,
        "via": rep.via,
        "fan": name,
        "class_group": {"rank": cg.r, "torsion": list(orders)},
        "picard": {"generators": [element_json(g, orders) for g in rep.pic_generators]},
        "det_beta": rep.det_beta,
        "m_sigma_hat": rep.m_sigma_hat,
        "gcd": gcd(rep.det_beta, rep.m_sigma_hat),
        "witness": [element_json(g, orders) for g in rep.witness] if rep.witness else None,
        "failing_generator": element_json(rep.failing_generator, orders) if rep.failing_generator else None,
    }
    lines = [f"X({name}) is {rep.verdict.upper()}",
             f"  Cl = {cg.group}",
             "  Pic generated by " + ", ".join(element_text(g, orders) for g in rep.pic_generators),
             f"  gcd(|det beta|, m) = gcd({rep.det_beta}, {rep.m_sigma_hat}) = {report['gcd']}"]
    if rep.via == "sufficient-condition":
        lines.append("  decided by the gcd criterion")
    elif rep.pure:
        lines.append("  free part containing Pic: " + ", ".join(element_text(g, orders) for g in rep.witness))
    else:
        lines.append(f"  no free part contains {element_text(rep.failing_generator, orders)}")
    return report, lines


def cmd_mult(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = require_valid(doc)
    names = [args.fan] if args.fan else list(doc.fans)
    if not names:
        raise InputError("input has no fans")
    Vhat = decomposition(doc).Vhat
    out, lines = {}, []
    for name in names:
        _, F, listed = pick_fan(doc, name)
        mh = [fans.multiplicity(Vhat, c) for c in listed]
        mv = [fans.multiplicity(V, c) for c in listed]
        g = 0
        for x in mh:
            g = gcd(g, x)
        gv = 0
        for x in mv:
            gv = gcd(gv, x)
        out[name] = {"cones": cones_json(listed), "multiplicities": mh, "m_sigma": g,
                     "multiplicities_V": mv, "m_sigma_V": gv}
        lines.append(f"{name}: {' '.join(map(str, mh))}  gcd {g}")
        if mv != mh:
            lines.append(f"  on V itself: {' '.join(map(str, mv))}  gcd {gv}")
    report = {"verdict": " ".join(str(out[n]["m_sigma"]) for n in names), "multiplicities": out}
    return report, lines


def cmd_enumerate(doc: InputDocument, args) -> tuple[dict, list[str]]:
    V = doc.matrix
    try:
        found = fans.enumerate_complete_fans(V, jobs=args.jobs)
        m_tot, m_min = fans.minor_gcds(V)
    except ValueError as e:
        raise CheckFailed(str(e)) from None
    report = {
        "verdict": f"{len(found)} complete fans",
        "fans": [cones_json(f.cones) for f in found],
        "m_tot": m_tot,
        "m_min": m_min,
        "unique_fan": len(found) == 1,
    }
    lines = [f"{len(found)} complete simplicial fans on these rays:"]
    lines += [f"  {f}" for f in found]
    lines.append(f"minor gcds: total {m_tot}, minimal {m_min}")
    if len(found) == 1:
        lines.append("unique fan: the variety is pure")
    return report, lines


def cmd_complete(doc: InputDocument, args) -> tuple[dict, list[str]]:
    name, F, _ = pick_fan(doc, args.fan)
    ok, pair = fans.is_fan(F)
    if not ok:
        raise CheckFailed(f"{name} is not a fan: {pair[0]} and {pair[1]} meet badly")
    if args.ray:
        try:
            ws = [[int(x) for x in r.split(",")] for r in args.ray]
        except ValueError:
            raise InputError("--ray takes comma-separated integers") from None
        try:
            G, steps = completion.extend_fan(F, ws)
        except ValueError as e:
            raise CheckFailed(str(e)) from None
        complete = fans.is_complete(G)
        report = {
            "verdict": "extended",
            "fan": name,
            "rays": [list(c) for c in G.matrix.columns],
            "fans": [cones_json(G.cones)],
            "complete": complete,
            "steps": [s.as_dict() for s in steps],
        }
        lines = [f"extended {name}:"] + [f"  {s}" for s in steps]
        lines.append(f"result {G}" + (" (complete)" if complete else ""))
        return report, lines
    try:
        G = completion.completable_without_new_rays(F)
    except ValueError as e:
        raise CheckFailed(str(e)) from None
    if G is None:
        report = {"verdict": "not completable", "fan": name, "fans": [],
                  "unpaired_ridges": cones_json(fans.unpaired_ridges(F))}
        lines = [f"{name}: NOT COMPLETABLE without new rays"]
        for r in fans.unpaired_ridges(F):
            obs = [(c, d) for c, d in completion.facet_obstructions(F, r)]
            if obs and all(d is not None for _, d in obs):
                lines.append(f"  facet {r}: every cone through it meets the fan badly")
                lines += [f"    {c} vs {d}" for c, d in obs]
                break
            if not obs:
                lines.append(f"  facet {r}: no cone on the other side")
                break
        return report, lines
    report = {"verdict": "completable", "fan": name, "fans": [cones_json(G.cones)]}
    return report, [f"{name}: completable without new rays", f"  {G}"]


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torpure", description="Class groups, Picard groups and purity of toric varieties.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="input document (JSON); bundled fixtures may be named directly")
    p.add_argument("--fan", help="name of the fan to use")
    p.add_argument("--paper-basis", action="store_true",
                   help="use the weight and torsion matrices given in the input")
    p.add_argument("--json", action="store_true", help="print a machine-readable report")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    p.add_argument("--ray", action="append", help="with 'complete': extend by this ray, e.g. --ray=-1,-1")
    return p


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Run the CLI; returns the exit code and the text that would be printed."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_INPUT if e.code else EXIT_OK), ""
    t0 = time.perf_counter()
    code = EXIT_OK
    error = None
    try:
        doc = load_document(args.file)
        report, lines = HANDLERS[args.command](doc, args)
    except InputError as e:
        return EXIT_INPUT, f"error: {e}\n"
    except CheckFailed as e:
        code, error = EXIT_INVALID, str(e)
        report, lines = e.report if e.report else ({"verdict": "error"}, [])
    except ValueError as e:
        code, error = EXIT_INVALID, str(e)
        report, lines = {"verdict": "error"}, []
    if args.json:
        full = {"command": args.command, "inputs": doc.echo()}
        full.update(report)
        if error:
            full["error"] = error
        full["timing"] = round(time.perf_counter() - t0, 6)
        return code, json.dumps(full, indent=2) + "\n"
    text = "\n".join(lines)
    if error:
        text += ("\n" if text else "") + f"error: {error}"
    return code, text + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    if code == EXIT_INVALID and out and not out.startswith("error"):
        # report goes to stdout, diagnosis included
        stream = sys.stdout
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

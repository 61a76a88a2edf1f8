"""Command line interface.

    kcx check FILE [--connection NAME] [--json]
    kcx solve FILE --module NAME [--degree N] [--char p] [--json]
    kcx curvature FILE [--connection NAME] [--json]
    kcx torsion FILE [--connection NAME] [--json]
    kcx convert FILE [--connection NAME] [--json]
    kcx glue FILE [--degree N] [--char p] [--json]
    kcx gallery [--json]

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parse error.
The JSON schema is fixed: {"command", "checks": [{"id", "status", "witness",
"residue"}], "solver": {"status", "dim"} | null}.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dfield
from pathlib import Path

from .connections import to_horizontal, to_vertical, verify_connection_axioms
from .connections import connection_equal, from_horizontal
from .curvature import (
    check_curvature_correspondence,
    check_torsion_correspondence,
    tangent_torsion,
)
from .errors import KcxError
from .gallery import run_gallery
from .linsolve import AffineSolutionSpace
from .solve import glued_connection_check, solve_connection_space
from .workspace import (
    Workspace,
    WorkspaceError,
    parse_workspace,
    render_connection_image,
)


@dataclass
class Check:
    check_id: str
    status: str
    witness: str = ""
    residue: str = ""


@dataclass
class Report:
    command: str
    checks: list[Check] = dfield(default_factory=list)
    solver: dict | None = None
    lines: list[str] = dfield(default_factory=list)  # extra text-only output

    @property
    def exit_code(self) -> int:
        return 0 if all(c.status == "pass" for c in self.checks) else 1

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "checks": [
                {"id": c.check_id, "status": c.status, "witness": c.witness, "residue": c.residue}
                for c in self.checks
            ],
            "solver": self.solver,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_text(self) -> str:
        out = [f"command: {self.command}"]
        for c in self.checks:
            mark = "PASS" if c.status == "pass" else "FAIL"
            extra = ""
            if c.witness:
                extra += f"  witness: {c.witness}"
            if c.residue:
                extra += f"  residue: {c.residue}"
            out.append(f"[{mark}] {c.check_id}{extra}")
        if self.solver is not None:
            out.append(f"solver: {self.solver['status']} (dim {self.solver['dim']})")
        out.extend(self.lines)
        return "\n".join(out)


def _solver_payload(space: AffineSolutionSpace) -> dict:
    if space.is_empty:
        status = "empty"
    elif space.is_unique:
        status = "unique"
    else:
        status = "family"
    return {"status": status, "dim": space.dimension}


def _load(path: str, char: int | None) -> Workspace:
    text = Path(path).read_text(encoding="utf-8")
    return parse_workspace(text, char_override=char)


def _pick_connections(ws: Workspace, name: str | None) -> list[str]:
    if name is not None:
        if name not in ws.connections:
            raise WorkspaceError(f"no connection named {name!r} in the file")
        return [name]
    return list(ws.connections)


def _axiom_checks(prefix: str, report) -> list[Check]:
    return [
        Check(f"{prefix}{e.axiom_id}", e.status, e.witness, f"{e.lhs} != {e.rhs}" if e.status != "pass" else "")
        for e in report.entries
    ]


def cmd_check(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("check")
    for name in _pick_connections(ws, args.connection):
        nabla = ws.connections[name]
        report.checks.append(Check(f"well-defined[{name}]", "pass"))
        axioms = verify_connection_axioms(
            to_vertical(nabla), to_horizontal(nabla), nabla.module
        )
        report.checks.extend(_axiom_checks(f"{name}:", axioms))
    if not report.checks:
        report.checks.append(Check("no-connections", "fail", "", "file defines no connection"))
    return report


def cmd_solve(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("solve")
    if args.module not in ws.modules:
        raise WorkspaceError(f"no module named {args.module!r} in the file")
    result = solve_connection_space(ws.modules[args.module], args.degree)
    report.solver = _solver_payload(result.space)
    return report


def cmd_curvature(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("curvature")
    for name in _pick_connections(ws, args.connection):
        nabla = ws.connections[name]
        result = check_curvature_correspondence(nabla)
        flatness = "flat" if result.flat else "not flat"
        report.checks.append(Check(f"curvature[{name}]", "pass", flatness))
        for g, residuals in result.residuals.items():
            bad = [r for r in residuals if not r.is_zero()]
            report.checks.append(
                Check(
                    f"curvature-correspondence[{name}][{g}]",
                    "pass" if not bad else "fail",
                    g,
                    "; ".join(r.render() for r in bad),
                )
            )
        for g, img in result.images.items():
            report.lines.append(f"curvature[{name}] {g} -> {img.render()}")
    return report


def cmd_torsion(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("torsion")
    for name in _pick_connections(ws, args.connection):
        nabla = ws.connections[name]
        result = check_torsion_correspondence(nabla)
        tangent_torsion(nabla)  # raises if the two bundle routes disagree
        report.checks.append(Check(f"torsion-routes-agree[{name}]", "pass"))
        freeness = "torsion-free" if result.torsion_free else "has torsion"
        report.checks.append(Check(f"torsion[{name}]", "pass", freeness))
        for g, residuals in result.residuals.items():
            bad = [r for r in residuals if not r.is_zero()]
            report.checks.append(
                Check(
                    f"torsion-correspondence[{name}][{g}]",
                    "pass" if not bad else "fail",
                    g,
                    "; ".join(r.render() for r in bad),
                )
            )
        for g, img in result.images.items():
            report.lines.append(f"torsion[{name}] {g} -> {img.render()}")
    return report


def cmd_convert(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("convert")
    for name in _pick_connections(ws, args.connection):
        nabla = ws.connections[name]
        H = to_horizontal(nabla)
        K = to_vertical(nabla)
        report.lines.append(f"horizontal form of {name}:")
        for g in H.dom.gens:
            report.lines.append(f"  {g} -> {H.image_of(g).render()}")
        report.lines.append(f"vertical form of {name}:")
        for g in K.dom.gens:
            report.lines.append(f"  {g} -> {K.image_of(g).render()}")
        recovered = from_horizontal(H, nabla.module)
        report.checks.append(
            Check(
                f"roundtrip[{name}]",
                "pass" if connection_equal(recovered, nabla) else "fail",
            )
        )
        report.lines.append(f"recovered connection from the horizontal form of {name}:")
        for g in nabla.module.gens:
            report.lines.append(
                f"  {g} -> {render_connection_image(nabla.module, recovered.gamma[g])}"
            )
    return report


def cmd_glue(args) -> Report:
    ws = _load(args.file, args.char)
    report = Report("glue")
    if ws.glue is None:
        raise WorkspaceError("file has no glue block")
    spec = ws.glue
    A1, A2 = ws.algebras[spec.chart1], ws.algebras[spec.chart2]
    t = ws.morphisms[spec.transition]
    tinv = ws.morphisms[spec.inverse]
    from .algebra import localize
    from .modules import kahler_module

    L1, L2 = localize(A1, spec.at1), localize(A2, spec.at2)
    for f, dom, cod, label in ((t, L1, L2, spec.transition), (tinv, L2, L1, spec.inverse)):
        if f.dom.gens != dom.gens or f.cod.gens != cod.gens:
            raise WorkspaceError(
                f"morphism {label!r} must go between the localized charts "
                f"(expected generators {dom.gens} -> {cod.gens})"
            )
    transition_images = {g: t.image_of(g).render() for g in t.dom.gens}
    inverse_images = {g: tinv.image_of(g).render() for g in tinv.dom.gens}
    omega1 = kahler_module(A1)
    omega2 = kahler_module(A2)
    chart1 = [n for n, m in ws.connection_module.items() if ws.modules[m] is omega1]
    chart2 = [n for n, m in ws.connection_module.items() if ws.modules[m] is omega2]
    if chart1 and chart2:
        result = glued_connection_check(
            A1, spec.at1, A2, spec.at2, transition_images, inverse_images,
            nabla1=ws.connections[chart1[0]], nabla2=ws.connections[chart2[0]],
            degree=args.degree,
        )
        report.checks.extend(_axiom_checks("", result.report))
    else:
        result = glued_connection_check(
            A1, spec.at1, A2, spec.at2, transition_images, inverse_images, degree=args.degree
        )
        report.solver = _solver_payload(result.space)
    return report


def cmd_gallery(args) -> Report:
    report = Report("gallery")
    for case in run_gallery():
        report.checks.append(
            Check(case.case_id, "pass" if case.passed else "fail", "", "" if case.passed else case.detail)
        )
        report.lines.append(f"{case.case_id}: {case.detail}")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcx",
        description="exact checks and solvers for module connections over affine presentations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file=True, degree=None, module=False):
        if file:
            p.add_argument("file", metavar="FILE")
        p.add_argument("--json", action="store_true")
        p.add_argument("--char", type=int, default=None)
        p.add_argument("--connection", default=None)
        if module:
            p.add_argument("--module", required=True)
        if degree is not None:
            p.add_argument("--degree", type=int, default=degree)

    common(sub.add_parser("check", help="well-definedness plus the full axiom suite"))
    common(sub.add_parser("solve", help="solve for all connections up to a degree"), degree=3, module=True)
    common(sub.add_parser("curvature", help="curvature and its bundle correspondence"))
    common(sub.add_parser("torsion", help="torsion, both routes, and its correspondence"))
    common(sub.add_parser("convert", help="print the horizontal/vertical forms and round-trip"))
    common(sub.add_parser("glue", help="check or solve a two-chart gluing"), degree=6)
    common(sub.add_parser("gallery", help="run the built-in example gallery"), file=False)
    return parser


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "curvature": cmd_curvature,
    "torsion": cmd_torsion,
    "convert": cmd_convert,
    "glue": cmd_glue,
    "gallery": cmd_gallery,
}


def run(argv: list[str]) -> tuple[int, str]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), ""
    try:
        report = COMMANDS[args.command](args)
    except WorkspaceError as exc:
        if exc.residue is not None:
            # a value failed certification at load: that is a check failure,
            # reported with its residue, not a usage error
            report = Report(args.command)
            report.checks.append(
                Check(f"well-defined[{exc.entity}]", "fail", exc.entity or "", exc.residue)
            )
            text = report.to_json() if args.json else report.to_text()
            return 1, text
        return 2, f"error: {exc}"
    except (KcxError, FileNotFoundError) as exc:
        return 2, f"error: {exc}"
    text = report.to_json() if args.json else report.to_text()
    return report.exit_code, text


def main() -> None:
    code, text = run(sys.argv[1:])
    if text:
        print(text)
    sys.exit(code)


if __name__ == "__main__":
    main()

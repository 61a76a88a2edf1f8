"""Definition files: parsing, eager certification, and canonical rendering.

Line-oriented grammar with # comments; blocks in braces, entries ending in
semicolons:

    algebra NAME { char: 0; vars: x, y; rel: x^2 + y^2 - 1; }
    module NAME over ALG { kahler; }
    module NAME over ALG { free: 2; }
    module NAME over ALG { gens: u, v; rel: x*u + y*v; }
    connection NAME on MOD { GEN -> EXPR * d(EXPR) @ GEN - ... ; }
    morphism NAME : ALG -> ALG { v -> EXPR; ... }
    glue { chart1: ALG at VAR; chart2: ALG at VAR; transition: M; inverse: M; }

Every entity is built and certified at load time, so an ill-defined connection
fails the parse with its residue.  Rendering emits the same grammar and
round-trips through the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dfield

from .algebra import AlgebraMorphism, PresentedAlgebra, make_algebra, make_morphism
from .connections import Connection, make_connection
from .errors import KcxError, WellDefinednessFailure
from .fields import Field
from .modules import (
    ModuleElement,
    PresentedModule,
    free_module,
    kahler_module,
    make_module,
    universal_derivation,
)
from .parse import poly_normalize
from .poly import Polynomial
from .tangent import bundle_context


class WorkspaceError(KcxError):
    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        entity: str | None = None,
        residue: str | None = None,
    ):
        self.line = line
        self.column = column
        self.entity = entity  # set for certification failures of a named value
        self.residue = residue
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass
class GlueSpec:
    chart1: str
    at1: str
    chart2: str
    at2: str
    transition: str
    inverse: str


@dataclass
class Workspace:
    char: int
    algebras: dict[str, PresentedAlgebra] = dfield(default_factory=dict)
    modules: dict[str, PresentedModule] = dfield(default_factory=dict)
    connections: dict[str, Connection] = dfield(default_factory=dict)
    morphisms: dict[str, AlgebraMorphism] = dfield(default_factory=dict)
    glue: GlueSpec | None = None
    module_specs: dict[str, tuple] = dfield(default_factory=dict)
    connection_module: dict[str, str] = dfield(default_factory=dict)
    morphism_ends: dict[str, tuple[str, str]] = dfield(default_factory=dict)

    def module_of_connection(self, name: str) -> PresentedModule:
        return self.modules[self.connection_module[name]]


_NAME = r"[A-Za-z][A-Za-z0-9_]*"
_GEN = rf"(?:{_NAME}|d\(\s*{_NAME}\s*\))"


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def location(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: int | None = None) -> WorkspaceError:
        line, col = self.location(pos)
        return WorkspaceError(message, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def take_word(self) -> str:
        self.skip_ws()
        m = re.compile(_NAME).match(self.text, self.pos)
        if not m:
            raise self.error("expected a name")
        self.pos = m.end()
        return m.group(0)

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def peek_is(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def take_block_entries(self) -> list[tuple[str, int]]:
        """Entries of a `{ ...; ...; }` block, with their start positions."""
        self.expect("{")
        entries = []
        start = None
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated block")
            ch = self.text[self.pos]
            if ch == "}":
                chunk = self.text[start: self.pos] if start is not None else ""
                if chunk.strip():
                    raise self.error("missing ';' before '}'", start)
                self.pos += 1
                return entries
            if ch == ";":
                chunk = self.text[start: self.pos] if start is not None else ""
                if chunk.strip():
                    entries.append((chunk.strip(), start))
                start = None
                self.pos += 1
                continue
            if start is None and ch not in " \t\r\n":
                start = self.pos
            self.pos += 1


def _split_top_level(text: str, separators: str) -> list[tuple[str, str]]:
    """Split on top-level +/- style separators, keeping the sign per chunk."""
    parts: list[tuple[str, str]] = []
    depth = 0
    current = []
    sign = "+"
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in separators and "".join(current).strip():
            parts.append((sign, "".join(current).strip()))
            sign = ch
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append((sign, tail))
    return parts


def _parse_connection_sum(
    text: str, cur: _Cursor, pos: int, A, M, target
) -> ModuleElement:
    """`EXPR * d(EXPR) @ GEN` terms combined with +/-; `0` is the zero image."""
    if text.strip() == "0":
        return target.zero()
    total = target.zero()
    for sign, term in _split_top_level(text, "+-"):
        if "@" not in term:
            raise cur.error(f"connection term missing '@': {term!r}", pos)
        lhs, gen_txt = term.rsplit("@", 1)
        gen_txt = gen_txt.strip()
        if not re.fullmatch(_GEN, gen_txt):
            raise cur.error(f"bad module generator {gen_txt!r}", pos)
        gen = re.sub(r"\s+", "", gen_txt)
        if gen not in M.gens:
            raise cur.error(f"unknown module generator {gen!r}", pos)
        lhs = lhs.strip()
        m = re.fullmatch(r"(?:(?P<coef>.*)\*)?\s*d\s*\((?P<inner>.*)\)\s*", lhs, re.DOTALL)
        if not m:
            raise cur.error(f"connection term must end with d(...): {term!r}", pos)
        coef_txt = (m.group("coef") or "1").strip()
        inner_txt = m.group("inner").strip()
        try:
            coef = poly_normalize(coef_txt, A.field, A.gens)
            inner = poly_normalize(inner_txt, A.field, A.gens)
        except Exception as exc:
            raise cur.error(f"bad expression in connection term: {exc}", pos)
        piece = target.pair(universal_derivation(A, A.element(inner)), M.gen(gen)).scaled(coef)
        total = total + piece if sign == "+" else total - piece
    return total


def parse_workspace(text: str, char_override: int | None = None) -> Workspace:
    cur = _Cursor(_strip_comments(text))
    ws: Workspace | None = None
    declared_char: int | None = char_override

    def ensure_ws(char: int) -> Workspace:
        nonlocal ws, declared_char
        if declared_char is None:
            declared_char = char
        if ws is None:
            ws = Workspace(declared_char)
        return ws

    while not cur.done():
        at = cur.pos
        keyword = cur.take_word()
        if keyword == "algebra":
            name = cur.take_word()
            entries = cur.take_block_entries()
            char: int | None = None
            variables: tuple[str, ...] = ()
            rels: list[str] = []
            for entry, pos in entries:
                m = re.match(rf"({_NAME})\s*:\s*(.*)$", entry, re.DOTALL)
                key, val = (m.group(1), m.group(2).strip()) if m else (entry, "")
                if key == "char":
                    char = int(val)
                elif key == "vars":
                    variables = tuple(v.strip() for v in val.split(","))
                elif key == "rel":
                    rels.append(val)
                else:
                    raise cur.error(f"unknown algebra entry {entry!r}", pos)
            if char is None:
                raise cur.error("algebra block needs a char entry", at)
            w = ensure_ws(char if char_override is None else char_override)
            if w.char != (char if char_override is None else char_override):
                raise cur.error("all algebras in one file must share the characteristic", at)
            if name in w.algebras:
                raise cur.error(f"redefinition of algebra {name!r}", at)
            try:
                w.algebras[name] = make_algebra(Field(w.char), variables, rels)
            except Exception as exc:
                raise cur.error(f"bad algebra {name!r}: {exc}", at)
        elif keyword == "module":
            name = cur.take_word()
            cur.expect("over")
            alg_name = cur.take_word()
            entries = cur.take_block_entries()
            w = ensure_ws(0)
            if alg_name not in w.algebras:
                raise cur.error(f"unknown algebra {alg_name!r}", at)
            if name in w.modules:
                raise cur.error(f"redefinition of module {name!r}", at)
            A = w.algebras[alg_name]
            kind = None
            gens: tuple[str, ...] = ()
            rels: list[str] = []
            free_rank = 0
            for entry, pos in entries:
                m = re.match(rf"({_NAME})\s*:\s*(.*)$", entry, re.DOTALL)
                key, val = (m.group(1), m.group(2).strip()) if m else (entry, "")
                if entry == "kahler":
                    kind = "kahler"
                elif key == "free":
                    kind = "free"
                    free_rank = int(val)
                elif key == "gens":
                    kind = kind or "presented"
                    gens = tuple(v.strip() for v in val.split(","))
                elif key == "rel":
                    rels.append(val)
                else:
                    raise cur.error(f"unknown module entry {entry!r}", pos)
            if kind == "kahler":
                w.modules[name] = kahler_module(A)
                w.module_specs[name] = (alg_name, "kahler", None, [])
            elif kind == "free":
                w.modules[name] = free_module(A, free_rank)
                w.module_specs[name] = (alg_name, "free", free_rank, [])
            else:
                rows = [_parse_module_relation(r, A, gens, cur, at) for r in rels]
                w.modules[name] = make_module(A, gens, rows)
                w.module_specs[name] = (alg_name, "presented", gens, rels)
        elif keyword == "connection":
            name = cur.take_word()
            cur.expect("on")
            mod_name = cur.take_word()
            entries = cur.take_block_entries()
            w = ensure_ws(0)
            if mod_name not in w.modules:
                raise cur.error(f"unknown module {mod_name!r}", at)
            if name in w.connections:
                raise cur.error(f"redefinition of connection {name!r}", at)
            M = w.modules[mod_name]
            A = M.base
            target = bundle_context(M).omega_tensor_M
            images: dict[str, ModuleElement] = {}
            for entry, pos in entries:
                if "->" not in entry:
                    raise cur.error(f"connection entry needs '->': {entry!r}", pos)
                lhs, rhs = entry.split("->", 1)
                gen = re.sub(r"\s+", "", lhs)
                if gen not in M.gens:
                    raise cur.error(f"unknown module generator {gen!r}", pos)
                images[gen] = _parse_connection_sum(rhs.strip(), cur, pos, A, M, target)
            missing = set(M.gens) - set(images)
            if missing:
                raise cur.error(f"connection {name!r} missing images for {sorted(missing)}", at)
            try:
                w.connections[name] = make_connection(M, images)
            except WellDefinednessFailure as exc:
                line, col = cur.location(at)
                raise WorkspaceError(
                    f"connection {name!r} is not well defined: residue {exc.residue}",
                    line,
                    col,
                    entity=name,
                    residue=str(exc.residue),
                )
            w.connection_module[name] = mod_name
        elif keyword == "morphism":
            name = cur.take_word()
            cur.expect(":")
            dom_name = cur.take_word()
            cur.expect("->")
            cod_name = cur.take_word()
            entries = cur.take_block_entries()
            w = ensure_ws(0)
            for n in (dom_name, cod_name):
                if n not in w.algebras:
                    raise cur.error(f"unknown algebra {n!r}", at)
            if name in w.morphisms:
                raise cur.error(f"redefinition of morphism {name!r}", at)
            dom, cod = w.algebras[dom_name], w.algebras[cod_name]
            images = {}
            for entry, pos in entries:
                if "->" not in entry:
                    raise cur.error(f"morphism entry needs '->': {entry!r}", pos)
                lhs, rhs = entry.split("->", 1)
                v = lhs.strip()
                if v not in dom.gens:
                    raise cur.error(f"unknown generator {v!r}", pos)
                images[v] = rhs.strip()
            try:
                w.morphisms[name] = make_morphism(dom, cod, images, name=name)
            except WellDefinednessFailure as exc:
                line, col = cur.location(at)
                raise WorkspaceError(f"morphism {name!r} ill-defined: {exc}", line, col)
            w.morphism_ends[name] = (dom_name, cod_name)
        elif keyword == "glue":
            entries = cur.take_block_entries()
            w = ensure_ws(0)
            if w.glue is not None:
                raise cur.error("only one glue block is allowed", at)
            fields = {}
            for entry, pos in entries:
                if ":" not in entry:
                    raise cur.error(f"glue entry needs ':': {entry!r}", pos)
                key, val = (s.strip() for s in entry.split(":", 1))
                fields[key] = val
            needed = {"chart1", "chart2", "transition", "inverse"}
            if set(fields) != needed:
                raise cur.error(f"glue block needs exactly {sorted(needed)}", at)
            try:
                chart1, at1 = re.split(r"\s+at\s+", fields["chart1"].strip())
                chart2, at2 = re.split(r"\s+at\s+", fields["chart2"].strip())
            except ValueError:
                raise cur.error("chart entries must look like 'NAME at VAR'", at)
            for n in (chart1, chart2):
                if n not in w.algebras:
                    raise cur.error(f"unknown algebra {n!r}", at)
            for n in (fields["transition"], fields["inverse"]):
                if n not in w.morphisms:
                    raise cur.error(f"unknown morphism {n!r}", at)
            w.glue = GlueSpec(chart1, at1, chart2, at2, fields["transition"], fields["inverse"])
        else:
            raise cur.error(f"unknown keyword {keyword!r}", at)
    if ws is None:
        raise WorkspaceError("empty definition file")
    return ws


def _parse_module_relation(text: str, A, gens, cur, pos):
    combined = A.gens + tuple(gens)
    try:
        poly = poly_normalize(text, A.field, combined)
    except Exception as exc:
        raise cur.error(f"bad module relation: {exc}", pos)
    gen_idx = [combined.index(g) for g in gens]
    rows = [Polynomial.zero(A.field, A.gens) for _ in gens]
    for exp, coef in poly.terms.items():
        active = [(k, exp[i]) for k, i in enumerate(gen_idx) if exp[i]]
        if len(active) != 1 or active[0][1] != 1:
            raise cur.error(
                "module relation must be linear in the module generators", pos
            )
        k = active[0][0]
        base_exp = tuple(e for i, e in enumerate(exp) if i not in gen_idx)
        rows[k] = rows[k] + Polynomial.monomial(A.field, A.gens, base_exp, coef)
    return rows


# ---------------------------------------------------------------------------
# canonical rendering (parse -> render -> parse is the identity)
# ---------------------------------------------------------------------------


def _render_coef(c: Polynomial) -> str:
    body = c.render()
    return f"({body})" if len(c.terms) > 1 else body


def render_connection_image(M: PresentedModule, e: ModuleElement) -> str:
    omega = kahler_module(M.base)
    parts = []
    n = M.rank
    for idx, coef in enumerate(e.comps):
        if coef.is_zero():
            continue
        i, l = divmod(idx, n)
        base_var = M.base.gens[i]
        parts.append(f"{_render_coef(coef)} * d({base_var}) @ {M.gens[l]}")
    return " + ".join(parts) if parts else "0"


def render_workspace(ws: Workspace) -> str:
    out: list[str] = []
    for name, A in ws.algebras.items():
        lines = [f"algebra {name} {{", f"  char: {ws.char};"]
        if A.gens:
            lines.append(f"  vars: {', '.join(A.gens)};")
        for rel in A.relations:
            lines.append(f"  rel: {rel.render()};")
        lines.append("}")
        out.append("\n".join(lines))
    for name, M in ws.modules.items():
        alg_name, kind, payload, rels = ws.module_specs[name]
        lines = [f"module {name} over {alg_name} {{"]
        if kind == "kahler":
            lines.append("  kahler;")
        elif kind == "free":
            lines.append(f"  free: {payload};")
        else:
            lines.append(f"  gens: {', '.join(payload)};")
            for row in M.relations:
                terms = [
                    f"{_render_coef(c)}*{g}" for c, g in zip(row, M.gens) if not c.is_zero()
                ]
                lines.append(f"  rel: {' + '.join(terms)};")
        lines.append("}")
        out.append("\n".join(lines))
    for name, f in ws.morphisms.items():
        dom_name, cod_name = ws.morphism_ends[name]
        lines = [f"morphism {name} : {dom_name} -> {cod_name} {{"]
        for g in f.dom.gens:
            lines.append(f"  {g} -> {f.image_of(g).render()};")
        lines.append("}")
        out.append("\n".join(lines))
    for name, nabla in ws.connections.items():
        mod_name = ws.connection_module[name]
        M = nabla.module
        lines = [f"connection {name} on {mod_name} {{"]
        for g in M.gens:
            lines.append(f"  {g} -> {render_connection_image(M, nabla.gamma[g])};")
        lines.append("}")
        out.append("\n".join(lines))
    if ws.glue:
        g = ws.glue
        out.append(
            "glue {\n"
            f"  chart1: {g.chart1} at {g.at1};\n"
            f"  chart2: {g.chart2} at {g.at2};\n"
            f"  transition: {g.transition};\n"
            f"  inverse: {g.inverse};\n"
            "}"
        )
    return "\n\n".join(out) + "\n"

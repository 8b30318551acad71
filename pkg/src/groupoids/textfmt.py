"""The shared text format: named blocks for quivers, groupoids, morphisms,
sequences, actions, and word queries.

Canonical form round-trips byte-identically: parse(emit(doc)) == doc, and
emit is idempotent after one pass.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .actions import SemistrongAction
from .errors import ParseError
from .groupoid import Groupoid, GroupoidMorphism
from .normal import ShortExactSequence
from .quiver import Quiver


@dataclass
class WordQuery:
    op: str                       # "member" | "eval"
    letters: tuple[tuple[int, str], ...]
    ends: tuple[str, str]


@dataclass
class Document:
    order: list[tuple[str, str]] = field(default_factory=list)   # (kind, name)
    quivers: dict[str, Quiver] = field(default_factory=dict)
    groupoids: dict[str, Groupoid] = field(default_factory=dict)
    morphisms: dict[str, GroupoidMorphism] = field(default_factory=dict)
    sequences: dict[str, ShortExactSequence] = field(default_factory=dict)
    actions: dict[str, SemistrongAction] = field(default_factory=dict)
    queries: dict[str, WordQuery] = field(default_factory=dict)

    def groupoid(self, name: str) -> Groupoid:
        if name not in self.groupoids:
            raise ParseError(f"unknown groupoid {name!r}")
        return self.groupoids[name]


_BLOCK_RE = re.compile(r"^(quiver|groupoid|morphism|sequence|action|query)\s+(\S+)\s*(.*)$")


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next_meaningful(self):
        while self.pos < len(self.lines):
            raw = self.lines[self.pos]
            line = raw.split("#", 1)[0].strip()
            self.pos += 1
            if line:
                return line, self.pos
        return None, self.pos


def _split_entries(body: str) -> list[str]:
    return [e.strip() for e in body.split(";") if e.strip()]


def parse(text: str) -> Document:
    doc = Document()
    reader = _Reader(text)
    while True:
        line, lineno = reader.next_meaningful()
        if line is None:
            break
        m = _BLOCK_RE.match(line)
        if not m:
            raise ParseError(f"expected a block header, got {line!r}", lineno)
        kind, name, rest = m.groups()
        header_rest, body, lineno = _read_block_body(reader, rest, lineno)
        try:
            _parse_block(doc, kind, name, header_rest, body)
        except ParseError:
            raise
        except KeyError as exc:
            raise ParseError(f"dangling reference in {kind} {name}: {exc}", lineno)
        doc.order.append((kind, name))
    return doc


def _read_block_body(reader: _Reader, rest: str, lineno: int):
    header_rest = rest
    if "{" not in header_rest:
        while True:
            line, lineno = reader.next_meaningful()
            if line is None:
                raise ParseError("unexpected end of file inside block header", lineno)
            header_rest += " " + line
            if "{" in line:
                break
    pre, after = header_rest.split("{", 1)
    chunks = [after]
    depth = 1 + after.count("{") - after.count("}")
    while depth > 0:
        line, lineno = reader.next_meaningful()
        if line is None:
            raise ParseError("unterminated block", lineno)
        depth += line.count("{") - line.count("}")
        chunks.append(line)
    body = " ".join(chunks)
    body = body.rsplit("}", 1)[0]
    return pre.strip(), body, lineno


def _keyed_entries(body: str) -> list[tuple[str, str]]:
    out = []
    for entry in _split_entries(body):
        if ":" not in entry and "=" not in entry:
            raise ParseError(f"malformed entry {entry!r}")
        if entry.split("=", 1)[0].strip().isidentifier() and "=" in entry and (
            ":" not in entry.split("=", 1)[0]
        ):
            k, v = entry.split("=", 1)
        else:
            k, v = entry.split(":", 1)
        out.append((k.strip(), v.strip()))
    return out


def _parse_quiver_body(body: str) -> Quiver:
    vertices: set[str] = set()
    arrows: dict[str, tuple[str, str]] = {}
    section = None
    for entry in _split_entries(body):
        if entry.startswith("vertices:"):
            vertices |= set(entry.split(":", 1)[1].split())
            section = "vertices"
        elif entry.startswith("arrows:"):
            section = "arrows"
            entry = entry.split(":", 1)[1].strip()
            if entry:
                _parse_arrow_entry(entry, arrows)
        elif section == "arrows":
            _parse_arrow_entry(entry, arrows)
        elif section == "vertices":
            vertices |= set(entry.split())
        else:
            raise ParseError(f"unexpected quiver entry {entry!r}")
    for a, (s, t) in arrows.items():
        if s not in vertices or t not in vertices:
            raise ParseError(f"arrow {a} references unknown vertex")
    return Quiver(
        frozenset(vertices),
        frozenset(arrows),
        {a: st[0] for a, st in arrows.items()},
        {a: st[1] for a, st in arrows.items()},
    )


def _parse_arrow_entry(entry: str, arrows: dict) -> None:
    m = re.match(r"^(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", entry)
    if not m:
        raise ParseError(f"malformed arrow entry {entry!r}")
    arrows[m.group(1)] = (m.group(2), m.group(3))


def _parse_groupoid(doc: Document, name: str, header_rest: str, body: str) -> None:
    m = re.match(r"^extends\s+(\S+)$", header_rest.strip())
    if not m:
        raise ParseError(f"groupoid {name} must extend a quiver")
    base = m.group(1)
    if base not in doc.quivers:
        raise ParseError(f"groupoid {name} extends unknown quiver {base!r}")
    q = doc.quivers[base]
    mult: dict[tuple[str, str], str] = {}
    unit: dict[str, str] = {}
    inv: dict[str, str] = {}
    section = None
    for entry in _split_entries(body):
        for label in ("mult", "units", "inv"):
            if entry.startswith(label + ":"):
                section = label
                entry = entry.split(":", 1)[1].strip()
                break
        if not entry:
            continue
        if section == "mult":
            m2 = re.match(r"^(\S+)\s*\*\s*(\S+)\s*=\s*(\S+)$", entry)
            if not m2:
                raise ParseError(f"malformed mult entry {entry!r}")
            a, b, c = m2.groups()
            for x in (a, b, c):
                if x not in q.arrows:
                    raise ParseError(f"mult entry references unknown arrow {x!r}")
            mult[(a, b)] = c
        elif section == "units":
            v, a = [x.strip() for x in entry.split(":", 1)]
            if v not in q.vertices or a not in q.arrows:
                raise ParseError(f"bad unit entry {entry!r}")
            unit[v] = a
        elif section == "inv":
            a, b = [x.strip() for x in entry.split(":", 1)]
            if a not in q.arrows or b not in q.arrows:
                raise ParseError(f"bad inv entry {entry!r}")
            inv[a] = b
        else:
            raise ParseError(f"unexpected groupoid entry {entry!r}")
    doc.groupoids[name] = Groupoid(q, mult, unit, inv)


def _parse_morphism(doc: Document, name: str, header_rest: str, body: str) -> None:
    m = re.match(r"^:\s*(\S+)\s*->\s*(\S+)$", header_rest.strip())
    if not m:
        raise ParseError(f"morphism {name} needs ': <dom> -> <cod>'")
    dom, cod = m.groups()
    if dom not in doc.groupoids or cod not in doc.groupoids:
        raise ParseError(f"morphism {name} references unknown groupoids")
    arrow_map: dict[str, str] = {}
    vertex_map: dict[str, str] = {}
    section = None
    for entry in _split_entries(body):
        for label in ("arrows", "vertices"):
            if entry.startswith(label + ":"):
                section = label
                entry = entry.split(":", 1)[1].strip()
                break
        if not entry:
            continue
        m2 = re.match(r"^(\S+)\s*->\s*(\S+)$", entry)
        if not m2:
            raise ParseError(f"malformed mapping entry {entry!r}")
        if section == "arrows":
            arrow_map[m2.group(1)] = m2.group(2)
        elif section == "vertices":
            vertex_map[m2.group(1)] = m2.group(2)
        else:
            raise ParseError(f"unexpected morphism entry {entry!r}")
    doc.morphisms[name] = GroupoidMorphism(
        doc.groupoids[dom], doc.groupoids[cod], arrow_map, vertex_map
    )


def _parse_sequence(doc: Document, name: str, body: str) -> None:
    fields = dict(_keyed_entries(body))
    for key in ("N", "G", "H", "iota", "pi"):
        if key not in fields:
            raise ParseError(f"sequence {name} is missing {key}")
    n = doc.groupoid(fields["N"])
    g = doc.groupoid(fields["G"])
    h = doc.groupoid(fields["H"])
    iota = doc.morphisms[fields["iota"]]
    pi = doc.morphisms[fields["pi"]]
    section = doc.morphisms[fields["section"]] if "section" in fields else None
    doc.sequences[name] = ShortExactSequence(n, g, h, iota, pi, section)


def _parse_action(doc: Document, name: str, body: str) -> None:
    entries = _split_entries(body)
    actor = carrier = None
    arrow_act: dict[tuple[str, str], str] = {}
    vertex_act: dict[str, dict[str, str]] = {}
    for entry in entries:
        if entry.startswith("actor"):
            actor = doc.groupoid(entry.split("=", 1)[1].strip())
        elif entry.startswith("carrier"):
            carrier = doc.groupoid(entry.split("=", 1)[1].strip())
        elif entry.startswith("arrow "):
            m = re.match(r"^arrow\s+(\S+)\s+(\S+)\s*->\s*(\S+)$", entry)
            if not m:
                raise ParseError(f"malformed action arrow entry {entry!r}")
            arrow_act[(m.group(1), m.group(2))] = m.group(3)
        elif entry.startswith("vertex "):
            m = re.match(r"^vertex\s+(\S+)\s+(\S+)\s*->\s*(\S+)$", entry)
            if not m:
                raise ParseError(f"malformed action vertex entry {entry!r}")
            vertex_act.setdefault(m.group(1), {})[m.group(2)] = m.group(3)
        else:
            raise ParseError(f"unexpected action entry {entry!r}")
    if actor is None or carrier is None:
        raise ParseError(f"action {name} needs actor= and carrier=")
    doc.actions[name] = SemistrongAction(actor, carrier.quiver, arrow_act, vertex_act)


_WORD_RE = re.compile(r"\((\d+):([^)]*)\)")


def parse_word_literal(text: str) -> tuple[tuple[int, str], ...]:
    text = text.strip()
    if text == "e":
        return ()
    spans = list(_WORD_RE.finditer(text))
    if not spans or "".join(m.group(0) for m in spans) != text.replace(" ", ""):
        raise ParseError(f"malformed word literal {text!r}")
    return tuple((int(m.group(1)), m.group(2)) for m in spans)


def emit_word_literal(letters) -> str:
    if not letters:
        return "e"
    return "".join(f"({i}:{g})" for i, g in letters)


def _parse_query(doc: Document, name: str, body: str) -> None:
    fields = dict(_keyed_entries(body))
    if "op" not in fields or fields["op"] not in ("member", "eval"):
        raise ParseError(f"query {name} needs op=member|eval")
    letters = parse_word_literal(fields.get("word", "e"))
    m = re.match(r"^\(\s*(\S+?)\s*,\s*(\S+?)\s*\)$", fields.get("pair", ""))
    if not m:
        raise ParseError(f"query {name} needs pair=(a,b)")
    doc.queries[name] = WordQuery(fields["op"], letters, (m.group(1), m.group(2)))


def _parse_block(doc, kind, name, header_rest, body) -> None:
    if name in {n for _, n in doc.order}:
        raise ParseError(f"duplicate block name {name!r}")
    if kind == "quiver":
        if header_rest.strip():
            raise ParseError(f"unexpected tokens after quiver {name}")
        doc.quivers[name] = _parse_quiver_body(body)
    elif kind == "groupoid":
        _parse_groupoid(doc, name, header_rest, body)
        doc.quivers.setdefault(f"{name}.quiver", doc.groupoids[name].quiver)
    elif kind == "morphism":
        _parse_morphism(doc, name, header_rest, body)
    elif kind == "sequence":
        _parse_sequence(doc, name, body)
    elif kind == "action":
        _parse_action(doc, name, body)
    elif kind == "query":
        _parse_query(doc, name, body)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _emit_quiver_body(q: Quiver, indent: str = "  ") -> list[str]:
    lines = [f"{indent}vertices: {' '.join(sorted(q.vertices))};"]
    lines.append(f"{indent}arrows:")
    for a in sorted(q.arrows):
        lines.append(f"{indent}  {a} : {q.source[a]} -> {q.target[a]};")
    return lines


def emit_quiver(name: str, q: Quiver) -> str:
    return "\n".join([f"quiver {name} {{"] + _emit_quiver_body(q) + ["}"])


def emit_groupoid(name: str, g: Groupoid, quiver_name: str | None = None) -> str:
    qname = quiver_name or f"{name}.q"
    lines = [emit_quiver(qname, g.quiver)]
    lines.append(f"groupoid {name} extends {qname} {{")
    lines.append("  mult:")
    for (a, b), c in sorted(g.mult.items()):
        lines.append(f"    {a} * {b} = {c};")
    lines.append("  units:")
    for v in sorted(g.unit):
        lines.append(f"    {v} : {g.unit[v]};")
    lines.append("  inv:")
    for a in sorted(g.inv):
        lines.append(f"    {a} : {g.inv[a]};")
    lines.append("}")
    return "\n".join(lines)


def emit_morphism(name: str, f: GroupoidMorphism, dom: str, cod: str) -> str:
    lines = [f"morphism {name}: {dom} -> {cod} {{", "  arrows:"]
    for a in sorted(f.arrow_map):
        lines.append(f"    {a} -> {f.arrow_map[a]};")
    lines.append("  vertices:")
    for v in sorted(f.vertex_map):
        lines.append(f"    {v} -> {f.vertex_map[v]};")
    lines.append("}")
    return "\n".join(lines)


def emit_sequence(name: str, s: ShortExactSequence) -> str:
    parts = [
        emit_groupoid(f"{name}.N", s.n, f"{name}.N.q"),
        emit_groupoid(f"{name}.G", s.g, f"{name}.G.q"),
        emit_groupoid(f"{name}.H", s.h, f"{name}.H.q"),
        emit_morphism(f"{name}.iota", s.iota, f"{name}.N", f"{name}.G"),
        emit_morphism(f"{name}.pi", s.pi, f"{name}.G", f"{name}.H"),
    ]
    fields = [
        f"  N={name}.N;",
        f"  G={name}.G;",
        f"  H={name}.H;",
        f"  iota={name}.iota;",
        f"  pi={name}.pi;",
    ]
    if s.section is not None:
        parts.append(emit_morphism(f"{name}.section", s.section, f"{name}.H", f"{name}.G"))
        fields.append(f"  section={name}.section;")
    parts.append("\n".join([f"sequence {name} {{"] + fields + ["}"]))
    return "\n\n".join(parts)


def emit(doc: Document) -> str:
    out = []
    emitted_quivers = set()
    for kind, name in doc.order:
        if kind == "quiver":
            out.append(emit_quiver(name, doc.quivers[name]))
            emitted_quivers.add(name)
        elif kind == "groupoid":
            g = doc.groupoids[name]
            base = next(
                (qn for qn in doc.quivers if doc.quivers[qn] == g.quiver and qn in emitted_quivers),
                None,
            )
            if base is None:
                base = f"{name}.q"
                out.append(emit_quiver(base, g.quiver))
                emitted_quivers.add(base)
            lines = [f"groupoid {name} extends {base} {{", "  mult:"]
            for (a, b), c in sorted(g.mult.items()):
                lines.append(f"    {a} * {b} = {c};")
            lines.append("  units:")
            for v in sorted(g.unit):
                lines.append(f"    {v} : {g.unit[v]};")
            lines.append("  inv:")
            for a in sorted(g.inv):
                lines.append(f"    {a} : {g.inv[a]};")
            lines.append("}")
            out.append("\n".join(lines))
        elif kind == "morphism":
            f = doc.morphisms[name]
            dom = next(n for n, g in doc.groupoids.items() if g == f.domain)
            cod = next(n for n, g in doc.groupoids.items() if g == f.codomain)
            out.append(emit_morphism(name, f, dom, cod))
        elif kind == "sequence":
            s = doc.sequences[name]
            names = {id(g): n for n, g in doc.groupoids.items()}
            mnames = {id(m): n for n, m in doc.morphisms.items()}
            fields = [
                f"  N={names[id(s.n)]};",
                f"  G={names[id(s.g)]};",
                f"  H={names[id(s.h)]};",
                f"  iota={mnames[id(s.iota)]};",
                f"  pi={mnames[id(s.pi)]};",
            ]
            if s.section is not None:
                fields.append(f"  section={mnames[id(s.section)]};")
            out.append("\n".join([f"sequence {name} {{"] + fields + ["}"]))
        elif kind == "query":
            q = doc.queries[name]
            out.append(
                "\n".join(
                    [
                        f"query {name} {{",
                        f"  op={q.op};",
                        f"  word={emit_word_literal(q.letters)};",
                        f"  pair=({q.ends[0]},{q.ends[1]});",
                        "}",
                    ]
                )
            )
        elif kind == "action":
            act = doc.actions[name]
            anames = {id(g): n for n, g in doc.groupoids.items()}
            lines = [f"action {name} {{", f"  actor={anames[id(act.actor)]};"]
            carrier_name = next(
                (n for n, g in doc.groupoids.items() if g.quiver == act.carrier), None
            )
            lines.append(f"  carrier={carrier_name};")
            for (g_, x), y in sorted(act.arrow_act.items()):
                lines.append(f"  arrow {g_} {x} -> {y};")
            for g_ in sorted(act.vertex_act):
                for v in sorted(act.vertex_act[g_]):
                    lines.append(f"  vertex {g_} {v} -> {act.vertex_act[g_][v]};")
            lines.append("}")
            out.append("\n".join(lines))
    return "\n\n".join(out) + "\n"

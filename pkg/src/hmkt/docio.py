"""The "hmkt" market document format.

Line-oriented, UTF-8, order-insensitive sections, # comments:

    agents: 1 2 3
    objects: a b c
    endow: 1=a 2=b 3=c
    pref 1: b > a > c
    pref 2: a ~ c > b
    type a=x
    priority x: 1 > 3

Preference rows list every object exactly once, best first, with `>` between
strictly ranked entries and `~` inside an indifference class. Optional type
and priority lines feed the multi-copy model. Parse errors carry 1-based
line/column positions.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .errors import ParseError, TypeConsistencyError
from .market import Allocation, Market
from .typed import PriorityStructure, TypeStructure, validate_types

_RESERVED = set(">~=:#,")


@dataclass
class MarketDoc:
    """A market in labeled, serializable form."""

    agents: list[str]
    objects: list[str]
    endow: dict[str, str]  # agent label -> object label
    prefs: dict[str, list[list[str]]]  # agent label -> indifference classes
    types: dict[str, str] = field(default_factory=dict)  # object label -> type id
    priorities: dict[str, list[str]] = field(default_factory=dict)  # type id -> agents


@dataclass(frozen=True)
class CompiledMarket:
    market: Market
    agent_labels: tuple[str, ...]
    object_labels: tuple[str, ...]
    type_structure: TypeStructure | None
    priorities: PriorityStructure | None
    doc: MarketDoc

    def agent_index(self, label: str) -> int:
        try:
            return self.agent_labels.index(label)
        except ValueError:
            raise ParseError(f"unknown agent label {label!r}") from None

    def object_index(self, label: str) -> int:
        try:
            return self.object_labels.index(label)
        except ValueError:
            raise ParseError(f"unknown object label {label!r}") from None

    def allocation_labels(self, mu: Allocation) -> dict[str, str]:
        return {self.agent_labels[i]: self.object_labels[o] for i, o in enumerate(mu)}


def _check_label(token: str, line: int, col: int) -> str:
    if not token or any(ch in _RESERVED or ch.isspace() for ch in token):
        raise ParseError(f"bad label {token!r}", line, col)
    return token


def _split_labels(rest: str, line: int, base_col: int) -> list[tuple[str, int]]:
    return [(piece.group(), base_col + piece.start()) for piece in re.finditer(r"\S+", rest)]


def parse_market_doc(text: str) -> MarketDoc:
    agents: list[str] | None = None
    objects: list[str] | None = None
    endow: dict[str, str] = {}
    prefs: dict[str, list[list[str]]] = {}
    pref_pos: dict[str, int] = {}
    types: dict[str, str] = {}
    priorities: dict[str, list[str]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        cut = raw.find("#")
        line = raw if cut < 0 else raw[:cut]
        if not line.strip():
            continue
        head = re.match(r"\s*(\S+)", line)
        keyword = head.group(1)
        col0 = head.start(1) + 1

        if keyword == "agents:" or keyword == "objects:":
            labels = []
            for tok, col in _split_labels(line[head.end(1):], lineno, head.end(1) + 1):
                _check_label(tok, lineno, col)
                if tok in labels:
                    raise ParseError(f"duplicate label {tok!r}", lineno, col)
                labels.append(tok)
            if not labels:
                raise ParseError("empty label list", lineno, col0)
            if keyword == "agents:":
                if agents is not None:
                    raise ParseError("agents declared twice", lineno, col0)
                agents = labels
            else:
                if objects is not None:
                    raise ParseError("objects declared twice", lineno, col0)
                objects = labels
        elif keyword == "endow:":
            for tok, col in _split_labels(line[head.end(1):], lineno, head.end(1) + 1):
                if tok.count("=") != 1:
                    raise ParseError(f"expected agent=object, got {tok!r}", lineno, col)
                a, o = tok.split("=")
                _check_label(a, lineno, col)
                _check_label(o, lineno, col + len(a) + 1)
                if a in endow:
                    raise ParseError(f"agent {a!r} endowed twice", lineno, col)
                endow[a] = o
        elif keyword == "pref":
            m = re.match(r"\s*pref\s+(\S+?):(.*)$", line)
            if not m:
                raise ParseError("expected 'pref <agent>: ...'", lineno, col0)
            agent = _check_label(m.group(1), lineno, m.start(1) + 1)
            if agent in prefs:
                raise ParseError(f"preference row for {agent!r} given twice", lineno, col0)
            prefs[agent] = _parse_pref_expr(m.group(2), lineno, m.end(1) + 2)
            pref_pos[agent] = lineno
        elif keyword == "type":
            m = re.match(r"\s*type\s+(\S+?)=(\S+)\s*$", line)
            if not m:
                raise ParseError("expected 'type <object>=<typeid>'", lineno, col0)
            obj = _check_label(m.group(1), lineno, m.start(1) + 1)
            tid = _check_label(m.group(2), lineno, m.start(2) + 1)
            if obj in types:
                raise ParseError(f"type of {obj!r} declared twice", lineno, col0)
            types[obj] = tid
        elif keyword == "priority":
            m = re.match(r"\s*priority\s+(\S+?):(.*)$", line)
            if not m:
                raise ParseError("expected 'priority <typeid>: ...'", lineno, col0)
            tid = _check_label(m.group(1), lineno, m.start(1) + 1)
            if tid in priorities:
                raise ParseError(f"priority row for type {tid!r} given twice", lineno, col0)
            row = []
            for part, col in _split_separated(m.group(2), ">", lineno, m.end(1) + 2):
                row.append(_check_label(part, lineno, col))
            if not row:
                raise ParseError("empty priority row", lineno, col0)
            priorities[tid] = row
        else:
            raise ParseError(f"unrecognized line starting with {keyword!r}", lineno, col0)

    if agents is None:
        raise ParseError("missing 'agents:' section")
    if objects is None:
        raise ParseError("missing 'objects:' section")
    doc = MarketDoc(agents, objects, endow, prefs, types, priorities)
    _validate_doc(doc, pref_pos)
    return doc


def _split_separated(rest: str, sep: str, lineno: int, base_col: int):
    pos = 0
    for chunk in rest.split(sep):
        token = chunk.strip()
        col = base_col + pos + (len(chunk) - len(chunk.lstrip()))
        if token:
            yield token, col
        pos += len(chunk) + 1


def _parse_pref_expr(rest: str, lineno: int, base_col: int) -> list[list[str]]:
    classes: list[list[str]] = []
    for cls_chunk, col in _split_separated(rest, ">", lineno, base_col):
        group = []
        sub = 0
        for part in cls_chunk.split("~"):
            token = part.strip()
            if not token:
                raise ParseError("empty preference entry", lineno, col)
            group.append(_check_label(token, lineno, col + sub))
            sub += len(part) + 1
        classes.append(group)
    if not classes:
        raise ParseError("empty preference row", lineno, base_col)
    return classes


def _validate_doc(doc: MarketDoc, pref_pos: dict[str, int]) -> None:
    agent_set = set(doc.agents)
    object_set = set(doc.objects)
    if agent_set & object_set:
        clash = sorted(agent_set & object_set)[0]
        raise ParseError(f"label {clash!r} used for both an agent and an object")
    if len(doc.agents) != len(doc.objects):
        raise ParseError(f"{len(doc.agents)} agents but {len(doc.objects)} objects")
    for a, o in doc.endow.items():
        if a not in agent_set:
            raise ParseError(f"endowment for unknown agent {a!r}")
        if o not in object_set:
            raise ParseError(f"endowment with unknown object {o!r}")
    if set(doc.endow) != agent_set:
        missing = sorted(agent_set - set(doc.endow))[0]
        raise ParseError(f"agent {missing!r} has no endowment")
    if len(set(doc.endow.values())) != len(doc.objects):
        raise ParseError("endowment is not a bijection")
    for a in doc.agents:
        if a not in doc.prefs:
            raise ParseError(f"agent {a!r} has no preference row")
    for a, classes in doc.prefs.items():
        line = pref_pos.get(a)
        if a not in agent_set:
            raise ParseError(f"preference row for unknown agent {a!r}", line)
        seen: set[str] = set()
        for group in classes:
            for o in group:
                if o not in object_set:
                    raise ParseError(f"unknown object {o!r} in preference row for {a!r}", line)
                if o in seen:
                    raise ParseError(f"object {o!r} repeated in preference row for {a!r}", line)
                seen.add(o)
        if seen != object_set:
            missing = sorted(object_set - seen)[0]
            raise ParseError(f"object {missing!r} missing from preference row for {a!r}", line)
    for o in doc.types:
        if o not in object_set:
            raise ParseError(f"type declared for unknown object {o!r}")
    if doc.types and set(doc.types) != object_set:
        missing = sorted(object_set - set(doc.types))[0]
        raise ParseError(f"object {missing!r} has no type")
    for tid, row in doc.priorities.items():
        if not doc.types:
            raise ParseError("priority rows require type declarations")
        if tid not in set(doc.types.values()):
            raise ParseError(f"priority row for unknown type {tid!r}")
        for a in row:
            if a not in agent_set:
                raise ParseError(f"unknown agent {a!r} in priority row for {tid!r}")


def compile_market(doc: MarketDoc) -> CompiledMarket:
    """Resolve labels into a dense market plus optional typed structures."""
    obj_index = {o: k for k, o in enumerate(doc.objects)}
    agent_index = {a: k for k, a in enumerate(doc.agents)}
    endow = tuple(obj_index[doc.endow[a]] for a in doc.agents)
    rows = [[[obj_index[o] for o in group] for group in doc.prefs[a]] for a in doc.agents]
    market = Market.from_pref_rows(endow, rows)

    type_structure = None
    priorities = None
    if doc.types:
        tids: list[str] = []
        for o in doc.objects:
            if doc.types[o] not in tids:
                tids.append(doc.types[o])
        type_of = tuple(tids.index(doc.types[o]) for o in doc.objects)
        type_structure = TypeStructure(type_of)
        issues = validate_types(market, type_structure)
        if issues:
            raise TypeConsistencyError("; ".join(issues[:3]))
        if doc.priorities:
            if set(doc.priorities) != set(tids):
                missing = sorted(set(tids) - set(doc.priorities))[0]
                raise ParseError(f"type {missing!r} has no priority row")
            rows_p = []
            for x, tid in enumerate(tids):
                row = tuple(agent_index[a] for a in doc.priorities[tid])
                owners = sorted(type_structure.owners(market, x))
                if sorted(row) != owners:
                    raise ParseError(f"priority row for {tid!r} must rank exactly its owners")
                rows_p.append(row)
            priorities = tuple(rows_p)
    elif doc.priorities:
        raise ParseError("priority rows require type declarations")

    return CompiledMarket(market, tuple(doc.agents), tuple(doc.objects), type_structure, priorities, doc)


def load_market(text: str) -> CompiledMarket:
    return compile_market(parse_market_doc(text))


def emit_market_doc(doc: MarketDoc) -> str:
    """Canonical serialization; parse(emit(doc)) round-trips."""
    lines = [
        "agents: " + " ".join(doc.agents),
        "objects: " + " ".join(doc.objects),
        "endow: " + " ".join(f"{a}={doc.endow[a]}" for a in doc.agents),
    ]
    for a in doc.agents:
        expr = " > ".join(" ~ ".join(group) for group in doc.prefs[a])
        lines.append(f"pref {a}: {expr}")
    if doc.types:
        for o in doc.objects:
            lines.append(f"type {o}={doc.types[o]}")
    if doc.priorities:
        tids = []
        for o in doc.objects:
            tid = doc.types[o]
            if tid not in tids:
                tids.append(tid)
        for tid in tids:
            if tid in doc.priorities:
                lines.append(f"priority {tid}: " + " > ".join(doc.priorities[tid]))
    return "\n".join(lines) + "\n"


def market_digest(doc: MarketDoc) -> str:
    return hashlib.sha256(emit_market_doc(doc).encode("utf-8")).hexdigest()


def doc_from_market(
    m: Market,
    agent_labels: tuple[str, ...] | None = None,
    object_labels: tuple[str, ...] | None = None,
    type_structure: TypeStructure | None = None,
    priorities: PriorityStructure | None = None,
) -> MarketDoc:
    """Label a dense market (agents 1..n, objects a, b, ... by default)."""
    agents = list(agent_labels) if agent_labels else [str(i + 1) for i in range(m.n)]
    objects = list(object_labels) if object_labels else [_object_label(o) for o in range(m.n)]
    endow = {agents[i]: objects[m.endow[i]] for i in range(m.n)}
    prefs = {}
    for i in range(m.n):
        by_rank: dict[int, list[str]] = {}
        for o in range(m.n):
            by_rank.setdefault(m.rank[i][o], []).append(objects[o])
        prefs[agents[i]] = [by_rank[r] for r in sorted(by_rank)]
    types = {}
    prio = {}
    if type_structure is not None:
        tlabels = [f"t{x}" for x in range(type_structure.num_types)]
        types = {objects[o]: tlabels[type_structure.type_of[o]] for o in range(m.n)}
        if priorities is not None:
            prio = {tlabels[x]: [agents[i] for i in priorities[x]] for x in range(type_structure.num_types)}
    return MarketDoc(agents, objects, endow, prefs, types, prio)


def _object_label(o: int) -> str:
    label = ""
    o += 1
    while o:
        o, r = divmod(o - 1, 26)
        label = chr(ord("a") + r) + label
    return label


def parse_allocation_literal(text: str, compiled: CompiledMarket) -> Allocation:
    """Parse '1=b,2=a,3=c' into a dense allocation."""
    assign: dict[int, int] = {}
    for chunk in text.split(","):
        tok = chunk.strip()
        if not tok:
            continue
        if tok.count("=") != 1:
            raise ParseError(f"expected agent=object, got {tok!r}")
        a, o = (s.strip() for s in tok.split("="))
        i = compiled.agent_index(a)
        if i in assign:
            raise ParseError(f"agent {a!r} assigned twice")
        assign[i] = compiled.object_index(o)
    n = compiled.market.n
    if set(assign) != set(range(n)):
        raise ParseError("allocation must assign every agent exactly once")
    mu = tuple(assign[i] for i in range(n))
    if sorted(mu) != list(range(n)):
        raise ParseError("allocation must use every object exactly once")
    return mu

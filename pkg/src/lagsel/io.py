"""JSON instance files.

Layout::

    {
      "kind": "interval" | "gap" | "graph" | "free" | "grouped",
      "epsilon": "1/100",              # optional
      "budgets": [20],
      "elements": [{"id": 0, "profit": 7, "weights": [3], "delta": 2, ...}],
      ...kind payload...
    }

Rationals are JSON integers or ``"num/den"`` strings; floats are refused.
Kind payloads: interval elements carry ``activity``, ``start`` and ``end``;
gap files have a top-level ``bins`` list of ``{"id", "capacity"}`` and
elements carry ``item``, ``bin`` and ``size``; graph files have ``edges``
as id pairs; grouped files map group names to member lists in ``groups``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from json.decoder import scanstring

from .core import DEFAULT_EPSILON, Element, ProblemInstance
from .errors import LagselError, SchemaError
from .problems.structures import (
    FreeStructure,
    GapStructure,
    GraphStructure,
    GroupedStructure,
    IntervalStructure,
    Placement,
    Slot,
)
from .reopt import ReoptInstance

KINDS = ("interval", "gap", "graph", "free", "grouped")
_WS = re.compile(r"[ \t\n\r]*")


def _locate(text: str) -> dict:
    """Map each JSON value path (a tuple of keys/indices) to its offset."""
    positions = {}
    decoder = json.JSONDecoder()

    def skip(i):
        return _WS.match(text, i).end()

    def walk(i, path):
        i = skip(i)
        positions[path] = i
        ch = text[i]
        if ch == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = scanstring(text, i + 1)
                i = skip(i) + 1  # the colon
                i = skip(walk(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i = skip(i + 1)
        if ch == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            n = 0
            while True:
                i = skip(walk(i, path + (n,)))
                n += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        _, end = decoder.raw_decode(text, i)
        return end

    walk(0, ())
    return positions


def _format_path(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out


class _Reader:
    """Typed access to the decoded document with precise error locations."""

    def __init__(self, text: str):
        try:
            self.doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", "", exc.lineno) from None
        self.text = text
        self._positions = None

    def fail(self, path, message):
        if self._positions is None:
            self._positions = _locate(self.text)
        line = None
        for cut in range(len(path), -1, -1):
            pos = self._positions.get(tuple(path[:cut]))
            if pos is not None:
                line = self.text.count("\n", 0, pos) + 1
                break
        raise SchemaError(message, _format_path(path), line)

    def get(self, obj, key, path, required=True):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            if required:
                self.fail(path, f"missing field {key!r}")
            return None
        return obj[key]

    def rational(self, value, path):
        if isinstance(value, bool) or isinstance(value, float):
            self.fail(path, "expected an integer or a 'num/den' string")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                self.fail(path, f"cannot parse rational {value!r}")
        self.fail(path, "expected an integer or a 'num/den' string")

    def ident(self, value, path):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            self.fail(path, "identifiers must be integers or strings")
        return value

    def array(self, value, path):
        if not isinstance(value, list):
            self.fail(path, "expected an array")
        return value


@dataclass(frozen=True)
class InstanceFile:
    """A parsed file plus whether it set its own epsilon."""

    instance: ProblemInstance
    has_epsilon: bool
    has_delta: bool


def parse_instance(text: str) -> InstanceFile:
    rd = _Reader(text)
    doc = rd.doc
    if not isinstance(doc, dict):
        rd.fail((), "top level must be an object")
    kind = rd.get(doc, "kind", ())
    if kind not in KINDS:
        rd.fail(("kind",), f"kind must be one of {', '.join(KINDS)}")
    budgets = [
        rd.rational(b, ("budgets", i))
        for i, b in enumerate(rd.array(rd.get(doc, "budgets", ()), ("budgets",)))
    ]
    raw_eps = rd.get(doc, "epsilon", (), required=False)
    eps = DEFAULT_EPSILON if raw_eps is None else rd.rational(raw_eps, ("epsilon",))
    if not 0 < eps < 1:
        rd.fail(("epsilon",), "epsilon must lie in (0, 1)")

    raw_elements = rd.array(rd.get(doc, "elements", ()), ("elements",))
    elements, extras = [], {}
    with_delta = 0
    for n, raw in enumerate(raw_elements):
        at = ("elements", n)
        eid = rd.ident(rd.get(raw, "id", at), at + ("id",))
        if eid in extras:
            rd.fail(at + ("id",), f"duplicate element id {eid!r}")
        profit = rd.rational(rd.get(raw, "profit", at), at + ("profit",))
        if profit < 0:
            rd.fail(at + ("profit",), "profit must be >= 0")
        weights = rd.array(rd.get(raw, "weights", at), at + ("weights",))
        if len(weights) != len(budgets):
            rd.fail(at + ("weights",), f"expected {len(budgets)} weight(s), got {len(weights)}")
        weights = tuple(rd.rational(w, at + ("weights", i)) for i, w in enumerate(weights))
        if any(w < 0 for w in weights):
            rd.fail(at + ("weights",), "weights must be >= 0")
        delta = rd.get(raw, "delta", at, required=False)
        if delta is not None:
            delta = rd.rational(delta, at + ("delta",))
            if delta < 0 or delta.denominator != 1:
                rd.fail(at + ("delta",), "delta must be a non-negative integer")
            delta = int(delta)
            with_delta += 1
        elements.append(Element(eid, profit, weights, delta))
        extras[eid] = (raw, at)

    if len({type(i) for i in extras}) > 1:
        rd.fail(("elements",), "element ids must be all integers or all strings")
    structure = _parse_structure(rd, kind, doc, extras)
    try:
        inst = ProblemInstance(tuple(elements), structure, tuple(budgets), eps)
    except LagselError as exc:
        rd.fail((), str(exc))
    return InstanceFile(inst, raw_eps is not None, bool(elements) and with_delta == len(elements))


def _parse_structure(rd: _Reader, kind, doc, extras):
    if kind == "free":
        return FreeStructure()
    if kind == "interval":
        slots = {}
        for eid, (raw, at) in extras.items():
            activity = rd.ident(rd.get(raw, "activity", at), at + ("activity",))
            start = rd.rational(rd.get(raw, "start", at), at + ("start",))
            end = rd.rational(rd.get(raw, "end", at), at + ("end",))
            if not start < end:
                rd.fail(at + ("end",), "interval end must exceed its start")
            slots[eid] = Slot(activity, start, end)
        return IntervalStructure(slots)
    if kind == "gap":
        bins = {}
        for n, raw in enumerate(rd.array(rd.get(doc, "bins", ()), ("bins",))):
            at = ("bins", n)
            bid = rd.ident(rd.get(raw, "id", at), at + ("id",))
            cap = rd.rational(rd.get(raw, "capacity", at), at + ("capacity",))
            if cap < 0:
                rd.fail(at + ("capacity",), "capacity must be >= 0")
            bins[bid] = cap
        placements = {}
        for eid, (raw, at) in extras.items():
            item = rd.ident(rd.get(raw, "item", at), at + ("item",))
            bin_ = rd.ident(rd.get(raw, "bin", at), at + ("bin",))
            if bin_ not in bins:
                rd.fail(at + ("bin",), f"unknown bin {bin_!r}")
            size = rd.rational(rd.get(raw, "size", at), at + ("size",))
            if size < 0:
                rd.fail(at + ("size",), "size must be >= 0")
            placements[eid] = Placement(item, bin_, size)
        return GapStructure(bins, placements)
    if kind == "graph":
        edges = set()
        for n, raw in enumerate(rd.array(rd.get(doc, "edges", ()), ("edges",))):
            at = ("edges", n)
            pair = rd.array(raw, at)
            if len(pair) != 2:
                rd.fail(at, "an edge is a pair of element ids")
            u, v = (rd.ident(x, at + (i,)) for i, x in enumerate(pair))
            for i, x in enumerate((u, v)):
                if x not in extras:
                    rd.fail(at + (i,), f"unknown element id {x!r}")
            if u == v:
                rd.fail(at, "self-loops are not allowed")
            edges.add(frozenset((u, v)))
        return GraphStructure(frozenset(extras), frozenset(edges))
    groups = rd.get(doc, "groups", ())
    if not isinstance(groups, dict):
        rd.fail(("groups",), "expected an object mapping group names to id lists")
    parsed = {}
    for name, members in groups.items():
        at = ("groups", name)
        ids = [rd.ident(x, at + (i,)) for i, x in enumerate(rd.array(members, at))]
        for i, x in enumerate(ids):
            if x not in extras:
                rd.fail(at + (i,), f"unknown element id {x!r}")
        parsed[name] = frozenset(ids)
    return GroupedStructure(parsed)


def parse_reopt_instance(text: str) -> ReoptInstance:
    loaded = parse_instance(text)
    if not loaded.has_delta:
        rd = _Reader(text)
        for n, raw in enumerate(rd.doc["elements"]):
            if "delta" not in raw:
                rd.fail(("elements", n), "missing field 'delta' (transition cost)")
        rd.fail(("elements",), "reoptimization needs at least one element")
    try:
        return ReoptInstance(loaded.instance)
    except LagselError as exc:
        raise SchemaError(str(exc)) from None


def encode_number(value):
    """Integers stay integers; other rationals become ``"num/den"``."""
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _sorted_ids(ids):
    return sorted(ids, key=lambda x: (isinstance(x, str), x))


def instance_to_dict(inst: ProblemInstance) -> dict:
    s = inst.structure
    doc = {"kind": s.kind}
    if inst.epsilon != DEFAULT_EPSILON:
        doc["epsilon"] = encode_number(inst.epsilon)
    doc["budgets"] = [encode_number(b) for b in inst.budgets]
    if s.kind == "gap":
        doc["bins"] = [
            {"id": b, "capacity": encode_number(c)} for b, c in s.capacities.items()
        ]
    elements = []
    for e in inst.elements:
        raw = {
            "id": e.id,
            "profit": encode_number(e.profit),
            "weights": [encode_number(w) for w in e.weights],
        }
        if e.transition_cost is not None:
            raw["delta"] = e.transition_cost
        if s.kind == "interval":
            slot = s.slots[e.id]
            raw.update(activity=slot.activity, start=encode_number(slot.start), end=encode_number(slot.end))
        elif s.kind == "gap":
            p = s.placements[e.id]
            raw.update(item=p.item, bin=p.bin, size=encode_number(p.size))
        elements.append(raw)
    doc["elements"] = elements
    if s.kind == "graph":
        doc["edges"] = sorted(
            (_sorted_ids(e) for e in s.edges),
            key=lambda pair: [(isinstance(x, str), x) for x in pair],
        )
    elif s.kind == "grouped":
        doc["groups"] = {g: _sorted_ids(m) for g, m in s.groups.items()}
    return doc


def dumps(doc: dict) -> str:
    """Canonical text: one top-level field per line, one list entry per line."""
    fields = []
    for key, value in doc.items():
        head = f"  {json.dumps(key)}: "
        if isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            rows = ",\n".join("    " + json.dumps(v) for v in value)
            fields.append(f"{head}[\n{rows}\n  ]")
        else:
            fields.append(head + json.dumps(value))
    return "{\n" + ",\n".join(fields) + "\n}\n"


def serialize_instance(inst) -> str:
    if isinstance(inst, ReoptInstance):
        inst = inst.base
    return dumps(instance_to_dict(inst))


def load_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def load_reopt_instance(path) -> ReoptInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_reopt_instance(fh.read())


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))

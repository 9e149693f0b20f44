"""XCSP3 subset parsing and canonical serialization.

The writer emits one fixed form (declaration order, ``a..b`` run
compression, lexicographically sorted tuples, 2-space indentation); the
parser accepts that form plus ordinary whitespace variation, ``<group>``
and ``<block>`` wrappers, and compact ``<slide>`` templates.
"""

from __future__ import annotations

import re
import xml.parsers.expat
from dataclasses import dataclass, field
from typing import Union

from . import expr as _expr
from .errors import (
    InvariantViolationError,
    LengthMismatchError,
    SourceLocation,
    UnknownVariableError,
    UnsupportedFeatureError,
    XmlSyntaxError,
)
from .model import (
    STAR,
    AllDifferent,
    AllDifferentMatrix,
    Assignment,
    Automaton,
    Cardinality,
    Channel,
    Circuit,
    Condition,
    Constraint,
    Count,
    Cumulative,
    Domain,
    Element,
    Extension,
    Instance,
    Instantiation,
    Intension,
    Lex,
    LexMatrix,
    NoOverlap,
    Objective,
    Ordered,
    Regular,
    Slide,
    Sum,
    Table,
    Variable,
    validate_instance,
)

_INT_RE = re.compile(r"^[+-]?\d+$")
_RANGE_RE = re.compile(r"^([+-]?\d+)\.\.([+-]?\d+)$")
_TUPLE_RE = re.compile(r"\(([^()]*)\)")
_SIZE_RE = re.compile(r"\[(\d+)\]")
_VAR_SPLIT_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)((?:\[\d+\])*)$")

# Recognized XCSP3-core elements that this subset deliberately rejects.
_KNOWN_UNSUPPORTED = {"mdd", "allEqual", "nValues", "minimum", "maximum"}


# ---------------------------------------------------------------------------
# Location-aware XML layer


@dataclass
class _Node:
    tag: str
    attrib: dict[str, str]
    loc: SourceLocation
    children: list["_Node"] = field(default_factory=list)
    text_parts: list[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return " ".join("".join(self.text_parts).split())

    def child(self, tag: str) -> "_Node | None":
        for c in self.children:
            if c.tag == tag:
                return c
        return None

    def all(self, tag: str) -> list["_Node"]:
        return [c for c in self.children if c.tag == tag]


def _parse_xml(text: str) -> _Node:
    parser = xml.parsers.expat.ParserCreate()
    root: list[_Node] = []
    stack: list[_Node] = []

    def loc() -> SourceLocation:
        return SourceLocation(parser.CurrentLineNumber, parser.CurrentColumnNumber + 1)

    def start(tag, attrs):
        node = _Node(tag, dict(attrs), loc())
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(tag):
        stack.pop()

    def chardata(data):
        if stack:
            stack[-1].text_parts.append(data)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chardata
    try:
        parser.Parse(text, True)
    except xml.parsers.expat.ExpatError as exc:
        raise XmlSyntaxError(
            xml.parsers.expat.errors.messages[exc.code],
            SourceLocation(exc.lineno, exc.offset + 1),
        ) from None
    if len(root) != 1:
        raise XmlSyntaxError("expected exactly one root element", SourceLocation(1, 1))
    return root[0]


# ---------------------------------------------------------------------------
# Token helpers


def _parse_ints(text: str, loc: SourceLocation) -> list[int]:
    out: list[int] = []
    for tok in text.split():
        m = _RANGE_RE.match(tok)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise XmlSyntaxError(f"inverted range {tok!r}", loc)
            out.extend(range(lo, hi + 1))
        elif _INT_RE.match(tok):
            out.append(int(tok))
        else:
            raise XmlSyntaxError(f"expected integer or range, got {tok!r}", loc)
    return out


def _parse_var_list(text: str, known: set[str], loc: SourceLocation) -> list[str]:
    out = []
    for tok in text.split():
        if not _VAR_SPLIT_RE.match(tok):
            raise XmlSyntaxError(f"bad variable id {tok!r}", loc)
        if tok not in known:
            raise UnknownVariableError(tok, loc)
        out.append(tok)
    return out


def _parse_tuples(text: str, loc: SourceLocation) -> list[tuple]:
    stripped = _TUPLE_RE.sub("", text).strip()
    if stripped:
        raise XmlSyntaxError(f"stray content {stripped!r} in tuple list", loc)
    rows = []
    for m in _TUPLE_RE.finditer(text):
        entries = []
        for part in m.group(1).split(","):
            part = part.strip()
            if part == STAR:
                entries.append(STAR)
            elif _INT_RE.match(part):
                entries.append(int(part))
            else:
                raise XmlSyntaxError(f"bad tuple entry {part!r}", loc)
        rows.append(tuple(entries))
    return rows


def _parse_mixed_tokens(text: str, known: set[str], loc: SourceLocation) -> list[Union[int, str]]:
    """Integers and variable ids mixed (coefficient lists)."""
    out: list[Union[int, str]] = []
    for tok in text.split():
        if _INT_RE.match(tok):
            out.append(int(tok))
        elif _VAR_SPLIT_RE.match(tok):
            if tok not in known:
                raise UnknownVariableError(tok, loc)
            out.append(tok)
        else:
            raise XmlSyntaxError(f"bad token {tok!r}", loc)
    return out


def _parse_condition(text: str, known: set[str], loc: SourceLocation) -> Condition:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise XmlSyntaxError(f"bad condition {text!r}", loc)
    parts = [p.strip() for p in body[1:-1].split(",")]
    if len(parts) != 2:
        raise XmlSyntaxError(f"bad condition {text!r}", loc)
    op, rhs_text = parts
    if op not in ("lt", "le", "ge", "gt", "eq", "ne", "in"):
        raise XmlSyntaxError(f"bad condition operator {op!r}", loc)
    m = _RANGE_RE.match(rhs_text)
    if m:
        return Condition(op, (int(m.group(1)), int(m.group(2))))
    if _INT_RE.match(rhs_text):
        return Condition(op, int(rhs_text))
    if _VAR_SPLIT_RE.match(rhs_text):
        if rhs_text not in known:
            raise UnknownVariableError(rhs_text, loc)
        return Condition(op, rhs_text)
    raise XmlSyntaxError(f"bad condition rhs {rhs_text!r}", loc)


def _compress_ints(values) -> str:
    """Sorted distinct ints rendered with maximal ``a..b`` run compression."""
    vals = sorted(set(values))
    parts = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        if j > i:
            parts.append(f"{vals[i]}..{vals[j]}")
        else:
            parts.append(str(vals[i]))
        i = j + 1
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Parsing


def parse_instance(text: str) -> Instance:
    """Parse an XCSP3 document into a validated Instance."""
    root = _parse_xml(text)
    if root.tag != "instance":
        raise XmlSyntaxError(f"root element must be <instance>, got <{root.tag}>", root.loc)
    kind = root.attrib.get("type", "CSP")
    if kind not in ("CSP", "COP"):
        raise XmlSyntaxError(f"bad instance type {kind!r}", root.loc)

    vars_node = root.child("variables")
    if vars_node is None:
        raise XmlSyntaxError("missing <variables>", root.loc)
    variables = _parse_variables(vars_node)
    known = {v.id for v in variables}

    constraints: list[Constraint] = []
    ctrs_node = root.child("constraints")
    if ctrs_node is not None:
        for child in ctrs_node.children:
            constraints.extend(_parse_constraint_item(child, known))

    objective = None
    obj_node = root.child("objectives")
    if obj_node is not None:
        objective = _parse_objective(obj_node, known)

    decision: tuple[str, ...] = ()
    ann_node = root.child("annotations")
    if ann_node is not None:
        dec = ann_node.child("decision")
        if dec is not None:
            decision = tuple(_parse_var_list(dec.text, known, dec.loc))

    instance = Instance(kind, tuple(variables), tuple(constraints), objective, decision)
    report = validate_instance(instance)
    if report:
        raise InvariantViolationError(report)
    return instance


def _parse_variables(node: _Node) -> list[Variable]:
    out: list[Variable] = []
    for child in node.children:
        if child.tag == "var":
            vid = child.attrib.get("id")
            if not vid:
                raise XmlSyntaxError("<var> without id", child.loc)
            out.append(Variable(vid, Domain(tuple(sorted(set(_parse_ints(child.text, child.loc)))))))
        elif child.tag == "array":
            out.extend(_parse_array(child))
        else:
            raise UnsupportedFeatureError(child.tag, child.loc)
    return out


def _cells(stem: str, dims: list[int]) -> list[str]:
    cells = [stem]
    for d in dims:
        cells = [f"{c}[{i}]" for c in cells for i in range(d)]
    return cells


def _parse_array(node: _Node) -> list[Variable]:
    vid = node.attrib.get("id")
    size = node.attrib.get("size")
    if not vid or not size:
        raise XmlSyntaxError("<array> needs id and size", node.loc)
    dims = [int(m.group(1)) for m in _SIZE_RE.finditer(size)]
    if not dims or _SIZE_RE.sub("", size).strip():
        raise XmlSyntaxError(f"bad array size {size!r}", node.loc)
    cells = _cells(vid, dims)
    dom_nodes = node.all("domain")
    if not dom_nodes:
        dom = Domain(tuple(sorted(set(_parse_ints(node.text, node.loc)))))
        return [Variable(c, dom) for c in cells]
    per_cell: dict[str, Domain] = {}
    for dn in dom_nodes:
        targets = dn.attrib.get("for", "").split()
        dom = Domain(tuple(sorted(set(_parse_ints(dn.text, dn.loc)))))
        for t in targets:
            if t not in cells:
                raise XmlSyntaxError(f"domain for unknown cell {t!r}", dn.loc)
            if t in per_cell:
                raise XmlSyntaxError(f"cell {t!r} has two domains", dn.loc)
            per_cell[t] = dom
    missing = [c for c in cells if c not in per_cell]
    if missing:
        raise XmlSyntaxError(f"array cell {missing[0]!r} has no domain", node.loc)
    return [Variable(c, per_cell[c]) for c in cells]


def _substitute(node: _Node, args: list[str]) -> _Node:
    """Clone a template element, replacing %k placeholders in text."""

    def sub_text(t: str) -> str:
        if "%..." in t:
            raise UnsupportedFeatureError("group remaining-args placeholder '%...'", node.loc)

        def repl(m):
            k = int(m.group(1))
            if k >= len(args):
                raise XmlSyntaxError(f"placeholder %{k} without argument", node.loc)
            return args[k]

        return re.sub(r"%(\d+)", repl, t)

    clone = _Node(node.tag, dict(node.attrib), node.loc)
    clone.text_parts = [sub_text(t) for t in node.text_parts]
    clone.children = [_substitute(c, args) for c in node.children]
    return clone


def _parse_constraint_item(node: _Node, known: set[str]) -> list[Constraint]:
    if node.tag == "block":
        out = []
        for child in node.children:
            out.extend(_parse_constraint_item(child, known))
        return out
    if node.tag == "group":
        template = None
        args_nodes = []
        for child in node.children:
            if child.tag == "args":
                args_nodes.append(child)
            elif template is None:
                template = child
            else:
                raise XmlSyntaxError("group with two templates", child.loc)
        if template is None:
            raise XmlSyntaxError("group without template", node.loc)
        out = []
        for an in args_nodes:
            out.extend(_parse_constraint_item(_substitute(template, an.text.split()), known))
        return out
    return [_parse_constraint(node, known)]


def _require(node: _Node, tag: str) -> _Node:
    child = node.child(tag)
    if child is None:
        raise XmlSyntaxError(f"<{node.tag}> missing <{tag}>", node.loc)
    return child


def _parse_constraint(node: _Node, known: set[str]) -> Constraint:
    tag = node.tag
    if tag in _KNOWN_UNSUPPORTED:
        raise UnsupportedFeatureError(tag, node.loc)

    if tag == "extension":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        sup, con = node.child("supports"), node.child("conflicts")
        if (sup is None) == (con is None):
            raise XmlSyntaxError("<extension> needs exactly one of <supports>/<conflicts>", node.loc)
        body = sup if sup is not None else con
        polarity = "supports" if sup is not None else "conflicts"
        if len(scope) == 1:
            rows = []
            for tok in body.text.split():
                if tok == STAR:
                    rows.append((STAR,))
                else:
                    m = _RANGE_RE.match(tok)
                    if m:
                        rows.extend((v,) for v in range(int(m.group(1)), int(m.group(2)) + 1))
                    elif _INT_RE.match(tok):
                        rows.append((int(tok),))
                    else:
                        raise XmlSyntaxError(f"bad unary table entry {tok!r}", body.loc)
        else:
            rows = _parse_tuples(body.text, body.loc)
            for row in rows:
                if len(row) != len(scope):
                    raise XmlSyntaxError(f"tuple {row} does not match arity {len(scope)}", body.loc)
        return Extension(tuple(scope), Table(len(scope), polarity, tuple(rows)))

    if tag == "intension":
        try:
            expression = _expr.parse_expr(node.text)
        except _expr.ExprSyntaxError as exc:
            raise UnsupportedFeatureError(f"intension form ({exc})", node.loc) from None
        for vid in _expr.expr_vars(expression):
            if vid not in known:
                raise UnknownVariableError(vid, node.loc)
        return Intension(expression)

    if tag == "regular":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        trans_node = _require(node, "transitions")
        transitions = []
        stripped = _TUPLE_RE.sub("", trans_node.text).strip()
        if stripped:
            raise XmlSyntaxError("stray content in <transitions>", trans_node.loc)
        for m in _TUPLE_RE.finditer(trans_node.text):
            parts = [p.strip() for p in m.group(1).split(",")]
            if len(parts) != 3 or not _INT_RE.match(parts[1]):
                raise XmlSyntaxError(f"bad transition ({m.group(1)})", trans_node.loc)
            transitions.append((parts[0], int(parts[1]), parts[2]))
        start = _require(node, "start").text
        finals = tuple(_require(node, "final").text.split())
        return Regular(tuple(scope), Automaton(start, tuple(transitions), finals))

    if tag == "allDifferent":
        matrix = node.child("matrix")
        if matrix is not None:
            return AllDifferentMatrix(_parse_matrix(matrix, known))
        lst = node.child("list")
        text = lst.text if lst is not None else node.text
        loc = lst.loc if lst is not None else node.loc
        return AllDifferent(tuple(_parse_var_list(text, known, loc)))

    if tag == "ordered":
        lst = _require(node, "list")
        operator = _require(node, "operator").text
        return Ordered(tuple(_parse_var_list(lst.text, known, lst.loc)), operator)

    if tag == "lex":
        operator = _require(node, "operator").text
        matrix = node.child("matrix")
        if matrix is not None:
            return LexMatrix(_parse_matrix(matrix, known), operator)
        rows = tuple(tuple(_parse_var_list(lst.text, known, lst.loc)) for lst in node.all("list"))
        if len(rows) < 2:
            raise XmlSyntaxError("<lex> needs at least two lists", node.loc)
        return Lex(rows, operator)

    if tag == "sum":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        coeffs_node = node.child("coeffs")
        if coeffs_node is not None:
            coeffs = tuple(_parse_mixed_tokens(coeffs_node.text, known, coeffs_node.loc))
        else:
            coeffs = (1,) * len(scope)
        cond_node = _require(node, "condition")
        return Sum(tuple(scope), coeffs, _parse_condition(cond_node.text, known, cond_node.loc))

    if tag == "count":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        values_node = _require(node, "values")
        values = tuple(_parse_ints(values_node.text, values_node.loc))
        cond_node = _require(node, "condition")
        return Count(tuple(scope), values, _parse_condition(cond_node.text, known, cond_node.loc))

    if tag == "cardinality":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        values_node = _require(node, "values")
        values = tuple(_parse_ints(values_node.text, values_node.loc))
        closed = values_node.attrib.get("closed", "false") == "true"
        occurs_node = _require(node, "occurs")
        occurs = []
        for tok in occurs_node.text.split():
            m = _RANGE_RE.match(tok)
            if m:
                occurs.append((int(m.group(1)), int(m.group(2))))
            elif _INT_RE.match(tok):
                occurs.append((int(tok), int(tok)))
            else:
                raise XmlSyntaxError(f"bad occurs entry {tok!r}", occurs_node.loc)
        return Cardinality(tuple(scope), values, tuple(occurs), closed)

    if tag == "element":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        index = _require(node, "index").text
        if index not in known:
            raise UnknownVariableError(index, node.loc)
        value_node = _require(node, "value")
        vtext = value_node.text
        if _INT_RE.match(vtext):
            value: Union[int, str] = int(vtext)
        else:
            if vtext not in known:
                raise UnknownVariableError(vtext, value_node.loc)
            value = vtext
        return Element(tuple(scope), index, value)

    if tag == "channel":
        lists = node.all("list")
        if len(lists) != 2:
            raise UnsupportedFeatureError("channel without exactly two lists", node.loc)
        return Channel(
            tuple(_parse_var_list(lists[0].text, known, lists[0].loc)),
            tuple(_parse_var_list(lists[1].text, known, lists[1].loc)),
        )

    if tag == "noOverlap":
        origins_node = _require(node, "origins")
        lengths_node = _require(node, "lengths")
        origins = []
        for row in _parse_pair_tuples(origins_node.text, origins_node.loc):
            for entry in row:
                if isinstance(entry, int):
                    raise XmlSyntaxError("noOverlap origins must be variables", origins_node.loc)
                if entry not in known:
                    raise UnknownVariableError(entry, origins_node.loc)
            origins.append(row)
        lengths = []
        for row in _parse_pair_tuples(lengths_node.text, lengths_node.loc):
            for entry in row:
                if isinstance(entry, str) and entry not in known:
                    raise UnknownVariableError(entry, lengths_node.loc)
            lengths.append(row)
        return NoOverlap(tuple(origins), tuple(lengths))

    if tag == "cumulative":
        origins_node = _require(node, "origins")
        scope = _parse_var_list(origins_node.text, known, origins_node.loc)
        lengths_node = _require(node, "lengths")
        heights_node = _require(node, "heights")
        cond_node = _require(node, "condition")
        cond = _parse_condition(cond_node.text, known, cond_node.loc)
        if cond.operator != "le" or not isinstance(cond.rhs, int):
            raise UnsupportedFeatureError("cumulative condition other than (le,k)", cond_node.loc)
        return Cumulative(
            tuple(scope),
            tuple(_parse_ints(lengths_node.text, lengths_node.loc)),
            tuple(_parse_ints(heights_node.text, heights_node.loc)),
            cond.rhs,
        )

    if tag == "circuit":
        lst = node.child("list")
        text = lst.text if lst is not None else node.text
        loc = lst.loc if lst is not None else node.loc
        return Circuit(tuple(_parse_var_list(text, known, loc)))

    if tag == "instantiation":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        values_node = _require(node, "values")
        values = _parse_ints(values_node.text, values_node.loc)
        if len(values) != len(scope):
            raise XmlSyntaxError("instantiation list/values length mismatch", node.loc)
        return Instantiation(tuple(scope), tuple(values))

    if tag == "slide":
        lst = _require(node, "list")
        scope = _parse_var_list(lst.text, known, lst.loc)
        template = None
        for child in node.children:
            if child.tag != "list":
                if template is not None:
                    raise XmlSyntaxError("slide with two templates", child.loc)
                template = child
        if template is None:
            raise XmlSyntaxError("slide without template constraint", node.loc)
        arity = _template_arity(template)
        if arity < 1 or arity > len(scope):
            raise XmlSyntaxError("slide template arity does not fit list", node.loc)
        windows = []
        for i in range(len(scope) - arity + 1):
            windows.append(_parse_constraint(_substitute(template, scope[i : i + arity]), known))
        return Slide(tuple(windows))

    raise UnsupportedFeatureError(tag, node.loc)


def _template_arity(node: _Node) -> int:
    best = -1
    for part in node.text_parts:
        for m in re.finditer(r"%(\d+)", part):
            best = max(best, int(m.group(1)))
    for child in node.children:
        best = max(best, _template_arity(child) - 1)
    return best + 1


def _parse_pair_tuples(text: str, loc: SourceLocation) -> list[tuple]:
    rows = []
    stripped = _TUPLE_RE.sub("", text).strip()
    if stripped:
        raise XmlSyntaxError(f"stray content {stripped!r} in tuple list", loc)
    for m in _TUPLE_RE.finditer(text):
        entries = []
        for part in m.group(1).split(","):
            part = part.strip()
            if _INT_RE.match(part):
                entries.append(int(part))
            elif _VAR_SPLIT_RE.match(part):
                entries.append(part)
            else:
                raise XmlSyntaxError(f"bad entry {part!r}", loc)
        if len(entries) != 2:
            raise XmlSyntaxError(f"expected (x,y) pairs, got {m.group(0)}", loc)
        rows.append(tuple(entries))
    return rows


def _parse_matrix(node: _Node, known: set[str]) -> tuple[tuple[str, ...], ...]:
    rows = []
    stripped = _TUPLE_RE.sub("", node.text).strip()
    if stripped:
        raise XmlSyntaxError("stray content in <matrix>", node.loc)
    for m in _TUPLE_RE.finditer(node.text):
        row = []
        for part in m.group(1).split(","):
            part = part.strip()
            if part not in known:
                raise UnknownVariableError(part, node.loc)
            row.append(part)
        rows.append(tuple(row))
    return tuple(rows)


def _parse_objective(node: _Node, known: set[str]) -> Objective:
    bodies = [c for c in node.children if c.tag in ("minimize", "maximize")]
    if len(bodies) != 1:
        raise XmlSyntaxError("<objectives> must hold exactly one minimize/maximize", node.loc)
    body = bodies[0]
    sense = body.tag
    otype = body.attrib.get("type")
    if otype is None:
        vid = body.text
        if vid not in known:
            raise UnknownVariableError(vid, body.loc)
        return Objective(sense, "variable", (vid,))
    if otype not in ("sum", "maximum"):
        raise UnsupportedFeatureError(f"objective type {otype!r}", body.loc)
    lst = _require(body, "list")
    scope = tuple(_parse_var_list(lst.text, known, lst.loc))
    coeffs: tuple[int, ...] = ()
    coeffs_node = body.child("coeffs")
    if coeffs_node is not None:
        coeffs = tuple(_parse_ints(coeffs_node.text, coeffs_node.loc))
    return Objective(sense, otype, scope, coeffs)


# ---------------------------------------------------------------------------
# Solution fragments


def parse_solution(text: str) -> Assignment:
    """Parse an ``<instantiation>`` fragment into an Assignment."""
    root = _parse_xml(text)
    if root.tag != "instantiation":
        raise XmlSyntaxError(f"expected <instantiation>, got <{root.tag}>", root.loc)
    lst = _require(root, "list")
    values_node = _require(root, "values")
    ids = lst.text.split()
    for vid in ids:
        if not _VAR_SPLIT_RE.match(vid):
            raise XmlSyntaxError(f"bad variable id {vid!r}", lst.loc)
    values = []
    for tok in values_node.text.split():
        if tok == STAR:
            raise UnsupportedFeatureError("wildcard value in solution", values_node.loc)
        if not _INT_RE.match(tok):
            raise XmlSyntaxError(f"bad value {tok!r}", values_node.loc)
        values.append(int(tok))
    if len(ids) != len(values):
        raise LengthMismatchError(f"{len(ids)} variables but {len(values)} values")
    return Assignment(dict(zip(ids, values)))


def write_solution(assignment: Assignment) -> str:
    ids = list(assignment.bindings)
    values = [assignment.bindings[v] for v in ids]
    return (
        f"<instantiation> <list> {' '.join(ids)} </list> "
        f"<values> {' '.join(str(v) for v in values)} </values> </instantiation>"
    )


# ---------------------------------------------------------------------------
# Writing


def write_instance(instance: Instance) -> str:
    """Canonical serialization; requires a valid instance."""
    report = validate_instance(instance)
    if report:
        raise InvariantViolationError(report)
    w = _Writer()
    w.open(f'<instance format="XCSP3" type="{instance.kind}">')
    w.open("<variables>")
    _write_variables(w, instance.variables)
    w.close("</variables>")
    w.open("<constraints>")
    for c in instance.constraints:
        _write_constraint(w, c)
    w.close("</constraints>")
    if instance.objective is not None:
        w.open("<objectives>")
        _write_objective(w, instance.objective)
        w.close("</objectives>")
    if instance.decision_variables:
        w.open("<annotations>")
        w.leaf("decision", " ".join(instance.decision_variables))
        w.close("</annotations>")
    w.close("</instance>")
    return w.render()


class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.depth = 0

    def open(self, text: str):
        self.lines.append("  " * self.depth + text)
        self.depth += 1

    def close(self, text: str):
        self.depth -= 1
        self.lines.append("  " * self.depth + text)

    def line(self, text: str):
        self.lines.append("  " * self.depth + text)

    def leaf(self, tag: str, text: str, attrs: str = ""):
        head = f"<{tag}{attrs}>"
        if text:
            self.line(f"{head} {text} </{tag}>")
        else:
            self.line(f"{head} </{tag}>")

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _split_id(vid: str):
    m = _VAR_SPLIT_RE.match(vid)
    stem = m.group(1)
    indices = tuple(int(x) for x in re.findall(r"\[(\d+)\]", m.group(2)))
    return stem, indices


def _write_variables(w: _Writer, variables):
    i = 0
    n = len(variables)
    while i < n:
        stem, indices = _split_id(variables[i].id)
        if not indices:
            w.leaf("var", _compress_ints(variables[i].domain.values), f' id="{variables[i].id}"')
            i += 1
            continue
        j = i
        run = []
        while j < n:
            s2, idx2 = _split_id(variables[j].id)
            if s2 != stem or len(idx2) != len(indices):
                break
            run.append((variables[j], idx2))
            j += 1
        dims = [max(idx[d] for _, idx in run) + 1 for d in range(len(indices))]
        expected = _cells(stem, dims)
        if [v.id for v, _ in run] == expected:
            _write_array(w, stem, dims, [v for v, _ in run])
            i = j
        else:
            w.leaf("var", _compress_ints(variables[i].domain.values), f' id="{variables[i].id}"')
            i += 1


def _write_array(w: _Writer, stem: str, dims, cells):
    size = "".join(f"[{d}]" for d in dims)
    domains = {c.domain for c in cells}
    if len(domains) == 1:
        w.leaf("array", _compress_ints(cells[0].domain.values), f' id="{stem}" size="{size}"')
        return
    w.open(f'<array id="{stem}" size="{size}">')
    groups: list[tuple[Domain, list[str]]] = []
    index = {}
    for c in cells:
        if c.domain in index:
            groups[index[c.domain]][1].append(c.id)
        else:
            index[c.domain] = len(groups)
            groups.append((c.domain, [c.id]))
    for dom, ids in groups:
        w.leaf("domain", _compress_ints(dom.values), f' for="{" ".join(ids)}"')
    w.close("</array>")


def _format_entry(e) -> str:
    return STAR if e == STAR else str(e)


def _format_tuples(rows) -> str:
    return "".join("(" + ",".join(_format_entry(e) for e in row) + ")" for row in rows)


def _format_condition(cond: Condition) -> str:
    rhs = cond.rhs
    if isinstance(rhs, tuple):
        body = f"{rhs[0]}..{rhs[1]}"
    else:
        body = str(rhs)
    return f"({cond.operator},{body})"


def _format_occurs(occurs) -> str:
    parts = []
    for lo, hi in occurs:
        parts.append(str(lo) if lo == hi else f"{lo}..{hi}")
    return " ".join(parts)


def _write_constraint(w: _Writer, c: Constraint):
    if isinstance(c, Intension):
        w.leaf("intension", _expr.format_expr(c.expr))
    elif isinstance(c, Extension):
        w.open("<extension>")
        w.leaf("list", " ".join(c.scope))
        if c.table.arity == 1:
            ints = [row[0] for row in c.table.rows if row[0] != STAR]
            body = _compress_ints(ints)
            if any(row[0] == STAR for row in c.table.rows):
                body = (body + " " + STAR).strip()
        else:
            body = _format_tuples(c.table.rows)
        w.leaf(c.table.polarity, body)
        w.close("</extension>")
    elif isinstance(c, Regular):
        w.open("<regular>")
        w.leaf("list", " ".join(c.scope))
        w.leaf("transitions", "".join(f"({q},{s},{r})" for q, s, r in c.automaton.transitions))
        w.leaf("start", c.automaton.start)
        w.leaf("final", " ".join(c.automaton.finals))
        w.close("</regular>")
    elif isinstance(c, AllDifferent):
        w.leaf("allDifferent", " ".join(c.scope))
    elif isinstance(c, AllDifferentMatrix):
        w.open("<allDifferent>")
        w.leaf("matrix", _format_tuples(c.grid))
        w.close("</allDifferent>")
    elif isinstance(c, Ordered):
        w.open("<ordered>")
        w.leaf("list", " ".join(c.scope))
        w.leaf("operator", c.operator)
        w.close("</ordered>")
    elif isinstance(c, Lex):
        w.open("<lex>")
        for row in c.rows:
            w.leaf("list", " ".join(row))
        w.leaf("operator", c.operator)
        w.close("</lex>")
    elif isinstance(c, LexMatrix):
        w.open("<lex>")
        w.leaf("matrix", _format_tuples(c.grid))
        w.leaf("operator", c.operator)
        w.close("</lex>")
    elif isinstance(c, Sum):
        w.open("<sum>")
        w.leaf("list", " ".join(c.scope))
        if any(k != 1 for k in c.coeffs):
            w.leaf("coeffs", " ".join(str(k) for k in c.coeffs))
        w.leaf("condition", _format_condition(c.condition))
        w.close("</sum>")
    elif isinstance(c, Count):
        w.open("<count>")
        w.leaf("list", " ".join(c.scope))
        w.leaf("values", " ".join(str(v) for v in c.values))
        w.leaf("condition", _format_condition(c.condition))
        w.close("</count>")
    elif isinstance(c, Cardinality):
        w.open("<cardinality>")
        w.leaf("list", " ".join(c.scope))
        w.leaf("values", " ".join(str(v) for v in c.values), f' closed="{"true" if c.closed else "false"}"')
        w.leaf("occurs", _format_occurs(c.occurs))
        w.close("</cardinality>")
    elif isinstance(c, Element):
        w.open("<element>")
        w.leaf("list", " ".join(c.list_vars))
        w.leaf("index", c.index)
        w.leaf("value", str(c.value))
        w.close("</element>")
    elif isinstance(c, Channel):
        w.open("<channel>")
        w.leaf("list", " ".join(c.list_a))
        w.leaf("list", " ".join(c.list_b))
        w.close("</channel>")
    elif isinstance(c, NoOverlap):
        w.open("<noOverlap>")
        w.leaf("origins", _format_tuples(c.origins))
        w.leaf("lengths", _format_tuples(c.lengths))
        w.close("</noOverlap>")
    elif isinstance(c, Cumulative):
        w.open("<cumulative>")
        w.leaf("origins", " ".join(c.origins))
        w.leaf("lengths", " ".join(str(d) for d in c.lengths))
        w.leaf("heights", " ".join(str(h) for h in c.heights))
        w.leaf("condition", f"(le,{c.limit})")
        w.close("</cumulative>")
    elif isinstance(c, Circuit):
        w.leaf("circuit", " ".join(c.scope))
    elif isinstance(c, Instantiation):
        w.open("<instantiation>")
        w.leaf("list", " ".join(c.scope))
        w.leaf("values", " ".join(str(v) for v in c.values))
        w.close("</instantiation>")
    elif isinstance(c, Slide):
        _write_slide(w, c)
    else:
        raise InvariantViolationError([f"cannot serialize {type(c).__name__}"])


def _slide_layout(c: Slide):
    """Recover (sliding list, window arity) or fail if windows are not a
    uniform offset-1 template."""
    from .model import constraint_scope

    if not c.windows:
        raise InvariantViolationError(["slide with no windows"])
    scopes = [constraint_scope(win) for win in c.windows]
    arity = len(scopes[0])
    if arity < 1:
        raise InvariantViolationError(["slide window with empty scope"])
    seq = list(scopes[0])
    for s in scopes[1:]:
        overlap = tuple(seq[len(seq) - arity + 1 :]) if arity > 1 else ()
        if len(s) != arity or s[:-1] != overlap:
            raise InvariantViolationError(["slide windows do not slide by offset 1"])
        seq.append(s[-1])
    return seq, arity


def _write_slide(w: _Writer, c: Slide):
    seq, arity = _slide_layout(c)
    first = c.windows[0]
    placeholders = [f"%{k}" for k in range(arity)]
    if isinstance(first, Extension):
        if not all(isinstance(win, Extension) and win.table == first.table for win in c.windows):
            raise InvariantViolationError(["slide windows differ beyond their scope"])
        w.open("<slide>")
        w.leaf("list", " ".join(seq))
        w.open("<extension>")
        w.leaf("list", " ".join(placeholders))
        w.leaf(first.table.polarity, _format_tuples(first.table.rows))
        w.close("</extension>")
        w.close("</slide>")
        return
    if isinstance(first, Intension):
        from .model import constraint_scope

        mapping = dict(zip(constraint_scope(first), placeholders))
        template = _rename_expr(first.expr, mapping)
        for win in c.windows:
            win_map = dict(zip(constraint_scope(win), placeholders))
            if not isinstance(win, Intension) or _rename_expr(win.expr, win_map) != template:
                raise InvariantViolationError(["slide windows differ beyond their scope"])
        w.open("<slide>")
        w.leaf("list", " ".join(seq))
        w.leaf("intension", _expr.format_expr(template))
        w.close("</slide>")
        return
    raise InvariantViolationError([f"slide over {type(first).__name__} windows is not serializable"])


def _rename_expr(e, mapping):
    if isinstance(e, _expr.VarRef):
        return _expr.VarRef(mapping.get(e.var_id, e.var_id))
    if isinstance(e, _expr.Op):
        return _expr.Op(e.kind, tuple(_rename_expr(ch, mapping) for ch in e.children))
    return e


def _write_objective(w: _Writer, obj: Objective):
    if obj.kind == "variable":
        w.leaf(obj.sense, obj.scope[0])
        return
    w.open(f'<{obj.sense} type="{obj.kind}">')
    w.leaf("list", " ".join(obj.scope))
    if obj.coeffs:
        w.leaf("coeffs", " ".join(str(k) for k in obj.coeffs))
    w.close(f"</{obj.sense}>")

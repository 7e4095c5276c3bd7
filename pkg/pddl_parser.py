"""Разбор STRIPS-подмножества PDDL.

Текст сначала превращается в дерево s-выражений (pyparsing), где у каждого
узла запомнены строка и столбец. Затем дерево проверяется и переводится в
PlanningDomain / PlanningInstance. Все символы приводятся к нижнему регистру.
"""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union
import logging

from pyparsing import (
    CharsNotIn,
    Empty,
    Forward,
    ParseException,
    ParserElement,
    Suppress,
    ZeroOrMore,
    col,
    lineno,
    rest_of_line,
)

from actions import Atom, Operator
from facts import GroundFact, State
from planning_task import ROOT_TYPE, PlanningDomain, PlanningInstance
import exceptions

logger = logging.getLogger(__name__)

SUPPORTED_REQUIREMENTS = {":strips", ":typing"}

# Ключевые слова формул, которые означают выход за пределы STRIPS.
UNSUPPORTED_CONNECTIVES = {
    "or": "disjunctive preconditions",
    "imply": "disjunctive preconditions",
    "exists": "existential preconditions",
    "forall": "universal quantification",
    "when": "conditional effects",
    "=": "equality",
    "increase": "action costs",
    "decrease": "numeric fluents",
    "assign": "numeric fluents",
    "scale-up": "numeric fluents",
    "scale-down": "numeric fluents",
}

UNSUPPORTED_SECTIONS = {
    ":functions": "numeric fluents",
    ":durative-action": "durative actions",
    ":derived": "axioms",
    ":constraints": "constraints",
    ":metric": "action costs",
}


class Symbol(str):
    """Атом s-выражения с позицией в исходном тексте."""

    line: int = 0
    column: int = 0


class SExpr:
    """Список s-выражения с позицией открывающей скобки."""

    def __init__(self, items: Sequence[Union[Symbol, SExpr]], line: int, column: int):
        self.items: List[Union[Symbol, SExpr]] = list(items)
        self.line = line
        self.column = column

    def __iter__(self) -> Iterator[Union[Symbol, SExpr]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, index):
        return self.items[index]

    @property
    def head(self) -> Optional[str]:
        if self.items and isinstance(self.items[0], Symbol):
            return self.items[0]
        return None

    def __repr__(self) -> str:
        return "(" + " ".join(repr(item) if isinstance(item, SExpr) else item for item in self.items) + ")"


Node = Union[Symbol, SExpr]


def _make_symbol(text: str, location: int, tokens) -> Symbol:
    symbol = Symbol(tokens[0].lower())
    symbol.line = lineno(location, text)
    symbol.column = col(location, text)
    return symbol


def _make_list(text: str, location: int, tokens) -> SExpr:
    return SExpr(list(tokens), lineno(location, text), col(location, text))


def _grammar() -> ParserElement:
    comment = Suppress(";" + rest_of_line)
    atom = (Empty() + CharsNotIn("() \t\r\n;")).set_parse_action(_make_symbol)
    expression = Forward()
    expression <<= (Suppress("(") + ZeroOrMore(atom | expression) + Suppress(")")).set_parse_action(_make_list)
    expression.ignore(comment)
    return expression


_GRAMMAR = _grammar()


def read_sexpr(text: str) -> SExpr:
    """Разобрать текст в одно s-выражение верхнего уровня."""
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except ParseException as exc:
        raise exceptions.PDDLSyntaxError(exc.msg, exc.lineno, exc.col) from exc
    return result[0]


def _fail(node: Node, message: str) -> exceptions.PDDLSyntaxError:
    return exceptions.PDDLSyntaxError(message, getattr(node, "line", 0), getattr(node, "column", 0))


def _expect_list(node: Node, what: str) -> SExpr:
    if not isinstance(node, SExpr):
        raise _fail(node, f"Expected {what}, found '{node}'")
    return node


def _expect_symbol(node: Node, what: str) -> Symbol:
    if not isinstance(node, Symbol):
        raise _fail(node, f"Expected {what}, found a list")
    return node


def _sections(root: SExpr, kind: str) -> Tuple[str, List[SExpr]]:
    """Проверить шапку (define (kind name) ...) и вернуть имя и разделы."""
    if root.head != "define" or len(root) < 2:
        raise _fail(root, "Expected (define ...)")
    header = _expect_list(root[1], f"({kind} name)")
    if header.head != kind or len(header) != 2:
        raise _fail(header, f"Expected ({kind} name)")
    name = _expect_symbol(header[1], f"{kind} name")
    sections = [_expect_list(node, "a section") for node in root.items[2:]]
    for section in sections:
        if section.head is None or not section.head.startswith(":"):
            raise _fail(section, "Expected a section keyword such as :predicates")
        if section.head in UNSUPPORTED_SECTIONS:
            raise exceptions.UnsupportedFeatureError(UNSUPPORTED_SECTIONS[section.head], section.line)
    return str(name), sections


def parse_typed_list(nodes: Sequence[Node], default: str = ROOT_TYPE) -> List[Tuple[str, str]]:
    """Разобрать "a b - t c" в [(a, t), (b, t), (c, object)]."""
    typed: List[Tuple[str, str]] = []
    pending: List[str] = []
    index = 0
    while index < len(nodes):
        node = nodes[index]
        if isinstance(node, SExpr):
            raise _fail(node, "Unexpected list in a typed list")
        if node == "-":
            if index + 1 >= len(nodes):
                raise _fail(node, "Type expected after '-'")
            type_node = nodes[index + 1]
            if isinstance(type_node, SExpr):
                if type_node.head == "either":
                    raise exceptions.UnsupportedFeatureError("either types", type_node.line)
                raise _fail(type_node, "Expected a type name")
            if not pending:
                raise _fail(node, "Type without names")
            typed.extend((name, str(type_node)) for name in pending)
            pending = []
            index += 2
            continue
        pending.append(str(node))
        index += 1
    typed.extend((name, default) for name in pending)
    return typed


def _check_requirements(section: SExpr) -> Tuple[str, ...]:
    requirements = []
    for node in section.items[1:]:
        requirement = _expect_symbol(node, "a requirement")
        if requirement not in SUPPORTED_REQUIREMENTS:
            raise exceptions.UnsupportedFeatureError(requirement, requirement.line)
        requirements.append(str(requirement))
    return tuple(requirements)


def _atom(node: Node, where: str) -> Atom:
    expression = _expect_list(node, f"an atom in {where}")
    head = expression.head
    if head is None:
        raise _fail(expression, f"Expected an atom in {where}")
    if head in UNSUPPORTED_CONNECTIVES:
        raise exceptions.UnsupportedFeatureError(UNSUPPORTED_CONNECTIVES[head], expression.line)
    terms = tuple(str(_expect_symbol(term, "a term")) for term in expression.items[1:])
    return Atom(str(head), terms)


def _conjunction(node: Node, where: str) -> List[SExpr]:
    """Развернуть (and ...) в список подформул. Пустой список означает «истина»."""
    expression = _expect_list(node, where)
    if not expression.items:
        return []
    if expression.head == "and":
        parts: List[SExpr] = []
        for item in expression.items[1:]:
            parts.extend(_conjunction(item, where))
        return parts
    return [expression]


def _precondition(node: Node) -> List[Atom]:
    atoms = []
    for part in _conjunction(node, "a precondition"):
        if part.head == "not":
            raise exceptions.UnsupportedFeatureError("negative preconditions", part.line)
        atoms.append(_atom(part, "a precondition"))
    return atoms


def _effect(node: Node) -> Tuple[List[Atom], List[Atom]]:
    add: List[Atom] = []
    delete: List[Atom] = []
    for part in _conjunction(node, "an effect"):
        if part.head == "not":
            if len(part) != 2:
                raise _fail(part, "(not ...) takes exactly one atom")
            delete.append(_atom(part[1], "an effect"))
        else:
            add.append(_atom(part, "an effect"))
    return add, delete


def _operator(section: SExpr) -> Operator:
    if len(section) < 2:
        raise _fail(section, "Action name expected")
    name = str(_expect_symbol(section[1], "an action name"))
    fields: Dict[str, Node] = {}
    index = 2
    while index < len(section):
        key = _expect_symbol(section[index], "an action keyword")
        if index + 1 >= len(section):
            raise _fail(key, f"Value expected after {key}")
        if key not in (":parameters", ":precondition", ":effect"):
            raise _fail(key, f"Unknown action keyword {key}")
        fields[str(key)] = section[index + 1]
        index += 2

    parameters: List[Tuple[str, str]] = []
    if ":parameters" in fields:
        parameters = parse_typed_list(_expect_list(fields[":parameters"], "a parameter list").items)
        for variable, _ in parameters:
            if not variable.startswith("?"):
                raise _fail(section, f"Parameter {variable} of {name} must start with '?'")
    pre = _precondition(fields[":precondition"]) if ":precondition" in fields else []
    add, delete = _effect(fields[":effect"]) if ":effect" in fields else ([], [])
    return Operator(name, parameters, pre, add, delete)


def _check_atom(domain: PlanningDomain, atom: Atom, where: str) -> None:
    if atom.predicate not in domain.predicates:
        raise exceptions.PDDLSemanticError(f"Undeclared predicate {atom.predicate} in {where}.")
    arity = len(domain.predicates[atom.predicate])
    if len(atom.terms) != arity:
        raise exceptions.PDDLSemanticError(
            f"Predicate {atom.predicate} takes {arity} arguments, {len(atom.terms)} given in {where}."
        )


def parse_domain(text: str) -> PlanningDomain:
    """Разобрать текст домена PDDL."""
    root = read_sexpr(text)
    name, sections = _sections(root, "domain")

    requirements: Tuple[str, ...] = ()
    types: Dict[str, str] = {}
    constants: Dict[str, str] = {}
    predicates: Dict[str, Tuple[str, ...]] = {}
    operators: List[Operator] = []

    for section in sections:
        head = section.head
        if head == ":requirements":
            requirements = _check_requirements(section)
        elif head == ":types":
            for child, parent in parse_typed_list(section.items[1:]):
                if child != ROOT_TYPE:
                    types[child] = parent
        elif head == ":constants":
            constants.update(parse_typed_list(section.items[1:]))
        elif head == ":predicates":
            for node in section.items[1:]:
                declaration = _expect_list(node, "a predicate declaration")
                predicate = str(_expect_symbol(declaration[0], "a predicate name")) if declaration.items else ""
                if not predicate:
                    raise _fail(declaration, "Empty predicate declaration")
                arguments = parse_typed_list(declaration.items[1:])
                predicates[predicate] = tuple(type_name for _, type_name in arguments)
        elif head == ":action":
            operators.append(_operator(section))
        else:
            raise _fail(section, f"Unknown domain section {head}")

    domain = PlanningDomain(
        name,
        requirements=requirements,
        types=types,
        constants=constants,
        predicates=predicates,
        operators=operators,
    )
    for operator in domain.operators:
        for variable, type_name in operator.parameters:
            if not domain.known_type(type_name):
                raise exceptions.PDDLSemanticError(f"Unknown type {type_name} of {variable} in {operator.name}.")
        for atom in operator.pre + operator.add + operator.delete:
            _check_atom(domain, atom, operator.name)
            for term in atom.terms:
                if not term.startswith("?") and term not in domain.constants:
                    raise exceptions.PDDLSemanticError(f"Undeclared constant {term} in {operator.name}.")
    logger.debug("Parsed %r", domain)
    return domain


def _ground_atom(domain: PlanningDomain, universe: Dict[str, str], atom: Atom, where: str) -> GroundFact:
    _check_atom(domain, atom, where)
    for term in atom.terms:
        if term.startswith("?"):
            raise exceptions.PDDLSemanticError(f"Variable {term} in {where}.")
        if term not in universe:
            raise exceptions.PDDLSemanticError(f"Undeclared object {term} in {where}.")
    return GroundFact(atom.predicate, atom.terms)


def parse_problem(text: str, domain: PlanningDomain) -> PlanningInstance:
    """Разобрать задачу PDDL относительно уже разобранного домена."""
    root = read_sexpr(text)
    name, sections = _sections(root, "problem")

    objects: Dict[str, str] = {}
    init_nodes: List[Node] = []
    goal_node: Optional[Node] = None

    for section in sections:
        head = section.head
        if head == ":domain":
            if len(section) == 2 and str(section[1]) != domain.name:
                logger.warning("Problem %s names domain %s, parsing against %s.", name, section[1], domain.name)
        elif head == ":requirements":
            _check_requirements(section)
        elif head == ":objects":
            objects.update(parse_typed_list(section.items[1:]))
        elif head == ":init":
            init_nodes = section.items[1:]
        elif head == ":goal":
            if len(section) != 2:
                raise _fail(section, "(:goal ...) takes exactly one formula")
            goal_node = section[1]
        else:
            raise _fail(section, f"Unknown problem section {head}")

    for object_name, type_name in objects.items():
        if not domain.known_type(type_name):
            raise exceptions.PDDLSemanticError(f"Unknown type {type_name} of object {object_name}.")

    instance = PlanningInstance(name, domain, objects, State())
    universe = instance.universe

    initial = []
    for node in init_nodes:
        expression = _expect_list(node, "an initial fact")
        if expression.head == "not":
            raise exceptions.UnsupportedFeatureError("negative initial facts", expression.line)
        initial.append(_ground_atom(domain, universe, _atom(expression, ":init"), ":init"))

    goal = []
    if goal_node is not None:
        goal = [_ground_atom(domain, universe, atom, ":goal") for atom in _precondition(goal_node)]

    return PlanningInstance(name, domain, objects, State(initial), goal)


def parse_fact_list(text: str) -> List[GroundFact]:
    """Разобрать список фактов "(on a b),(clear c)" или "(on a b) (clear c)".

Порядок сохраняется, повторы отбрасываются.
    """
    facts: List[GroundFact] = []
    body = text.replace(",", " ").strip()
    if not body:
        return facts
    root = read_sexpr(f"({body})")
    for node in root:
        atom = _atom(node, "a fact list")
        for term in atom.terms:
            if term.startswith("?"):
                raise _fail(node, f"Variable {term} in a fact list")
        fact = GroundFact(atom.predicate, atom.terms)
        if fact not in facts:
            facts.append(fact)
    return facts


def _typed_text(pairs: Iterable[Tuple[str, str]], typed: bool) -> str:
    """Сгруппировать подряд идущие имена одного типа: "a b - block"."""
    pairs = list(pairs)
    if not typed:
        return " ".join(name for name, _ in pairs)
    chunks: List[str] = []
    group: List[str] = []
    current: Optional[str] = None
    for name, type_name in pairs:
        if type_name != current and group:
            chunks.append(" ".join(group) + f" - {current}")
            group = []
        current = type_name
        group.append(name)
    if group:
        chunks.append(" ".join(group) + f" - {current}")
    return " ".join(chunks)


def _atoms_text(atoms: Sequence[object]) -> str:
    if not atoms:
        return "(and)"
    return "(and " + " ".join(str(atom) for atom in atoms) + ")"


def format_domain(domain: PlanningDomain) -> str:
    """Напечатать домен в PDDL. parse_domain(format_domain(d)) == d."""
    typed = domain.typed
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append("  (:requirements " + " ".join(domain.requirements) + ")")
    if domain.types:
        lines.append("  (:types " + _typed_text(sorted(domain.types.items()), True) + ")")
    if domain.constants:
        lines.append("  (:constants " + _typed_text(sorted(domain.constants.items()), typed) + ")")
    lines.append("  (:predicates")
    for predicate, arg_types in domain.predicates.items():
        arguments = [(f"?x{index}", type_name) for index, type_name in enumerate(arg_types)]
        text = _typed_text(arguments, typed)
        lines.append(f"    ({predicate}" + (f" {text}" if text else "") + ")")
    lines.append("  )")
    for operator in domain.operators:
        lines.append(f"  (:action {operator.name}")
        lines.append("    :parameters (" + _typed_text(operator.parameters, typed) + ")")
        lines.append("    :precondition " + _atoms_text(operator.pre))
        effects = [str(atom) for atom in operator.add] + [f"(not {atom})" for atom in operator.delete]
        lines.append("    :effect " + _atoms_text(effects))
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_problem(instance: PlanningInstance, goal_text: Optional[str] = None) -> str:
    """Напечатать задачу в PDDL.

Если задан `goal_text`, он подставляется внутрь (:goal ...) как есть; так
пишется шаблон с меткой <HYPOTHESIS>.
    """
    typed = instance.domain.typed
    lines = [
        f"(define (problem {instance.name})",
        f"  (:domain {instance.domain.name})",
        "  (:objects " + _typed_text(sorted(instance.objects.items(), key=lambda pair: (pair[1], pair[0])), typed) + ")",
        "  (:init",
    ]
    lines.extend(f"    {fact}" for fact in instance.initial)
    lines.append("  )")
    if goal_text is None:
        goal_text = _atoms_text(sorted(instance.goal))
    lines.append(f"  (:goal {goal_text})")
    lines.append(")")
    return "\n".join(lines) + "\n"

"""Postfix (de)serialization, rendering and structural measures of concepts."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from typing import NamedTuple

from curi.exceptions import StackUnderflowError, TrailingOperandsError, TypeMismatchError, UnknownTokenError
from curi.objects.common import (
    ACCESSORS,
    COMPARISON_TOKENS,
    COUNT_TOKEN,
    QUANTIFIER_TOKENS,
    SET_TEST_TOKENS,
    VOCABULARY,
    constant_domain,
)
from curi.objects.concept import (
    Access,
    Compare,
    Concept,
    Constant,
    Count,
    Junction,
    Node,
    Not,
    SetTest,
    Variable,
)

TokenString = list[str]

# Domains on which `>` is defined: sizes are ordinal, locations and numbers are integers.
ORDERED_DOMAINS = frozenset({"size", "int"})


def serialize_postfix(concept: Node) -> TokenString:
    """Serialize a concept (or any subexpression) to postfix tokens.

    Args:
        concept (Node): The expression to serialize.

    Returns:
        TokenString: Operands left to right, each followed by its operator.
    """
    tokens: TokenString = []
    _emit(concept, tokens)
    return tokens


def _emit(node: Node, out: TokenString) -> None:  # noqa: C901
    if isinstance(node, Variable):
        out.append(node.name)
    elif isinstance(node, Constant):
        out.append(node.token)
    elif isinstance(node, Access):
        _emit(node.target, out)
        out.append(node.accessor)
    elif isinstance(node, Count):
        _emit(node.values, out)
        _emit(node.value, out)
        out.append(COUNT_TOKEN)
    elif isinstance(node, (Compare, SetTest, Junction)):
        if isinstance(node, SetTest):
            _emit(node.values, out)
            _emit(node.value, out)
        else:
            _emit(node.left, out)
            _emit(node.right, out)
        out.append(node.op)
    elif isinstance(node, Not):
        _emit(node.operand, out)
        out.append("not")
    else:
        _emit(node.body, out)
        out.append(f"{node.quantifier}=")


def concept_length(concept: Concept) -> int:
    """Return the number of tokens in the postfix serialization of a concept."""
    return len(serialize_postfix(concept))


class _Operand(NamedTuple):
    node: Node
    # "object", "set", "bool", "concept", "<domain>" for scalars or "set:<domain>" for value multisets.
    kind: str


def parse_postfix(tokens: Sequence[str] | str) -> Concept:  # noqa: C901, PLR0912
    """Parse a postfix token string into a concept.

    Integer literals share a single `int` domain, so they are accepted wherever a number or a location
    is expected.

    Args:
        tokens (Sequence[str] | str): The tokens, or a whitespace separated string of tokens.

    Returns:
        Concept: The unique concept the tokens denote.
    """
    if isinstance(tokens, str):
        tokens = tokens.split()
    stack: list[_Operand] = []

    def pop(arity: int, token: str, position: int) -> list[_Operand]:
        if len(stack) < arity:
            msg = f"{token!r} at position {position} needs {arity} operand(s), found {len(stack)}."
            raise StackUnderflowError(message=msg)
        operands = stack[-arity:]
        del stack[-arity:]
        return operands

    def mismatch(token: str, position: int, operands: list[_Operand]) -> TypeMismatchError:
        kinds = ", ".join(operand.kind for operand in operands)
        return TypeMismatchError(message=f"{token!r} at position {position} cannot take ({kinds}).")

    for position, token in enumerate(tokens):
        if token not in VOCABULARY:
            raise UnknownTokenError(token=token, position=position)
        if token in ("x", "S", "S_{-x}"):
            stack.append(_Operand(Variable(name=token), "object" if token == "x" else "set"))
        elif token in ACCESSORS:
            (target,) = pop(1, token, position)
            if target.kind not in ("object", "set"):
                raise mismatch(token, position, [target])
            node = Access(accessor=token, target=target.node)
            kind = node.domain if target.kind == "object" else f"set:{node.domain}"
            stack.append(_Operand(node, kind))
        elif token in COMPARISON_TOKENS:
            left, right = pop(2, token, position)
            if left.kind != right.kind or left.kind not in ("color", "shape", "material", "size", "int"):
                raise mismatch(token, position, [left, right])
            if token == ">" and left.kind not in ORDERED_DOMAINS:
                raise mismatch(token, position, [left, right])
            stack.append(_Operand(Compare(op=token, left=left.node, right=right.node), "bool"))
        elif token in (*SET_TEST_TOKENS, COUNT_TOKEN):
            values, value = pop(2, token, position)
            if values.kind != f"set:{value.kind}":
                raise mismatch(token, position, [values, value])
            if token == COUNT_TOKEN:
                stack.append(_Operand(Count(values=values.node, value=value.node), "int"))
            else:
                stack.append(_Operand(SetTest(op=token, values=values.node, value=value.node), "bool"))
        elif token in ("and", "or"):
            left, right = pop(2, token, position)
            if left.kind != "bool" or right.kind != "bool":
                raise mismatch(token, position, [left, right])
            stack.append(_Operand(Junction(op=token, left=left.node, right=right.node), "bool"))
        elif token == "not":
            (operand,) = pop(1, token, position)
            if operand.kind != "bool":
                raise mismatch(token, position, [operand])
            stack.append(_Operand(Not(operand=operand.node), "bool"))
        elif token in QUANTIFIER_TOKENS:
            (body,) = pop(1, token, position)
            if body.kind != "bool":
                raise mismatch(token, position, [body])
            stack.append(_Operand(Concept(quantifier=QUANTIFIER_TOKENS[token], body=body.node), "concept"))
        else:
            stack.append(_Operand(Constant(token=token), str(constant_domain(token))))

    if not stack:
        raise StackUnderflowError(message="An empty token string does not denote a concept.")
    if len(stack) != 1:
        raise TrailingOperandsError(message=f"{len(stack)} operands remain on the stack, expected 1.")
    if stack[0].kind != "concept":
        raise TypeMismatchError(message=f"The token string denotes a {stack[0].kind}, not a quantified concept.")
    return stack[0].node  # type: ignore[return-value]


def pretty_print(node: Node) -> str:
    """Render an expression in prefix style, e.g. `exists x in S =(2, count=(color?(S-x), cyan))`.

    The rendering is for display only and is never parsed back.
    """
    if isinstance(node, Variable):
        return "S-x" if node.name == "S_{-x}" else node.name
    if isinstance(node, Constant):
        return node.token
    if isinstance(node, Access):
        return f"{node.accessor}({pretty_print(node.target)})"
    if isinstance(node, Count):
        return f"count=({pretty_print(node.values)}, {pretty_print(node.value)})"
    if isinstance(node, SetTest):
        return f"{node.op}({pretty_print(node.values)}, {pretty_print(node.value)})"
    if isinstance(node, (Compare, Junction)):
        return f"{node.op}({pretty_print(node.left)}, {pretty_print(node.right)})"
    if isinstance(node, Not):
        return f"not({pretty_print(node.operand)})"
    return f"{node.quantifier} x in S {pretty_print(node.body)}"


def children(node: Node) -> tuple[Node, ...]:
    """Return the direct subexpressions of a node, left to right."""
    if isinstance(node, Access):
        return (node.target,)
    if isinstance(node, (Count, SetTest)):
        return (node.values, node.value)
    if isinstance(node, (Compare, Junction)):
        return (node.left, node.right)
    if isinstance(node, Not):
        return (node.operand,)
    if isinstance(node, Concept):
        return (node.body,)
    return ()


def walk(node: Node) -> Iterator[Node]:
    """Yield a node and all of its subexpressions in pre-order."""
    yield node
    for child in children(node):
        yield from walk(child)


def derivation_depth(concept: Concept) -> int:
    """Return the depth of the grammar derivation tree that produced a concept.

    `START` sits at depth 0 and terminals count as nodes, so the shallowest concept has depth 3.
    """
    return max(1, _depth(concept.body, 1))


def _depth(node: Node, depth: int) -> int:
    # `depth` is the depth of the nonterminal this node was expanded from.
    if isinstance(node, Constant):
        return depth + 1
    if isinstance(node, Access):
        # OBJECT/SET and the accessor nonterminal one level down, their terminals two levels down.
        return depth + 2
    if isinstance(node, (Count, SetTest)):
        return max(_depth(node.values, depth + 1), _depth(node.value, depth + 1))
    return max([depth + 1, *(_depth(child, depth + 1) for child in children(node))])

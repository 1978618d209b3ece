"""This module contains the classes that represent a concept expression tree."""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from curi.objects.common import ACCESSOR_DOMAIN, Accessor, Domain, Quantifier, constant_code, constant_domain


class Variable(BaseModel):
    """A class that represents the bound object `x`, the scene `S` or the scene without `x`."""

    model_config = ConfigDict(frozen=True)

    node: Literal["variable"] = "variable"
    name: Literal["x", "S", "S_{-x}"]

    @property
    def is_set(self) -> bool:
        """Whether the variable denotes a set of objects."""
        return self.name != "x"


class Constant(BaseModel):
    """A class that represents a constant token such as `blue` or `3`."""

    model_config = ConfigDict(frozen=True)

    node: Literal["constant"] = "constant"
    token: str

    @property
    def domain(self) -> Domain:
        """The value domain of the constant."""
        domain = constant_domain(self.token)
        if domain is None:
            msg = f"{self.token!r} is not a constant"
            raise ValueError(msg)
        return domain

    @property
    def code(self) -> int:
        """The integer code the constant is compared with."""
        return constant_code(self.token)


class Access(BaseModel):
    """A class that represents a property accessor applied to a variable."""

    model_config = ConfigDict(frozen=True)

    node: Literal["access"] = "access"
    accessor: Accessor
    target: Variable

    @property
    def domain(self) -> Domain:
        """The value domain of the accessed property."""
        return ACCESSOR_DOMAIN[self.accessor]


class Count(BaseModel):
    """A class that represents `count=(values, value)`, the number of members equal to a value."""

    model_config = ConfigDict(frozen=True)

    node: Literal["count"] = "count"
    values: Access
    value: Scalar


class Compare(BaseModel):
    """A class that represents an `=` or `>` comparison of two scalars."""

    model_config = ConfigDict(frozen=True)

    node: Literal["compare"] = "compare"
    op: Literal["=", ">"]
    left: Scalar
    right: Scalar


class SetTest(BaseModel):
    """A class that represents `all(values, value)` or `any(values, value)`."""

    model_config = ConfigDict(frozen=True)

    node: Literal["set_test"] = "set_test"
    op: Literal["all", "any"]
    values: Access
    value: Scalar


class Not(BaseModel):
    """A class that represents a negation."""

    model_config = ConfigDict(frozen=True)

    node: Literal["not"] = "not"
    operand: Boolean


class Junction(BaseModel):
    """A class that represents a conjunction or a disjunction."""

    model_config = ConfigDict(frozen=True)

    node: Literal["junction"] = "junction"
    op: Literal["and", "or"]
    left: Boolean
    right: Boolean


class Concept(BaseModel):
    """A class that represents a whole concept: a quantifier over `x` in `S` and a boolean body."""

    model_config = ConfigDict(frozen=True)

    node: Literal["concept"] = "concept"
    quantifier: Quantifier
    body: Boolean


Scalar = Annotated[Union[Constant, Access, Count], Field(discriminator="node")]
Boolean = Annotated[Union[Compare, SetTest, Not, Junction], Field(discriminator="node")]
Node = Union[Variable, Constant, Access, Count, Compare, SetTest, Not, Junction, Concept]

for _model in (Count, Compare, SetTest, Not, Junction, Concept):
    _model.model_rebuild()


class ConceptRecord(BaseModel):
    """A class that represents one line of a concept JSONL file."""

    id_: int = Field(..., alias="id")
    postfix: list[str]
    length: int

    model_config = ConfigDict(populate_by_name=True)

"""System files: JSON descriptors and their construction.

A descriptor is a tagged union keyed on ``type``. Rationals are strings such
as ``"-1/2"`` so that nothing is lost to floating point.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from .core import Alphabet, TransitivityError
from .interval import LADDER, FinitePLMap, PLMap
from .lang import (
    GapShiftOracle,
    LanguageOracle,
    LindenstraussOracle,
    ProductOracle,
    SftOracle,
    Substitution,
    SubstitutionOracle,
)
from .lattice import SystemFlags
from .sft import SftGraph, build_product, essentialize, higher_block_recode

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class ParseError(TransitivityError):
    code = "PARSE_ERROR"


class DescriptorValidationError(TransitivityError):
    code = "VALIDATION_ERROR"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValueError(f"expected a rational string like '3/4', got {text!r}")
    value = Fraction(text.replace(" ", ""))
    return value


Rational = Annotated[str, Field(description="exact rational 'p/q'")]


class _Base(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    id: str | None = None


class SftSpec(_Base):
    type: Literal["sft"]
    vertices: list[str] = Field(min_length=1)
    edges: list[tuple[str, str]]
    sided: Literal["one", "two"] = "one"


class ForbiddenWordsSpec(_Base):
    type: Literal["forbidden_words"]
    alphabet: list[str] = Field(min_length=1)
    words: list[str | list[str]] = Field(min_length=1)
    sided: Literal["one", "two"] = "one"


class SubstitutionSpec(_Base):
    type: Literal["substitution"]
    rules: dict[str, str | list[str]] = Field(min_length=1)


class GapShiftSpec(_Base):
    type: Literal["gap_shift"]
    base: int = Field(default=3, ge=2)


class LindenstraussSpec(_Base):
    type: Literal["lindenstrauss"]
    base_rules: dict[str, str | list[str]] = Field(default_factory=lambda: {"1": "12", "2": "21"})


class PLMapSpec(_Base):
    type: Literal["pl_map"]
    domain: tuple[Rational, Rational]
    breakpoints: list[Rational] = Field(min_length=2)
    values: list[Rational] = Field(min_length=2)

    @field_validator("domain", "breakpoints", "values")
    @classmethod
    def _rationals(cls, v):
        for x in v:
            parse_rational(x)
        return v


class LadderSpec(_Base):
    type: Literal["ladder"]


class ProductSpec(_Base):
    type: Literal["product"]
    factors: list["SystemDescriptor"] = Field(min_length=2, max_length=2)


SystemDescriptor = Annotated[
    Union[SftSpec, ForbiddenWordsSpec, SubstitutionSpec, GapShiftSpec, LindenstraussSpec,
          PLMapSpec, LadderSpec, ProductSpec],
    Field(discriminator="type"),
]
ProductSpec.model_rebuild()
_ADAPTER = TypeAdapter(SystemDescriptor)


def parse_system(data: Any):
    """Validate a decoded JSON value into a descriptor."""
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as e:
        err = e.errors()[0]
        path = ".".join(str(p) for p in err["loc"])
        raise DescriptorValidationError(f"{path or '<root>'}: {err['msg']}") from None


def parse_system_file(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_system(data)


def dump_system(desc) -> dict:
    return desc.model_dump(exclude_none=True)


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class System:
    """A constructed system ready for classification."""

    kind: Literal["sft", "substitution", "oracle", "interval"]
    label: str
    flags: SystemFlags
    graph: SftGraph | None = None
    oracle: LanguageOracle | None = None
    substitution: Substitution | None = None
    pl_map: PLMap | None = None


def _sft_system(g: SftGraph, label: str) -> System:
    g = essentialize(g)
    flags = SystemFlags(open_map=True, invertible=g.invertible, trivial=g.is_trivial)
    return System("sft", label, flags, graph=g, oracle=SftOracle(g) if not g.invertible else None)


def _graph_of(desc) -> SftGraph | None:
    if isinstance(desc, SftSpec):
        return SftGraph.from_names(desc.vertices, desc.edges, desc.sided)
    if isinstance(desc, ForbiddenWordsSpec):
        alpha = Alphabet.of(desc.alphabet)
        g = higher_block_recode(alpha, [alpha.encode(w) for w in desc.words])
        if desc.sided == "two":
            g = SftGraph.from_names([g.alphabet.name(c) for c in g.vertices],
                                    [(g.alphabet.name(a), g.alphabet.name(b)) for a, b in g.edges], "two")
        return g
    if isinstance(desc, ProductSpec):
        gs = [_graph_of(f) for f in desc.factors]
        if any(g is None for g in gs):
            return None
        if gs[0].sided is not gs[1].sided:
            raise DescriptorValidationError("product factors must both be one-sided or both two-sided")
        return build_product(essentialize(gs[0]), essentialize(gs[1]))
    return None


def _oracle_of(desc) -> LanguageOracle:
    if isinstance(desc, GapShiftSpec):
        return GapShiftOracle(desc.base)
    if isinstance(desc, SubstitutionSpec):
        return SubstitutionOracle(Substitution.from_names(desc.rules))
    if isinstance(desc, LindenstraussSpec):
        base = SubstitutionOracle(Substitution.from_names(desc.base_rules), "base")
        return LindenstraussOracle(base)
    g = _graph_of(desc)
    if g is not None:
        if g.invertible:
            raise DescriptorValidationError("two-sided factors cannot be mixed with one-sided oracles")
        return SftOracle(g)
    if isinstance(desc, ProductSpec):
        return ProductOracle(_oracle_of(desc.factors[0]), _oracle_of(desc.factors[1]))
    raise DescriptorValidationError(f"{desc.type} cannot be presented by a language oracle")


def build_system(desc) -> System:
    label = desc.id or desc.type
    try:
        g = _graph_of(desc)
        if g is not None:
            return _sft_system(g, label)
        if isinstance(desc, SubstitutionSpec):
            s = Substitution.from_names(desc.rules)
            o = SubstitutionOracle(s, label)
            return System("substitution", label, SystemFlags(trivial=len(o.factors(1)) == 1),
                          oracle=o, substitution=s)
        if isinstance(desc, PLMapSpec):
            lo, hi = (parse_rational(x) for x in desc.domain)
            f = FinitePLMap(tuple(parse_rational(x) for x in desc.breakpoints),
                            tuple(parse_rational(x) for x in desc.values))
            if (f.domain.lo, f.domain.hi) != (lo, hi):
                raise DescriptorValidationError("breakpoints must start and end at the domain endpoints")
            return System("interval", label, SystemFlags(trivial=lo == hi), pl_map=f)
        if isinstance(desc, LadderSpec):
            return System("interval", label, SystemFlags(trivial=False), pl_map=LADDER)
        # gap shifts, zero-insertion lifts and their products are infinite
        return System("oracle", label, SystemFlags(trivial=False), oracle=_oracle_of(desc))
    except (ValueError, KeyError) as e:
        raise DescriptorValidationError(str(e)) from None

"""Type classification shared by the textual and XML frontends.

Declared variables are sorted into Simple (single-element) and Complex
(multi-element) types, and Complex ones are expanded one level deep into
sub-variables: struct fields, declared array elements, or the interface
members of a function block instance.  Deeper levels are intentionally
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AnalysisWarning
from .ir import SubVariable, TypeClass, VarSection

# Elementary IEC types: single value, Simple weight class.
ELEMENTARY_TYPES = frozenset(
    name.casefold()
    for name in (
        "BOOL", "BYTE", "WORD", "DWORD", "LWORD",
        "SINT", "INT", "DINT", "LINT",
        "USINT", "UINT", "UDINT", "ULINT",
        "REAL", "LREAL",
        "TIME", "LTIME", "DATE", "LDATE",
        "TIME_OF_DAY", "TOD", "DATE_AND_TIME", "DT", "LTOD", "LDT",
        "STRING", "WSTRING", "CHAR", "WCHAR",
    )
)


@dataclass(frozen=True)
class TypeSpec:
    """Structural description of a declared type.

    kind: "named" | "string" | "array" | "struct" | "enum" | "subrange"
    """

    kind: str
    name: str = ""
    dims: tuple[tuple[int, int], ...] = ()
    element: "TypeSpec | None" = None
    fields: tuple[tuple[str, str], ...] = ()  # struct: (member name, member type text)

    def render(self) -> str:
        if self.kind == "named":
            return self.name
        if self.kind == "string":
            return self.name or "STRING"
        if self.kind == "array":
            dims = ", ".join("%d..%d" % (lo, hi) for lo, hi in self.dims)
            inner = self.element.render() if self.element else "?"
            return "ARRAY [%s] OF %s" % (dims, inner)
        if self.kind == "struct":
            return "STRUCT"
        if self.kind == "enum":
            return "ENUM"
        if self.kind == "subrange":
            return self.element.render() if self.element else self.name
        return self.name or self.kind

    def element_count(self) -> int:
        n = 1
        for lo, hi in self.dims:
            n *= max(hi - lo + 1, 0)
        return n


def named(name: str) -> TypeSpec:
    return TypeSpec("named", name=name)


@dataclass(frozen=True)
class FbMember:
    name: str
    type_name: str
    section: VarSection


def _fb(*members: tuple[str, str, VarSection]) -> tuple[FbMember, ...]:
    return tuple(FbMember(n, t, s) for n, t, s in members)


_IN = VarSection.INPUT
_OUT = VarSection.OUTPUT

# Interfaces of the ubiquitous standard function blocks, so instances of
# them expand to sub-variables and their output reads resolve without
# the user supplying source for them.
STANDARD_FBS: dict[str, tuple[FbMember, ...]] = {
    "ton": _fb(("IN", "BOOL", _IN), ("PT", "TIME", _IN), ("Q", "BOOL", _OUT), ("ET", "TIME", _OUT)),
    "tof": _fb(("IN", "BOOL", _IN), ("PT", "TIME", _IN), ("Q", "BOOL", _OUT), ("ET", "TIME", _OUT)),
    "tp": _fb(("IN", "BOOL", _IN), ("PT", "TIME", _IN), ("Q", "BOOL", _OUT), ("ET", "TIME", _OUT)),
    "ctu": _fb(("CU", "BOOL", _IN), ("R", "BOOL", _IN), ("PV", "INT", _IN), ("Q", "BOOL", _OUT), ("CV", "INT", _OUT)),
    "ctd": _fb(("CD", "BOOL", _IN), ("LD", "BOOL", _IN), ("PV", "INT", _IN), ("Q", "BOOL", _OUT), ("CV", "INT", _OUT)),
    "ctud": _fb(
        ("CU", "BOOL", _IN), ("CD", "BOOL", _IN), ("R", "BOOL", _IN), ("LD", "BOOL", _IN), ("PV", "INT", _IN),
        ("QU", "BOOL", _OUT), ("QD", "BOOL", _OUT), ("CV", "INT", _OUT),
    ),
    "r_trig": _fb(("CLK", "BOOL", _IN), ("Q", "BOOL", _OUT)),
    "f_trig": _fb(("CLK", "BOOL", _IN), ("Q", "BOOL", _OUT)),
    "sr": _fb(("S1", "BOOL", _IN), ("R", "BOOL", _IN), ("Q1", "BOOL", _OUT)),
    "rs": _fb(("S", "BOOL", _IN), ("R1", "BOOL", _IN), ("Q1", "BOOL", _OUT)),
}


@dataclass
class TypeContext:
    """User TYPE definitions plus known function-block interfaces.

    Built in a first pass over all input files, then consulted while the
    POUs themselves are extracted.
    """

    definitions: dict[str, TypeSpec] = field(default_factory=dict)
    fb_interfaces: dict[str, tuple[FbMember, ...]] = field(default_factory=dict)
    array_sub_cap: int | None = None

    def define(self, name: str, spec: TypeSpec) -> None:
        self.definitions[name.casefold()] = spec

    def lookup(self, name: str) -> TypeSpec | None:
        return self.definitions.get(name.casefold())

    def register_fb(self, name: str, members: tuple[FbMember, ...]) -> None:
        self.fb_interfaces[name.casefold()] = members

    def fb_members(self, type_name: str) -> tuple[FbMember, ...] | None:
        key = type_name.casefold()
        if key in self.fb_interfaces:
            return self.fb_interfaces[key]
        return STANDARD_FBS.get(key)

    def is_fb(self, type_name: str) -> bool:
        return self.fb_members(type_name) is not None

    def fb_output_names(self, type_name: str) -> frozenset[str]:
        members = self.fb_members(type_name) or ()
        return frozenset(m.name.casefold() for m in members if m.section in (VarSection.OUTPUT, VarSection.IN_OUT))

    # ------------------------- classification -------------------------

    def classify(
        self, spec: TypeSpec, base_name: str
    ) -> tuple[TypeClass, tuple[SubVariable, ...], list[AnalysisWarning]]:
        """Classify a declared type and expand its first sub-variable level."""
        return self._classify(spec, base_name, seen=set())

    def _classify(self, spec, base_name, seen):
        warnings: list[AnalysisWarning] = []
        if spec.kind == "string":
            return TypeClass.SIMPLE, (), warnings
        if spec.kind == "array":
            return TypeClass.COMPLEX, self._array_subs(spec, base_name), warnings
        if spec.kind == "struct":
            subs = tuple(SubVariable(name, type_name) for name, type_name in spec.fields)
            return TypeClass.COMPLEX, subs, warnings
        if spec.kind == "enum":
            return TypeClass.COMPLEX, (), warnings
        if spec.kind == "subrange":
            # A named, range-restricted scalar: user-defined, no members.
            return TypeClass.COMPLEX, (), warnings

        # Named type: elementary, user definition, FB interface, or unknown.
        key = spec.name.casefold()
        base = key.split("(")[0].strip()
        if base in ELEMENTARY_TYPES:
            return TypeClass.SIMPLE, (), warnings

        if key in seen:
            return TypeClass.COMPLEX, (), warnings
        seen.add(key)

        definition = self.lookup(spec.name)
        if definition is not None:
            _, subs, more = self._classify(definition, base_name, seen)
            warnings.extend(more)
            # User-defined names are Complex even when the resolved
            # definition is a bare scalar alias.
            return TypeClass.COMPLEX, subs, warnings

        members = self.fb_members(spec.name)
        if members is not None:
            subs = tuple(SubVariable(m.name, m.type_name) for m in members)
            return TypeClass.COMPLEX, subs, warnings

        warnings.append(
            AnalysisWarning(
                code="unknown-type",
                message="type %r of %r is not defined; treated as Complex without sub-variables"
                % (spec.name, base_name),
            )
        )
        return TypeClass.COMPLEX, (), warnings

    def _array_subs(self, spec: TypeSpec, base_name: str) -> tuple[SubVariable, ...]:
        """One sub-variable per declared element, flattened a single level."""
        element_name = spec.element.render() if spec.element else "?"
        subs: list[SubVariable] = []
        cap = self.array_sub_cap
        for index in _iter_indices(spec.dims):
            if cap is not None and len(subs) >= cap:
                break
            label = "%s[%s]" % (base_name, ",".join(str(i) for i in index))
            subs.append(SubVariable(label, element_name))
        return tuple(subs)


def _iter_indices(dims: tuple[tuple[int, int], ...]):
    if not dims:
        return
    ranges = [range(lo, hi + 1) for lo, hi in dims]

    def rec(prefix, rest):
        if not rest:
            yield tuple(prefix)
            return
        for v in rest[0]:
            prefix.append(v)
            yield from rec(prefix, rest[1:])
            prefix.pop()

    yield from rec([], ranges)

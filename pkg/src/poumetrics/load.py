"""Input discovery and two-pass sample loading.

A sample may span many files: textual sources carrying POUs, TYPE blocks
and VAR_GLOBAL lists, plus PLCopen XML projects.  Loading runs in two
passes so cross-file knowledge (user types, FB interfaces, globals, the
set of POU names) is complete before any body is analyzed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import plcopen, st
from .errors import AnalysisError, AnalysisWarning, ParseError, XmlMalformed
from .ir import Pou, PouKind, VarSection
from .typesys import FbMember, TypeContext

ST_SUFFIXES = frozenset({".st", ".iecst", ".scl", ".pou", ".typ", ".gvl"})
XML_SUFFIXES = frozenset({".xml"})

_INTERFACE_SECTIONS = (VarSection.INPUT, VarSection.OUTPUT, VarSection.IN_OUT)


@dataclass
class LoadedSample:
    """Everything the metrics stage needs, plus loader diagnostics."""

    pous: list[Pou] = field(default_factory=list)
    warnings: list[AnalysisWarning] = field(default_factory=list)
    context: TypeContext = field(default_factory=TypeContext)
    global_names: frozenset[str] = frozenset()


def discover_inputs(paths) -> list[Path]:
    """Expand files and directories into a sorted list of input files."""
    found: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            for sub in sorted(p.rglob("*")):
                if sub.is_file() and sub.suffix.casefold() in (ST_SUFFIXES | XML_SUFFIXES):
                    found.append(sub)
        elif p.exists():
            found.append(p)
        else:
            raise AnalysisError("input path does not exist: %s" % p)
    seen = set()
    unique = []
    for p in sorted(found, key=str):
        if str(p) not in seen:
            seen.add(str(p))
            unique.append(p)
    return unique


def _looks_like_xml(text: str) -> bool:
    return text.lstrip()[:1] == "<"


def load_sample(paths, array_sub_cap: int | None = None) -> LoadedSample:
    """Load every POU reachable from `paths`.

    Per-POU problems become warnings and the POU is skipped; duplicate
    POU names across the whole sample are an error.
    """
    files = discover_inputs(paths)
    context = TypeContext(array_sub_cap=array_sub_cap)
    warnings: list[AnalysisWarning] = []
    global_names: set[str] = set()
    pou_names: set[str] = set()
    st_units: list[tuple[st.StUnit, str]] = []
    xml_roots: list[tuple[object, str]] = []

    # Pass 1: types, interfaces, globals and the project-wide name set.
    for path in files:
        label = str(path)
        try:
            text = path.read_text(encoding="utf-8-sig")
        except UnicodeDecodeError:
            text = path.read_text(encoding="latin-1")
        is_xml = path.suffix.casefold() in XML_SUFFIXES or (
            path.suffix.casefold() not in ST_SUFFIXES and _looks_like_xml(text)
        )
        if is_xml:
            try:
                root = plcopen.parse_xml(text, label)
            except XmlMalformed as exc:
                warnings.append(AnalysisWarning("xml-malformed", str(exc), label, ""))
                continue
            plcopen.register_project_types(root, context)
            global_names.update(plcopen.project_global_names(root))
            pou_names.update(plcopen.project_pou_names(root))
            xml_roots.append((root, label))
            continue

        try:
            units = st.split_st_units(st.StSource(label, text))
        except ParseError as exc:
            warnings.append(AnalysisWarning("pou-parse-error", str(exc), label, ""))
            continue
        for unit in units:
            if unit.kind == "types":
                st.parse_type_block(unit, context, label)
            elif unit.kind == "globals":
                global_names.update(n.casefold() for n in st.parse_global_names(unit, label))
            else:
                try:
                    name, kind, decls, _ = st.interface_of_unit(unit, label)
                except ParseError as exc:
                    warnings.append(AnalysisWarning("pou-parse-error", str(exc), label, ""))
                    continue
                pou_names.add(name.casefold())
                if kind is PouKind.FUNCTION_BLOCK:
                    members = tuple(
                        FbMember(d.name, d.spec.render(), d.section)
                        for d in decls
                        if d.section in _INTERFACE_SECTIONS
                    )
                    context.register_fb(name, members)
                st_units.append((unit, label))

    frozen_globals = frozenset(global_names)
    frozen_names = frozenset(pou_names)
    pous: list[Pou] = []

    # Pass 2: bodies.
    for unit, label in st_units:
        try:
            pou, ws = st.parse_pou_unit(unit, label, context, frozen_globals)
        except ParseError as exc:
            warnings.append(AnalysisWarning("pou-parse-error", str(exc), label, ""))
            continue
        pous.append(pou)
        warnings.extend(ws)
    for root, label in xml_roots:
        extracted, ws = plcopen.extract_pous(root, label, context, frozen_globals, frozen_names)
        pous.extend(extracted)
        warnings.extend(ws)

    by_name: dict[str, str] = {}
    for pou in pous:
        key = pou.name.casefold()
        if key in by_name:
            raise AnalysisError(
                "duplicate POU name %r (in %s and %s)" % (pou.name, by_name[key], pou.source_ref.path)
            )
        by_name[key] = pou.source_ref.path

    return LoadedSample(pous=pous, warnings=warnings, context=context, global_names=frozen_globals)

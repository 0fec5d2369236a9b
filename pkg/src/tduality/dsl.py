"""Line-oriented input format for models, bundles, fluxes and actions.

Grammar (one construct per section, order matters, names unique per kind,
references resolve to earlier sections):

    # comment
    [complex NAME]
    kind = algebraic | catalog | simplicial
    ranks = 1,0,1              (algebraic; omitted coboundaries are zero)
    delta0 = 1,2;3,4           (rows separated by ';', entries by ',')
    name = cp                  (catalog)
    params = 2
    facets = 0,1,2;0,1,3       (simplicial; one simplex per ';')

    [bundle NAME]
    base = COMPLEXNAME
    euler = 3*u | u - 2*vol | 0 | coeffs=1,0,3

    [flux NAME]
    h = 1,0                    (coordinates in the H^3 generator basis of the
                                bundle the flux is applied to)

    [action NAME]
    type = point_fixed | monopole | multi_monopole | free_hopf | free_bundle
    charges = 3 | 1,1
    truncation = 2
    base = COMPLEXNAME         (free_bundle only)
    euler = ...                (free_bundle only)
    h = 1                      (optional flux coordinates)

A line-oriented format keeps goldens diff-friendly and error positions exact;
structured output is the CLI's --json flag, not the input's job.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .catalog import CATALOG_NAMES, CatalogModel, catalog_build
from .complexes import GradedComplex
from .errors import ParseError, PreconditionError, TdualityError
from .gysin import CupStructure, EulerModel, zero_euler_model
from .matrices import IntMatrix, Vector
from .simplicial import cochain_complex_of, from_facets

SECTION_KINDS = ("complex", "bundle", "flux", "action")

_HEADER_RE = re.compile(r"^\[\s*([a-z_]+)\s+([A-Za-z_][A-Za-z0-9_]*)\s*\]$")
_KEY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


@dataclass(frozen=True)
class Section:
    kind: str
    name: str
    entries: tuple[tuple[str, str], ...]
    line: int = field(compare=False, default=0)  # diagnostics only

    def get(self, key: str) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return None


@dataclass(frozen=True)
class SpecFile:
    sections: tuple[Section, ...]

    def find(self, kind: str, name: str) -> Optional[Section]:
        for s in self.sections:
            if s.kind == kind and s.name == name:
                return s
        return None


def parse_spec(text: str) -> SpecFile:
    sections: list[Section] = []
    current: Optional[tuple[str, str, int, list[tuple[str, str]]]] = None
    seen: set[tuple[str, str]] = set()

    def close_current():
        nonlocal current
        if current is not None:
            kind, name, line, entries = current
            sections.append(Section(kind, name, tuple(entries), line))
            current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = _HEADER_RE.match(stripped)
            if not m:
                raise ParseError("malformed section header", lineno, col)
            kind, name = m.group(1), m.group(2)
            if kind not in SECTION_KINDS:
                raise ParseError(f"unknown section kind {kind!r}", lineno, col)
            if (kind, name) in seen:
                raise ParseError(f"duplicate {kind} name {name!r}", lineno, col)
            seen.add((kind, name))
            close_current()
            current = (kind, name, lineno, [])
            continue
        m = _KEY_RE.match(stripped)
        if not m:
            raise ParseError("expected 'key = value'", lineno, col)
        if current is None:
            raise ParseError("key outside of any section", lineno, col)
        current[3].append((m.group(1), m.group(2).strip()))
    close_current()
    return SpecFile(tuple(sections))


def serialize_spec(spec: SpecFile) -> str:
    lines = []
    for s in spec.sections:
        lines.append(f"[{s.kind} {s.name}]")
        for k, v in s.entries:
            lines.append(f"{k} = {v}")
        lines.append("")
    return "\n".join(lines)


def _parse_int_list(value: str, section: Section, key: str) -> tuple[int, ...]:
    value = value.strip()
    if not value:
        return ()
    try:
        return tuple(int(x.strip()) for x in value.split(","))
    except ValueError:
        raise ParseError(
            f"{key} in [{section.kind} {section.name}] must be comma-separated integers",
            section.line,
        )


def _parse_matrix(value: str, rows: int, cols: int, section: Section, key: str) -> IntMatrix:
    value = value.strip()
    if not value:
        if rows == 0:
            return IntMatrix.zeros(rows, cols)
        raise ParseError(
            f"{key} in [{section.kind} {section.name}] needs {rows} rows",
            section.line,
        )
    data = []
    for chunk in value.split(";"):
        data.append(_parse_int_list(chunk, section, key))
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ParseError(
            f"{key} in [{section.kind} {section.name}] must be {rows} rows of "
            f"{cols} entries",
            section.line,
        )
    return IntMatrix.from_rows(data, cols=cols)


_TERM_RE = re.compile(r"([+-]?)\s*(?:(\d+)\s*\*\s*)?([A-Za-z_][A-Za-z0-9_]*)")


@dataclass(frozen=True)
class EulerSpec:
    """Either label coefficients or an explicit degree-2 cocycle."""

    coeffs: Optional[dict[str, int]] = None
    cocycle: Optional[Vector] = None


def parse_euler_value(value: str, section: Section) -> EulerSpec:
    value = value.strip()
    if value.startswith("coeffs="):
        return EulerSpec(cocycle=_parse_int_list(value[len("coeffs="):], section, "euler"))
    if value == "0":
        return EulerSpec(coeffs={})
    coeffs: dict[str, int] = {}
    pos = 0
    compact = value.replace(" ", "")
    while pos < len(compact):
        m = _TERM_RE.match(compact, pos)
        if not m or m.start() != pos:
            raise ParseError(
                f"cannot parse euler expression {value!r}", section.line
            )
        sign = -1 if m.group(1) == "-" else 1
        mult = int(m.group(2)) if m.group(2) else 1
        label = m.group(3)
        coeffs[label] = coeffs.get(label, 0) + sign * mult
        pos = m.end()
    return EulerSpec(coeffs=coeffs)


@dataclass(frozen=True)
class ActionSpec:
    kind: str
    charges: tuple[int, ...]
    truncation: int
    base: Optional[str]
    euler: Optional[EulerSpec]
    flux: Optional[Vector]


@dataclass(frozen=True)
class ResolvedSpec:
    source: SpecFile
    complexes: dict[str, CatalogModel]
    bundles: dict[str, EulerModel]
    fluxes: dict[str, Vector]
    actions: dict[str, ActionSpec]


def _require(section: Section, key: str) -> str:
    v = section.get(key)
    if v is None:
        raise ParseError(
            f"[{section.kind} {section.name}] is missing key {key!r}", section.line
        )
    return v


def _resolve_complex(section: Section) -> CatalogModel:
    kind = _require(section, "kind")
    if kind == "catalog":
        name = _require(section, "name")
        if name not in CATALOG_NAMES:
            raise ParseError(
                f"unknown catalog model {name!r} in [complex {section.name}]",
                section.line,
            )
        params = _parse_int_list(section.get("params") or "", section, "params")
        try:
            return catalog_build(name, params)
        except PreconditionError as exc:
            raise ParseError(str(exc), section.line)
    if kind == "simplicial":
        facets_value = _require(section, "facets")
        facets = [
            _parse_int_list(chunk, section, "facets")
            for chunk in facets_value.split(";")
        ]
        try:
            k = from_facets(facets)
        except PreconditionError as exc:
            raise ParseError(str(exc), section.line)
        return CatalogModel(
            f"user:{section.name}", (), cochain_complex_of(k),
            CupStructure((), (), (), simplicial=k), simplicial=k,
        )
    if kind == "algebraic":
        ranks = _parse_int_list(_require(section, "ranks"), section, "ranks")
        if any(r < 0 for r in ranks):
            raise ParseError(
                f"negative rank in [complex {section.name}]", section.line
            )
        deltas = []
        for n in range(max(len(ranks) - 1, 0)):
            value = section.get(f"delta{n}")
            if value is None:
                deltas.append(IntMatrix.zeros(ranks[n + 1], ranks[n]))
            else:
                deltas.append(_parse_matrix(value, ranks[n + 1], ranks[n], section, f"delta{n}"))
        cx = GradedComplex(tuple(ranks), tuple(deltas))
        return CatalogModel(
            f"user:{section.name}", (), cx, CupStructure((), (), ())
        )
    raise ParseError(
        f"unknown complex kind {kind!r} in [complex {section.name}]", section.line
    )


def build_euler_model(entry: CatalogModel, spec: EulerSpec) -> EulerModel:
    from .catalog import euler_model_from_cocycle, euler_model_from_label_coeffs

    if spec.cocycle is not None:
        return euler_model_from_cocycle(entry, spec.cocycle)
    assert spec.coeffs is not None
    if not spec.coeffs:
        provenance = "simplicial-AW" if entry.simplicial is not None else "catalog-algebraic"
        return zero_euler_model(entry.complex, entry.cup, provenance)
    return euler_model_from_label_coeffs(entry, spec.coeffs)


def resolve(spec: SpecFile) -> ResolvedSpec:
    """Build model objects from the AST; declared-before-use enforced."""
    complexes: dict[str, CatalogModel] = {}
    bundles: dict[str, EulerModel] = {}
    fluxes: dict[str, Vector] = {}
    actions: dict[str, ActionSpec] = {}

    for section in spec.sections:
        if section.kind == "complex":
            complexes[section.name] = _resolve_complex(section)
        elif section.kind == "bundle":
            base_name = _require(section, "base")
            if base_name not in complexes:
                raise ParseError(
                    f"bundle {section.name!r} references undeclared complex {base_name!r}",
                    section.line,
                )
            euler_spec = parse_euler_value(_require(section, "euler"), section)
            try:
                bundles[section.name] = build_euler_model(complexes[base_name], euler_spec)
            except ParseError:
                raise
            except TdualityError:
                raise
        elif section.kind == "flux":
            fluxes[section.name] = _parse_int_list(_require(section, "h"), section, "h")
        elif section.kind == "action":
            kind = _require(section, "type")
            charges = _parse_int_list(section.get("charges") or "", section, "charges")
            truncation_value = section.get("truncation")
            truncation = int(truncation_value) if truncation_value else 1
            base_name = section.get("base")
            if kind == "free_bundle":
                if base_name is None:
                    raise ParseError(
                        f"free_bundle action {section.name!r} needs a base",
                        section.line,
                    )
                if base_name not in complexes:
                    raise ParseError(
                        f"action {section.name!r} references undeclared complex {base_name!r}",
                        section.line,
                    )
            euler_value = section.get("euler")
            euler_spec = (
                parse_euler_value(euler_value, section) if euler_value is not None else None
            )
            flux_value = section.get("h")
            flux = _parse_int_list(flux_value, section, "h") if flux_value is not None else None
            actions[section.name] = ActionSpec(
                kind, charges, truncation, base_name, euler_spec, flux
            )
    return ResolvedSpec(spec, complexes, bundles, fluxes, actions)

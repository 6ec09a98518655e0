"""Problem documents: parsing, validation, and canonical emission.

A problem is a JSON object with a ``cone`` and a ``system`` section,
optionally a switching ``signal`` and an initial state ``x0``.
Structural mistakes raise :class:`ParseError` with a path into the
document; violated cone or family invariants raise
:class:`ValidationError` with the originating message, except jump-pair
failures which surface directly so the pair index is preserved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cones import DEFAULT_TOL, PolyhedralCone, construct_cone
from .errors import (
    ConeJsrError,
    NotCommuting,
    NotProjection,
    ParseError,
    ValidationError,
)
from .semigroup import (
    CONTINUOUS,
    DISCRETE,
    JUMP,
    MatrixFamily,
    continuous_family,
    discrete_family,
    validate_jump_family,
)

_CONE_KINDS = ("orthant", "simplicial", "general")
_SEMANTICS = (DISCRETE, CONTINUOUS, JUMP)


@dataclass(frozen=True)
class ProblemSpec:
    cone: PolyhedralCone
    family: MatrixFamily
    signal: tuple | None
    x0: np.ndarray | None
    document: dict


def _expect(obj, kind, path, what):
    if not isinstance(obj, kind):
        raise ParseError(path, f"{what} must be a {kind.__name__}")
    return obj


def _numeric_matrix(obj, path) -> list:
    rows = _expect(obj, list, path, "matrix")
    if not rows:
        raise ParseError(path, "matrix must not be empty")
    width = None
    out = []
    for i, row in enumerate(rows):
        row = _expect(row, list, f"{path}[{i}]", "matrix row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{path}[{i}]", "matrix rows must have equal length")
        try:
            out.append([float(v) for v in row])
        except (TypeError, ValueError):
            raise ParseError(f"{path}[{i}]", "matrix entries must be numbers") from None
    return out


def _square(mat: list, n: int, path: str) -> np.ndarray:
    arr = np.array(mat, dtype=float)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{path}: matrices must be square, got {arr.shape}")
    if arr.shape[0] != n:
        raise ValidationError(
            f"{path}: matrix has dimension {arr.shape[0]}, cone has {n}"
        )
    return arr


def _parse_cone(obj, tol: float) -> tuple[PolyhedralCone, dict]:
    cone_doc = _expect(obj, dict, "$.cone", "cone section")
    kind = cone_doc.get("kind")
    if kind not in _CONE_KINDS:
        raise ParseError("$.cone.kind", f"kind must be one of {', '.join(_CONE_KINDS)}")
    spec = {"kind": kind}
    if kind == "orthant":
        dim = cone_doc.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise ParseError("$.cone.dim", "orthant cones need an integer dim")
        spec["dim"] = dim
    else:
        spec["generators"] = _numeric_matrix(cone_doc.get("generators"), "$.cone.generators")
        if cone_doc.get("facets") is not None:
            spec["facets"] = _numeric_matrix(cone_doc.get("facets"), "$.cone.facets")
    try:
        cone = construct_cone(spec, tol)
    except ConeJsrError as exc:
        raise ValidationError(f"cone: {exc}") from exc
    canonical = {"kind": cone.kind, "dim": cone.dim}
    if cone.kind != "orthant":
        canonical["generators"] = cone.generators.tolist()
    if cone.kind == "general":
        canonical["facets"] = cone.facet_normals.tolist()
    return cone, canonical


def _parse_system(obj, cone: PolyhedralCone, tol: float) -> tuple[MatrixFamily, dict]:
    sys_doc = _expect(obj, dict, "$.system", "system section")
    semantics = sys_doc.get("semantics")
    if semantics not in _SEMANTICS:
        raise ParseError(
            "$.system.semantics", f"semantics must be one of {', '.join(_SEMANTICS)}"
        )
    labels = sys_doc.get("labels")
    if labels is not None:
        labels = [str(v) for v in _expect(labels, list, "$.system.labels", "labels")]
    canonical: dict = {"semantics": semantics}
    if semantics == JUMP:
        pairs_doc = _expect(sys_doc.get("pairs"), list, "$.system.pairs", "pairs")
        if not pairs_doc:
            raise ParseError("$.system.pairs", "at least one pair is required")
        pairs = []
        for k, entry in enumerate(pairs_doc):
            entry = _expect(entry, dict, f"$.system.pairs[{k}]", "pair")
            A = _square(_numeric_matrix(entry.get("A"), f"$.system.pairs[{k}].A"),
                        cone.dim, f"$.system.pairs[{k}].A")
            Pi = _square(_numeric_matrix(entry.get("Pi"), f"$.system.pairs[{k}].Pi"),
                         cone.dim, f"$.system.pairs[{k}].Pi")
            pairs.append((A, Pi))
        try:
            family = validate_jump_family(pairs, labels=labels, tol=tol)
        except (NotProjection, NotCommuting):
            raise  # pair index must survive unchanged
        except ConeJsrError as exc:
            raise ValidationError(f"system: {exc}") from exc
        canonical["pairs"] = [
            {"A": A.tolist(), "Pi": Pi.tolist()} for A, Pi in family.pairs
        ]
    else:
        mats_doc = _expect(sys_doc.get("matrices"), list, "$.system.matrices", "matrices")
        if not mats_doc:
            raise ParseError("$.system.matrices", "at least one matrix is required")
        mats = [
            _square(_numeric_matrix(m, f"$.system.matrices[{k}]"), cone.dim,
                    f"$.system.matrices[{k}]")
            for k, m in enumerate(mats_doc)
        ]
        try:
            build = discrete_family if semantics == DISCRETE else continuous_family
            family = build(mats, labels=labels)
        except ConeJsrError as exc:
            raise ValidationError(f"system: {exc}") from exc
        canonical["matrices"] = [A.tolist() for A in family.matrices]
    if labels is not None:
        canonical["labels"] = list(labels)
    return family, canonical


def parse_problem(text: str, tol: float = DEFAULT_TOL) -> ProblemSpec:
    """Parse and validate a problem document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from exc
    doc = _expect(doc, dict, "$", "problem document")
    if "cone" not in doc:
        raise ParseError("$.cone", "missing cone section")
    if "system" not in doc:
        raise ParseError("$.system", "missing system section")
    cone, cone_doc = _parse_cone(doc["cone"], tol)
    family, system_doc = _parse_system(doc["system"], cone, tol)
    canonical = {"cone": cone_doc, "system": system_doc}

    signal = None
    if doc.get("signal") is not None:
        entries = _expect(doc["signal"], list, "$.signal", "signal")
        signal = []
        for i, entry in enumerate(entries):
            entry = _expect(entry, list, f"$.signal[{i}]", "signal entry")
            if len(entry) != 2:
                raise ParseError(f"$.signal[{i}]", "signal entries are [index, duration]")
            idx, dur = entry
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise ParseError(f"$.signal[{i}]", "signal index must be an integer")
            if not 0 <= idx < family.size:
                raise ValidationError(
                    f"$.signal[{i}]: index {idx} out of range for {family.size} members"
                )
            try:
                dur = float(dur)
            except (TypeError, ValueError):
                raise ParseError(f"$.signal[{i}]", "duration must be a number") from None
            if dur < 0:
                raise ValidationError(f"$.signal[{i}]: durations must be nonnegative")
            signal.append((idx, dur))
        signal = tuple(signal)
        canonical["signal"] = [[i, d] for i, d in signal]

    x0 = None
    if doc.get("x0") is not None:
        vec = _expect(doc["x0"], list, "$.x0", "initial state")
        try:
            x0 = np.array([float(v) for v in vec], dtype=float)
        except (TypeError, ValueError):
            raise ParseError("$.x0", "initial state entries must be numbers") from None
        if x0.shape != (cone.dim,):
            raise ValidationError(
                f"$.x0: state has dimension {x0.shape[0]}, cone has {cone.dim}"
            )
        canonical["x0"] = x0.tolist()

    return ProblemSpec(cone, family, signal, x0, canonical)


def emit_problem(spec: ProblemSpec) -> str:
    """Serialize a spec so that re-parsing reproduces it."""
    return json.dumps(spec.document, indent=2, sort_keys=True)

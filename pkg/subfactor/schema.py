"""
JSON file formats.

group:  {"schema": 1, "name": ..., "mult": [[...]], "labels": [...]}
        {"schema": 1, "name": ..., "permutations": [[...], ...]}
rep:    {"schema": 1, "group": ..., "name": ..., "dim": r,
         "matrices": {label: [[entry, ...], ...]}, "cocycle": {label: {label: entry}}}
algebra: {"schema": 1, "dim": m, "matrices": [[[entry, ...], ...], ...]}

A matrix entry is a number or an [re, im] pair. Rep matrices may be given on generators only,
the domain is the subgroup they generate.
"""

from collections import deque
from pathlib import Path
from typing import Any
import json
import logging

import numpy as np

import subfactor.settings as settings
from subfactor.errors import SchemaError, ValidationError
from subfactor.groups import FiniteGroup, Subgroup, load_group
from subfactor.reps import ProjectiveRep

logger = logging.getLogger(__name__)


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    # + 0.0 folds -0.0 into 0.0 so output is byte-stable
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _decode_entry(x: Any, path: str, field: str) -> complex:
    if isinstance(x, bool):
        raise SchemaError("boolean is not a matrix entry", path, field)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise SchemaError(f"matrix entry {x!r} is neither a number nor an [re, im] pair", path, field)


def decode_matrix(obj: Any, path: str, field: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(row, list) for row in obj):
        raise SchemaError("matrix must be a non-empty list of rows", path, field)
    n = dim or len(obj)
    if len(obj) != n or any(len(row) != n for row in obj):
        raise SchemaError(f"matrix must be {n}x{n}", path, field)
    return np.array([[_decode_entry(x, path, field) for x in row] for row in obj], dtype=complex)


def read_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        dct = json.loads(path.read_text())
    except FileNotFoundError:
        raise SchemaError("file not found", str(path)) from None
    except OSError as e:
        raise SchemaError(f"cannot read file: {e.strerror or e}", str(path)) from None
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SchemaError(f"invalid JSON: {e}", str(path)) from None
    if not isinstance(dct, dict):
        raise SchemaError("top level must be an object", str(path))
    version = dct.get("schema", settings.SCHEMA_VERSION)
    if version != settings.SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema version {version}, expected {settings.SCHEMA_VERSION}", str(path), "schema"
        )
    return dct


def load_group_file(path: str | Path, max_order: int = settings.MAX_GROUP_ORDER) -> FiniteGroup:
    dct = read_json(path)
    dct.setdefault("name", Path(path).stem)
    try:
        return load_group(dct, max_order)
    except ValidationError as e:
        e.path = str(path)
        if getattr(e, "field", None) is None:
            e.field = "mult" if "mult" in dct else "permutations"
        raise


def _split_top_level(text: str) -> list[str]:
    parts, depth, current = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def parse_subgroup(G: FiniteGroup, text: str | None) -> Subgroup:
    """'all', or comma-separated element labels; the result is the subgroup they generate."""
    if text is None or text.strip().lower() == "all":
        return G.whole
    elements = [G.index_of(label) for label in _split_top_level(text)]
    H = G.generated(elements)
    if len(H) > len(set(elements) | {G.identity}):
        logger.info(f"subgroup {text!r} generates {H.labels()}")
    return H


def load_rep_file(path: str | Path, G: FiniteGroup, tol: float = settings.TOLERANCE) -> ProjectiveRep:
    path_s = str(path)
    dct = read_json(path)
    raw = dct.get("matrices")
    if not isinstance(raw, dict) or not raw:
        raise SchemaError("'matrices' must be a non-empty object keyed by element label", path_s, "matrices")
    dim = dct.get("dim")
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        raise SchemaError("'dim' must be a positive integer", path_s, "dim")

    given: dict[int, np.ndarray] = {}
    for label, obj in raw.items():
        try:
            g = G.index_of(label)
        except ValidationError as e:
            raise SchemaError(str(e), path_s, f"matrices.{label}") from e
        m = decode_matrix(obj, path_s, f"matrices.{label}", dim)
        dim = dim or len(m)
        given[g] = m

    domain = G.generated(given)
    mats = dict(given)
    mats.setdefault(G.identity, np.eye(dim, dtype=complex))
    queue = deque(mats)
    while queue:
        g = queue.popleft()
        for s in given:
            gs = G.mul(g, s)
            if gs not in mats:
                mats[gs] = mats[g] @ given[s]
                queue.append(gs)

    name = str(dct.get("name", Path(path).stem))
    stack = np.array([mats[g] for g in domain.elements])
    try:
        rep = ProjectiveRep.from_matrices(domain, stack, name, tol)
    except ValidationError as e:
        e.path, e.field = path_s, "matrices"
        raise

    cocycle = dct.get("cocycle") or {}
    if not isinstance(cocycle, dict):
        raise SchemaError("'cocycle' must be an object keyed by element label", path_s, "cocycle")
    for g_label, row in cocycle.items():
        if not isinstance(row, dict):
            raise SchemaError("cocycle rows must be objects keyed by element label", path_s, f"cocycle.{g_label}")
        for h_label, entry in row.items():
            field = f"cocycle.{g_label}.{h_label}"
            try:
                g, h = G.index_of(g_label), G.index_of(h_label)
                expected = rep.cocycle(g, h)
            except ValidationError as e:
                raise SchemaError(str(e), path_s, field) from e
            declared = _decode_entry(entry, path_s, field)
            if abs(declared - expected) > max(tol, 1e-8):
                raise SchemaError(f"declared cocycle {declared} but matrices give {expected:.6g}", path_s, field)
    logger.info(f"loaded representation {name} of dim {rep.dim} on {domain!r} from {path_s}")
    return rep


def load_algebra_file(path: str | Path) -> np.ndarray:
    path_s = str(path)
    dct = read_json(path)
    raw = dct.get("matrices")
    if not isinstance(raw, list) or not raw:
        raise SchemaError("'matrices' must be a non-empty list", path_s, "matrices")
    dim = dct.get("dim")
    mats = [decode_matrix(obj, path_s, f"matrices[{i}]", dim) for i, obj in enumerate(raw)]
    if len({len(m) for m in mats}) != 1:
        raise SchemaError("all matrices must have the same size", path_s, "matrices")
    return np.array(mats)


def error_json(e: Exception) -> str:
    return json.dumps(
        {
            "schema": settings.SCHEMA_VERSION,
            "error": type(e).__name__,
            "message": str(e),
            "path": getattr(e, "path", None),
            "field": getattr(e, "field", None),
        }
    )

"""JSON file formats for complexes, groups, cocycles, maps, homomorphisms and squares.

Every object is a JSON object.  References to other objects are either an
inline object, a path (relative to the referring file), or ``corpus:NAME``.
The formats, by example::

    complex   {"vertices": ["0", "1", "2"], "facets": [["0", "1"], ...], "basepoint": "0"}
    group     {"name": "Z3", "elements": ["0", "1", "2"], "table": [[0, 1, 2], ...]}
              {"name": "S3", "permutations": [[1, 0, 2], [1, 2, 0]]}
              {"generators": ["a", "b"], "relators": ["a b A B"]}      (presented)
              {"pi1": <complex ref>}                                  (edge-path group)
    cocycle   {"complex": <ref>, "group": <ref>, "values": [["0", "1", "g"], ...]}
    map       {"source": <ref>, "target": <ref>, "vertex_map": {"0": "0", ...}, "pointed": true}
    hom       {"source": <ref>, "target": <ref>, "images": {"gen": "elem", ...}}
    square    {"X": <ref>, "Y": <ref>, "map": <ref>, "G": <ref>, "H": <ref>, "hom": <ref>}
    manifest  {"jobs": [{"command": "classify", "args": [...], "options": {...}, "output": "..."}]}

Files written by :func:`dump` are canonical: loading and saving them again
reproduces the same bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import corpus
from .bundles import Cocycle
from .complex import SimplicialComplex, SimplicialMap
from .groups import FiniteGroup, FinitelyPresentedGroup, GroupHom, format_word, parse_word
from .loops import EdgePathGroup, edge_path_group


class InputError(ValueError):
    """Malformed or missing input; the CLI exits with status 1."""


# ---------------------------------------------------------------------------
# raw JSON


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def dumps(obj: dict) -> str:
    """Canonical text: one top-level key per line, values on a single line."""
    if not isinstance(obj, dict):
        return json.dumps(obj, ensure_ascii=False) + "\n"
    if not obj:
        return "{}\n"
    lines = [f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in obj.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def dump(obj: dict, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")


def _require(obj, key, what):
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    if key not in obj:
        raise InputError(f"{what} is missing the field {key!r}")
    return obj[key]


def _resolve(ref, base: Path, table: dict, what: str):
    """Return (data dict, directory for nested refs) or a corpus object."""
    if isinstance(ref, dict):
        return ref, base
    if not isinstance(ref, str):
        raise InputError(f"{what} reference must be a string or an object")
    if ref.startswith("corpus:"):
        name = ref[len("corpus:"):]
        if name not in table:
            raise InputError(f"unknown corpus {what} {name!r}")
        return table[name], None
    path = (base / ref) if not Path(ref).is_absolute() else Path(ref)
    return read_json(path), path.parent


# ---------------------------------------------------------------------------
# complexes


def complex_to_dict(K: SimplicialComplex) -> dict:
    out = {"vertices": [str(v) for v in K.vertices], "facets": [[str(v) for v in f] for f in K.facets]}
    if K.basepoint is not None:
        out["basepoint"] = str(K.basepoint)
    return out


def complex_from_dict(d: dict) -> SimplicialComplex:
    verts = _require(d, "vertices", "complex")
    facets = _require(d, "facets", "complex")
    if not isinstance(verts, list) or not isinstance(facets, list):
        raise InputError("complex vertices and facets must be lists")
    bp = d.get("basepoint")
    try:
        return SimplicialComplex([str(v) for v in verts], [[str(v) for v in f] for f in facets],
                                 None if bp is None else str(bp))
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid complex: {exc}") from None


def load_complex(ref, base: Path = Path(".")) -> SimplicialComplex:
    data, _ = _resolve(ref, Path(base), corpus.complexes(), "complex")
    return data if isinstance(data, SimplicialComplex) else complex_from_dict(data)


# ---------------------------------------------------------------------------
# groups


def group_to_dict(G) -> dict:
    if isinstance(G, EdgePathGroup):
        return {"pi1": complex_to_dict(G.complex)}
    if isinstance(G, FinitelyPresentedGroup):
        return {"generators": list(G.generators), "relators": [format_word(r) for r in G.relators]}
    return {"name": G.name, "elements": list(G.names), "table": [list(r) for r in G.table]}


def load_group(ref, base: Path = Path(".")):
    data, where = _resolve(ref, Path(base), corpus.groups(), "group")
    if isinstance(data, FiniteGroup):
        return data
    try:
        if "pi1" in data:
            return edge_path_group(load_complex(data["pi1"], where))
        if "table" in data:
            names = data.get("elements") or [str(i) for i in range(len(data["table"]))]
            return FiniteGroup(tuple(str(n) for n in names), data["table"], data.get("name", ""))
        if "permutations" in data:
            return FiniteGroup.from_permutations(data["permutations"], data.get("name", ""))
        if "generators" in data:
            rels = tuple(parse_word(r) for r in data.get("relators", []))
            return FinitelyPresentedGroup(tuple(data["generators"]), rels, data.get("name", ""))
    except InputError:
        raise
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        raise InputError(f"invalid group: {exc}") from None
    raise InputError("group needs one of 'table', 'permutations', 'generators' or 'pi1'")


def _element(G, name):
    if isinstance(G, FinitelyPresentedGroup):
        word = parse_word(str(name))
        unknown = [g for g, _ in word if g not in G.generator_index]
        if unknown:
            raise InputError(f"unknown generator {unknown[0]!r}")
        return word
    try:
        return G.element(str(name))
    except (KeyError, ValueError):
        raise InputError(f"{name!r} is not an element of {G.name or 'the group'}") from None


def element_name(G, x) -> str:
    return format_word(x) if isinstance(G, FinitelyPresentedGroup) else G.names[x]


# ---------------------------------------------------------------------------
# cocycles, maps, homomorphisms


def cocycle_to_dict(c: Cocycle, complex_ref=None, group_ref=None) -> dict:
    G = c.group
    values = [[str(a), str(b), element_name(G, x)] for a, b, x in c.triples() if x != G.identity]
    return {
        "complex": complex_ref if complex_ref is not None else complex_to_dict(c.base),
        "group": group_ref if group_ref is not None else group_to_dict(G),
        "values": values,
    }


def load_cocycle(ref, base: Path = Path(".")) -> Cocycle:
    data, where = _resolve(ref, Path(base), {}, "cocycle")
    K = load_complex(_require(data, "complex", "cocycle"), where)
    G = load_group(_require(data, "group", "cocycle"), where)
    triples = []
    for entry in data.get("values", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError("cocycle values must be [u, v, element] triples")
        u, v, x = entry
        triples.append((str(u), str(v), _element(G, x)))
    try:
        return Cocycle.from_triples(K, G, triples)
    except ValueError as exc:
        raise InputError(f"invalid cocycle: {exc}") from None


def map_to_dict(f: SimplicialMap, source_ref=None, target_ref=None) -> dict:
    return {
        "source": source_ref if source_ref is not None else complex_to_dict(f.source),
        "target": target_ref if target_ref is not None else complex_to_dict(f.target),
        "vertex_map": {str(v): str(f(v)) for v in f.source.vertices},
        "pointed": f.pointed,
    }


def load_map(ref, base: Path = Path(".")) -> SimplicialMap:
    data, where = _resolve(ref, Path(base), corpus.maps(), "map")
    if isinstance(data, SimplicialMap):
        return data
    X = load_complex(_require(data, "source", "map"), where)
    Y = load_complex(_require(data, "target", "map"), where)
    vm = _require(data, "vertex_map", "map")
    try:
        return SimplicialMap(X, Y, {str(k): str(v) for k, v in vm.items()}, bool(data.get("pointed", False)))
    except (ValueError, AttributeError) as exc:
        raise InputError(f"invalid map: {exc}") from None


def hom_to_dict(a: GroupHom, source_ref=None, target_ref=None) -> dict:
    S, T = a.source, a.target
    if isinstance(S, FinitelyPresentedGroup):
        images = {g: element_name(T, y) for g, y in zip(S.generators, a.images)}
    else:
        images = {S.names[x]: element_name(T, a(x)) for x in S}
    return {
        "source": source_ref if source_ref is not None else group_to_dict(S),
        "target": target_ref if target_ref is not None else group_to_dict(T),
        "images": images,
    }


def load_hom(ref, base: Path = Path(".")) -> GroupHom:
    data, where = _resolve(ref, Path(base), corpus.homs(), "hom")
    if isinstance(data, GroupHom):
        return data
    S = load_group(_require(data, "source", "hom"), where)
    T = load_group(_require(data, "target", "hom"), where)
    images = _require(data, "images", "hom")
    if not isinstance(images, dict):
        raise InputError("hom images must be an object")
    try:
        if isinstance(S, FinitelyPresentedGroup):
            missing = [g for g in S.generators if g not in images]
            if missing:
                raise InputError(f"no image for generator {missing[0]!r}")
            return GroupHom(S, T, tuple(_element(T, images[g]) for g in S.generators))
        gens = {_element(S, k): _element(T, v) for k, v in images.items()}
        return GroupHom.from_generator_images(S, T, gens)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"invalid hom: {exc}") from None


def load_square(ref, base: Path = Path(".")) -> dict:
    data, where = _resolve(ref, Path(base), {}, "square")
    out = {
        "X": load_complex(_require(data, "X", "square"), where),
        "Y": load_complex(_require(data, "Y", "square"), where),
        "map": load_map(_require(data, "map", "square"), where),
        "G": load_group(_require(data, "G", "square"), where),
        "H": load_group(_require(data, "H", "square"), where),
        "hom": load_hom(_require(data, "hom", "square"), where),
    }
    if "stage" in data:
        out["stage"] = int(data["stage"])
    return out

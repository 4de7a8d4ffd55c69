"""JSON algebra and morphism files, and the shipped catalog."""

import json
from importlib import resources
from pathlib import Path

from ..errors import DivisionByZero, InvalidAlgebra, ParseError
from ..graded import GradedSpace
from ..hochschild import AlgebraMorphism, AlgebraPresentation, require_valid, require_valid_morphism
from ..linalg import rational

CATALOG_ALGEBRAS = ("k", "dual", "trunc3", "upper2", "z2", "dg")
CATALOG_MORPHISMS = ("id_k", "id_dual", "id_trunc3", "id_upper2", "id_z2", "id_dg",
                     "unit_dual", "unit_trunc3", "unit_upper2", "unit_z2", "unit_dg",
                     "trunc3_to_dual")


def _scalar(value, where):
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise ParseError(f"scalar must be an integer or a \"p/q\" string, got {value!r}", where)
    try:
        return rational(value)
    except DivisionByZero as e:
        raise ParseError(str(e), where) from None
    except ValueError:
        raise ParseError(f"malformed rational {value!r}", where) from None


def _vector(entries, where, known):
    if not isinstance(entries, list):
        raise ParseError("expected a list of [basis, coefficient] pairs", where)
    out = {}
    for i, pair in enumerate(entries):
        at = f"{where}[{i}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError("expected [basis, coefficient]", at)
        name, c = pair
        if name not in known:
            raise ParseError(f"unknown basis element {name!r}", at)
        c = _scalar(c, f"{at}[1]")
        if c:
            out[name] = out.get(name, 0) + c
    return {k: v for k, v in out.items() if v}


def _require(obj, key, where, kind):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    if not isinstance(obj[key], kind):
        raise ParseError(f"field {key!r} has the wrong type", f"{where}.{key}")
    return obj[key]


def parse_algebra(obj, source="<algebra>", validate=True):
    if not isinstance(obj, dict):
        raise ParseError("algebra file must hold a JSON object", source)
    field = obj.get("field", "Q")
    if field != "Q":
        raise ParseError(f"unsupported field {field!r}; only Q", f"{source}.field")
    basis = []
    for i, entry in enumerate(_require(obj, "basis", source, list)):
        at = f"{source}.basis[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)
                and isinstance(entry[1], int) and not isinstance(entry[1], bool)):
            raise ParseError("expected [name, degree]", at)
        basis.append(tuple(entry))
    names = {b for b, _ in basis}
    if len(names) != len(basis):
        raise ParseError("duplicate basis names", f"{source}.basis")
    mult = {}
    for i, entry in enumerate(_require(obj, "mult", source, list)):
        at = f"{source}.mult[{i}]"
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError("expected [left, right, output]", at)
        x, y, out = entry
        for j, z in ((0, x), (1, y)):
            if z not in names:
                raise ParseError(f"unknown basis element {z!r}", f"{at}[{j}]")
        if (x, y) in mult:
            raise ParseError(f"product {x}*{y} given twice", at)
        mult[(x, y)] = _vector(out, f"{at}[2]", names)
    diff = {}
    for i, entry in enumerate(obj.get("diff", [])):
        at = f"{source}.diff[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError("expected [input, output]", at)
        x, out = entry
        if x not in names:
            raise ParseError(f"unknown basis element {x!r}", f"{at}[0]")
        diff[x] = _vector(out, f"{at}[1]", names)
    unit = obj.get("unit")
    if unit is not None and unit not in names:
        raise ParseError(f"unit {unit!r} is not a basis element", f"{source}.unit")
    name = obj.get("name") or Path(str(source)).stem
    p = AlgebraPresentation(GradedSpace(basis, name), mult, diff, unit, name=name)
    if validate:
        require_valid(p)
    return p


def _resolve(ref, base, source, key):
    if isinstance(ref, dict):
        return parse_algebra(ref, f"{source}.{key}")
    if not isinstance(ref, str):
        raise ParseError("expected a path or an inline algebra object", f"{source}.{key}")
    path = (base / ref) if base is not None else Path(ref)
    if not path.exists() and base is not None:
        path = Path(ref)
    if not path.exists():
        path = catalog_file(Path(ref).name)
    return load_file(path)


def parse_morphism(obj, source="<morphism>", base=None, validate=True):
    if not isinstance(obj, dict):
        raise ParseError("morphism file must hold a JSON object", source)
    dom = _resolve(_require(obj, "dom", source, (str, dict)), base, source, "dom")
    cod = _resolve(_require(obj, "cod", source, (str, dict)), base, source, "cod")
    table = {}
    for i, entry in enumerate(_require(obj, "map", source, list)):
        at = f"{source}.map[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError("expected [input, output]", at)
        x, out = entry
        if x not in dom.space:
            raise ParseError(f"unknown basis element {x!r}", f"{at}[0]")
        table[x] = _vector(out, f"{at}[1]", set(cod.labels))
    f = AlgebraMorphism(dom, cod, table, name=obj.get("name", ""))
    if validate:
        require_valid_morphism(f)
    return f


def catalog_file(name):
    if not name.endswith(".json"):
        name += ".json"
    ref = resources.files("binfty") / "catalog" / name
    if not ref.is_file():
        raise ParseError(f"no such file or catalog entry: {name}")
    return Path(str(ref))


def load_file(path, validate=True):
    """Load an algebra or a morphism file (a morphism file has a "map" field)."""
    path = Path(path)
    if not path.exists():
        path = catalog_file(path.name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(str(e), str(path)) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"{path}:{e.lineno}:{e.colno}") from None
    if isinstance(obj, dict) and "map" in obj:
        return parse_morphism(obj, path.name, base=path.parent, validate=validate)
    return parse_algebra(obj, path.name, validate=validate)


def parse_files(paths, validate=True):
    return [load_file(p, validate) for p in paths]


def catalog_algebra(name):
    return load_file(catalog_file(name))


def catalog_morphism(name):
    return load_file(catalog_file(name))


__all__ = ["parse_files", "parse_algebra", "parse_morphism", "load_file", "catalog_algebra",
           "catalog_morphism", "CATALOG_ALGEBRAS", "CATALOG_MORPHISMS", "InvalidAlgebra"]

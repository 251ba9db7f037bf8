"""
Module description files.

A description is a YAML mapping::

    p: 3
    e: 1
    ring: prime          # prime | ext | poly | ratfunc | perfect
    n: 2
    matrix: ['0', '1', '1', '1']   # row-major polynomial literals

with optional ``m``/``modulus`` for ``ring: ext`` and optional payloads:
``subspace`` (basis rows over a finite field), ``submodule`` (generator columns
over F_p[x]) and ``basis_change`` (row-major n x n). Literals keep their source
position so a bad entry is reported with line and column.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import yaml

from utils.errors import FrobModError, ParseError, ValidationError
from utils.frobmod import FrobModule
from utils.matrix_util import Matrix, Vector, from_flat, literals
from utils.polynomial import fp_format, fp_poly
from utils.rings import RingDescriptor, RingKind, RingScalar, parse_scalar, poly_ring

logger = logging.getLogger(__name__)

RING_NAMES = {
    "prime": RingKind.PRIME_FIELD,
    "ext": RingKind.EXT_FIELD,
    "poly": RingKind.POLY_RING,
    "ratfunc": RingKind.RAT_FUNC_FIELD,
    "perfect": RingKind.PERFECT_CLOSURE,
}
KIND_NAMES = {kind: name for name, kind in RING_NAMES.items()}

KNOWN_KEYS = {"p", "e", "ring", "m", "modulus", "n", "matrix", "subspace", "submodule", "basis_change"}


@dataclass
class ModuleDocument:
    """A parsed description file: the module plus any optional payloads."""

    module: FrobModule
    subspace: Optional[List[Vector]] = None
    submodule: Optional[List[Vector]] = None
    basis_change: Optional[Matrix] = None
    source: Optional[str] = field(default=None, compare=False)


def _position(node: yaml.Node) -> Tuple[int, int]:
    mark = node.start_mark
    column = mark.column + 1
    if isinstance(node, yaml.ScalarNode) and node.style in ("'", '"'):
        column += 1
    return mark.line + 1, column


def _fail(message: str, node: yaml.Node):
    line, column = _position(node)
    raise ParseError(message, line, column)


def _mapping(node: yaml.Node) -> Dict[str, yaml.Node]:
    if not isinstance(node, yaml.MappingNode):
        _fail("module description must be a mapping", node)
    out = {}
    for key_node, value_node in node.value:
        key = key_node.value
        if key not in KNOWN_KEYS:
            _fail(f"unknown field '{key}'", key_node)
        if key in out:
            _fail(f"duplicate field '{key}'", key_node)
        out[key] = value_node
    return out


def _integer(node: yaml.Node, name: str) -> int:
    if not isinstance(node, yaml.ScalarNode):
        _fail(f"'{name}' must be an integer", node)
    try:
        return int(node.value)
    except ValueError:
        _fail(f"'{name}' must be an integer, got '{node.value}'", node)


def _sequence(node: yaml.Node, name: str) -> List[yaml.Node]:
    if not isinstance(node, yaml.SequenceNode):
        _fail(f"'{name}' must be a list", node)
    return node.value


def _literal(node: yaml.Node, ring: RingDescriptor) -> RingScalar:
    if not isinstance(node, yaml.ScalarNode):
        _fail("expected a polynomial literal", node)
    line, column = _position(node)
    return parse_scalar(str(node.value), ring, line, column)


def _vectors(node: yaml.Node, name: str, ring: RingDescriptor, n: int) -> List[Vector]:
    vectors = []
    for item in _sequence(node, name):
        entries = _sequence(item, name)
        if len(entries) != n:
            _fail(f"'{name}' vectors must have {n} entries, got {len(entries)}", item)
        vectors.append(tuple(_literal(c, ring) for c in entries))
    return vectors


def _ring(fields: Dict[str, yaml.Node], root: yaml.Node) -> RingDescriptor:
    for required in ("p", "e", "ring", "n", "matrix"):
        if required not in fields:
            _fail(f"missing field '{required}'", root)
    p = _integer(fields["p"], "p")
    name = fields["ring"].value if isinstance(fields["ring"], yaml.ScalarNode) else None
    if name not in RING_NAMES:
        _fail(f"unknown ring '{name}', expected one of {sorted(RING_NAMES)}", fields["ring"])
    kind = RING_NAMES[name]
    if kind != RingKind.EXT_FIELD:
        return RingDescriptor(kind, p)
    if "m" not in fields:
        _fail("ring 'ext' needs the extension degree 'm'", root)
    m = _integer(fields["m"], "m")
    modulus = None
    if "modulus" in fields:
        node = fields["modulus"]
        line, column = _position(node)
        # modulus is written in u; read it as a polynomial in x
        f = parse_scalar(str(node.value).replace("u", "x"), poly_ring(p), line, column)
        modulus = [int(c) for c in f.payload.coeffs]
    return RingDescriptor.ext_field(p, m, modulus)


def parse_module(text: str, source: Optional[str] = None) -> ModuleDocument:
    """
    Parse and validate a module description

    Args:
        text: YAML text of the description
        source: File name reported with parse errors

    Returns:
        ModuleDocument with the module and any subspace, submodule or basis_change payload
    """
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        raise ParseError(f"invalid YAML: {e.problem}", mark.line + 1 if mark else None,
                         mark.column + 1 if mark else None) from e
    if root is None:
        raise ParseError("empty module description", 1, 1)
    fields = _mapping(root)
    ring = _ring(fields, root)
    e = _integer(fields["e"], "e")
    n = _integer(fields["n"], "n")
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if e < 1:
        raise ValidationError(f"e must be positive, got {e}")
    entries = [_literal(c, ring) for c in _sequence(fields["matrix"], "matrix")]
    if len(entries) != n * n:
        raise ValidationError(f"matrix has {len(entries)} entries, expected {n * n} for n = {n}")
    module = FrobModule(ring, n, e, from_flat(ring, n, entries))

    doc = ModuleDocument(module=module, source=source)
    if "subspace" in fields:
        if not ring.is_finite_field:
            _fail("'subspace' payloads need a finite field", fields["subspace"])
        doc.subspace = _vectors(fields["subspace"], "subspace", ring, n)
    if "submodule" in fields:
        if ring.kind != RingKind.POLY_RING:
            _fail("'submodule' payloads need ring 'poly'", fields["submodule"])
        doc.submodule = _vectors(fields["submodule"], "submodule", ring, n)
    if "basis_change" in fields:
        cells = [_literal(c, ring) for c in _sequence(fields["basis_change"], "basis_change")]
        if len(cells) != n * n:
            _fail(f"'basis_change' needs {n * n} entries", fields["basis_change"])
        doc.basis_change = from_flat(ring, n, cells)
    logger.debug(f"Parsed module {module.describe()} from {source or 'text'}")
    return doc


def load_module(path: str) -> ModuleDocument:
    """Read and parse a module description file; a missing file is a FrobModError."""
    file_path = Path(path)
    if not file_path.exists():
        raise FrobModError(f"input file not found: {path}")
    return parse_module(file_path.read_text(), source=str(file_path))


def emit_module(doc) -> str:
    """Deterministic YAML text; parse_module(emit_module(d)) reproduces d."""
    if isinstance(doc, FrobModule):
        doc = ModuleDocument(module=doc)
    M = doc.module
    data = {"p": M.p, "e": M.e, "ring": KIND_NAMES[M.ring.kind]}
    if M.ring.kind == RingKind.EXT_FIELD:
        data["m"] = M.ring.m
        data["modulus"] = fp_format(fp_poly(M.p, list(reversed(M.ring.modulus))), "u")
    data["n"] = M.n
    data["matrix"] = [c for row in literals(M.A) for c in row]
    if doc.subspace is not None:
        data["subspace"] = [[str(c) for c in v] for v in doc.subspace]
    if doc.submodule is not None:
        data["submodule"] = [[str(c) for c in v] for v in doc.submodule]
    if doc.basis_change is not None:
        data["basis_change"] = [c for row in literals(doc.basis_change) for c in row]
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None, width=1 << 16)

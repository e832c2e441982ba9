"""Text format for fractal specs.

    dimension=<d>; base=5; retained=<t1>;<t2>;...

Each tuple is comma separated ("1,1" or "(1,1)"). An optional leading
`name=<id>;` field is accepted and written on request.
"""

from typing import Dict

from pydantic import ValidationError

from models.errors import SpecFormatError
from models.fractals import FractalSpec


def parse_spec(text: str) -> FractalSpec:
    """Parse the text serialization into a FractalSpec."""
    head, marker, tail = text.partition("retained=")
    if not marker:
        raise SpecFormatError("missing 'retained=' field")

    fields: Dict[str, str] = {}
    for chunk in head.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise SpecFormatError(f"malformed field '{chunk}'")
        fields[key.strip()] = value.strip()

    if "dimension" not in fields:
        raise SpecFormatError("missing 'dimension=' field")

    retained = []
    for chunk in tail.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        try:
            retained.append(tuple(int(part) for part in chunk.split(",")))
        except ValueError as e:
            raise SpecFormatError(f"malformed cell '{chunk}': {e}") from e

    try:
        return FractalSpec(
            name=fields.get("name", "custom"),
            dimension=int(fields["dimension"]),
            base=int(fields.get("base", "5")),
            retained=frozenset(retained),
        )
    except (ValidationError, ValueError) as e:
        raise SpecFormatError(str(e)) from e


def format_spec(spec: FractalSpec, include_name: bool = False) -> str:
    """Serialize a spec; retained cells in canonical order."""
    cells = ";".join(",".join(str(c) for c in cell) for cell in spec.sorted_retained())
    prefix = f"name={spec.name}; " if include_name else ""
    return f"{prefix}dimension={spec.dimension}; base={spec.base}; retained={cells}"

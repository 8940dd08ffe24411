"""Field files (``HHK1``) and legacy-VTK export.

A field file is a short ASCII header followed by raw little-endian
float64 samples in x-fastest node order::

    HHK1
    kind vector
    n 33
    h 0.25
    origin -4.0 -4.0 -4.0
    gamma 4.0
    c 14.0
    data
    <3 * n^3 doubles, components interleaved per node>

Floats in the header are written with ``repr`` so reading back is exact.
"""
from __future__ import annotations

import numpy as np

from .grid import DecayClass, Grid3, ScalarField, VectorField

MAGIC = "HHK1"
_LE_F64 = np.dtype("<f8")


class FieldFormatError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def to_file_order(fld):
    """Flat array in x-fastest node order (component fastest for vectors)."""
    if fld.kind == "scalar":
        return fld.values.transpose(2, 1, 0).ravel()
    return fld.values.transpose(3, 2, 1, 0).ravel()


def from_file_order(flat, kind, n):
    if kind == "scalar":
        return flat.reshape(n, n, n).transpose(2, 1, 0)
    return flat.reshape(n, n, n, 3).transpose(3, 2, 1, 0)


def dumps(fld) -> bytes:
    g = fld.grid
    decay = fld.decay
    lines = [
        MAGIC,
        f"kind {fld.kind}",
        f"n {g.n}",
        f"h {g.h!r}",
        "origin " + " ".join(repr(v) for v in g.origin),
        f"gamma {decay.gamma!r}" if decay else "gamma none",
        f"c {decay.c!r}" if decay else "c none",
        "data",
    ]
    header = ("\n".join(lines) + "\n").encode("ascii")
    return header + to_file_order(fld).astype(_LE_F64).tobytes()


def write_field(fld, path):
    with open(path, "wb") as fh:
        fh.write(dumps(fld))


def _parse_float(tok, what, offset):
    try:
        return float(tok)
    except ValueError:
        raise FieldFormatError(f"bad {what} value {tok!r}", offset) from None


def loads(buf: bytes):
    offset = 0
    header = {}
    expected = ["magic", "kind", "n", "h", "origin", "gamma", "c", "data"]
    for key in expected:
        end = buf.find(b"\n", offset)
        if end < 0:
            raise FieldFormatError(f"truncated header, expected '{key}' line", offset)
        try:
            line = buf[offset:end].decode("ascii").strip()
        except UnicodeDecodeError:
            raise FieldFormatError("non-ASCII header line", offset) from None
        parts = line.split()
        if key == "magic":
            if line != MAGIC:
                raise FieldFormatError(f"bad magic {line!r}, expected {MAGIC!r}", offset)
        elif key == "data":
            if line != "data":
                raise FieldFormatError(f"expected 'data' line, got {line!r}", offset)
        else:
            if not parts or parts[0] != key:
                raise FieldFormatError(f"expected '{key}' line, got {line!r}", offset)
            header[key] = (parts[1:], offset)
        offset = end + 1

    vals, off = header["kind"]
    if vals not in (["scalar"], ["vector"]):
        raise FieldFormatError(f"kind must be scalar or vector, got {' '.join(vals)!r}", off)
    kind = vals[0]
    vals, off = header["n"]
    if len(vals) != 1 or not vals[0].isdigit() or int(vals[0]) < 2:
        raise FieldFormatError(f"n must be an integer >= 2, got {' '.join(vals)!r}", off)
    n = int(vals[0])
    vals, off = header["h"]
    if len(vals) != 1:
        raise FieldFormatError("h takes one value", off)
    h = _parse_float(vals[0], "h", off)
    if not (np.isfinite(h) and h > 0):
        raise FieldFormatError(f"h must be positive, got {h}", off)
    vals, off = header["origin"]
    if len(vals) != 3:
        raise FieldFormatError("origin takes three values", off)
    origin = tuple(_parse_float(v, "origin", off) for v in vals)

    decay_parts = []
    for key in ("gamma", "c"):
        vals, off = header[key]
        if len(vals) != 1:
            raise FieldFormatError(f"{key} takes one value", off)
        decay_parts.append(None if vals[0] == "none" else _parse_float(vals[0], key, off))
    if (decay_parts[0] is None) != (decay_parts[1] is None):
        raise FieldFormatError("gamma and c must both be set or both be none", header["gamma"][1])
    decay = None
    if decay_parts[0] is not None:
        try:
            decay = DecayClass(*decay_parts)
        except ValueError as exc:
            raise FieldFormatError(str(exc), header["gamma"][1]) from None

    count = n**3 * (3 if kind == "vector" else 1)
    nbytes = count * _LE_F64.itemsize
    if len(buf) - offset != nbytes:
        raise FieldFormatError(f"expected {nbytes} data bytes, found {len(buf) - offset}", offset)
    flat = np.frombuffer(buf, dtype=_LE_F64, count=count, offset=offset).astype(np.float64)
    if not np.all(np.isfinite(flat)):
        bad = int(np.argmax(~np.isfinite(flat)))
        raise FieldFormatError("non-finite sample", offset + bad * _LE_F64.itemsize)
    grid = Grid3(origin=origin, h=h, n=n)
    values = from_file_order(flat, kind, n)
    if kind == "scalar":
        return ScalarField(grid, values, decay)
    return VectorField(grid, values, decay)


def read_field(path):
    with open(path, "rb") as fh:
        return loads(fh.read())


def export_vtk(fld, path, name=None):
    """Legacy ASCII STRUCTURED_POINTS file, one node per line."""
    g = fld.grid
    name = name or ("A" if fld.kind == "vector" else "u")
    flat = to_file_order(fld)
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"hodge3d {fld.kind} field\n")
        fh.write("ASCII\n")
        fh.write("DATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {g.n} {g.n} {g.n}\n")
        fh.write("ORIGIN {:.17g} {:.17g} {:.17g}\n".format(*g.origin))
        fh.write(f"SPACING {g.h:.17g} {g.h:.17g} {g.h:.17g}\n")
        fh.write(f"POINT_DATA {g.n**3}\n")
        if fld.kind == "scalar":
            fh.write(f"SCALARS {name} double 1\n")
            fh.write("LOOKUP_TABLE default\n")
            fh.writelines(f"{v:.17g}\n" for v in flat)
        else:
            fh.write(f"VECTORS {name} double\n")
            trip = flat.reshape(-1, 3)
            fh.writelines(f"{x:.17g} {y:.17g} {z:.17g}\n" for x, y, z in trip)

"""Formal contexts, derivation operators and file I/O.

A formal context is a finite set of objects, a finite set of attributes and an
incidence relation between them.  Object and attribute sets are handled as
Python ints used as bitsets (bit ``i`` = index ``i``), which turns derivation
into an AND-fold over rows or columns.
"""

from __future__ import annotations

import csv
import io
import os
from typing import Iterable, Sequence

import numpy as np

from . import _bits

__all__ = [
    "ContextError",
    "CxtParseError",
    "FormalContext",
    "derive_objects",
    "derive_attributes",
    "closure_attributes",
    "closure_objects",
    "induced_subcontext",
    "induced_by_names",
    "is_induced_subcontext",
    "dual",
    "parse_cxt",
    "format_cxt",
    "parse_csv",
    "format_csv",
    "read_context",
    "write_context",
]


class ContextError(ValueError):
    pass


class CxtParseError(ContextError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class FormalContext:
    """Immutable formal context ``(G, M, I)``.

    ``rows[g]`` is the attribute bitmask of object ``g`` and ``cols[m]`` the
    object bitmask of attribute ``m``.  Object and attribute orders are fixed
    and define the lectic order used by the enumeration routines.

    Examples
    --------
    >>> K = FormalContext(["g1", "g2"], ["a", "b"], [(0, 0), (1, 0), (1, 1)])
    >>> sorted(K.incidence)
    [(0, 0), (1, 0), (1, 1)]
    >>> K.up(0b01), K.down(0b10)
    (1, 2)
    """

    __slots__ = ("objects", "attributes", "rows", "cols", "_obj_index", "_attr_index")

    def __init__(
        self,
        objects: Sequence[str],
        attributes: Sequence[str],
        incidence: Iterable[tuple[int, int]] = (),
    ):
        objects = tuple(objects)
        attributes = tuple(attributes)
        n, m = len(objects), len(attributes)
        rows = [0] * n
        for g, a in incidence:
            if not (0 <= g < n and 0 <= a < m):
                raise ContextError(f"incidence ({g}, {a}) out of range for {n}x{m} context")
            rows[g] |= 1 << a
        self._init(objects, attributes, tuple(rows))

    def _init(self, objects: tuple[str, ...], attributes: tuple[str, ...], rows: tuple[int, ...]):
        obj_index = {name: i for i, name in enumerate(objects)}
        if len(obj_index) != len(objects):
            raise ContextError(f"duplicate object name: {_first_duplicate(objects)!r}")
        attr_index = {name: i for i, name in enumerate(attributes)}
        if len(attr_index) != len(attributes):
            raise ContextError(f"duplicate attribute name: {_first_duplicate(attributes)!r}")
        cols = [0] * len(attributes)
        for g, row in enumerate(rows):
            bit = 1 << g
            for a in _bits.iter_bits(row):
                cols[a] |= bit
        self.objects = objects
        self.attributes = attributes
        self.rows = rows
        self.cols = tuple(cols)
        self._obj_index = obj_index
        self._attr_index = attr_index

    @classmethod
    def from_rows(
        cls, objects: Sequence[str], attributes: Sequence[str], rows: Sequence[int]
    ) -> FormalContext:
        """Build from per-object attribute bitmasks."""
        objects, attributes = tuple(objects), tuple(attributes)
        if len(rows) != len(objects):
            raise ContextError("one row mask per object required")
        limit = _bits.full(len(attributes))
        if any(r & ~limit for r in rows):
            raise ContextError("row mask has bits beyond the attribute count")
        self = cls.__new__(cls)
        self._init(objects, attributes, tuple(int(r) for r in rows))
        return self

    @classmethod
    def from_array(
        cls,
        array,
        objects: Sequence[str] | None = None,
        attributes: Sequence[str] | None = None,
    ) -> FormalContext:
        """Build from a 2-d boolean array (objects x attributes)."""
        arr = np.asarray(array, dtype=bool)
        if arr.ndim != 2:
            raise ContextError("incidence array must be 2-d")
        n, m = arr.shape
        objects = [f"g{i}" for i in range(n)] if objects is None else objects
        attributes = [f"m{j}" for j in range(m)] if attributes is None else attributes
        if len(objects) != n or len(attributes) != m:
            raise ContextError("name lists do not match array shape")
        if m:
            packed = np.packbits(arr, axis=1, bitorder="little")
            rows = [int.from_bytes(r.tobytes(), "little") for r in packed]
        else:
            rows = [0] * n
        return cls.from_rows(objects, attributes, rows)

    def to_array(self) -> np.ndarray:
        arr = np.zeros((len(self.objects), len(self.attributes)), dtype=bool)
        for g, row in enumerate(self.rows):
            arr[g, list(_bits.iter_bits(row))] = True
        return arr

    @property
    def incidence(self) -> frozenset[tuple[int, int]]:
        return frozenset((g, a) for g, row in enumerate(self.rows) for a in _bits.iter_bits(row))

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_incidences(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.objects), len(self.attributes)

    @property
    def is_empty(self) -> bool:
        """True when the context has no objects or no attributes."""
        return not self.objects or not self.attributes

    @property
    def all_objects(self) -> int:
        return _bits.full(len(self.objects))

    @property
    def all_attributes(self) -> int:
        return _bits.full(len(self.attributes))

    def object_index(self, name: str) -> int:
        return self._obj_index[name]

    def attribute_index(self, name: str) -> int:
        return self._attr_index[name]

    def object_mask(self, names: Iterable[str]) -> int:
        return _bits.from_indices(self._obj_index[n] for n in names)

    def attribute_mask(self, names: Iterable[str]) -> int:
        return _bits.from_indices(self._attr_index[n] for n in names)

    def object_names(self, mask: int) -> frozenset[str]:
        return frozenset(self.objects[i] for i in _bits.iter_bits(mask))

    def attribute_names(self, mask: int) -> frozenset[str]:
        return frozenset(self.attributes[i] for i in _bits.iter_bits(mask))

    # derivation on bitmasks

    def up(self, objects: int) -> int:
        """Attributes shared by all objects in the mask."""
        out = self.all_attributes
        rows = self.rows
        for g in _bits.iter_bits(objects):
            out &= rows[g]
            if not out:
                break
        return out

    def down(self, attributes: int) -> int:
        """Objects having every attribute in the mask."""
        out = self.all_objects
        cols = self.cols
        for a in _bits.iter_bits(attributes):
            out &= cols[a]
            if not out:
                break
        return out

    def attribute_closure(self, attributes: int) -> int:
        return self.up(self.down(attributes))

    def object_closure(self, objects: int) -> int:
        return self.down(self.up(objects))

    def __eq__(self, other):
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.attributes == other.attributes
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.objects, self.attributes, self.rows))

    def __repr__(self):
        return (
            f"FormalContext({len(self.objects)} objects, {len(self.attributes)} attributes, "
            f"{self.n_incidences} incidences)"
        )

    def __getstate__(self):
        return (self.objects, self.attributes, self.rows)

    def __setstate__(self, state):
        self._init(*state)


def _first_duplicate(names):
    seen = set()
    for n in names:
        if n in seen:
            return n
        seen.add(n)
    return None


def _check_range(indices: Iterable[int], n: int, kind: str) -> int:
    mask = 0
    for i in indices:
        if not 0 <= i < n:
            raise ContextError(f"{kind} index {i} out of range (0..{n - 1})")
        mask |= 1 << i
    return mask


def derive_objects(K: FormalContext, A: Iterable[int]) -> frozenset[int]:
    """Attributes common to all objects in ``A``; the empty set gives all attributes."""
    return _bits.to_indices(K.up(_check_range(A, K.n_objects, "object")))


def derive_attributes(K: FormalContext, B: Iterable[int]) -> frozenset[int]:
    """Objects having all attributes in ``B``."""
    return _bits.to_indices(K.down(_check_range(B, K.n_attributes, "attribute")))


def closure_attributes(K: FormalContext, B: Iterable[int]) -> frozenset[int]:
    return _bits.to_indices(K.attribute_closure(_check_range(B, K.n_attributes, "attribute")))


def closure_objects(K: FormalContext, A: Iterable[int]) -> frozenset[int]:
    return _bits.to_indices(K.object_closure(_check_range(A, K.n_objects, "object")))


def _restrict(K: FormalContext, objects: int, attributes: int) -> FormalContext:
    obj_idx = list(_bits.iter_bits(objects))
    attr_idx = list(_bits.iter_bits(attributes))
    amap = {a: j for j, a in enumerate(attr_idx)}
    rows = [_bits.remap(K.rows[g] & attributes, amap) for g in obj_idx]
    sub = FormalContext.__new__(FormalContext)
    sub._init(
        tuple(K.objects[g] for g in obj_idx),
        tuple(K.attributes[a] for a in attr_idx),
        tuple(rows),
    )
    return sub


def induced_subcontext(K: FormalContext, H: Iterable[int], N: Iterable[int]) -> FormalContext:
    """Restrict ``K`` to objects ``H`` and attributes ``N``, keeping relative order."""
    return _restrict(
        K,
        _check_range(H, K.n_objects, "object"),
        _check_range(N, K.n_attributes, "attribute"),
    )


def induced_by_names(K: FormalContext, objects: Iterable[str], attributes: Iterable[str]) -> FormalContext:
    try:
        return _restrict(K, K.object_mask(objects), K.attribute_mask(attributes))
    except KeyError as exc:
        raise ContextError(f"unknown name {exc.args[0]!r}") from None


def induced_by_masks(K: FormalContext, objects: int, attributes: int) -> FormalContext:
    return _restrict(K, objects & K.all_objects, attributes & K.all_attributes)


def is_induced_subcontext(S: FormalContext, K: FormalContext) -> bool:
    """Whether ``S`` equals the restriction of ``K`` to the names of ``S``.

    Identity across contexts is by name; the relative order must agree.
    """
    try:
        omask = K.object_mask(S.objects)
        amask = K.attribute_mask(S.attributes)
    except KeyError:
        return False
    return _restrict(K, omask, amask) == S


def dual(K: FormalContext) -> FormalContext:
    """Swap the roles of objects and attributes."""
    d = FormalContext.__new__(FormalContext)
    d._init(K.attributes, K.objects, K.cols)
    return d


# Burmeister .cxt


def parse_cxt(text: str) -> FormalContext:
    """Parse a Burmeister ``.cxt`` document.

    Layout: ``B``, a name line (usually blank), object count, attribute
    count, blank line, object names, attribute names, one row of ``.``/``X``
    per object.
    """
    lines = text.splitlines()

    def line(i: int) -> str:
        if i >= len(lines):
            raise CxtParseError("unexpected end of file", i + 1)
        return lines[i].rstrip("\r")

    if line(0).strip() != "B":
        raise CxtParseError("expected header 'B'", 1)
    try:
        n = int(line(2).strip())
        m = int(line(3).strip())
    except ValueError:
        raise CxtParseError("object/attribute counts must be integers", 3) from None
    if n < 0 or m < 0:
        raise CxtParseError("negative count", 3)
    if line(4).strip():
        raise CxtParseError("expected blank line after counts", 5)
    pos = 5
    objects = [line(pos + i) for i in range(n)]
    pos += n
    attributes = [line(pos + i) for i in range(m)]
    pos += m
    rows = []
    for g in range(n):
        row = line(pos + g).strip()
        if len(row) != m:
            raise CxtParseError(
                f"row {g} ({objects[g]!r}) has length {len(row)}, expected {m}", pos + g + 1
            )
        mask = 0
        for a, ch in enumerate(row):
            if ch in "Xx":
                mask |= 1 << a
            elif ch != ".":
                raise CxtParseError(f"invalid cell {ch!r} in row {g}", pos + g + 1)
        rows.append(mask)
    for extra in range(pos + n, len(lines)):
        if lines[extra].strip():
            raise CxtParseError("unexpected content after incidence rows", extra + 1)
    for names, kind, start in ((objects, "object", 6), (attributes, "attribute", 6 + n)):
        dup = _first_duplicate(names)
        if dup is not None:
            raise CxtParseError(f"duplicate {kind} name {dup!r}", start + names.index(dup))
    return FormalContext.from_rows(objects, attributes, rows)


def format_cxt(K: FormalContext) -> str:
    out = ["B", "", str(K.n_objects), str(K.n_attributes), ""]
    out.extend(K.objects)
    out.extend(K.attributes)
    m = K.n_attributes
    for row in K.rows:
        out.append("".join("X" if row >> a & 1 else "." for a in range(m)))
    return "\n".join(out) + "\n"


# CSV

_TRUE = {"1", "x", "X"}
_FALSE = {"0", ""}


def parse_csv(text: str) -> FormalContext:
    """Parse a cross table: header row of attribute names, first column of object names."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r]
    if not rows:
        raise ContextError("empty CSV document")
    attributes = rows[0][1:]
    objects = []
    masks = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != len(attributes) + 1:
            raise CxtParseError(f"expected {len(attributes) + 1} cells, got {len(r)}", lineno)
        objects.append(r[0])
        mask = 0
        for a, cell in enumerate(r[1:]):
            cell = cell.strip()
            if cell in _TRUE:
                mask |= 1 << a
            elif cell not in _FALSE:
                raise CxtParseError(f"invalid cell {cell!r}", lineno)
        masks.append(mask)
    return FormalContext.from_rows(objects, attributes, masks)


def format_csv(K: FormalContext) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["", *K.attributes])
    m = K.n_attributes
    for name, row in zip(K.objects, K.rows):
        writer.writerow([name, *("1" if row >> a & 1 else "0" for a in range(m))])
    return buf.getvalue()


def _infer_format(path: str | os.PathLike, fmt: str | None) -> str:
    if fmt:
        return fmt.lower()
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext in (".cxt", ".csv"):
        return ext[1:]
    raise ContextError(f"cannot infer context format from {os.fspath(path)!r}")


def read_context(path: str | os.PathLike, fmt: str | None = None) -> FormalContext:
    fmt = _infer_format(path, fmt)
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if fmt == "cxt":
        return parse_cxt(text)
    if fmt == "csv":
        return parse_csv(text)
    raise ContextError(f"unknown format {fmt!r}")


def write_context(K: FormalContext, path: str | os.PathLike, fmt: str | None = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt == "cxt":
        text = format_cxt(K)
    elif fmt == "csv":
        text = format_csv(K)
    else:
        raise ContextError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)

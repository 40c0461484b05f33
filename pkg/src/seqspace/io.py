"""Sequence specifications, sequence/matrix files and deterministic JSON.

Spec grammar (whitespace is ignored, ``#`` starts a comment line)::

    explicit:v1,v2,...     the listed values
    constant:c             c, c, c, ...
    geometric:r[,c]        c r, c r^2, c r^3, ...   (c defaults to 1)
    power:s[,c]            c 1^s, c 2^s, c 3^s, ...
    alternating:c          -c, c, -c, ...           ( c (-1)^k )
    alternating:a,b,...    a, b, ..., a, b, ...     (cycled)
    file:PATH              one value per line, or a JSON array if PATH ends in .json

Indices are 1-based in every human-facing output; arrays in files are
0-origin physically, so element ``i`` of a file array is term ``i + 1``.

Floats are written as the shortest decimal string that round-trips in their
own dtype (``longdouble`` for computed values), and JSON is read back with
``parse_float=numpy.longdouble``, so artifacts round-trip bit for bit.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import SpecError
from .kernel import DTYPE
from .matrices import LowerTriangularMatrix

KINDS = ("explicit", "constant", "geometric", "power", "alternating", "file")

GRAMMAR = """sequence spec grammar:
  explicit:v1,v2,...   constant:c   geometric:r[,c]   power:s[,c]
  alternating:c  |  alternating:a,b,...   file:PATH (.json array or one value per line)"""


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _blank_comments(text):
    # keep offsets stable so error positions refer to the original text
    return re.sub(r"(?m)^[ \t]*#.*$", lambda m: " " * len(m.group()), text)


@dataclass(frozen=True)
class SequenceSpec:
    kind: str
    params: tuple
    N: int | None = None
    path: str | None = None

    def generate(self, N=None):
        """Materialize the sequence as a ``longdouble`` array of length ``N``."""
        N = self.N if N is None else N
        if self.kind == "file":
            values = load_sequence(self.path)
            if N is not None:
                if len(values) < N:
                    raise SpecError(f"file {self.path} has {len(values)} values, need {N}")
                values = values[:N]
            return values
        if self.kind == "explicit":
            values = np.array(self.params, dtype=DTYPE)
            if N is not None:
                if len(values) < N:
                    raise SpecError(f"explicit spec has {len(values)} values, need {N}")
                values = values[:N]
            return values
        if N is None:
            raise SpecError(f"spec kind {self.kind!r} needs a length N")
        k = np.arange(1, N + 1, dtype=DTYPE)
        P = [DTYPE(v) for v in self.params]
        if self.kind == "constant":
            return np.full(N, P[0], dtype=DTYPE)
        if self.kind == "geometric":
            scale = P[1] if len(P) > 1 else DTYPE(1)
            return scale * P[0] ** k
        if self.kind == "power":
            scale = P[1] if len(P) > 1 else DTYPE(1)
            return scale * k ** P[0]
        # alternating
        if len(P) == 1:
            return P[0] * np.where(np.arange(1, N + 1) % 2, -1, 1).astype(DTYPE)
        return np.array([P[i % len(P)] for i in range(N)], dtype=DTYPE)


_ARITY = {"constant": (1, 1), "geometric": (1, 2), "power": (1, 2), "alternating": (1, None), "explicit": (1, None)}


def parse_spec(text, N=None, positive=False):
    """Parse spec text into a :class:`SequenceSpec`.

    When the length is known (``N`` given, or an explicit/file spec) the
    values are generated immediately and checked; ``positive=True`` rejects
    non-positive entries, as required for weights and exponents.

    >>> parse_spec("power:1", N=3).generate().astype(float).tolist()
    [1.0, 2.0, 3.0]
    """
    if not isinstance(text, str):
        raise TypeError(f"spec must be a string, got {type(text).__name__}")
    clean = _blank_comments(text)
    m = re.match(r"\s*", clean)
    start = m.end()
    colon = clean.find(":", start)
    if start == len(clean):
        raise SpecError("empty spec", *_position(text, start))
    if colon < 0:
        raise SpecError(f"expected 'kind:params'; kinds are {', '.join(KINDS)}", *_position(text, start))
    kind = clean[start:colon].strip()
    if kind not in KINDS:
        raise SpecError(f"unknown spec kind {kind!r}; expected one of {', '.join(KINDS)}", *_position(text, start))
    rest_at = colon + 1
    rest = clean[rest_at:]
    if kind == "file":
        path = rest.strip()
        if not path:
            raise SpecError("file spec needs a path", *_position(text, rest_at))
        spec = SequenceSpec("file", (), N, path)
    else:
        params = []
        for tok in re.finditer(r"[^,\s]+", rest):
            try:
                with warnings.catch_warnings():
                    # overflow is reported below as a spec error
                    warnings.simplefilter("ignore", RuntimeWarning)
                    value = DTYPE(tok.group())
                if not math.isfinite(float(value)):
                    raise ValueError
            except ValueError:
                raise SpecError(f"invalid number {tok.group()!r}", *_position(text, rest_at + tok.start())) from None
            params.append(value)
        lo, hi = _ARITY[kind]
        if len(params) < lo or (hi is not None and len(params) > hi):
            want = f"{lo}" if lo == hi else f"{lo} or more" if hi is None else f"{lo}-{hi}"
            raise SpecError(f"{kind} takes {want} parameter(s), got {len(params)}", *_position(text, rest_at))
        spec = SequenceSpec(kind, tuple(params), N)
    if N is not None or kind in ("explicit", "file"):
        values = spec.generate()
        if positive and np.any(values <= 0):
            bad = int(np.flatnonzero(values <= 0)[0]) + 1
            raise SpecError(f"entry {bad} is {values[bad - 1]}, must be positive", *_position(text, start))
    return spec


def resolve_sequence(text, N=None, positive=False):
    """Spec text or a bare file path to values."""
    head = text.split(":", 1)[0].strip()
    looks_like_spec = ":" in text and re.fullmatch(r"[A-Za-z_]+", head) and not Path(text).exists()
    if head not in KINDS and not looks_like_spec:
        text = f"file:{text}"
    return parse_spec(text, N=N, positive=positive).generate()


# -- number formatting -----------------------------------------------------


def format_number(x):
    """Shortest round-trip decimal string for ``x`` in its own float type."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and not isinstance(x, np.floating):
        if not math.isfinite(x):
            return json.dumps(str(x))
        return repr(x)
    x = np.asarray(x)[()]
    if not np.isfinite(x):
        return json.dumps(str(float(x)))
    if x == 0:
        return "0.0" if not np.signbit(x) else "-0.0"
    return np.format_float_scientific(x, unique=True, trim="-")


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = list(obj) if obj.ndim else obj[()]
        if not isinstance(obj, list):
            return format_number(obj)
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return json.dumps(obj.value)
    return format_number(obj)


def dumps(obj, indent=2):
    """Deterministic JSON text; key order is insertion order."""
    return _dump(obj, indent, 0) + "\n"


def loads(text):
    """Parse JSON with floats read back as ``longdouble``."""
    return json.loads(text, parse_float=DTYPE)


# -- sequences -------------------------------------------------------------


def load_sequence(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read sequence file {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".json":
        data = loads(text)
        if isinstance(data, dict) and "values" in data:
            data = data["values"]
        if not isinstance(data, list) or not data:
            raise SpecError(f"{path}: expected a non-empty JSON array")
        return np.array([DTYPE(v) for v in data], dtype=DTYPE)
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.split("#", 1)[0].strip().rstrip(",")
        if not token:
            continue
        try:
            values.append(DTYPE(token))
        except ValueError:
            raise SpecError(f"{path}: invalid number {token!r}", lineno, 1) from None
    if not values:
        raise SpecError(f"{path}: no values found")
    return np.array(values, dtype=DTYPE)


def sequence_to_csv(values):
    return "".join(format_number(v) + "\n" for v in np.asarray(values))


def sequence_to_json(values):
    return dumps(list(np.asarray(values)))


# -- matrices --------------------------------------------------------------


def matrix_to_json(A, **meta):
    doc = dict(meta)
    doc["dim"] = A.dim
    doc["packed"] = A.packed
    return dumps(doc)


def matrix_from_json(text):
    doc = loads(text)
    return LowerTriangularMatrix(int(doc["dim"]), [DTYPE(v) for v in doc["packed"]])


def matrix_to_csv(A):
    D = A.to_dense()
    return "".join(",".join(format_number(v) for v in row) + "\n" for row in D)


def matrix_from_csv(text):
    rows = [[DTYPE(t) for t in line.split(",")] for line in text.splitlines() if line.strip()]
    return LowerTriangularMatrix.from_dense(np.array(rows, dtype=DTYPE))

"""Fixture files: JSON text describing a ring extension R in S over F_p.

    {
      "version": 1,
      "name": "FIX-A",
      "p": 2,
      "S": {"dim": 4, "basis": ["E11", ...], "mul": [[i, j, k, c], ...]},
      "local_units": [[1, 0, 0, 1]],
      "R": [[1, 0, 0, 0], [0, 0, 0, 1]]
    }

``mul`` lists the nonzero structure constants b_i b_j = ... + c b_k.
Optional keys: "description" (text) and "subspaces" (name -> list of
vectors of S) for ad-hoc queries.  Unknown keys are rejected.
"""
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import exactla as la
from .algebra import IdempotentedAlgebra, RingExtension, validate_extension
from .errors import FixtureError, FixtureValidationError
from .exactla import Subspace

TOP_KEYS = {"version", "name", "p", "S", "local_units", "R", "description", "subspaces"}
REQUIRED = {"version", "p", "S", "local_units", "R"}
S_KEYS = {"dim", "basis", "mul"}

BUNDLED = {
    "fix-a": "fix_a.json",
    "fix-b": "fix_b.json",
    "fix-c": "fix_c.json",
    "fix-d": "fix_d.json",
    "fix-e": "fix_e.json",
    "fix-f": "fix_f.json",
}


@dataclass
class Fixture:
    p: int
    dim: int
    basis: list
    mul: list
    local_units: list
    R: list
    name: str = ""
    description: str = None
    subspaces: dict = field(default_factory=dict)
    version: int = 1

    def algebra(self):
        tensor = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for i, j, k, c in self.mul:
            tensor[i, j, k] = (tensor[i, j, k] + c) % self.p
        return IdempotentedAlgebra(self.p, tensor, self.local_units, self.basis)

    def extension(self, validate=True):
        S = self.algebra()
        R = Subspace.span(np.array(self.R, dtype=np.int64).reshape(-1, self.dim), self.p, self.dim)
        ext = RingExtension(S, R, self.name)
        if validate:
            rep = validate_extension(ext)
            if not rep.ok:
                raise FixtureValidationError(rep)
        return ext

    def to_json(self):
        d = {
            "version": self.version,
            "p": self.p,
            "S": {"dim": self.dim, "basis": self.basis, "mul": [list(q) for q in self.mul]},
            "local_units": [list(u) for u in self.local_units],
            "R": [list(v) for v in self.R],
        }
        if self.name:
            d["name"] = self.name
        if self.description is not None:
            d["description"] = self.description
        if self.subspaces:
            d["subspaces"] = {k: [list(v) for v in vs] for k, vs in self.subspaces.items()}
        return d


def canonical(obj):
    """Canonical serialization: sorted keys, no insignificant whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def serialize(fx):
    return canonical(fx.to_json())


def _line_of(text, key):
    needle = f'"{key}"'
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return n
    return None


def _int(x, key, text):
    if isinstance(x, bool) or not isinstance(x, int):
        raise FixtureError(f"expected an integer, got {x!r}", _line_of(text, key), key)
    return x


def _vector(v, n, p, key, text):
    if not isinstance(v, list) or len(v) != n:
        raise FixtureError(f"expected a list of {n} integers", _line_of(text, key), key)
    out = []
    for x in v:
        x = _int(x, key, text)
        if not 0 <= x < p:
            raise FixtureError(f"coefficient {x} outside [0, {p})", _line_of(text, key), key)
        out.append(x)
    return out


def parse_text(text, name=""):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(exc.msg, exc.lineno) from None
    if not isinstance(d, dict):
        raise FixtureError("top level must be an object", 1)
    for k in d:
        if k not in TOP_KEYS:
            raise FixtureError("unknown key", _line_of(text, k), k)
    for k in sorted(REQUIRED - d.keys()):
        raise FixtureError("missing required key", None, k)
    if d["version"] != 1:
        raise FixtureError(f"unsupported version {d['version']!r}", _line_of(text, "version"), "version")
    p = _int(d["p"], "p", text)
    try:
        la.check_prime(p)
    except ValueError as exc:
        raise FixtureError(str(exc), _line_of(text, "p"), "p") from None
    Sd = d["S"]
    if not isinstance(Sd, dict):
        raise FixtureError("S must be an object", _line_of(text, "S"), "S")
    for k in Sd:
        if k not in S_KEYS:
            raise FixtureError("unknown key", _line_of(text, k), f"S.{k}")
    for k in sorted(S_KEYS - Sd.keys()):
        raise FixtureError("missing required key", _line_of(text, "S"), f"S.{k}")
    n = _int(Sd["dim"], "dim", text)
    if n < 1:
        raise FixtureError("dim must be positive", _line_of(text, "dim"), "S.dim")
    basis = Sd["basis"]
    if not (isinstance(basis, list) and len(basis) == n and all(isinstance(b, str) for b in basis)):
        raise FixtureError(f"basis must be {n} names", _line_of(text, "basis"), "S.basis")
    mul = []
    if not isinstance(Sd["mul"], list):
        raise FixtureError("mul must be a list", _line_of(text, "mul"), "S.mul")
    for q in Sd["mul"]:
        if not (isinstance(q, list) and len(q) == 4):
            raise FixtureError("mul entries are [i, j, k, c]", _line_of(text, "mul"), "S.mul")
        i, j, k, c = (_int(x, "mul", text) for x in q)
        if not all(0 <= t < n for t in (i, j, k)):
            raise FixtureError(f"basis index out of range in {q}", _line_of(text, "mul"), "S.mul")
        if not 0 <= c < p:
            raise FixtureError(f"coefficient {c} outside [0, {p})", _line_of(text, "mul"), "S.mul")
        mul.append((i, j, k, c))
    units = d["local_units"]
    if not isinstance(units, list) or not units:
        raise FixtureError("local_units must be a nonempty list", _line_of(text, "local_units"), "local_units")
    units = [_vector(u, n, p, "local_units", text) for u in units]
    if not isinstance(d["R"], list) or not d["R"]:
        raise FixtureError("R must be a nonempty list of vectors", _line_of(text, "R"), "R")
    R = [_vector(v, n, p, "R", text) for v in d["R"]]
    subs = d.get("subspaces", {})
    if not isinstance(subs, dict):
        raise FixtureError("subspaces must be an object", _line_of(text, "subspaces"), "subspaces")
    subs = {k: [_vector(v, n, p, "subspaces", text) for v in vs] for k, vs in subs.items()}
    desc = d.get("description")
    if desc is not None and not isinstance(desc, str):
        raise FixtureError("description must be a string", _line_of(text, "description"), "description")
    return Fixture(p, n, list(basis), mul, units, R, d.get("name", name), desc, subs)


def resolve(path):
    """A filesystem path, or the name of a bundled fixture such as 'fix-a'."""
    p = Path(path)
    if p.exists():
        return p
    key = str(path).lower().replace("_", "-")
    if key.endswith(".json"):
        key = key[:-5]
    if key in BUNDLED:
        return resources.files("picardseq") / "fixtures" / BUNDLED[key]
    raise FixtureError(f"no such fixture: {path}")


def parse_fixture(path):
    src = resolve(path)
    text = src.read_text(encoding="utf-8")
    return parse_text(text, Path(str(path)).stem)


def load_extension(path):
    return parse_fixture(path).extension()


def bundled_names():
    return list(BUNDLED)

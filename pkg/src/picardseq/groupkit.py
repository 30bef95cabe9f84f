"""Finite groups given extensionally by hashable keys and a Cayley table."""
import random
from dataclasses import dataclass, field

from .algebra import ValidationReport

ASSOC_EXHAUSTIVE = 256
ASSOC_SAMPLES = 1000


class FiniteGroup:
    """Elements are hashable keys; ``payload[key]`` keeps the object behind it."""

    def __init__(self, elements, table, neutral, payload=None, name=""):
        self.elements = list(elements)
        self.index = {k: i for i, k in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate group keys")
        self.table = table          # dict (a, b) -> key
        self.neutral = neutral
        self.payload = payload or {}
        self.name = name

    @classmethod
    def from_operation(cls, elements, op, neutral, payload=None, name=""):
        elements = list(elements)
        table = {(a, b): op(a, b) for a in elements for b in elements}
        return cls(elements, table, neutral, payload, name)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, k):
        return k in self.index

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={len(self)})"

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def inverse(self, a):
        for b in self.elements:
            if self.table[(a, b)] == self.neutral:
                return b
        raise ValueError("element has no inverse")

    def validate(self, seed=0):
        rep = ValidationReport()
        els = self.elements
        if self.neutral not in self.index:
            rep.add("neutral element missing")
            return rep
        for a in els:
            for b in els:
                if self.table.get((a, b)) not in self.index:
                    rep.add(f"not closed: {a!r} * {b!r}")
                    return rep
        for a in els:
            if self.mul(a, self.neutral) != a or self.mul(self.neutral, a) != a:
                rep.add(f"neutral law fails at {a!r}")
            if not any(self.mul(a, b) == self.neutral == self.mul(b, a) for b in els):
                rep.add(f"{a!r} has no two-sided inverse")
        if len(els) <= ASSOC_EXHAUSTIVE:
            triples = ((a, b, c) for a in els for b in els for c in els)
        else:
            rng = random.Random(seed)
            triples = [tuple(rng.choice(els) for _ in range(3)) for _ in range(ASSOC_SAMPLES)]
        for a, b, c in triples:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                rep.add(f"not associative on ({a!r}, {b!r}, {c!r})")
                break
        return rep

    def subgroup(self, keys, name=""):
        keys = [k for k in self.elements if k in set(keys)]
        table = {(a, b): self.table[(a, b)] for a in keys for b in keys}
        return FiniteGroup(keys, table, self.neutral, {k: self.payload.get(k) for k in keys},
                           name or self.name)

    def is_abelian(self):
        return all(self.mul(a, b) == self.mul(b, a) for a in self for b in self)


@dataclass
class GroupHom:
    dom: FiniteGroup
    cod: FiniteGroup
    fn: object
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, a):
        if a not in self._cache:
            self._cache[a] = self.fn(a)
        return self._cache[a]

    def validate(self):
        rep = ValidationReport()
        if self(self.dom.neutral) != self.cod.neutral:
            rep.add(f"{self.name}: neutral not preserved")
        for a in self.dom:
            if self(a) not in self.cod:
                rep.add(f"{self.name}: image of {a!r} is not in the codomain")
                return rep
        for a in self.dom:
            for b in self.dom:
                if self(self.dom.mul(a, b)) != self.cod.mul(self(a), self(b)):
                    rep.add(f"{self.name}: not multiplicative on ({a!r}, {b!r})")
                    return rep
        return rep


def kernel(h, name=""):
    return h.dom.subgroup([a for a in h.dom if h(a) == h.cod.neutral], name or f"Ker {h.name}")


def image(h, name=""):
    return h.cod.subgroup({h(a) for a in h.dom}, name or f"Im {h.name}")


def center(g, name=""):
    return g.subgroup([a for a in g if all(g.mul(a, b) == g.mul(b, a) for b in g)],
                      name or f"Z({g.name})")


def identity_hom(g):
    return GroupHom(g, g, lambda a: a, "id")


def inclusion(h, g, name="incl"):
    missing = [k for k in h if k not in g]
    if missing:
        raise ValueError(f"not a subset: {missing[:3]}")
    return GroupHom(h, g, lambda a: a, name)


def compose(g, f, name=""):
    """g after f."""
    if f.cod is not g.dom and list(f.cod) != list(g.dom):
        raise ValueError("maps are not composable")
    return GroupHom(f.dom, g.cod, lambda a: g(f(a)), name or f"{g.name}.{f.name}")


@dataclass
class ExactReport:
    exact: bool
    image: list
    kernel: list
    only_image: list
    only_kernel: list
    weak: bool          # image contained in kernel


def exact_sets(image_keys, kernel_keys):
    im, ker = list(dict.fromkeys(image_keys)), list(dict.fromkeys(kernel_keys))
    ks, is_ = set(ker), set(im)
    only_i = [k for k in im if k not in ks]
    only_k = [k for k in ker if k not in is_]
    return ExactReport(not only_i and not only_k, im, ker, only_i, only_k, not only_i)


def exact_at(f, g):
    """Verdict Im f = Ker g with both differences."""
    if list(f.cod) != list(g.dom):
        raise ValueError("exact_at needs cod(f) = dom(g)")
    return exact_sets([f(a) for a in f.dom], [a for a in g.dom if g(a) == g.cod.neutral])


def is_subgroup_of_center(h, g):
    missing = [k for k in h if k not in g]
    if missing:
        raise ValueError("first group is not a subset of the second")
    return all(g.mul(a, b) == g.mul(b, a) for a in h for b in g)


def cyclic(n, name=""):
    return FiniteGroup.from_operation(range(n), lambda a, b: (a + b) % n, 0, name=name or f"Z/{n}")


def direct_product(g, h, name=""):
    els = [(a, b) for a in g for b in h]
    return FiniteGroup.from_operation(els, lambda x, y: (g.mul(x[0], y[0]), h.mul(x[1], y[1])),
                                      (g.neutral, h.neutral), name=name)


def trivial_group(name="1"):
    return FiniteGroup([()], {((), ()): ()}, (), name=name)

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Any
import itertools
import logging

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import SymmetricGroup

import subfactor.settings as settings
from subfactor.errors import (
    CapExceededError,
    GroupValidationError,
    SchemaError,
    SubgroupError,
)

logger = logging.getLogger(__name__)

IDENTITY_ALIASES = ("e", "1", "()")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A finite group given by its multiplication table on element indices 0..order-1.
    Compared by identity: two separately loaded copies of the same table are different groups.
    """

    order: int
    mult: np.ndarray
    identity: int
    inv: np.ndarray
    labels: tuple[str, ...]
    name: str = "G"

    def __post_init__(self):
        self.mult.setflags(write=False)
        self.inv.setflags(write=False)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def conj(self, x: int, g: int) -> int:
        """g x g^-1"""
        return int(self.mult[self.mult[g, x], self.inv[g]])

    def label(self, x: int) -> str:
        return self.labels[x]

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        label = label.strip()
        if label in self._label_index:
            return self._label_index[label]
        if label in IDENTITY_ALIASES:
            return self.identity
        if label.isdigit() and int(label) < self.order:
            return int(label)
        raise SubgroupError(f"unknown element label {label!r} in group {self.name}")

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, tuple(sorted({int(x) for x in elements})))

    def generated(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, tuple(sorted(_closure(self, elements))))


def _closure(G: FiniteGroup, generators: Iterable[int]) -> set[int]:
    gens = np.array(sorted({int(x) for x in generators}), dtype=np.int64)
    current = {G.identity}
    if gens.size == 0:
        return current
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size:
        products = np.unique(G.mult[np.ix_(frontier, gens)])
        new = [int(x) for x in products if int(x) not in current]
        current.update(new)
        frontier = np.array(new, dtype=np.int64)
    return current


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(set(int(x) for x in self.elements)))
        object.__setattr__(self, "elements", els)
        G = self.parent
        if not els or any(x < 0 or x >= G.order for x in els):
            raise SubgroupError(f"elements out of range for {G.name}")
        if G.identity not in els:
            raise SubgroupError(f"subset of {G.name} does not contain the identity")
        arr = np.array(els, dtype=np.int64)
        inside = np.zeros(G.order, dtype=bool)
        inside[arr] = True
        if not inside[G.mult[np.ix_(arr, arr)]].all() or not inside[G.inv[arr]].all():
            raise SubgroupError(
                f"subset {[G.label(x) for x in els]} is not closed in {G.name}"
            )

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.name}, {list(self.labels())})"

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: Any) -> bool:
        return x in self._positions

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    @property
    def is_whole(self) -> bool:
        return len(self.elements) == self.parent.order

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.elements, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def position(self, g: int) -> int:
        try:
            return self._positions[g]
        except KeyError:
            raise SubgroupError(
                f"element {self.parent.label(g)} is not in {self!r}"
            ) from None

    @cached_property
    def cayley(self) -> np.ndarray:
        """Multiplication table on positions within this subgroup."""
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[self.array] = np.arange(self.order)
        table = lookup[self.parent.mult[np.ix_(self.array, self.array)]]
        table.setflags(write=False)
        return table

    @cached_property
    def identity_position(self) -> int:
        return self.position(self.parent.identity)

    def labels(self) -> list[str]:
        return [self.parent.label(x) for x in self.elements]

    def issubset(self, other: "Subgroup") -> bool:
        return self.parent is other.parent and set(self.elements) <= set(other.elements)

    def generators(self) -> tuple[int, ...]:
        return self._generators

    @cached_property
    def _generators(self) -> tuple[int, ...]:
        # greedy: keep an element whenever it enlarges the span so far
        gens: list[int] = []
        span = {self.parent.identity}
        for x in self.elements:
            if x in span:
                continue
            gens.append(x)
            span = _closure(self.parent, gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def conjugate(self, g: int) -> "Subgroup":
        """g H g^-1"""
        G = self.parent
        return G.subgroup(G.mult[G.mult[g, self.array], G.inv[g]])

    def is_normal_in(self, ambient: "Subgroup | None" = None) -> bool:
        ambient = ambient or self.parent.whole
        return all(self.conjugate(g) == self for g in ambient.generators())

    @cached_property
    def conjugacy(self) -> "ConjugacyData":
        return conjugacy_classes(self)


@dataclass(frozen=True)
class CosetSystem:
    """Left cosets kH of subgroup in ambient, with representatives reps and reps[0] = e."""

    ambient: Subgroup
    subgroup: Subgroup
    reps: tuple[int, ...]
    coset_of: dict[int, int] = field(repr=False)

    @property
    def index(self) -> int:
        return len(self.reps)

    def k(self, g: int) -> int:
        return self.reps[self.coset_of[g]]

    def h(self, g: int) -> int:
        G = self.ambient.parent
        return G.mul(int(G.inv[self.k(g)]), g)

    def factorize(self, g: int) -> tuple[int, int]:
        """g = k(g) h(g) with k(g) a representative and h(g) in the subgroup."""
        return self.k(g), self.h(g)

    def act(self, g: int, i: int) -> int:
        """Index of the coset g.reps[i]H."""
        return self.coset_of[self.ambient.parent.mul(g, self.reps[i])]


@dataclass(frozen=True)
class ConjugacyData:
    group: Subgroup
    classes: tuple[tuple[int, ...], ...]
    class_of: dict[int, int] = field(repr=False)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


def as_subgroup(G: "FiniteGroup | Subgroup") -> Subgroup:
    return G.whole if isinstance(G, FiniteGroup) else G


def check_order_cap(G: "FiniteGroup | Subgroup", cap: int, what: str) -> None:
    H = as_subgroup(G)
    if H.order > cap:
        raise CapExceededError(f"{what} capped at order {cap}, got order {H.order} in {H.parent.name}")


def conjugacy_classes(H: "FiniteGroup | Subgroup") -> ConjugacyData:
    H = as_subgroup(H)
    G = H.parent
    class_of: dict[int, int] = {}
    classes: list[tuple[int, ...]] = []
    # identity first, then by smallest element index
    for x in [G.identity] + [y for y in H.elements if y != G.identity]:
        if x in class_of:
            continue
        members = tuple(sorted({int(y) for y in G.mult[G.mult[H.array, x], G.inv[H.array]]}))
        for y in members:
            class_of[y] = len(classes)
        classes.append(members)
    return ConjugacyData(H, tuple(classes), class_of)


def _check_latin(mult: np.ndarray):
    n = len(mult)
    target = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(mult[i]), target):
            raise GroupValidationError(f"multiplication table is not a Latin square: row {i} repeats an entry")
        if not np.array_equal(np.sort(mult[:, i]), target):
            raise GroupValidationError(f"multiplication table is not a Latin square: column {i} repeats an entry")


def _check_associativity(mult: np.ndarray, seed: int):
    n = len(mult)
    if n <= settings.EXHAUSTIVE_ASSOCIATIVITY_ORDER:
        a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, settings.ASSOCIATIVITY_SAMPLES))
    bad = np.nonzero(mult[mult[a, b], c] != mult[a, mult[b, c]])[0]
    if bad.size:
        i = bad[0]
        raise GroupValidationError(
            f"multiplication table is not associative on ({a[i]}, {b[i]}, {c[i]})"
        )


def from_table(
    mult: Any, labels: list[str] | None = None, name: str = "G", seed: int = settings.DEFAULT_SEED
) -> FiniteGroup:
    try:
        table = np.array(mult, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise GroupValidationError(f"multiplication table is not an integer matrix: {e}") from e
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise GroupValidationError(f"multiplication table must be square and non-empty, got shape {table.shape}")
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise GroupValidationError(f"multiplication table entries must lie in 0..{n - 1}")
    _check_latin(table)

    idx = np.arange(n)
    left = np.nonzero((table == idx[None, :]).all(axis=1))[0]
    if left.size != 1 or not np.array_equal(table[:, left[0]], idx):
        raise GroupValidationError("multiplication table has no two-sided identity")
    e = int(left[0])
    inv = np.argmax(table == e, axis=1)
    if not (table[inv, idx] == e).all():
        raise GroupValidationError("multiplication table has an element without two-sided inverse")
    _check_associativity(table, seed)

    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = [str(label) for label in labels]
    if len(labels) != n or len(set(labels)) != n:
        raise GroupValidationError(f"labels must be {n} distinct strings")

    logger.info(f"loaded group {name} of order {n} from table")
    return FiniteGroup(n, table, e, inv.astype(np.int64), tuple(labels), name)


def cycle_label(perm: tuple[int, ...]) -> str:
    cycles = Permutation(list(perm)).cyclic_form
    if not cycles:
        return "e"
    sep = "" if len(perm) <= 9 else ","
    return "".join("(" + sep.join(str(p + 1) for p in c) + ")" for c in cycles)


def from_sympy(
    group: PermutationGroup,
    labels: list[str] | None = None,
    name: str = "G",
    max_order: int = settings.MAX_GROUP_ORDER,
) -> FiniteGroup:
    """
    Multiplication table of a sympy permutation group with (pq)(x) = p(q(x)).
    Elements are sorted by image tuple, so the identity is element 0.
    """
    order = int(group.order())
    if order > max_order:
        raise CapExceededError(f"permutation group of order {order} exceeds the configured max order {max_order}")
    elements = sorted(tuple(p) for p in group.generate(af=True))
    index = {p: i for i, p in enumerate(elements)}
    perms = np.array(elements, dtype=np.int64)
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        composed = perms[i][perms]
        mult[i] = [index[tuple(row)] for row in composed.tolist()]
    if labels is None:
        labels = [cycle_label(p) for p in elements]
    logger.info(f"generated permutation group {name} of order {n} on {group.degree} points")
    return from_table(mult, labels, name)


def from_permutations(
    generators: list[list[int]],
    labels: list[str] | None = None,
    name: str = "G",
    max_order: int = settings.MAX_GROUP_ORDER,
) -> FiniteGroup:
    """Closure of 0-based permutation images under composition."""
    if not generators:
        raise GroupValidationError("at least one permutation generator is required")
    degree = len(generators[0])
    for p in generators:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GroupValidationError(f"{p} is not a permutation of 0..{degree - 1}")
    group = PermutationGroup([Permutation([int(x) for x in p]) for p in generators])
    return from_sympy(group, labels, name, max_order)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_group(dct: dict, max_order: int = settings.MAX_GROUP_ORDER) -> FiniteGroup:
    name = str(dct.get("name", "G"))
    labels = dct.get("labels")
    if labels is not None and (not isinstance(labels, list) or not all(isinstance(x, (str, int)) for x in labels)):
        raise SchemaError("'labels' must be a list of strings", field="labels")
    if "order" in dct and not _is_int(dct["order"]):
        raise SchemaError("'order' must be an integer", field="order")
    if "mult" in dct:
        G = from_table(dct["mult"], labels, name)
        if "order" in dct and dct["order"] != G.order:
            raise GroupValidationError(f"declared order {dct['order']} but table has {G.order} rows")
        return G
    if "permutations" in dct:
        gens = dct["permutations"]
        if not isinstance(gens, list) or not all(isinstance(p, list) and all(_is_int(x) for x in p) for p in gens):
            raise SchemaError("'permutations' must be a list of integer lists", field="permutations")
        return from_permutations(gens, labels, name, max_order)
    raise GroupValidationError("group description needs either 'mult' or 'permutations'")


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return from_table((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    n1, n2 = G1.order, G2.order
    mult = np.empty((n1 * n2, n1 * n2), dtype=np.int64)
    for (a1, a2), (b1, b2) in itertools.product(
        itertools.product(range(n1), range(n2)), repeat=2
    ):
        mult[a1 * n2 + a2, b1 * n2 + b2] = G1.mul(a1, b1) * n2 + G2.mul(a2, b2)
    labels = [f"({l1},{l2})" for l1 in G1.labels for l2 in G2.labels]
    return from_table(mult, labels, f"{G1.name}x{G2.name}")


def symmetric_group(n: int, max_order: int = settings.MAX_GROUP_ORDER) -> FiniteGroup:
    return from_sympy(SymmetricGroup(n), name=f"S{n}", max_order=max_order)


def index(G: "FiniteGroup | Subgroup", H: Subgroup) -> int:
    return as_subgroup(G).order // H.order


def core(G: "FiniteGroup | Subgroup", H: Subgroup) -> Subgroup:
    """N(H): the intersection of all conjugates gHg^-1, g in G."""
    ambient = as_subgroup(G)
    if not H.issubset(ambient):
        raise SubgroupError(f"{H!r} is not a subgroup of {ambient!r}")
    P = ambient.parent
    members = set(H.elements)
    for g in ambient.elements:
        members &= {int(x) for x in P.mult[P.mult[g, H.array], P.inv[g]]}
    return P.subgroup(members)


def coset_system(G: "FiniteGroup | Subgroup", H: Subgroup) -> CosetSystem:
    ambient = as_subgroup(G)
    if not H.issubset(ambient):
        raise SubgroupError(f"{H!r} is not a subgroup of {ambient!r}")
    P = ambient.parent
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for g in [P.identity] + [x for x in ambient.elements if x != P.identity]:
        if g in coset_of:
            continue
        for x in P.mult[g, H.array]:
            coset_of[int(x)] = len(reps)
        reps.append(g)
    return CosetSystem(ambient, H, tuple(reps), coset_of)


def commutator_subgroup(H: "FiniteGroup | Subgroup") -> Subgroup:
    H = as_subgroup(H)
    P = H.parent
    a, b = np.meshgrid(H.array, H.array, indexing="ij")
    comms = P.mult[P.mult[a, b], P.mult[P.inv[a], P.inv[b]]]
    return P.generated(np.unique(comms))


def all_subgroups(G: FiniteGroup, cap: int = settings.MAX_ENUMERATION_ORDER) -> list[Subgroup]:
    """Every subgroup exactly once, by cyclic extension, sorted by (order, elements)."""
    check_order_cap(G, cap, "subgroup enumeration")
    cyclic = {frozenset(_closure(G, [x])) for x in range(G.order)}
    found = set(cyclic)
    frontier = list(cyclic)
    whole = frozenset(range(G.order))
    while frontier:
        new: list[frozenset[int]] = []
        for S in frontier:
            for C in cyclic:
                if C <= S:
                    continue
                # Lagrange: a proper overgroup of S has order >= 2|S|
                T = whole if 2 * len(S) > G.order else frozenset(_closure(G, S | C))
                if T not in found:
                    found.add(T)
                    new.append(T)
        frontier = new
    subgroups = sorted(found, key=lambda s: (len(s), sorted(s)))
    logger.info(f"{G.name} has {len(subgroups)} subgroups")
    return [G.subgroup(s) for s in subgroups]


def subgroups_up_to_conjugacy(G: FiniteGroup, cap: int = settings.MAX_ENUMERATION_ORDER) -> list[Subgroup]:
    seen: set[Subgroup] = set()
    representatives = []
    for S in all_subgroups(G, cap):
        if S in seen:
            continue
        representatives.append(S)
        seen.update(S.conjugate(g) for g in range(G.order))
    return representatives


def are_conjugate(H1: Subgroup, H2: Subgroup) -> bool:
    if H1.parent is not H2.parent or H1.order != H2.order:
        return False
    return any(H1.conjugate(g) == H2 for g in range(H1.parent.order))

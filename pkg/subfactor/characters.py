from dataclasses import dataclass
from functools import lru_cache
import logging

import numpy as np

import subfactor.settings as settings
from subfactor.errors import GroupMismatchError, NumericalError
from subfactor.groups import FiniteGroup, Subgroup, as_subgroup, check_order_cap

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """A class function on group, stored as one value per conjugacy class."""

    group: Subgroup
    values: np.ndarray

    def __call__(self, g: int) -> complex:
        return complex(self.values[self.group.conjugacy.class_of[g]])

    def _check(self, other: "ClassFunction"):
        if self.group != other.group:
            raise GroupMismatchError(f"class functions live on different groups: {self.group!r} vs {other.group!r}")

    def inner(self, other: "ClassFunction") -> complex:
        """<self, other> = 1/|G| sum_g self(g) conj(other(g))"""
        self._check(other)
        sizes = np.array(self.group.conjugacy.class_sizes)
        return complex(np.sum(sizes * self.values * np.conj(other.values)) / self.group.order)

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.group, self.values * other.values)

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, np.conj(self.values))

    @property
    def degree(self) -> int:
        return int(round(self.values[0].real))

    def is_real(self, tol: float = settings.TOLERANCE) -> bool:
        return bool(np.max(np.abs(self.values.imag), initial=0.0) < tol)

    def close_to(self, other: "ClassFunction", tol: float = settings.TOLERANCE) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.values - other.values)) < tol)

    def on_elements(self) -> np.ndarray:
        conj = self.group.conjugacy
        return np.array([self.values[conj.class_of[g]] for g in self.group.elements])


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: Subgroup
    rows: tuple[ClassFunction, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.rows[i]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.degree for row in self.rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([row.values for row in self.rows])

    def conjugate_index(self, i: int) -> int:
        target = self.rows[i].conj()
        for j, row in enumerate(self.rows):
            if row.close_to(target, settings.MULTIPLICITY_TOLERANCE):
                return j
        raise NumericalError(f"conjugate of irreducible {i} is missing from the table")

    def decompose(self, chi: ClassFunction) -> list[int]:
        return [multiplicity_of(row, chi) for row in self.rows]


def multiplicity_of(irreducible: ClassFunction, chi: ClassFunction) -> int:
    m = chi.inner(irreducible)
    rounded = round(m.real)
    if abs(m - rounded) > settings.MULTIPLICITY_TOLERANCE or rounded < 0:
        raise NumericalError(f"multiplicity {m:.6g} is not a nonnegative integer")
    return int(rounded)


def _class_multiplication(H: Subgroup) -> np.ndarray:
    """M[j, a, l] = #{x in C_j : x^-1 z_l in C_a}, the structure constants of the class sums."""
    G = H.parent
    conj = H.conjugacy
    k = len(conj)
    class_index = np.full(G.order, -1, dtype=np.int64)
    for x, c in conj.class_of.items():
        class_index[x] = c
    M = np.zeros((k, k, k), dtype=np.int64)
    for l, z in enumerate(conj.representatives):
        for j, members in enumerate(conj.classes):
            ys = G.mult[G.inv[np.array(members)], z]
            M[j, :, l] += np.bincount(class_index[ys], minlength=k)
    return M


def _sort_key(row: ClassFunction) -> tuple:
    rounded = np.round(row.values, 6)
    return (row.degree, tuple((float(v.real), float(v.imag)) for v in rounded))


def _dixon_attempt(H: Subgroup, M: np.ndarray, rng: np.random.Generator) -> list[ClassFunction] | None:
    k = M.shape[0]
    sizes = np.array(H.conjugacy.class_sizes, dtype=float)
    A = np.einsum("j,jal->al", rng.standard_normal(k), M).astype(complex)
    evals, evecs = np.linalg.eig(A)
    if k > 1:
        gaps = np.abs(evals[:, None] - evals[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() < 1e-6 * max(1.0, np.abs(evals).max()):
            logger.debug("degenerate random class combination, retrying")
            return None

    rows = []
    for w in evecs.T:
        if abs(w[0]) < 1e-12:
            return None
        w = w / w[0]
        d = np.sqrt(H.order / np.sum(np.abs(w) ** 2 / sizes))
        if abs(d - round(d)) > settings.MULTIPLICITY_TOLERANCE:
            logger.debug(f"non-integral degree {d}, retrying")
            return None
        rows.append(ClassFunction(H, round(d) * w / sizes))

    table = np.array([row.values for row in rows])
    gram = (table * sizes) @ table.conj().T / H.order
    if np.max(np.abs(gram - np.eye(k))) > 1e-8:
        return None
    if sum(row.degree**2 for row in rows) != H.order:
        return None
    return rows


@lru_cache(maxsize=256)
def _character_table(H: Subgroup, seed: int) -> CharacterTable:
    M = _class_multiplication(H)
    rng = np.random.default_rng(seed)
    for attempt in range(settings.RANDOM_RETRIES):
        rows = _dixon_attempt(H, M, rng)
        if rows is None:
            continue
        trivial = [r for r in rows if np.allclose(r.values, 1.0, atol=1e-8)]
        others = sorted((r for r in rows if r not in trivial), key=_sort_key)
        logger.info(f"character table of {H!r}: {len(rows)} irreducibles after {attempt + 1} attempt(s)")
        return CharacterTable(H, tuple(trivial + others))
    raise NumericalError(f"could not split the class algebra of {H!r} after {settings.RANDOM_RETRIES} attempts")


def character_table(
    G: "FiniteGroup | Subgroup", seed: int = settings.DEFAULT_SEED, cap: int = settings.MAX_ENUMERATION_ORDER
) -> CharacterTable:
    """Irreducible characters by simultaneous diagonalization of the class multiplication matrices."""
    check_order_cap(G, cap, "character table")
    return _character_table(as_subgroup(G), seed)

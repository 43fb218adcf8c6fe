from dataclasses import dataclass, field
import logging

from dataclasses_json import DataClassJsonMixin

import subfactor.settings as settings
from subfactor.characters import CharacterTable, ClassFunction, character_table, multiplicity_of
from subfactor.errors import InconsistencyError, UsageError
from subfactor.reps import ProjectiveRep, character, conjugate, strictly_equivalent

logger = logging.getLogger(__name__)

# direct character cross-check runs while dim(sigma)^level stays below this
_DIRECT_CHECK_LIMIT = 10**12


@dataclass(frozen=True, eq=False)
class Fusion:
    """Tensoring with sigma and its conjugate, as integer matrices on irreducible indices."""

    table: CharacterTable
    chi: ClassFunction
    right: list[list[int]]
    right_bar: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.table)

    def step(self, m: list[int], bar: bool) -> list[int]:
        F = self.right_bar if bar else self.right
        return [sum(m[i] * F[i][j] for i in range(self.size)) for j in range(self.size)]

    def support(self, vertices: set[int], bar: bool) -> set[int]:
        F = self.right_bar if bar else self.right
        return {j for i in vertices for j in range(self.size) if F[i][j]}


def fusion(sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED, tol: float = settings.TOLERANCE) -> Fusion:
    """F[i][j] = multiplicity of chi_j in chi_i . chi_sigma."""
    table = character_table(sigma.group, seed)
    chi = character(sigma, tol)
    right = [[multiplicity_of(rj, ri * chi) for rj in table.rows] for ri in table.rows]
    chi_bar = chi.conj()
    right_bar = [[multiplicity_of(rj, ri * chi_bar) for rj in table.rows] for ri in table.rows]
    return Fusion(table, chi, right, right_bar)


def _unit(size: int) -> list[int]:
    return [1] + [0] * (size - 1)


def _word_counts(length: int, starts_with_bar: bool) -> tuple[int, int]:
    """(#sigma, #sigma-bar) in the alternating word of the given length."""
    first, second = (length + 1) // 2, length // 2
    return (second, first) if starts_with_bar else (first, second)


def _multiplicities(F: Fusion, counts: tuple[int, int]) -> list[int]:
    # characters commute, so only the letter counts matter
    m = _unit(F.size)
    for _ in range(counts[0]):
        m = F.step(m, bar=False)
    for _ in range(counts[1]):
        m = F.step(m, bar=True)
    return m


def _direct_multiplicities(F: Fusion, counts: tuple[int, int]) -> list[int]:
    chi = F.table.rows[0]
    for _ in range(counts[0]):
        chi = chi * F.chi
    for _ in range(counts[1]):
        chi = chi * F.chi.conj()
    return F.table.decompose(chi)


@dataclass
class BratteliLevel(DataClassJsonMixin):
    level: int
    source: list[int]
    target: list[int]
    matrix: list[list[int]]


@dataclass
class GraphEdge(DataClassJsonMixin):
    even: int
    odd: int
    multiplicity: int


@dataclass
class PrincipalGraph(DataClassJsonMixin):
    even_vertices: list[int]
    odd_vertices: list[int]
    degrees: list[int]
    edges: list[GraphEdge]
    levels: list[list[int]]
    depth: int
    self_conjugate: bool

    def degree_sequence(self) -> list[int]:
        valence = {("e", v): 0 for v in self.even_vertices} | {("o", v): 0 for v in self.odd_vertices}
        for edge in self.edges:
            valence[("e", edge.even)] += edge.multiplicity
            valence[("o", edge.odd)] += edge.multiplicity
        return sorted(valence.values())


@dataclass
class TowerReport(DataClassJsonMixin):
    sigma_dim: int
    n_max: int
    irreducible_degrees: list[int]
    upper_dims: list[int]
    lower_dims: list[int]
    upper_multiplicities: list[list[int]]
    lower_multiplicities: list[list[int]]
    inclusions: list[BratteliLevel]
    index: int
    depth: int
    wenzl_upper_dims: list[int] = field(default_factory=list)
    wenzl_lower_dims: list[int] = field(default_factory=list)


def _dim(m: list[int]) -> int:
    return sum(x * x for x in m)


def _inclusion(F: Fusion, level: int, before: list[int], after: list[int], bar: bool) -> BratteliLevel:
    matrix = F.right_bar if bar else F.right
    source = [i for i, x in enumerate(before) if x]
    target = [j for j, x in enumerate(after) if x]
    return BratteliLevel(level, source, target, [[matrix[i][j] for j in target] for i in source])


def tower(
    sigma: ProjectiveRep,
    n_max: int = settings.DEFAULT_NMAX,
    seed: int = settings.DEFAULT_SEED,
    tol: float = settings.TOLERANCE,
) -> TowerReport:
    """
    Multiplicities of the alternating words sigma, sigma sigma-bar, ... (upper) and
    sigma-bar, sigma-bar sigma, ... (lower) up to length n_max. Level n has dimension sum m_i^2.
    """
    if n_max < 1:
        raise UsageError(f"n_max must be at least 1, got {n_max}")
    F = fusion(sigma, seed, tol)
    r = sigma.dim

    upper, lower = [_unit(F.size)], [_unit(F.size)]
    inclusions = []
    for level in range(1, n_max + 1):
        bar = level % 2 == 0
        upper.append(F.step(upper[-1], bar=bar))
        lower.append(F.step(lower[-1], bar=not bar))
        inclusions.append(_inclusion(F, level, upper[-2], upper[-1], bar))

    for level in range(n_max + 1):
        if r**level > _DIRECT_CHECK_LIMIT:
            break
        for m, starts_with_bar in ((upper[level], False), (lower[level], True)):
            direct = _direct_multiplicities(F, _word_counts(level, starts_with_bar))
            if direct != m:
                logger.fatal(f"invariant violation: recursive multiplicities {m} disagree with characters {direct}")
                raise InconsistencyError(f"tower multiplicities at level {level} disagree with direct decomposition")

    degrees = list(F.table.degrees)
    dim_check = sum(m * d for m, d in zip(upper[1], degrees))
    if dim_check != r:
        raise InconsistencyError(f"sigma has dimension {r} but its decomposition sums to {dim_check}")

    # the other alternating tower: sigma-bar sigma ..., with the lower line shifted by one letter
    wenzl_upper = [_dim(_multiplicities(F, _word_counts(n + 1, False))) for n in range(n_max + 1)]
    wenzl_lower = [1] + [
        _dim(_multiplicities(F, (0, 1) if n == 1 else _word_counts(n, False)))
        for n in range(1, n_max + 1)
    ]

    graph = principal_graph(sigma, seed, tol, F)
    report = TowerReport(
        sigma_dim=r,
        n_max=n_max,
        irreducible_degrees=degrees,
        upper_dims=[_dim(m) for m in upper],
        lower_dims=[_dim(m) for m in lower],
        upper_multiplicities=upper,
        lower_multiplicities=lower,
        inclusions=inclusions,
        index=r * r,
        depth=graph.depth,
        wenzl_upper_dims=wenzl_upper,
        wenzl_lower_dims=wenzl_lower,
    )
    logger.info(f"tower of {sigma.name}: upper dims {report.upper_dims}, index {report.index}, depth {report.depth}")
    return report


def principal_graph(
    sigma: ProjectiveRep,
    seed: int = settings.DEFAULT_SEED,
    tol: float = settings.TOLERANCE,
    F: Fusion | None = None,
) -> PrincipalGraph:
    """
    Bipartite graph of irreducibles reachable from the trivial one by alternately tensoring
    with sigma (even -> odd) and sigma-bar (odd -> even). The depth is one more than the last
    level at which the set of reached irreducibles grew.
    """
    F = F or fusion(sigma, seed, tol)
    self_conjugate = F.chi.is_real(settings.MULTIPLICITY_TOLERANCE)
    if not self_conjugate:
        logger.warning(f"{sigma.name} is not self-conjugate, the graph uses sigma-bar on odd vertices")

    reached = [{0}]
    seen = {0}
    cumulative = [{0}, set()]
    last_growth = 0
    level = 0
    while True:
        level += 1
        nxt = F.support(reached[-1], bar=(level % 2 == 0))
        parity = level % 2
        if nxt <= cumulative[parity]:
            break
        cumulative[parity] |= nxt
        reached.append(nxt)
        if not nxt <= seen:
            last_growth = level
            seen |= nxt

    even, odd = sorted(cumulative[0]), sorted(cumulative[1])
    edges = [GraphEdge(i, j, F.right[i][j]) for i in even for j in odd if F.right[i][j]]
    return PrincipalGraph(
        even_vertices=even,
        odd_vertices=odd,
        degrees=list(F.table.degrees),
        edges=edges,
        levels=[sorted(s) for s in reached],
        depth=last_growth + 1,
        self_conjugate=self_conjugate,
    )


def closure_irreducibles(sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED, tol: float = settings.TOLERANCE) -> frozenset[int]:
    """Irreducibles occurring in some tensor word in sigma and sigma-bar."""
    F = fusion(sigma, seed, tol)
    found = {0}
    while True:
        grown = found | F.support(found, bar=False) | F.support(found, bar=True)
        if grown == found:
            break
        found = grown
    return frozenset(found)


def generates(sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED, tol: float = settings.TOLERANCE) -> bool:
    return len(closure_irreducibles(sigma, seed, tol)) == len(character_table(sigma.group, seed))


@dataclass
class GeneratorProperties(DataClassJsonMixin):
    self_conjugate: bool
    contains_unit_properly: bool
    generates_category: bool


def check_generator_properties(
    sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED, tol: float = settings.TOLERANCE
) -> GeneratorProperties:
    F = fusion(sigma, seed, tol)
    self_conjugate = F.chi.is_real(settings.MULTIPLICITY_TOLERANCE) and strictly_equivalent(
        sigma, conjugate(sigma), seed=seed, tol=tol
    ).equivalent
    unit = F.right[0][0]
    return GeneratorProperties(
        self_conjugate=bool(self_conjugate),
        contains_unit_properly=unit >= 1 and sigma.dim > 1,
        generates_category=generates(sigma, seed, tol),
    )

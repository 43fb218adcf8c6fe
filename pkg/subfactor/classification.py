from dataclasses import dataclass, field
import asyncio
import logging

from dataclasses_json import DataClassJsonMixin, Exclude, config

import subfactor.settings as settings
from subfactor.errors import GroupMismatchError, InconsistencyError, SubgroupError
from subfactor.groups import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    core,
    index,
    subgroups_up_to_conjugacy,
)
from subfactor.induction import build_sigma, kernel
from subfactor.reps import (
    ProjectiveRep,
    adjoint_fixed_dimension,
    commutant_dimension,
    linear_characters,
    projective_kernel,
)
from subfactor.tower import PrincipalGraph, TowerReport, generates, principal_graph, tower

logger = logging.getLogger(__name__)

POSSIBLY_ISOMORPHIC_NOTE = "possibly isomorphic — not decided"


def _assert(cond: bool, msg: str):
    if not cond:
        logger.fatal(f"invariant violation: {msg}")
        raise InconsistencyError(msg)


def _check_inputs(G: FiniteGroup, H: Subgroup, psi: ProjectiveRep):
    if H.parent is not G:
        raise SubgroupError(f"{H!r} is not a subgroup of {G.name}")
    if psi.group != H:
        raise GroupMismatchError(f"{psi.name} is a representation of {psi.group!r}, not of {H!r}")


def check_condition(G: FiniteGroup, H: Subgroup, psi: ProjectiveRep, tol: float = settings.TOLERANCE) -> bool:
    """proj ker psi restricted to the normal core N(H) is trivial"""
    _check_inputs(G, H, psi)
    return projective_kernel(psi, core(G, H), tol).is_trivial


@dataclass(frozen=True)
class Fingerprint(DataClassJsonMixin):
    index: int
    depth: int
    degree_sequence: tuple[int, ...]


@dataclass
class ClassificationRecord(DataClassJsonMixin):
    group: str
    group_order: int
    subgroup: list[str]
    psi: str
    r: int
    condition_holds: bool
    core_NH: list[str]
    projective_kernel: list[str]
    kernel_K: list[str]
    index: int
    irreducible: bool
    rel_commutant_dim: int
    category_is_UG: bool
    sigma_dim: int
    wenzl_index: int
    tower: TowerReport
    graph: PrincipalGraph
    fingerprint: Fingerprint
    fingerprint_class: int = -1
    possibly_isomorphic: bool = False
    note: str = ""
    subgroup_elements: list[int] = field(default_factory=list, metadata=config(exclude=Exclude.ALWAYS))


def report(
    G: FiniteGroup,
    H: Subgroup,
    psi: ProjectiveRep,
    n_max: int = settings.DEFAULT_NMAX,
    seed: int = settings.DEFAULT_SEED,
    tol: float = settings.TOLERANCE,
) -> ClassificationRecord:
    _check_inputs(G, H, psi)
    N = core(G, H)
    proj_kernel = projective_kernel(psi, N, tol)
    condition = proj_kernel.is_trivial

    sigma = build_sigma(H, psi, tol).total
    K = kernel(sigma, tol)
    category_is_UG = generates(sigma, seed, tol)
    _assert(
        condition == K.is_trivial == category_is_UG,
        f"condition={condition}, kernel trivial={K.is_trivial}, generates={category_is_UG} "
        f"for ({G.name}, {H.labels()}, {psi.name})",
    )
    _assert(set(K.elements) == set(proj_kernel.elements), f"kernel {K.labels()} != projective kernel {proj_kernel.labels()}")

    idx = index(G, H) * psi.dim**2
    _assert(sigma.dim == idx, f"dim sigma = {sigma.dim} but [G:H] r^2 = {idx}")

    rel_commutant = adjoint_fixed_dimension(psi)
    commutant = commutant_dimension(psi, tol)
    _assert(rel_commutant == commutant, f"character formula gives commutant dim {rel_commutant}, null space gives {commutant}")

    tw = tower(sigma, n_max, seed, tol)
    graph = principal_graph(sigma, seed, tol)
    _assert(tw.index == idx * idx, f"tower index {tw.index} != {idx}^2")

    record = ClassificationRecord(
        group=G.name,
        group_order=G.order,
        subgroup=H.labels(),
        psi=psi.name,
        r=psi.dim,
        condition_holds=condition,
        core_NH=N.labels(),
        projective_kernel=proj_kernel.labels(),
        kernel_K=K.labels(),
        index=idx,
        irreducible=commutant == 1,
        rel_commutant_dim=rel_commutant,
        category_is_UG=category_is_UG,
        sigma_dim=sigma.dim,
        wenzl_index=tw.index,
        tower=tw,
        graph=graph,
        fingerprint=Fingerprint(idx, graph.depth, tuple(graph.degree_sequence())),
        subgroup_elements=list(H.elements),
    )
    logger.info(
        f"report ({G.name}, {H.labels()}, {psi.name}): index {idx}, depth {graph.depth}, condition {condition}"
    )
    return record


@dataclass(frozen=True)
class EnumerateOptions:
    up_to_conjugacy: bool = True
    n_max: int = settings.DEFAULT_NMAX
    extra_reps: tuple[ProjectiveRep, ...] = ()
    workers: int = settings.DEFAULT_WORKERS
    seed: int = settings.DEFAULT_SEED
    tol: float = settings.TOLERANCE
    max_order: int = settings.MAX_ENUMERATION_ORDER


def candidates(G: FiniteGroup, options: EnumerateOptions) -> list[tuple[Subgroup, ProjectiveRep]]:
    """(H, psi) pairs: every degree-one character of each subgroup, then the supplied representations."""
    subgroups = (
        subgroups_up_to_conjugacy(G, options.max_order) if options.up_to_conjugacy else all_subgroups(G, options.max_order)
    )
    pairs = [(H, chi) for H in subgroups for chi in linear_characters(H, options.seed)]
    for psi in options.extra_reps:
        if psi.group.parent is not G:
            raise GroupMismatchError(f"{psi.name} is not a representation of a subgroup of {G.name}")
        pairs.append((psi.group, psi))
    logger.info(f"{G.name}: {len(subgroups)} subgroups, {len(pairs)} candidate pairs")
    return pairs


def _sort_key(record: ClassificationRecord) -> tuple:
    return (
        record.index,
        record.graph.depth,
        len(record.subgroup_elements),
        record.subgroup_elements,
        record.psi,
    )


def _finalize(records: list[ClassificationRecord]) -> list[ClassificationRecord]:
    records = sorted(records, key=_sort_key)
    classes: dict[Fingerprint, int] = {}
    for record in records:
        record.fingerprint_class = classes.setdefault(record.fingerprint, len(classes))
    sizes: dict[int, int] = {}
    for record in records:
        sizes[record.fingerprint_class] = sizes.get(record.fingerprint_class, 0) + 1
    for record in records:
        if sizes[record.fingerprint_class] > 1:
            record.possibly_isomorphic = True
            record.note = POSSIBLY_ISOMORPHIC_NOTE
    return records


def enumerate_records(G: FiniteGroup, options: EnumerateOptions = EnumerateOptions()) -> list[ClassificationRecord]:
    if options.workers > 1:
        return asyncio.run(enumerate_records_async(G, options))
    records = [report(G, H, psi, options.n_max, options.seed, options.tol) for H, psi in candidates(G, options)]
    return _finalize(records)


async def enumerate_records_async(
    G: FiniteGroup, options: EnumerateOptions = EnumerateOptions()
) -> list[ClassificationRecord]:
    limit = asyncio.Semaphore(max(1, options.workers))

    async def one(H: Subgroup, psi: ProjectiveRep) -> ClassificationRecord:
        async with limit:
            return await asyncio.to_thread(report, G, H, psi, options.n_max, options.seed, options.tol)

    records = await asyncio.gather(*[one(H, psi) for H, psi in candidates(G, options)])
    return _finalize(list(records))


@dataclass
class ConditionReport(DataClassJsonMixin):
    group: str
    subgroup: list[str]
    psi: str
    r: int
    core_NH: list[str]
    projective_kernel: list[str]
    condition_holds: bool


def condition_report(G: FiniteGroup, H: Subgroup, psi: ProjectiveRep, tol: float = settings.TOLERANCE) -> ConditionReport:
    _check_inputs(G, H, psi)
    N = core(G, H)
    proj_kernel = projective_kernel(psi, N, tol)
    return ConditionReport(G.name, H.labels(), psi.name, psi.dim, N.labels(), proj_kernel.labels(), proj_kernel.is_trivial)

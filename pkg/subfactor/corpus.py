from dataclasses import dataclass
import functools
import logging
import math

import numpy as np

import subfactor.settings as settings
from subfactor.errors import CapExceededError, SchemaError
from subfactor.groups import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    coset_system,
    cyclic_group,
    direct_product,
    symmetric_group,
)
from subfactor.induction import induce
from subfactor.reps import ProjectiveRep, conjugate, direct_sum, linear_characters, tensor, trivial_rep
from subfactor.schema import load_group_file, load_rep_file

logger = logging.getLogger(__name__)

FIXTURE_GROUPS = ("z2", "z3", "z4", "v4", "s3", "d4", "q8", "s4")
# groups the randomized kernel corpus draws from, all of order <= 24
KERNEL_CORPUS_GROUPS = ("z2", "z3", "z4", "z5", "z6", "v4", "s3", "d4", "q8", "s4", "z2xz4", "z2xs3")


def builtin_group(name: str, max_order: int = settings.MAX_GROUP_ORDER) -> FiniteGroup:
    """A bundled fixture, z<n>, s<n>, or a direct product of those written like z2xs3."""
    name = name.strip().lower()
    path = settings.FIXTURE_DIR / f"{name}.json"
    if path.exists():
        return load_group_file(path, max_order)
    if "x" in name:
        factors = [builtin_group(part, max_order) for part in name.split("x")]
        if math.prod(G.order for G in factors) > max_order:
            raise CapExceededError(f"{name} exceeds the configured max order {max_order}")
        return functools.reduce(direct_product, factors)
    if name[:1] in ("z", "s") and name[1:].isdigit() and int(name[1:]) > 0:
        n = int(name[1:])
        if name[0] == "s":
            return symmetric_group(n, max_order)
        if n > max_order:
            raise CapExceededError(f"{name} exceeds the configured max order {max_order}")
        return cyclic_group(n)
    raise SchemaError(f"no group file or builtin group named {name!r}", name)


@functools.lru_cache(maxsize=None)
def fixture_group(name: str) -> FiniteGroup:
    return builtin_group(name)


@functools.lru_cache(maxsize=None)
def pauli() -> ProjectiveRep:
    return load_rep_file(settings.FIXTURE_DIR / "pauli.json", fixture_group("v4"))


@dataclass(frozen=True, eq=False)
class KernelCase:
    group: FiniteGroup
    subgroup: Subgroup
    psi: ProjectiveRep


def kernel_corpus(seed: int = settings.DEFAULT_SEED, size: int = 60) -> list[KernelCase]:
    """Random (G, H, psi) with psi a linear character of H, plus the Pauli case."""
    rng = np.random.default_rng(seed)
    V4 = fixture_group("v4")
    cases = [KernelCase(V4, V4.whole, pauli())]
    while len(cases) < size:
        G = fixture_group(KERNEL_CORPUS_GROUPS[rng.integers(len(KERNEL_CORPUS_GROUPS))])
        subgroups = all_subgroups(G)
        H = subgroups[rng.integers(len(subgroups))]
        chars = linear_characters(H, seed)
        cases.append(KernelCase(G, H, chars[rng.integers(len(chars))]))
    logger.info(f"kernel corpus of {len(cases)} cases (seed {seed})")
    return cases


@dataclass(frozen=True, eq=False)
class ImprimitivityCase:
    group: FiniteGroup
    subgroup: Subgroup
    rho: ProjectiveRep
    psi: ProjectiveRep


def _small_reps(H: Subgroup, seed: int, rng: np.random.Generator) -> list[ProjectiveRep]:
    """Ordinary reps of H of dimension one and two built from linear characters."""
    chars = linear_characters(H, seed)
    a, b = chars[rng.integers(len(chars))], chars[rng.integers(len(chars))]
    return [a, direct_sum(a, b), trivial_rep(H, 2)]


def imprimitivity_corpus(seed: int = settings.DEFAULT_SEED, size: int = 24) -> list[ImprimitivityCase]:
    """
    Random (G, H, rho, psi) with dim rho, dim psi <= 2 and rho (x) psi ordinary. The Pauli
    pair (conj(pauli), pauli) is always included, and ordinary pairs make up the rest.
    """
    rng = np.random.default_rng(seed)
    V4 = fixture_group("v4")
    P = pauli()
    cases = [ImprimitivityCase(V4, V4.whole, conjugate(P), P)]
    names = ("z2", "z3", "z4", "v4", "s3", "d4", "q8")
    while len(cases) < size:
        G = fixture_group(names[rng.integers(len(names))])
        subgroups = all_subgroups(G)
        H = subgroups[rng.integers(len(subgroups))]
        options = _small_reps(H, seed, rng)
        rho = options[rng.integers(len(options))]
        psi = options[rng.integers(len(options))]
        cases.append(ImprimitivityCase(G, H, rho, psi))
    return cases


def imprimitivity_sigma(case: ImprimitivityCase) -> ProjectiveRep:
    return induce(tensor(case.rho, case.psi), coset_system(case.group, case.subgroup)).total

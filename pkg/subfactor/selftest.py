from dataclasses import dataclass, field
from typing import Callable
import logging
import time

import numpy as np
from dataclasses_json import DataClassJsonMixin

import subfactor.settings as settings
from subfactor.characters import character_table
from subfactor.classification import EnumerateOptions, enumerate_records, report
from subfactor.corpus import (
    FIXTURE_GROUPS,
    fixture_group,
    imprimitivity_corpus,
    imprimitivity_sigma,
    kernel_corpus,
    pauli,
)
from subfactor.errors import InconsistencyError, SubfactorError
from subfactor.groups import are_conjugate, core, coset_system
from subfactor.imprimitivity import decompose, imprimitivity_algebra
from subfactor.induction import build_sigma, frobenius_character, kernel
from subfactor.reps import character, projective_kernel, regular_rep
from subfactor.schema import dumps
from subfactor.tower import generates, tower

logger = logging.getLogger(__name__)


@dataclass
class SelftestCheck(DataClassJsonMixin):
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class SelftestReport(DataClassJsonMixin):
    seed: int
    passed: bool
    checks: list[SelftestCheck] = field(default_factory=list)


def _expect(cond: bool, msg: str):
    if not cond:
        raise InconsistencyError(msg)


def _pauli_record(seed: int) -> str:
    V4 = fixture_group("v4")
    record = report(V4, V4.whole, pauli(), seed=seed)
    got = (record.index, record.irreducible, record.graph.depth, record.condition_holds)
    _expect(got == (4, True, 2, True), f"(index, irreducible, depth, condition) = {got}")
    return "index 4, irreducible, depth 2, condition holds"


def _kernel_identity(seed: int) -> str:
    cases = kernel_corpus(seed)
    for case in cases:
        sigma = build_sigma(case.subgroup, case.psi).total
        lhs = kernel(sigma).elements
        rhs = projective_kernel(case.psi, core(case.group, case.subgroup)).elements
        _expect(lhs == rhs, f"{case.group.name} {case.subgroup.labels()} {case.psi.name}: {lhs} != {rhs}")
    return f"{len(cases)} cases"


def _generation_criterion(seed: int) -> str:
    cases = kernel_corpus(seed)
    for case in cases:
        sigma = build_sigma(case.subgroup, case.psi).total
        _expect(generates(sigma, seed) == kernel(sigma).is_trivial, f"{case.group.name} {case.subgroup.labels()} {case.psi.name}")
    return f"{len(cases)} cases"


def _frobenius(seed: int) -> str:
    worst = 0.0
    for case in kernel_corpus(seed):
        sigma = build_sigma(case.subgroup, case.psi)
        direct = character(sigma.total).values
        predicted = frobenius_character(sigma.base, sigma.cosets).values
        worst = max(worst, float(np.max(np.abs(direct - predicted))))
    _expect(worst < 1e-8, f"max deviation {worst:.3g}")
    return f"max deviation {worst:.3g}"


def _orthogonality(seed: int) -> str:
    worst = 0.0
    for name in FIXTURE_GROUPS:
        G = fixture_group(name)
        table = character_table(G, seed)
        sizes = np.array(G.whole.conjugacy.class_sizes)
        X = table.matrix
        gram = (X * sizes) @ X.conj().T / G.order
        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(table))))))
        _expect(sum(d * d for d in table.degrees) == G.order, f"{name}: sum of squared degrees != {G.order}")
    _expect(worst < 1e-8, f"orthonormality error {worst:.3g}")
    return f"{len(FIXTURE_GROUPS)} groups, error {worst:.3g}"


def _tower_values(seed: int) -> str:
    Z2 = fixture_group("z2")
    regular = tower(regular_rep(Z2), 3, seed)
    _expect(regular.lower_dims[:4] == [1, 2, 8, 32], f"Z2 regular lower dims {regular.lower_dims}")
    _expect(regular.index == 4, f"Z2 regular index {regular.index}")
    V4 = fixture_group("v4")
    sigma = build_sigma(V4.whole, pauli()).total
    pauli_tower = tower(sigma, 2, seed)
    _expect(pauli_tower.upper_dims[:3] == [1, 4, 64], f"Pauli dims {pauli_tower.upper_dims}")
    _expect(pauli_tower.index == 16, f"Pauli index {pauli_tower.index}")
    return "Z2 regular (1, 2, 8, 32) index 4, Pauli (1, 4, 64) index 16"


def _imprimitivity(seed: int) -> str:
    cases = imprimitivity_corpus(seed)
    worst = 0.0
    for case in cases:
        system = coset_system(case.group, case.subgroup)
        B = imprimitivity_algebra(case.rho.dim, case.psi.dim, system)
        found = decompose(imprimitivity_sigma(case), B, seed)
        _expect(are_conjugate(found.stabilizer, case.subgroup), f"stabilizer {found.stabilizer.labels()} vs {case.subgroup.labels()}")
        worst = max(worst, found.residual)
    _expect(worst < settings.RESIDUAL_TOLERANCE, f"residual {worst:.3g}")
    return f"{len(cases)} constructions, residual {worst:.3g}"


def _determinism(seed: int) -> str:
    S3 = fixture_group("s3")
    runs = [
        dumps([r.to_dict() for r in enumerate_records(S3, EnumerateOptions(seed=seed))]) for _ in range(2)
    ]
    _expect(runs[0] == runs[1], "two enumerations of S3 differ")
    return f"{len(runs[0])} identical bytes"


CHECKS: list[tuple[str, Callable[[int], str]]] = [
    ("pauli_record", _pauli_record),
    ("kernel_identity", _kernel_identity),
    ("generation_criterion", _generation_criterion),
    ("frobenius_oracle", _frobenius),
    ("character_orthogonality", _orthogonality),
    ("tower_values", _tower_values),
    ("imprimitivity_round_trip", _imprimitivity),
    ("determinism", _determinism),
]


def run_selftest(seed: int = settings.DEFAULT_SEED) -> SelftestReport:
    checks = []
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            detail, passed = check(seed), True
        except SubfactorError as e:
            detail, passed = f"{type(e).__name__}: {e}", False
            logger.error(f"selftest {name} failed: {detail}")
        # rounded so the report only varies with the machine in this one field
        checks.append(SelftestCheck(name, passed, detail, round(time.perf_counter() - start, 3)))
    result = SelftestReport(seed, all(c.passed for c in checks), checks)
    logger.info(f"selftest: {sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return result

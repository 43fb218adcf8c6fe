import numpy as np
import pytest

from subfactor.corpus import fixture_group, imprimitivity_corpus, imprimitivity_sigma, pauli
from subfactor.errors import CocycleError, DimensionMismatchError, NotAFactorError
from subfactor.groups import are_conjugate, coset_system
from subfactor.imprimitivity import (
    MatrixStarAlgebra,
    center,
    decompose,
    decomposition_report,
    diagonal_algebra,
    fixed_center_dimension,
    full_algebra,
    imprimitivity_algebra,
    invariant_check,
    is_factor_correspondence,
    minimal_central_projections,
    scalar_algebra,
)
from subfactor.induction import build_sigma, induce
from subfactor.reps import ProjectiveRep, linear_characters, projectively_equivalent, trivial_rep

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _coset_sigma():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(12)")])
    return build_sigma(H, trivial_rep(H)).total


def _standard_rep():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(123)")])
    return induce(linear_characters(H)[1], coset_system(S3, H)).total


def _hadamard_sign():
    Z2 = fixture_group("z2")
    return ProjectiveRep.from_matrices(Z2, np.array([np.eye(2), HADAMARD]), "hadamard")


def test_invariance():
    coset = _coset_sigma()
    cases = [
        [full_algebra(3), coset, True],
        [scalar_algebra(3), coset, True],
        [diagonal_algebra(3), coset, True],
        [diagonal_algebra(2), _hadamard_sign(), False],
        [full_algebra(2), _hadamard_sign(), True],
    ]
    for B, sigma, expected in cases:
        got = invariant_check(B, sigma)
        assert got == expected, f"Failed for {sigma.name} on a {len(B)}-dim algebra: {got} != {expected}"
    with pytest.raises(DimensionMismatchError):
        invariant_check(full_algebra(2), coset)


def test_factor_correspondence():
    S3 = fixture_group("s3")
    cases = [
        [scalar_algebra(3), _coset_sigma(), 1],
        [diagonal_algebra(3), _coset_sigma(), 1],
        [diagonal_algebra(2), trivial_rep(S3, 2), 2],
        [full_algebra(2), _standard_rep(), 1],
    ]
    for B, sigma, expected in cases:
        got = fixed_center_dimension(B, sigma)
        assert got == expected, f"Failed for {sigma.name}: fixed center dim {got} != {expected}"
        assert is_factor_correspondence(B, sigma) == (expected == 1), f"Failed for {sigma.name}"
    with pytest.raises(NotAFactorError):
        fixed_center_dimension(diagonal_algebra(2), _hadamard_sign())


def test_closure_of_spanning_set():
    unit = np.zeros((1, 2, 2), dtype=complex)
    unit[0, 0, 1] = 1
    B = MatrixStarAlgebra.from_spanning_set(unit)
    assert len(B) == 4 and B.completed, f"closure has dim {len(B)}, completed={B.completed}"
    assert B.is_closed() and B.contains_identity, "closure is not a unital *-algebra"
    assert not MatrixStarAlgebra.from_spanning_set(np.array([np.eye(2)])).completed, "scalars are already closed"


def test_central_projections():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(12)")])
    system = coset_system(S3, H)
    B = imprimitivity_algebra(2, 1, system)
    projections = minimal_central_projections(B)
    assert len(projections) == 3, f"{len(projections)} projections"
    total = sum(projections)
    assert np.allclose(total, np.eye(6), atol=1e-8), "projections do not sum to the identity"
    for i, p in enumerate(projections):
        assert np.allclose(p @ p, p, atol=1e-8), f"p{i} is not idempotent"
        for j, q in enumerate(projections[i + 1 :], start=i + 1):
            assert np.allclose(p @ q, 0, atol=1e-8), f"p{i} and p{j} are not orthogonal"

    Z = center(B)
    assert len(Z) == 3, f"center has dim {len(Z)}"
    sigma = induce(trivial_rep(H, 2), system).total
    for g in S3.whole.generators():
        S = sigma(g)
        assert all(Z.contains(S @ z @ S.conj().T) for z in Z.basis), f"Ad sigma({g}) moves the center"


def test_decompose_scalars():
    sigma = _standard_rep()
    found = decompose(sigma, scalar_algebra(2))
    assert found.stabilizer.is_whole and (found.d, found.r) == (1, 2), f"{found.stabilizer!r}, {found.d}, {found.r}"
    assert np.allclose(found.psi.matrices, sigma.matrices, atol=1e-8), "psi is not sigma"
    assert found.residual < 1e-6, f"residual {found.residual}"


def test_decompose_pauli():
    V4 = fixture_group("v4")
    P = pauli()
    sigma = build_sigma(V4.whole, P).total
    B = imprimitivity_algebra(2, 2, coset_system(V4, V4.whole))
    found = decompose(sigma, B)
    assert (found.d, found.r) == (2, 2) and found.stabilizer.is_whole, f"{found.d}, {found.r}"
    assert projectively_equivalent(found.psi, P), "recovered psi is not the Pauli representation"
    assert found.residual < 1e-6, f"residual {found.residual}"
    report = decomposition_report(found)
    assert report.stabilizer == list(V4.labels) and not report.psi_ordinary, f"{report}"


def test_round_trip():
    for case in imprimitivity_corpus(seed=7, size=12):
        system = coset_system(case.group, case.subgroup)
        B = imprimitivity_algebra(case.rho.dim, case.psi.dim, system)
        found = decompose(imprimitivity_sigma(case), B, seed=7)
        assert are_conjugate(found.stabilizer, case.subgroup), (
            f"Failed for {case.group.name}: stabilizer {found.stabilizer.labels()} vs {case.subgroup.labels()}"
        )
        assert (found.d, found.r) == (case.rho.dim, case.psi.dim), f"Failed for {case.group.name}: dims"
        assert found.residual < 1e-6, f"Failed for {case.group.name}: residual {found.residual}"
        assert found.induced.total.is_ordinary(1e-8), f"Failed for {case.group.name}: rho (x) psi not ordinary"


def test_decompose_errors():
    S3 = fixture_group("s3")
    with pytest.raises(CocycleError):
        decompose(pauli(), full_algebra(2))
    with pytest.raises(NotAFactorError):
        decompose(trivial_rep(S3, 2), diagonal_algebra(2))
    with pytest.raises(NotAFactorError):
        decompose(_hadamard_sign(), diagonal_algebra(2))

import numpy as np
import pytest

from subfactor.corpus import fixture_group, pauli
from subfactor.errors import (
    CocycleError,
    DimensionMismatchError,
    GroupMismatchError,
    NonUnitaryError,
    NotProjectiveError,
)
from subfactor.reps import (
    ProjectiveRep,
    adjoint_fixed_dimension,
    character,
    commutant_dimension,
    conjugate,
    direct_sum,
    linear_characters,
    multiplicity,
    projective_kernel,
    projectively_equivalent,
    regular_rep,
    strictly_equivalent,
    tensor,
    trivial_rep,
    validate,
)


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _rotated(pi: ProjectiveRep, U: np.ndarray, name: str) -> ProjectiveRep:
    return ProjectiveRep.from_matrices(pi.group, U @ pi.matrices @ U.conj().T, name)


def test_pauli_cocycle():
    V4 = fixture_group("v4")
    P = pauli()
    x, y, z = V4.index_of("(1,0)"), V4.index_of("(0,1)"), V4.index_of("(1,1)")
    assert abs(P.cocycle(x, y) - (-1j)) < 1e-12, f"c(x, y) = {P.cocycle(x, y)}"
    assert abs(P.cocycle(y, x) - 1j) < 1e-12, f"c(y, x) = {P.cocycle(y, x)}"
    assert abs(P.cocycle(z, z) - 1) < 1e-12, f"c(z, z) = {P.cocycle(z, z)}"
    assert not P.is_ordinary(), "Pauli representation should be genuinely projective"
    assert P.cocycle.identity_residual() < 1e-12, "cocycle identity fails"
    assert (conjugate(P).cocycle * P.cocycle).is_trivial(), "conj(P) (x) P must be ordinary"


def test_perturbed_pauli():
    P = pauli()
    mats = P.matrices.copy()
    mats[3, 0, 0] += 1e-3
    with pytest.raises(NotProjectiveError):
        ProjectiveRep.from_matrices(P.group, mats, "perturbed")


def test_non_unitary():
    Z2 = fixture_group("z2")
    mats = np.array([np.eye(2), [[1, 1], [0, -1]]], dtype=complex)
    with pytest.raises(NonUnitaryError):
        ProjectiveRep.from_matrices(Z2, mats, "skew")


def test_scalar_identity_is_rescaled():
    Z2 = fixture_group("z2")
    mats = 1j * np.array([np.eye(1), -np.eye(1)], dtype=complex)
    rep = ProjectiveRep.from_matrices(Z2, mats, "rescaled")
    assert np.allclose(rep.matrices[:, 0, 0], [1, -1]), f"{rep.matrices[:, 0, 0]}"
    assert rep.is_ordinary(), "sign character should have trivial cocycle"


def test_dimension_mismatch():
    Z2 = fixture_group("z2")
    with pytest.raises(DimensionMismatchError):
        ProjectiveRep.from_matrices(Z2, np.ones((3, 1, 1), dtype=complex))
    with pytest.raises(DimensionMismatchError):
        strictly_equivalent(trivial_rep(Z2), trivial_rep(Z2, 2))


def test_commutant():
    V4 = fixture_group("v4")
    cases = [
        [regular_rep(fixture_group("z2")), 2],
        [regular_rep(fixture_group("s3")), 6],
        [pauli(), 1],
        [trivial_rep(V4, 2), 4],
        [tensor(conjugate(pauli()), pauli()), 4],
    ]
    for rep, expected in cases:
        got = commutant_dimension(rep)
        assert got == expected, f"Failed for {rep.name}: commutant dim {got} != {expected}"
        assert adjoint_fixed_dimension(rep) == expected, f"Failed for {rep.name}: character formula disagrees"


def test_projective_kernel():
    V4 = fixture_group("v4")
    S3 = fixture_group("s3")
    cases = [
        [pauli(), V4.whole, [V4.identity]],
        [trivial_rep(V4, 2), V4.whole, list(range(4))],
        [regular_rep(S3), S3.whole, [S3.identity]],
    ]
    for rep, restrict_to, expected in cases:
        got = projective_kernel(rep, restrict_to)
        assert list(got.elements) == sorted(expected), f"Failed for {rep.name}: {got.labels()}"


def test_linear_characters():
    cases = [
        ["z3", 3],
        ["z4", 4],
        ["v4", 4],
        ["s3", 2],
        ["d4", 4],
        ["q8", 4],
        ["s4", 2],
    ]
    for name, expected in cases:
        chars = linear_characters(fixture_group(name))
        assert len(chars) == expected, f"Failed for {name}: {len(chars)} != {expected}"
        assert np.allclose(chars[0].matrices, 1.0), f"Failed for {name}: first character is not trivial"
        assert chars[0].name == "trivial", f"Failed for {name}: first character is named {chars[0].name}"
        assert all(c.is_ordinary() for c in chars), f"Failed for {name}: a character picked up a cocycle"


def test_strict_equivalence():
    Z3 = fixture_group("z3")
    _, chi, chi_sq = linear_characters(Z3)
    assert not strictly_equivalent(chi, chi_sq), "distinct characters are not strictly equivalent"
    twisted = strictly_equivalent(chi, chi_sq, twist=True)
    assert twisted and twisted.twist is not None, "characters differ by a linear character"

    P = pauli()
    V4 = P.group.parent
    U = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    rotated = ProjectiveRep.from_matrices(V4, U @ P.matrices @ U.conj().T, "rotated")
    found = strictly_equivalent(P, rotated)
    assert found, "a unitary change of basis is a strict equivalence"
    assert np.allclose(found.witness @ P.matrices @ found.witness.conj().T, rotated.matrices, atol=1e-8)


def test_projective_equivalence():
    P = pauli()
    V4 = P.group.parent
    assert projectively_equivalent(conjugate(P), P), "conj(P) agrees with P up to phases"
    assert not projectively_equivalent(trivial_rep(V4, 2), P), "scalars are never projectively Pauli"
    with pytest.raises(CocycleError):
        strictly_equivalent(conjugate(P), P)


def test_sums_and_characters():
    S3 = fixture_group("s3")
    sign = linear_characters(S3)[1]
    both = direct_sum(trivial_rep(S3), sign)
    assert both.dim == 2 and both.is_ordinary(), f"{both!r}"
    table_sign = character(sign)
    assert multiplicity(table_sign, both) == 1, "sign occurs once in trivial + sign"
    with pytest.raises(CocycleError):
        character(pauli())
    with pytest.raises(CocycleError):
        direct_sum(pauli(), trivial_rep(pauli().group, 2))
    with pytest.raises(GroupMismatchError):
        tensor(sign, trivial_rep(fixture_group("z2")))


def test_validate_predicts_cocycles():
    rng = np.random.default_rng(11)
    P = pauli()
    chars = linear_characters(P.group)
    for trial in range(5):
        A = _rotated(P, _random_unitary(rng, 2), "A")
        B = _rotated(P, _random_unitary(rng, 2), "B")
        chi = chars[rng.integers(len(chars))]
        cases = [
            [conjugate(A), A.cocycle.conj()],
            [tensor(A, chi), A.cocycle * chi.cocycle],
            [tensor(A, B), A.cocycle * B.cocycle],
            [direct_sum(A, B), A.cocycle],
        ]
        for rep, expected in cases:
            got = validate(rep.group, rep.matrices)
            assert got.close_to(expected, 1e-8), f"Failed for {rep.name} in trial {trial}"


def test_projective_kernel_is_invariant_under_equivalence():
    rng = np.random.default_rng(5)
    S3 = fixture_group("s3")
    trivial, sign = linear_characters(S3)
    cases = [
        [direct_sum(trivial, sign), S3.whole, 3],
        [pauli(), pauli().group, 1],
    ]
    for pi, K, order in cases:
        expected = projective_kernel(pi, K)
        assert len(expected) == order, f"Failed for {pi.name}: {expected.labels()}"
        for trial in range(3):
            rotated = _rotated(pi, _random_unitary(rng, pi.dim), f"rotated{trial}")
            assert strictly_equivalent(pi, rotated), f"Failed for {pi.name}: rotation is not an equivalence"
            got = projective_kernel(rotated, K)
            assert got == expected, f"Failed for {pi.name}: {got.labels()} != {expected.labels()}"


def test_trivial_and_sign_of_s3():
    trivial, sign = linear_characters(fixture_group("s3"))
    assert not strictly_equivalent(trivial, sign), "distinct characters are not strictly equivalent"
    twisted = strictly_equivalent(trivial, sign, twist=True)
    assert twisted and twisted.twist.name == sign.name, "sign is the trivial character twisted by sign"

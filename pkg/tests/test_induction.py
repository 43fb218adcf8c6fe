import numpy as np
import pytest

from subfactor.corpus import fixture_group, kernel_corpus, pauli
import subfactor.settings as settings
from subfactor.errors import CapExceededError, CocycleError, GroupMismatchError
from subfactor.groups import core, coset_system
from subfactor.induction import (
    build_sigma,
    frobenius_character,
    induce,
    induced_report,
    kernel,
    permutation_rep,
    sigma_report,
)
from subfactor.reps import (
    character,
    linear_characters,
    multiplicity,
    projective_kernel,
    regular_rep,
    strictly_equivalent,
    trivial_rep,
)
from subfactor.characters import character_table


def _values(chi, G, labels):
    return [chi(G.index_of(label)) for label in labels]


def test_induce_from_whole_group():
    S3 = fixture_group("s3")
    sign = linear_characters(S3)[1]
    induced = induce(sign, coset_system(S3, S3.whole))
    assert induced.index == 1, f"index {induced.index}"
    assert np.allclose(induced.total.matrices, sign.matrices), "inducing from G itself changed the representation"


def test_induce_from_trivial_subgroup():
    for name in ["z3", "v4", "s3", "q8"]:
        G = fixture_group(name)
        induced = induce(trivial_rep(G.trivial), coset_system(G, G.trivial))
        assert np.allclose(induced.total.matrices, regular_rep(G).matrices), f"Failed for {name}: not the regular rep"


def test_s3_over_rotations():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(123)")])
    faithful = linear_characters(H)[1]
    induced = induce(faithful, coset_system(S3, H))
    chi = character(induced.total)
    got = _values(chi, S3, ["e", "(123)", "(12)"])
    assert np.allclose(got, [2, -1, 0]), f"character {got}"
    predicted = frobenius_character(faithful, induced.cosets)
    assert np.allclose(chi.values, predicted.values), f"{chi.values} != {predicted.values}"


def test_frobenius_oracle():
    worst = 0.0
    for case in kernel_corpus(seed=3, size=30):
        induced = build_sigma(case.subgroup, case.psi)
        direct = character(induced.total).values
        predicted = frobenius_character(induced.base, induced.cosets).values
        worst = max(worst, float(np.max(np.abs(direct - predicted))))
    assert worst < 1e-8, f"max deviation {worst}"


def test_induction_in_stages():
    S3 = fixture_group("s3")
    K = S3.trivial
    H = S3.generated([S3.index_of("(12)")])
    chi = trivial_rep(K)
    staged = induce(induce(chi, coset_system(H, K)).total, coset_system(S3, H)).total
    direct = induce(chi, coset_system(S3, K)).total
    assert strictly_equivalent(staged, direct), "induction in stages is not equivalent to direct induction"


def test_build_sigma():
    V4 = fixture_group("v4")
    S3 = fixture_group("s3")
    pauli_sigma = build_sigma(V4.whole, pauli())
    assert pauli_sigma.total.dim == 4, f"dim {pauli_sigma.total.dim}"
    assert np.allclose(character(pauli_sigma.total).values, [4, 0, 0, 0]), "Pauli sigma is not the regular rep"

    H = S3.generated([S3.index_of("(12)")])
    coset = build_sigma(H, trivial_rep(H))
    chi = character(coset.total)
    got = _values(chi, S3, ["e", "(123)", "(12)"])
    assert np.allclose(got, [3, 0, 1]), f"character {got}"
    assert kernel(coset.total).is_trivial, "the coset action of S3 is faithful"

    regular = build_sigma(S3.trivial, trivial_rep(S3.trivial))
    assert regular.total.dim == 6, f"dim {regular.total.dim}"

    for sigma in [pauli_sigma, coset, regular]:
        chi = character(sigma.total)
        assert chi.is_real(), f"{sigma.total.name} has a non-real character"
        trivial_char = character_table(sigma.total.group)[0]
        assert multiplicity(trivial_char, chi) >= 1, f"{sigma.total.name} does not contain the trivial rep"


def test_kernel_identity():
    for case in kernel_corpus(seed=5, size=30):
        sigma = build_sigma(case.subgroup, case.psi).total
        lhs = kernel(sigma).elements
        rhs = projective_kernel(case.psi, core(case.group, case.subgroup)).elements
        assert lhs == rhs, f"Failed for {case.group.name} {case.subgroup.labels()} {case.psi.name}: {lhs} != {rhs}"
        assert kernel(sigma).is_normal_in(), f"Failed for {case.group.name}: kernel is not normal"


def test_kernel_extremes():
    S3 = fixture_group("s3")
    assert kernel(regular_rep(S3)).is_trivial, "regular rep is faithful"
    assert kernel(trivial_rep(S3)).is_whole, "trivial rep has the whole group as kernel"


def test_induce_errors():
    V4 = fixture_group("v4")
    S3 = fixture_group("s3")
    with pytest.raises(CocycleError):
        induce(pauli(), coset_system(V4, V4.whole))
    H = S3.generated([S3.index_of("(12)")])
    with pytest.raises(GroupMismatchError):
        induce(trivial_rep(S3.trivial), coset_system(S3, H))
    with pytest.raises(CocycleError):
        kernel(pauli())


def test_permutation_rep():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(12)")])
    perm = permutation_rep(S3, H)
    assert perm.dim == 3 and perm.name == "perm(G/H)", f"{perm!r}"
    assert np.allclose(np.abs(perm.matrices).sum(axis=1), 1.0), "not a permutation representation"


def test_reports():
    S3 = fixture_group("s3")
    H = S3.generated([S3.index_of("(12)")])
    report = sigma_report(H, trivial_rep(H))
    assert (report.sigma_dim, report.index, report.r) == (3, 3, 1), f"{report}"
    assert report.kernel == ["e"], f"kernel {report.kernel}"
    assert report.ordinary and report.frobenius_deviation < 1e-9, f"{report}"
    assert report.to_dict()["group"] == "S3", f"{report.to_dict()}"

    induced = induced_report(H, linear_characters(H)[1])
    assert (induced.dim, induced.index) == (3, 3), f"{induced}"
    assert induced.coset_representatives[0] == "e", f"{induced.coset_representatives}"


def test_induction_respects_order_cap(monkeypatch):
    S4 = fixture_group("s4")
    H = S4.generated([S4.index_of("(12)")])
    monkeypatch.setattr(settings, "MAX_ENUMERATION_ORDER", 12)
    with pytest.raises(CapExceededError):
        build_sigma(H, trivial_rep(H))

from dataclasses import dataclass
import logging

import numpy as np
from dataclasses_json import DataClassJsonMixin

import subfactor.settings as settings
from subfactor.characters import ClassFunction
from subfactor.errors import CocycleError, GroupMismatchError, InconsistencyError
from subfactor.groups import CosetSystem, FiniteGroup, Subgroup, check_order_cap, coset_system
from subfactor.reps import ProjectiveRep, character, conjugate, tensor, trivial_rep
from subfactor.schema import encode_complex

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class InducedRep:
    """
    ind(pi) on C^d (x) l^2(G/H). The basis vector v_k (x) e_i sits at index i * [G:H] + k,
    and g acts by g . (v_k (x) e_i) = v_k' (x) pi(h) e_i where g k = k' h.
    """

    base: ProjectiveRep
    cosets: CosetSystem
    total: ProjectiveRep

    @property
    def index(self) -> int:
        return self.cosets.index


def induce(pi: ProjectiveRep, system: CosetSystem, tol: float = settings.TOLERANCE) -> InducedRep:
    if pi.group != system.subgroup:
        raise GroupMismatchError(f"{pi.name} is not a representation of {system.subgroup!r}")
    if not pi.is_ordinary(tol):
        raise CocycleError(f"cannot induce {pi.name}: its cocycle is nontrivial")
    G = system.ambient
    check_order_cap(G, settings.MAX_ENUMERATION_ORDER, "induction")
    P = G.parent
    d, l = pi.dim, system.index
    mats = np.zeros((G.order, d, l, d, l), dtype=complex)
    for gi, g in enumerate(G.elements):
        for k, rep in enumerate(system.reps):
            gk = P.mul(g, rep)
            mats[gi, :, system.coset_of[gk], :, k] = pi(system.h(gk))
    mats = mats.reshape(G.order, d * l, d * l)
    total = ProjectiveRep.from_matrices(G, mats, f"ind({pi.name})", tol=tol)
    if not total.is_ordinary(tol):
        raise InconsistencyError(f"ind({pi.name}) picked up a nontrivial cocycle")
    logger.debug(f"induced {pi.name} from {system.subgroup!r}: dim {d} -> {d * l}")
    return InducedRep(pi, system, total)


def frobenius_character(pi: ProjectiveRep, system: CosetSystem, tol: float = settings.TOLERANCE) -> ClassFunction:
    """chi_ind(g) = sum over representatives k with k^-1 g k in H of chi_pi(k^-1 g k)."""
    if pi.group != system.subgroup:
        raise GroupMismatchError(f"{pi.name} is not a representation of {system.subgroup!r}")
    chi = character(pi, tol)
    G = system.ambient
    P = G.parent
    H = system.subgroup
    values = []
    for g in G.conjugacy.representatives:
        total = 0j
        for k in system.reps:
            x = P.conj(g, int(P.inv[k]))
            if x in H:
                total += chi(x)
        values.append(total)
    return ClassFunction(G, np.array(values))


def build_sigma(H: Subgroup, psi: ProjectiveRep, tol: float = settings.TOLERANCE) -> InducedRep:
    """sigma = ind_H^G(conj(psi) (x) psi); the cocycles cancel, so the base is an ordinary rep."""
    if psi.group != H:
        raise GroupMismatchError(f"{psi.name} is not a representation of {H!r}")
    base = tensor(conjugate(psi), psi)
    if not base.is_ordinary(tol):
        raise InconsistencyError(f"conj({psi.name})⊗{psi.name} has a nontrivial cocycle")
    return induce(base, coset_system(H.parent, H), tol)


def kernel(pi: ProjectiveRep, tol: float = settings.TOLERANCE) -> Subgroup:
    """{g : pi(g) = I}"""
    if not pi.is_ordinary(tol):
        raise CocycleError(f"kernel of {pi.name} needs an ordinary representation")
    eye = np.eye(pi.dim)
    return pi.group.parent.subgroup(
        g for g in pi.group.elements if np.max(np.abs(pi(g) - eye)) < tol
    )


def permutation_rep(G: FiniteGroup, H: Subgroup) -> ProjectiveRep:
    """The permutation action of G on G/H, realized as ind_H^G of the trivial rep."""
    return induce(trivial_rep(H), coset_system(G, H)).total.renamed("perm(G/H)")


@dataclass
class SigmaReport(DataClassJsonMixin):
    group: str
    subgroup: list[str]
    psi: str
    r: int
    index: int
    sigma_dim: int
    ordinary: bool
    character: list[list[float]]
    frobenius_deviation: float
    kernel: list[str]


def sigma_report(H: Subgroup, psi: ProjectiveRep, tol: float = settings.TOLERANCE) -> SigmaReport:
    sigma = build_sigma(H, psi, tol)
    direct = character(sigma.total, tol)
    predicted = frobenius_character(sigma.base, sigma.cosets, tol)
    return SigmaReport(
        group=H.parent.name,
        subgroup=H.labels(),
        psi=psi.name,
        r=psi.dim,
        index=sigma.index,
        sigma_dim=sigma.total.dim,
        ordinary=sigma.total.is_ordinary(tol),
        character=[encode_complex(v) for v in direct.values],
        frobenius_deviation=round(float(np.max(np.abs(direct.values - predicted.values))), 15),
        kernel=kernel(sigma.total, tol).labels(),
    )


@dataclass
class InducedReport(DataClassJsonMixin):
    group: str
    subgroup: list[str]
    rep: str
    dim: int
    index: int
    coset_representatives: list[str]
    character: list[list[float]]
    frobenius_deviation: float
    kernel: list[str]


def induced_report(H: Subgroup, pi: ProjectiveRep, tol: float = settings.TOLERANCE) -> InducedReport:
    induced = induce(pi, coset_system(H.parent, H), tol)
    direct = character(induced.total, tol)
    predicted = frobenius_character(pi, induced.cosets, tol)
    return InducedReport(
        group=H.parent.name,
        subgroup=H.labels(),
        rep=pi.name,
        dim=induced.total.dim,
        index=induced.index,
        coset_representatives=[H.parent.label(k) for k in induced.cosets.reps],
        character=[encode_complex(v) for v in direct.values],
        frobenius_deviation=round(float(np.max(np.abs(direct.values - predicted.values))), 15),
        kernel=kernel(induced.total, tol).labels(),
    )

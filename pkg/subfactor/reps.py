from dataclasses import dataclass
import itertools
import logging

import numpy as np
import scipy.linalg

import subfactor.settings as settings
from subfactor.characters import ClassFunction, character_table, multiplicity_of
from subfactor.errors import (
    CapExceededError,
    CocycleError,
    DimensionMismatchError,
    GroupMismatchError,
    NonUnitaryError,
    NotProjectiveError,
    NumericalError,
    SubgroupError,
)
from subfactor.groups import FiniteGroup, Subgroup, as_subgroup, check_order_cap, commutator_subgroup, index

logger = logging.getLogger(__name__)


def _dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_scalar(m: np.ndarray, tol: float) -> bool:
    d = np.diag(m)
    off = m - np.diag(d)
    return bool(np.max(np.abs(off), initial=0.0) < tol and np.max(np.abs(d - d[0])) < tol)


@dataclass(frozen=True, eq=False)
class Cocycle:
    """c(g, h) with c(g, h) pi(g) pi(h) = pi(gh), indexed by positions within group."""

    group: Subgroup
    values: np.ndarray

    def __call__(self, g: int, h: int) -> complex:
        return complex(self.values[self.group.position(g), self.group.position(h)])

    @classmethod
    def trivial(cls, group: Subgroup) -> "Cocycle":
        return cls(group, np.ones((group.order, group.order), dtype=complex))

    def is_trivial(self, tol: float = settings.TOLERANCE) -> bool:
        return bool(np.max(np.abs(self.values - 1.0)) < tol)

    def close_to(self, other: "Cocycle", tol: float = settings.TOLERANCE) -> bool:
        return self.group == other.group and bool(np.max(np.abs(self.values - other.values)) < tol)

    def conj(self) -> "Cocycle":
        return Cocycle(self.group, np.conj(self.values))

    def __mul__(self, other: "Cocycle") -> "Cocycle":
        if self.group != other.group:
            raise GroupMismatchError("cocycles live on different groups")
        return Cocycle(self.group, self.values * other.values)

    def identity_residual(self) -> float:
        """max |c(g,h)c(gh,k) - c(g,hk)c(h,k)|"""
        c, pm = self.values, self.group.cayley
        n = self.group.order
        ar = np.arange(n)
        left = c[:, :, None] * c[pm[:, :, None], ar[None, None, :]]
        right = c[ar[:, None, None], pm[None, :, :]] * c[None, :, :]
        return float(np.max(np.abs(left - right)))


@dataclass(frozen=True, eq=False)
class ProjectiveRep:
    group: Subgroup
    matrices: np.ndarray
    cocycle: Cocycle
    name: str = "pi"

    def __repr__(self) -> str:
        return f"ProjectiveRep({self.name}, dim={self.dim}, group={self.group!r})"

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[self.group.position(g)]

    def is_ordinary(self, tol: float = settings.TOLERANCE) -> bool:
        return self.cocycle.is_trivial(tol)

    def renamed(self, name: str) -> "ProjectiveRep":
        return ProjectiveRep(self.group, self.matrices, self.cocycle, name)

    @classmethod
    def from_matrices(
        cls,
        group: "FiniteGroup | Subgroup",
        matrices: np.ndarray,
        name: str = "pi",
        tol: float = settings.TOLERANCE,
    ) -> "ProjectiveRep":
        group = as_subgroup(group)
        matrices = np.array(matrices, dtype=complex)
        if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2] or matrices.shape[1] == 0:
            raise DimensionMismatchError(f"{name}: expected |H| square matrices, got shape {matrices.shape}")
        e = matrices[group.identity_position] if matrices.shape[0] == group.order else None
        if e is not None and is_scalar(e, tol) and abs(e[0, 0]) > tol and np.max(np.abs(e - np.eye(len(e)))) >= tol:
            logger.info(f"{name}: rescaling scalar pi(e) = {e[0, 0]:.6g} to the identity")
            matrices = matrices / e[0, 0]
        cocycle = validate(group, matrices, tol=tol, name=name)
        return cls(group, matrices, cocycle, name)


def validate(
    group: Subgroup, matrices: np.ndarray, tol: float = settings.TOLERANCE, name: str = "pi"
) -> Cocycle:
    """Checks the projective multiplication law and unitarity, and recovers the cocycle."""
    n = group.order
    if matrices.shape[0] != n:
        raise DimensionMismatchError(f"{name}: {matrices.shape[0]} matrices for a group of order {n}")
    r = matrices.shape[1]
    G = group.parent
    if np.max(np.abs(matrices[group.identity_position] - np.eye(r))) >= tol:
        raise NotProjectiveError(f"{name}: pi(e) is not the identity")

    pm = group.cayley
    c = np.empty((n, n), dtype=complex)
    for i in range(n):
        products = matrices[i] @ matrices
        target = matrices[pm[i]]
        # least-squares scalar, exact for non-unitary input too
        norms = np.einsum("hjk,hjk->h", np.conj(products), products).real
        if np.min(norms) < tol:
            raise NonUnitaryError(f"{name}: a product pi({G.label(group.elements[i])})pi(h) vanishes")
        coeffs = np.einsum("hjk,hjk->h", np.conj(products), target) / norms
        residual = np.max(np.abs(target - coeffs[:, None, None] * products), axis=(1, 2))
        j = int(np.argmax(residual))
        if residual[j] >= tol:
            raise NotProjectiveError(
                f"{name}: pi({G.label(group.elements[i])})pi({G.label(group.elements[j])}) "
                f"is not a scalar multiple of pi of the product (residual {residual[j]:.3g})"
            )
        c[i] = coeffs

    gram = matrices @ _dagger(matrices)
    errors = np.max(np.abs(gram - np.eye(r)), axis=(1, 2))
    i = int(np.argmax(errors))
    if errors[i] >= tol:
        raise NonUnitaryError(f"{name}: pi({G.label(group.elements[i])}) is not unitary (error {errors[i]:.3g})")
    if np.max(np.abs(np.abs(c) - 1.0)) >= tol:
        raise NotProjectiveError(f"{name}: recovered cocycle is not unimodular")
    return Cocycle(group, c)


def _same_group(pi1: ProjectiveRep, pi2: ProjectiveRep):
    if pi1.group != pi2.group:
        raise GroupMismatchError(f"{pi1.name} and {pi2.name} live on different groups")


def conjugate(pi: ProjectiveRep) -> ProjectiveRep:
    return ProjectiveRep(pi.group, np.conj(pi.matrices), pi.cocycle.conj(), f"conj({pi.name})")


def tensor(pi1: ProjectiveRep, pi2: ProjectiveRep) -> ProjectiveRep:
    _same_group(pi1, pi2)
    n, r1, r2 = pi1.group.order, pi1.dim, pi2.dim
    mats = np.einsum("gij,gkl->gikjl", pi1.matrices, pi2.matrices).reshape(n, r1 * r2, r1 * r2)
    return ProjectiveRep(pi1.group, mats, pi1.cocycle * pi2.cocycle, f"{pi1.name}⊗{pi2.name}")


def direct_sum(pi1: ProjectiveRep, pi2: ProjectiveRep, tol: float = settings.TOLERANCE) -> ProjectiveRep:
    _same_group(pi1, pi2)
    if not pi1.cocycle.close_to(pi2.cocycle, tol):
        raise CocycleError(f"{pi1.name} and {pi2.name} have different cocycles")
    n, r1, r2 = pi1.group.order, pi1.dim, pi2.dim
    mats = np.zeros((n, r1 + r2, r1 + r2), dtype=complex)
    mats[:, :r1, :r1] = pi1.matrices
    mats[:, r1:, r1:] = pi2.matrices
    return ProjectiveRep(pi1.group, mats, pi1.cocycle, f"{pi1.name}⊕{pi2.name}")


def character(pi: ProjectiveRep, tol: float = settings.TOLERANCE) -> ClassFunction:
    if not pi.is_ordinary(tol):
        raise CocycleError(f"{pi.name} has a nontrivial cocycle, its trace is not a class function")
    conj = pi.group.conjugacy
    values = np.array([np.trace(pi(g)) for g in conj.representatives])
    return ClassFunction(pi.group, values)


def multiplicity(chi_irr: ClassFunction, pi: "ProjectiveRep | ClassFunction") -> int:
    chi = character(pi) if isinstance(pi, ProjectiveRep) else pi
    return multiplicity_of(chi_irr, chi)


def commutant_basis(pi: ProjectiveRep, tol: float = settings.TOLERANCE) -> np.ndarray:
    """Basis of {X : X pi(g) = pi(g) X for all g}, as an array of shape (k, r, r)."""
    r = pi.dim
    gens = pi.group.generators()
    if not gens:
        return np.eye(r * r, dtype=complex).reshape(r * r, r, r)
    eye = np.eye(r)
    # row-major vec: vec(XA) = (I (x) A^T) vec X, vec(AX) = (A (x) I) vec X
    K = np.vstack([np.kron(eye, pi(g).T) - np.kron(pi(g), eye) for g in gens])
    null = scipy.linalg.null_space(K, rcond=tol)
    return null.T.reshape(-1, r, r)


def commutant_dimension(pi: ProjectiveRep, tol: float = settings.TOLERANCE) -> int:
    return len(commutant_basis(pi, tol))


def adjoint_fixed_dimension(pi: ProjectiveRep) -> int:
    """dim of the fixed points of Ad pi on matrices, 1/|H| sum_g |tr pi(g)|^2."""
    traces = np.abs(np.trace(pi.matrices, axis1=1, axis2=2)) ** 2
    value = traces.sum() / pi.group.order
    if abs(value - round(value)) > settings.MULTIPLICITY_TOLERANCE:
        raise NumericalError(f"average of |tr {pi.name}|^2 is {value:.6g}, not an integer")
    return int(round(value))


def projective_kernel(pi: ProjectiveRep, restrict_to: Subgroup, tol: float = settings.TOLERANCE) -> Subgroup:
    """{n in restrict_to : pi(n) is a scalar}"""
    if not restrict_to.issubset(pi.group):
        raise SubgroupError(f"{restrict_to!r} is not contained in the domain of {pi.name}")
    scalars = [g for g in restrict_to.elements if is_scalar(pi(g), tol)]
    return restrict_to.parent.subgroup(scalars)


@dataclass(frozen=True, eq=False)
class Equivalence:
    equivalent: bool
    witness: np.ndarray | None = None
    twist: "ProjectiveRep | None" = None
    phases: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _averaged_intertwiner(pi1: ProjectiveRep, pi2: ProjectiveRep, seed: np.ndarray) -> np.ndarray | None:
    X = np.mean(pi2.matrices @ seed @ _dagger(pi1.matrices), axis=0)
    s = np.linalg.svd(X, compute_uv=False)
    if s[0] < 1e-10 or s[-1] / s[0] < 1e-8:
        return None
    return scipy.linalg.polar(X)[0]


def _intertwines(U: np.ndarray, pi1: ProjectiveRep, pi2: ProjectiveRep, phases: np.ndarray | None = None) -> bool:
    target = pi2.matrices if phases is None else phases[:, None, None] * pi2.matrices
    return bool(np.max(np.abs(U @ pi1.matrices @ U.conj().T - target)) < settings.RESIDUAL_TOLERANCE)


def _strict(pi1: ProjectiveRep, pi2: ProjectiveRep, rng: np.random.Generator) -> np.ndarray | None:
    r = pi1.dim
    seeds = [np.eye(r, dtype=complex)] + [
        rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r)) for _ in range(2)
    ]
    for Y in seeds:
        U = _averaged_intertwiner(pi1, pi2, Y)
        if U is not None and _intertwines(U, pi1, pi2):
            return U
    return None


def strictly_equivalent(
    pi1: ProjectiveRep,
    pi2: ProjectiveRep,
    twist: bool = False,
    tol: float = settings.TOLERANCE,
    seed: int = settings.DEFAULT_SEED,
) -> Equivalence:
    """
    Looks for a unitary U with U pi1(g) U* = pi2(g). With twist, pi2 may additionally be
    multiplied by a linear character of the group.
    """
    _same_group(pi1, pi2)
    if pi1.dim != pi2.dim:
        raise DimensionMismatchError(f"{pi1.name} has dim {pi1.dim}, {pi2.name} has dim {pi2.dim}")
    if not pi1.cocycle.close_to(pi2.cocycle, tol):
        raise CocycleError(f"{pi1.name} and {pi2.name} have different cocycles")
    rng = np.random.default_rng(seed)
    U = _strict(pi1, pi2, rng)
    if U is not None:
        return Equivalence(True, U)
    if twist:
        for mu in linear_characters(pi1.group, seed)[1:]:
            U = _strict(pi1, tensor(pi2, mu), rng)
            if U is not None:
                logger.info(f"{pi1.name} ~ {pi2.name} after twisting by {mu.name}")
                return Equivalence(True, U, twist=mu)
    return Equivalence(False)


def _det_normalized(pi: ProjectiveRep) -> np.ndarray:
    dets = np.linalg.det(pi.matrices)
    return pi.matrices / (dets ** (1.0 / pi.dim))[:, None, None]


def projectively_equivalent(
    pi1: ProjectiveRep,
    pi2: ProjectiveRep,
    seed: int = settings.DEFAULT_SEED,
    max_trials: int = 4096,
) -> Equivalence:
    """
    Looks for a unitary U and phases mu(g) with U pi1(g) U* = mu(g) pi2(g). After normalizing both
    to determinant one, mu only varies by r-th roots of unity on each generator.
    """
    _same_group(pi1, pi2)
    if pi1.dim != pi2.dim:
        raise DimensionMismatchError(f"{pi1.name} has dim {pi1.dim}, {pi2.name} has dim {pi2.dim}")
    r = pi1.dim
    gens = pi1.group.generators()
    trials = r ** len(gens)
    if trials > max_trials:
        raise CapExceededError(f"projective equivalence search needs {trials} twists, cap is {max_trials}")
    rng = np.random.default_rng(seed)
    n1, n2 = _det_normalized(pi1), _det_normalized(pi2)
    positions = [pi1.group.position(g) for g in gens]
    roots = np.exp(2j * np.pi * np.arange(r) / r)
    eye = np.eye(r)

    for twist in itertools.product(range(r), repeat=len(gens)):
        if gens:
            K = np.vstack([
                np.kron(eye, n1[p].T) - roots[t] * np.kron(n2[p], eye) for p, t in zip(positions, twist)
            ])
            null = scipy.linalg.null_space(K, rcond=settings.TOLERANCE)
            if null.shape[1] == 0:
                continue
            coeffs = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
            X = (null @ coeffs).reshape(r, r)
        else:
            X = np.eye(r, dtype=complex)
        s = np.linalg.svd(X, compute_uv=False)
        if s[-1] / s[0] < 1e-8:
            continue
        U = scipy.linalg.polar(X)[0]
        conj = U @ pi1.matrices @ U.conj().T
        phases = np.einsum("gij,gij->g", np.conj(pi2.matrices), conj) / r
        if _intertwines(U, pi1, pi2, phases):
            return Equivalence(True, U, phases=phases)
    return Equivalence(False)


def trivial_rep(H: "FiniteGroup | Subgroup", dim: int = 1) -> ProjectiveRep:
    H = as_subgroup(H)
    mats = np.broadcast_to(np.eye(dim, dtype=complex), (H.order, dim, dim)).copy()
    return ProjectiveRep(H, mats, Cocycle.trivial(H), "trivial" if dim == 1 else f"trivial{dim}")


def regular_rep(G: "FiniteGroup | Subgroup") -> ProjectiveRep:
    """Left regular representation, L(g) e_x = e_gx."""
    G = as_subgroup(G)
    check_order_cap(G, settings.MAX_ENUMERATION_ORDER, "regular representation")
    n = G.order
    mats = np.zeros((n, n, n), dtype=complex)
    cols = np.arange(n)
    for i in range(n):
        mats[i, G.cayley[i], cols] = 1.0
    return ProjectiveRep(G, mats, Cocycle.trivial(G), "regular")


def linear_characters(H: "FiniteGroup | Subgroup", seed: int = settings.DEFAULT_SEED) -> list[ProjectiveRep]:
    """The degree-one irreducibles of H, trivial first, with values snapped to roots of unity."""
    H = as_subgroup(H)
    table = character_table(H, seed)
    n = H.order
    chars = []
    for i, row in enumerate(table.rows):
        if row.degree != 1:
            continue
        values = row.on_elements()
        steps = np.round(np.angle(values) * n / (2 * np.pi))
        mats = np.exp(2j * np.pi * steps / n).reshape(n, 1, 1)
        label = "trivial" if np.all(steps % n == 0) else f"chi{i}"
        chars.append(ProjectiveRep.from_matrices(H, mats, label))
    expected = index(H, commutator_subgroup(H))
    if len(chars) != expected:
        raise NumericalError(f"found {len(chars)} linear characters of {H!r}, expected [H:H'] = {expected}")
    return chars

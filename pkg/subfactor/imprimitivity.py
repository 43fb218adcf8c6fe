from dataclasses import dataclass
import logging
import math

import numpy as np
from dataclasses_json import DataClassJsonMixin

import subfactor.settings as settings
from subfactor.errors import (
    CocycleError,
    DecompositionError,
    DimensionMismatchError,
    InconsistencyError,
    NotAFactorError,
    NumericalError,
)
from subfactor.groups import CosetSystem, Subgroup, coset_system
from subfactor.induction import InducedRep, induce
from subfactor.reps import ProjectiveRep, tensor

logger = logging.getLogger(__name__)


def _dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _span(mats: np.ndarray, tol: float = settings.TOLERANCE) -> np.ndarray:
    """Orthonormal basis (trace inner product) of the linear span of mats."""
    k, m, _ = mats.shape
    flat = mats.reshape(k, m * m)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    if s.size == 0 or s[0] < tol:
        return np.zeros((0, m, m), dtype=complex)
    rank = int(np.sum(s > tol * s[0]))
    return vh[:rank].reshape(rank, m, m)


@dataclass(frozen=True, eq=False)
class MatrixStarAlgebra:
    """
    A *-subalgebra of m x m matrices, stored as a basis orthonormal for <a, b> = tr(a* b).
    completed is set when closing a spanning set under products and adjoints added elements.
    """

    dim: int
    basis: np.ndarray
    completed: bool = False

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def _flat(self) -> np.ndarray:
        return self.basis.reshape(len(self.basis), -1)

    def project(self, x: np.ndarray) -> np.ndarray:
        coeffs = np.conj(self._flat) @ x.reshape(-1)
        return (coeffs @ self._flat).reshape(self.dim, self.dim)

    def contains(self, x: np.ndarray, tol: float = settings.RESIDUAL_TOLERANCE) -> bool:
        return bool(np.max(np.abs(x - self.project(x))) < tol * max(1.0, np.max(np.abs(x))))

    @property
    def contains_identity(self) -> bool:
        return self.contains(np.eye(self.dim))

    def is_closed(self, tol: float = settings.RESIDUAL_TOLERANCE) -> bool:
        if not self.contains_identity:
            return False
        if not all(self.contains(b.conj().T, tol) for b in self.basis):
            return False
        return all(self.contains(a @ b, tol) for a in self.basis for b in self.basis)

    def random_element(self, rng: np.random.Generator, self_adjoint: bool = True) -> np.ndarray:
        k = len(self.basis)
        coeffs = rng.standard_normal(k) if self_adjoint else rng.standard_normal(k) + 1j * rng.standard_normal(k)
        x = np.tensordot(coeffs, self.basis, axes=1)
        return (x + x.conj().T) / 2 if self_adjoint else x

    @classmethod
    def from_spanning_set(cls, mats: np.ndarray, tol: float = settings.TOLERANCE) -> "MatrixStarAlgebra":
        mats = np.asarray(mats, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[0] == 0:
            raise DimensionMismatchError(f"expected a non-empty list of square matrices, got shape {mats.shape}")
        m = mats.shape[1]
        given = len(_span(mats, tol))
        basis = _span(np.concatenate([mats, _dagger(mats), np.eye(m)[None]]), tol)
        while True:
            products = np.einsum("aij,bjk->abik", basis, basis).reshape(-1, m, m)
            grown = _span(np.concatenate([basis, products]), tol)
            if len(grown) == len(basis):
                break
            basis = grown
        completed = len(basis) > given
        if completed:
            logger.info(f"closing the spanning set grew the algebra from {given} to {len(basis)} dimensions")
        return cls(m, basis, completed)


def _units(m: int) -> np.ndarray:
    return np.eye(m * m, dtype=complex).reshape(m * m, m, m)


def scalar_algebra(m: int) -> MatrixStarAlgebra:
    return MatrixStarAlgebra(m, (np.eye(m, dtype=complex) / np.sqrt(m))[None])


def full_algebra(m: int) -> MatrixStarAlgebra:
    return MatrixStarAlgebra(m, _units(m))


def diagonal_algebra(m: int) -> MatrixStarAlgebra:
    return MatrixStarAlgebra(m, _units(m)[:: m + 1])


def imprimitivity_algebra(d: int, r: int, system: CosetSystem) -> MatrixStarAlgebra:
    """L(C^d) (x) C1_r (x) l-infinity(G/H), in the basis ordering used by induce."""
    l = system.index
    slot = np.eye(r) / np.sqrt(r)
    basis = [
        np.kron(np.kron(unit, slot), np.diag(np.eye(l)[k])) for unit in _units(d) for k in range(l)
    ]
    return MatrixStarAlgebra(d * r * l, np.array(basis, dtype=complex))


def invariant_check(B: MatrixStarAlgebra, sigma: ProjectiveRep) -> bool:
    """sigma(g) B sigma(g)* = B for every g, tested on generators of the group."""
    if B.dim != sigma.dim:
        raise DimensionMismatchError(f"algebra acts on C^{B.dim}, {sigma.name} on C^{sigma.dim}")
    for g in sigma.group.generators():
        S = sigma(g)
        if not all(B.contains(x) for x in S @ B.basis @ S.conj().T):
            return False
    return True


def _central_element(B: MatrixStarAlgebra, rng: np.random.Generator) -> np.ndarray | None:
    # x -> sum_i b_i x b_i* over an orthonormal basis maps B onto its center
    b = B.random_element(rng)
    z = np.einsum("kij,jl,kml->im", B.basis, b, np.conj(B.basis))
    z = (z + z.conj().T) / 2
    scale = np.max(np.abs(np.linalg.eigvalsh(z)))
    return None if scale < 1e-12 else z / scale


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            groups.append([])
        groups[-1].append(i)
    return groups


def _canonical_key(p: np.ndarray) -> tuple:
    return tuple(-np.round(np.real(np.diag(p)), 6))


def minimal_central_projections(
    B: MatrixStarAlgebra, seed: int | np.random.Generator = settings.DEFAULT_SEED
) -> tuple[np.ndarray, ...]:
    """Spectral projections of a generic central element, validated against a second one."""
    rng = np.random.default_rng(seed)
    for attempt in range(settings.RANDOM_RETRIES):
        z1, z2 = _central_element(B, rng), _central_element(B, rng)
        if z1 is None or z2 is None:
            continue
        w, V = np.linalg.eigh(z1)
        projections = [V[:, c] @ V[:, c].conj().T for c in _clusters(w, settings.CLUSTER_TOLERANCE)]
        ok = all(B.contains(p) for p in projections)
        for p in projections:
            lam = np.trace(p @ z2).real / np.trace(p).real
            ok = ok and np.max(np.abs(p @ z2 @ p - lam * p)) < settings.RESIDUAL_TOLERANCE
        if ok:
            logger.debug(f"center split into {len(projections)} projections after {attempt + 1} attempt(s)")
            return tuple(sorted(projections, key=_canonical_key))
        logger.warning("central element was degenerate, retrying with a new one")
    raise NumericalError(f"could not split the center after {settings.RANDOM_RETRIES} attempts, try another seed")


def center(B: MatrixStarAlgebra, seed: int = settings.DEFAULT_SEED) -> MatrixStarAlgebra:
    projections = np.array(minimal_central_projections(B, seed))
    return MatrixStarAlgebra(B.dim, _span(projections))


def projection_action(sigma: ProjectiveRep, projections: tuple[np.ndarray, ...]) -> np.ndarray:
    """action[i, j] = index of sigma(g_i) p_j sigma(g_i)*, g_i the i-th element of the group."""
    n, l = sigma.group.order, len(projections)
    action = np.empty((n, l), dtype=np.int64)
    for i in range(n):
        S = sigma.matrices[i]
        for j, p in enumerate(projections):
            moved = S @ p @ S.conj().T
            hits = [k for k, q in enumerate(projections) if np.max(np.abs(moved - q)) < settings.RESIDUAL_TOLERANCE]
            if len(hits) != 1:
                raise NumericalError(f"Ad {sigma.name} does not permute the central projections")
            action[i, j] = hits[0]
    return action


def orbits(action: np.ndarray) -> list[list[int]]:
    remaining = set(range(action.shape[1]))
    result = []
    while remaining:
        start = min(remaining)
        orbit = sorted({int(x) for x in action[:, start]})
        result.append(orbit)
        remaining -= set(orbit)
    return result


def fixed_center_dimension(B: MatrixStarAlgebra, sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED) -> int:
    if not invariant_check(B, sigma):
        raise NotAFactorError(f"algebra is not invariant under Ad {sigma.name}")
    return len(orbits(projection_action(sigma, minimal_central_projections(B, seed))))


def is_factor_correspondence(B: MatrixStarAlgebra, sigma: ProjectiveRep, seed: int = settings.DEFAULT_SEED) -> bool:
    return fixed_center_dimension(B, sigma, seed) == 1


@dataclass(frozen=True, eq=False)
class ImprimitivitySystem:
    sigma: ProjectiveRep
    algebra: MatrixStarAlgebra
    projections: tuple[np.ndarray, ...]
    action: np.ndarray
    stabilizer: Subgroup
    cosets: CosetSystem
    d: int
    r: int
    rho: ProjectiveRep
    psi: ProjectiveRep
    unitary: np.ndarray
    induced: InducedRep
    residual: float


def _range_basis(p: np.ndarray) -> np.ndarray:
    if np.allclose(p, np.eye(len(p)), atol=settings.RESIDUAL_TOLERANCE):
        return np.eye(len(p), dtype=complex)
    w, V = np.linalg.eigh((p + p.conj().T) / 2)
    return V[:, w > 0.5]


def _tensor_basis(A: MatrixStarAlgebra, d: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary Q with Q* A Q = L(C^d) (x) 1_r, columns ordered i * r + s."""
    if d == 1:
        return np.eye(A.dim, dtype=complex)
    for _ in range(settings.RANDOM_RETRIES):
        w, V = np.linalg.eigh(A.random_element(rng))
        blocks = _clusters(w, settings.CLUSTER_TOLERANCE)
        if len(blocks) != d or any(len(b) != r for b in blocks):
            continue
        f = [V[:, b] @ V[:, b].conj().T for b in blocks]
        first = V[:, blocks[0]]
        x = A.random_element(rng, self_adjoint=False)
        columns = [first]
        for i in range(1, d):
            t = f[i] @ x @ f[0]
            lam = np.trace(t.conj().T @ t).real / r
            if lam < 1e-8:
                break
            columns.append(t @ first / np.sqrt(lam))
        else:
            Q = np.hstack(columns)
            if np.max(np.abs(Q.conj().T @ Q - np.eye(A.dim))) < settings.RESIDUAL_TOLERANCE:
                return Q
    raise NumericalError(f"could not find matrix units for the {d}x{d} block, try another seed")


def _split(p: np.ndarray, d: int, r: int) -> tuple[np.ndarray, np.ndarray, float]:
    """p = rho (x) psi with rho gauged so its first nonzero entry is positive real."""
    if d == 1:
        return np.eye(1, dtype=complex), p, 0.0
    if r == 1:
        return p, np.eye(1, dtype=complex), 0.0
    T = p.reshape(d, r, d, r).transpose(0, 2, 1, 3).reshape(d * d, r * r)
    u, s, vh = np.linalg.svd(T)
    rho = np.sqrt(d) * u[:, 0].reshape(d, d)
    psi = (s[0] / np.sqrt(d)) * vh[0].reshape(r, r)
    flat = rho.reshape(-1)
    lead = flat[np.argmax(np.abs(flat) > 1e-8)]
    phase = lead / abs(lead)
    rho, psi = rho / phase, psi * phase
    return rho, psi, float(np.max(np.abs(np.kron(rho, psi) - p)))


def decompose(
    sigma: ProjectiveRep,
    B: MatrixStarAlgebra,
    seed: int = settings.DEFAULT_SEED,
    tol: float = settings.TOLERANCE,
) -> ImprimitivitySystem:
    """
    Recovers (H, rho, psi) and a unitary U with U sigma(g) U* = ind(rho (x) psi)(g) from an
    Ad sigma-invariant algebra whose center is permuted transitively.
    """
    rng = np.random.default_rng(seed)
    numeric_tol = max(tol, 1e-8)
    if not sigma.is_ordinary(tol):
        raise CocycleError(f"{sigma.name} must be an ordinary representation")
    if not invariant_check(B, sigma):
        raise NotAFactorError(f"algebra is not invariant under Ad {sigma.name}")

    projections = minimal_central_projections(B, rng)
    action = projection_action(sigma, projections)
    found = orbits(action)
    if len(found) != 1:
        raise NotAFactorError(f"G acts on the {len(projections)} central projections with {len(found)} orbits")

    G = sigma.group
    H = G.parent.subgroup(g for i, g in enumerate(G.elements) if action[i, 0] == 0)
    system = coset_system(G, H)
    l, m = system.index, sigma.dim
    if l != len(projections):
        raise InconsistencyError(f"orbit of size {len(projections)} but stabilizer has index {l}")

    W = _range_basis(projections[0])
    K = W.shape[1]
    block = MatrixStarAlgebra(K, _span(W.conj().T @ B.basis @ W))
    d = math.isqrt(len(block))
    if d * d != len(block) or K % d or K * l != m:
        raise DecompositionError(f"compressed algebra of dimension {len(block)} on C^{K} is not L(C^d) (x) 1")
    r = K // d
    J = W @ _tensor_basis(block, d, r, rng)

    U_star = np.empty((m, K, l), dtype=complex)
    for k, rep in enumerate(system.reps):
        U_star[:, :, k] = sigma(rep) @ J
    U = U_star.reshape(m, K * l).conj().T

    rhos, psis = [], []
    for h in H.elements:
        rho, psi, residual = _split(J.conj().T @ sigma(h) @ J, d, r)
        if residual > settings.RESIDUAL_TOLERANCE:
            raise DecompositionError(f"pi({G.parent.label(h)}) is not a product rho (x) psi (residual {residual:.3g})")
        rhos.append(rho)
        psis.append(psi)
    rho = ProjectiveRep.from_matrices(H, np.array(rhos), "rho", numeric_tol)
    psi = ProjectiveRep.from_matrices(H, np.array(psis), "psi", numeric_tol)
    if not (rho.cocycle * psi.cocycle).is_trivial(numeric_tol):
        raise InconsistencyError("recovered rho and psi do not have conjugate cocycles")

    induced = induce(tensor(rho, psi), system, numeric_tol)
    residual = float(np.max(np.abs(U @ sigma.matrices @ U.conj().T - induced.total.matrices)))
    if residual > settings.RESIDUAL_TOLERANCE:
        logger.fatal(f"invariant violation: U sigma U* differs from ind(rho (x) psi) by {residual:.3g}")
        raise InconsistencyError(f"U sigma U* differs from ind(rho (x) psi) by {residual:.3g}")
    logger.info(f"decomposed {sigma.name}: stabilizer {H.labels()}, d={d}, r={r}, residual {residual:.3g}")
    return ImprimitivitySystem(sigma, B, projections, action, H, system, d, r, rho, psi, U, induced, residual)


@dataclass
class DecompositionReport(DataClassJsonMixin):
    group: str
    algebra_dim: int
    algebra_completed: bool
    projections: int
    stabilizer: list[str]
    d: int
    r: int
    rho_ordinary: bool
    psi_ordinary: bool
    residual: float


def decomposition_report(system: ImprimitivitySystem) -> DecompositionReport:
    return DecompositionReport(
        group=system.sigma.group.parent.name,
        algebra_dim=len(system.algebra),
        algebra_completed=system.algebra.completed,
        projections=len(system.projections),
        stabilizer=system.stabilizer.labels(),
        d=system.d,
        r=system.r,
        rho_ordinary=system.rho.is_ordinary(1e-8),
        psi_ordinary=system.psi.is_ordinary(1e-8),
        residual=round(system.residual, 12),
    )

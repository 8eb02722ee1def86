"""Spin-half chain realization of the tile dynamics.

Each local generator acts on a pair of adjacent spins through a rank-one
block on their antiparallel subspace, with a hopping twist u and a
diagonal built from a unimodular parameter q (the generator satisfies the
Temperley-Lieb relations with loop weight q + 1/q).  Summing the local
generators gives, up to constants, minus a twisted anisotropic Heisenberg
Hamiltonian; the tilt parameters of the Markov route map onto (Delta, u),
so the largest tilted eigenvalue can be cross-checked against the
ground-state energy of a Hermitian matrix.  At the stochastic point the
ground energy is -3L/4 on the zero-magnetization sector.

Basis conventions: site k of an L-site ring is bit k of an integer basis
label, bit value 1 meaning spin up; the zero-magnetization sector is the
set of labels with exactly L/2 set bits in increasing label order.
Generator indices are 1-based (bond i couples sites i-1 and i mod L in
bit positions) so that the even/odd alternating products read naturally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import acos, exp
from cmath import exp as cexp, pi

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .scgf import ConvergenceError

_DENSE_SECTOR_DIM = 64       # below this, skip ARPACK entirely
_DENSE_FALLBACK_DIM = 4096   # dense rescue cap when ARPACK disappoints
_HERMITIAN_TOL = 1e-12


def combinatorial_twist(length: int) -> complex:
    """The unimodular hopping twist of the stochastic point, e^{2 pi i/(3L)}."""
    return cexp(2j * pi / (3 * length))


@dataclass(frozen=True)
class XXZParams:
    """Chain length, anisotropy and hopping twist.

    The stochastic point is delta_aniso = -1/2 with the combinatorial
    twist; twist None selects that twist for the given length.
    """
    length: int
    delta_aniso: float = -0.5
    twist: complex | None = None

    def resolved_twist(self) -> complex:
        return combinatorial_twist(self.length) if self.twist is None else self.twist


@lru_cache(maxsize=None)
def sector_basis(length: int) -> tuple[int, ...]:
    """Zero-magnetization basis labels (L/2 set bits), ascending."""
    if length < 2 or length % 2:
        raise ValueError(f"chain length must be even and >= 2, got {length}")
    n_up = length // 2
    return tuple(b for b in range(1 << length) if bin(b).count("1") == n_up)


def tl_generator_matrix(length: int, q: complex, u: complex, bond: int) -> sp.csr_matrix:
    """Local generator on the full 2^L space, bond in 1..L (cyclic).

    On the antiparallel pair states (up,down)/(down,up) of the bond the
    operator is [[q, u], [1/u, 1/q]]; parallel pairs are annihilated.
    """
    if not 1 <= bond <= length:
        raise ValueError(f"bond index must lie in 1..{length}, got {bond}")
    i = bond - 1
    j = bond % length
    dim = 1 << length
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    flip = (1 << i) | (1 << j)
    for b in range(dim):
        bi = (b >> i) & 1
        bj = (b >> j) & 1
        if bi == bj:
            continue
        if bi:
            rows += [b, b ^ flip]
            vals += [q, 1 / u]
        else:
            rows += [b, b ^ flip]
            vals += [1 / q, u]
        cols += [b, b]
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=complex)


def restrict_to_sector(matrix: sp.spmatrix, length: int) -> np.ndarray:
    """Dense restriction of a full-space operator to the S_z = 0 sector."""
    basis = list(sector_basis(length))
    return matrix.tocsr()[basis][:, basis].toarray()


def build_xxz_full(length: int, delta_aniso: float, twist: complex,
                   convention: str = "bond") -> sp.csr_matrix:
    """Twisted Heisenberg Hamiltonian on the full 2^L space.

    convention "bond" spreads the twist over every hopping term;
    "boundary" concentrates twist**L on the wrap bond only.  The two are
    related by a diagonal gauge and share their spectrum.
    """
    if convention not in ("bond", "boundary"):
        raise ValueError(f"unknown twist convention {convention!r}")
    dim = 1 << length
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    diag = np.zeros(dim, dtype=complex)
    for bond in range(length):
        i = bond
        j = (bond + 1) % length
        flip = (1 << i) | (1 << j)
        if convention == "bond":
            hop = twist
        else:
            hop = twist ** length if j < i else 1.0
        for b in range(dim):
            bi = (b >> i) & 1
            bj = (b >> j) & 1
            if bi == bj:
                diag[b] += -delta_aniso / 2
            else:
                diag[b] += delta_aniso / 2
                rows.append(b ^ flip)
                cols.append(b)
                vals.append(-1 / hop if bi else -hop)
    h = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=complex)
    return h + sp.diags(diag)


def build_xxz(params: XXZParams) -> sp.csr_matrix:
    """Hamiltonian on the zero-magnetization sector (bond-twist convention)."""
    length = params.length
    twist = params.resolved_twist()
    basis = sector_basis(length)
    index = {b: k for k, b in enumerate(basis)}
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    diag = np.zeros(len(basis), dtype=complex)
    for k, b in enumerate(basis):
        for bond in range(length):
            i = bond
            j = (bond + 1) % length
            bi = (b >> i) & 1
            bj = (b >> j) & 1
            if bi == bj:
                diag[k] += -params.delta_aniso / 2
                continue
            diag[k] += params.delta_aniso / 2
            rows.append(index[b ^ ((1 << i) | (1 << j))])
            cols.append(k)
            vals.append(-1 / twist if bi else -twist)
    n = len(basis)
    h = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex)
    return h + sp.diags(diag)


def hermiticity_defect(matrix: sp.spmatrix) -> float:
    """Largest absolute entry of M - M^dagger."""
    defect = (matrix - matrix.getH()).tocoo()
    return float(np.abs(defect.data).max()) if defect.nnz else 0.0


def ground_energy(params: XXZParams, residual_tol: float = 1e-10) -> float:
    """Minimal sector eigenvalue via a restarted Lanczos-type solve.

    The returned value is guarded by an explicit residual check; small
    sectors (or an unconverged iterative solve on a modest one) go
    through a dense Hermitian eigensolve instead.
    """
    twist = params.resolved_twist()
    if abs(abs(twist) - 1) > _HERMITIAN_TOL:
        raise ValueError("ground_energy requires a unimodular twist")
    h = build_xxz(params)
    if hermiticity_defect(h) > _HERMITIAN_TOL:
        raise ValueError("Hamiltonian is not Hermitian for these parameters")
    n = h.shape[0]
    if n <= _DENSE_SECTOR_DIM:
        return float(np.linalg.eigvalsh(h.toarray())[0])
    try:
        values, vectors = eigsh(h, k=1, which="SA", tol=0.0, maxiter=50 * n)
        vec = vectors[:, 0]
        residual = float(np.linalg.norm(h @ vec - values[0] * vec))
        if residual <= residual_tol:
            return float(values[0])
    except Exception:
        residual = float("inf")
    if n <= _DENSE_FALLBACK_DIM:
        return float(np.linalg.eigvalsh(h.toarray())[0])
    raise ConvergenceError(
        f"extremal eigensolve residual {residual:.2e} exceeds "
        f"{residual_tol:.1e} on sector dimension {n}")


# ---------------------------------------------------------------------------
# bridge between tilt parameters and chain parameters


@dataclass(frozen=True)
class BridgeParameters:
    delta_aniso: float
    twist: complex
    q: complex
    gamma: float
    theta: float


def bridge_parameters(length: int, alpha: float, beta: float) -> BridgeParameters:
    """Map tilt strengths (alpha, beta) to chain parameters (Delta, u).

    The loop weight fixes q: q + 1/q = e^{-beta}, so gamma = arccos of
    e^{-beta}/2 and Delta = -cos gamma.  The global-avalanche weight fixes
    the twist through e^alpha = (u^N + u^{-N})^2 with N = L/2, solved on
    the branch containing the stochastic point.  Requires beta >= -ln 2
    and alpha <= ln 4 to keep both angles real.
    """
    half_weight = exp(-beta) / 2
    if half_weight > 1:
        raise ValueError(f"beta = {beta} leaves the real-anisotropy regime")
    root_weight = exp(alpha / 2) / 2
    if root_weight > 1:
        raise ValueError(f"alpha = {alpha} leaves the unimodular-twist regime")
    gamma = acos(half_weight)
    theta = acos(root_weight) / (length // 2)
    return BridgeParameters(
        delta_aniso=-half_weight,
        twist=cexp(1j * theta),
        q=cexp(1j * gamma),
        gamma=gamma,
        theta=theta,
    )


def deformed_tl_operator(length: int, alpha: float, beta: float) -> np.ndarray:
    """Sector matrix e^beta * sum_i e_i - L, the tilted generator's spin image."""
    p = bridge_parameters(length, alpha, beta)
    dim = 1 << length
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for bond in range(1, length + 1):
        total = total + tl_generator_matrix(length, p.q, p.twist, bond)
    full = exp(beta) * total - length * sp.identity(dim, dtype=complex, format="csr")
    return restrict_to_sector(full, length)


def lambda_bridge(length: int, alpha: float = 0.0, beta: float = 0.0,
                  residual_tol: float = 1e-10) -> float:
    """Cumulant generating function via the chain: -e^beta * E_min - 3L/4."""
    p = bridge_parameters(length, alpha, beta)
    energy = ground_energy(
        XXZParams(length, p.delta_aniso, p.twist), residual_tol)
    return -exp(beta) * energy - 0.75 * length


# ---------------------------------------------------------------------------
# relation checks


@dataclass(frozen=True)
class TLReport:
    """Worst absolute errors of the defining and quotient matrix relations."""
    length: int
    two_q: complex
    kappa: complex
    idempotent_error: float
    neighbor_error: float
    commutation_error: float
    quotient_error: float

    def passed(self, tol: float = 1e-12) -> bool:
        return max(self.idempotent_error, self.neighbor_error,
                   self.commutation_error, self.quotient_error) < tol


def tl_relations_check(length: int, q: complex | None = None,
                       u: complex | None = None) -> TLReport:
    """Verify the algebra relations as dense matrix identities.

    Defaults to the stochastic-point parameters; any unimodular (q, u)
    may be passed instead.  The quotient relations use the alternating
    products J = e1 e3 ... and I = e2 e4 ... with weight
    kappa = (u^N + u^{-N})^2.
    """
    if length > 12:
        raise ValueError("dense relation check is limited to length <= 12")
    if q is None:
        q = cexp(1j * pi / 3)
    if u is None:
        u = combinatorial_twist(length)
    gens = [tl_generator_matrix(length, q, u, b).toarray()
            for b in range(1, length + 1)]
    two_q = q + 1 / q
    n_half = length // 2
    kappa = (u ** n_half + u ** -n_half) ** 2

    def worst(m: np.ndarray) -> float:
        return float(np.abs(m).max())

    idem = max(worst(e @ e - two_q * e) for e in gens)
    neigh = max(
        worst(gens[i] @ gens[(i + d) % length] @ gens[i] - gens[i])
        for i in range(length) for d in (1, -1))
    comm = 0.0
    for i in range(length):
        for j in range(i + 2, length):
            if i == 0 and j == length - 1:
                continue
            comm = max(comm, worst(gens[i] @ gens[j] - gens[j] @ gens[i]))
    odd = gens[0]
    for k in range(2, length, 2):
        odd = odd @ gens[k]
    even = gens[1]
    for k in range(3, length, 2):
        even = even @ gens[k]
    quot = max(worst(odd @ even @ odd - kappa * odd),
               worst(even @ odd @ even - kappa * even))
    return TLReport(length, two_q, kappa, idem, neigh, comm, quot)

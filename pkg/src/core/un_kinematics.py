"""
Generic n-level machinery: the Hermitian basis, the Jordan and Lie
products, the trace scalar product, characteristic polynomials and
orbit types under unitary conjugation.
"""
from typing import List, Optional, Union

import numpy as np
from scipy.linalg import expm

from src.components.data_components import HermitianMatrix, OrbitDescriptor
from src.core.config_manager import get_config
from src.core.errors import DimensionMismatchError, InvalidInputError

MatrixLike = Union[HermitianMatrix, np.ndarray, list]


def as_hermitian(value: MatrixLike) -> HermitianMatrix:
    if isinstance(value, HermitianMatrix):
        return value
    return HermitianMatrix(np.asarray(value))


def _pair(h1: MatrixLike, h2: MatrixLike):
    a, b = as_hermitian(h1), as_hermitian(h2)
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n} vs {b.n}")
    return a.entries, b.entries


def hermitian_basis(n: int) -> List[HermitianMatrix]:
    """
    Basis of n×n Hermitian matrices: projectors E_aa, then the symmetric
    E_ab = |a⟩⟨b| + |b⟩⟨a| and finally E'_ab = i(|a⟩⟨b| − |b⟩⟨a|),
    pairs in lexicographic order a < b.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"basis dimension must be a positive integer, got {n}")
    units = np.eye(n)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]

    basis = [HermitianMatrix(np.outer(units[a], units[a])) for a in range(n)]
    for a, b in pairs:
        basis.append(HermitianMatrix(np.outer(units[a], units[b]) + np.outer(units[b], units[a])))
    for a, b in pairs:
        basis.append(HermitianMatrix(1j * (np.outer(units[a], units[b]) - np.outer(units[b], units[a]))))
    return basis


def jordan_product(h1: MatrixLike, h2: MatrixLike) -> HermitianMatrix:
    a, b = _pair(h1, h2)
    return HermitianMatrix(0.5 * (a @ b + b @ a))


def lie_wedge(h1: MatrixLike, h2: MatrixLike) -> HermitianMatrix:
    a, b = _pair(h1, h2)
    return HermitianMatrix(1j * (a @ b - b @ a))


def trace_inner(h1: MatrixLike, h2: MatrixLike) -> float:
    a, b = _pair(h1, h2)
    return float(np.real(np.trace(a @ b)))


def char_poly_coeffs(h: MatrixLike) -> np.ndarray:
    """
    Coefficients c_1..c_n of P(λ) = λⁿ + c_1 λⁿ⁻¹ + ... + c_n from the power
    traces p_k = Tr Hᵏ via k·c_k = −(p_k + c_1 p_{k−1} + ... + c_{k−1} p_1).
    """
    m = as_hermitian(h).entries
    n = m.shape[0]
    traces = []
    power = np.eye(n, dtype=complex)
    for _ in range(n):
        power = power @ m
        traces.append(float(np.real(np.trace(power))))

    coeffs: List[float] = []
    for k in range(1, n + 1):
        s = traces[k - 1]
        for j in range(1, k):
            s += coeffs[j - 1] * traces[k - j - 1]
        coeffs.append(-s / k)
    return np.array(coeffs)


def _eigen_clusters(m: np.ndarray, tol: float) -> List[List[float]]:
    """Groups descending eigenvalues whose neighbour gap is below tol·scale."""
    n = m.shape[0]
    values = np.sort(np.linalg.eigvalsh(m))[::-1]
    # Scale from the traceless part keeps the grouping invariant under H → H + cI
    centred = values - np.trace(m).real / n
    scale = max(1.0, float(np.max(np.abs(centred))))

    groups = [[values[0]]]
    for prev, value in zip(values[:-1], values[1:]):
        if prev - value <= tol * scale:
            groups[-1].append(value)
        else:
            groups.append([value])
    return groups


def orbit_type(h: MatrixLike, tol: Optional[float] = None) -> OrbitDescriptor:
    if tol is None:
        tol = get_config().get("kinematics.orbit_tolerance", 1e-9)
    if tol <= 0:
        raise InvalidInputError("orbit tolerance must be positive")
    m = as_hermitian(h).entries
    n = m.shape[0]

    stabilizer = [len(g) for g in _eigen_clusters(m, tol)]
    dimension = n * n - sum(k * k for k in stabilizer)
    return OrbitDescriptor(
        signature=sorted(stabilizer, reverse=True),
        orbit_dimension=dimension,
        stabilizer=stabilizer,
    )


def same_orbit(h1: MatrixLike, h2: MatrixLike, tol: Optional[float] = None) -> bool:
    if tol is None:
        tol = get_config().get("kinematics.orbit_tolerance", 1e-9)
    if tol <= 0:
        raise InvalidInputError("orbit tolerance must be positive")
    a, b = _pair(h1, h2)
    c1, c2 = char_poly_coeffs(a), char_poly_coeffs(b)
    scale = np.maximum(1.0, np.maximum(np.abs(c1), np.abs(c2)))
    return bool(np.all(np.abs(c1 - c2) <= tol * scale))


def degenerate_projector(h: MatrixLike, tol: Optional[float] = None) -> HermitianMatrix:
    """
    For H = λ(P_λ) + μ|ψ⟩⟨ψ| with a doubly degenerate λ, returns the
    pure-state projector (μ − λ)⁻¹(H − λI) onto the simple eigenspace.
    """
    if tol is None:
        tol = get_config().get("kinematics.orbit_tolerance", 1e-9)
    m = as_hermitian(h).entries
    groups = _eigen_clusters(m, tol)
    sizes = sorted(len(g) for g in groups)
    if len(groups) != 2 or sizes[0] != 1:
        raise InvalidInputError(
            f"expected one doubly degenerate eigenvalue and one simple eigenvalue, got multiplicities {sizes}"
        )
    degenerate = next(g for g in groups if len(g) > 1)
    simple = next(g for g in groups if len(g) == 1)
    lam = float(np.mean(degenerate))
    mu = float(simple[0])
    n = m.shape[0]
    return HermitianMatrix((m - lam * np.eye(n)) / (mu - lam))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianMatrix:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianMatrix(0.5 * scale * (x + x.conj().T))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """exp(K) for a random anti-Hermitian K."""
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return expm(0.5 * (x - x.conj().T))

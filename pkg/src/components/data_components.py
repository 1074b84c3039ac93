from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.components.tags import DegeneracyClass
from src.core.config_manager import get_config
from src.core.errors import GroupElementError, InvalidInputError

# Slot labels for the independent rest-frame curvature entries (1-based, as printed)
SLOTS = ("12", "45", "67")


@dataclass(slots=True)
class HermitianMatrix:
    """
    n×n Hermitian matrix. Raw data is checked against the Hermiticity
    tolerance and then symmetrized, so entries[j, k] == conj(entries[k, j]).
    """
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidInputError(f"expected a non-empty square matrix, got shape {m.shape}")
        tol = get_config().get("kinematics.hermitian_tolerance", 1e-8)
        scale = max(1.0, float(np.max(np.abs(m))))
        defect = float(np.max(np.abs(m - m.conj().T)))
        if defect > tol * scale:
            raise InvalidInputError(f"matrix is not Hermitian (defect {defect:.3e})")
        self.entries = 0.5 * (m + m.conj().T)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(slots=True)
class OrbitDescriptor:
    signature: List[int]          # multiplicities, sorted descending
    orbit_dimension: int
    stabilizer: List[int]         # unitary factor sizes in eigenvalue order

    @property
    def stabilizer_label(self) -> str:
        return "×".join(f"U({m})" for m in self.stabilizer)


@dataclass(slots=True)
class CoordinateForm:
    xi0: float
    xi: np.ndarray  # octet vector, shape (8,)


@dataclass(slots=True)
class GroupElement:
    """3×3 special-unitary matrix, validated on construction."""
    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=complex)
        if a.shape != (3, 3):
            raise GroupElementError(f"expected a 3x3 matrix, got shape {a.shape}")
        tol = get_config().get("algebra.group_tolerance", 1e-8)
        unitarity = float(np.max(np.abs(a.conj().T @ a - np.eye(3))))
        det_defect = abs(np.linalg.det(a) - 1.0)
        if unitarity > tol or det_defect > tol:
            raise GroupElementError(
                f"not special unitary (|A†A - I| = {unitarity:.3e}, |det A - 1| = {det_defect:.3e})"
            )
        self.matrix = a


@dataclass(slots=True)
class AdjointImage:
    matrix: np.ndarray  # 8×8 real orthogonal


@dataclass(slots=True)
class SpectralData:
    e1: float
    e2: float
    e3: float
    phi: float
    e12: float
    e23: float
    e13: float
    degeneracy: DegeneracyClass

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3])


@dataclass(slots=True)
class TangentPair:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        tol = get_config().get("algebra.traceless_tolerance", 1e-10)
        for name in ("a", "b"):
            m = np.array(getattr(self, name), dtype=complex)
            if m.shape != (3, 3):
                raise InvalidInputError(f"direction {name} must be 3x3, got {m.shape}")
            if abs(np.trace(m)) > tol * max(1.0, float(np.max(np.abs(m)))):
                raise InvalidInputError(f"direction {name} is not traceless")
            setattr(self, name, m)


@dataclass(slots=True)
class CurvatureTwoForm:
    level: int
    coefficients: np.ndarray  # 8×8 real, antisymmetric

    def __post_init__(self):
        v = np.asarray(self.coefficients, dtype=float)
        self.coefficients = 0.5 * (v - v.T)

    def slot(self, label: str) -> float:
        """Entry V_rs for a two-digit 1-based label such as "12"."""
        r, s = int(label[0]) - 1, int(label[1]) - 1
        return float(self.coefficients[r, s])


@dataclass(slots=True)
class AntisymTensor:
    components: np.ndarray  # T_rs, 8×8 real antisymmetric
    tensor: np.ndarray      # T^{ab}_{cd} stored as [a, b, c, d]


@dataclass(slots=True)
class IrreducibleParts:
    w: np.ndarray       # W^{abc}
    w_bar: np.ndarray   # W̄_{abc}
    x: np.ndarray       # octet vector X_r


@dataclass(slots=True)
class DecoupletField:
    delta: np.ndarray      # Δ^{abc}
    delta_bar: np.ndarray  # Δ̄_{abc}


@dataclass(slots=True)
class OctetCoefficients:
    level: int
    lam: float
    mu: float
    prefactor: float  # 1 / (ξ₃(ξ₃² − 3ξ₈²)) = −1 / (4 E₁₂E₁₃E₂₃)


@dataclass(slots=True)
class SingularExpansion:
    level: int
    epsilon: float
    e13: float
    e23: float
    # leading coefficients of 1/ε² per slot
    octet: Dict[str, float] = field(default_factory=dict)
    decouplet: Dict[str, float] = field(default_factory=dict)
    total: Dict[str, float] = field(default_factory=dict)
    # exact rest-frame contributions at this ε
    octet_values: Dict[str, float] = field(default_factory=dict)
    decouplet_values: Dict[str, float] = field(default_factory=dict)
    total_values: Dict[str, float] = field(default_factory=dict)


@dataclass(slots=True)
class GapEstimate:
    surface: str  # "sigma12" or "sigma23"
    predicted: float
    actual: float


@dataclass(slots=True)
class LoopPath:
    samples: np.ndarray  # (N, 8), closed: the last sample connects to the first

    def __post_init__(self):
        xs = np.array(self.samples, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != 8 or xs.shape[0] == 0:
            raise InvalidInputError(f"loop samples must have shape (N, 8), got {xs.shape}")
        if not np.all(np.isfinite(xs)):
            raise InvalidInputError("loop samples must be finite")
        self.samples = xs

    def reversed(self) -> "LoopPath":
        return LoopPath(self.samples[::-1].copy())


@dataclass(slots=True)
class SurfacePatch:
    """Sampled map [0,1]² → R⁸ on a uniform (u, v) grid; bilinear in between."""
    samples: np.ndarray  # (nu, nv, 8)

    def __post_init__(self):
        xs = np.array(self.samples, dtype=float)
        if xs.ndim != 3 or xs.shape[2] != 8 or xs.shape[0] < 2 or xs.shape[1] < 2:
            raise InvalidInputError(f"patch samples must have shape (nu>=2, nv>=2, 8), got {xs.shape}")
        if not np.all(np.isfinite(xs)):
            raise InvalidInputError("patch samples must be finite")
        self.samples = xs

    @property
    def shape(self) -> Tuple[int, int]:
        return self.samples.shape[0], self.samples.shape[1]


@dataclass(slots=True)
class PhaseSumResult:
    phases: Tuple[float, float, float]
    total: float  # (φ⁽¹⁾ + φ⁽²⁾ + φ⁽³⁾) wrapped to (−π, π]


@dataclass(slots=True)
class SuiteResult:
    name: str
    passed: bool
    detail: Dict[str, float] = field(default_factory=dict)
    message: Optional[str] = None

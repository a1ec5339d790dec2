"""Two-qubit channel states and entanglement measures.

Conventions used throughout the package:

- A 4x4 density matrix is indexed in the product basis 00, 01, 10, 11
  (first qubit slowest).
- Partial transposition acts on the second qubit unless told otherwise.
- Negativity is normalised so a maximally entangled state scores 1:
  N(rho) = -2 * (sum of negative eigenvalues of the partial transpose).

The X-shaped family (nonzero entries on the diagonal and anti-diagonal
only) is closed under partial transposition, so its spectrum splits into
two 2x2 blocks and never needs a general eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class PureSchmidtChannel:
    """Pure resource state cos(theta)|00> + sin(theta)|11>.

    theta in [0, pi/4]; theta = pi/4 is maximally entangled, theta = 0 is
    a product state.
    """

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 4:
            raise ValidationError(f"theta must lie in [0, pi/4], got {self.theta}")


@dataclass(frozen=True)
class XState:
    """Mixed two-qubit state with X-shaped support.

    Diagonal a11..a44 (real, nonnegative, unit trace) plus anti-diagonal
    corners a14 and a23; the mirror entries are their conjugates. Positive
    semidefiniteness reduces to |a14|^2 <= a11*a44 and |a23|^2 <= a22*a33.
    """

    a11: float
    a22: float
    a33: float
    a44: float
    a14: complex = 0j
    a23: complex = 0j

    def __post_init__(self):
        diag = {"a11": self.a11, "a22": self.a22, "a33": self.a33, "a44": self.a44}
        for name, value in diag.items():
            if value < -TRACE_TOL:
                raise ValidationError(f"{name} must be nonnegative, got {value}")
        trace = self.a11 + self.a22 + self.a33 + self.a44
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace must be 1, got {trace}")
        if abs(self.a14) ** 2 > self.a11 * self.a44 + PSD_TOL:
            raise ValidationError("|a14|^2 exceeds a11*a44: state not positive")
        if abs(self.a23) ** 2 > self.a22 * self.a33 + PSD_TOL:
            raise ValidationError("|a23|^2 exceeds a22*a33: state not positive")


@dataclass(frozen=True)
class WernerGenChannel:
    """Convex mix of a pure Schmidt state with the maximally mixed state.

    p_w * |phi(theta)><phi(theta)| + (1 - p_w) * I/4, with p_w in [0, 1]
    and theta in [0, pi/4].
    """

    p_w: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.p_w <= 1.0:
            raise ValidationError(f"p_w must lie in [0, 1], got {self.p_w}")
        if not 0.0 <= self.theta <= math.pi / 4:
            raise ValidationError(f"theta must lie in [0, pi/4], got {self.theta}")


ChannelState = PureSchmidtChannel | XState | WernerGenChannel


def make_pure_channel(theta: float) -> PureSchmidtChannel:
    """Construct a pure Schmidt channel; theta = pi/4 gives a Bell pair."""
    return PureSchmidtChannel(theta)


def make_werner_gen(p_w: float, theta: float) -> WernerGenChannel:
    return WernerGenChannel(p_w, theta)


def as_x_state(channel: ChannelState) -> XState:
    """Express any supported channel in the X-shaped parametrisation."""
    if isinstance(channel, XState):
        return channel
    if isinstance(channel, PureSchmidtChannel):
        c, s = math.cos(channel.theta), math.sin(channel.theta)
        return XState(c * c, 0.0, 0.0, s * s, complex(c * s), 0j)
    if isinstance(channel, WernerGenChannel):
        c, s = math.cos(channel.theta), math.sin(channel.theta)
        p = channel.p_w
        q = (1.0 - p) / 4.0
        return XState(p * c * c + q, q, q, p * s * s + q, complex(p * c * s), 0j)
    raise TypeError(f"unsupported channel type: {type(channel).__name__}")


def to_density_matrix(channel: ChannelState) -> np.ndarray:
    """Return the channel as a 4x4 complex density matrix."""
    x = as_x_state(channel)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = x.a11, x.a22, x.a33, x.a44
    m[0, 3] = x.a14
    m[3, 0] = np.conj(x.a14)
    m[1, 2] = x.a23
    m[2, 1] = np.conj(x.a23)
    return m


def validate_density_matrix(m: np.ndarray) -> None:
    """Check shape, Hermiticity, unit trace and positivity; raise if bad."""
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise ValidationError("matrix is not Hermitian")
    if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
        raise ValidationError(f"trace must be 1, got {np.trace(m)}")
    eigs = np.linalg.eigvalsh(m)
    if eigs[0] < -PSD_TOL:
        raise ValidationError(f"matrix has negative eigenvalue {eigs[0]}")


def partial_transpose(m: np.ndarray, subsystem: int = 1) -> np.ndarray:
    """Transpose one qubit of a 4x4 matrix (0 = first, 1 = second)."""
    if subsystem not in (0, 1):
        raise DomainError(f"subsystem must be 0 or 1, got {subsystem}")
    t = np.asarray(m, dtype=complex).reshape(2, 2, 2, 2)
    axes = (2, 1, 0, 3) if subsystem == 0 else (0, 3, 2, 1)
    return t.transpose(axes).reshape(4, 4)


def _block_eigen(p: float, q: float, off: float) -> tuple[float, float]:
    # eigenvalues of [[p, c], [conj(c), q]] with |c| = off
    mid = (p + q) / 2.0
    h = math.hypot((p - q) / 2.0, off)
    return mid + h, mid - h


def negativity(state: ChannelState | np.ndarray) -> float:
    """Negativity of a two-qubit state, normalised to 1 for Bell pairs.

    Channel objects use the closed-form X-block spectrum; raw matrices go
    through a dense Hermitian eigensolver on the partial transpose.
    """
    if isinstance(state, np.ndarray):
        eigs = np.linalg.eigvalsh(partial_transpose(state))
        return float(-2.0 * eigs[eigs < 0.0].sum())
    x = as_x_state(state)
    # partial transpose swaps the two anti-diagonal corners
    eigs = _block_eigen(x.a11, x.a44, abs(x.a23)) + _block_eigen(x.a22, x.a33, abs(x.a14))
    return -2.0 * sum(min(e, 0.0) for e in eigs)


def random_x_state(rng: np.random.Generator) -> XState:
    """Draw a valid X-shaped state.

    Diagonal from a flat Dirichlet; each corner sampled uniformly in
    magnitude inside its positivity disk, with a uniform phase, so no
    rejection loop is needed.
    """
    d = rng.dirichlet(np.ones(4))
    radius = rng.uniform(0.0, 1.0, size=2)
    phase = rng.uniform(0.0, 2.0 * math.pi, size=2)
    a14 = radius[0] * math.sqrt(d[0] * d[3]) * complex(math.cos(phase[0]), math.sin(phase[0]))
    a23 = radius[1] * math.sqrt(d[1] * d[2]) * complex(math.cos(phase[1]), math.sin(phase[1]))
    return XState(float(d[0]), float(d[1]), float(d[2]), float(d[3]), a14, a23)

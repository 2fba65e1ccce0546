"""Three-level Lambda-system model: coupling matrices, eigensystem, observables.

Conventions used throughout the package: hbar = 1 and the pulse width T = 1,
so every rate (Rabi amplitudes, dissipation, noise strength, inverse
correlation time) is expressed in units of 1/T and every time in units of T.
All builders return the dimensionless 3x3 matrix M such that the physical
Hamiltonian is H = M/2; the Schrodinger equation then reads
dpsi/dt = -(i/2) M psi.

Level ordering is |1>, |2>, |3> with |2> the lossy intermediate level. The
pump field couples |1>-|2>, the Stokes field couples |2>-|3>, and the
counterdiabatic field couples |1>-|3> directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ThreeLevelState",
    "AngleFrame",
    "EigenSystem",
    "INITIAL_STATE",
    "build_h0",
    "build_hcd",
    "build_heps",
    "mixing_angle",
    "angle_frame",
    "eigensystem",
    "numeric_hcd_oracle",
    "populations",
]


@dataclass(frozen=True)
class ThreeLevelState:
    """Complex amplitudes of levels |1>, |2>, |3>."""

    c1: complex
    c2: complex
    c3: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=complex)

    @classmethod
    def from_array(cls, psi: np.ndarray) -> "ThreeLevelState":
        return cls(complex(psi[0]), complex(psi[1]), complex(psi[2]))


#: Every run starts in level |1>.
INITIAL_STATE = ThreeLevelState(1.0 + 0.0j, 0.0j, 0.0j)


@dataclass(frozen=True)
class AngleFrame:
    """Polar parametrization of the two drive amplitudes.

    omega is the root-mean-square Rabi amplitude sqrt(omega_p^2 + omega_s^2)
    and theta the mixing angle with tan(theta) = omega_p / omega_s.
    """

    omega: float
    theta: float


@dataclass(frozen=True)
class EigenSystem:
    """Instantaneous eigenvectors and energies of the drive matrix at angle theta.

    phi0 is the dark state (cos(theta), 0, -sin(theta)) with zero component on
    the lossy level; phi_plus/phi_minus are the bright states
    (sin(theta), +-1, cos(theta)) / sqrt(2). Energies are those of H = M/2:
    e0 = 0 and e_plus/e_minus = +-omega/2.
    """

    phi0: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    e0: float
    e_plus: float
    e_minus: float


def build_h0(omega_p: float, omega_s: float, gamma: float) -> np.ndarray:
    """Drive-plus-dissipation matrix M0.

    Pump couples (1,2), Stokes couples (2,3) and the loss from the
    intermediate level enters as the non-Hermitian diagonal entry -i*gamma,
    which makes the population of |2> decay at rate gamma.
    """
    if omega_p < 0 or omega_s < 0 or gamma < 0:
        raise ValueError(
            f"rates must be nonnegative, got omega_p={omega_p}, "
            f"omega_s={omega_s}, gamma={gamma}"
        )
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = m[1, 0] = omega_p
    m[1, 2] = m[2, 1] = omega_s
    m[1, 1] = -1j * gamma
    return m


def build_hcd(omega_d: float) -> np.ndarray:
    """Counterdiabatic matrix M_cd coupling |1> and |3> with amplitude omega_d.

    Hermitian by construction for any real omega_d.
    """
    m = np.zeros((3, 3), dtype=complex)
    m[0, 2] = 1j * omega_d
    m[2, 0] = -1j * omega_d
    return m


def build_heps(eps1: float, eps2: float, eps3: float) -> np.ndarray:
    """Diagonal noise matrix M_eps = diag(eps1, eps2, eps3).

    A uniform shift eps1 = eps2 = eps3 is a global phase and leaves all
    populations unchanged.
    """
    return np.diag([eps1, eps2, eps3]).astype(complex)


def mixing_angle(omega_p: float, omega_s: float) -> float:
    """Mixing angle theta = atan2(omega_p, omega_s), in [0, pi/2] for
    nonnegative amplitudes.

    The two-argument form stays finite when omega_s -> 0; the angle is
    undefined when both amplitudes vanish.
    """
    if omega_p == 0.0 and omega_s == 0.0:
        raise ValueError("mixing angle undefined for omega_p = omega_s = 0")
    return float(np.arctan2(omega_p, omega_s))


def angle_frame(omega_p: float, omega_s: float) -> AngleFrame:
    """Polar form (omega, theta) of the drive pair."""
    return AngleFrame(
        omega=float(np.hypot(omega_p, omega_s)),
        theta=mixing_angle(omega_p, omega_s),
    )


def eigensystem(theta: float, omega: float) -> EigenSystem:
    """Instantaneous eigenvectors and energies at mixing angle theta.

    Sign convention: phi0(pi/2) = (0, 0, -1), so the dark state reaches
    level |3> up to an irrelevant sign.
    """
    if omega < 0:
        raise ValueError(f"omega must be nonnegative, got {omega}")
    c, s = np.cos(theta), np.sin(theta)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    return EigenSystem(
        phi0=np.array([c, 0.0, -s]),
        phi_plus=np.array([s, 1.0, c]) * inv_sqrt2,
        phi_minus=np.array([s, -1.0, c]) * inv_sqrt2,
        e0=0.0,
        e_plus=0.5 * omega,
        e_minus=-0.5 * omega,
    )


def numeric_hcd_oracle(
    theta_of_t: Callable[[float], float], t: float, dt_fd: float
) -> np.ndarray:
    """Finite-difference evaluation of the transitionless-driving matrix.

    Builds i * sum_n (|dphi_n><phi_n| - <phi_n|dphi_n> |phi_n><phi_n|) from
    central differences of the instantaneous eigenvectors and rescales to the
    M convention (factor 2). Independent cross-check for build_hcd with
    omega_d = 2 * dtheta/dt; agreement is O(dt_fd^2).
    """
    if dt_fd <= 0:
        raise ValueError(f"dt_fd must be positive, got {dt_fd}")
    ahead = eigensystem(theta_of_t(t + dt_fd), 0.0)
    behind = eigensystem(theta_of_t(t - dt_fd), 0.0)
    here = eigensystem(theta_of_t(t), 0.0)
    m = np.zeros((3, 3), dtype=complex)
    for hi, lo, phi in (
        (ahead.phi0, behind.phi0, here.phi0),
        (ahead.phi_plus, behind.phi_plus, here.phi_plus),
        (ahead.phi_minus, behind.phi_minus, here.phi_minus),
    ):
        dphi = (hi - lo) / (2.0 * dt_fd)
        m += np.outer(dphi, phi) - (phi @ dphi) * np.outer(phi, phi)
    return 2j * m


def populations(state: ThreeLevelState) -> tuple[float, float, float, float]:
    """Level populations (p1, p2, p3) and their sum P."""
    p1 = abs(state.c1) ** 2
    p2 = abs(state.c2) ** 2
    p3 = abs(state.c3) ** 2
    return p1, p2, p3, p1 + p2 + p3

"""Canonical-ensemble quantities for an exactly diagonalized Hamiltonian.

Temperatures are in energy units (k_B = 1), entropies in nats. All partition
sums are evaluated in the shifted domain (weights relative to the ground
energy), so inverse temperatures up to ~1e6 never overflow; ``log_Z`` is the
primary stored quantity and ``Z`` may round to inf for extreme parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qops import (
    DensityOperator,
    HermitianOperator,
    PureState,
    SpectralDecomposition,
    _density_unchecked,
    eig_hermitian,
)

#: Ground levels within this of E0 count as degenerate.
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class CanonicalScalars:
    """Scalar canonical quantities for an energy spectrum at one temperature."""

    log_Z: float
    F: float
    U: float
    S: float
    p: float  # Boltzmann weight of a single ground state, exp(-beta E0)/Z


def canonical_scalars(energies: np.ndarray, temperature: float) -> CanonicalScalars:
    """Evaluate log Z, F, U, S and the single-ground-state weight p.

    ``p`` is the weight of one ground state: for a g-fold degenerate ground
    level the total ground population is g*p.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    e = np.sort(np.asarray(energies, dtype=np.float64))
    beta = 1.0 / temperature
    w = np.exp(-beta * (e - e[0]))  # w[0] == 1 exactly
    sw = float(np.sum(w))
    probs = w / sw
    log_sw = math.log(sw)
    log_z = -beta * e[0] + log_sw
    f = e[0] - temperature * log_sw
    u = float(probs @ e)
    nz = probs[probs > 0]
    s = float(-np.sum(nz * np.log(nz)))
    return CanonicalScalars(log_Z=log_z, F=f, U=u, S=s, p=1.0 / sw)


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    """Gibbs state bundle for a fixed Hamiltonian at one temperature."""

    spectral: SpectralDecomposition
    temperature: float
    beta: float
    log_Z: float
    F: float
    U: float
    S: float
    p: float
    rho_T: DensityOperator
    ground_degeneracy: int

    @property
    def Z(self) -> float:
        """Partition function; may overflow to inf when |log_Z| > ~709."""
        try:
            return math.exp(self.log_Z)
        except OverflowError:
            return math.inf


def ensemble_from_decomposition(
    spectral: SpectralDecomposition, dims: tuple[int, ...], temperature: float
) -> ThermalEnsemble:
    """Assemble the ensemble from a precomputed eigendecomposition.

    Useful for temperature sweeps: diagonalize once, evaluate many T
    independently (the construction is pure).
    """
    sc = canonical_scalars(spectral.eigenvalues, temperature)
    beta = 1.0 / temperature
    e = spectral.eigenvalues
    probs = np.exp(-beta * (e - e[0]))
    probs /= probs.sum()
    vecs = spectral.eigenvectors
    rho = (vecs * probs) @ vecs.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    degeneracy = int(np.count_nonzero(e - e[0] <= DEGENERACY_TOL))
    return ThermalEnsemble(
        spectral=spectral,
        temperature=float(temperature),
        beta=beta,
        log_Z=sc.log_Z,
        F=sc.F,
        U=sc.U,
        S=sc.S,
        p=sc.p,
        rho_T=_density_unchecked(rho, dims),
        ground_degeneracy=degeneracy,
    )


def thermal_ensemble(h: HermitianOperator, temperature: float) -> ThermalEnsemble:
    """Diagonalize ``h`` and build its Gibbs ensemble at ``temperature``."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return ensemble_from_decomposition(eig_hermitian(h), h.dims, temperature)


def ground_weight(ens: ThermalEnsemble) -> float:
    """Boltzmann weight of ONE ground state (not the full degenerate level)."""
    return ens.p


def rel_entropy_pure_to_thermal(psi: PureState, ens: ThermalEnsemble) -> float:
    """Relative entropy of |psi><psi| to the thermal state, in closed form.

    Equals beta <psi|H|psi> + ln Z; for a ground state this is -ln p.
    Evaluated in the shifted domain so large beta stays finite.
    """
    if psi.dims != ens.rho_T.dims:
        raise ValueError(f"dimension mismatch: {psi.dims} vs {ens.rho_T.dims}")
    e = ens.spectral.eigenvalues
    overlaps = np.abs(ens.spectral.eigenvectors.conj().T @ psi.amplitudes) ** 2
    energy = float(overlaps @ e)
    # beta*energy + log_Z, grouped as beta*(energy - E0) + log(sum of shifted weights)
    log_sw = ens.log_Z + ens.beta * e[0]
    return ens.beta * (energy - float(e[0])) + log_sw


@dataclass(frozen=True)
class Eq3Check:
    """Result of the Boltzmann-weight vs entropy inequality p >= exp(-S)."""

    p: float
    exp_neg_S: float
    holds: bool
    slack: float  # ln p + S == beta (U - E0), nonnegative


def check_eq3(ens: ThermalEnsemble) -> Eq3Check:
    """Verify p >= exp(-S); the gap in log form is beta (U - E0) >= 0."""
    e0 = float(ens.spectral.eigenvalues[0])
    slack = ens.beta * (ens.U - e0)
    exp_neg_s = math.exp(-ens.S)
    return Eq3Check(
        p=ens.p,
        exp_neg_S=exp_neg_s,
        holds=bool(ens.p >= exp_neg_s - 1e-10),
        slack=slack,
    )

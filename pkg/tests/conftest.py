"""Shared states, matrices, and independent oracles for the test suite."""

import numpy as np
import pytest

from thermwit import DensityOperator, PureState

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

LN2 = np.log(2.0)


def bell_pure() -> PureState:
    return PureState(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2), (2, 2))


def ghz_pure() -> PureState:
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    return PureState(v, (2, 2, 2))


def w_pure() -> PureState:
    v = np.zeros(8, dtype=complex)
    v[0b001] = v[0b010] = v[0b100] = 1 / np.sqrt(3)
    return PureState(v, (2, 2, 2))


def random_pure(rng: np.random.Generator, dims) -> PureState:
    d = int(np.prod(dims))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(v / np.linalg.norm(v), tuple(dims))


def random_density(rng: np.random.Generator, dims) -> DensityOperator:
    """Full-rank random state (Wishart construction)."""
    d = int(np.prod(dims))
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T + 1e-3 * np.eye(d)
    return DensityOperator(rho / np.trace(rho).real, tuple(dims))


def loop_partial_trace(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Index-loop partial trace, independent of the package's einsum path."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    traced = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    out = np.zeros((dk, dk), dtype=complex)

    def unravel(flat):
        idx = []
        for d in reversed(dims):
            idx.append(flat % d)
            flat //= d
        return list(reversed(idx))

    def ravel(idx, sites):
        flat = 0
        for s in sites:
            flat = flat * dims[s] + idx[s]
        return flat

    dim = int(np.prod(dims))
    for r in range(dim):
        ri = unravel(r)
        for c in range(dim):
            ci = unravel(c)
            if all(ri[t] == ci[t] for t in traced):
                out[ravel(ri, keep), ravel(ci, keep)] += mat[r, c]
    return out


def bloch_grid_extreme(op4x4: np.ndarray, mode: str, n_theta: int = 180, n_phi: int = 180):
    """Independent two-qubit grid oracle: grid one site over n_theta*n_phi
    Bloch points, solve the other site exactly per point (extremal effective
    eigenvector)."""
    thetas = np.linspace(0, np.pi, n_theta)
    phis = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    b = np.stack(
        [np.cos(tt / 2).ravel(), np.exp(1j * pp.ravel()) * np.sin(tt / 2).ravel()],
        axis=1,
    )
    tensor = op4x4.reshape(2, 2, 2, 2)
    eff = np.einsum("acbd,nc,nd->nab", tensor, b.conj(), b)
    evals = np.linalg.eigvalsh(eff)
    return float(evals[:, 0].min()) if mode == "min" else float(evals[:, -1].max())


def shannon(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def heis2_closed_form(T: float) -> dict:
    """Closed-form canonical quantities for the 4-level spectrum (-3, 1, 1, 1)."""
    beta = 1.0 / T
    w = np.exp(-beta * np.array([0.0, 4.0, 4.0, 4.0]))
    sw = w.sum()
    probs = w / sw
    return {
        "Z": np.exp(3.0 * beta) * sw,
        "p": 1.0 / sw,
        "S": shannon(probs),
        "U": float(probs @ np.array([-3.0, 1.0, 1.0, 1.0])),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)

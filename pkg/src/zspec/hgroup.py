"""Skew endomorphism spaces of Heisenberg-type groups H_l^(a,b).

Only center dimensions l = 1 (complex structure on R^2) and l = 3
(left quaternion multiplication on R^4) are supported.  The (a, b)
signature puts ``a`` copies of the irreducible block with sign +1 and
``b`` copies with sign -1 along the diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Left multiplication by i, j, k on H = R^4 with basis (1, i, j, k).
_QUAT_LEFT = (
    np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float),
    np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float),
    np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float),
)
_ROT2 = (np.array([[0.0, -1.0], [1.0, 0.0]]),)

_BLOCKS = {1: (2, _ROT2), 3: (4, _QUAT_LEFT)}


@dataclass(frozen=True, eq=False)
class EndomorphismSpace:
    """Clifford data of H_l^(a,b): ``basis[alpha]`` is J_alpha acting on R^k."""

    l: int
    a: int
    b: int
    r: int
    basis: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return self.r * (self.a + self.b)

    @property
    def signs(self) -> tuple[int, ...]:
        return (1,) * self.a + (-1,) * self.b

    def label(self) -> str:
        return f"H_{self.l}^({self.a},{self.b})"

    def to_json(self) -> dict:
        return {"l": self.l, "a": self.a, "b": self.b}


def build_htype(l: int, a: int, b: int) -> EndomorphismSpace:
    if l not in _BLOCKS:
        raise ValueError(f"unsupported center dimension: l={l}")
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError(f"need a, b >= 0 and a + b >= 1, got a={a}, b={b}")
    r, blocks = _BLOCKS[l]
    signs = [1] * a + [-1] * b
    basis = []
    for j in blocks:
        full = np.zeros((r * len(signs), r * len(signs)))
        for i, s in enumerate(signs):
            full[i * r:(i + 1) * r, i * r:(i + 1) * r] = s * j
        full.setflags(write=False)
        basis.append(full)
    return EndomorphismSpace(l=l, a=a, b=b, r=r, basis=tuple(basis))


def j_of(space: EndomorphismSpace, Z) -> np.ndarray:
    """J_Z = sum_alpha Z_alpha J_alpha."""
    Z = np.asarray(Z, dtype=float).reshape(-1)
    if Z.shape[0] != space.l:
        raise ValueError(f"Z has dimension {Z.shape[0]}, center has dimension {space.l}")
    return np.tensordot(Z, np.stack(space.basis), axes=1)


def clifford_defect(space: EndomorphismSpace, n_samples: int = 32, seed: int = 0) -> float:
    """Largest deviation from J_Z J_W + J_W J_Z = -2<Z,W> id over random pairs."""
    rng = np.random.default_rng(seed)
    eye = np.eye(space.k)
    worst = 0.0
    for _ in range(n_samples):
        Z, W = rng.standard_normal((2, space.l))
        JZ, JW = j_of(space, Z), j_of(space, W)
        worst = max(worst, np.abs(JZ @ JW + JW @ JZ + 2 * np.dot(Z, W) * eye).max())
        worst = max(worst, np.abs(JZ + JZ.T).max())
    return float(worst)


def complex_structure(space: EndomorphismSpace, Z) -> np.ndarray:
    """Unit-normalized J_Z (a complex structure for Z != 0)."""
    Z = np.asarray(Z, dtype=float)
    nrm = np.linalg.norm(Z)
    if nrm == 0:
        raise ValueError("Z must be non-zero")
    return j_of(space, Z / nrm)

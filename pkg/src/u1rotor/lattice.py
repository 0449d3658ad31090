"""Lattice geometry, digitization grids, and the weaved operator basis.

A periodic ``n_x x n_y`` plaquette lattice carries one constraint, so the
last plaquette is eliminated and ``n_p = n_x*n_y - 1`` independent rotors
remain.  Plaquette ``p`` occupies qubits ``[p*n_q, (p+1)*n_q)`` of the flat
register, little-endian: qubit ``p*n_q + r`` holds bit ``r`` of the
magnetic grid index ``l_p``.  This layout is fixed so QASM exports are
stable.

Each plaquette samples its field on ``2^n_q`` points ``-b_max + l*db`` with
``db = 2 b_max / 2^n_q``; the conjugate rotor grid follows from
``r_max = pi N / (2 b_max)`` and ``dr = pi / b_max``.  The half-width
prescriptions (`b_max_noncompact`, `b_max_compact`) cap the compact grid at
pi in the original basis, or at pi over the smallest cosine coefficient of
the plaquette in the weaved basis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .walsh import DiagonalValues

WEAVE_ORTHO_TOL = 1e-10


class WeaveUnavailableError(LookupError):
    """No built-in weave for this plaquette count; load one from a file."""


class ResourceLimitError(RuntimeError):
    """A dense construction would exceed the configured qubit limit."""


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic plaquette lattice; the last plaquette is constraint-eliminated."""

    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 2 or self.n_y < 2:
            raise ValueError(f"lattice must be at least 2x2, got {self.n_x}x{self.n_y}")

    @property
    def n_p(self) -> int:
        return self.n_x * self.n_y - 1

    def plaquette_index(self, x: int, y: int) -> int:
        return (x % self.n_x) + (y % self.n_y) * self.n_x

    def links(self):
        """All 2*n_x*n_y links as (p, q) plaquette pairs (periodic neighbors)."""
        for y in range(self.n_y):
            for x in range(self.n_x):
                p = self.plaquette_index(x, y)
                yield p, self.plaquette_index(x + 1, y)
                yield p, self.plaquette_index(x, y + 1)


@dataclass(frozen=True)
class WeaveMatrix:
    """Orthogonal rotor rotation ``w`` plus its cosine-argument rows ``m``.

    ``m`` stacks the rows of ``w`` and one final row of negated column sums
    (the constraint plaquette's field expressed in the rotated operators);
    row ``c`` holds the coefficients inside the c-th cosine.
    """

    w: np.ndarray
    m: np.ndarray

    @property
    def n_p(self) -> int:
        return self.w.shape[0]


def weave_from_matrix(w: np.ndarray, tol: float = WEAVE_ORTHO_TOL) -> WeaveMatrix:
    """Validate orthogonality and attach the cosine-argument rows."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"weave must be square, got shape {w.shape}")
    dev = np.abs(w.T @ w - np.eye(w.shape[0])).max()
    if dev > tol:
        raise ValueError(
            f"weave matrix is not orthogonal: max |W^T W - 1| = {dev:.3e} > {tol:.1e}"
        )
    m = np.vstack([w, -w.sum(axis=0)])
    return WeaveMatrix(w, m)


def identity_weave(n_p: int) -> WeaveMatrix:
    """The original basis expressed as a (trivial) weave."""
    return weave_from_matrix(np.eye(n_p))


def builtin_weave(n_p: int) -> WeaveMatrix:
    """Published weave for n_p = 3; other sizes must be loaded from a file."""
    if n_p != 3:
        raise WeaveUnavailableError(
            f"no built-in weave for n_p={n_p}; supply a matrix file"
        )
    s2, s3 = math.sqrt(2.0), math.sqrt(3.0)
    w = np.array([[s2, -2.0, 0.0], [s2, 1.0, -s3], [s2, 1.0, s3]]) / math.sqrt(6.0)
    return weave_from_matrix(w)


def load_weave(path) -> WeaveMatrix:
    """Read a weave from JSON: {"n_p": int, "rows": [[...], ...]} (row-major)."""
    with open(path) as fh:
        data = json.load(fh)
    rows = np.asarray(data["rows"], dtype=float)
    n_p = int(data["n_p"])
    if rows.shape != (n_p, n_p):
        raise ValueError(f"expected {n_p}x{n_p} rows, got shape {rows.shape}")
    return weave_from_matrix(rows)


def save_weave(weave: WeaveMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump({"n_p": weave.n_p, "rows": weave.w.tolist()}, fh, indent=1)
        fh.write("\n")


def b_max_noncompact(g: float, n_q: int, beta_r: float = 1.0, beta_b: float = 1.0) -> float:
    """Optimal half-width for an unbounded quadratic field at coupling g."""
    if g <= 0 or beta_r <= 0 or beta_b <= 0:
        raise ValueError("coupling and harmonic-matching constants must be positive")
    big_n = 1 << n_q
    return g * (big_n / 2.0) * math.sqrt(beta_r / beta_b) * math.sqrt(math.sqrt(8.0) * math.pi / big_n)


def cosine_cap(weave: WeaveMatrix | None, plaquette: int) -> float:
    """Upper limit on b_max: pi over the smallest nonzero cosine coefficient."""
    if weave is None:
        return math.pi
    column = weave.m[:, plaquette]
    nonzero = np.abs(column[np.abs(column) > 1e-12])
    if nonzero.size == 0:
        raise ValueError(f"degenerate weave: plaquette {plaquette} absent from every cosine")
    return math.pi / float(nonzero.min())


def b_max_compact(
    g: float,
    n_q: int,
    plaquette: int = 0,
    weave: WeaveMatrix | None = None,
    beta_r: float = 1.0,
    beta_b: float = 1.0,
) -> float:
    """Compact-formulation half-width: the unbounded value clamped at its cap."""
    return min(b_max_noncompact(g, n_q, beta_r, beta_b), cosine_cap(weave, plaquette))


@dataclass(frozen=True)
class Digitization:
    """Per-plaquette grid parameters for one lattice register."""

    n_q: int
    g: float
    b_max: np.ndarray
    formulation: str  # "compact" | "non-compact"
    basis: str  # "original" | "weaved"

    def __post_init__(self):
        if self.n_q < 1:
            raise ValueError("need at least one qubit per plaquette")
        if self.formulation not in ("compact", "non-compact"):
            raise ValueError(f"unknown formulation {self.formulation!r}")
        if self.basis not in ("original", "weaved"):
            raise ValueError(f"unknown basis {self.basis!r}")
        b = np.asarray(self.b_max, dtype=float)
        if np.any(b <= 0):
            raise ValueError("b_max must be positive")
        if self.formulation == "compact" and self.basis == "original":
            if np.any(b > math.pi + 1e-12):
                raise ValueError("original compact grids cannot exceed pi")
        object.__setattr__(self, "b_max", b)

    @property
    def n_p(self) -> int:
        return self.b_max.shape[0]

    @property
    def n_states(self) -> int:
        return 1 << self.n_q


def digitize(
    n_p: int,
    n_q: int,
    g: float,
    formulation: str,
    basis: str = "original",
    weave: WeaveMatrix | None = None,
    beta_r=1.0,
    beta_b=1.0,
) -> Digitization:
    """Apply the half-width prescriptions to every independent plaquette.

    The harmonic-matching constants default to 1 for every plaquette and may
    be given per plaquette as arrays.
    """
    if basis == "weaved" and weave is None:
        raise ValueError("weaved basis requires a weave matrix")
    if weave is not None and weave.n_p != n_p:
        raise ValueError(f"weave is {weave.n_p}x{weave.n_p} but lattice has n_p={n_p}")
    br = np.broadcast_to(np.asarray(beta_r, dtype=float), (n_p,))
    bb = np.broadcast_to(np.asarray(beta_b, dtype=float), (n_p,))
    b_max = np.empty(n_p)
    for i in range(n_p):
        if formulation == "non-compact":
            b_max[i] = b_max_noncompact(g, n_q, br[i], bb[i])
        else:
            cap_weave = weave if basis == "weaved" else None
            b_max[i] = b_max_compact(g, n_q, i, cap_weave, br[i], bb[i])
    return Digitization(n_q, g, b_max, formulation, basis)


def b_grid(d: Digitization, plaquette: int) -> DiagonalValues:
    """Magnetic grid -b_max + l*db for l = 0 .. 2^n_q - 1 (never reaches +b_max)."""
    b = d.b_max[plaquette]
    db = 2.0 * b / d.n_states
    return DiagonalValues(d.n_q, -b + db * np.arange(d.n_states))


def r_grid(d: Digitization, plaquette: int) -> DiagonalValues:
    """Conjugate rotor grid; contains exactly one zero at l = N/2."""
    b = d.b_max[plaquette]
    r_max = math.pi * d.n_states / (2.0 * b)
    dr = math.pi / b
    return DiagonalValues(d.n_q, -r_max + dr * np.arange(d.n_states))


def plaquette_qubits(plaquette: int, n_q: int) -> range:
    return range(plaquette * n_q, (plaquette + 1) * n_q)


def embed_positions(support, n_q: int) -> list[int]:
    """Register positions for a term's local Walsh series.

    A joint diagonal over support plaquettes is sampled with the first
    plaquette as the most significant digit; the dyadic sampling convention
    then pins local series qubit ``b*n_q + m`` to register qubit
    ``support[b]*n_q + (n_q - 1 - m)``.
    """
    positions = []
    for p in support:
        positions.extend(p * n_q + (n_q - 1 - m) for m in range(n_q))
    return positions

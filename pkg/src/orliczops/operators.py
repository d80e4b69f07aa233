"""Compact operator representations and their singular-value spectra.

Finite operators are dense complex matrices, diagonal sequences and rank-one
operators ``e (x) h : xi -> <h, xi> e``.  Infinite operators are given by an
explicit singular-value formula together with a tail bound
(``AnalyticOperator``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import kernels

__all__ = [
    "InputError",
    "DenseOperator",
    "DiagonalOperator",
    "AnalyticOperator",
    "RankOneOperator",
    "SingularSpectrum",
    "singular_values",
    "finite_singular_values",
    "svd",
    "adjoint",
    "compose",
    "trace",
    "operator_norm",
    "as_dense",
    "is_finite_rank",
    "group_multiplicities",
    "random_matrix",
    "random_unitary",
    "operator_from_json",
    "operator_to_json",
    "load_operator",
]

MULTIPLICITY_RTOL = 1e-8


class InputError(ValueError):
    """Malformed or non-finite operator data."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise InputError(f"dense operator needs a nonempty 2-D array, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("dense operator has non-finite entries")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries) -> "DenseOperator":
        entries = np.asarray(entries, dtype=np.complex128).ravel()
        if rows < 1 or cols < 1 or entries.size != rows * cols:
            raise InputError(f"{rows}x{cols} operator needs {rows * cols} entries, got {entries.size}")
        return cls(entries.reshape(rows, cols))

    @property
    def dim_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim_cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.ravel()

    def __matmul__(self, other):
        return compose(self, other)

    def __mul__(self, c):
        return DenseOperator(self.matrix * c)

    __rmul__ = __mul__

    def __add__(self, other):
        other = as_dense(other)
        if other.matrix.shape != self.matrix.shape:
            raise InputError("dimension mismatch in sum")
        return DenseOperator(self.matrix + other.matrix)

    def __neg__(self):
        return DenseOperator(-self.matrix)

    def __eq__(self, other):
        return isinstance(other, DenseOperator) and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"DenseOperator({self.dim_rows}x{self.dim_cols})"


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    diag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=np.complex128).ravel()
        if d.size < 1:
            raise InputError("diagonal operator needs at least one entry")
        if not np.all(np.isfinite(d)):
            raise InputError("diagonal operator has non-finite entries")
        object.__setattr__(self, "diag", _frozen(d))

    def __mul__(self, c):
        return DiagonalOperator(self.diag * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"DiagonalOperator({np.round(self.diag, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class RankOneOperator:
    """``xi -> <h, xi> e`` for unit vectors e, h."""

    e: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        e = np.array(self.e, dtype=np.complex128).ravel()
        h = np.array(self.h, dtype=np.complex128).ravel()
        if e.shape != h.shape or e.size < 1:
            raise InputError("rank-one operator needs unit vectors of equal dimension")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(h))):
            raise InputError("rank-one operator has non-finite entries")
        for name, v in (("e", e), ("h", h)):
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise InputError(f"{name} is not a unit vector")
        object.__setattr__(self, "e", _frozen(e))
        object.__setattr__(self, "h", _frozen(h))

    def to_dense(self) -> DenseOperator:
        return DenseOperator(np.outer(self.e, self.h.conj()))


@dataclass(frozen=True, eq=False)
class AnalyticOperator:
    """Operator given by its singular values ``s(n)``, n = 0, 1, 2, ...

    ``tail_bound(N, c, f)`` is an upper bound for ``sum_{n>N} f(c*s(n))``.
    ``tail_bracket(N, c, f)``, when given, returns ``(lo, hi)`` enclosing the
    same tail; ``lo`` may be ``inf`` to certify divergence.
    """

    s: Callable
    tail_bound: Callable
    tail_bracket: Optional[Callable] = None
    name: str = "analytic"

    def values(self, start: int, stop: int) -> np.ndarray:
        """s(n) for start <= n < stop as a float array."""
        n = np.arange(start, stop)
        try:
            out = np.asarray(self.s(n), dtype=float)
            if out.shape != n.shape:
                raise TypeError
        except (TypeError, ValueError):
            out = np.array([float(self.s(int(k))) for k in n])
        return out

    def __repr__(self):
        return f"AnalyticOperator({self.name})"


CompactOperator = Union[DenseOperator, DiagonalOperator, RankOneOperator, AnalyticOperator]


@dataclass(frozen=True)
class SingularSpectrum:
    """Nonincreasing singular values with grouped multiplicities.

    ``values`` lists every singular value (repeated); ``multiplicities`` are
    the run lengths of numerically equal values, largest group first.
    """

    values: tuple
    multiplicities: tuple
    truncated_at: Optional[int] = None

    @property
    def distinct(self) -> tuple:
        out, k = [], 0
        for mu in self.multiplicities:
            out.append(self.values[k])
            k += mu
        return tuple(out)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def group_multiplicities(values, rel_tol: float = MULTIPLICITY_RTOL) -> tuple:
    """Greedy grouping from the largest value down at relative tolerance."""
    groups = []
    lead = None
    for v in values:
        if lead is not None and abs(lead - v) <= rel_tol * lead:
            groups[-1] += 1
        else:
            groups.append(1)
            lead = v
    return tuple(groups)


def is_finite_rank(op) -> bool:
    return not isinstance(op, AnalyticOperator)


def as_dense(op) -> DenseOperator:
    if isinstance(op, DenseOperator):
        return op
    if isinstance(op, DiagonalOperator):
        return DenseOperator(np.diag(op.diag))
    if isinstance(op, RankOneOperator):
        return op.to_dense()
    if isinstance(op, AnalyticOperator):
        raise InputError("analytic operators have no dense form")
    return DenseOperator(op)


def finite_singular_values(op) -> np.ndarray:
    """Nonincreasing singular values of a finite operator as an array."""
    if isinstance(op, DiagonalOperator):
        return np.sort(np.abs(op.diag))[::-1]
    if isinstance(op, RankOneOperator):
        return np.array([1.0])
    if isinstance(op, AnalyticOperator):
        raise InputError("analytic operator has infinitely many singular values")
    sigma, _ = kernels.jacobi_svd(as_dense(op).matrix)
    return sigma


def svd(op):
    """``(u, sigma, v)`` with ``x @ v[:, k] = sigma[k] * u[:, k]``."""
    u, sigma, v, _ = kernels.jacobi_svd(as_dense(op).matrix, True)
    return u, sigma, v


def singular_values(op: CompactOperator, max_terms: int = 1000) -> SingularSpectrum:
    if max_terms < 1:
        raise InputError("max_terms must be >= 1")
    truncated = None
    if isinstance(op, AnalyticOperator):
        vals = op.values(0, max_terms)
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InputError("singular-value formula produced invalid values")
        truncated = max_terms
    else:
        vals = finite_singular_values(op)
    vals = tuple(float(v) for v in vals)
    return SingularSpectrum(vals, group_multiplicities(vals), truncated)


def adjoint(op):
    if isinstance(op, DiagonalOperator):
        return DiagonalOperator(op.diag.conj())
    if isinstance(op, RankOneOperator):
        return RankOneOperator(op.h, op.e)
    if isinstance(op, AnalyticOperator):
        return op  # singular values are adjoint-invariant
    return DenseOperator(as_dense(op).matrix.conj().T)


def compose(a, b) -> DenseOperator:
    a, b = as_dense(a), as_dense(b)
    if a.dim_cols != b.dim_rows:
        raise InputError(f"cannot compose {a.dim_rows}x{a.dim_cols} with {b.dim_rows}x{b.dim_cols}")
    return DenseOperator(a.matrix @ b.matrix)


def trace(op) -> complex:
    x = as_dense(op)
    if x.dim_rows != x.dim_cols:
        raise InputError("trace needs a square operator")
    return complex(np.trace(x.matrix))


def operator_norm(op) -> float:
    if isinstance(op, AnalyticOperator):
        return float(op.values(0, 1)[0])
    s = finite_singular_values(op)
    return float(s[0]) if s.size else 0.0


def random_matrix(n: int, rng: np.random.Generator, cols: Optional[int] = None) -> np.ndarray:
    """Independent standard normal real and imaginary parts."""
    cols = n if cols is None else cols
    return rng.standard_normal((n, cols)) + 1j * rng.standard_normal((n, cols))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(random_matrix(n, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


# JSON file formats

def operator_from_json(obj) -> Union[DenseOperator, DiagonalOperator]:
    if not isinstance(obj, dict):
        raise InputError("operator JSON must be an object")
    if "diag_re" in obj:
        re_ = np.asarray(obj["diag_re"], dtype=float)
        im_ = np.asarray(obj.get("diag_im", np.zeros_like(re_)), dtype=float)
        if re_.shape != im_.shape or re_.ndim != 1:
            raise InputError("diag_re and diag_im must be equal-length arrays")
        return DiagonalOperator(re_ + 1j * im_)
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re_ = np.asarray(obj["re"], dtype=float).ravel()
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("matrix JSON needs integer 'rows', 'cols' and a numeric 're' array") from exc
    im_ = np.asarray(obj.get("im", np.zeros_like(re_)), dtype=float).ravel()
    if re_.size != rows * cols or im_.size != rows * cols:
        raise InputError(f"{rows}x{cols} matrix needs {rows * cols} entries in 're' and 'im'")
    return DenseOperator.from_entries(rows, cols, re_ + 1j * im_)


def operator_to_json(op) -> dict:
    if isinstance(op, DiagonalOperator):
        return {"diag_re": op.diag.real.tolist(), "diag_im": op.diag.imag.tolist()}
    x = as_dense(op)
    return {"rows": x.dim_rows, "cols": x.dim_cols,
            "re": x.entries.real.tolist(), "im": x.entries.imag.tolist()}


def load_operator(path) -> Union[DenseOperator, DiagonalOperator]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read operator file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"operator file {path} is not valid JSON: {exc.msg}") from exc
    return operator_from_json(obj)

"""Truncated two-boson / one-fermion Fock space and sparse operators.

The basis is the occupation set {|n1, n2, s>} with n1 <= cutoff1,
n2 <= cutoff2 and s in {0, 1}, enumerated lexicographically in
(n1, n2, s) so that serialized operators are reproducible bit for bit.

Operators are sparse (dict of (row, col) -> scalar) and come in two
scalar families: "exact" (int / Fraction entries, used by the polynomial
realizations) and "float" (float / complex entries, used on Fock space
where ladder amplitudes sqrt(n) are irrational).  Exact operators never
coerce to float silently; mixing the families raises, and promotion is
explicit via :meth:`Operator.to_float`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "FockState",
    "FockSpace",
    "Operator",
    "OperatorKindError",
    "DomainMismatchError",
    "EigensolveError",
    "EigenResult",
    "make_boson",
    "make_fermion",
    "commutator",
    "anticommutator",
    "eigen_dense",
    "operator_to_json",
    "operator_from_json",
]

_EXACT_TYPES = (int, Fraction)
_FLOAT_TYPES = (float, complex)


class OperatorKindError(TypeError):
    """Arithmetic attempted between exact and float operators without explicit promotion."""


class DomainMismatchError(ValueError):
    """Operands live on different bases."""


class EigensolveError(RuntimeError):
    """Dense eigensolve failed; carries residual diagnostics."""


class FockState(NamedTuple):
    n1: int
    n2: int
    s: int


@dataclass(frozen=True)
class FockSpace:
    """Finite Fock space for two boson modes and one fermion mode."""

    cutoff1: int
    cutoff2: int

    def __post_init__(self):
        if self.cutoff1 < 0 or self.cutoff2 < 0:
            raise ValueError("cutoffs must be non-negative")

    @property
    def dim(self) -> int:
        return (self.cutoff1 + 1) * (self.cutoff2 + 1) * 2

    @property
    def key(self) -> str:
        return f"fock({self.cutoff1},{self.cutoff2})"

    def index(self, n1: int, n2: int, s: int) -> int:
        if not (0 <= n1 <= self.cutoff1 and 0 <= n2 <= self.cutoff2 and s in (0, 1)):
            raise ValueError(f"state ({n1},{n2},{s}) outside space {self.key}")
        return ((n1 * (self.cutoff2 + 1)) + n2) * 2 + s

    def state(self, idx: int) -> FockState:
        if not 0 <= idx < self.dim:
            raise ValueError(f"index {idx} outside [0,{self.dim})")
        idx, s = divmod(idx, 2)
        n1, n2 = divmod(idx, self.cutoff2 + 1)
        return FockState(n1, n2, s)

    def states(self) -> Iterator[FockState]:
        for i in range(self.dim):
            yield self.state(i)

    def interior_indices(self, margin: int) -> list[int]:
        """Indices of states at least `margin` below both boson cutoffs.

        Truncation artifacts from clipped ladder products cannot reach
        these columns as long as the tested expression raises each mode
        by at most `margin` quanta.
        """
        return [
            i
            for i, st in enumerate(self.states())
            if st.n1 <= self.cutoff1 - margin and st.n2 <= self.cutoff2 - margin
        ]


def _kind_of_value(v) -> str:
    if isinstance(v, bool):
        raise TypeError("bool is not a valid operator entry")
    if isinstance(v, _EXACT_TYPES):
        return "exact"
    if isinstance(v, _FLOAT_TYPES):
        return "float"
    raise TypeError(f"unsupported scalar type {type(v)!r}")


class Operator:
    """Sparse matrix over a finite basis (Fock space or polynomial spinor basis).

    `domain` is any object exposing `.dim` and `.key`.
    """

    __slots__ = ("domain", "entries", "kind")

    def __init__(self, domain, entries: dict | None = None, kind: str | None = None):
        self.domain = domain
        ents = {}
        inferred = None
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < domain.dim and 0 <= c < domain.dim):
                raise ValueError(f"entry ({r},{c}) outside domain of dim {domain.dim}")
            if v == 0:
                continue
            k = _kind_of_value(v)
            if inferred is None:
                inferred = k
            elif inferred != k:
                raise OperatorKindError("mixed exact and float entries in one operator")
            ents[(r, c)] = v
        if kind is None:
            kind = inferred or "exact"
        if inferred is not None and inferred != kind:
            raise OperatorKindError(f"entries are {inferred} but kind={kind} requested")
        self.entries = ents
        self.kind = kind

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, domain, kind: str = "exact") -> "Operator":
        return cls(domain, {}, kind)

    @classmethod
    def identity(cls, domain, kind: str = "exact") -> "Operator":
        one = 1 if kind == "exact" else 1.0
        return cls(domain, {(i, i): one for i in range(domain.dim)}, kind)

    @classmethod
    def from_action(cls, domain, action: Callable[[int], list[tuple[int, object]]],
                    kind: str = "float") -> "Operator":
        """Build columns from a state map: action(col) -> [(row, amplitude), ...]."""
        ents: dict = {}
        for col in range(domain.dim):
            for row, amp in action(col):
                if amp == 0:
                    continue
                key = (row, col)
                ents[key] = ents.get(key, 0) + amp
        return cls(domain, ents, kind)

    # -- bookkeeping ---------------------------------------------------

    def _check(self, other: "Operator"):
        if self.domain.key != other.domain.key:
            raise DomainMismatchError(f"{self.domain.key} vs {other.domain.key}")
        if self.kind != other.kind:
            raise OperatorKindError(
                f"cannot mix {self.kind} and {other.kind} operators; "
                "promote explicitly with .to_float()"
            )

    @property
    def scalar_kind(self) -> str:
        """Serialization label: exact-integer | exact-rational | complex-float."""
        if self.kind == "float":
            return "complex-float"
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in self.entries.values()):
            return "exact-rational"
        return "exact-integer"

    def to_float(self) -> "Operator":
        if self.kind == "float":
            return self
        return Operator(self.domain, {k: float(v) for k, v in self.entries.items()}, "float")

    def copy(self) -> "Operator":
        return Operator(self.domain, dict(self.entries), self.kind)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Operator)
            and self.domain.key == other.domain.key
            and self.kind == other.kind
            and self.entries == other.entries
        )

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        ents = dict(self.entries)
        for k, v in other.entries.items():
            w = ents.get(k, 0) + v
            if w == 0:
                ents.pop(k, None)
            else:
                ents[k] = w
        return Operator(self.domain, ents, self.kind)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-1) * other

    def __neg__(self) -> "Operator":
        return (-1) * self

    def __rmul__(self, scalar) -> "Operator":
        if isinstance(scalar, Operator):
            return NotImplemented
        sk = _kind_of_value(scalar)
        if self.kind == "exact" and sk == "float":
            raise OperatorKindError(
                "float scalar on exact operator; call .to_float() first"
            )
        ents = {}
        for k, v in self.entries.items():
            w = scalar * v
            if w != 0:
                ents[k] = w
        return Operator(self.domain, ents, self.kind)

    __mul__ = __rmul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        rows_of_other: dict[int, list[tuple[int, object]]] = {}
        for (r, c), v in other.entries.items():
            rows_of_other.setdefault(r, []).append((c, v))
        ents: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in rows_of_other.get(k, ()):
                key = (i, j)
                w = ents.get(key, 0) + a * b
                if w == 0:
                    ents.pop(key, None)
                else:
                    ents[key] = w
        return Operator(self.domain, ents, self.kind)

    def dagger(self) -> "Operator":
        conj = (lambda v: v.conjugate()) if self.kind == "float" else (lambda v: v)
        return Operator(self.domain, {(c, r): conj(v) for (r, c), v in self.entries.items()},
                        self.kind)

    # -- inspection -----------------------------------------------------

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_structurally_zero(self) -> bool:
        return not self.entries

    def max_abs(self, columns: list[int] | None = None) -> float:
        if columns is None:
            vals = self.entries.values()
        else:
            cset = set(columns)
            vals = (v for (r, c), v in self.entries.items() if c in cset)
        return max((abs(v) for v in vals), default=0.0)

    def is_hermitian(self) -> bool:
        conj = (lambda v: v.conjugate()) if self.kind == "float" else (lambda v: v)
        return all(self.entries.get((c, r)) == conj(v) for (r, c), v in self.entries.items())

    def to_dense(self) -> np.ndarray:
        dtype = complex if self.kind == "float" else float
        m = np.zeros((self.domain.dim, self.domain.dim), dtype=dtype)
        for (r, c), v in self.entries.items():
            m[r, c] = complex(v) if dtype is complex else float(v)
        return m

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.domain.dim, dtype=complex)
        for (r, c), v in self.entries.items():
            out[r] += complex(v) * vec[c]
        return out

    def __repr__(self) -> str:
        return f"Operator({self.domain.key}, nnz={self.nnz}, kind={self.kind})"


# -- elementary Fock operators -----------------------------------------


def make_boson(space: FockSpace, mode: int, kind: str) -> Operator:
    """Ladder operator for boson mode 1 or 2.

    kind: "annihilate" or "create".  Creation out of the top cutoff
    state truncates to zero; algebra checks must stay in the interior.
    """
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    if kind not in ("annihilate", "create"):
        raise ValueError("kind must be 'annihilate' or 'create'")
    cutoff = space.cutoff1 if mode == 1 else space.cutoff2

    def action(col: int):
        st = space.state(col)
        n = st.n1 if mode == 1 else st.n2
        if kind == "annihilate":
            if n == 0:
                return []
            tgt = st._replace(n1=n - 1) if mode == 1 else st._replace(n2=n - 1)
            return [(space.index(*tgt), math.sqrt(n))]
        if n == cutoff:
            return []
        tgt = st._replace(n1=n + 1) if mode == 1 else st._replace(n2=n + 1)
        return [(space.index(*tgt), math.sqrt(n + 1))]

    return Operator.from_action(space, action, "float")


def make_fermion(space: FockSpace, kind: str) -> Operator:
    """Fermion operator tensored with identity on both boson modes.

    kind: "sigma_minus" (f, annihilates), "sigma_plus" (f+), or
    "sigma_zero" (diag(+1,-1) on occupied/empty: 2 f+f - 1).
    """
    if kind not in ("sigma_minus", "sigma_plus", "sigma_zero"):
        raise ValueError("kind must be sigma_minus | sigma_plus | sigma_zero")

    def action(col: int):
        st = space.state(col)
        if kind == "sigma_minus":
            if st.s == 0:
                return []
            return [(space.index(st.n1, st.n2, 0), 1.0)]
        if kind == "sigma_plus":
            if st.s == 1:
                return []
            return [(space.index(st.n1, st.n2, 1), 1.0)]
        return [(col, 1.0 if st.s == 1 else -1.0)]

    return Operator.from_action(space, action, "float")


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def anticommutator(a: Operator, b: Operator) -> Operator:
    return a @ b + b @ a


# -- dense eigensolve ---------------------------------------------------


@dataclass
class EigenResult:
    """Eigenvalues sorted lexicographically by (real, imag)."""

    values: list[complex]
    vectors: np.ndarray | None
    residual: float
    method: str

    def sorted_reals(self) -> list[float]:
        return [v.real for v in self.values]


def eigen_dense(op: Operator, want_vectors: bool = False, limit: int = 2048) -> EigenResult:
    """All eigenvalues (and optionally right eigenvectors) of a dense operator.

    Handles non-normal matrices (the transformed realizations are not
    symmetric).  A Hermitian fast path is taken when the sparse entries
    are exactly self-adjoint.  Failures raise with residual diagnostics.
    """
    n = op.domain.dim
    if n > limit:
        raise ValueError(f"dimension {n} exceeds configured limit {limit}")
    if n == 0:
        return EigenResult([], None, 0.0, "trivial")
    mat = op.to_float().to_dense()
    hermitian = op.is_hermitian()
    try:
        if hermitian:
            vals, vecs = np.linalg.eigh(mat)
            vals = vals.astype(complex)
            method = "hermitian"
        else:
            vals, vecs = np.linalg.eig(mat)
            method = "qr"
    except np.linalg.LinAlgError as exc:
        raise EigensolveError(
            f"eigensolve failed on {op!r}: {exc}; max|entry|={op.max_abs():.3e}"
        ) from exc
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]
    scale = max(1.0, float(np.max(np.abs(mat))))
    residual = 0.0
    for i in range(n):
        v = vecs[:, i]
        nv = np.linalg.norm(v, np.inf)
        if nv == 0:
            continue
        r = np.linalg.norm(mat @ v - vals[i] * v, np.inf) / (nv * scale)
        residual = max(residual, float(r))
    return EigenResult(
        values=[complex(v) for v in vals],
        vectors=vecs if want_vectors else None,
        residual=residual,
        method=method,
    )


# -- serialization -------------------------------------------------------


def _encode_scalar(v):
    if isinstance(v, int):
        return [v, 0]
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return [int(v), 0]
        return [[v.numerator, v.denominator], [0, 1]]
    c = complex(v)
    return [c.real, c.imag]


def _decode_scalar(re, im, scalar_kind):
    if scalar_kind == "exact-integer":
        return int(re)
    if scalar_kind == "exact-rational":
        if isinstance(re, list):
            return Fraction(re[0], re[1])
        return Fraction(int(re))
    if im:
        return complex(re, im)
    return float(re)


def operator_to_json(op: Operator) -> str:
    triplets = [
        [r, c, *_encode_scalar(v)]
        for (r, c), v in sorted(op.entries.items())
    ]
    return json.dumps(
        {"domain": op.domain.key, "scalar_kind": op.scalar_kind, "triplets": triplets},
        sort_keys=True,
    )


def operator_from_json(text: str, domain) -> Operator:
    blob = json.loads(text)
    if blob["domain"] != domain.key:
        raise DomainMismatchError(f"serialized domain {blob['domain']} != {domain.key}")
    kind = "float" if blob["scalar_kind"] == "complex-float" else "exact"
    ents = {}
    for r, c, re, im in blob["triplets"]:
        ents[(r, c)] = _decode_scalar(re, im, blob["scalar_kind"])
    return Operator(domain, ents, kind)

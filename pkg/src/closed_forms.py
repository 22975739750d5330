"""Fast evaluators for the closed forms and reduction results known for CSG on paths and subdivided stars.

Every evaluator here is bound to agree with the exhaustive solver; the harness checks that contract.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from functools import cache
from typing import TYPE_CHECKING

from .const import CSG_LOGGER_NAME, FAMILIES_123, FAMILIES_124
from .exceptions import DomainError, PreconditionError, UnknownFamilyError
from .graph import Graph, SubdividedStar
from .solver import GrundyValue, StarSolver, StarSolverRegistry, SubtractionSet, grundy_star, mex

if TYPE_CHECKING:
    from collections.abc import Iterator

logger = logging.getLogger(CSG_LOGGER_NAME)

L_123 = SubtractionSet.interval(3)
L_124 = SubtractionSet.of(1, 2, 4)


@dataclass(frozen=True, slots=True)
class Exact:
    v: GrundyValue

    def consistent_with(self, value: GrundyValue) -> bool:
        return value == self.v


@dataclass(frozen=True, slots=True)
class AtLeast:
    v: GrundyValue

    def consistent_with(self, value: GrundyValue) -> bool:
        return value >= self.v


@dataclass(frozen=True, slots=True)
class Unknown:
    def consistent_with(self, value: GrundyValue) -> bool:  # noqa: ARG002
        return True


type PartialValue = Exact | AtLeast | Unknown


class _HeapSequences:
    """Per-subtraction-set cache of the one-heap subtraction game values, grown on demand."""

    _values: dict[SubtractionSet, list[int]] = {}  # noqa: RUF012
    _lock = threading.Lock()

    @classmethod
    def value(cls, k: int, subtraction: SubtractionSet) -> GrundyValue:
        with cls._lock:
            values = cls._values.setdefault(subtraction, [0])
            for n in range(len(values), k + 1):
                values.append(mex(values[n - c] for c in subtraction if c <= n))
            return values[k]

    @classmethod
    def clear(cls) -> None:
        with cls._lock:
            cls._values.clear()


def clear_caches() -> None:
    """Drop every process-wide value cache: heap sequences, base tables and the shared star solvers."""
    _HeapSequences.clear()
    _simple_star_base.cache_clear()
    _s1kl_base.cache_clear()
    StarSolverRegistry.clear()
    logger.debug('Cleared the value caches')


def path_grundy(k: int, subtraction: SubtractionSet) -> GrundyValue:
    """Grundy value of the path P_k, which plays like a heap of k counters."""
    if k < 0:
        raise PreconditionError(f'Path length must be nonnegative, got {k}')
    if (n := subtraction.interval_bound) is not None:
        return k % (n + 1)
    if subtraction == L_124:
        return k % 3
    return _HeapSequences.value(k, subtraction)


def _size_table(size: int, n: int) -> PartialValue:
    if n < 1:
        raise PreconditionError(f'N must be at least 1, got {n}')
    if size <= 1:
        return Exact(size)
    if size <= n:
        return AtLeast(2)
    if size == n + 1:
        return Exact(0)
    if size == n + 2:
        return Exact(1)
    return Unknown()


def size_based_value(g: Graph, n: int) -> PartialValue:
    """What the vertex count alone tells about the CSG(I_N) value of a connected graph."""
    return _size_table(g.n, n)


def appended_size_based_value(g: Graph, u: int | None, n: int) -> PartialValue:
    """The same size table for G.u.(N+1), keyed on |G|."""
    if g.n == 0:
        if u is not None:
            raise DomainError('The empty base takes no anchor')
    elif u is None or not 0 <= u < g.n:
        raise DomainError(f'Anchor {u} is not a vertex of the base graph')
    return _size_table(g.n, n)


def simple_star_grundy(t: int, n: int) -> GrundyValue:
    """Value of the simple star S(1^t) under I_N."""
    if t < 0:
        raise PreconditionError(f't must be nonnegative, got {t}')
    if t == 0:
        return 1
    if n < 3:
        return grundy_star(SubdividedStar.simple(t), SubtractionSet.interval(n))
    if t <= n - 1:
        return 2 if t % 2 else 3
    return (t - n) % 2


@cache
def _simple_star_base(t: int, k0: int, n: int) -> GrundyValue:
    if k0 == 0:
        return simple_star_grundy(t, n)
    return grundy_star(SubdividedStar.simple(t, k0), SubtractionSet.interval(n))


def simple_star_appended_grundy(t: int, k: int, n: int) -> GrundyValue:
    """Value of S(1^t, k) under I_N; purely periodic in k with period N+1 for N >= 3."""
    if t < 0 or k < 0:
        raise PreconditionError(f't and k must be nonnegative, got t={t}, k={k}')
    if n < 3:
        return grundy_star(SubdividedStar.simple(t, k), SubtractionSet.interval(n))
    return _simple_star_base(t, k % (n + 1), n)


def s1kl_small_formula(k: int, l: int, n: int) -> GrundyValue:  # noqa: E741
    """Value of S(1,k,l) under I_N when both k and l are below N."""
    if n < 3 or not (0 <= k < n and 0 <= l < n):
        raise DomainError(f'Small-branch formula needs N >= 3 and 0 <= k,l < N, got k={k}, l={l}, N={n}')
    if k + l <= n - 2:
        if k % 2 and l % 2:
            return k + l
        if k == l and k % 2 == 0 and k:
            return k + 1
    return (k + l + 2) % (n + 1)


def s1kl_residue01(k: int, l: int, n: int) -> PartialValue:  # noqa: E741
    """Exact 0 or 1 when |S(1,k,l)| is 0 or 1 modulo N+1, at least 2 otherwise."""
    if n < 3:
        raise DomainError(f'Residue rule needs N >= 3, got N={n}')
    residue = (k + l + 2) % (n + 1)
    if residue in (0, 1):
        return Exact(residue)
    return AtLeast(2)


def s1kl_reduce(k: int, l: int, n: int) -> tuple[int, int]:  # noqa: E741
    """Index pair of the residual table cell that determines S(1,k,l) under I_N."""
    k0, l0 = k % (n + 1), l % (n + 1)
    if k > n and l0 == n:
        return k0 + n + 1, n
    if l > n and k0 == n:
        return n, l0 + n + 1
    return k0, l0


@cache
def _s1kl_base(a: int, b: int, n: int) -> GrundyValue:
    if a < n and b < n:
        return s1kl_small_formula(a, b, n)
    residue = s1kl_residue01(a, b, n)
    if isinstance(residue, Exact):
        return residue.v
    return grundy_star(SubdividedStar.of(1, a, b), SubtractionSet.interval(n))


def s1kl_grundy(k: int, l: int, n: int) -> GrundyValue:  # noqa: E741
    """Value of S(1,k,l) under I_N from a residual table of O(N^2) cells."""
    if k < 0 or l < 0:
        raise PreconditionError(f'k and l must be nonnegative, got k={k}, l={l}')
    if n < 3:
        return grundy_star(SubdividedStar.of(1, k, l), SubtractionSet.interval(n))
    return _s1kl_base(*s1kl_reduce(k, l, n), n)


def _claim_r(n: int) -> int:
    return n // 2 if n % 4 in (2, 3) else (n - 2) // 2


@dataclass(frozen=True)
class ClaimParams:
    """Parameters of the column rule for S(1,k,N), k in 1..2N with k not in {N, N+1}.

    `x[k]` counts the i in [a(N+1)+1, k-1] with value of S(1,i,N) above N, where k = a(N+1)+b,
    and `row_mex[k]` is the mex of S(1,k,i) over i < N.
    """

    n: int
    r_n: int
    x: dict[int, int] = field(default_factory=dict)
    row_mex: dict[int, int] = field(default_factory=dict)

    @classmethod
    def compute(cls, n: int, solver: StarSolver | None = None) -> ClaimParams:
        if n < 3:
            raise DomainError(f'The column rule needs N >= 3, got N={n}')
        solver = solver or StarSolverRegistry.get(SubtractionSet.interval(n))
        column = {i: solver.grundy(SubdividedStar.of(1, i, n)) for i in range(1, 2 * n + 1)}
        x: dict[int, int] = {}
        row_mex: dict[int, int] = {}
        for k in claim_indices(n):
            start = (k // (n + 1)) * (n + 1) + 1
            x[k] = sum(1 for i in range(start, k) if column[i] > n)
            row_mex[k] = mex(solver.grundy(SubdividedStar.of(1, k, i)) for i in range(n))
        logger.debug(f'Column rule parameters for N={n}: r_N={_claim_r(n)}, x={x}')
        return cls(n, _claim_r(n), x, row_mex)


def claim_indices(n: int) -> Iterator[int]:
    yield from (k for k in range(1, 2 * n + 1) if k not in (n, n + 1))


def claim_star1kN_grundy(k: int, params: ClaimParams) -> GrundyValue:  # noqa: N802
    """Value of S(1,k,N) under I_N by the column rule; a cross-check, not a production evaluator."""
    n = params.n
    if not 1 <= k <= 2 * n or k in (n, n + 1):
        raise DomainError(f'The column rule covers k in 1..2N without N and N+1, got k={k}, N={n}')
    if k in (n - 1, 2 * n):
        return n
    if k in (n - 2, 2 * n - 1):
        return n - 1
    m = params.row_mex[k]
    if 1 <= k <= params.r_n or m >= n - 1:
        return n + params.x[k] + 1
    return m


def csg123_star_grundy(star: SubdividedStar) -> GrundyValue:
    """CSG(1,2,3) value of a subdivided star: every branch may be reduced modulo 4."""
    return grundy_star(star.reduced(4), L_123)


def csg123_family_formula(family_id: str, k: int) -> GrundyValue:
    """CSG(1,2,3) value |G| mod 4 of the families S(k), S(1,k), S(1,1,k), S(1,1,1,k) and S(1,2,k)."""
    if family_id not in FAMILIES_123:
        raise UnknownFamilyError(f'Unknown CSG(1,2,3) family {family_id!r}, expected one of {sorted(FAMILIES_123)}')
    if k < 0:
        raise PreconditionError(f'k must be nonnegative, got {k}')
    return (1 + sum(FAMILIES_123[family_id]) + k) % 4


def csg124_family_formula(family_id: str, k: int) -> GrundyValue:
    """CSG({1,2,4}) value of a star family S(fixed..., k), periodic in k with period 3."""
    if family_id not in FAMILIES_124:
        raise UnknownFamilyError(f'Unknown CSG(1,2,4) family {family_id!r}, expected one of {sorted(FAMILIES_124)}')
    if k < 0:
        raise PreconditionError(f'k must be nonnegative, got {k}')
    _, pattern = FAMILIES_124[family_id]
    return int(pattern[k % 3])


def match_family_124(star: SubdividedStar) -> tuple[str, int] | None:
    """The first known family S(fixed..., k) containing `star`, with its k."""
    for family_id, (fixed, _) in FAMILIES_124.items():
        rest = list(star.branches)
        try:
            for length in fixed:
                rest.remove(length)
        except ValueError:
            continue
        if len(rest) <= 1:
            return family_id, rest[0] if rest else 0
    return None


def csg124_star_grundy(star: SubdividedStar) -> GrundyValue:
    """CSG({1,2,4}) value of a subdivided star: every branch may be reduced modulo 3."""
    reduced = star.reduced(3)
    if reduced.is_path:
        return reduced.size % 3
    if (match := match_family_124(reduced)) is not None:
        return csg124_family_formula(*match)
    return grundy_star(reduced, L_124)


def s1kl_table(n: int, k_max: int, l_max: int) -> list[list[GrundyValue]]:
    """Rows k = 0..k_max, columns l = 0..l_max of S(1,k,l) under I_N."""
    return [[s1kl_grundy(k, l, n) for l in range(l_max + 1)] for k in range(k_max + 1)]  # noqa: E741


def simple_star_table(n: int, t_max: int, k_max: int) -> list[list[GrundyValue]]:
    """Rows k = 0..k_max, columns t = 0..t_max of S(1^t, k) under I_N."""
    return [[simple_star_appended_grundy(t, k, n) for t in range(t_max + 1)] for k in range(k_max + 1)]

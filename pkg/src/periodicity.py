"""Grundy sequences along appended paths: computation, empirical detection and certified periods.

For a base graph G with anchor u, the sequence is f(k) = value of G.u.k. A certificate is built bottom-up:
every anchored sub-mask B of G reachable by removals that spare u gets its own certificate, and the
window of the last max(L) values together with the phases of those dependencies determines the future
once every dependency is in its periodic regime.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict

from .const import CSG_LOGGER_NAME, MAX_VERTICES
from .exceptions import (
    CapacityError,
    CertificationError,
    DomainError,
    PeriodNotFoundError,
    PreconditionError,
    SpecParseError,
)
from .graph import (
    AppendSpec,
    Graph,
    SubdividedStar,
    VertexSet,
    connected_subsets,
    is_connected,
    star_branch_paths,
)
from .solver import GrundyValue, Position, SubtractionSet, TranspositionTable, grundy, grundy_star, mex

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(CSG_LOGGER_NAME)

_DIGITS = re.compile(r'^(\d*)\((\d+)\)$')
_BRACKETED = re.compile(r'^(?:\[(\d+(?:,\d+)*)\])?\(\[(\d+(?:,\d+)*)\]\)$')


@dataclass(frozen=True, slots=True)
class GrundySequence:
    """Eventually periodic sequence: `preperiod` then `period` repeated forever."""

    preperiod: tuple[GrundyValue, ...]
    period: tuple[GrundyValue, ...]
    empirical: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if not self.period:
            raise PreconditionError('A period must hold at least one value')

    @classmethod
    def from_values(
        cls, values: Sequence[GrundyValue], k0: int, period: int, *, empirical: bool = False
    ) -> GrundySequence:
        return cls(tuple(values[:k0]), tuple(values[k0 : k0 + period]), empirical)

    def value_at(self, k: int) -> GrundyValue:
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    @property
    def is_canonical(self) -> bool:
        return self == self.normalized()

    def normalized(self) -> GrundySequence:
        """Same sequence with a primitive period and a minimal preperiod."""
        period = list(self.period)
        size = len(period)
        for d in range(1, size + 1):
            if size % d == 0 and period == period[:d] * (size // d):
                period = period[:d]
                break
        preperiod = list(self.preperiod)
        while preperiod and preperiod[-1] == period[-1]:
            preperiod.pop()
            period = [period[-1], *period[:-1]]
        return GrundySequence(tuple(preperiod), tuple(period), self.empirical)

    def __str__(self) -> str:
        return format_sequence(self)


def format_sequence(gs: GrundySequence) -> str:
    """Preperiod then the period in parentheses, e.g. `00112203(102)`; values >= 10 switch to `[a,b]` groups."""
    if all(v < 10 for v in (*gs.preperiod, *gs.period)):  # noqa: PLR2004
        return ''.join(map(str, gs.preperiod)) + '(' + ''.join(map(str, gs.period)) + ')'
    pre = f'[{",".join(map(str, gs.preperiod))}]' if gs.preperiod else ''
    return f'{pre}([{",".join(map(str, gs.period))}])'


def parse_sequence(text: str) -> GrundySequence:
    """Exact inverse of `format_sequence`; anything `format_sequence` would not produce is rejected."""
    text = text.strip()
    if match := _DIGITS.match(text):
        return GrundySequence(tuple(map(int, match.group(1))), tuple(map(int, match.group(2))))
    if match := _BRACKETED.match(text):
        groups = [match.group(1) or '', match.group(2)]
        if any(re.search(r'(?:^|,)0\d', group) for group in groups):
            raise SpecParseError(f'Leading zeros are not allowed in {text!r}')
        pre, period = (tuple(int(v) for v in group.split(',') if v) for group in groups)
        gs = GrundySequence(pre, period)
        if format_sequence(gs) != text:
            raise SpecParseError(f'{text!r} uses brackets although every value is a single digit')
        return gs
    raise SpecParseError(f'Cannot parse sequence {text!r}')


def detect_period(seq: Sequence[GrundyValue], confirm_window: int) -> GrundySequence:
    """
    Smallest period T, with its minimal start k0, that the sampled values support.

    A candidate T is accepted when seq[k+T] == seq[k] for every k >= k0 and at least 2T + confirm_window
    values lie past k0. The result is empirical: it only describes the sampled prefix.

    Args:
        seq: The sampled values f(0), f(1), ...
        confirm_window: Extra values required beyond two periods, normally max(L).

    Returns:
        The detected sequence, marked empirical.
    """
    n = len(seq)
    for period in range(1, n):
        k0 = 0
        for k in range(n - period - 1, -1, -1):
            if seq[k + period] != seq[k]:
                k0 = k + 1
                break
        if n - k0 >= 2 * period + confirm_window:
            return GrundySequence.from_values(seq, k0, period, empirical=True)
    raise PeriodNotFoundError(f'No period confirmed within {n} values and a window of {confirm_window}')


class AppendedFamily:
    """Values f_B(k) of B.u.k for the anchored sub-masks B of one base graph.

    Mask 0 is the bare path P_k. When the base is a subdivided star centered at the anchor (or empty) every
    value comes from the star solver; otherwise the family is realized once at full length and searched
    with a single transposition table.
    """

    def __init__(self, base: Graph, anchor: int | None, subtraction: SubtractionSet):
        AppendSpec(base, anchor, 0)  # validates the anchor
        self.base = base
        self.anchor = anchor
        self.subtraction = subtraction
        self.k_cap = MAX_VERTICES - base.n
        self._branches: list[list[int]] | None = None
        if base.n == 0:
            self._branches = []
        elif anchor is not None:
            try:
                self._branches = star_branch_paths(base, anchor)
            except DomainError:
                self._branches = None
        self._memo = TranspositionTable[VertexSet]()

    @property
    def root_mask(self) -> VertexSet:
        return self.base.full

    @property
    def star_shaped(self) -> bool:
        return self._branches is not None

    @cached_property
    def _realized(self) -> tuple[AppendSpec, Graph]:
        spec = AppendSpec(self.base, self.anchor, self.k_cap)
        return spec, spec.realize()

    def _star(self, mask: VertexSet, k: int) -> SubdividedStar | None:
        if mask == 0:
            return SubdividedStar.of(k - 1) if k else None
        lengths = []
        for path in self._branches or []:
            length = 0
            while length < len(path) and mask >> path[length] & 1:
                length += 1
            lengths.append(length)
        return SubdividedStar((*lengths, k))

    def value(self, mask: VertexSet, k: int) -> GrundyValue:
        if k > self.k_cap:
            raise CapacityError(f'Appending {k} vertices to a {self.base.n}-vertex base exceeds {MAX_VERTICES}')
        if self._branches is not None:
            star = self._star(mask, k)
            return 0 if star is None else grundy_star(star, self.subtraction)
        spec, graph = self._realized
        return grundy(Position(graph, mask | spec.path_mask(k)), self.subtraction, self._memo)

    def sequence(self, mask: VertexSet, k_max: int) -> list[GrundyValue]:
        return [self.value(mask, k) for k in range(k_max + 1)]

    def dependencies(self, mask: VertexSet) -> list[VertexSet]:
        """Anchored sub-masks B minus H for legal removals H that spare the anchor; the path (0) first."""
        if mask == 0:
            return []
        spare = mask & ~(1 << self.anchor) if self.anchor is not None else 0
        found = {
            mask & ~h
            for h in connected_subsets(self.base, spare, self.subtraction.max)
            if h.bit_count() in self.subtraction and is_connected(self.base, mask & ~h)
        }
        return [0, *sorted(found)]


@dataclass(frozen=True, slots=True)
class StateVector:
    """The last max(L) values of a sequence and the phase of each dependency period."""

    window: tuple[GrundyValue, ...]
    phases: tuple[int, ...]


class PeriodCertificate(BaseModel):
    """A proven period of f_B: f(k + period) == f(k) for every k >= start."""

    model_config = ConfigDict(frozen=True)

    subject: str
    mask: int
    base_size: int
    subtraction: list[int]
    period: int
    start: int
    lcm_period: int
    values: list[int]
    dependencies: list[PeriodCertificate] = []

    @property
    def cert_id(self) -> str:
        return 'path' if self.mask == 0 else f'm{self.mask:x}'

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def value_at(self, k: int) -> GrundyValue:
        if k < len(self.values):
            return self.values[k]
        return self.values[self.start + (k - self.start) % self.period]

    @property
    def primitive_period(self) -> int:
        for d in range(1, self.period + 1):
            if self.period % d == 0 and all(
                self.value_at(k + d) == self.value_at(k) for k in range(self.start, self.start + self.period)
            ):
                return d
        return self.period

    def sequence(self) -> GrundySequence:
        return GrundySequence.from_values(self.values, self.start, self.period).normalized()

    def closure(self) -> list[PeriodCertificate]:
        """This certificate and all its dependencies, each once, in build order."""
        ordered: dict[int, PeriodCertificate] = {}

        def visit(cert: PeriodCertificate) -> None:
            if cert.mask in ordered:
                return
            for dep in cert.dependencies:
                visit(dep)
            ordered[cert.mask] = cert

        visit(self)
        return list(ordered.values())

    def to_text(self) -> str:
        """One line per certificate of the closure, dependencies first."""
        lines = []
        for cert in self.closure():
            deps = ','.join(dep.cert_id for dep in cert.dependencies) or '-'
            lines.append(
                f'cert {cert.cert_id} subject={cert.subject} size={cert.size} T={cert.period} start={cert.start} '
                f'lcm={cert.lcm_period} deps={deps} values={",".join(map(str, cert.values))}'
            )
        return '\n'.join(lines)


PeriodCertificate.model_rebuild()


class Certifier:
    """Builds period certificates for the anchored sub-masks of one family, sharing work across masks."""

    def __init__(self, family: AppendedFamily, subject: str = '', k_bound: int | None = None):
        self.family = family
        self.subject = subject
        self.k_bound = k_bound
        self._certificates: dict[VertexSet, PeriodCertificate] = {}

    def certify(self, mask: VertexSet) -> PeriodCertificate:
        if (cert := self._certificates.get(mask)) is not None:
            return cert
        family = self.family
        window = family.subtraction.max
        deps = [self.certify(d) for d in family.dependencies(mask)]
        lcm_period = math.lcm(*(d.period for d in deps)) if deps else 1
        k_lo = max((d.start for d in deps), default=0) + window

        seen: dict[StateVector, int] = {}
        k = k_lo
        while True:
            if self.k_bound is not None and k > self.k_bound:
                msg = (
                    f'No repeated state for mask {mask:#x} of {self.subject or "family"} up to k={k - 1}; '
                    f'the search bound k={self.k_bound} is reached'
                )
                logger.error(msg)
                raise CertificationError(msg)
            if family.base.n + k + window > MAX_VERTICES:
                msg = (
                    f'No repeated state for mask {mask:#x} of {self.subject or "family"} up to k={k - 1}; '
                    f'the {MAX_VERTICES}-vertex bound is reached'
                )
                logger.error(msg)
                raise CertificationError(msg)
            state = StateVector(
                tuple(family.value(mask, j) for j in range(k + 1, k + window + 1)),
                tuple(k % d.period for d in deps),
            )
            if state in seen:
                break
            seen[state] = k
            k += 1
        k1 = seen[state]
        period = k - k1
        start = k1 + 1
        while start > 0 and family.value(mask, start - 1) == family.value(mask, start - 1 + period):
            start -= 1
        values = family.sequence(mask, max(start + period, window + 1) - 1)
        cert = PeriodCertificate(
            subject=self.subject,
            mask=mask,
            base_size=family.base.n,
            subtraction=list(family.subtraction),
            period=period,
            start=start,
            lcm_period=lcm_period,
            values=values,
            dependencies=deps,
        )
        logger.debug(f'Certified {cert.cert_id}: period {period} from k={start}, repeat found at k={k1},{k}')
        self._certificates[mask] = cert
        return cert


def appended_sequence(
    base: Graph, anchor: int | None, subtraction: SubtractionSet, k_max: int
) -> list[GrundyValue]:
    """f(0..k_max) for the family G.u.k, each value exact."""
    if base.n + k_max > MAX_VERTICES:
        raise CapacityError(f'Appending {k_max} vertices to a {base.n}-vertex base exceeds {MAX_VERTICES}')
    family = AppendedFamily(base, anchor, subtraction)
    return family.sequence(family.root_mask, k_max)


def certify_period(
    base: Graph, anchor: int | None, subtraction: SubtractionSet, subject: str = '', k_bound: int | None = None
) -> PeriodCertificate:
    """Certify the period of G.u.k by certifying every anchored sub-mask first.

    The repeated-state search stops at `k_bound`, or where G.u.k would exceed the vertex capacity.
    """
    family = AppendedFamily(base, anchor, subtraction)
    return Certifier(family, subject, k_bound).certify(family.root_mask)


def replay_certificate(cert: PeriodCertificate, k_end: int) -> list[GrundyValue]:
    """Rebuild f(0..k_end) from the seed values f(0..max L) and the dependency certificates only."""
    subtraction = SubtractionSet(tuple(cert.subtraction))
    window = subtraction.max
    book = {c.mask: c for c in cert.closure()}
    path = book.get(0)
    size = cert.size
    values = list(cert.values[: window + 1])
    others = [d for d in cert.dependencies if d.mask != 0]
    for k in range(len(values), k_end + 1):
        options = [values[k - c] for c in subtraction]
        options.extend(dep.value_at(k) for dep in others)
        if cert.mask and path is not None:
            options.extend(path.value_at(k - (c - size)) for c in subtraction if c >= size)
        values.append(mex(options))
    return values[: k_end + 1]


def path_period_observation(cert: PeriodCertificate) -> str:
    """Whether the certified period equals the period of the same game on paths; reported, never asserted."""
    path = next((c for c in cert.closure() if c.mask == 0), cert)
    own, on_paths = cert.primitive_period, path.primitive_period
    verdict = 'same as' if own == on_paths else 'differs from'
    return f'{cert.subject or cert.cert_id}: primitive period {own} {verdict} the path period {on_paths}'

from __future__ import annotations

import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING

from pydantic import BaseModel, Field

from .closed_forms import (
    L_123,
    L_124,
    ClaimParams,
    claim_indices,
    claim_star1kN_grundy,
    clear_caches,
    csg123_family_formula,
    csg123_star_grundy,
    csg124_family_formula,
    csg124_star_grundy,
    path_grundy,
    s1kl_grundy,
    s1kl_residue01,
    s1kl_small_formula,
    simple_star_appended_grundy,
)
from .const import (
    CSG_LOGGER_NAME,
    DEFAULT_SUITE,
    EXTRA_SUITE,
    FAMILIES_123,
    FAMILIES_124,
    GENERAL_SOLVE_CAP,
    MAX_VERTICES,
    S1KL_ANCHORS_N8,
    S333_SUBSTARS_124,
    SMALL_STARS_124_EXCEPTIONS,
    SMALL_STARS_124_SIZE_MOD_3,
    STAR_SOLVE_CAP,
    SUBTRACTION_247,
    SUBTRACTION_247_SEQUENCE,
    TABLE_S1TK_N4,
)
from .exceptions import PreconditionError, UnknownFamilyError
from .graph import (
    EMPTY_GRAPH,
    AppendSpec,
    Graph,
    SubdividedStar,
    enumerate_removals,
    make_path,
    make_subdivided_star,
)
from .periodicity import (
    appended_sequence,
    certify_period,
    detect_period,
    format_sequence,
    path_period_observation,
    replay_certificate,
)
from .solver import Outcome, Position, SubtractionSet, grundy, grundy_star
from .utils import render_graph, render_star

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator, Sequence

logger = logging.getLogger(CSG_LOGGER_NAME)

LIFTING_MAX_VERTICES = 12


class Mismatch(BaseModel):
    instance: str = Field(..., description='Reproducing instance in the graph mini-language')
    expected: str
    got: str
    size: int = Field(0, description='Realized vertex count, used to pick the minimal instance')


class VerificationReport(BaseModel):
    check_id: str
    instances: int = 0
    mismatches: list[Mismatch] = []
    millis: int = 0
    notes: list[str] = []

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def minimal_mismatch(self) -> Mismatch | None:
        return min(self.mismatches, key=lambda m: (m.size, m.instance), default=None)

    def machine_line(self) -> str:
        return f'{self.check_id} {"pass" if self.passed else "fail"} {self.instances} {self.millis}'


class _Check:
    """Accumulates expectations for one report and times it."""

    def __init__(self, check_id: str):
        self.check_id = check_id
        self.instances = 0
        self.mismatches: list[Mismatch] = []
        self.notes: list[str] = []
        self._started = time.perf_counter()

    def expect(self, instance: str, expected: object, got: object, size: int = 0) -> bool:
        self.instances += 1
        if expected == got:
            return True
        self.mismatches.append(Mismatch(instance=instance, expected=str(expected), got=str(got), size=size))
        return False

    def report(self) -> VerificationReport:
        report = VerificationReport(
            check_id=self.check_id,
            instances=self.instances,
            mismatches=self.mismatches,
            millis=round((time.perf_counter() - self._started) * 1000),
            notes=self.notes,
        )
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(level, f'{report.machine_line()} ({len(report.mismatches)} mismatches)')
        return report


def merge_reports(check_id: str, reports: Iterable[VerificationReport]) -> VerificationReport:
    reports = list(reports)
    return VerificationReport(
        check_id=check_id,
        instances=sum(r.instances for r in reports),
        mismatches=[m for r in reports for m in r.mismatches],
        millis=sum(r.millis for r in reports),
        notes=[n for r in reports for n in r.notes],
    )


def _stars(max_branches: int, max_len: int, size_cap: int) -> Iterator[SubdividedStar]:
    for t in range(max_branches + 1):
        for lengths in combinations_with_replacement(range(max_len, 0, -1), t):
            star = SubdividedStar(lengths)
            if star.size <= size_cap:
                yield star


def verify_paths(n_max: int = 6, k_max: int = 60) -> VerificationReport:
    """Path sequences: k mod (N+1) under I_N, and the {2,4,7} sequence with preperiod 8 and period 3."""
    check = _Check('paths')
    for n in range(1, n_max + 1):
        subtraction = SubtractionSet.interval(n)
        values = appended_sequence(EMPTY_GRAPH, None, subtraction, k_max)
        for k, value in enumerate(values):
            check.expect(f'path:{k} L=I:{n}', k % (n + 1), value, k)
            check.expect(f'path:{k} L=I:{n} (closed form)', value, path_grundy(k, subtraction), k)
    subtraction = SubtractionSet(SUBTRACTION_247)
    values = appended_sequence(EMPTY_GRAPH, None, subtraction, 30)
    detected = format_sequence(detect_period(values, subtraction.max))
    check.expect(f'path L={subtraction}', SUBTRACTION_247_SEQUENCE, detected)
    for k, value in enumerate(values):
        check.expect(f'path:{k} L={subtraction} (closed form)', value, path_grundy(k, subtraction), k)
    return check.report()


def verify_lifting_hypothesis(
    family: Sequence[Graph],
    period: int,
    alphas: Sequence[int],
    probe: Sequence[Graph],
    subtraction: SubtractionSet,
    check_id: str = 'lifting',
) -> VerificationReport:
    """
    Check that values on a family depend only on the size modulo `period`, then lift the rule to probes.

    Every family member must have value alphas[|G| mod period], the legal removal sizes of every probe
    taken mod period must be exactly 1..period-1, and when both hold each probe must follow the same rule.

    Args:
        family: Graphs whose values fix the rule.
        period: The modulus T.
        alphas: The value for each residue; a permutation of 0..T-1.
        probe: Graphs the rule is lifted to.
        subtraction: The legal removal sizes.
        check_id: Report id.

    Returns:
        The verification report.
    """
    if sorted(alphas) != list(range(period)):
        raise PreconditionError(f'alphas must be a permutation of 0..{period - 1}, got {list(alphas)}')
    if any(g.n > LIFTING_MAX_VERTICES for g in (*family, *probe)):
        raise PreconditionError(f'Lifting checks are limited to graphs of at most {LIFTING_MAX_VERTICES} vertices')
    check = _Check(check_id)
    suffix = f' L={subtraction}'
    hypothesis = all([
        check.expect(render_graph(g) + suffix, alphas[g.n % period], grundy(Position.whole(g), subtraction), g.n)
        for g in family
    ])
    residues = list(range(1, period))
    for g in probe:
        # a removal of size 0 mod T would reach the probe's own residue
        sizes = sorted({h.bit_count() % period for h in enumerate_removals(g, g.full, subtraction)})
        hypothesis &= check.expect(f'{render_graph(g)}{suffix} removal residues', residues, sizes, g.n)
    if hypothesis:
        for g in probe:
            value = grundy(Position.whole(g), subtraction)
            check.expect(render_graph(g) + suffix, alphas[g.n % period], value, g.n)
    else:
        check.notes.append('lifting hypothesis failed; probe values not checked')
    return check.report()


def verify_lifting_defaults() -> VerificationReport:
    paths = [make_path(k) for k in range(1, 13)]
    under_123 = verify_lifting_hypothesis(
        paths,
        4,
        [0, 1, 2, 3],
        [make_subdivided_star([1, 1, k]) for k in range(2, 7)],
        L_123,
    )
    under_124 = verify_lifting_hypothesis(
        paths + [make_subdivided_star([1, 1, k]) for k in range(1, 4)],
        3,
        [0, 1, 2],
        [make_subdivided_star([1, 1, k]) for k in range(4, 9)],
        L_124,
    )
    return merge_reports('lifting', [under_123, under_124])


def verify_table_S1tk_I4() -> VerificationReport:  # noqa: N802
    """All cells of the S(1^t, k) table under I_4, t <= 10 and k <= 8, by search and by reduction."""
    check = _Check('table-s1tk')
    subtraction = SubtractionSet.interval(4)
    for k, row in enumerate(TABLE_S1TK_N4):
        for t, expected in enumerate(row):
            star = SubdividedStar.simple(t, k)
            instance = f'{render_star(star)} L=I:4'
            check.expect(instance, expected, grundy_star(star, subtraction), star.size)
            check.expect(f'{instance} (reduction)', expected, simple_star_appended_grundy(t, k, 4), star.size)
    return check.report()


def verify_table_S1kl(n_values: Iterable[int] = range(3, 9)) -> VerificationReport:  # noqa: N802
    """Small-branch formula for S(1,k,l) against search, all 0 <= k,l < N."""
    check = _Check('table-s1kl')
    for n in n_values:
        subtraction = SubtractionSet.interval(n)
        for k in range(n):
            for l in range(n):  # noqa: E741
                star = SubdividedStar.of(1, k, l)
                check.expect(
                    f'{render_star(star)} L=I:{n}',
                    grundy_star(star, subtraction),
                    s1kl_small_formula(k, l, n),
                    star.size,
                )
    return check.report()


def verify_s1kl_theorem(n: int, k_max: int, l_max: int) -> VerificationReport:
    """The S(1,k,l) evaluator against search over a grid, plus its symmetry and residue rules."""
    check = _Check(f's1kl-n{n}')
    subtraction = SubtractionSet.interval(n)
    for k in range(k_max + 1):
        for l in range(l_max + 1):  # noqa: E741
            star = SubdividedStar.of(1, k, l)
            instance = f'{render_star(star)} L=I:{n}'
            expected = grundy_star(star, subtraction)
            value = s1kl_grundy(k, l, n)
            check.expect(instance, expected, value, star.size)
            check.expect(f'{instance} (symmetry)', value, s1kl_grundy(l, k, n), star.size)
            if n >= 3:  # noqa: PLR2004
                residue = s1kl_residue01(k, l, n)
                check.expect(f'{instance} (residue rule {residue})', True, residue.consistent_with(expected), star.size)
            if n == 3:  # noqa: PLR2004
                check.expect(f'{instance} (period 4)', value, s1kl_grundy(k % 4, l % 4, 3), star.size)
    if n == 8:  # noqa: PLR2004
        for (k, l), expected in S1KL_ANCHORS_N8.items():  # noqa: E741
            star = SubdividedStar.of(1, k, l)
            check.expect(f'{render_star(star)} L=I:8 (search)', expected, grundy_star(star, subtraction), star.size)
            check.expect(f'{render_star(star)} L=I:8 (evaluator)', expected, s1kl_grundy(k, l, 8), star.size)
    return check.report()


def verify_s1kl_sampled(n: int, samples: int = 40, seed: int = 0) -> VerificationReport:
    """The S(1,k,l) evaluator against search on seeded random k, l <= 3(N+1)."""
    check = _Check(f's1kl-sampled-n{n}')
    subtraction = SubtractionSet.interval(n)
    rng = random.Random(seed * 100 + n)  # noqa: S311
    for _ in range(samples):
        k, l = rng.randint(0, 3 * (n + 1)), rng.randint(0, 3 * (n + 1))  # noqa: E741
        star = SubdividedStar.of(1, k, l)
        check.expect(f'{render_star(star)} L=I:{n}', grundy_star(star, subtraction), s1kl_grundy(k, l, n), star.size)
    return check.report()


def verify_s1kl_defaults() -> VerificationReport:
    reports = [verify_s1kl_theorem(3, 15, 15)]
    reports.extend(verify_s1kl_theorem(n, 3 * (n + 1), 3 * (n + 1)) for n in (4, 5))
    reports.append(verify_s1kl_theorem(8, 2, 2))
    reports.extend(verify_s1kl_sampled(n) for n in (6, 7, 8))
    return merge_reports('s1kl', reports)


def _verify_branch_invariance(
    check: _Check,
    subtraction: SubtractionSet,
    modulus: int,
    evaluator: Callable[[SubdividedStar], int],
    stars: Iterable[SubdividedStar],
    star_cap: int,
) -> None:
    suffix = f' L={subtraction}'
    for star in stars:
        value = grundy_star(star, subtraction)
        check.expect(f'{render_star(star)}{suffix} (reduced)', value, evaluator(star), star.size)
        for index in range(len(star.branches) + 1):
            if 0 < index < len(star.branches) and star.branches[index] == star.branches[index - 1]:
                continue
            extended = star.extended(index, modulus)
            if extended.size > star_cap:
                continue
            check.expect(
                f'{render_star(extended)}{suffix} vs {render_star(star)}',
                value,
                grundy_star(extended, subtraction),
                extended.size,
            )


def verify_theorem_123(
    max_branches: int = 4, max_len: int = 7, size_cap: int = 20, star_cap: int = STAR_SOLVE_CAP
) -> VerificationReport:
    """CSG(1,2,3) on subdivided stars: values are unchanged by adding 4 to any branch."""
    check = _Check('thm-123')
    _verify_branch_invariance(check, L_123, 4, csg123_star_grundy, _stars(max_branches, max_len, size_cap), star_cap)
    for family_id, fixed in FAMILIES_123.items():
        for k in range(12):
            star = SubdividedStar((*fixed, k))
            check.expect(
                f'{render_star(star)} L={L_123} ({family_id})',
                grundy_star(star, L_123),
                csg123_family_formula(family_id, k),
                star.size,
            )
    return check.report()


def verify_theorem_124(
    max_branches: int = 4, max_len: int = 7, size_cap: int = 20, star_cap: int = STAR_SOLVE_CAP
) -> VerificationReport:
    """CSG({1,2,4}) on subdivided stars: values are unchanged by adding 3 to any branch; fixture values hold."""
    check = _Check('thm-124')
    _verify_branch_invariance(check, L_124, 3, csg124_star_grundy, _stars(max_branches, max_len, size_cap), star_cap)
    fixtures = {
        **S333_SUBSTARS_124,
        **{branches: (1 + sum(branches)) % 3 for branches in SMALL_STARS_124_SIZE_MOD_3},
        **SMALL_STARS_124_EXCEPTIONS,
    }
    for branches, expected in fixtures.items():
        star = SubdividedStar(branches)
        check.expect(f'{render_star(star)} L={L_124} (fixture)', expected, grundy_star(star, L_124), star.size)
    return check.report()


def verify_csg124_families(k_max: int = 30) -> VerificationReport:
    """The seven periodic CSG({1,2,4}) star families against search."""
    check = _Check('families-124')
    for family_id, (fixed, _) in FAMILIES_124.items():
        for k in range(k_max + 1):
            star = SubdividedStar((*fixed, k))
            check.expect(
                f'{render_star(star)} L={L_124} ({family_id})',
                grundy_star(star, L_124),
                csg124_family_formula(family_id, k),
                star.size,
            )
    return check.report()


def verify_obs_plus_M(n: int, general_cap: int = GENERAL_SOLVE_CAP) -> VerificationReport:  # noqa: N802
    """A star with N+2 leaves and its (N+1)-appended version differ under I_N joined with {2N+4}."""
    check = _Check(f'obs-plus-m-n{n}')
    subtraction = SubtractionSet.interval(n, 2 * n + 4)
    leaves = n + 2
    star = SubdividedStar.simple(leaves)
    appended = SubdividedStar.simple(leaves, n + 1)
    alone, longer = grundy_star(star, subtraction), grundy_star(appended, subtraction)
    instance = f'{render_star(star)} + append({render_star(star)},u=0,k={n + 1}) L={subtraction}'
    check.expect(instance, Outcome.N.value, Outcome.of(alone ^ longer).value, star.size + appended.size)
    spec = AppendSpec(make_subdivided_star([1] * leaves), 0, n + 1)
    if spec.size <= general_cap:
        check.expect(
            f'{render_star(appended)} L={subtraction} (graph search)',
            longer,
            grundy(Position.whole(spec.realize()), subtraction),
            spec.size,
        )
    return check.report()


def _certify_family(check: _Check, label: str, base: Graph, anchor: int | None, subtraction: SubtractionSet) -> None:
    cert = certify_period(base, anchor, subtraction, subject=label)
    k_end = min(cert.start + 3 * cert.period, MAX_VERTICES - base.n)
    exact = appended_sequence(base, anchor, subtraction, k_end)
    check.expect(f'{label} L={subtraction} (replay to k={k_end})', exact, replay_certificate(cert, k_end), base.n)
    check.notes.append(path_period_observation(cert))
    if base.n == 0 and (n := subtraction.interval_bound) is not None:
        check.expect(f'{label} L={subtraction} (period divides N+1)', 0, (n + 1) % cert.primitive_period)
        check.expect(f'{label} L={subtraction} (pure)', 0, cert.start)


def verify_certificates() -> VerificationReport:
    """Certify and replay the path and simple-star families, and S(1,1) under {2,4,7}."""
    check = _Check('certify')
    for n in range(1, 5):
        subtraction = SubtractionSet.interval(n)
        _certify_family(check, 'path', EMPTY_GRAPH, None, subtraction)
        for t in range(1, 5):
            _certify_family(check, f'star:1^{t}@center', make_subdivided_star([1] * t), 0, subtraction)
    _certify_family(check, 'sstar:1,1@center', make_subdivided_star([1, 1]), 0, SubtractionSet(SUBTRACTION_247))
    return check.report()


def verify_claim_column(n: int) -> VerificationReport:
    """The column rule for S(1,k,N) against search; disagreements are reported, not resolved."""
    check = _Check(f'claim-2n-n{n}')
    subtraction = SubtractionSet.interval(n)
    params = ClaimParams.compute(n)
    for k in claim_indices(n):
        star = SubdividedStar.of(1, k, n)
        check.expect(
            f'{render_star(star)} L=I:{n} (column rule)',
            grundy_star(star, subtraction),
            claim_star1kN_grundy(k, params),
            star.size,
        )
    return check.report()


CHECKS: dict[str, Callable[[], VerificationReport]] = {
    'paths': verify_paths,
    'table-s1tk': verify_table_S1tk_I4,
    'table-s1kl': verify_table_S1kl,
    's1kl': verify_s1kl_defaults,
    'lifting': verify_lifting_defaults,
    'thm-123': verify_theorem_123,
    'thm-124': verify_theorem_124,
    'families-124': verify_csg124_families,
    'obs-plus-m': lambda: merge_reports('obs-plus-m', [verify_obs_plus_M(2), verify_obs_plus_M(3)]),
    'certify': verify_certificates,
    'claim-2n': lambda: merge_reports('claim-2n', [verify_claim_column(n) for n in range(3, 9)]),
}


def resolve_suite(suite: str) -> list[str]:
    """`all` is the default suite; otherwise a comma list of check ids."""
    if suite == 'all':
        return list(DEFAULT_SUITE)
    ids = [s.strip() for s in suite.split(',') if s.strip()]
    unknown = [s for s in ids if s not in CHECKS]
    if unknown or not ids:
        known = ', '.join([*DEFAULT_SUITE, *EXTRA_SUITE])
        raise UnknownFamilyError(f'Unknown verification ids {unknown}, expected `all` or some of: {known}')
    return ids


def run_check(check_id: str) -> VerificationReport:
    logger.info(f'Running verification {check_id}')
    report = CHECKS[check_id]()
    return report.model_copy(update={'check_id': check_id})


def run_suite(ids: Sequence[str], jobs: int = 1) -> list[VerificationReport]:
    """Run checks in order; with jobs > 1 they run in separate worker processes.

    Checks of one suite share the value caches; they are dropped once the suite is done.
    """
    try:
        if jobs > 1 and len(ids) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(run_check, ids))
        return [run_check(check_id) for check_id in ids]
    finally:
        clear_caches()

"""Construction of every nonnegative joint quadruple distribution P(aa'bb')
whose pair marginals reproduce the measured EPR experiments.

Two-step recipe.  Step 1 fixes the triple probabilities P(a.bb') and
P(.a'bb') from three scalars: the shared marginal P(..++) and the splits
P(+.++), P(.+++).  Each scalar ranges over an explicit interval; the
interval for P(..++) is nonempty exactly when the eight CHSH inequalities
hold.  Step 2 fixes the four block parameters P(++bb'), each again ranging
over an interval that is never empty, and fills in the remaining entries by
sum rules.  With one extra parameter for the unmeasured P(A'B'), the same
recipe fits three experiments for arbitrary inputs.

Parameters are positions t in [0, 1] within the feasible intervals, applied
in a fixed order (P(..++); P(+.++); P(.+++); P(++bb') lexicographically in
(b, b') with + before -), so every t-tuple yields a valid distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .chsh import chsh_probability_form
from .errors import (
    ChshViolationError,
    InputInconsistencyError,
    InternalInvariantError,
    UsageError,
    ValidationError,
)
from .experiments import (
    ExperimentalProbs,
    correlation_from_pair,
    expand_pair,
    frechet_bounds,
)
from .indexing import SIGNS, Sign, marginal, outcome_label, quad_index

EMPTY_SLACK = 1e-12
POS_ATOL = 1e-12
SUM_ATOL = 1e-9

BB_BLOCKS: tuple[tuple[Sign, Sign], ...] = tuple(product(SIGNS, repeat=2))


@dataclass(frozen=True)
class Interval:
    """A closed feasible interval; construction code widens both ends by
    EMPTY_SLACK before declaring emptiness, to survive degenerate inputs."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def is_empty(self, slack: float = EMPTY_SLACK) -> bool:
        return self.lo - slack > self.hi + slack

    def pick(self, t: float) -> float:
        """The point at fraction t of the interval, clamped inside it."""
        if not 0.0 <= t <= 1.0:
            raise ValidationError(f"parameter fraction t = {t!r} is outside [0, 1]")
        if self.hi <= self.lo:
            return (self.lo + self.hi) / 2.0
        return min(max(self.lo + t * self.width, self.lo), self.hi)

    def position(self, x: float) -> float:
        """Inverse of pick: the fraction where x sits (0.5 for degenerate)."""
        if self.width <= EMPTY_SLACK:
            return 0.5
        return min(max((x - self.lo) / self.width, 0.0), 1.0)

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))


@dataclass(frozen=True)
class FamilyParams:
    """Fractions t in [0, 1] positioning each free parameter in its interval.

    t_aprime_bprime applies only to the three-experiment construction and is
    ignored otherwise; None means the default midpoint.
    """

    t_dotdot: float = 0.5
    t_aplus: float = 0.5
    t_aprimeplus: float = 0.5
    t_bb: tuple[float, float, float, float] = (0.5, 0.5, 0.5, 0.5)
    t_aprime_bprime: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_bb", tuple(float(t) for t in self.t_bb))
        if len(self.t_bb) != 4:
            raise ValidationError(f"t_bb needs 4 entries, got {len(self.t_bb)}")
        named = [
            ("t_dotdot", self.t_dotdot),
            ("t_aplus", self.t_aplus),
            ("t_aprimeplus", self.t_aprimeplus),
            *((f"t_bb[{i}]", t) for i, t in enumerate(self.t_bb)),
        ]
        if self.t_aprime_bprime is not None:
            named.append(("t_aprime_bprime", self.t_aprime_bprime))
        for name, value in named:
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} = {value!r} is outside [0, 1]")

    @classmethod
    def defaults(cls) -> "FamilyParams":
        return cls()

    @classmethod
    def uniform(cls, t: float, t_aprime_bprime: float | None = None) -> "FamilyParams":
        return cls(t, t, t, (t, t, t, t), t_aprime_bprime)

    def as_tuple7(self) -> tuple[float, ...]:
        return (self.t_dotdot, self.t_aplus, self.t_aprimeplus, *self.t_bb)


@dataclass(frozen=True)
class QuadDistribution:
    """Sixteen nonnegative joint probabilities P(aa'bb') summing to one.

    Entries follow the indexing-module layout.  Use from_raw for computed
    tables: it zeroes entries in [-POS_ATOL, 0) and renormalizes.
    """

    entries: tuple[float, ...]
    atol: float = field(default=SUM_ATOL, compare=False)

    def __post_init__(self) -> None:
        entries = tuple(float(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != 16:
            raise ValidationError(f"quadruple table needs 16 entries, got {len(entries)}")
        for outcome in product(SIGNS, repeat=4):
            value = entries[quad_index(*outcome)]
            if value < -POS_ATOL:
                raise ValidationError(
                    f"P({outcome_label(outcome)}) = {value!r} is negative"
                )
        total = sum(entries)
        if abs(total - 1.0) > self.atol:
            raise ValidationError(f"quadruple table sums to {total!r}, not 1")

    @classmethod
    def from_raw(cls, entries: Sequence[float], atol: float = SUM_ATOL) -> "QuadDistribution":
        clamped = [0.0 if -POS_ATOL <= e < 0.0 else float(e) for e in entries]
        total = sum(clamped)
        if total > 0.0 and abs(total - 1.0) <= atol:
            clamped = [e / total for e in clamped]
        return cls(tuple(clamped), atol=atol)

    def value(self, a: Sign, ap: Sign, b: Sign, bp: Sign) -> float:
        return self.entries[quad_index(a, ap, b, bp)]

    def marginal(self, a: Sign = 0, ap: Sign = 0, b: Sign = 0, bp: Sign = 0) -> float:
        return marginal(self.entries, a, ap, b, bp)

    def to_probs(self, atol: float = SUM_ATOL) -> ExperimentalProbs:
        """The eight measured probabilities this table reproduces."""
        return ExperimentalProbs(
            p_a=self.marginal(a=1),
            p_ap=self.marginal(ap=1),
            p_b=self.marginal(b=1),
            p_bp=self.marginal(bp=1),
            p_ab=self.marginal(a=1, b=1),
            p_abp=self.marginal(a=1, bp=1),
            p_apb=self.marginal(ap=1, b=1),
            p_apbp=self.marginal(ap=1, bp=1),
            atol=atol,
        )

    def labeled(self) -> dict[str, float]:
        return {
            outcome_label(outcome): self.entries[quad_index(*outcome)]
            for outcome in product(SIGNS, repeat=4)
        }


@dataclass(frozen=True)
class TripleProbs:
    """The sixteen triple probabilities P(a.bb') and P(.a'bb').

    Indexed 4*i(first sign) + 2*i(b) + i(b') with i(+1)=0, i(-1)=1.
    """

    pa: tuple[float, ...]
    pap: tuple[float, ...]
    atol: float = field(default=SUM_ATOL, compare=False)

    def __post_init__(self) -> None:
        for name, side in (("P(a.bb')", self.pa), ("P(.a'bb')", self.pap)):
            if len(side) != 8:
                raise ValidationError(f"{name} needs 8 entries, got {len(side)}")
            for value in side:
                if value < -POS_ATOL:
                    raise ValidationError(f"{name} entry {value!r} is negative")
        for b, bp in BB_BLOCKS:
            lhs = sum(self.pa_value(a, b, bp) for a in SIGNS)
            rhs = sum(self.pap_value(ap, b, bp) for ap in SIGNS)
            if abs(lhs - rhs) > self.atol:
                raise ValidationError(
                    f"triple marginals disagree on P(..{outcome_label((b, bp))}): "
                    f"{lhs!r} vs {rhs!r}"
                )

    @staticmethod
    def _index(first: Sign, b: Sign, bp: Sign) -> int:
        return (4 if first < 0 else 0) + (2 if b < 0 else 0) + (1 if bp < 0 else 0)

    def pa_value(self, a: Sign, b: Sign, bp: Sign) -> float:
        return self.pa[self._index(a, b, bp)]

    def pap_value(self, ap: Sign, b: Sign, bp: Sign) -> float:
        return self.pap[self._index(ap, b, bp)]

    def p_bb(self, b: Sign, bp: Sign) -> float:
        """P(..bb') summed from the a side."""
        return sum(self.pa_value(a, b, bp) for a in SIGNS)


def _a_side_inputs(probs: ExperimentalProbs, a: Sign) -> tuple[float, float, float]:
    """(P(a.+.), P(a..+), P(a...)) from the measured probabilities."""
    if a > 0:
        return probs.p_ab, probs.p_abp, probs.p_a
    return probs.p_b - probs.p_ab, probs.p_bp - probs.p_abp, 1.0 - probs.p_a


def _ap_side_inputs(probs: ExperimentalProbs, ap: Sign) -> tuple[float, float, float]:
    """(P(.a'+.), P(.a'.+), P(.a'..)); needs the fourth experiment."""
    p_apbp = probs.require_all_four()
    if ap > 0:
        return probs.p_apb, p_apbp, probs.p_ap
    return probs.p_b - probs.p_apb, probs.p_bp - p_apbp, 1.0 - probs.p_ap


def _plusplus_bounds(with_b: float, with_bp: float, single: float) -> Interval:
    """max(0, P(x+.) + P(x.+) - P(x..)) <= P(x++) <= min(P(x+.), P(x.+))."""
    return Interval(max(0.0, with_b + with_bp - single), min(with_b, with_bp))


def interval_p_dotdot(probs: ExperimentalProbs) -> Interval:
    """Allowed interval of the shared marginal P(..++).

    Intersects the region reachable as P(+.++) + P(-.++) with the region
    reachable as P(.+++) + P(.-++); the intersection is nonempty exactly
    when all eight CHSH inequalities hold, otherwise ChshViolationError.
    """
    sides = []
    for inputs in (_a_side_inputs, _ap_side_inputs):
        lows, highs = [0.0, probs.p_b + probs.p_bp - 1.0], [probs.p_b, probs.p_bp]
        cross = []
        for sign in SIGNS:
            with_b, with_bp, single = inputs(probs, sign)
            lows.append(with_b + with_bp - single)
            cross.append((with_b, with_bp))
        (pb_plus, pbp_plus), (pb_minus, pbp_minus) = cross
        highs.extend([pb_plus + pbp_minus, pbp_plus + pb_minus])
        sides.append(Interval(max(lows), min(highs)))
    result = sides[0].intersect(sides[1])
    if result.is_empty():
        report = chsh_probability_form(probs)
        raise ChshViolationError(
            "the measured probabilities violate the CHSH inequalities "
            f"(P(..++) interval [{result.lo!r}, {result.hi!r}] is empty); "
            "no four-experiment joint distribution exists",
            report=report,
        )
    return result


def _split_interval(own: Interval, other: Interval, p_dotdot: float, what: str) -> Interval:
    """Allowed values x with x in own and p_dotdot - x in other."""
    result = Interval(
        max(own.lo, p_dotdot - other.hi), min(own.hi, p_dotdot - other.lo)
    )
    if result.is_empty():
        raise InternalInvariantError(
            f"empty interval for {what} at P(..++) = {p_dotdot!r}: "
            "the scalar lies outside its allowed region"
        )
    return result


def interval_p_a_plusplus(probs: ExperimentalProbs, a: Sign, p_dotdot: float) -> Interval:
    """Allowed interval of P(a.++) given the shared marginal P(..++)."""
    own = _plusplus_bounds(*_a_side_inputs(probs, a))
    other = _plusplus_bounds(*_a_side_inputs(probs, -a))
    return _split_interval(own, other, p_dotdot, f"P({'+' if a > 0 else '-'}.++)")


def interval_p_aprime_plusplus(probs: ExperimentalProbs, ap: Sign, p_dotdot: float) -> Interval:
    """Allowed interval of P(.a'++) given the shared marginal P(..++)."""
    own = _plusplus_bounds(*_ap_side_inputs(probs, ap))
    other = _plusplus_bounds(*_ap_side_inputs(probs, -ap))
    return _split_interval(own, other, p_dotdot, f"P(.{'+' if ap > 0 else '-'}++)")


def _triple_block(with_b: float, with_bp: float, single: float, base: float, what: str):
    """The four triples of one side from its ++ value, by sum rules."""
    values = (
        base,
        with_b - base,
        with_bp - base,
        single + base - with_b - with_bp,
    )
    for label, value in zip(("++", "+-", "-+", "--"), values):
        if value < -POS_ATOL:
            raise InternalInvariantError(
                f"triple probability {what}{label}) = {value!r} is negative; "
                "a chosen scalar violates its interval"
            )
    return values


def step1_triples(
    probs: ExperimentalProbs, p_a_pp: float, p_ap_pp: float, p_dotdot: float
) -> TripleProbs:
    """All sixteen triple probabilities from the three chosen scalars.

    P(+.++) = p_a_pp and P(-.++) = p_dotdot - p_a_pp, then per side
    P(x+-) = P(x+.) - P(x++), P(x-+) = P(x.+) - P(x++),
    P(x--) = P(x..) + P(x++) - P(x+.) - P(x.+); same with primes.
    """
    pa: list[float] = []
    pap: list[float] = []
    for sign in SIGNS:
        base_a = p_a_pp if sign > 0 else p_dotdot - p_a_pp
        pa.extend(_triple_block(*_a_side_inputs(probs, sign), base_a,
                                f"P({'+' if sign > 0 else '-'}."))
        base_ap = p_ap_pp if sign > 0 else p_dotdot - p_ap_pp
        pap.extend(_triple_block(*_ap_side_inputs(probs, sign), base_ap,
                                 f"P(.{'+' if sign > 0 else '-'}"))
    return TripleProbs(tuple(pa), tuple(pap))


def interval_p_pp_bb(triples: TripleProbs, b: Sign, bp: Sign) -> Interval:
    """Allowed interval of P(++bb') given the step-1 triples."""
    x = triples.pa_value(1, b, bp)
    y = triples.pap_value(1, b, bp)
    total = triples.p_bb(b, bp)
    result = Interval(max(0.0, x + y - total), min(x, y))
    if result.is_empty():
        raise InternalInvariantError(
            f"empty interval for P(++{outcome_label((b, bp))}): "
            "triples violate their sum rules"
        )
    return result


def step2_quadruple(triples: TripleProbs, p_pp_bb: Sequence[float]) -> QuadDistribution:
    """The full quadruple table from the four chosen block values P(++bb').

    Per block: P(+-bb') = P(+.bb') - P(++bb'), P(-+bb') = P(.+bb') - P(++bb'),
    P(--bb') = P(..bb') - P(.+bb') - P(+.bb') + P(++bb').
    """
    if len(p_pp_bb) != 4:
        raise UsageError(f"need 4 block values P(++bb'), got {len(p_pp_bb)}")
    entries = [0.0] * 16
    for (b, bp), chosen in zip(BB_BLOCKS, p_pp_bb):
        x = triples.pa_value(1, b, bp)
        y = triples.pap_value(1, b, bp)
        total = triples.p_bb(b, bp)
        block = {
            (1, 1): chosen,
            (1, -1): x - chosen,
            (-1, 1): y - chosen,
            (-1, -1): total - x - y + chosen,
        }
        for (a, ap), value in block.items():
            if value < -POS_ATOL:
                raise InternalInvariantError(
                    f"P({outcome_label((a, ap, b, bp))}) = {value!r} is negative; "
                    "a block value violates its interval"
                )
            entries[quad_index(a, ap, b, bp)] = value
    return QuadDistribution.from_raw(entries)


@dataclass(frozen=True)
class ConstructionTrace:
    """Full record of one construction run: intervals, chosen scalars, output."""

    probs: ExperimentalProbs
    params: FamilyParams
    intervals: dict[str, Interval]
    chosen: dict[str, float]
    triples: TripleProbs
    quad: QuadDistribution
    chosen_aprime_bprime: float | None = None


def construct_4exp_trace(
    probs: ExperimentalProbs, params: FamilyParams | None = None
) -> ConstructionTrace:
    params = params if params is not None else FamilyParams.defaults()
    probs.require_all_four()
    intervals: dict[str, Interval] = {}
    chosen: dict[str, float] = {}

    intervals["P(..++)"] = iv = interval_p_dotdot(probs)
    chosen["P(..++)"] = p_dotdot = iv.pick(params.t_dotdot)
    intervals["P(+.++)"] = iv = interval_p_a_plusplus(probs, 1, p_dotdot)
    chosen["P(+.++)"] = p_a_pp = iv.pick(params.t_aplus)
    intervals["P(.+++)"] = iv = interval_p_aprime_plusplus(probs, 1, p_dotdot)
    chosen["P(.+++)"] = p_ap_pp = iv.pick(params.t_aprimeplus)

    triples = step1_triples(probs, p_a_pp, p_ap_pp, p_dotdot)

    blocks: list[float] = []
    for (b, bp), t in zip(BB_BLOCKS, params.t_bb):
        label = f"P(++{outcome_label((b, bp))})"
        intervals[label] = iv = interval_p_pp_bb(triples, b, bp)
        chosen[label] = value = iv.pick(t)
        blocks.append(value)
    quad = step2_quadruple(triples, blocks)
    return ConstructionTrace(probs, params, intervals, chosen, triples, quad)


def construct_4exp(
    probs: ExperimentalProbs, params: FamilyParams | None = None
) -> QuadDistribution:
    """A joint distribution fitting all four experiments; ChshViolationError
    when none exists."""
    return construct_4exp_trace(probs, params).quad


def interval_p_aprime_bprime(probs: ExperimentalProbs) -> Interval:
    """Allowed values of the unmeasured P(A'B') in the three-experiment case.

    Intersects the two CHSH constraint pairs on the unknown correlation,
    |<A'B> - <A'B'>| <= 2 - |<AB> + <AB'>| and
    |<A'B> + <A'B'>| <= 2 - |<AB> - <AB'>|,
    with the Fréchet bounds for (P(A'), P(B')).  Nonempty for every input
    whose seven measured probabilities are mutually consistent.
    """
    e_ab = correlation_from_pair(probs.p_ab, probs.p_a, probs.p_b)
    e_abp = correlation_from_pair(probs.p_abp, probs.p_a, probs.p_bp)
    e_apb = correlation_from_pair(probs.p_apb, probs.p_ap, probs.p_b)
    shift = 2.0 * probs.p_ap + 2.0 * probs.p_bp - 1.0

    def corr_window(center: float, radius: float) -> Interval:
        # correlation window -> probability window via P = (e + shift) / 4
        return Interval((center - radius + shift) / 4.0, (center + radius + shift) / 4.0)

    same_sign = corr_window(e_apb, 2.0 - abs(e_ab + e_abp))
    flip_sign = corr_window(-e_apb, 2.0 - abs(e_ab - e_abp))
    frechet = Interval(*frechet_bounds(probs.p_ap, probs.p_bp))
    result = same_sign.intersect(flip_sign).intersect(frechet)
    if result.is_empty():
        raise InputInconsistencyError(
            "no value of P(A'B') is consistent with the three measured "
            f"experiments (interval [{result.lo!r}, {result.hi!r}] is empty)"
        )
    return result


def construct_3exp_trace(
    probs: ExperimentalProbs, params: FamilyParams | None = None
) -> ConstructionTrace:
    params = params if params is not None else FamilyParams.defaults()
    if probs.p_apbp is not None:
        raise UsageError(
            "three-experiment construction takes probabilities without P(A'B'); "
            "drop it with without_aprime_bprime()"
        )
    interval = interval_p_aprime_bprime(probs)
    t = params.t_aprime_bprime if params.t_aprime_bprime is not None else 0.5
    chosen = interval.pick(t)
    full = probs.with_aprime_bprime(chosen)
    trace = construct_4exp_trace(full, params)
    intervals = {"P(A'B')": interval, **trace.intervals}
    chosen_map = {"P(A'B')": chosen, **trace.chosen}
    return ConstructionTrace(
        full, params, intervals, chosen_map, trace.triples, trace.quad,
        chosen_aprime_bprime=chosen,
    )


def construct_3exp(
    probs: ExperimentalProbs, params: FamilyParams | None = None
) -> tuple[QuadDistribution, float]:
    """A joint distribution fitting the three measured experiments, together
    with the chosen P(A'B').  Works for arbitrary consistent inputs."""
    trace = construct_3exp_trace(probs, params)
    assert trace.chosen_aprime_bprime is not None
    return trace.quad, trace.chosen_aprime_bprime


def invert_params(probs: ExperimentalProbs, quad: QuadDistribution) -> FamilyParams:
    """Parameter fractions reproducing a given feasible distribution.

    Inverts the affine maps in construction order; the result fed back into
    construct_4exp reproduces quad (up to rounding) whenever quad's
    marginals equal probs.
    """
    p_dotdot = quad.marginal(b=1, bp=1)
    iv = interval_p_dotdot(probs)
    t_dotdot = iv.position(p_dotdot)
    p_dotdot = iv.pick(t_dotdot)

    p_a_pp = quad.marginal(a=1, b=1, bp=1)
    iv = interval_p_a_plusplus(probs, 1, p_dotdot)
    t_aplus = iv.position(p_a_pp)
    p_a_pp = iv.pick(t_aplus)

    p_ap_pp = quad.marginal(ap=1, b=1, bp=1)
    iv = interval_p_aprime_plusplus(probs, 1, p_dotdot)
    t_aprimeplus = iv.position(p_ap_pp)
    p_ap_pp = iv.pick(t_aprimeplus)

    triples = step1_triples(probs, p_a_pp, p_ap_pp, p_dotdot)
    t_bb = tuple(
        interval_p_pp_bb(triples, b, bp).position(quad.value(1, 1, b, bp))
        for b, bp in BB_BLOCKS
    )
    return FamilyParams(t_dotdot, t_aplus, t_aprimeplus, t_bb)


def marginal_residuals(
    quad: QuadDistribution, probs: ExperimentalProbs
) -> tuple[dict[str, dict[str, float]], float]:
    """Computed-minus-expected for every outcome cell of every measured
    experiment (12 cells for three experiments, 16 for four)."""
    experiments = [
        ("AB", probs.p_a, probs.p_b, probs.p_ab, lambda x, y: quad.marginal(a=x, b=y)),
        ("AB'", probs.p_a, probs.p_bp, probs.p_abp, lambda x, y: quad.marginal(a=x, bp=y)),
        ("A'B", probs.p_ap, probs.p_b, probs.p_apb, lambda x, y: quad.marginal(ap=x, b=y)),
    ]
    if probs.p_apbp is not None:
        experiments.append(
            ("A'B'", probs.p_ap, probs.p_bp, probs.p_apbp,
             lambda x, y: quad.marginal(ap=x, bp=y))
        )
    residuals: dict[str, dict[str, float]] = {}
    worst = 0.0
    for label, p_x, p_y, p_xy, margin in experiments:
        expected = expand_pair(p_x, p_y, p_xy, atol=max(probs.atol, SUM_ATOL)).as_tuple()
        cells = {}
        for (x, y), want in zip(product(SIGNS, repeat=2), expected):
            have = margin(x, y)
            cells[outcome_label((x, y))] = have - want
            worst = max(worst, abs(have - want))
        residuals[label] = cells
    return residuals, worst


@dataclass(frozen=True)
class SweepResult:
    """Summary of a full t-grid sweep of the construction family."""

    total_points: int
    valid_points: int
    min_entry: float
    min_params: FamilyParams
    best_min_entry: float
    best_params: FamilyParams

    @property
    def all_valid(self) -> bool:
        return self.valid_points == self.total_points


def _block_stats(triples: TripleProbs, b: Sign, bp: Sign, axis: Sequence[float]):
    """Per grid value of t for one (b, b') block: the block's min entry."""
    iv = interval_p_pp_bb(triples, b, bp)
    x = triples.pa_value(1, b, bp)
    y = triples.pap_value(1, b, bp)
    total = triples.p_bb(b, bp)
    mins = []
    for t in axis:
        p = iv.pick(t)
        mins.append(min(p, x - p, y - p, total - x - y + p))
    return mins


def sweep_grid(
    probs: ExperimentalProbs,
    axis: Sequence[float],
    pos_atol: float = POS_ATOL,
) -> SweepResult:
    """Evaluate the construction on the full t-grid axis^k (k = 7 for four
    experiments, 8 for three) and report validity counts and extremes.

    Exploits that, once the first parameters fix the triples, the four
    P(++bb') blocks are independent: validity and min-entry statistics over
    the full grid factorize exactly over blocks.  Equivalent to enumerating
    every grid point through the scalar construction (tested against it).
    """
    axis = [float(t) for t in axis]
    if not axis:
        raise UsageError("sweep needs at least one grid value per axis")
    three_mode = not probs.has_all_four
    n = len(axis)

    if three_mode:
        apbp_interval = interval_p_aprime_bprime(probs)
        prefixes: Iterator = (
            ((t_apbp, t0, t1, t2), probs.with_aprime_bprime(apbp_interval.pick(t_apbp)))
            for t_apbp, t0, t1, t2 in product(axis, repeat=4)
        )
        total_points = n ** 8
    else:
        prefixes = (((None, t0, t1, t2), probs) for t0, t1, t2 in product(axis, repeat=3))
        total_points = n ** 7

    valid_points = 0
    min_entry = float("inf")
    min_choice: tuple | None = None
    best_min_entry = float("-inf")
    best_choice: tuple | None = None

    for (t_apbp, t0, t1, t2), full in prefixes:
        iv = interval_p_dotdot(full)
        p0 = iv.pick(t0)
        p1 = interval_p_a_plusplus(full, 1, p0).pick(t1)
        p2 = interval_p_aprime_plusplus(full, 1, p0).pick(t2)
        triples = step1_triples(full, p1, p2, p0)

        block_mins = [_block_stats(triples, b, bp, axis) for b, bp in BB_BLOCKS]

        valid_per_block = [
            sum(1 for m in mins if m >= -pos_atol) for mins in block_mins
        ]
        count = 1
        for v in valid_per_block:
            count *= v
        valid_points += count

        worst_ts = tuple(axis[min(range(n), key=lambda i: mins[i])] for mins in block_mins)
        worst = min(min(mins) for mins in block_mins)
        if worst < min_entry:
            min_entry = worst
            min_choice = (t_apbp, t0, t1, t2, worst_ts)

        best_ts = tuple(axis[max(range(n), key=lambda i: mins[i])] for mins in block_mins)
        best = min(max(mins) for mins in block_mins)
        if best > best_min_entry:
            best_min_entry = best
            best_choice = (t_apbp, t0, t1, t2, best_ts)

    def to_params(choice: tuple) -> FamilyParams:
        t_apbp, t0, t1, t2, t_bb = choice
        return FamilyParams(t0, t1, t2, t_bb, t_apbp)

    assert min_choice is not None and best_choice is not None
    return SweepResult(
        total_points=total_points,
        valid_points=valid_points,
        min_entry=min_entry,
        min_params=to_params(min_choice),
        best_min_entry=best_min_entry,
        best_params=to_params(best_choice),
    )

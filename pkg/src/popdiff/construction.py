"""Certified construction of a set whose sumset lies in a popular
difference set.

The pipeline intersects r random translates of A, keeps the intersection
only when a pair-mass inequality holds, subsamples it to a small A_1 with
almost all pairwise sums popular, and filters to the A_2 whose members see
every partner, which forces A_2 + A_2 inside D_c(A).  Randomness only
decides *when* a stage succeeds; every acceptance is an exact big-integer
inequality, and a successful run is re-verified by an independent naive
sumset check before a certificate is issued.

Exact forms used throughout (alpha = |A| / 2^n, sigma = sn/sd in lowest
terms, all stated over the normalized counting measure and then cleared of
denominators):

* stage parameter: r is the least positive integer with c^r <= sigma/2;
* size restriction: ceil(2^n alpha^r / sqrt(2)) >= k for k = 1/sigma,
  decided via "z > k-1", squared to |A|^(2r) > (k-1)^2 * 2^(2n(r-1)+1)
  (trivially true at k = 1 for nonempty A);
* intersection acceptance, with S the number of ordered pairs of A_0^2
  whose sum is unpopular:
  (sn*|A_0|^2 - sd*S) * 2^(2n(r-1)+1) >= sn*|A|^(2r);
* subsample acceptance: sd * #{pairs with popular sum} >= (sd-2sn)*m^2;
* filter: keep x when sd * #{y : x+y popular} >= (sd-3sn)*m, which under
  3*sigma*m < 1 forces the count to equal m exactly.

Retries are capped; an exhausted stage raises with the smallest deficit
seen rather than looping forever.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from .correlation import autocorrelation, popular_difference_set
from .f2n import DenseSet, _check_dim, f2set_loads, f2set_dumps, make_set, set_sha256, sumset
from .rng import SplitMix64

DEFAULT_TRIALS = 200

CERT_FORMAT = "POPDIFF-CERT v1"


class RetryExhausted(RuntimeError):
    """A randomized stage ran out of trials; carries the best deficit seen."""

    def __init__(self, stage: str, trials: int, best_deficit: int | None):
        self.stage = stage
        self.trials = trials
        self.best_deficit = best_deficit
        super().__init__(
            f"stage {stage!r} not accepted within {trials} trials"
            f" (best deficit {best_deficit})"
        )


class PlanInfeasible(ValueError):
    """The construction plan cannot be executed on the given inputs."""


class DegenerateInput(ValueError):
    """The input set admits no construction at all (e.g. it is empty)."""


class SoundnessError(RuntimeError):
    """An inequality the accepted stages guarantee failed to re-check.

    This never fires on correct code; it indicates an upstream bug, not a
    property of the input.
    """


class VerificationError(RuntimeError):
    """Certificate verification failed; ``check`` names the first failure."""

    def __init__(self, check: str, detail: str):
        self.check = check
        self.detail = detail
        super().__init__(f"verification check {check!r} failed: {detail}")


class BoundaryAmbiguous(ValueError):
    """A floored bound evaluated within 2^-20 of an integer."""


@dataclass(frozen=True)
class Budgets:
    lemma_trials: int = DEFAULT_TRIALS
    refine_trials: int = DEFAULT_TRIALS


def lemma_r(sigma: Fraction | int, c: Fraction | int) -> int:
    """Least positive integer r with c^r <= sigma/2.

    Decided by exact integer powering (cn^r * sd * 2 <= sn * cd^r), never
    by floating-point logarithms.  Requires 0 < c < 1 (at c = 1 no power
    ever drops below sigma/2) and 0 < sigma <= 1.
    """
    sigma = Fraction(sigma)
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError(f"c must lie strictly between 0 and 1, got {c}")
    if not 0 < sigma <= 1:
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    lhs = c.numerator * sigma.denominator * 2
    rhs = sigma.numerator * c.denominator
    r = 1
    while lhs > rhs:
        lhs *= c.numerator
        rhs *= c.denominator
        r += 1
    return r


def restrict_holds(n: int, card_a: int, r: int, inv_sigma: int) -> bool:
    """Exact test of ceil(2^n alpha^r / sqrt(2)) >= inv_sigma.

    For integer k the ceiling condition is equivalent to
    2^n alpha^r / sqrt(2) > k - 1, and squaring clears the sqrt(2):
    |A|^(2r) > (k-1)^2 * 2^(2n(r-1)+1).  The k = 1 case reduces to
    |A| >= 1 via the same formula.
    """
    if inv_sigma < 1:
        raise ValueError("inv_sigma must be a positive integer")
    return card_a ** (2 * r) > (inv_sigma - 1) ** 2 << (2 * n * (r - 1) + 1)


@dataclass(frozen=True)
class ConstructionPlan:
    """Chosen (sigma, r) plus the integer thresholds of every stage.

    sigma is always the reciprocal of a positive integer, which keeps
    floor(1/sigma / 4) and every cross-multiplied threshold exact and the
    optimizer a finite search.
    """

    n: int
    card_a: int
    c: Fraction
    sigma: Fraction
    r: int
    target_a1_size: int  # m = floor(1/sigma / 4)
    guarantee: int  # floor(m / 2)
    trivial: bool

    @property
    def lemma_shift(self) -> int:
        return 2 * self.n * (self.r - 1) + 1

    @property
    def lemma_rhs(self) -> int:
        return self.sigma.numerator * self.card_a ** (2 * self.r)

    @property
    def pair_rhs(self) -> int:
        sn, sd = self.sigma.numerator, self.sigma.denominator
        return (sd - 2 * sn) * self.target_a1_size**2

    @property
    def filter_rhs(self) -> int:
        sn, sd = self.sigma.numerator, self.sigma.denominator
        return (sd - 3 * sn) * self.target_a1_size

    def validate(self) -> None:
        """Re-check the plan invariants; raises on any violation."""
        sn, sd = self.sigma.numerator, self.sigma.denominator
        if sn != 1:
            raise SoundnessError("plan sigma must be the reciprocal of an integer")
        if self.r != lemma_r(self.sigma, self.c):
            raise SoundnessError("plan r does not match the stage parameter rule")
        if not restrict_holds(self.n, self.card_a, self.r, sd):
            raise SoundnessError("plan violates the size restriction")
        if self.target_a1_size != sd // 4:
            raise SoundnessError("plan target size is not floor(1/sigma / 4)")
        if 3 * sn * self.target_a1_size >= sd:
            raise SoundnessError("plan violates 3 * sigma * m < 1")
        if self.guarantee != self.target_a1_size // 2:
            raise SoundnessError("plan guarantee is not floor(m / 2)")

    def to_json_obj(self) -> dict:
        return {
            "sigma": str(self.sigma),
            "r": self.r,
            "target_a1_size": self.target_a1_size,
            "guarantee": self.guarantee,
            "trivial": self.trivial,
            "lemma_shift": self.lemma_shift,
            "lemma_rhs": self.lemma_rhs,
            "pair_rhs": self.pair_rhs,
            "filter_rhs": self.filter_rhs,
        }


def choose_sigma(n: int, card_a: int, c: Fraction | int) -> ConstructionPlan:
    """Best plan for the given instance: maximize floor(floor(1/sigma/4)/2).

    For each stage count r the largest admissible integer k = 1/sigma is
    min of the stage-rule bound floor(c.den^r / (2 c.num^r)) and the size
    restriction (largest k passing ``restrict_holds``); candidates whose k
    belongs to a different r are skipped, since they recur at their true r
    with at least as large a k.  When no candidate reaches guarantee 1
    (the typical outcome of alpha <= c at small n, where the closed-form
    bound is 0 anyway) the plan is flagged trivial and the caller falls
    back to the singleton {0}.
    """
    n = _check_dim(n)
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError(f"c must lie strictly between 0 and 1, got {c}")
    if not 1 <= card_a <= 1 << n:
        raise ValueError(f"cardinality {card_a} out of range for n={n}")

    best: tuple[int, int, int] | None = None  # (guarantee, r, k)
    cn, cd = c.numerator, c.denominator
    # safe cutoff: past the least r with c^r <= 2^(-2n) the size
    # restriction admits no useful sigma
    r_max = 1
    while cn**r_max << (2 * n) > cd**r_max:
        r_max += 1
    for r in range(1, r_max + 1):
        k_rule = cd**r // (2 * cn**r)
        k_size = math.isqrt((card_a ** (2 * r) - 1) >> (2 * n * (r - 1) + 1)) + 1
        k = min(k_rule, k_size)
        if k < 8:
            continue  # guarantee floor(floor(k/4)/2) would be 0
        if lemma_r(Fraction(1, k), c) != r:
            continue
        if not restrict_holds(n, card_a, r, k):
            raise SoundnessError("size-restriction bound computed incorrectly")
        guarantee = (k // 4) // 2
        if best is None or guarantee > best[0]:
            best = (guarantee, r, k)

    if best is None:
        sigma = Fraction(1, 1)
        plan = ConstructionPlan(
            n=n,
            card_a=card_a,
            c=c,
            sigma=sigma,
            r=lemma_r(sigma, c),
            target_a1_size=0,
            guarantee=0,
            trivial=True,
        )
        return plan

    guarantee, r, k = best
    plan = ConstructionPlan(
        n=n,
        card_a=card_a,
        c=c,
        sigma=Fraction(1, k),
        r=r,
        target_a1_size=k // 4,
        guarantee=guarantee,
        trivial=False,
    )
    plan.validate()
    return plan


def sample_intersection(a: DenseSet, r: int, rng: SplitMix64) -> tuple[DenseSet, list[int]]:
    """Intersection of r independent uniform translates of A."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    translates = [rng.below(a.size) for _ in range(r)]
    out = a.translate(translates[0])
    for x in translates[1:]:
        out = out.intersect(a.translate(x))
    return out, translates


@dataclass(frozen=True)
class LemmaOutcome:
    accepted: bool
    s_count: int  # ordered pairs of A'^2 whose sum is unpopular
    deficit: int  # rhs - lhs of the acceptance inequality; <= 0 iff accepted


def lemma_accept(
    a_prime: DenseSet,
    a: DenseSet,
    c: Fraction | int,
    sigma: Fraction | int,
    r: int,
    d: DenseSet | None = None,
) -> LemmaOutcome:
    """Exact acceptance test for one intersection trial.

    S is computed from one autocorrelation of A' summed over the
    complement of D_c(A); the decision inequality is evaluated in
    big-integer arithmetic with no rounding anywhere.
    """
    sigma = Fraction(sigma)
    if d is None:
        d = popular_difference_set(a, c)
    ac = autocorrelation(a_prime)
    s_count = int(ac.counts[d.bits == 0].sum())
    sn, sd = sigma.numerator, sigma.denominator
    lhs = (sn * a_prime.card**2 - sd * s_count) << (2 * a.n * (r - 1) + 1)
    rhs = sn * a.card ** (2 * r)
    return LemmaOutcome(accepted=lhs >= rhs, s_count=s_count, deficit=rhs - lhs)


@dataclass(frozen=True)
class LemmaStage:
    a0: DenseSet
    translates: tuple[int, ...]
    s_count: int
    trials: int


def find_lemma_set(
    a: DenseSet,
    c: Fraction | int,
    sigma: Fraction | int,
    rng: SplitMix64,
    max_trials: int = DEFAULT_TRIALS,
    d: DenseSet | None = None,
) -> LemmaStage:
    """Rejection-sample intersections until one is accepted.

    Acceptance implies (and this function re-asserts) the two facts the
    rest of the pipeline relies on: the squared size bound
    2 |A_0|^2 2^(2n(r-1)) >= |A|^(2r), and that at most a sigma fraction
    of the ordered pairs of A_0^2 have unpopular sums.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be at least 1")
    sigma = Fraction(sigma)
    c = Fraction(c)
    if d is None:
        d = popular_difference_set(a, c)
    r = lemma_r(sigma, c)
    sn, sd = sigma.numerator, sigma.denominator
    best_deficit: int | None = None
    for trial in range(1, max_trials + 1):
        a0, translates = sample_intersection(a, r, rng)
        out = lemma_accept(a0, a, c, sigma, r, d=d)
        if out.accepted:
            if a0.card**2 << (2 * a.n * (r - 1) + 1) < a.card ** (2 * r):
                raise SoundnessError("accepted trial violates the squared size bound")
            if sn * a0.card**2 < sd * out.s_count:
                raise SoundnessError("accepted trial violates the pair-density bound")
            return LemmaStage(a0, tuple(translates), out.s_count, trial)
        if best_deficit is None or out.deficit < best_deficit:
            best_deficit = out.deficit
    raise RetryExhausted("lemma", max_trials, best_deficit)


def _pair_count(points: np.ndarray, member_bits: np.ndarray, chunk: int = 512) -> int:
    """#{(x, y) in points^2 : x XOR y is a member}, in row blocks."""
    total = 0
    for i in range(0, len(points), chunk):
        block = points[i : i + chunk, None] ^ points[None, :]
        total += int(member_bits[block].sum())
    return total


def _per_point_counts(points: np.ndarray, member_bits: np.ndarray, chunk: int = 512) -> np.ndarray:
    counts = np.empty(len(points), dtype=np.int64)
    for i in range(0, len(points), chunk):
        block = points[i : i + chunk, None] ^ points[None, :]
        counts[i : i + chunk] = member_bits[block].sum(axis=1)
    return counts


@dataclass(frozen=True)
class RefineStage:
    a1: DenseSet
    pairs_in_d: int
    trials: int


def refine_a1(
    a0: DenseSet,
    plan: ConstructionPlan,
    d: DenseSet,
    rng: SplitMix64,
    max_trials: int = DEFAULT_TRIALS,
) -> RefineStage:
    """Uniform m-subset of A_0, resampled until almost all pair sums are
    popular: sd * pairs >= (sd - 2 sn) * m^2, checked exactly.

    The pair count is a direct O(m^2) scan; m = floor(1/sigma / 4) is
    small by construction, so no transform is warranted here.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be at least 1")
    m = plan.target_a1_size
    if m < 1:
        raise PlanInfeasible("plan has target size 0; nothing to refine")
    pts = a0.points()
    if len(pts) < m:
        raise PlanInfeasible(f"|A_0| = {len(pts)} is below the target size {m}")
    sd = plan.sigma.denominator
    best_deficit: int | None = None
    for trial in range(1, max_trials + 1):
        chosen = pts[rng.sample(len(pts), m)]
        pairs = _pair_count(chosen, d.bits)
        if pairs * sd >= plan.pair_rhs:
            return RefineStage(make_set(a0.n, chosen), pairs, trial)
        deficit = plan.pair_rhs - pairs * sd
        if best_deficit is None or deficit < best_deficit:
            best_deficit = deficit
    raise RetryExhausted("refine", max_trials, best_deficit)


def filter_a2(a1: DenseSet, plan: ConstructionPlan, d: DenseSet) -> DenseSet:
    """Keep the points of A_1 that see (1 - 3 sigma) of A_1 inside D.

    Because 3 sigma |A_1| < 1 the threshold can only be met by seeing all
    of A_1, so membership literally means x + A_1 lies inside D; that set
    inclusion and the counting bound |A_2| >= ceil(|A_1| / 2) are both
    asserted outright, since they are theorems given an accepted A_1.
    """
    m = plan.target_a1_size
    pts = a1.points()
    if len(pts) != m:
        raise PlanInfeasible(f"|A_1| = {len(pts)} does not match the plan size {m}")
    sn, sd = plan.sigma.numerator, plan.sigma.denominator
    if 3 * sn * m >= sd:
        raise PlanInfeasible("3 * sigma * |A_1| must stay below 1")
    counts = _per_point_counts(pts, d.bits)
    keep = counts * sd >= plan.filter_rhs
    kept = pts[keep]
    if kept.size and not d.bits[kept[:, None] ^ pts[None, :]].all():
        raise SoundnessError("a filtered point fails the literal x + A_1 inclusion")
    if len(kept) < (m + 1) // 2:
        raise SoundnessError("|A_2| fell below ceil(|A_1| / 2)")
    return make_set(a1.n, kept)


def verify_containment(a2: DenseSet, d: DenseSet) -> bool:
    """Exhaustive check that A_2 + A_2 is inside D via the naive sumset.

    Deliberately independent of the pipeline bookkeeping: the sumset is
    recomputed from pairwise XORs, not from any transform or stored count.
    """
    if a2.n != d.n:
        raise ValueError(f"dimension mismatch: {a2.n} vs {d.n}")
    return sumset(a2, a2, method="naive").subset_of(d)


def theorem_bound(n: int, alpha: Fraction | int, c: Fraction | int) -> int:
    """floor(alpha^3 * 2^(n (1 - log(1/alpha)/log(1/c))) / 12).

    When alpha = 2^-a and c = 2^-b with b dividing n(b-a) the exponent is
    an integer and the value is computed exactly.  Otherwise it is
    evaluated at high precision and floored only when it sits more than
    2^-20 away from an integer; nearer than that raises
    BoundaryAmbiguous instead of guessing.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    alpha = Fraction(alpha)
    c = Fraction(c)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0 < c < 1:
        raise ValueError(f"c must lie strictly between 0 and 1, got {c}")

    def _dyadic_exp(q: Fraction) -> int | None:
        # q = 2^-e exactly, e >= 0
        if q.numerator == 1 and (q.denominator & (q.denominator - 1)) == 0:
            return q.denominator.bit_length() - 1
        return None

    a_exp = _dyadic_exp(alpha)
    b_exp = _dyadic_exp(c)
    if a_exp is not None and b_exp is not None and (n * (b_exp - a_exp)) % b_exp == 0:
        e = n * (b_exp - a_exp) // b_exp
        value = Fraction(2) ** (e - 3 * a_exp) / 12
        return value.numerator // value.denominator

    with mpmath.workprec(max(160, 8 * n)):
        la = mpmath.log(mpmath.mpf(alpha.denominator) / alpha.numerator)
        lc = mpmath.log(mpmath.mpf(c.denominator) / c.numerator)
        exponent = n * (1 - la / lc)
        value = (
            mpmath.mpf(alpha.numerator) ** 3
            / mpmath.mpf(alpha.denominator) ** 3
            * mpmath.power(2, exponent)
            / 12
        )
        nearest = mpmath.nint(value)
        if abs(value - nearest) <= mpmath.mpf(2) ** -20:
            raise BoundaryAmbiguous(
                f"bound value {value} is within 2^-20 of an integer"
            )
        return int(mpmath.floor(value))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertStats:
    lemma_trials: int | None
    card_a0: int | None
    s_count: int | None
    refine_trials: int | None
    a1_pairs_in_d: int | None
    card_a2: int

    def to_json_obj(self) -> dict:
        return {
            "lemma_trials": self.lemma_trials,
            "card_a0": self.card_a0,
            "s_count": self.s_count,
            "refine_trials": self.refine_trials,
            "a1_pairs_in_d": self.a1_pairs_in_d,
            "card_a2": self.card_a2,
        }


def _set_payload(s: DenseSet | None) -> str | None:
    if s is None:
        return None
    return f2set_dumps(s).split("\n")[1]


def _set_from_payload(n: int, payload: str | None) -> DenseSet | None:
    if payload is None:
        return None
    return f2set_loads(f"F2SET v1 n={n}\n{payload}\n")


@dataclass(frozen=True)
class Certificate:
    """Replayable transcript of one construction run.

    Everything needed for independent verification is embedded: the input
    set itself (hex payload), the exact parameters, the seed and budgets,
    the accepted intermediate sets, and the stage statistics.  Serialization
    is canonical (sorted keys, fixed indentation), so identical runs yield
    byte-identical files.
    """

    input_set: DenseSet
    c: Fraction
    seed: int
    budgets: Budgets
    plan: ConstructionPlan
    translates: tuple[int, ...]
    a0: DenseSet | None
    a1: DenseSet | None
    a2: DenseSet
    stats: CertStats
    verified: bool
    guarantee_met: bool

    @property
    def n(self) -> int:
        return self.input_set.n

    def to_json_obj(self) -> dict:
        return {
            "format": CERT_FORMAT,
            "n": self.n,
            "c": str(self.c),
            "input_card": self.input_set.card,
            "input_set": _set_payload(self.input_set),
            "input_sha256": set_sha256(self.input_set),
            "seed": self.seed,
            "budgets": {
                "lemma_trials": self.budgets.lemma_trials,
                "refine_trials": self.budgets.refine_trials,
            },
            "plan": self.plan.to_json_obj(),
            "translates": list(self.translates),
            "a0": _set_payload(self.a0),
            "a1": _set_payload(self.a1),
            "a2": _set_payload(self.a2),
            "stats": self.stats.to_json_obj(),
            "verified": self.verified,
            "guarantee_met": self.guarantee_met,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Certificate":
        """Parse and reject anything internally inconsistent.

        Fields that are derivable from other stored fields (input digest
        and cardinality, the plan's threshold integers, per-set
        cardinalities) must match their derivations exactly, so edits to
        them cannot survive parsing and resurface as a "clean" object.
        """
        if obj.get("format") != CERT_FORMAT:
            raise ValueError(f"unsupported certificate format: {obj.get('format')!r}")
        n = int(obj["n"])
        c = Fraction(obj["c"])
        input_set = _set_from_payload(n, obj["input_set"])
        if input_set is None:
            raise ValueError("certificate is missing the input set")
        if int(obj["input_card"]) != input_set.card:
            raise ValueError("stored input cardinality does not match the set")
        if obj["input_sha256"] != set_sha256(input_set):
            raise ValueError("stored input digest does not match the set")
        plan_obj = dict(obj["plan"])
        plan = ConstructionPlan(
            n=n,
            card_a=input_set.card,
            c=c,
            sigma=Fraction(plan_obj["sigma"]),
            r=int(plan_obj["r"]),
            target_a1_size=int(plan_obj["target_a1_size"]),
            guarantee=int(plan_obj["guarantee"]),
            trivial=bool(plan_obj["trivial"]),
        )
        if plan.to_json_obj() != plan_obj:
            raise ValueError("stored plan thresholds do not match the plan parameters")
        stats_obj = obj["stats"]
        a0 = _set_from_payload(n, obj["a0"])
        a1 = _set_from_payload(n, obj["a1"])
        a2 = _set_from_payload(n, obj["a2"])
        if a2 is None:
            raise ValueError("certificate is missing the constructed set")
        if stats_obj["card_a0"] != (None if a0 is None else a0.card):
            raise ValueError("stored |A_0| does not match the stored set")
        if int(stats_obj["card_a2"]) != a2.card:
            raise ValueError("stored |A_2| does not match the stored set")
        return cls(
            input_set=input_set,
            c=c,
            seed=int(obj["seed"]),
            budgets=Budgets(
                lemma_trials=int(obj["budgets"]["lemma_trials"]),
                refine_trials=int(obj["budgets"]["refine_trials"]),
            ),
            plan=plan,
            translates=tuple(int(t) for t in obj["translates"]),
            a0=a0,
            a1=a1,
            a2=a2,
            stats=CertStats(
                lemma_trials=stats_obj["lemma_trials"],
                card_a0=stats_obj["card_a0"],
                s_count=stats_obj["s_count"],
                refine_trials=stats_obj["refine_trials"],
                a1_pairs_in_d=stats_obj["a1_pairs_in_d"],
                card_a2=int(stats_obj["card_a2"]),
            ),
            verified=bool(obj["verified"]),
            guarantee_met=bool(obj["guarantee_met"]),
        )

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json_obj(json.loads(text))

    def write(self, path) -> None:
        Path(path).write_bytes(self.dumps().encode("ascii"))

    @classmethod
    def read(cls, path) -> "Certificate":
        return cls.loads(Path(path).read_bytes().decode("ascii"))


def construct_popular_sumset(
    a: DenseSet,
    c: Fraction | int,
    seed: int,
    budgets: Budgets = Budgets(),
    exploratory: bool = False,
) -> Certificate:
    """Run the full pipeline and return a verified certificate.

    The guarantee-bearing regime is 0 < c <= 1/2; values up to (but not
    including) 1 are admitted with ``exploratory=True``.  On a trivial
    plan (alpha <= c, or no sigma reaches guarantee 1) the construction
    falls back to the singleton {0}, which is always valid since
    c * alpha < 1 for c < 1.
    """
    c = Fraction(c)
    if a.card == 0:
        raise DegenerateInput("input set is empty")
    if not 0 < c < 1:
        raise ValueError(f"construction requires 0 < c < 1, got {c}")
    if c > Fraction(1, 2) and not exploratory:
        raise ValueError(
            f"c = {c} exceeds 1/2; pass exploratory=True to run anyway"
        )

    d = popular_difference_set(a, c)
    plan = choose_sigma(a.n, a.card, c)
    rng = SplitMix64(seed)

    if plan.trivial:
        if not d.bits[0]:
            raise DegenerateInput("popular difference set is empty")
        a2 = make_set(a.n, [0])
        if not verify_containment(a2, d):
            raise SoundnessError("singleton fallback failed containment")
        return Certificate(
            input_set=a.copy(),
            c=c,
            seed=seed,
            budgets=budgets,
            plan=plan,
            translates=(),
            a0=None,
            a1=None,
            a2=a2,
            stats=CertStats(None, None, None, None, None, 1),
            verified=True,
            guarantee_met=True,
        )

    lemma = find_lemma_set(a, c, plan.sigma, rng, budgets.lemma_trials, d=d)
    refine = refine_a1(lemma.a0, plan, d, rng, budgets.refine_trials)
    a2 = filter_a2(refine.a1, plan, d)
    if not verify_containment(a2, d):
        raise SoundnessError("independent containment check failed")
    return Certificate(
        input_set=a.copy(),
        c=c,
        seed=seed,
        budgets=budgets,
        plan=plan,
        translates=lemma.translates,
        a0=lemma.a0,
        a1=refine.a1,
        a2=a2,
        stats=CertStats(
            lemma_trials=lemma.trials,
            card_a0=lemma.a0.card,
            s_count=lemma.s_count,
            refine_trials=refine.trials,
            a1_pairs_in_d=refine.pairs_in_d,
            card_a2=a2.card,
        ),
        verified=True,
        guarantee_met=a2.card >= plan.guarantee,
    )


def verify_certificate(cert: Certificate) -> None:
    """Independently re-verify a certificate; raises VerificationError.

    Stored booleans are given zero trust: the containment is re-derived
    by a naive sumset against a freshly computed D_c(A), the plan is
    re-derived from (n, |A|, c), the lemma-stage inequalities are
    re-checked from the stored sets, and finally the whole run is
    replayed from the stored seed and compared byte for byte.
    """
    a = cert.input_set

    d = popular_difference_set(a, cert.c)
    if not verify_containment(cert.a2, d):
        raise VerificationError(
            "containment", "A' + A' is not inside the popular difference set"
        )

    try:
        expected_plan = choose_sigma(a.n, a.card, cert.c)
    except ValueError as exc:
        raise VerificationError("plan", str(exc)) from None
    if expected_plan.to_json_obj() != cert.plan.to_json_obj():
        raise VerificationError("plan", "stored plan differs from the derived plan")

    if not cert.plan.trivial:
        if cert.a0 is None or cert.a1 is None:
            raise VerificationError("lemma-soundness", "intermediate sets missing")
        outcome = lemma_accept(
            cert.a0, a, cert.c, cert.plan.sigma, cert.plan.r, d=d
        )
        if not outcome.accepted:
            raise VerificationError(
                "lemma-soundness", "stored A_0 fails the acceptance inequality"
            )
        if outcome.s_count != cert.stats.s_count:
            raise VerificationError(
                "lemma-soundness", "stored unpopular-pair count is wrong"
            )
        if not cert.a1.subset_of(cert.a0) or not cert.a2.subset_of(cert.a1):
            raise VerificationError(
                "lemma-soundness", "stage sets are not nested"
            )

    try:
        replay = construct_popular_sumset(
            a, cert.c, cert.seed, cert.budgets, exploratory=True
        )
    except (RetryExhausted, DegenerateInput, ValueError) as exc:
        raise VerificationError("replay", f"replay did not complete: {exc}") from None
    if replay.dumps() != cert.dumps():
        raise VerificationError("replay", "replayed certificate differs")

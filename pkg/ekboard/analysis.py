# MIT License
#
# Copyright (c) 2024 MatrixEditor
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""
Probability analysis of the reordering attack on vocal fingerprints.

An attacker who recorded a victim reading fingerprints aloud may try to
splice those recordings into the fingerprint of a key the attacker controls.
That only works if every word of the attacker's fingerprint was spoken
before. The functions below evaluate the relevant probabilities for
configurable dictionary sizes:

* ``p1_*``: ``num_keys`` random fingerprints never repeat a word (the
  attacker "collects all" words of the dictionary),
* ``p2_*``/``p3_*``: a random fingerprint uses only words already observed
  in one (``p2``) or ``num_keys`` (``p3``) recorded fingerprints.

Literal products, the published closed forms and exact combinatorics are
kept as separate functions; :func:`discrepancy_report` puts them side by
side together with Monte Carlo estimates. Nothing here assumes the published
values are right.
"""
import enum
import math
import decimal
import itertools
import logging
import dataclasses as dc
import typing as t

from fractions import Fraction

import numpy as np

from ekboard.errors import InvalidParams, ParamsNotDivisible, TooLargeForExact

log = logging.getLogger(__name__)

#: largest dictionary for exact evaluation of the collect-all event
EXACT_LIMIT = 12

#: Monte Carlo needs at least this many trials
MIN_TRIALS = 1000

#: draws generated per Monte Carlo chunk
CHUNK_DRAWS = 4_000_000

#: decimal digits used for log-space products
LOG_PRECISION = 50


@dc.dataclass(frozen=True, slots=True)
class ReorderParams:
    """Dictionary and observation sizes, defaults are the PGP word list."""

    dict_size: int = 256
    """Words per parity list"""

    words_per_fp: int = 16
    """Words per parity in one fingerprint"""

    num_keys: int = 16
    """Fingerprints the attacker observes"""

    def __post_init__(self) -> None:
        if not self.dict_size >= self.words_per_fp >= 1:
            raise InvalidParams(
                f"need dict_size >= words_per_fp >= 1, got {self.dict_size}, {self.words_per_fp}"
            )
        if self.num_keys < 1:
            raise InvalidParams(f"num_keys must be positive, got {self.num_keys}")

    @property
    def observed_words(self) -> int:
        """Words per parity spoken across all observed fingerprints."""
        return self.num_keys * self.words_per_fp

    def check_collect_all(self) -> None:
        if self.observed_words > self.dict_size:
            raise InvalidParams(
                f"{self.num_keys} x {self.words_per_fp} words exceed the dictionary of {self.dict_size}"
            )


DEFAULT_PARAMS = ReorderParams(256, 16, 16)


class Event(enum.Enum):
    COLLECT_ALL = "collect-all"
    """No word repeats within or across the observed fingerprints."""

    REORDER_MATCH = "reorder-match"
    """A random fingerprint only uses already observed words."""


# --- collect all ---
def p1_log_product(params: ReorderParams) -> decimal.Decimal:
    """Natural logarithm of :func:`p1_product` at extended precision."""
    params.check_collect_all()
    d, w = params.dict_size, params.words_per_fp
    with decimal.localcontext() as ctx:
        ctx.prec = LOG_PRECISION
        log_d = decimal.Decimal(d).ln()
        total = decimal.Decimal(0)
        for i in range(params.num_keys):
            total += 2 * w * (decimal.Decimal(d - i * w).ln() - log_d)
        return +total


def p1_product(params: ReorderParams) -> float:
    """
    The literal product over observed fingerprints,
    ``prod_i ((d - i*w) / d) ** (2*w)``.

    :param params: the attack parameters
    :type params: ReorderParams
    :raises InvalidParams: if ``num_keys * words_per_fp > dict_size``
    :return: the probability
    :rtype: float
    """
    with decimal.localcontext() as ctx:
        ctx.prec = LOG_PRECISION
        return float(p1_log_product(params).exp())


def p1_closed_form(params: ReorderParams) -> float:
    """
    The published closed form ``(n - 1)! / n**n`` with ``n = d / w``.

    :raises ParamsNotDivisible: if ``dict_size`` is not a multiple of
                                ``words_per_fp``
    """
    n, rest = divmod(params.dict_size, params.words_per_fp)
    if rest:
        raise ParamsNotDivisible(
            f"dict_size {params.dict_size} is not a multiple of {params.words_per_fp}"
        )
    return float(Fraction(math.factorial(n - 1), n**n))


def p1_exact_fraction(params: ReorderParams) -> Fraction:
    """
    Exact probability that ``num_keys`` fingerprints of ``words_per_fp``
    uniform draws per parity contain no repeated word, both parities.

    :raises TooLargeForExact: if ``dict_size`` exceeds 12
    :raises InvalidParams: if the observed words exceed the dictionary
    """
    if params.dict_size > EXACT_LIMIT:
        raise TooLargeForExact(
            f"exact evaluation supports dict_size <= {EXACT_LIMIT}, got {params.dict_size}"
        )
    params.check_collect_all()

    d, n = params.dict_size, params.observed_words
    per_parity = Fraction(math.perm(d, n), d**n)
    return per_parity**2


def p1_exact_event(params: ReorderParams) -> float:
    return float(p1_exact_fraction(params))


def enumerate_collect_all(params: ReorderParams) -> Fraction:
    """
    Brute-force count of the collect-all event over all ordered draws of
    one parity, squared. Only usable for tiny dictionaries.
    """
    params.check_collect_all()
    d, n = params.dict_size, params.observed_words
    if d**n > 10**6:
        raise TooLargeForExact(f"{d}**{n} outcomes are too many to enumerate")

    hits = sum(
        len(set(draw)) == n for draw in itertools.product(range(d), repeat=n)
    )
    return Fraction(hits, d**n) ** 2


# --- reorder match ---
def p2_reorder_success(params: ReorderParams) -> float:
    """
    Probability that a random fingerprint only uses the ``words_per_fp``
    words per parity observed in one recorded fingerprint,
    ``(w / d) ** (2*w)``.

    :raises InvalidParams: unless ``num_keys == 1``
    """
    if params.num_keys != 1:
        raise InvalidParams(f"p2 assumes one observed fingerprint, got {params.num_keys}")
    return p3_subset_success(params)


def p3_subset_success(params: ReorderParams) -> float:
    """
    Generalization of :func:`p2_reorder_success` to ``num_keys`` recorded
    fingerprints with pairwise distinct words,
    ``(num_keys * w / d) ** (2*w)``.
    """
    params.check_collect_all()
    ratio = Fraction(params.observed_words, params.dict_size)
    return float(ratio ** (2 * params.words_per_fp))


def p2_paper_value() -> float:
    """The published result ``1 / 16**16``."""
    return float(Fraction(1, 16**16))


# --- Monte Carlo ---
@dc.dataclass(frozen=True, slots=True)
class MonteCarloResult:
    estimate: float
    std_error: float
    trials: int
    successes: int

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        """Whether ``expected`` lies within ``sigmas`` standard errors.

        The binomial error at ``expected`` is used so an estimate of exactly
        zero still gets a sensible bound.
        """
        sigma = math.sqrt(expected * (1 - expected) / self.trials)
        return abs(self.estimate - expected) <= sigmas * max(sigma, self.std_error)


def _draw_dtype(dict_size: int) -> type:
    return np.uint16 if dict_size <= 1 << 16 else np.int64


def _collect_all_hits(
    params: ReorderParams, trials: int, rng: np.random.Generator
) -> int:
    n = params.observed_words
    draws = rng.integers(
        0, params.dict_size, size=(trials, 2, n), dtype=_draw_dtype(params.dict_size)
    )
    draws.sort(axis=2)
    distinct = np.all(draws[:, :, 1:] != draws[:, :, :-1], axis=(1, 2))
    return int(np.count_nonzero(distinct))


def _reorder_match_hits(
    params: ReorderParams, trials: int, rng: np.random.Generator
) -> int:
    # relabel words so the observed ones are 0 .. observed_words - 1
    draws = rng.integers(
        0,
        params.dict_size,
        size=(trials, 2 * params.words_per_fp),
        dtype=_draw_dtype(params.dict_size),
    )
    return int(np.count_nonzero(np.all(draws < params.observed_words, axis=1)))


def monte_carlo(
    params: ReorderParams,
    event: Event,
    trials: int,
    rng: np.random.Generator,
) -> MonteCarloResult:
    """
    Estimates an event probability by direct sampling.

    Trials run in chunks; every chunk gets its own stream spawned from one
    seed drawn from ``rng``, so results only depend on ``rng``'s state and
    the chunk layout, never on scheduling.

    :param params: the attack parameters
    :type params: ReorderParams
    :param event: the event to simulate
    :type event: Event
    :param trials: number of trials, at least 1000
    :type trials: int
    :param rng: the random source
    :type rng: np.random.Generator
    :raises InvalidParams: for fewer than 1000 trials or infeasible params
    :return: estimate and binomial standard error
    :rtype: MonteCarloResult
    """
    if trials < MIN_TRIALS:
        raise InvalidParams(f"at least {MIN_TRIALS} trials are required, got {trials}")
    params.check_collect_all()

    match event:
        case Event.COLLECT_ALL:
            hits_of, per_trial = _collect_all_hits, 2 * params.observed_words
        case Event.REORDER_MATCH:
            hits_of, per_trial = _reorder_match_hits, 2 * params.words_per_fp
        case _:
            raise ValueError(f"unknown event {event!r}")

    chunk = max(1, CHUNK_DRAWS // per_trial)
    sizes = [min(chunk, trials - start) for start in range(0, trials, chunk)]
    streams = np.random.SeedSequence(int(rng.integers(0, 1 << 63))).spawn(len(sizes))

    successes = sum(
        hits_of(params, size, np.random.default_rng(stream))
        for size, stream in zip(sizes, streams)
    )
    estimate = successes / trials
    std_error = math.sqrt(estimate * (1 - estimate) / trials)
    log.debug(
        "monte carlo %s %s: %d/%d (chunks=%d)",
        event.value, params, successes, trials, len(sizes),
    )
    return MonteCarloResult(estimate, std_error, trials, successes)


# --- report ---
@dc.dataclass(frozen=True, slots=True)
class ReportEntry:
    name: str
    value: float
    reference: t.Optional[str] = None
    """Name of the entry this value is compared with"""

    relative_difference: t.Optional[float] = None
    std_error: t.Optional[float] = None
    within_3_sigma: t.Optional[bool] = None

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {k: v for k, v in dc.asdict(self).items() if v is not None}


@dc.dataclass(frozen=True, slots=True)
class DiscrepancyReport:
    params: ReorderParams
    trials: int
    seed: t.Optional[int]
    entries: t.Tuple[ReportEntry, ...]

    def get(self, name: str) -> t.Optional[ReportEntry]:
        return next((e for e in self.entries if e.name == name), None)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "params": dc.asdict(self.params),
            "trials": self.trials,
            "seed": self.seed,
            "entries": [entry.to_dict() for entry in self.entries],
        }


def relative_difference(value: float, reference: float) -> t.Optional[float]:
    if reference == 0:
        return None if value != 0 else 0.0
    return (value - reference) / reference


def discrepancy_report(
    params: ReorderParams, trials: int = 100_000, seed: t.Optional[int] = None
) -> DiscrepancyReport:
    """
    Tabulates every available evaluation of both attack probabilities.

    Values that are undefined for ``params`` (closed form for a
    non-divisible dictionary, exact event for large dictionaries) are left
    out. ``p2_reorder_success`` is evaluated for a single recorded
    fingerprint and ``p3_subset_success`` is added when ``num_keys > 1``. With ``trials == 0`` no Monte Carlo
    estimates are made.

    :param params: the attack parameters
    :type params: ReorderParams
    :param trials: Monte Carlo trials per event, 0 or at least 1000
    :type trials: int
    :param seed: seed of the Monte Carlo generator
    :type seed: t.Optional[int]
    :return: the report
    :rtype: DiscrepancyReport
    """
    params.check_collect_all()
    entries = []

    def add(name: str, value: float, reference: t.Optional[str] = None, **extra) -> None:
        diff = None
        if reference is not None:
            diff = relative_difference(value, next(e.value for e in entries if e.name == reference))
        entries.append(ReportEntry(name, value, reference, diff, **extra))

    add("p1_product", p1_product(params))
    try:
        add("p1_closed_form", p1_closed_form(params), "p1_product")
    except ParamsNotDivisible:
        pass

    p1_reference = "p1_product"
    try:
        add("p1_exact_event", p1_exact_event(params), "p1_product")
        p1_reference = "p1_exact_event"
    except TooLargeForExact:
        pass

    # p2 always uses one recorded fingerprint, p3 covers num_keys of them
    add("p2_reorder_success", p2_reorder_success(dc.replace(params, num_keys=1)))
    p2_name = "p2_reorder_success"
    if params.num_keys > 1:
        p2_name = "p3_subset_success"
        add(p2_name, p3_subset_success(params))
    add("p2_paper_value", p2_paper_value(), "p2_reorder_success")

    if trials:
        rng = np.random.default_rng(seed)
        for event, name, reference in (
            (Event.COLLECT_ALL, "mc_collect_all", p1_reference),
            (Event.REORDER_MATCH, "mc_reorder_match", p2_name),
        ):
            result = monte_carlo(params, event, trials, rng)
            expected = next(e.value for e in entries if e.name == reference)
            add(
                name,
                result.estimate,
                reference,
                std_error=result.std_error,
                within_3_sigma=result.within(expected),
            )

    return DiscrepancyReport(params, trials, seed, tuple(entries))

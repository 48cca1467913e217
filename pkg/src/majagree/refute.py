"""Concrete counterexamples for protocols on networks where agreement is impossible.

``refute_by_proof`` walks the impossibility argument on an actual protocol:

1. If the unanimous-1 input already fails, stop.
2. Take an input whose output has majority 1 with the fewest 1s possible
   (the *base* input).
3. Pick the *scarce* value: the smallest ``v >= 2`` output by fewer than
   ``n / (2(k-1))`` processors on the base input.
4. Flip components to the scarce value one at a time, each time choosing the
   first unflipped component whose flip lowers the count of the current
   majority value. After the first flip the majority moves to a *second*
   value; from then on every state is checked against three tally bounds.

Every visited input is checked directly, so the first genuine violation on
the walk is what gets reported. Component outputs are independent, so the
effect of flipping a component is the same whenever it happens; that lets the
walk test the argument's key step (no single flip lowers both the base and
second value counts) and, when it fails, report the single-flip input it
implicates. If the walk ends without a violation, the exhaustive scan takes
over and the trace is marked as a fallback.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import _scan
from .bounds import Comparison, theorem2_holds
from .core import (
    Assignment,
    ContractError,
    IntegrityError,
    Network,
    Tally,
    rank,
    unanimous,
    unrank,
)
from .protocols import ProtocolTable
from .verify import Requirement, Verdict, check_input, verify_exhaustive

BASE_VALUE = 1


@dataclass(frozen=True)
class Counterexample:
    input: Assignment
    output: Assignment
    tally: Tally
    requirement: Requirement
    found_at: str

    @classmethod
    def from_verdict(cls, v: Verdict, found_at: str) -> "Counterexample":
        return cls(v.input, v.output, v.tally, v.requirement, found_at)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": list(self.input),
            "output": list(self.output),
            "tally": {str(v): c for v, c in self.tally.items()},
            "requirement": self.requirement.value,
            "found_at": self.found_at,
        }


@dataclass(frozen=True)
class StepRecord:
    step: int
    component: int
    component_size: int
    running_max: int
    input: Assignment
    tally: Tally
    majority: Optional[int]
    checks: Tuple[Comparison, ...]

    @property
    def inequalities_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "record": "step",
            "step": self.step,
            "component": self.component,
            "component_size": self.component_size,
            "running_max": self.running_max,
            "input": list(self.input),
            "tally": {str(v): c for v, c in self.tally.items()},
            "majority": self.majority,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class RefutationTrace:
    network: Network
    counterexample: Counterexample
    base_input: Optional[Assignment] = None
    scarce_value: Optional[int] = None
    second_value: Optional[int] = None
    steps: Tuple[StepRecord, ...] = ()
    fallback_used: bool = False
    base_value: int = BASE_VALUE

    @property
    def outcome(self) -> str:
        return "FALLBACK_USED" if self.fallback_used else "COUNTEREXAMPLE"

    def to_records(self) -> List[Dict[str, Any]]:
        head = {
            "record": "start",
            "network": self.network.spec(),
            "k": self.network.k,
            "base_value": self.base_value,
            "base_input": list(self.base_input) if self.base_input else None,
            "scarce_value": self.scarce_value,
            "second_value": self.second_value,
        }
        tail = {"record": "outcome", "outcome": self.outcome, **self.counterexample.to_dict()}
        return [head] + [s.to_dict() for s in self.steps] + [tail]


def find_minimal_majority_input(
    network: Network,
    p: ProtocolTable,
    a: int,
    budget: int = _scan.DEFAULT_INPUT_BUDGET,
    workers: int = 1,
) -> Optional[Assignment]:
    """Input with majority output ``a`` and the fewest ``a`` outputs.

    Ties go to the lexicographically smallest input. None if no input
    yields majority ``a``.
    """
    _scan.check_budget(network, budget)
    found = [r for r in _scan.run_blocks(_scan.minimal_majority, network, p, workers, a) if r]
    if not found:
        return None
    return unrank(min(found)[1], network.n, network.k)


def step_checks(tally_: Tally, n: int, base: int, second: int, running_max: int) -> Tuple[Comparison, ...]:
    c1, c2 = tally_[base], tally_[second]
    others = [v for v in tally_ if v not in (base, second)]
    checks = [
        Comparison("2*max(c_base, c_second) > n", 2 * max(c1, c2), ">", n),
        Comparison("2*min(c_base, c_second) > n - 2*running_max", 2 * min(c1, c2), ">", n - 2 * running_max),
    ]
    # the third bound is a conjunction over u; record the tightest instance
    worst = max(others, key=lambda u: (tally_[u], -u), default=None)
    if worst is not None:
        checks.append(Comparison(f"c_{worst} < running_max (max over u)", tally_[worst], "<", running_max))
    return tuple(checks)


def _flip(network: Network, a: Sequence[int], c: int, value: int) -> Assignment:
    out = list(a)
    s = network.component_slice(c)
    out[s.start:s.stop] = [value] * len(s)
    return tuple(out)


def refute_by_proof(
    network: Network,
    p: ProtocolTable,
    budget: int = _scan.DEFAULT_INPUT_BUDGET,
    probe_lemma: bool = True,
    max_steps: Optional[int] = None,
) -> RefutationTrace:
    """Walk the impossibility argument on ``p`` until a violation surfaces.

    ``probe_lemma=False`` disables the single-flip lemma test; ``max_steps``
    truncates the walk. Either can leave the walk without a violation, in
    which case the exhaustive scan supplies one and the trace is marked
    ``FALLBACK_USED``.
    """
    if not theorem2_holds(network):
        raise ContractError(f"{network} does not satisfy the impossibility conditions")
    _scan.check_budget(network, budget)
    n, k = network.n, network.k

    first = check_input(network, p, unanimous(network, BASE_VALUE))
    if not first.passed:
        return RefutationTrace(network, Counterexample.from_verdict(first, "unanimous_base"))

    base = find_minimal_majority_input(network, p, BASE_VALUE, budget)
    if base is None:
        raise IntegrityError("unanimous base input has majority 1 but the scan found none")
    base_tally = check_input(network, p, base).tally

    scarce = next((v for v in range(2, k + 1) if 2 * (k - 1) * base_tally[v] < n), None)
    if scarce is None:
        raise IntegrityError(f"no scarce value in base tally {base_tally}")

    # tally change caused by flipping each component from its base input
    delta = []
    for c, size in enumerate(network.component_sizes):
        before = p.local_counts[c][rank(base[network.offsets[c]:][:size], k)]
        after = p.local_counts[c][rank((scarce,) * size, k)]
        delta.append({v: after[v - 1] - before[v - 1] for v in range(1, k + 1)})

    def trace(v: Verdict, where: str, fallback: bool = False) -> RefutationTrace:
        return RefutationTrace(network, Counterexample.from_verdict(v, where), base, scarce,
                               second, tuple(steps), fallback)

    current, flipped, steps = base, set(), []
    second: Optional[int] = None
    majority, running_max = BASE_VALUE, 0
    steps_allowed = network.l if max_steps is None else min(max_steps, network.l)
    for j in range(1, steps_allowed + 1):
        pick = next((c for c in range(network.l) if c not in flipped and delta[c][majority] < 0), None)
        if pick is None:
            # no remaining flip lowers the majority count, so it survives all of them
            res = check_input(network, p, unanimous(network, scarce))
            if not res.passed:
                return trace(res, "no_reducing_flip")
            break
        if probe_lemma and second is not None and delta[pick][BASE_VALUE] < 0 and delta[pick][second] < 0:
            res = check_input(network, p, _flip(network, base, pick, scarce))
            if not res.passed:
                return trace(res, "lemma_probe")

        current = _flip(network, current, pick, scarce)
        flipped.add(pick)
        running_max = max(running_max, network.component_sizes[pick])
        res = check_input(network, p, current)
        if j == 1 and res.passed:
            second = res.majority
            if second in (BASE_VALUE, scarce):
                raise IntegrityError(f"first flip left majority {second}; base input was not minimal")
        checks = step_checks(res.tally, n, BASE_VALUE, second, running_max) if second else ()
        steps.append(StepRecord(j, pick, network.component_sizes[pick], running_max,
                                current, res.tally, res.majority, checks))
        if not res.passed:
            return trace(res, "final_state" if j == network.l else "walk")
        majority = res.majority

    ce = refute_exhaustive(network, p, budget)
    return RefutationTrace(network, ce, base, scarce, second, tuple(steps), fallback_used=True)


def refute_exhaustive(
    network: Network,
    p: ProtocolTable,
    budget: int = _scan.DEFAULT_INPUT_BUDGET,
    workers: int = 1,
) -> Counterexample:
    """Lexicographically smallest violating input."""
    if not theorem2_holds(network):
        raise ContractError(f"{network} does not satisfy the impossibility conditions")
    v = verify_exhaustive(network, p, budget, workers)
    if v.passed:
        raise IntegrityError(f"protocol passes every input on {network}, where none should exist")
    return Counterexample.from_verdict(v, "exhaustive")

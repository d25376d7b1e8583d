"""Greedy vehicle-to-network association: MaxSNR and MinDis algorithms.

Each vehicle independently builds a hop chain toward the infrastructure.
A step first examines the best infrastructure candidate (highest received
SNR for MaxSNR, smallest 3D distance for MinDis) and terminates there if
the received power clears the V2I sensitivity; otherwise it examines the
best unvisited vehicle under the same rule and relays through it if the
V2V sensitivity is met, else the path fails. Chains are loop-free by
visited-node exclusion and bounded by max_hops. Exact candidate ties
resolve to the lowest node index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from v2nsim.channel import LinkBudget, LinkTable
from v2nsim.config import ALGO_MAXSNR, ALGO_MINDIS, MODE_BS
from v2nsim.errors import ConfigError
from v2nsim.topology import Scenario

STATUS_DIRECT = "DirectReliable"
STATUS_MULTI_HOP = "MultiHopReliable"
STATUS_UNRELIABLE = "Unreliable"

DECISION_TERMINATE = "terminate"
DECISION_RELAY = "relay"
DECISION_FAIL = "fail"


@dataclass(frozen=True)
class StepDecision:
    """Outcome of one association step from the current vehicle."""

    kind: str  # terminate | relay | fail
    candidate: int | None  # infra index (terminate) or vehicle index (relay)
    budget: LinkBudget | None  # the link taken, when kind != fail
    checks: list[LinkBudget]  # every candidate link examined this step


@dataclass(frozen=True)
class AssociationPath:
    """The hop chain from one source vehicle to its terminal, or a failure."""

    source: str
    hops: list[LinkBudget]
    checks: list[LinkBudget]  # all links examined while building the path
    terminal: str | None
    status: str

    @property
    def n_hops(self) -> int:
        return len(self.hops)

    @property
    def reliable(self) -> bool:
        return self.status != STATUS_UNRELIABLE


def _pick_infra(current: int, links: LinkTable, algorithm: str) -> int | None:
    if links.n_infra == 0:
        return None
    if algorithm == ALGO_MAXSNR:
        return int(np.argmax(links.pr_vi[current]))
    return int(np.argmin(links.d3_vi[current]))


def _pick_vehicle(current: int, visited: np.ndarray, links: LinkTable, algorithm: str) -> int | None:
    if bool(visited.all()):
        return None
    if algorithm == ALGO_MAXSNR:
        scores = np.where(visited, -np.inf, links.pr_vv[current])
        return int(np.argmax(scores))
    scores = np.where(visited, np.inf, links.d3_vv[current])
    return int(np.argmin(scores))


def _step(current: int, visited: np.ndarray, links: LinkTable, algorithm: str) -> StepDecision:
    checks: list[LinkBudget] = []
    j = _pick_infra(current, links, algorithm)
    if j is not None:
        budget = links.budget_vi(current, j)
        checks.append(budget)
        if budget.reliable:
            return StepDecision(DECISION_TERMINATE, j, budget, checks)
    k = _pick_vehicle(current, visited, links, algorithm)
    if k is None:
        return StepDecision(DECISION_FAIL, None, None, checks)
    budget = links.budget_vv(current, k)
    checks.append(budget)
    if budget.reliable:
        return StepDecision(DECISION_RELAY, k, budget, checks)
    return StepDecision(DECISION_FAIL, None, None, checks)


def step_maxsnr(current: int, visited: np.ndarray, scenario: Scenario, links: LinkTable) -> StepDecision:
    """One MaxSNR step: best-SNR SM/BS, else best-SNR unvisited vehicle."""
    del scenario  # geometry lives in the link table
    return _step(current, visited, links, ALGO_MAXSNR)


def step_mindis(current: int, visited: np.ndarray, scenario: Scenario, links: LinkTable) -> StepDecision:
    """One MinDis step: nearest SM/BS by 3D distance, else nearest vehicle.

    Selection ignores transmit power and fading; the reliability check uses
    the received power of the selected link including its fading draw.
    """
    del scenario
    return _step(current, visited, links, ALGO_MINDIS)


def run_path(source: int, algorithm: str, scenario: Scenario, links: LinkTable) -> AssociationPath:
    """Iterate association steps from one vehicle until terminal/fail/hop cap."""
    max_hops = scenario.config.max_hops
    visited = np.zeros(links.n_vehicles, dtype=bool)
    visited[source] = True
    current = source
    hops: list[LinkBudget] = []
    checks: list[LinkBudget] = []

    while len(hops) < max_hops:
        decision = _step(current, visited, links, algorithm)
        checks.extend(decision.checks)
        if decision.kind == DECISION_TERMINATE:
            hops.append(decision.budget)
            status = STATUS_DIRECT if len(hops) == 1 else STATUS_MULTI_HOP
            return AssociationPath(
                source=scenario.vehicles[source].id,
                hops=hops,
                checks=checks,
                terminal=decision.budget.rx_id,
                status=status,
            )
        if decision.kind == DECISION_RELAY:
            hops.append(decision.budget)
            visited[decision.candidate] = True
            current = decision.candidate
        else:
            break

    return AssociationPath(
        source=scenario.vehicles[source].id,
        hops=hops,
        checks=checks,
        terminal=None,
        status=STATUS_UNRELIABLE,
    )


def associate_with_links(scenario: Scenario, algorithm: str, links: LinkTable) -> list[AssociationPath]:
    """One path per vehicle, in vehicle index order, over a shared link table."""
    if algorithm not in (ALGO_MAXSNR, ALGO_MINDIS):
        raise ConfigError(f"unknown algorithm: {algorithm!r}")
    return [run_path(i, algorithm, scenario, links) for i in range(links.n_vehicles)]


def associate_all(scenario: Scenario, algorithm: str, rng: np.random.Generator) -> list[AssociationPath]:
    """Draw the trial's fading and associate every vehicle independently."""
    return associate_with_links(scenario, algorithm, LinkTable(scenario, rng))


def baseline_bs_associate(
    scenario: Scenario, rng: np.random.Generator, algorithm: str = ALGO_MAXSNR
) -> list[AssociationPath]:
    """Associate against the two-BS baseline; relaying rules are unchanged."""
    if scenario.config.baseline_mode != MODE_BS:
        raise ConfigError("baseline_bs_associate requires baseline_mode='BS'")
    return associate_all(scenario, algorithm, rng)

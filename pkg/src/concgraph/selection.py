"""Whole-graph selection: run a per-edge test over all pairs and keep the
edges whose null is rejected."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InsufficientSample, NotPositiveDefinite
from .estimators import Dataset, sample_covariance
from .independence import EdgeDecision, TestConfig, run_edge_test
from .matrices import SymmetricMatrix, first_nonpositive_pivot

__all__ = [
    "CORRECTIONS",
    "ConcentrationGraph",
    "all_pairs",
    "select_graph",
    "edge_pvalues",
]

CORRECTIONS = ("none", "bonferroni", "holm")


@dataclass(frozen=True)
class ConcentrationGraph:
    """Estimated concentration graph: an edge is present exactly when the
    corresponding per-edge decision rejected conditional independence."""

    names: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    decisions: tuple[EdgeDecision, ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges in lexicographic order."""
        return sorted(self.edges)


def all_pairs(dim: int) -> list[tuple[int, int]]:
    """All unordered variable pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def _validated_covariance(data: Dataset) -> SymmetricMatrix:
    if data.n <= data.dim:
        raise InsufficientSample(
            f"insufficient sample: need n > N, got n = {data.n}, N = {data.dim}"
        )
    s = sample_covariance(data)
    pivot = first_nonpositive_pivot(s)
    if pivot is not None:
        raise NotPositiveDefinite(
            "sample covariance is not positive definite "
            f"(pivot {pivot}, variable {data.names[pivot]!r}, fails)"
        )
    return s


def _holm_levels(pvalues: list[float], alpha: float) -> list[float]:
    """Per-edge effective levels realizing the Holm step-down procedure.

    Edges rejected by Holm get the level they were compared against; once
    the step-down stops, every remaining edge keeps the stopping level, so
    re-testing each edge at its own level reproduces the Holm decisions.
    """
    count = len(pvalues)
    order = sorted(range(count), key=lambda k: (pvalues[k], k))
    levels = [0.0] * count
    stopped_at: float | None = None
    for rank, k in enumerate(order):
        level = alpha / (count - rank)
        if stopped_at is None and pvalues[k] > level:
            stopped_at = level
        levels[k] = level if stopped_at is None else stopped_at
    return levels


def select_graph(
    data: Dataset, config: TestConfig, correction: str = "none"
) -> ConcentrationGraph:
    """Test every pair at the (possibly corrected) level and assemble the
    estimated concentration graph.

    With correction "none" each edge is tested at exactly config.alpha;
    "bonferroni" divides alpha by the number of pairs; "holm" applies the
    step-down procedure.  The corrections are standard plumbing for
    multiple testing, outside the per-edge optimality statement.
    """
    if correction not in CORRECTIONS:
        raise DomainError(
            f"unknown correction {correction!r}; expected one of {CORRECTIONS}"
        )
    s = _validated_covariance(data)
    pairs = all_pairs(data.dim)
    count = len(pairs)
    if correction == "none" or count <= 1:
        levels = [config.alpha] * count
    elif correction == "bonferroni":
        levels = [config.alpha / count] * count
    else:
        pvalues = [
            run_edge_test(config.method, s, i, j, data.n, config.alpha).p_value
            for i, j in pairs
        ]
        levels = _holm_levels(pvalues, config.alpha)
    decisions = tuple(
        run_edge_test(config.method, s, i, j, data.n, level)
        for (i, j), level in zip(pairs, levels)
    )
    edges = frozenset((d.i, d.j) for d in decisions if d.reject)
    return ConcentrationGraph(names=data.names, edges=edges, decisions=decisions)


def edge_pvalues(
    data: Dataset, method: str = "partial_corr"
) -> list[tuple[tuple[int, int], float]]:
    """p-value of every pair under the method's null law, sorted by edge
    index.  Deterministic; the significance level plays no role here."""
    s = _validated_covariance(data)
    # Any valid level works: p-values do not depend on it.
    probe_alpha = 0.5
    return [
        ((i, j), run_edge_test(method, s, i, j, data.n, probe_alpha).p_value)
        for i, j in all_pairs(data.dim)
    ]

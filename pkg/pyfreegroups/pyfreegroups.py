"""Main module."""
import asyncio
from concurrent.futures import Executor
from functools import partial
import logging
from typing import Any, Callable, Iterable, List, Optional, TypeVar, Union

from .binorm import NormBounds, norm_bounds
from .const import (
    DEFAULT_BALL_RADIUS,
    DEFAULT_HOMOGENIZE_STEPS,
    DEFAULT_NORM_BUDGET,
    DEFAULT_SEARCH_LENGTH,
    Budgets,
)
from .exceptions import PreconditionException
from .experiments import ExperimentParams, ExperimentReport, run_experiment
from .helpers import async_to_sync
from .homomorphism import (
    DistortionRow,
    DistortionWitness,
    Homomorphism,
    QsurFailureWitness,
    QsurRow,
    Verdict,
    classify,
    distortion_growth_row,
    qsur_growth_row,
)
from .killer import exits_at
from .quasimorphism import CountingQm
from .stallings import StallingsGraph
from .words import Word

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")

GrowthRow = Union[DistortionRow, QsurRow]


class FreeGroupAnalyzer:
    """Async class running the free group computations in an executor."""

    def __init__(
        self,
        norm_budget: int = DEFAULT_NORM_BUDGET,
        search_length: int = DEFAULT_SEARCH_LENGTH,
        ball_radius: int = DEFAULT_BALL_RADIUS,
        homogenize_steps: int = DEFAULT_HOMOGENIZE_STEPS,
        executor: Optional[Executor] = None,
    ) -> None:
        """Initialize analyzer; budgets are validated."""
        self.budgets = Budgets(norm_budget, search_length, ball_radius, homogenize_steps)
        self._executor = executor
        self._num_tasks: int = 0

    @property
    def num_tasks(self) -> int:
        """The number of work units dispatched during the most recent call."""
        return self._num_tasks

    async def _run(self, func: Callable[..., T], *args: Any) -> T:
        """Run a pure function in the executor."""
        self._num_tasks += 1
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self._executor, partial(func, *args))

    async def norm_bounds(
        self, g: Word, witnesses: Optional[Iterable[CountingQm]] = None
    ) -> NormBounds:
        """Return certified norm bounds for `g`."""
        self._num_tasks = 0
        if witnesses is not None:
            witnesses = list(witnesses)
        return await self._run(norm_bounds, g, self.budgets.norm_budget, witnesses)

    async def classify(self, hom: Homomorphism) -> Verdict:
        """Classify `hom` with its witness."""
        self._num_tasks = 0
        return await self._run(classify, hom, self.budgets)

    async def growth_table(self, verdict: Verdict, kmax: int) -> List[GrowthRow]:
        """
        Return the growth table of a verdict's witness for k = 0..kmax.

        Rows are computed concurrently and returned in order of k.
        """
        self._num_tasks = 0
        if kmax < 0:
            raise ValueError("`kmax` must be non-negative")
        witness = verdict.witness
        if isinstance(witness, DistortionWitness):
            rows = [
                self._run(
                    distortion_growth_row,
                    witness,
                    verdict.homomorphism,
                    k,
                    self.budgets.norm_budget,
                )
                for k in range(kmax + 1)
            ]
        elif isinstance(witness, QsurFailureWitness):
            rows = [self._run(qsur_growth_row, witness, k) for k in range(kmax + 1)]
        else:
            raise PreconditionException(
                f"A `{verdict.kind.value}` verdict has no growth table"
            )
        _LOGGER.debug("Computing %s growth rows for %s", kmax + 1, verdict.kind.value)
        return list(await asyncio.gather(*rows))

    async def verify_killer(self, graph: StallingsGraph, w: Word) -> bool:
        """Check every vertex of `graph` concurrently."""
        self._num_tasks = 0
        exits = await asyncio.gather(
            *[self._run(exits_at, graph, vertex, w) for vertex in graph.vertices]
        )
        return all(exits)

    async def run_experiment(
        self, experiment: str, params: Optional[ExperimentParams] = None
    ) -> ExperimentReport:
        """Run an experiment."""
        self._num_tasks = 0
        if params is None:
            params = ExperimentParams(
                budget=self.budgets.norm_budget, ball_radius=self.budgets.ball_radius
            )
        return await self._run(run_experiment, experiment, params)


class FreeGroupAnalyzerSync(FreeGroupAnalyzer):
    """Synchronous class running the free group computations."""

    def __init__(
        self,
        norm_budget: int = DEFAULT_NORM_BUDGET,
        search_length: int = DEFAULT_SEARCH_LENGTH,
        ball_radius: int = DEFAULT_BALL_RADIUS,
        homogenize_steps: int = DEFAULT_HOMOGENIZE_STEPS,
    ) -> None:
        """Initialize synchronous analyzer."""
        super().__init__(norm_budget, search_length, ball_radius, homogenize_steps)

    @async_to_sync
    async def norm_bounds(
        self, g: Word, witnesses: Optional[Iterable[CountingQm]] = None
    ) -> NormBounds:
        """Return certified norm bounds for `g`."""
        return await super().norm_bounds(g, witnesses)

    @async_to_sync
    async def classify(self, hom: Homomorphism) -> Verdict:
        """Classify `hom` with its witness."""
        return await super().classify(hom)

    @async_to_sync
    async def growth_table(self, verdict: Verdict, kmax: int) -> List[GrowthRow]:
        """Return the growth table of a verdict's witness for k = 0..kmax."""
        return await super().growth_table(verdict, kmax)

    @async_to_sync
    async def verify_killer(self, graph: StallingsGraph, w: Word) -> bool:
        """Check every vertex of `graph`."""
        return await super().verify_killer(graph, w)

    @async_to_sync
    async def run_experiment(
        self, experiment: str, params: Optional[ExperimentParams] = None
    ) -> ExperimentReport:
        """Run an experiment."""
        return await super().run_experiment(experiment, params)

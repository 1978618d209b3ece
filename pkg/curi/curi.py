"""A module to generate the CURI benchmark and measure its compositionality gap."""

from __future__ import annotations

from logging import Logger, getLogger

from curi.episode import EpisodeSampler
from curi.executor import ConceptExecutor
from curi.filter import ConceptFilter
from curi.grammar import ConceptGrammar
from curi.metrics import Metrics
from curi.objects.config import RunConfig
from curi.oracle import BayesOracle
from curi.scene import SceneSampler
from curi.split import SplitBuilder
from curi.utils import thread_count

logger = getLogger("curi")


class Curi:
    """A class to generate the CURI benchmark."""

    logger: Logger
    config: RunConfig
    threads: int

    grammar: ConceptGrammar
    scenes: SceneSampler
    executor: ConceptExecutor
    filter: ConceptFilter
    splits: SplitBuilder
    episodes: EpisodeSampler
    oracle: BayesOracle
    metrics: Metrics

    def __init__(self, config: RunConfig | None = None) -> None:
        """Initialize the class."""
        self.logger = logger
        self.config = config or RunConfig()
        self.threads = thread_count(self.config.threads)
        self.grammar = ConceptGrammar(self)
        self.scenes = SceneSampler(self)
        self.executor = ConceptExecutor(self)
        self.filter = ConceptFilter(self)
        self.splits = SplitBuilder(self)
        self.episodes = EpisodeSampler(self)
        self.oracle = BayesOracle(self)
        self.metrics = Metrics(self)

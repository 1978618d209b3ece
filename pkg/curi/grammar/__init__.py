"""This module provides a class that samples concepts from the concept grammar."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.base.component import BaseComponent
from curi.exceptions import GrammarConfigError
from curi.grammar.postfix import (
    TokenString,
    concept_length,
    derivation_depth,
    parse_postfix,
    pretty_print,
    serialize_postfix,
)
from curi.objects.concept import Concept, ConceptRecord
from curi.objects.grammar import PRODUCTIONS, START, GrammarConfig, Production, is_nonterminal, production_height
from curi.utils import parallel_map, substream

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.curi import Curi

CONCEPT_TAG = "concept"

__all__ = (
    "ConceptGrammar",
    "DerivationSampler",
    "concept_length",
    "derivation_depth",
    "parse_postfix",
    "pretty_print",
    "serialize_postfix",
)


class DerivationSampler:
    """A class that draws derivations from the weighted grammar under a depth bound.

    At every node only the alternatives whose shallowest completion still fits under the bound are
    eligible; their weights are renormalized. This keeps every sample within the bound without
    rejection, at the price of a slight tilt of the deepest alternatives.
    """

    config: GrammarConfig

    def __init__(self, config: GrammarConfig) -> None:
        """Initialize the sampler and precompute the eligible alternatives per (symbol, depth)."""
        self.config = config
        table = config.table()
        self._choices: dict[tuple[str, int], tuple[tuple[Production, ...], np.ndarray]] = {}
        for symbol, alternatives in PRODUCTIONS.items():
            for depth in range(config.max_depth + 1):
                eligible = [
                    (production, weight)
                    for production, weight in zip(alternatives, table[symbol])
                    if depth + production_height(production) <= config.max_depth
                ]
                if not eligible:
                    continue
                weights = np.array([weight for _, weight in eligible])
                cumulative = np.cumsum(weights / weights.sum())
                cumulative[-1] = 1.0
                self._choices[(symbol, depth)] = (tuple(production for production, _ in eligible), cumulative)

    def sample_tokens(self, rng: np.random.Generator) -> TokenString:
        """Draw one derivation and return its terminals, which are already in postfix order."""
        tokens: TokenString = []
        self._expand(START, 0, rng, tokens)
        return tokens

    def _expand(self, symbol: str, depth: int, rng: np.random.Generator, out: TokenString) -> None:
        choice = self._choices.get((symbol, depth))
        if choice is None:
            msg = f"No alternative of {symbol} completes within depth {self.config.max_depth} (at depth {depth})."
            raise GrammarConfigError(message=msg)
        alternatives, cumulative = choice
        production = alternatives[int(np.searchsorted(cumulative, rng.random(), side="right"))]
        for child in production.rhs:
            if is_nonterminal(child):
                self._expand(child, depth + 1, rng, out)
            else:
                out.append(child)


class ConceptGrammar(BaseComponent):
    """A class that samples, serializes and parses concepts."""

    _samplers: dict[str, DerivationSampler]

    def __init__(self, curi: Curi) -> None:
        """Initialize the component."""
        super().__init__(curi)
        self._samplers = {}

    def sampler(self, config: GrammarConfig | None = None) -> DerivationSampler:
        """Return a (cached) derivation sampler for a grammar configuration."""
        config = config or self.curi.config.grammar()
        key = config.model_dump_json()
        if key not in self._samplers:
            self._samplers[key] = DerivationSampler(config)
        return self._samplers[key]

    def sample_concept(self, config: GrammarConfig | None, rng: np.random.Generator) -> Concept:
        """Sample one concept.

        Args:
            config (GrammarConfig | None): The grammar configuration. Defaults to the run's one.
            rng (np.random.Generator): The random stream; the result is a function of its state.

        Returns:
            Concept: A well-typed concept whose derivation depth is within the configured bound.
        """
        return parse_postfix(self.sampler(config).sample_tokens(rng))

    def sample_concepts(self, n: int, seed: int, config: GrammarConfig | None = None) -> list[Concept]:
        """Sample n concepts; concept i is drawn from `substream(seed, "concept", i)`."""
        sampler = self.sampler(config)
        concepts = parallel_map(
            lambda i: parse_postfix(sampler.sample_tokens(substream(seed, CONCEPT_TAG, i))),
            range(n),
            self.threads,
        )
        self.log("info", f"Sampled {n} concepts from seed {seed}.")
        return concepts

    def serialize_postfix(self, concept: Concept) -> TokenString:
        """Serialize a concept to postfix tokens."""
        return serialize_postfix(concept)

    def parse_postfix(self, tokens: Sequence[str] | str) -> Concept:
        """Parse postfix tokens into a concept."""
        return parse_postfix(tokens)

    def concept_length(self, concept: Concept) -> int:
        """Return the number of postfix tokens of a concept."""
        return concept_length(concept)

    def pretty_print(self, concept: Concept) -> str:
        """Render a concept for display."""
        return pretty_print(concept)

    def record(self, concept_id: int, concept: Concept) -> ConceptRecord:
        """Return the JSONL record of a concept."""
        tokens = serialize_postfix(concept)
        return ConceptRecord(id=concept_id, postfix=tokens, length=len(tokens))

"""Classical, quantum and non-signaling analysis of the five-player cycle-graph game."""

from .game import Game, Question, build_c5, build_c5_prime, predicate_holds

__all__ = ["Game", "Question", "build_c5", "build_c5_prime", "predicate_holds"]
__version__ = "0.1.0"

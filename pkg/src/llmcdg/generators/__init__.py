from .base import Generator, GeneratorContext
from .llm_gen import LlmGenerator
from .oracle import OracleGenerator, enumerate_inputs, shortest_covering_path
from .prng import XorShift64Star
from .random_gen import RandomGenerator

GENERATORS = ("random", "llm", "oracle")

__all__ = [
    "GENERATORS",
    "Generator",
    "GeneratorContext",
    "LlmGenerator",
    "OracleGenerator",
    "RandomGenerator",
    "XorShift64Star",
    "enumerate_inputs",
    "shortest_covering_path",
]

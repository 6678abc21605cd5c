"""ugalab: a laboratory for genetic algorithms with uniform crossover.

Building blocks: seeded splittable random streams, bit-matrix populations,
staircase fitness functions with exact analytic signal oracles, schema
effect analytics, an explicit decimation reference loop, the full engine
(sigma scaling, stochastic universal sampling, uniform crossover, mutation
masks, clamping), MAX-3SAT and Sherrington-Kirkpatrick backends, refractal
grid rendering, and a multi-trial experiment harness with CSV output.
"""

from .core import Population, init_population, one_frequency
from .rng import RandomStream
from .schema import SchemaModel, SchemaPartitionModel, concat, conditional_effect, effect, signal
from .staircase import (
    StaircaseDescriptor,
    StaircaseFunction,
    analytic_signals,
    basic_form,
    brute_force_schema_mean,
    evaluate,
    make_basic,
    random_embedding,
    stage_membership,
)
from .uga import ClampingConfig, UgaConfig, run_uga

__all__ = [
    "Population",
    "RandomStream",
    "SchemaModel",
    "SchemaPartitionModel",
    "StaircaseDescriptor",
    "StaircaseFunction",
    "ClampingConfig",
    "UgaConfig",
    "init_population",
    "one_frequency",
    "concat",
    "effect",
    "conditional_effect",
    "signal",
    "make_basic",
    "basic_form",
    "random_embedding",
    "evaluate",
    "stage_membership",
    "analytic_signals",
    "brute_force_schema_mean",
    "run_uga",
]

__version__ = "0.1.0"

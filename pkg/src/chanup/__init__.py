"""Upgraded output-alphabet reduction for discrete memoryless channels."""

from .algebra import (
    FastPath,
    MergeWitness,
    SplitResult,
    epsilon_perturb,
    explode,
    is_proportional,
    merge_proportional,
    odd_fast_path,
    proportional_split,
)
from .channel import (
    Channel,
    LRVector,
    SymbolClass,
    SymbolColumn,
    classify_symbol,
    column,
    lr_norm,
    lr_vector,
    ml_error_probability,
    symmetric_capacity,
    validate_channel,
)
from .io import GenSpec, gen_random_channel, parse_channel_text, write_channel_text
from .reducer import (
    IntermediateChannel,
    ReductionConfig,
    UpgradeReport,
    order_stratum,
    partition_strata,
    reduce_stratum,
    upgrade_reduce,
)
from .verify import check_upgrade_witness, compose, feasibility_oracle, metrics_delta

__version__ = "0.1.0"

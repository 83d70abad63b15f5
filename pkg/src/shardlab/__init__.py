"""shardlab: adversarial shard-allocation games plus a coded sharded-ledger simulator."""
from .allocation import (
    deficit,
    distance_to_target,
    instantaneous_fraction,
    project_to_box,
    update_running_average,
    worst_shard_fraction,
)
from .adversaries import (
    AdversaryParams,
    AdversaryState,
    cascade_step,
    concentrate,
    escalation_period_bound,
    escalation_step,
    myopic_optimal,
    replicate,
)
from .game import BatchResult, GameConfig, GameTrace, run, run_batch, sweep_random_adversaries
from .policies import (
    PolicyParams,
    deficit_focused,
    deficit_proportional,
    provable_target,
    simple_dynamic,
    static_uniform,
)

__version__ = "0.1.0"

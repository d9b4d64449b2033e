from __future__ import annotations

from .formatters import (
    elapsed_output_formatter,
    float_output_formatter,
    percent_output_formatter,
)
from .types import (
    FieldSet,
    FieldSpec,
)


summary_fields = FieldSet([
    FieldSpec('predictor'),
    FieldSpec('users'),
    FieldSpec('p_loss_p50', formatter=float_output_formatter),
    FieldSpec('p_loss_p90', formatter=float_output_formatter),
    FieldSpec('r_eff_ge_target', formatter=percent_output_formatter),
])


run_fields = FieldSet([
    FieldSpec('users'),
    FieldSpec('predictors'),
    FieldSpec('source'),
    FieldSpec('output_dir', "Output Directory"),
    FieldSpec('elapsed', formatter=elapsed_output_formatter),
])


simulate_fields = FieldSet([
    FieldSpec('users'),
    FieldSpec('seq_len', "Length"),
    FieldSpec('loading'),
    FieldSpec('large_jump_fraction', "Users with >=200 jumps >3", formatter=percent_output_formatter),
    FieldSpec('path'),
])


state_fields = FieldSet([
    FieldSpec('user_id'),
    FieldSpec('position'),
    FieldSpec('n'),
    FieldSpec('k_opt', "k_opt"),
    FieldSpec('selected_order', "Selected Order"),
    FieldSpec('scheduled_order', "Order In Use"),
])


tree_node_fields = FieldSet([
    FieldSpec('depth'),
    FieldSpec('symbol'),
    FieldSpec('count'),
])


ipred_fields = FieldSet([
    FieldSpec('k'),
    FieldSpec('ipred', formatter=float_output_formatter),
    FieldSpec('gain', formatter=float_output_formatter),
])


criterion_fields = FieldSet([
    FieldSpec('i'),
    FieldSpec('n_params'),
    FieldSpec('n_samples', "N"),
    FieldSpec('loglik', "Log-likelihood", formatter=float_output_formatter),
    FieldSpec('mdl', formatter=float_output_formatter),
    FieldSpec('aic', formatter=float_output_formatter),
    FieldSpec('aicc', formatter=float_output_formatter),
])

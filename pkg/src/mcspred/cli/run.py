import attr
import click

from ..config import resolve_config, set_config
from ..harness import run as run_batch
from ..order_select import Criterion, ParamCount, SampleMode
from ..output.fields import run_fields, summary_fields
from ..output.types import Section
from ..simgen import Loading
from .main import main
from .params import EnumChoice, PredictorListParamType
from .pretty import exit_on_error, print_wait
from .types import CLIContext, OutputMode


@main.command()
@click.pass_obj
@click.option('--scenario', 'loading', type=EnumChoice(Loading), default=None,
              help='Generate traces for this loading (default: partial).')
@click.option('--trace', type=click.Path(dir_okay=False), default=None,
              help='Replay this trace CSV instead of generating a scenario.')
@click.option('--predictors', type=PredictorListParamType(), default=None,
              help='Comma-separated predictors, or "all" (the default).')
@click.option('-m', '--depth', type=int, default=None, help='PPM tree depth (default: 5).')
@click.option('-K', '--max-order', type=int, default=None,
              help='The largest candidate order (default: 4).')
@click.option('--fm-order', type=int, default=None,
              help='The order of the fixed Markov predictors (default: 3).')
@click.option('--epsilon', type=float, default=None,
              help='Learning-curve threshold in bits (default: 0.05).')
@click.option('--criterion', type=EnumChoice(Criterion), default=None,
              help='Order selection criterion (default: aicc).')
@click.option('--recompute-period', type=int, default=None,
              help='Symbols between order recomputations (default: 100).')
@click.option('--bootstrap', 'bootstrap_len', type=int, default=None,
              help='Symbols before the first order selection (default: 100).')
@click.option('--median-window', type=int, default=None,
              help='Window of the median baseline (default: 9).')
@click.option('--sample-mode', type=EnumChoice(SampleMode), default=None,
              help='Positions entering the likelihood (default: transitions).')
@click.option('--param-count', type=EnumChoice(ParamCount), default=None,
              help='Parameter count charged per candidate order (default: tree-depth).')
@click.option('--rate-table', type=click.Path(dir_okay=False), default=None,
              help='A rate-table override CSV (mcs,rate).')
@click.option('-p', '--alphabet-size', type=int, default=None,
              help='The number of MCS levels (default: 28).')
@click.option('--users', type=int, default=None, help='Scenario users (default: 210).')
@click.option('--seq-len', type=int, default=None,
              help='Scenario feedback instants per user (default: 1000).')
@click.option('--seed', type=int, default=None, help='The master random seed.')
@click.option('-d', '--output-dir', type=click.Path(file_okay=False), default=None,
              help='Where the reports go (default: $MCSPRED_OUTPUT_DIR or ./mcspred-out).')
@click.option('-j', '--workers', type=int, default=None,
              help='Worker processes (default: $MCSPRED_WORKERS or the CPU count).')
@click.option('--log-predictions/--no-log-predictions', default=None,
              help='Write predictions.csv (default: $MCSPRED_LOG_PREDICTIONS or on).')
@click.option('--no-progress', is_flag=True, help='Hide the progress bar.')
def run(cli_ctx: CLIContext, loading, trace, predictors, depth, max_order, fm_order,
        epsilon, criterion, recompute_period, bootstrap_len, median_window, sample_mode,
        param_count, rate_table, alphabet_size, users, seq_len, seed, output_dir,
        workers, log_predictions, no_progress):
    '''
    Replays every user through the selected predictors and writes the
    prediction log, per-user metrics, CDFs, criterion reports and a summary.
    '''
    if trace is not None and loading is not None:
        raise click.UsageError('--trace and --scenario are mutually exclusive.')
    try:
        cfg = resolve_config(
            {
                'trace': trace,
                'predictors': predictors,
                'depth': depth,
                'max_order': max_order,
                'fm_order': fm_order,
                'epsilon': epsilon,
                'criterion': criterion,
                'recompute_period': recompute_period,
                'bootstrap_len': bootstrap_len,
                'median_window': median_window,
                'sample_mode': sample_mode,
                'param_count': param_count,
                'rate_table': rate_table,
                'alphabet_size': alphabet_size,
                'seed': seed,
                'output_dir': output_dir,
                'workers': workers,
                'log_predictions': log_predictions,
                'scenario': {
                    'loading': loading,
                    'users': users,
                    'seq_len': seq_len,
                },
            },
            cli_ctx.config_file,
        )
        set_config(cfg)
        show_progress = not no_progress and cli_ctx.output_mode == OutputMode.CONSOLE
        if show_progress:
            print_wait('Replaying users...')
        result = run_batch(progress=show_progress)
    except Exception as e:
        exit_on_error(cli_ctx, e)
    cli_ctx.output.print_sections([
        Section(
            'Run',
            [{
                'users': result.users,
                'predictors': ', '.join(k.value for k in result.predictors),
                'source': result.source,
                'output_dir': str(result.output_dir),
                'elapsed': result.elapsed,
            }],
            list(run_fields.values()),
        ),
        Section(
            'Summary',
            [attr.asdict(s) for s in result.summaries],
            list(summary_fields.values()),
        ),
    ])

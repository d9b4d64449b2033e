from pathlib import Path

import click

from ..config import resolve_config
from ..core import write_traces
from ..metrics import large_jump_fraction
from ..output.fields import simulate_fields
from ..simgen import Loading, generate_scenario
from .main import main
from .params import EnumChoice
from .pretty import exit_on_error
from .types import CLIContext


@main.command()
@click.pass_obj
@click.option('--loading', type=EnumChoice(Loading), default=None,
              help='Interference loading of the scenario (default: partial).')
@click.option('--users', type=int, default=None, help='The number of users (default: 210).')
@click.option('--seq-len', type=int, default=None,
              help='Feedback instants per user (default: 1000).')
@click.option('--rho', type=float, default=None,
              help='Per-feedback fading correlation in (0, 1) (default: 0.9).')
@click.option('--interferers', type=int, default=None, help='Interferers per user (default: 8).')
@click.option('--subbands', type=int, default=None,
              help='Fading subbands averaged into each SINR report (default: 32).')
@click.option('--holding-time', type=float, default=None,
              help='Mean interferer on/off holding time in feedback steps (default: 10).')
@click.option('-p', '--alphabet-size', type=int, default=None,
              help='The number of MCS levels (default: 28).')
@click.option('--seed', type=int, default=None, help='The master random seed.')
@click.option('-o', '--out', 'out_path', type=click.Path(dir_okay=False), default=None,
              help='Where to write the trace CSV (default: <output dir>/traces.csv).')
def simulate(cli_ctx: CLIContext, loading, users, seq_len, rho, interferers,
             subbands, holding_time, alphabet_size, seed, out_path):
    '''
    Generates synthetic per-user MCS traces without running any predictor.
    '''
    try:
        cfg = resolve_config(
            {
                'alphabet_size': alphabet_size,
                'seed': seed,
                'scenario': {
                    'loading': loading,
                    'users': users,
                    'seq_len': seq_len,
                    'rho': rho,
                    'interferers': interferers,
                    'subbands': subbands,
                    'holding_time': holding_time,
                },
            },
            cli_ctx.config_file,
        )
        path = Path(out_path) if out_path else cfg.output_dir / 'traces.csv'
        traces = generate_scenario(cfg.scenario)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_traces(path, traces)
    except Exception as e:
        exit_on_error(cli_ctx, e)
    cli_ctx.output.print_item(
        {
            'users': len(traces),
            'seq_len': cfg.scenario.seq_len,
            'loading': cfg.scenario.loading.value,
            'large_jump_fraction': large_jump_fraction(traces),
            'path': str(path),
        },
        list(simulate_fields.values()),
    )

import click

from ..config import resolve_config
from ..core import Alphabet, default_rate_table, load_rate_table, load_traces
from ..harness import inspect_user
from ..order_select import Criterion, ParamCount, SampleMode
from ..output.fields import criterion_fields, ipred_fields, state_fields, tree_node_fields
from ..output.types import Section
from .main import main
from .params import EnumChoice
from .pretty import exit_on_error
from .types import CLIContext


@main.command()
@click.pass_obj
@click.argument('trace_path', metavar='TRACE', type=click.Path(dir_okay=False))
@click.argument('user_id', metavar='USER_ID')
@click.option('--upto', type=int, default=None,
              help='Replay only the first UPTO symbols (default: the whole trace).')
@click.option('--tree', 'tree_kind', type=click.Choice(['ppm', 'lezi']), default='ppm',
              help='Dump the fixed-depth PPM tree or an Active LeZi tree of the same prefix.')
@click.option('-p', '--alphabet-size', type=int, default=None,
              help='The number of MCS levels (default: 28).')
@click.option('-m', '--depth', type=int, default=None, help='PPM tree depth (default: 5).')
@click.option('-K', '--max-order', type=int, default=None,
              help='The largest candidate order (default: 4).')
@click.option('--epsilon', type=float, default=None,
              help='Learning-curve threshold in bits (default: 0.05).')
@click.option('--criterion', type=EnumChoice(Criterion), default=None,
              help='Order selection criterion (default: aicc).')
@click.option('--sample-mode', type=EnumChoice(SampleMode), default=None)
@click.option('--param-count', type=EnumChoice(ParamCount), default=None)
@click.option('--rate-table', type=click.Path(dir_okay=False), default=None,
              help='A rate-table override CSV (mcs,rate).')
def inspect(cli_ctx: CLIContext, trace_path, user_id, upto, tree_kind, alphabet_size,
            depth, max_order, epsilon, criterion, sample_mode, param_count, rate_table):
    '''
    Shows the tree, predictive information, learning curve and criterion
    values of one user after the first UPTO symbols.

    \b
    TRACE: A trace CSV (user_id,t,mcs).
    USER_ID: The user to inspect.
    '''
    try:
        cfg = resolve_config(
            {
                'alphabet_size': alphabet_size,
                'depth': depth,
                'max_order': max_order,
                'epsilon': epsilon,
                'criterion': criterion,
                'sample_mode': sample_mode,
                'param_count': param_count,
                'rate_table': rate_table,
            },
            cli_ctx.config_file,
        )
        alphabet = Alphabet(cfg.alphabet_size)
        if cfg.rate_table is not None:
            rates = load_rate_table(cfg.rate_table, alphabet)
        else:
            rates = default_rate_table(cfg.alphabet_size)
        traces = load_traces(trace_path, alphabet)
        report = inspect_user(traces, user_id, upto, cfg, rates, tree_kind=tree_kind)
    except Exception as e:
        exit_on_error(cli_ctx, e)
    cli_ctx.output.print_sections([
        Section('State', [report.state_item()], list(state_fields.values())),
        Section(f'Tree ({report.tree_kind})', report.tree_items(), list(tree_node_fields.values())),
        Section('Predictive information', report.ipred_items(), list(ipred_fields.values())),
        Section('Order selection', report.criterion_items(), list(criterion_fields.values())),
    ])

import enum
import os
from pathlib import Path
from typing import (
    Any,
    Callable,
    Dict,
    Mapping,
    Optional,
    Tuple,
    TypeVar,
    Union,
    cast,
)

import appdirs
import attr
import yaml

from .complexity import DEFAULT_EPSILON, DEFAULT_MAX_ORDER
from .core import DEFAULT_ALPHABET_SIZE
from .exceptions import ConfigError, DomainError
from .freq_tree import DEFAULT_PPM_DEPTH
from .order_select import Criterion, ParamCount, SampleMode
from .predict import (
    DEFAULT_BOOTSTRAP_LEN,
    DEFAULT_FM_ORDER,
    DEFAULT_MEDIAN_WINDOW,
    DEFAULT_RECOMPUTE_PERIOD,
    PredictorKind,
)
from .simgen import ScenarioConfig

__all__ = [
    'get_env',
    'bool_env',
    'get_config',
    'set_config',
    'find_config_file',
    'load_config_file',
    'resolve_config',
    'RunConfig',
    'DEFAULTS',
]


class Undefined(enum.Enum):
    token = object()


_run_config: Optional['RunConfig'] = None
_undefined = Undefined.token

local_config_path = Path(appdirs.user_config_dir('mcspred', 'mcspred'))

DEFAULTS: Mapping[str, str] = {
    'output_dir': 'mcspred-out',
    'workers': str(os.cpu_count() or 1),
    'seed': '0',
}
"""
The default values for config parameters settable via environment variables.
"""

T = TypeVar('T')


def default_clean(v: str) -> T:
    return cast(T, v)


def get_env(
    key: str,
    default: Union[str, Undefined] = _undefined,
    *,
    clean: Callable[[str], T] = default_clean,
) -> T:
    """
    Retrieves a configuration value from the environment variables.
    The given *key* is uppercased and prefixed by ``"MCSPRED_"``.

    :param key: The key name.
    :param default: The default value returned when there is no corresponding
        environment variable.
    :param clean: A single-argument function that is applied to the result of lookup
        (in both successes and the default value for failures).
        The default is returning the value as-is.

    :returns: The value processed by the *clean* function.
    """
    key = key.upper()
    raw = os.environ.get('MCSPRED_' + key)
    if raw is None:
        if default is _undefined:
            raise KeyError(key)
        raw = default
    return clean(raw)


def bool_env(v: str) -> bool:
    v = v.lower()
    if v in ('y', 'yes', 't', 'true', '1'):
        return True
    if v in ('n', 'no', 'f', 'false', '0'):
        return False
    raise ValueError('Unrecognized value of boolean environment variable', v)


def _clean_predictors(v: Any) -> Tuple[PredictorKind, ...]:
    if isinstance(v, str):
        v = [item for item in (s.strip() for s in v.split(',')) if item]
    try:
        kinds = tuple(PredictorKind(item) for item in v)
    except ValueError as e:
        raise ConfigError(f'Unknown predictor: {e}') from e
    if not kinds:
        raise ConfigError('At least one predictor is required')
    return kinds


def _clean_path(v: Any) -> Optional[Path]:
    if v is None or v == '':
        return None
    return Path(v)


def _enum_converter(enum_type):
    def convert(v):
        try:
            return enum_type(v)
        except ValueError:
            choices = ', '.join(e.value for e in enum_type)
            raise ConfigError(f'{v!r} is not one of: {choices}')
    return convert


def _positive(instance, attribute, value) -> None:
    if value < 1:
        raise ConfigError(f'{attribute.name} must be at least 1', value)


@attr.define(slots=True, frozen=True)
class RunConfig:
    """
    Every knob of a batch run.

    Traces come from ``trace`` when it is set, otherwise they are generated
    from ``scenario``.  ``seed`` and ``alphabet_size`` are shared with the
    scenario.
    """

    scenario: ScenarioConfig = attr.field(factory=ScenarioConfig)
    trace: Optional[Path] = attr.field(default=None, converter=_clean_path)
    predictors: Tuple[PredictorKind, ...] = attr.field(
        default=tuple(PredictorKind), converter=_clean_predictors,
    )
    alphabet_size: int = attr.field(default=DEFAULT_ALPHABET_SIZE, converter=int)
    depth: int = attr.field(default=DEFAULT_PPM_DEPTH, converter=int, validator=_positive)
    max_order: int = attr.field(default=DEFAULT_MAX_ORDER, converter=int, validator=_positive)
    fm_order: int = attr.field(default=DEFAULT_FM_ORDER, converter=int, validator=_positive)
    epsilon: float = attr.field(default=DEFAULT_EPSILON, converter=float)
    criterion: Criterion = attr.field(default=Criterion.AICC, converter=_enum_converter(Criterion))
    recompute_period: int = attr.field(
        default=DEFAULT_RECOMPUTE_PERIOD, converter=int, validator=_positive,
    )
    bootstrap_len: int = attr.field(default=DEFAULT_BOOTSTRAP_LEN, converter=int)
    median_window: int = attr.field(
        default=DEFAULT_MEDIAN_WINDOW, converter=int, validator=_positive,
    )
    rate_table: Optional[Path] = attr.field(default=None, converter=_clean_path)
    output_dir: Path = attr.field(default=Path(DEFAULTS['output_dir']), converter=Path)
    seed: int = attr.field(default=0, converter=int)
    workers: int = attr.field(default=int(DEFAULTS['workers']), converter=int, validator=_positive)
    log_predictions: bool = attr.field(default=True)
    sample_mode: SampleMode = attr.field(
        default=SampleMode.TRANSITIONS, converter=_enum_converter(SampleMode),
    )
    param_count: ParamCount = attr.field(
        default=ParamCount.TREE_DEPTH, converter=_enum_converter(ParamCount),
    )

    def __attrs_post_init__(self) -> None:
        if self.alphabet_size < 2:
            raise ConfigError('The alphabet must have at least two symbols', self.alphabet_size)
        if self.depth < self.max_order + 1:
            raise ConfigError(
                f'The tree depth ({self.depth}) must be at least K+1 '
                f'({self.max_order + 1}) to blend order {self.max_order}',
            )
        if self.fm_order > self.depth - 1:
            raise ConfigError(
                f'The fixed Markov order must not exceed {self.depth - 1}', self.fm_order,
            )
        if self.epsilon <= 0:
            raise ConfigError('epsilon must be positive', self.epsilon)
        if self.bootstrap_len < 0:
            raise ConfigError('bootstrap_len cannot be negative', self.bootstrap_len)
        if self.scenario.alphabet_size != self.alphabet_size or self.scenario.seed != self.seed:
            raise ConfigError('The scenario must share the alphabet size and seed of the run')

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> 'RunConfig':
        """
        Builds a config from plain values as read from YAML, the environment
        or command-line flags.  A nested ``scenario`` mapping holds the
        scenario fields.
        """
        values = dict(values)
        known = {a.name for a in attr.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError('Unknown configuration keys', unknown)
        scenario = values.pop('scenario', None) or {}
        if isinstance(scenario, ScenarioConfig):
            scenario = attr.asdict(scenario, recurse=False)
        if not isinstance(scenario, Mapping):
            raise ConfigError('The scenario section must be a mapping')
        try:
            alphabet_size = int(values.get('alphabet_size', DEFAULT_ALPHABET_SIZE))
            seed = int(values.get('seed', 0))
            values['scenario'] = ScenarioConfig(**{
                **scenario,
                'alphabet_size': alphabet_size,
                'seed': seed,
            })
            return cls(**values)
        except DomainError as e:
            raise ConfigError(f'Invalid scenario: {e.args[0]}') from e
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from e


def find_config_file(explicit: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """
    The config file given explicitly, else the one named by ``MCSPRED_CONFIG``,
    else ``config.yaml`` in the user config directory when it exists.
    """
    if explicit:
        return Path(explicit)
    from_env = get_env('CONFIG', '', clean=str)
    if from_env:
        return Path(from_env)
    candidate = local_config_path / 'config.yaml'
    if candidate.is_file():
        return candidate
    return None


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as fp:
            data = yaml.safe_load(fp)
    except OSError as e:
        raise ConfigError(f'Cannot read the config file {path}: {e.strerror}') from e
    except yaml.YAMLError as e:
        raise ConfigError(f'Invalid YAML in {path}: {e}') from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f'The config file {path} must hold a mapping')
    return data


def _env_values() -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key, clean in (
        ('output_dir', str),
        ('workers', int),
        ('seed', int),
        ('log_predictions', bool_env),
    ):
        try:
            values[key] = get_env(key, clean=clean)
        except KeyError:
            continue
        except ValueError as e:
            raise ConfigError(f'Invalid MCSPRED_{key.upper()}: {e}') from e
    return values


def resolve_config(
    overrides: Optional[Mapping[str, Any]] = None,
    config_file: Optional[Union[str, Path]] = None,
) -> RunConfig:
    """
    Merges the defaults, the config file, the environment and ``overrides``
    (later sources win; ``None`` overrides are ignored).  Scenario fields in
    ``overrides`` go under a nested ``scenario`` mapping.
    """
    merged: Dict[str, Any] = {}
    path = find_config_file(config_file)
    if path is not None:
        merged.update(load_config_file(path))
    merged.update(_env_values())
    scenario = merged.get('scenario') or {}
    if not isinstance(scenario, Mapping):
        raise ConfigError('The scenario section must be a mapping')
    scenario = dict(scenario)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == 'scenario':
            scenario.update({k: v for k, v in value.items() if v is not None})
        else:
            merged[key] = value
    merged['scenario'] = scenario
    return RunConfig.from_mapping(merged)


def get_config() -> RunConfig:
    """
    Returns the configuration for the current process.
    If there is no explicitly set :class:`RunConfig` instance,
    it will generate a new one from the config file, the environment
    variables and defaults.
    """
    global _run_config
    if _run_config is None:
        _run_config = resolve_config()
    return _run_config


def set_config(conf: Optional[RunConfig]) -> None:
    """
    Sets the configuration used throughout the current process.
    """
    global _run_config
    _run_config = conf

from . import main  # noqa
from . import simulate  # noqa
from . import run  # noqa
from . import inspect  # noqa

"""Unique-maximal-peak Dyck paths: exact sweep plus asymptotic certificate."""

from .analysis import *  # noqa: F401,F403
from .analysis import __all__ as _analysis_all
from .exact import *  # noqa: F401,F403
from .exact import __all__ as _exact_all

__all__ = list(_exact_all) + list(_analysis_all)

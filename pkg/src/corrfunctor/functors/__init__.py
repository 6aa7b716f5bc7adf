from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .hom import *  # noqa: F401,F403
from .hom import __all__ as _hom_all
from .modules import *  # noqa: F401,F403
from .modules import __all__ as _mod_all

__all__ = list(_core_all) + list(_hom_all) + list(_mod_all)

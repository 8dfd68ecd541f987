from .dynamics_layer import *
from .replay import *
from .stability_tracker import *
from . import dynamics_layer, stability_tracker
from .replay import __all__ as replay_all

__all__ = dynamics_layer.__all__ + replay_all + stability_tracker.__all__

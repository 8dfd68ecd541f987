from .detection import *
from .flow_scenario import *
from .generator import *
from . import detection, flow_scenario, generator

__all__ = (
    detection.__all__
    + flow_scenario.__all__
    + generator.__all__
)

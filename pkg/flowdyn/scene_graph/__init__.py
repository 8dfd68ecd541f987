from .layered_graph import *
from .nav_node import *
from .notifications import *
from .pose_event import *
from . import layered_graph, nav_node, notifications, pose_event

__all__ = (
    layered_graph.__all__
    + nav_node.__all__
    + notifications.__all__
    + pose_event.__all__
)

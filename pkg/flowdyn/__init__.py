from .__version__ import (
    __title__,
    __description__,
    __url__,
    __version__,
    __author__,
    __author_email__,
    __license__,
)

from .angles import *
from .binding import *
from .binding import __all__ as binding_all
from .evaluation import *
from .evaluation import __all__ as evaluation_all
from .fitting import *
from .fitting import __all__ as fitting_all
from .scene_graph import *
from .scene_graph import __all__ as scene_graph_all
from .simulator import *
from .simulator import __all__ as simulator_all

from .cell_key import CellKey, key_of, box_center
from .cylindrical_sample import CylindricalSample
from .dir_histogram import DirHistogram
from .dynamics_cell import CellOwner, DynamicsCell, OwnerKind
from .position import Position3
from .reservoir_buffer import ReservoirBuffer
from .run_config import RunConfig, load_run_config
from .snapshot import read_snapshot, write_snapshot
from .spatial_hash import SparseCellMap
from .sw_component import SwComponent
from .sw_gmm import *

__all__ = (
    [
        "__title__",
        "__description__",
        "__url__",
        "__version__",
        "__author__",
        "__author_email__",
        "__license__",
        "CellKey",
        "key_of",
        "box_center",
        "CylindricalSample",
        "DirHistogram",
        "CellOwner",
        "DynamicsCell",
        "OwnerKind",
        "Position3",
        "ReservoirBuffer",
        "RunConfig",
        "load_run_config",
        "read_snapshot",
        "write_snapshot",
        "SparseCellMap",
        "SwComponent",
    ]
    + angles.__all__
    + sw_gmm.__all__
    + binding_all
    + evaluation_all
    + fitting_all
    + scene_graph_all
    + simulator_all
)

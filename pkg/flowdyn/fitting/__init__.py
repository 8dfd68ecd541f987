from .base_fitter import *
from .bic import *
from .em import *
from .fit_config import *
from .fit_diagnostics import *
from .kmeanspp import *
from .meanshift import *
from . import base_fitter, bic, em, fit_config, fit_diagnostics, kmeanspp, meanshift

__all__ = (
    base_fitter.__all__
    + bic.__all__
    + em.__all__
    + fit_config.__all__
    + fit_diagnostics.__all__
    + kmeanspp.__all__
    + meanshift.__all__
)

from .ablation_result import *
from .eval_report import *
from .harness import *
from .metrics import *
from .reference_mod import *
from .svg_export import *
from . import ablation_result, eval_report, harness, metrics, reference_mod, svg_export

__all__ = (
    ablation_result.__all__
    + eval_report.__all__
    + harness.__all__
    + metrics.__all__
    + reference_mod.__all__
    + svg_export.__all__
)

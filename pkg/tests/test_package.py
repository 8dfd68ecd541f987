import importlib
import warnings

import flowdyn
from flowdyn import sw_gmm


class TestPackage:
    def test_mixture_helpers_are_exported(self):
        for name in sw_gmm.__all__:
            assert name in flowdyn.__all__
            assert getattr(flowdyn, name) is getattr(sw_gmm, name)

    def test_exported_names_resolve(self):
        for name in flowdyn.__all__:
            assert hasattr(flowdyn, name), name

    def test_version_module_compiles_without_warnings(self):
        version_module = importlib.import_module("flowdyn.__version__")
        with open(version_module.__file__, encoding="utf-8") as f:
            source = f.read()
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            compile(source, version_module.__file__, "exec")
        assert flowdyn.__version__ == version_module.__version__

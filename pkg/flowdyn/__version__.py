r"""
  __ _               _
 / _| | _____      _| |_   _ _ __
| |_| |/ _ \ \ /\ / / | | | | '_ \
|  _| | (_) \ V  V /| | |_| | | | |
|_| |_|\___/ \_/\_/ |_|\__, |_| |_|
                       |___/
"""

__title__ = "flowdyn"
__description__ = "Online bounded-memory maps of dynamics with semi-wrapped Gaussian mixtures bound to scene graph nodes."
__url__ = "https://github.com/flowdyn/flowdyn"
__issues__ = "{}/issues".format(__url__)
__version__ = "0.3.0"
__author__ = "flowdyn contributors"
__author_email__ = "flowdyn-dev@googlegroups.com"
__license__ = "Apache License 2.0"

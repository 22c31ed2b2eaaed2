"""Python surface of the ccrsim library.

Everything lives in the compiled ``_ccrsim`` module; this package just
re-exports it under a stable name.  When built with scikit-build-core the
extension sits inside the package; a plain CMake build leaves it next to it
on ``PYTHONPATH``.
"""

try:
    from ._ccrsim import *  # noqa: F401,F403
    from ._ccrsim import __doc__  # noqa: F401
except ImportError:
    from _ccrsim import *  # noqa: F401,F403
    from _ccrsim import __doc__  # noqa: F401

"""Driven dissipative two-level system toolkit.

Thin Python layer over the compiled `_srbloch` extension: steady-state
response, stochastic-resonance sweeps, and relaxometry protocols.
"""

try:
    # installed wheel: extension lives inside the package
    from ._srbloch import *  # noqa: F401,F403
except ImportError:
    # build-tree layout: extension sits next to the package on sys.path
    from _srbloch import *  # noqa: F401,F403

__version__ = "0.1.0"

"""Built-in solvers; importing this package registers them."""

from . import ad1d, ns2d, ns3d, trivial

__all__ = ["ad1d", "ns2d", "ns3d", "trivial"]

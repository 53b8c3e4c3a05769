"""Three-party quantum Byzantine agreement testbed.

Layers, bottom up:

  gf         GF(256) arithmetic, polynomials, irreducibility, sampling
  otuh       one-time universal-hash signatures over XOR-correlated keys
  keysim     simulated entanglement links, reconciliation accounting,
             three-party key blocks
  secparams  finite-key security bound chain
  qba        the agreement engine, adversaries, classical baselines
  netplan    channel budgets and communication complexity
  cli        scenario runner (`qbanet` command)
"""

from . import gf, keysim, netplan, otuh, qba, secparams
from .rng import stream

__all__ = ["gf", "otuh", "keysim", "secparams", "qba", "netplan", "stream"]

__version__ = "0.1.0"

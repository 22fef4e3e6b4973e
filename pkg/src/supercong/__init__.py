"""Exact checks of Ramanujan-type supercongruences and the WZ pairs that prove three of them."""

from .congruences import builtin_database, verify_congruence
from .exact import INFINITE, legendre, ord, pochhammer
from .replay import classical_check, replay_theorem
from .wz import check_wz_identity, wz_pairs

__version__ = "0.1.0"

"""
Congruences of finite lattices, centered on slim planar semimodular lattices.
"""

from latcon.config import Settings, load_settings
from latcon.congruence import (
    Congruence,
    ColoredLattice,
    congruence_lattice,
    ji_congruence_poset,
    principal_congruence,
)
from latcon.construct import represent
from latcon.enumeration import Catalog, build_catalog, enumerate_lattices, enumerate_sps
from latcon.lattice import FiniteLattice, glued_sum
from latcon.order import Poset, canonical_form, down_set_lattice, join_irreducibles
from latcon.planar import PlanarEmbedding, find_embedding, natural_diagram
from latcon.properties import check_all
from latcon.serialization import load_lattice, load_poset
from latcon.swing import swing_collapse

__version__ = "0.3.1"
__author__ = "latcon developers"
__license__ = "MIT"

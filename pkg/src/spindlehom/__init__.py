"""Exact homology of multispindles (sets with several mutually distributive
idempotent operations) with coefficients in action modules."""

from .rings import GF, QQ, ZZ, Ring
from .structures import (AxiomError, Multishelf, ShelfHom, StructureParseError, adjoin_trivial_op,
                         all_homomorphisms, fixture, fixtures, load_structure, multishelf,
                         standard_family)
from .modules import ActionModule, load_module, rack_weights, trivial_module, validate_action
from .chains import ChainComplex, build_complex
from .homology import AbelianGroup, HomologyTable, homology, homology_of
from .spectral import FilteredComplex, SpectralSequence, degenerate_filtration
from .isomaps import kunneth_check, one_term_iso, two_term_iso
from .verify import run_verify

__version__ = "0.1.0"

"""Executable connectivity of projectors in finite dimension.

Projector paths, their lifts to invertible paths, component invariants of
GL, orbit certificates and block decompositions of invertibles.
"""

from .blocks import (BlockDecomposition, split_connect, split_connect_in_basis,
                     verify_decomposition)
from .components import (Certificate, ComponentInvariant, Label, certify_orbit,
                         component_invariant, is_j_surjective, j_witness,
                         verify_certificate)
from .errors import *  # noqa: F401,F403
from .homotopy import (Obstruction, PathBundle, PathKind, SampledPath,
                       concatenate, connect_invertibles, connect_projectors,
                       lift_path, subspace_rotation)
from .linalg import (FieldTag, orthogonal_log, op_norm, polar, rank_of,
                     spd_power)
from .projectors import (Projector, conjugator, hopf_family, ortho_homotopy,
                         orthogonalize, sznagy_intertwiner, validate_projector)

__version__ = "0.1.0"

from .trimesh import TriMesh, icosphere, flat_torus, read_off, write_off
from .laplacian import OperatorPair, cotan_laplacian, rayleigh
from .eigs import SpectrumResult, smallest_eigs, dense_eigs_oracle
from .maps import (SimplicialMap, identity_map, pullback, map_statistics,
                   minimax_check, gh_distortion)
from .constructions import (MushroomParams, mushroom, mushroom_lambda1_sweep,
                            cap_complement_dirichlet, GluingParams, tube_gluing)
from .cheeger import brute_cheeger

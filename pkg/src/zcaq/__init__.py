from importlib.metadata import PackageNotFoundError, version

from . import errors
from .errors import ZCAQError
from .core import (
    Array2D,
    CorrelationProfile1D,
    CorrelationProfile2D,
    Quad,
    UnimodularSequence,
    ZoneReport,
    autocorr_1d,
    autocorr_2d,
    complementary_sum,
    conj_reverse,
    max_zcz_width,
    verify_gcp,
    verify_zcaq,
    xcorr_1d,
    xcorr_2d,
)
from .catalog import (
    Catalog,
    Family,
    SeedKind,
    SeedPair,
    base_gcp,
    default_catalog,
    family_params,
    gcp_length_admissible,
    gcp_of_length,
    golay_double,
    seed_zcp,
    signature_check,
    turyn_product,
)
from .construct import QuadRecipe, build_quad, phase_count, quad_correlation_residue, seed_pair_from_quad
from .pmepr import (
    PmeprReport,
    baseband_signal,
    family_bound,
    family_ceiling,
    iepr_curve,
    measure_pmepr,
    pmepr_bound_pair,
    quad_pmepr_report,
)
from .search import Alphabet, SearchSpec, brute_force_zcp, canonical_pair, exists_binary_gcp, search_zcp


try:
    __version__ = version('zcaq-python')
except PackageNotFoundError:
    # Package not installed
    __version__ = 'unknown'

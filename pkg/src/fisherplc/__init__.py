"""Exact-arithmetic toolkit for Fisher markets with additively separable
piecewise-linear concave (PLC) utilities."""

__version__ = "0.1.0"

from .certify import Certificate, Refutation, certify_equilibrium, check_allocation
from .demand import (
    DemandProfile, UnboundedDemand, canonical_bundle, compute_demand, is_optimal_bundle, optimal_utility,
)
from .flow import ClearingInstance, feasible_transport
from .games import (
    BimatrixGame, MixedProfile, check_well_supported, support_enumeration_nash, validate_sparse_normalized,
)
from .market import Buyer, Market, MarketReport, as_prices, utility, validate_market
from .plc import PLCRepresentation, classify, evaluate, segments, validate_plc
from .reduction import (
    DecodeError, ReductionMeta, build_price_regulating_market, build_reduction_market,
    check_price_regulation, decode_prices, roundtrip_check,
)
from .rational import INF

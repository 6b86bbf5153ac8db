"""
Core modules for qudit amplitude-damping codes
"""
from .qudit_core import ClassicalCode, QuantumCode, QuditString, SparseState
from .asym_metrics import AsymReport, delta, is_self_complementary, is_t_code
from .ad_channels import ChannelKind, ChannelSpec, MonomialKraus, enumerate_error_ops
from .kl_verifier import DeviationReport, VerificationOutcome, order_slope, verify_code
from .constructions import gc_construct, lift, multi_error_construct, v_lambda_construct
from .code_search import SearchCertificate, max_code_search, partition_search

__all__ = [
    'ClassicalCode',
    'QuantumCode',
    'QuditString',
    'SparseState',
    'AsymReport',
    'delta',
    'is_self_complementary',
    'is_t_code',
    'ChannelKind',
    'ChannelSpec',
    'MonomialKraus',
    'enumerate_error_ops',
    'DeviationReport',
    'VerificationOutcome',
    'order_slope',
    'verify_code',
    'gc_construct',
    'lift',
    'multi_error_construct',
    'v_lambda_construct',
    'SearchCertificate',
    'max_code_search',
    'partition_search',
]

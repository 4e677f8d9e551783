from .bound import positivity_time_bound
from .perron import PfVerdict, spectral_pf_test, psd_equivalence_oracle, psd_equivalence_sides
from .tau import TauEstimate, TauVerdict, estimate_tau

__all__ = [
    "PfVerdict",
    "TauEstimate",
    "TauVerdict",
    "estimate_tau",
    "positivity_time_bound",
    "spectral_pf_test",
    "psd_equivalence_oracle",
    "psd_equivalence_sides",
]

"""Numerical tolerances shared by every module.

All verdict-affecting thresholds live here so a run can be reproduced from
the values echoed in its report.
"""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # linalg core
    residual_tolerance: float = 1e-8
    symmetry_tolerance: float = 1e-10
    solve_tolerance: float = 1e-10
    jacobi_tolerance: float = 1e-12
    jacobi_max_sweeps: int = 60
    qr_sweeps_per_dim: int = 40
    condition_limit: float = 1e12

    # stability
    marginal_band: float = 1e-9
    stein_tolerance: float = 1e-8
    sdlcp_tolerance: float = 1e-8
    aloid_tolerance: float = 1e-6
    nilpotent_tolerance: float = 1e-8
    power_converged: float = 1e-10
    power_diverged: float = 1e10
    radius_grid: int = 256
    radius_theta_tol: float = 1e-8

    # maps and preserver testing
    analysis_limit: int = 12
    normal_tolerance: float = 1e-8
    apply_tolerance: float = 1e-10
    separation: float = 1e-6
    rho_preservation_tolerance: float = 1e-6
    canonical_tolerance: float = 1e-8

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)


DEFAULT = Tolerances()

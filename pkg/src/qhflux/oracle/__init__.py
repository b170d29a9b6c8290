from .monomial import MonomialPolynomial, partition_exact, quasi_hole_poly
from .plasma import PlasmaConfig, PlasmaSample, plasma_mcmc
from .charpoly import charpoly_moment_mc
from .slater import slater_density, slater_density_brute
from .delta import delta_apply, delta_check
from .energy import energy_identity_check

__all__ = [
    "MonomialPolynomial", "partition_exact", "quasi_hole_poly",
    "PlasmaConfig", "PlasmaSample", "plasma_mcmc",
    "charpoly_moment_mc",
    "slater_density", "slater_density_brute",
    "delta_apply", "delta_check",
    "energy_identity_check",
]

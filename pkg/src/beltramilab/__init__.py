"""Numerical laboratory for thin-tube Beltrami fields around knotted curves."""

from .curves import (ClosedCurveGeometry, CurveSpec, ResonanceData,
                     build_geometry, helicoid_perturb, metric_AB,
                     rationalize_torsion, smooth_bump, tune_total_torsion,
                     twist_integrals)
from .fieldseries import (FieldConfiguration, GammaEntry, GammaSet,
                          MelnikovDatum, OrderFlags, TruncatedFieldX)
from .flow import IntegratorConfig, measure_check, poincare_map
from .gammadesign import (GammaPlan, choose_melnikov_b, construct_gammas,
                          design_resonant_tori, verify_admissibility)
from .torus3 import CurlEigenfield

__all__ = [
    "ClosedCurveGeometry", "CurveSpec", "ResonanceData", "build_geometry",
    "helicoid_perturb", "metric_AB", "rationalize_torsion", "smooth_bump",
    "tune_total_torsion", "twist_integrals", "FieldConfiguration",
    "GammaEntry", "GammaSet", "MelnikovDatum", "OrderFlags", "TruncatedFieldX",
    "IntegratorConfig", "measure_check", "poincare_map", "GammaPlan",
    "choose_melnikov_b", "construct_gammas", "design_resonant_tori",
    "verify_admissibility", "CurlEigenfield",
]

__version__ = "0.1.0"

"""Exact computations with measurings and comeasurings of finite-dimensional Omega-algebras."""

from .exact import QQ, FieldSpec, Matrix
from .omega import OmegaAlgebra, OmegaSignature, is_morphism, standard_algebra, tensor_product, dual_omega_algebra
from .maps import CoactionShapeMap, ActionShapeMap, OperatorSubspace, supp, cosupp, compare
from .ncpoly import NcPoly, Presentation
from .universal import (ComeasuringInstance, build_universal_bialgebra, build_universal_comeasuring,
                        hopf_envelope_presentation, universal_hom, universal_map, verify_coaction,
                        verify_comeasuring)
from .duality import (MeasuringInstance, dual_theorem_check, finite_dual_bialgebra, grouplikes,
                      meas_to_comeas, comeas_to_meas, nonexistence_witness, verify_action, verify_measuring)

__version__ = "0.1.0"

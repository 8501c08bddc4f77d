"""Noncyclic (open-path) adiabatic geometric phases.

Models, the gauge-invariant phase engine, an exact propagation oracle,
Bloch-sphere geodesic closure, the flux-threaded angular box and the
spin polarization experiment.
"""
from .abbox import ABConfig, ab_geometric_phase, ab_overlap, ab_sweep, regime
from .curvature import berry_curvature, cap_mesh, curvature_flux
from .errors import (AntipodalError, DegeneracyError, DomainError, MeshError, NoncyclicError,
                     NormDriftError, ResolutionError, SchemaError, StepSizeError, UndefinedPhaseError)
from .experiment import (PolarizationResult, f_overlap, gamma_mod_pi_candidates, measured_polarization,
                         polarization_z, spin_geometric_phase)
from .geodesic import SpherePath, closure_phase, geodesic_arc, latitude_loop, octant_path, solid_angle
from .models import (EigenFrame, HamiltonianModel, SpinConfig, conical_model, spin_model,
                     spin_vector_model, tabulated_model)
from .oracle import oracle_geometric_phase, pancharatnam_phase, propagate
from .paths import ParameterPath, leg_schedule, load_path, save_path
from .phase import (GaugeFunction, PhaseDecomposition, PhaseTrack, adiabaticity_metric, apply_gauge,
                    geometric_phase, phase_track)
from .util import circular_distance, wrap

__version__ = "0.1.0"

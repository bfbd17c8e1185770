"""shocklab: a 2D finite-volume compressible Euler solver with HLL-family
interface fluxes and a discrete stability laboratory for studying (and
curing) shock instabilities such as odd-even decoupling and the carbuncle.
"""

from .errors import (
    ConfigError,
    DegenerateFan,
    NonPhysicalState,
    ShockLabError,
    SubsonicShock,
    UnknownCase,
    UnsupportedFamily,
    ZeroBaseVelocity,
)
from .euler import (
    ConservedState,
    FaceFrame,
    GasModel,
    PrimitiveState,
    conserved_field,
    conserved_from_primitive,
    physical_flux_x,
    primitive_field,
    primitive_from_conserved,
    rotate_from_face,
    rotate_to_face,
)
from .riemann import (
    AntiDiffusion,
    FluxScheme,
    RoeAverages,
    SchemeKind,
    WaveSpeeds,
    anti_diffusion,
    hll_intermediate_state,
    hlle_flux,
    hllem_family_flux,
    roe_averages,
    wave_speeds,
)
from .stability import (
    BaseState,
    LyapunovTrace,
    PerturbationState,
    RegionMap,
    SchemeFamily,
    delta_v,
    delta_v_closed_form,
    fp1d_delta,
    lyapunov_value,
    phase_portrait,
    primitive_amplification_matrix,
    reduced_lyapunov_verdict,
    stability_region_map,
    step_perturbation,
)
from .grid import StructuredGrid
from .solver import (
    BoundarySpec,
    Extrapolate,
    MovingShockTop,
    ReflectiveWall,
    ResidualHistory,
    Solver,
    SolverConfig,
    SplitAtX,
    SupersonicInflow,
    ZeroGradientOutflow,
    apply_boundaries,
    compute_dt,
    flux_divergence,
    fv_update,
    muscl_reconstruct,
    residual_l2,
    ssprk2_combine,
    ssprk2_step,
)
from .cases import (
    PRESETS,
    CaseDefinition,
    ContourSpec,
    ShockJump,
    build_blunt_body,
    build_double_mach,
    build_forward_step,
    build_planar_shock,
    build_preset,
    build_supersonic_corner,
    instability_metrics,
    normal_shock_state,
)

__version__ = "0.1.0"

"""Geometric phases of cyclic pure-state evolutions and the time they take."""

from .bounds import (
    BoundReport,
    bd_bound,
    full_report,
    length_lower_bound,
    ml_bound,
    ml_time_averaged,
    mt_bound,
)
from .core import (
    BlochVector,
    HermitianObservable,
    OccupationProfile,
    Projector,
    RabiVector,
    StateVector,
    bloch_vector,
    expectation,
    occupation_profile,
    rabi_vector,
    spectral_decompose,
    variance,
)
from .errors import (
    DimensionError,
    GridError,
    NonHermitianError,
    OpenCurveError,
    PhysicsError,
    StationaryStateError,
)
from .evolution import (
    STATIONARY,
    Constant,
    RotatingFrame,
    Sampled,
    Trajectory,
    closure_defect,
    evolve_constant,
    evolve_schedule,
    find_period,
    uniform_grid,
)
from .geometry import PhaseResult, aa_phase, connection_integral, fs_length, horizontalize
from .scenarios import (
    CounterexampleScenario,
    QubitScenario,
    QutritScenario,
    analyze_qutrit,
    build_counterexample,
    build_qubit,
    build_qutrit,
    random_periodic,
)

__version__ = "0.1.0"

"""Murray animal-coat reaction-diffusion model with Thomas kinetics.

Simulates the two-species system on a rectangle with zero-flux boundaries
using a semi-implicit and an exponential integrator, and checks the
qualitative theory (positivity, energy bounds, continuous dependence,
squeezing) numerically.
"""

from importlib import resources

from .errors import (
    BadRange,
    DomainError,
    EmptyTrajectory,
    InsufficientData,
    MurrayCoatError,
    NoBracket,
    NonFinite,
    ParseError,
    ShapeMismatch,
    ValidationError,
)
from .grid import Grid, SpectralOperator, State, build_spectral_operator, l2_norm
from .integrate import Scheme, SchemeConfig, Trajectory, random_ic, simulate, step_etd, step_imex
from .model import Params, reaction_full, reaction_split, steady_state, thomas_h

__version__ = "0.1.0"


def preset_path(name: str = "murray_fig1"):
    """Filesystem path of a shipped configuration preset."""
    return resources.files(__name__) / "presets" / f"{name}.cfg"

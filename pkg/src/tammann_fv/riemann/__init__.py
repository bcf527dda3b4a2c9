from .exact import (
    ConvergenceError,
    StarRegion,
    VacuumError,
    WaveKind,
    sample,
    side_function,
    solve_star,
)
from .hllc import (
    RiemannFan,
    SolverDegenerateError,
    davis_speeds,
    hllc_solve,
    lagrangian_transform,
    pressure_based_speeds,
)

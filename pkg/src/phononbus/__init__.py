"""phononbus: open-system simulations of acoustic-bus quantum state transfer.

Subpackages by protocol:

* ``hilbert``      dense linear algebra, partial trace, Uhlmann fidelity
* ``lindblad``     time-dependent Lindblad / cascaded master equation
* ``transduction`` qubit -> phonon -> spin transfer with sech pulses
* ``pitchcatch``   waveguide-mediated pitch-and-catch transfer
* ``strain``       defect fine structure and spin-strain coupling calculators
* ``nuclear``      electron <-> nuclear-spin SWAP via dynamical decoupling
* ``msgate``       phonon-mediated two-spin entangling gate
* ``cli``          batch runner writing CSV artifacts
"""

from .hilbert import (
    CompositeSpace,
    embed,
    eigensystem_hermitian,
    expectation,
    fidelity,
    hermitian_sqrt,
    kron,
    partial_trace,
)
from .lindblad import (
    CascadeCoupling,
    Dissipator,
    IntegratorConfig,
    TimeDependentHamiltonian,
    Trajectory,
    evolve,
    rhs,
)

__version__ = "0.1.0"

__all__ = [
    "CompositeSpace", "kron", "embed", "partial_trace", "hermitian_sqrt",
    "fidelity", "eigensystem_hermitian", "expectation",
    "Dissipator", "TimeDependentHamiltonian", "CascadeCoupling",
    "IntegratorConfig", "Trajectory", "rhs", "evolve",
    "__version__",
]

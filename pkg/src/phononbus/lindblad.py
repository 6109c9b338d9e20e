"""Time-dependent Lindblad / cascaded master-equation integration.

The equation of motion is

    drho/dt = -i[H(t), rho]
              + sum_i gamma_i(t)/2 (2 c_i rho c_i^dag - {c_i^dag c_i, rho})
              + cascade cross term (see ``CascadeCoupling``)

with H(t) = H_static + sum_k envelope_k(t) * op_k.  All generators are
angular rates in rad/us, times in us.

``evolve`` integrates the vectorized density matrix (row-major ``vec``,
so vec(A rho B) = (A kron B^T) vec(rho)).  Constant-rate dissipators and
the static Hamiltonian are folded into one constant superoperator;
time-dependent envelopes and rate functions are sampled on every
right-hand-side call, never cached, which keeps adaptive stepping exact.

Note on dephasing: a dissipator c = n (a projector) at rate gamma damps
the affected coherences at gamma/2, i.e. the rate parameter is the full
Lindblad prefactor, not the coherence decay rate.

``rhs`` is a direct, readable evaluation of the same generator; the test
suite checks it against the superoperator path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import integrators
from .hilbert import is_hermitian, validate_density_matrix

RateLike = Union[float, Callable[[float], float]]


def _as_rate_fn(rate: RateLike) -> Callable[[float], float]:
    if callable(rate):
        return rate
    value = float(rate)
    if value < 0:
        raise ValueError(f"dissipator rate must be >= 0, got {value}")
    return lambda t: value


@dataclass
class Dissipator:
    """Lindblad channel: operator c_i and nonnegative rate (rad/us).

    ``rate`` may be a constant or a function of time.
    """

    operator: np.ndarray
    rate: RateLike = 0.0

    def __post_init__(self):
        self.operator = np.asarray(self.operator, dtype=complex)
        if not callable(self.rate) and float(self.rate) < 0:
            raise ValueError(f"dissipator rate must be >= 0, got {self.rate}")

    @property
    def is_constant(self) -> bool:
        return not callable(self.rate)

    def rate_at(self, t: float) -> float:
        r = self.rate(t) if callable(self.rate) else self.rate
        if r < 0:
            raise ValueError(f"dissipator rate {r} < 0 at t={t}")
        return r


@dataclass
class TimeDependentHamiltonian:
    """H(t) = static_part + sum_k envelope_k(t) * op_k.

    Envelopes are real-valued (rad/us); operators must be Hermitian so
    H(t) is Hermitian for every t.
    """

    static_part: np.ndarray
    driven_terms: list[tuple[Callable[[float], float], np.ndarray]] = field(
        default_factory=list
    )

    def __post_init__(self):
        self.static_part = np.asarray(self.static_part, dtype=complex)
        if not is_hermitian(self.static_part):
            raise ValueError("static Hamiltonian part is not Hermitian")
        terms = []
        for env, op in self.driven_terms:
            op = np.asarray(op, dtype=complex)
            if op.shape != self.static_part.shape:
                raise ValueError("driven operator shape mismatch")
            if not is_hermitian(op):
                raise ValueError("driven Hamiltonian operator is not Hermitian")
            terms.append((env, op))
        self.driven_terms = terms

    @property
    def dim(self) -> int:
        return self.static_part.shape[0]

    def at(self, t: float) -> np.ndarray:
        h = self.static_part.copy()
        for env, op in self.driven_terms:
            h += env(t) * op
        return h


@dataclass
class CascadeCoupling:
    """Unidirectional source -> sink coupling of a cascaded network.

    Adds  sqrt(transmission * kappa_sink(t) * kappa_source(t)) *
          (e^{i phi} [src rho, snk^dag] + e^{-i phi} [snk, rho src^dag])
    to the master equation.  The term is trace-free and preserves
    Hermiticity; the bare decays kappa(t) L must be supplied separately
    as Dissipators.

    ``transmission`` is the power transmission of the link: the cross
    amplitude scales as its square root, so the caught population scales
    linearly in it.
    """

    source_op: np.ndarray
    sink_op: np.ndarray
    kappa_source: Callable[[float], float]
    kappa_sink: Callable[[float], float]
    phase: float = 0.0
    transmission: float = 1.0

    def __post_init__(self):
        self.source_op = np.asarray(self.source_op, dtype=complex)
        self.sink_op = np.asarray(self.sink_op, dtype=complex)
        self.kappa_source = _as_rate_fn(self.kappa_source)
        self.kappa_sink = _as_rate_fn(self.kappa_sink)
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError("transmission must lie in [0, 1]")

    def coefficient(self, t: float) -> float:
        ks = self.kappa_source(t)
        kp = self.kappa_sink(t)
        if ks < 0 or kp < 0:
            raise ValueError(f"cascade rate negative at t={t}")
        return np.sqrt(self.transmission * ks * kp)


@dataclass
class IntegratorConfig:
    method: str = "rk45"           # "rk45" (adaptive) or "rk4" (fixed step)
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    dt: Optional[float] = None     # required for rk4
    save_stride: int = 1
    max_step: Optional[float] = None

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.method == "rk4" and (self.dt is None or self.dt <= 0):
            raise ValueError("rk4 requires a positive dt")
        if self.save_stride < 1:
            raise ValueError("save_stride must be >= 1")


@dataclass
class Trajectory:
    """Time grid, named observable series, and optional saved states."""

    times: np.ndarray
    observables: dict[str, np.ndarray]
    states: Optional[list[np.ndarray]]
    final_state: np.ndarray
    diagnostics: dict[str, float]

    def __post_init__(self):
        if np.any(np.diff(self.times) < 0):
            raise ValueError("trajectory times must be monotone")
        for name, series in self.observables.items():
            if not np.all(np.isfinite(series)):
                raise ValueError(f"observable {name!r} has non-finite values")


# --- superoperator construction (row-major vec convention) -----------------

def _left_right(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a rho b."""
    return np.kron(a, b.T)


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (_left_right(h, eye) - _left_right(eye, h))


def dissipator_superop(c: np.ndarray) -> np.ndarray:
    """Unit-rate Lindblad superoperator 1/2(2 c rho c^dag - {c^dag c, rho})."""
    eye = np.eye(c.shape[0], dtype=complex)
    cdc = c.conj().T @ c
    return _left_right(c, c.conj().T) - 0.5 * (
        _left_right(cdc, eye) + _left_right(eye, cdc)
    )


def cascade_superop(cc: CascadeCoupling) -> np.ndarray:
    """Unit-coefficient cross-term superoperator (phase included)."""
    src, snk = cc.source_op, cc.sink_op
    eye = np.eye(src.shape[0], dtype=complex)
    ph = np.exp(1j * cc.phase)
    term1 = _left_right(src, snk.conj().T) - _left_right(snk.conj().T @ src, eye)
    term2 = _left_right(snk, src.conj().T) - _left_right(eye, src.conj().T @ snk)
    return ph * term1 + np.conj(ph) * term2


# --- direct (readable) generator, used as the reference implementation -----

def rhs(
    H: TimeDependentHamiltonian,
    dissipators: Sequence[Dissipator],
    rho: np.ndarray,
    t: float,
    cascade: Optional[CascadeCoupling] = None,
) -> np.ndarray:
    """drho/dt evaluated directly from operators (matrix in, matrix out)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != H.static_part.shape:
        raise ValueError(f"rho shape {rho.shape} does not match H {H.static_part.shape}")
    h = H.at(t)
    out = -1j * (h @ rho - rho @ h)
    for d in dissipators:
        if d.operator.shape != rho.shape:
            raise ValueError("dissipator dimension mismatch")
        g = d.rate_at(t)
        if g == 0.0:
            continue
        c = d.operator
        cdc = c.conj().T @ c
        out += (g / 2.0) * (2.0 * c @ rho @ c.conj().T - cdc @ rho - rho @ cdc)
    if cascade is not None:
        coef = cascade.coefficient(t)
        if coef != 0.0:
            src, snk = cascade.source_op, cascade.sink_op
            ph = np.exp(1j * cascade.phase)
            sr = src @ rho
            out += coef * (
                ph * (sr @ snk.conj().T - snk.conj().T @ sr)
                + np.conj(ph) * (snk @ rho @ src.conj().T - rho @ src.conj().T @ snk)
            )
    return out


# --- integration ------------------------------------------------------------

def _compiled_rhs(
    H: TimeDependentHamiltonian,
    dissipators: Sequence[Dissipator],
    cascade: Optional[CascadeCoupling],
):
    """Build a fast vectorized right-hand side v -> dv/dt.

    Constant pieces (static H, constant-rate dissipators) collapse into a
    single matrix; every time-dependent coefficient is re-evaluated per
    call.
    """
    d = H.dim
    const = hamiltonian_superop(H.static_part)
    coef_fns: list[Callable[[float], float]] = []
    mats: list[np.ndarray] = []

    for env, op in H.driven_terms:
        coef_fns.append(env)
        mats.append(hamiltonian_superop(op))
    for dis in dissipators:
        if dis.operator.shape != (d, d):
            raise ValueError("dissipator dimension mismatch")
        sup = dissipator_superop(dis.operator)
        if dis.is_constant:
            const = const + float(dis.rate) * sup
        else:
            coef_fns.append(dis.rate_at)
            mats.append(sup)
    if cascade is not None:
        if cascade.source_op.shape != (d, d):
            raise ValueError("cascade dimension mismatch")
        coef_fns.append(cascade.coefficient)
        mats.append(cascade_superop(cascade))

    if not mats:
        def f_const(t, v, _L=const):
            return _L @ v
        return f_const

    K = np.ascontiguousarray(np.stack(mats))

    def f(t, v, _L=const, _K=K, _fns=coef_fns):
        out = _L @ v
        for i, fn in enumerate(_fns):
            c = fn(t)
            if c != 0.0:
                out += c * (_K[i] @ v)
        return out

    return f


def evolve(
    H: TimeDependentHamiltonian,
    dissipators: Sequence[Dissipator],
    rho0: np.ndarray,
    t_span: tuple[float, float],
    cascade: Optional[CascadeCoupling] = None,
    config: Optional[IntegratorConfig] = None,
    observables: Optional[dict[str, np.ndarray]] = None,
    save_states: bool = False,
) -> Trajectory:
    """Integrate the master equation and sample named observables.

    Returns a Trajectory whose ``final_state`` is the density matrix at
    t_span[1] and whose ``diagnostics`` record trace, Hermiticity and
    positivity defects of the final state.
    """
    cfg = config or IntegratorConfig()
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density_matrix(rho0, tol=1e-7)
    d = H.dim
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 shape {rho0.shape} does not match H dim {d}")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (np.isfinite(t0) and np.isfinite(t1)):
        raise ValueError("t_span must be finite")

    observables = observables or {}
    obs_names = list(observables)
    # Tr(rho O) = vec(rho) . vec(O^T)
    obs_vecs = [np.asarray(observables[n], dtype=complex).T.reshape(-1) for n in obs_names]

    f = _compiled_rhs(H, dissipators, cascade)

    times = [t0]
    series: list[list[float]] = [[] for _ in obs_names]
    v0 = rho0.reshape(-1)
    for vals, ov in zip(series, obs_vecs):
        vals.append(float(np.real(v0 @ ov)))
    states = [rho0.copy()] if save_states else None

    counter = [0]

    def on_step(t: float, v: np.ndarray):
        counter[0] += 1
        if counter[0] % cfg.save_stride == 0:
            times.append(t)
            for vals, ov in zip(series, obs_vecs):
                vals.append(float(np.real(v @ ov)))
            if states is not None:
                states.append(v.reshape(d, d).copy())

    if cfg.method == "rk45":
        v_final = integrators.dp45(
            f, t0, t1, v0,
            rtol=cfg.rel_tol, atol=cfg.abs_tol,
            max_step=cfg.max_step, on_step=on_step,
        )
    else:
        v_final = integrators.rk4(f, t0, t1, v0, dt=cfg.dt, on_step=on_step)

    if times[-1] != t1:
        times.append(t1)
        for vals, ov in zip(series, obs_vecs):
            vals.append(float(np.real(v_final @ ov)))
        if states is not None:
            states.append(v_final.reshape(d, d).copy())

    rho_final = v_final.reshape(d, d)
    herm_defect = float(np.max(np.abs(rho_final - rho_final.conj().T)))
    evals = np.linalg.eigvalsh(0.5 * (rho_final + rho_final.conj().T))
    diagnostics = {
        "trace_error": abs(float(np.trace(rho_final).real) - 1.0)
        + abs(float(np.trace(rho_final).imag)),
        "hermiticity_defect": herm_defect,
        "min_eigenvalue": float(evals.min()),
    }

    return Trajectory(
        times=np.asarray(times),
        observables={n: np.asarray(vals) for n, vals in zip(obs_names, series)},
        states=states,
        final_state=rho_final,
        diagnostics=diagnostics,
    )

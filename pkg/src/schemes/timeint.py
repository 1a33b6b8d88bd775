"""Explicit SSPRK(3,3) time integration with CFL-controlled steps."""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import structlog
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.exceptions import NonPhysicalStateError, NumericalError, ZeroWavespeedError

logger = structlog.get_logger(__name__)

RhsFunction = Callable[[NDArray, float], NDArray]
StepHook = Callable[[int, float, NDArray], None]


class TimeLoopConfig(BaseModel):
    """Time loop settings.

    Attributes:
        cfl: CFL number lambda.
        t_end: Final time.
        dt: Fixed step; when set, the CFL rule is bypassed.
        checkpoints: Times the loop must land on exactly.
        max_steps: Safety cap on accepted steps.
    """

    model_config = ConfigDict(frozen=True)

    cfl: float = Field(0.25, gt=0.0)
    t_end: float = Field(..., ge=0.0)
    dt: float | None = Field(None, gt=0.0)
    checkpoints: tuple[float, ...] = ()
    max_steps: int = Field(10_000_000, ge=1)


def ssprk33_step(rhs_fn: RhsFunction, u: NDArray, t: float, dt: float) -> NDArray:
    """One step of the three-stage, third-order SSP Runge-Kutta method (Shu-Osher form)."""
    u1 = u + dt * rhs_fn(u, t)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs_fn(u1, t + dt))
    return u / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs_fn(u2, t + 0.5 * dt))


def cfl_dt(
    speed: float | Sequence[float],
    spacing: float | Sequence[float],
    cfl: float,
    remaining: float | None = None,
) -> float:
    """CFL step lambda dx / s in 1D, lambda / (s_x/dx + s_y/dy) in 2D.

    Args:
        speed: Largest wavespeed, or one per direction.
        spacing: Cell width, or one per direction.
        cfl: CFL number.
        remaining: Time left to the next stop; caps the step.

    Raises:
        ZeroWavespeedError: If all speeds vanish and no cap is given.
    """
    speeds = np.atleast_1d(np.asarray(speed, dtype=np.float64))
    spacings = np.atleast_1d(np.asarray(spacing, dtype=np.float64))
    rate = float(np.sum(speeds / spacings))
    if rate <= 0.0:
        if remaining is None:
            raise ZeroWavespeedError(
                "cannot derive a CFL step from a zero wavespeed",
                details={"speed": speeds.tolist()},
            )
        return remaining
    dt = cfl / rate
    return dt if remaining is None else min(dt, remaining)


@dataclass
class IntegrationResult:
    """Outcome of a time loop.

    Attributes:
        state: Final state.
        t: Final time.
        steps: Accepted steps.
        snapshots: States recorded at the checkpoints, keyed by time.
    """

    state: NDArray
    t: float
    steps: int
    snapshots: dict[float, NDArray] = field(default_factory=dict)


def integrate(
    rhs_fn: RhsFunction,
    state0: NDArray,
    cfg: TimeLoopConfig,
    speed_fn: Callable[[NDArray], float | Sequence[float]] | None = None,
    spacing: float | Sequence[float] = 1.0,
    hooks: Iterable[StepHook] = (),
) -> IntegrationResult:
    """Advance `state0` from t = 0 to cfg.t_end with SSPRK(3,3).

    Steps follow the CFL rule (recomputed from the current state) unless
    cfg.dt is set, and are clipped to land on each checkpoint and on t_end.
    The initial state is always recorded as the snapshot at t = 0.

    Args:
        rhs_fn: Semidiscrete operator L(u, t).
        state0: Initial state; not modified.
        cfg: Time loop settings.
        speed_fn: Wavespeed(s) of a state; required without a fixed dt.
        spacing: Cell width(s) matching speed_fn.
        hooks: Callables run after every accepted step with (step, t, state).

    Raises:
        NonPhysicalStateError: If a state becomes inadmissible or non-finite;
            details carry step and time.
    """
    log = logger.bind(component="timeint", t_end=cfg.t_end, cfl=cfg.cfl)
    hooks = list(hooks)
    stops = sorted({c for c in cfg.checkpoints if 0.0 <= c <= cfg.t_end} | {cfg.t_end})
    u = np.array(state0, copy=True)
    t = 0.0
    step = 0
    snapshots: dict[float, NDArray] = {0.0: u.copy()}

    log.info("integration_started", stops=len(stops))
    for stop in stops:
        while t < stop:
            remaining = stop - t
            try:
                if cfg.dt is not None:
                    dt = min(cfg.dt, remaining)
                elif speed_fn is None:
                    raise ValueError("speed_fn is required without a fixed dt")
                else:
                    dt = cfl_dt(speed_fn(u), spacing, cfg.cfl, remaining)
                u = ssprk33_step(rhs_fn, u, t, dt)
            except NonPhysicalStateError as e:
                log.error("integration_aborted", step=step, t=t, error=e.message)
                raise NonPhysicalStateError(
                    e.message, step=step, time=t, cell=e.cell, details=e.details
                ) from e
            if u.dtype != object and not np.all(np.isfinite(u)):
                raise NonPhysicalStateError("state is not finite", step=step, time=t)
            step += 1
            # the last sliver of a clipped step lands exactly on the stop
            t = stop if dt == remaining else t + dt
            for hook in hooks:
                hook(step, t, u)
            if step >= cfg.max_steps and t < cfg.t_end:
                raise NumericalError(
                    "step limit reached",
                    details={"step": step, "time": t, "max_steps": cfg.max_steps},
                )
        snapshots[stop] = u.copy()
        log.debug("checkpoint_reached", t=stop, steps=step)

    log.info("integration_completed", steps=step, t=t)
    return IntegrationResult(state=u, t=t, steps=step, snapshots=snapshots)

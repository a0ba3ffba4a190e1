"""Dormand-Prince 5(4) integrator that stops where one component crosses zero.

Only what the instanton construction needs: an autonomous system, a
downward zero crossing of a single state component, and the 4th-order
continuous extension for sampling between steps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_STEPS = 100_000

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


class EventNotFound(RuntimeError):
    pass


class StepFailure(RuntimeError):
    pass


@dataclass
class DenseSolution:
    """Accepted steps with their interpolation polynomials.

    ``coeffs[k]`` has shape (n_state, 4): y(t_k + th*h_k) = y_k + coeffs[k] @ [th, th^2, th^3, th^4].
    The final node is the located event.
    """

    t: np.ndarray
    y: np.ndarray
    coeffs: np.ndarray
    n_rejected: int = 0

    @property
    def t_event(self) -> float:
        return float(self.t[-1])

    @property
    def y_event(self) -> np.ndarray:
        return self.y[-1]

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, len(self.coeffs) - 1)
        h = self.t[k + 1] - self.t[k]
        th = (t - self.t[k]) / h
        powers = np.stack([th, th**2, th**3, th**4], axis=-1)
        return self.y[k] + np.einsum("nij,nj->ni", self.coeffs[k], powers)


def _step(f, y, k1, h):
    k = [k1]
    for a in _A[1:]:
        k.append(f(y + h * sum(ai * ki for ai, ki in zip(a, k))))
    y_new = y + h * sum(b * ki for b, ki in zip(_B[:6], k))
    k.append(f(y_new))
    stages = np.array(k)
    return y_new, stages, h * (_E @ stages)


def integrate_to_crossing(f, y0, index, rtol=1e-12, atol=1e-12, t_max=1e3, h0=1e-3) -> DenseSolution:
    """Integrate y' = f(y) from t = 0 until y[index] crosses zero downward.

    A crossing counts only once y[index] has been strictly positive, so a
    start at y[index] = 0 with positive slope is allowed. The crossing is
    bracketed on the interpolant and then refined by Newton iterations on
    genuine Runge-Kutta steps, so the event state carries full step accuracy.
    """
    y = np.asarray(y0, dtype=float)
    k1 = f(y)
    t, h = 0.0, h0
    ts, ys, cs = [0.0], [y.copy()], []
    rejected = 0
    for _ in range(MAX_STEPS):
        if t > t_max:
            raise EventNotFound(f"no zero crossing of component {index} before t={t_max:g}")
        with np.errstate(over="ignore", invalid="ignore"):
            y_new, stages, err = _step(f, y, k1, h)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        with np.errstate(over="ignore", invalid="ignore"):
            norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if not np.isfinite(norm):
            raise StepFailure(f"non-finite state at t={t:g}")
        if norm > 1.0:
            rejected += 1
            h *= max(0.2, 0.9 * norm**-0.2)
            if h < 1e-14 * max(1.0, t):
                raise StepFailure(f"step size underflow at t={t:g}")
            continue
        if y[index] > 0.0 and y_new[index] <= 0.0:
            th = _locate(f, y, k1, h, stages, index)
            y_e, stages_e, _ = _step(f, y, k1, th * h)
            cs.append(th * h * (stages_e.T @ _P))
            ts.append(t + th * h)
            ys.append(y_e)
            return DenseSolution(np.array(ts), np.array(ys), np.array(cs), rejected)
        cs.append(h * (stages.T @ _P))
        t += h
        y, k1 = y_new, stages[6]
        ts.append(t)
        ys.append(y.copy())
        h *= min(10.0, 0.9 * norm**-0.2) if norm > 0 else 10.0
    raise StepFailure(f"exceeded {MAX_STEPS} steps")


def _locate(f, y, k1, h, stages, index) -> float:
    c = h * (stages[:, index] @ _P)
    interp = lambda th: y[index] + th * (c[0] + th * (c[1] + th * (c[2] + th * c[3])))
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if interp(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    th = 0.5 * (lo + hi)
    for _ in range(8):
        y_e, st, _ = _step(f, y, k1, th * h)
        slope = st[6][index]
        if slope == 0.0:
            break
        dth = y_e[index] / (slope * h)
        th -= dth
        if abs(dth) <= 1e-16:
            break
    return th

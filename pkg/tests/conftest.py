import cmath
import math

import numpy as np
import pytest

from emcoherence.geometry import ArrayConfig

LAMBDA = 0.125
N_R = 64
H_R = 3.0


@pytest.fixture
def reference_array():
    return ArrayConfig(N_R, LAMBDA / 2, H_R, LAMBDA)


def ground_x(distance, height=H_R):
    """x_u on broadside for a given BS-UE distance."""
    return math.sqrt(distance ** 2 - height ** 2)


def bisect_lambert_lower(x, lo=-50.0, hi=-1.0, iters=300):
    """Bisection on w e^w = x over [lo, hi]; w e^w is monotone there."""
    f = lambda w: w * math.exp(w) - x
    f_lo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (f_lo > 0):
            lo, f_lo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rk4_position(x0, y0, heading0, speed, turn_rate, tau, steps=4000):
    """Integrate dr/dt = v [sin(h0 + w t), cos(h0 + w t)] with classical RK4."""
    def rhs(t):
        h = heading0 + turn_rate * t
        return speed * math.sin(h), speed * math.cos(h)

    dt = tau / steps
    x, y, t = x0, y0, 0.0
    for _ in range(steps):
        k1 = rhs(t)
        k2 = rhs(t + dt / 2)
        k4 = rhs(t + dt)
        x += dt / 6 * (k1[0] + 4 * k2[0] + k4[0])
        y += dt / 6 * (k1[1] + 4 * k2[1] + k4[1])
        t += dt
    return x, y


def direct_integrand(x0, y0, heading0, speed, turn_rate, tau, n, d, h, lam, far_field=False,
                     polarization=True):
    """Per-realization correlation evaluated from scratch with scalar math.

    Positions come from the arc integral, amplitudes from the three-factor
    formula, steering entries from the Fresnel exponent element by element.
    """
    if turn_rate == 0:
        x1 = x0 + speed * tau * math.sin(heading0)
        y1 = y0 + speed * tau * math.cos(heading0)
    else:
        rho = speed / turn_rate
        # exact arc integral of the heading direction
        x1 = x0 + rho * (math.cos(heading0) - math.cos(heading0 + turn_rate * tau))
        y1 = y0 + rho * (math.sin(heading0 + turn_rate * tau) - math.sin(heading0))
    heading1 = heading0 + turn_rate * tau
    k = 2 * math.pi / lam

    def beta(x, y, hd):
        r2 = x * x + y * y + h * h
        r = math.sqrt(r2)
        phi = math.atan2(y, x)
        return math.sqrt(1 / (4 * math.pi * r2) * (h * h + (x * x + y * y) * math.cos(hd + phi) ** 2) / r2 * x / r)

    def steer(x, y):
        r = math.sqrt(x * x + y * y + h * h)
        psi = y / r
        out = []
        for m in range(n):
            off = (2 * m - n + 1) / 2 * d
            quad = 0.0 if far_field else off * off * (1 - psi * psi) / (2 * r)
            out.append(cmath.exp(-1j * k * (off * psi - quad)))
        return out

    a0, a1 = steer(x0, y0), steer(x1, y1)
    inner = abs(sum(u.conjugate() * v for u, v in zip(a0, a1))) / n
    if not polarization:
        return inner
    b0, b1 = beta(x0, y0, heading0), beta(x1, y1, heading1)
    return min(b0, b1) / max(b0, b1) * inner


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

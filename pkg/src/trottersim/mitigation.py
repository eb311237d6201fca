"""Zero-noise Richardson extrapolation over scaled noise intensities.

A quantity measured at noise intensity lambda admits a Taylor expansion
E(lambda) = E* + sum_k a_k lambda^k around the noiseless value E*.  Measuring
E at several scaled intensities lambda_i = c_i * lambda (c_0 = 1) and solving
the resulting linear system eliminates the first n Taylor coefficients, giving
the order-n estimate E*_n = sum_i gamma_i E(lambda_i) with error O(lambda^(n+1)).

The coefficients gamma_i are computed with a Lagrange product formula rather
than generic elimination, which makes the conditioning of the underlying
Vandermonde system easy to diagnose; poorly separated scale factors emit a
warning.  The study driver scales a qubit's amplitude-damping rate, re-runs
the Trotterized dephasing-plus-damping experiment at each scale factor, fits
the Ramsey time T2* from the simulated tomography curves, and extrapolates the
damping rate to zero, where T2* approaches the pure dephasing time.
"""

from __future__ import annotations

import csv
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .liouvillian import CanonicalRates
from .tomography import generate_tomography, global_fit
from .trotter import TrotterSchedule, run_schedule

_CONDITION_WARN_THRESHOLD = 1e8
_MOMENT_TOL = 1e-8


@dataclass(frozen=True)
class NoisePoint:
    """One measurement at a scaled noise intensity.

    Attributes:
        c: Dimensionless noise scale factor, > 0.  The reference measurement
            has c = 1 and must come first in any sequence fed to extrapolate.
        value: Measured expectation value at this intensity.
        sigma: Optional standard deviation of value, >= 0.
    """

    c: float
    value: float
    sigma: float | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"noise scale factor must be positive, got {self.c}")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")


@dataclass(frozen=True)
class ExtrapolationResult:
    """Order-n Richardson estimate of the zero-noise value.

    Attributes:
        order: Extrapolation order n (0 means no mitigation).
        gammas: Combination coefficients, one per noise point used.
        estimate: Zero-noise estimate sum_i gammas[i] * value_i.
        sigma_est: Propagated standard deviation sqrt(sum gammas^2 sigma^2),
            or None when any input sigma was missing.
    """

    order: int
    gammas: tuple[float, ...]
    estimate: float
    sigma_est: float | None = None

    def __post_init__(self):
        if self.order < 0 or len(self.gammas) != self.order + 1:
            raise ValueError("need exactly order + 1 coefficients")
        total = sum(self.gammas)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"coefficients must sum to 1, got {total}")


def richardson_coeffs(c, n):
    """Solves for the extrapolation coefficients at order n.

    The coefficients satisfy the moment conditions sum_i gamma_i c_i^k =
    delta_{k0} for k = 0..n, so that the linear combination cancels every
    noise term up to order n.  They are evaluated in closed form as
    gamma_i = prod_{j != i} c_j / (c_j - c_i), the Lagrange basis polynomials
    of the c grid evaluated at zero.

    Args:
        c: Sequence of at least n + 1 distinct positive scale factors; only
            the first n + 1 are used.
        n: Extrapolation order, >= 0.

    Returns:
        Array of n + 1 coefficients.

    Raises:
        ValueError: If n is negative, fewer than n + 1 factors are given,
            a factor is not positive, or two factors coincide (the system
            is singular).
    """
    if n < 0:
        raise ValueError(f"order must be nonnegative, got {n}")
    cs = np.asarray(c, dtype=float).ravel()[: n + 1]
    if cs.size != n + 1:
        raise ValueError(f"order {n} needs {n + 1} scale factors, got {cs.size}")
    if np.any(cs <= 0):
        raise ValueError("scale factors must be positive")
    diffs = cs[None, :] - cs[:, None]  # diffs[i, j] = c_j - c_i
    np.fill_diagonal(diffs, 1.0)
    if np.any(diffs == 0):
        raise ValueError("duplicate scale factors make the system singular")
    gammas = np.prod(cs[None, :] / diffs, axis=1) / cs
    condition = np.linalg.cond(np.vander(cs, increasing=True))
    if condition > _CONDITION_WARN_THRESHOLD:
        warnings.warn(
            f"extrapolation system condition estimate {condition:.2e}; "
            "coefficients may amplify noise severely",
            stacklevel=2,
        )
    powers = cs[None, :] ** np.arange(n + 1)[:, None]
    residual = powers @ gammas - np.eye(n + 1)[0]
    if np.abs(residual).max() > _MOMENT_TOL:
        raise ValueError("moment conditions not met; scale factors too ill-conditioned")
    return gammas


def extrapolate(points, n):
    """Combines measured noise points into an order-n zero-noise estimate.

    Args:
        points: Sequence of NoisePoint; the first must have c = 1 and at
            least n + 1 points are required.  Only the first n + 1 are used.
        n: Extrapolation order.

    Returns:
        ExtrapolationResult with the estimate and, when every point used
        carries a sigma, the propagated standard deviation.

    Raises:
        ValueError: If there are fewer than n + 1 points or the first scale
            factor is not 1.
    """
    points = list(points)
    if len(points) < n + 1:
        raise ValueError(f"order {n} needs {n + 1} points, got {len(points)}")
    if abs(points[0].c - 1.0) > 1e-12:
        raise ValueError(f"first noise point must have c = 1, got {points[0].c}")
    used = points[: n + 1]
    gammas = richardson_coeffs([p.c for p in used], n)
    estimate = float(gammas @ [p.value for p in used])
    sigma_est = None
    if all(p.sigma is not None for p in used):
        sigma_est = float(np.sqrt(gammas**2 @ [p.sigma**2 for p in used]))
    return ExtrapolationResult(
        order=n, gammas=tuple(float(g) for g in gammas), estimate=estimate,
        sigma_est=sigma_est,
    )


def scaled_damping_t2(rates, c, tau0=3.56, n_steps=13, order=1, backend="kraus",
                      inverse=False):
    """Measures T2* with the amplitude-damping rate scaled by c.

    Runs the repeated dephasing-plus-damping Trotter sequence (no drive) with
    the base damping rate multiplied by c and the dephasing rate held fixed,
    then fits the simulated tomography curves.  As c goes to zero the fitted
    T2* approaches the pure dephasing time of the base rates, which makes
    this the natural observable for zero-noise extrapolation of damping.

    Args:
        rates: Base canonical rates; omega is ignored (the experiment runs
            without drive).
        c: Damping scale factor.
        tau0: Trotter step duration in microseconds.
        n_steps: Number of Trotter steps.
        order: Trotter order, 1 or 2.
        backend: Elementary-step backend, "kraus" or "dilation".
        inverse: When True, returns the rate 1/T2* instead of T2*, the
            alternative extrapolation variable.

    Returns:
        Fitted T2* in microseconds (or its inverse).
    """
    scaled = CanonicalRates(
        gamma1=c * rates.gamma1, gamma_phi=rates.gamma_phi, omega=0.0
    )
    schedule = TrotterSchedule(order=order, n_steps=n_steps, dt=tau0, backend=backend)
    curves = generate_tomography(
        scaled, tau0, n_steps,
        evolve=lambda rho0: run_schedule(schedule, scaled, rho0),
    )
    t2 = global_fit(curves).t2
    return 1.0 / t2 if inverse else t2


def mitigation_study(base_rates, c_list, extractor=None, n_max=None, workers=1):
    """Runs the scaled-noise experiment and extrapolates at every order.

    Args:
        base_rates: CanonicalRates defining the unscaled (c = 1) experiment.
        c_list: Scale factors, starting with 1.
        extractor: Callable (rates, c) -> measured value; defaults to
            scaled_damping_t2, which scales the damping rate and fits T2*.
        n_max: Highest extrapolation order; defaults to len(c_list) - 1.
        workers: Thread count for running the scale factors concurrently.

    Returns:
        List of ExtrapolationResult for orders 0 through n_max.  Order 0 is
        the unmitigated c = 1 measurement.

    Raises:
        ValueError: If c_list does not start with 1 or n_max needs more
            points than c_list provides.
    """
    cs = [float(x) for x in c_list]
    if not cs or abs(cs[0] - 1.0) > 1e-12:
        raise ValueError("c_list must start with the unscaled factor 1")
    if n_max is None:
        n_max = len(cs) - 1
    if n_max >= len(cs):
        raise ValueError(f"order {n_max} needs {n_max + 1} scale factors")
    if extractor is None:
        extractor = scaled_damping_t2
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda c: extractor(base_rates, c), cs))
    else:
        values = [extractor(base_rates, c) for c in cs]
    points = [NoisePoint(c=c, value=v) for c, v in zip(cs, values)]
    return [extrapolate(points, n) for n in range(n_max + 1)]


def load_noise_points(path):
    """Reads noise points from a CSV file of (c, value[, sigma]) rows.

    A non-numeric first row is treated as a header and skipped; blank lines
    are ignored; a missing or empty third column leaves sigma unset.

    Args:
        path: CSV file path.

    Returns:
        List of NoisePoint in file order.

    Raises:
        ValueError: If a data row has fewer than two columns or a malformed
            number.
    """
    points = []
    with open(path, newline="") as fh:
        for row_number, row in enumerate(csv.reader(fh)):
            cells = [cell.strip() for cell in row]
            if not any(cells):
                continue
            if row_number == 0:
                try:
                    float(cells[0])
                except ValueError:
                    continue  # header row
            if len(cells) < 2:
                raise ValueError(f"row {row_number}: need at least c and value")
            sigma = None
            if len(cells) >= 3 and cells[2]:
                sigma = float(cells[2])
            points.append(NoisePoint(c=float(cells[0]), value=float(cells[1]),
                                     sigma=sigma))
    return points

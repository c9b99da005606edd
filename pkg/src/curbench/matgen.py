"""Test-matrix generators and theoretical bound evaluators.

The structured generator builds matrices of the form
``a = x @ z @ y.T + e`` where z is diagonal with a prescribed spectrum,
x = [x1 x2 x3] and y = [y1 y2 y3] stack an incoherent orthonormal part
([x1 x2], resp. [y1 y3]) with a sparse part (x3, resp. y2) whose columns
have at most ``beta`` nonzeros on disjoint supports, and e is noise
rescaled to an exact spectral norm. The bound evaluators consume the
measured quantities of such an instance and report the predicted
selection error bound together with its success probability.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg_core import as_matrix, coherence

__all__ = [
    "gen_block_example",
    "gen_cross",
    "gen_bivariate",
    "gen_inverse_quadratic",
    "AssumptionSpec",
    "AssumptionInstance",
    "AssumptionReport",
    "gen_assumption_matrix",
    "verify_assumption",
    "TheoryParams",
    "BoundReport",
    "tail_constant_lower",
    "tail_constant_upper",
    "success_probability",
    "perturbed_column_bound",
    "perturbed_cur_bound",
    "iterative_row_bound",
    "exact_recovery_floor",
    "TailCheckReport",
    "uniform_sampling_tail_check",
    "named_generator",
    "GENERATOR_NAMES",
]

POLE_GUARD = 1e-12


def gen_block_example(n):
    """Rank-2 block matrix: unit top-left entry, all-ones trailing block.

    Row 0 and column 0 are decoupled from the rest, so any good column
    subset must include column 0. Needs n >= 3.
    """
    n = int(n)
    if n < 3:
        raise InvalidInput(f"n must be at least 3, got {n}")
    a = np.zeros((n, n))
    a[0, 0] = 1.0
    a[1:, 1:] = 1.0
    return a


def gen_cross(n):
    """Rank-2 cross matrix: ones in row 0 and column 0, zeros elsewhere.

    Every row strip that misses row 0 sees a single nonzero column, so
    column selection from such a strip degenerates. Needs n >= 2.
    """
    n = int(n)
    if n < 2:
        raise InvalidInput(f"n must be at least 2, got {n}")
    a = np.zeros((n, n))
    a[0, :] = 1.0
    a[:, 0] = 1.0
    return a


def gen_bivariate(grid_n, noise_norm=0.0, seed=0):
    """Sample a rank-3 bivariate function on a uniform grid over [0, 1]^2.

    a[i, j] = f(i/(grid_n-1), j/(grid_n-1)) with
    f(x, y) = 5 sin(3x)/(5y - 4) + 2 exp(x/2) cos(10y) + 20y/(4x - 1).

    The function has poles at x = 1/4 and y = 4/5; grids putting a node
    within 1e-12 of either are rejected. With noise_norm > 0 a Gaussian
    matrix rescaled to exactly that spectral norm is added.
    """
    grid_n = int(grid_n)
    if grid_n < 2:
        raise InvalidInput(f"grid_n must be at least 2, got {grid_n}")
    if noise_norm < 0:
        raise InvalidInput(f"noise_norm must be nonnegative, got {noise_norm}")
    t = np.arange(grid_n, dtype=np.float64) / (grid_n - 1)
    if np.min(np.abs(t - 0.25)) < POLE_GUARD or np.min(np.abs(t - 0.8)) < POLE_GUARD:
        raise InvalidInput(
            f"grid_n={grid_n} places a node on a pole (x=1/4 or y=4/5); "
            "choose a grid that avoids them"
        )
    x = t[:, None]
    y = t[None, :]
    a = 5.0 * np.sin(3.0 * x) / (5.0 * y - 4.0)
    a = a + 2.0 * np.exp(x / 2.0) * np.cos(10.0 * y)
    a = a + 20.0 * y / (4.0 * x - 1.0)
    if noise_norm > 0.0:
        rng = np.random.default_rng(seed)
        e = rng.standard_normal((grid_n, grid_n))
        e *= noise_norm / np.linalg.svd(e, compute_uv=False)[0]
        a = a + e
    return a


def gen_inverse_quadratic(n, m=None):
    """a[i, j] = 1 / (i + j^2 + 1) with 1-based indices; decays fast in j."""
    n = int(n)
    m = n if m is None else int(m)
    if n < 1 or m < 1:
        raise InvalidInput(f"dimensions must be positive, got {n}x{m}")
    i = np.arange(1, n + 1, dtype=np.float64)[:, None]
    j = np.arange(1, m + 1, dtype=np.float64)[None, :]
    return 1.0 / (i + j * j + 1.0)


@dataclass(frozen=True)
class AssumptionSpec:
    """Shape and structure parameters for gen_assumption_matrix.

    k1 counts inner directions that are incoherent on both sides,
    k2 those incoherent in x but sparse in y, k3 the reverse. beta caps
    the nonzeros per sparse column. The inner spectrum is log-spaced
    from kappa down to 1 unless given explicitly. With
    orthonormal_sparse the sparse blocks get unit-norm (hence, by the
    disjoint supports, orthonormal) columns.
    """

    n: int
    m: int
    k1: int
    k2: int
    k3: int
    beta: int
    epsilon: float = 0.0
    kappa: float = 10.0
    spectrum: tuple = None
    orthonormal_sparse: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidInput(f"dimensions must be positive, got {self.n}x{self.m}")
        if min(self.k1, self.k2, self.k3) < 0:
            raise InvalidInput("k1, k2, k3 must be nonnegative")
        if self.k < 1 or self.k > min(self.n, self.m):
            raise InvalidInput(f"total rank {self.k} outside [1, min(n, m)]")
        if self.k1 + self.k2 < 1 or self.k1 + self.k3 < 1:
            raise InvalidInput("each side needs at least one incoherent column")
        if self.beta < 1:
            raise InvalidInput(f"beta must be at least 1, got {self.beta}")
        if self.beta * self.k3 > self.n or self.beta * self.k2 > self.m:
            raise InvalidInput("disjoint sparse supports do not fit the dimensions")
        if self.epsilon < 0:
            raise InvalidInput(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.kappa < 1:
            raise InvalidInput(f"kappa must be at least 1, got {self.kappa}")
        if self.spectrum is not None:
            vals = tuple(float(v) for v in self.spectrum)
            if len(vals) != self.k:
                raise InvalidInput(f"spectrum must have length k={self.k}")
            if min(vals) <= 0:
                raise InvalidInput("spectrum values must be positive")
            object.__setattr__(self, "spectrum", vals)

    @property
    def k(self):
        return self.k1 + self.k2 + self.k3

    def spectrum_values(self):
        if self.spectrum is not None:
            return np.asarray(self.spectrum, dtype=np.float64)
        return np.logspace(np.log10(self.kappa), 0.0, self.k)


@dataclass(frozen=True)
class AssumptionInstance:
    """A generated matrix with its factors and measured quantities."""

    spec: AssumptionSpec
    a: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    e: np.ndarray
    mu_x: float
    mu_y: float
    sigma_1: float
    sigma_k: float
    x_pinv_norm: float
    y_pinv_norm: float

    @property
    def x_incoherent(self):
        return self.x[:, : self.spec.k1 + self.spec.k2]

    @property
    def x_sparse(self):
        return self.x[:, self.spec.k1 + self.spec.k2 :]

    @property
    def y_sparse(self):
        return self.y[:, self.spec.k1 : self.spec.k1 + self.spec.k2]

    @property
    def y_incoherent(self):
        s = self.spec
        return np.ascontiguousarray(
            np.hstack([self.y[:, : s.k1], self.y[:, s.k1 + s.k2 :]])
        )


def _orthonormal_gaussian(rng, dim, count):
    if count == 0:
        return np.zeros((dim, 0))
    g = rng.standard_normal((dim, count))
    q, _ = np.linalg.qr(g)
    return np.ascontiguousarray(q)


def _sparse_block(rng, dim, count, beta, normalize):
    block = np.zeros((dim, count))
    if count == 0:
        return block
    support = rng.choice(dim, size=beta * count, replace=False)
    for c in range(count):
        rows = support[c * beta : (c + 1) * beta]
        vals = rng.standard_normal(beta)
        if normalize:
            vals = vals / np.linalg.norm(vals)
        block[rows, c] = vals
    return block


def gen_assumption_matrix(spec):
    """Build an AssumptionInstance for ``spec`` (see AssumptionSpec)."""
    s = spec
    rng = np.random.default_rng(s.seed)
    x12 = _orthonormal_gaussian(rng, s.n, s.k1 + s.k2)
    x3 = _sparse_block(rng, s.n, s.k3, s.beta, s.orthonormal_sparse)
    x = np.ascontiguousarray(np.hstack([x12, x3]))
    y13 = _orthonormal_gaussian(rng, s.m, s.k1 + s.k3)
    y2 = _sparse_block(rng, s.m, s.k2, s.beta, s.orthonormal_sparse)
    y = np.ascontiguousarray(np.hstack([y13[:, : s.k1], y2, y13[:, s.k1 :]]))
    spectrum = s.spectrum_values()
    z = np.diag(spectrum)
    b = (x * spectrum) @ y.T
    if s.epsilon > 0.0:
        e = rng.standard_normal((s.n, s.m))
        e *= s.epsilon / np.linalg.svd(e, compute_uv=False)[0]
    else:
        e = np.zeros((s.n, s.m))
    a = b + e

    # inner singular values via thin QR of the factors: svd(x z y.T)
    # equals svd(r_x z r_y.T) because the q factors are orthonormal
    r_x = np.linalg.qr(x, mode="r")
    r_y = np.linalg.qr(y, mode="r")
    inner = np.linalg.svd((r_x * spectrum) @ r_y.T, compute_uv=False)
    sx = np.linalg.svd(x, compute_uv=False)
    sy = np.linalg.svd(y, compute_uv=False)
    mu_x = coherence(x12) if x12.shape[1] else float("nan")
    mu_y = coherence(y13) if y13.shape[1] else float("nan")
    return AssumptionInstance(
        spec=s, a=a, x=x, y=y, z=z, e=e,
        mu_x=mu_x, mu_y=mu_y,
        sigma_1=float(inner[0]), sigma_k=float(inner[-1]),
        x_pinv_norm=float(1.0 / sx[-1]), y_pinv_norm=float(1.0 / sy[-1]),
    )


@dataclass(frozen=True)
class AssumptionReport:
    """Per-clause verification outcome; checks maps name -> (ok, detail)."""

    checks: dict

    @property
    def passed(self):
        return all(ok for ok, _ in self.checks.values())

    def failing(self):
        return [name for name, (ok, _) in self.checks.items() if not ok]


def _gram_deviation(block):
    if block.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(block.T @ block - np.eye(block.shape[1]))))


def _sparse_ok(block, beta):
    if block.shape[1] == 0:
        return True, 0
    per_col = np.count_nonzero(block, axis=0)
    per_row = np.count_nonzero(block, axis=1)
    disjoint = np.all(per_row <= 1)
    return bool(np.all(per_col <= beta) and disjoint), int(per_col.max())


def verify_assumption(inst, orth_tol=1e-10, noise_rel_tol=1e-10):
    """Check an AssumptionInstance against every structural clause of its spec."""
    s = inst.spec
    checks = {}
    dev = _gram_deviation(inst.x_incoherent)
    checks["x_incoherent_orthonormal"] = (dev <= orth_tol, f"gram deviation {dev:.3e}")
    dev = _gram_deviation(inst.y_incoherent)
    checks["y_incoherent_orthonormal"] = (dev <= orth_tol, f"gram deviation {dev:.3e}")

    ok, worst = _sparse_ok(inst.x_sparse, s.beta)
    checks["x_sparse_support"] = (ok, f"max nonzeros per column {worst} (cap {s.beta})")
    ok, worst = _sparse_ok(inst.y_sparse, s.beta)
    checks["y_sparse_support"] = (ok, f"max nonzeros per column {worst} (cap {s.beta})")

    if s.orthonormal_sparse and s.k3 > 0:
        dev = _gram_deviation(inst.x_sparse)
        checks["x_sparse_orthonormal"] = (dev <= orth_tol, f"gram deviation {dev:.3e}")
    if s.orthonormal_sparse and s.k2 > 0:
        dev = _gram_deviation(inst.y_sparse)
        checks["y_sparse_orthonormal"] = (dev <= orth_tol, f"gram deviation {dev:.3e}")

    checks["inner_rank"] = (
        inst.sigma_k > 0.0,
        f"smallest inner singular value {inst.sigma_k:.3e}",
    )

    e_norm = float(np.linalg.svd(inst.e, compute_uv=False)[0]) if inst.e.size else 0.0
    tol = max(noise_rel_tol * s.epsilon, 1e-300)
    if s.epsilon == 0.0:
        ok = e_norm == 0.0
    else:
        ok = abs(e_norm - s.epsilon) <= tol
    checks["noise_norm"] = (ok, f"measured {e_norm:.6e}, requested {s.epsilon:.6e}")

    spectrum = s.spectrum_values()
    recon = (inst.x * spectrum) @ inst.y.T + inst.e
    dev = float(np.max(np.abs(inst.a - recon)))
    checks["composition"] = (dev <= 1e-12 * max(inst.sigma_1, 1.0), f"max deviation {dev:.3e}")
    return AssumptionReport(checks=checks)


@dataclass(frozen=True)
class TheoryParams:
    """Oversampling and tail parameters for the bound evaluators."""

    alpha: float
    delta: float = 0.8
    delta_prime: float = 1.0
    eta: float = 1.1
    mu: float = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise InvalidInput(f"alpha must be positive, got {self.alpha}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidInput(f"delta must lie in (0, 1), got {self.delta}")
        if self.delta_prime <= 0:
            raise InvalidInput(f"delta_prime must be positive, got {self.delta_prime}")
        if not self.eta > 1.0:
            raise InvalidInput(f"eta must exceed 1, got {self.eta}")


def tail_constant_lower(delta):
    """Per-sample tail constant exp(-d) / (1-d)^(1-d) for the pinv-norm event."""
    if not 0.0 < delta < 1.0:
        raise InvalidInput(f"delta must lie in (0, 1), got {delta}")
    return float(np.exp(-delta) / (1.0 - delta) ** (1.0 - delta))


def tail_constant_upper(delta_prime):
    """Per-sample tail constant exp(d) / (1+d)^(1+d) for the norm event."""
    if delta_prime <= 0.0:
        raise InvalidInput(f"delta_prime must be positive, got {delta_prime}")
    return float(np.exp(delta_prime) / (1.0 + delta_prime) ** (1.0 + delta_prime))


def success_probability(n, m, k, beta, alpha, delta, ell):
    """1 - k (beta ell / n + beta ell / m + c_lo^alpha + c_up^alpha)."""
    c_lo = tail_constant_lower(delta)
    c_up = tail_constant_upper(delta)
    return float(
        1.0 - k * (beta * ell / n + beta * ell / m + c_lo**alpha + c_up**alpha)
    )


def exact_recovery_floor(n, m, k, beta, alpha, ell):
    """Success floor for exact recovery: 1 - (b l k/n + b l k/m + 2 k e^-a).

    This is the limit form of success_probability where both sampled
    submatrices only need to keep full rank.
    """
    return float(
        1.0 - (beta * ell * k / n + beta * ell * k / m + 2.0 * k * np.exp(-alpha))
    )


@dataclass(frozen=True)
class BoundReport:
    """A predicted error bound with the probability it holds."""

    bound: float
    success_probability: float
    delta_a_inv: float
    delta_c_inv: float
    vacuous: bool
    side: str
    details: dict


def _side_bound(dim_sampled, n, m, k, eps, sigma_1, sigma_k, pinv_norm, delta, ell_0, ell_b):
    """Column-selection bound terms; dim_sampled is the axis J draws from."""
    denom = sigma_k - 2.0 * eps * np.sqrt(n * m * k / ((1.0 - delta) * ell_0))
    if denom <= 0.0:
        return float("inf"), float("inf"), float("inf"), True
    delta_a_inv = (
        np.sqrt((1.0 + delta) / (1.0 - delta))
        * sigma_1 * np.sqrt(k * dim_sampled) * pinv_norm / denom
    )
    delta_c_inv = np.sqrt(dim_sampled / ((1.0 - delta) * ell_b))
    da = 1.0 / delta_a_inv
    dc = 1.0 / delta_c_inv
    bound = eps * (1.0 + np.sqrt(2.0) * delta_a_inv * delta_c_inv * np.sqrt(1.0 + da * da + dc * dc))
    return float(bound), float(delta_a_inv), float(delta_c_inv), False


def perturbed_column_bound(inst, tp, ell_0, ell_a, ell_b):
    """Predicted column-selection error bound for an AssumptionInstance.

    Covers selecting ell_a columns by factoring an ell_0 uniform row
    sample and appending ell_b fresh uniform columns. The bound applies
    to the column-projection error and holds with at least the reported
    probability; a nonpositive noise-adjusted smallest inner singular
    value makes it vacuous.
    """
    s = inst.spec
    k = s.k
    if min(ell_0, ell_a, ell_b) < 1:
        raise InvalidInput("ell_0, ell_a and ell_b must be positive")
    bound, dai, dci, vac = _side_bound(
        s.m, s.n, s.m, k, s.epsilon, inst.sigma_1, inst.sigma_k,
        inst.y_pinv_norm, tp.delta, ell_0, ell_b,
    )
    ell = max(ell_0, ell_a, ell_b)
    p = success_probability(s.n, s.m, k, s.beta, tp.alpha, tp.delta, ell)
    return BoundReport(
        bound=bound, success_probability=p, delta_a_inv=dai, delta_c_inv=dci,
        vacuous=vac, side="columns",
        details={"ell_0": ell_0, "ell_a": ell_a, "ell_b": ell_b, "ell": ell},
    )


def perturbed_cur_bound(inst, tp, ell_0, ell_a, ell_b):
    """Predicted CUR error bound: column side plus the transposed row side."""
    col = perturbed_column_bound(inst, tp, ell_0, ell_a, ell_b)
    s = inst.spec
    k = s.k
    bound, dai, dci, vac = _side_bound(
        s.n, s.n, s.m, k, s.epsilon, inst.sigma_1, inst.sigma_k,
        inst.x_pinv_norm, tp.delta, ell_0, ell_b,
    )
    ell = max(ell_0, ell_a, ell_b)
    p_row = success_probability(s.n, s.m, k, s.beta, tp.alpha, tp.delta, ell)
    row = BoundReport(
        bound=bound, success_probability=p_row, delta_a_inv=dai, delta_c_inv=dci,
        vacuous=vac, side="rows",
        details={"ell_0": ell_0, "ell_a": ell_a, "ell_b": ell_b, "ell": ell},
    )
    return BoundReport(
        bound=col.bound + row.bound,
        success_probability=col.success_probability + row.success_probability - 1.0,
        delta_a_inv=max(col.delta_a_inv, row.delta_a_inv),
        delta_c_inv=max(col.delta_c_inv, row.delta_c_inv),
        vacuous=col.vacuous or row.vacuous,
        side="cur",
        details={"columns": col, "rows": row},
    )


def iterative_row_bound(column_report, ell, extent):
    """Row-projection bound after one alternating sweep.

    Multiplies a column bound by sqrt(1 + ell (extent - ell)) where ell
    rows were selected out of ``extent``.
    """
    ell = int(ell)
    extent = int(extent)
    if not 1 <= ell <= extent:
        raise InvalidInput(f"ell must lie in [1, extent] = [1, {extent}], got {ell}")
    factor = np.sqrt(1.0 + ell * (extent - ell))
    return BoundReport(
        bound=float(column_report.bound * factor),
        success_probability=column_report.success_probability,
        delta_a_inv=column_report.delta_a_inv,
        delta_c_inv=column_report.delta_c_inv,
        vacuous=column_report.vacuous,
        side="iterative",
        details={"factor": float(factor), "ell": ell, "extent": extent},
    )


@dataclass(frozen=True)
class TailCheckReport:
    """Empirical tail frequencies for uniform row sampling of an orthonormal x."""

    trials: int
    ell: int
    mu: float
    threshold_pinv: float
    freq_pinv: float
    ceiling_pinv: float
    threshold_norm: float
    freq_norm: float
    ceiling_norm: float

    @property
    def passed(self):
        return self.freq_pinv <= self.ceiling_pinv and self.freq_norm <= self.ceiling_norm


def uniform_sampling_tail_check(x, tp, ell, trials=10000, seed=0):
    """Monte Carlo check of the two sampling tail bounds on a fixed x.

    Draws ``trials`` uniform row subsets of size ``ell`` (without
    replacement) and compares the frequency of
    ||pinv(x[I, :])|| >= sqrt(n / ((1 - delta) ell)) against the ceiling
    k * c_lo(delta)^alpha, and of ||x[I, :]|| >= sqrt((1 + delta') ell / n)
    against k * c_up(delta')^alpha. Requires ell >= alpha k mu with mu
    the measured coherence of x.
    """
    arr = as_matrix(x)
    n, k = arr.shape
    mu = coherence(arr)
    ell = int(ell)
    trials = int(trials)
    if trials < 1:
        raise InvalidInput(f"trials must be positive, got {trials}")
    if ell > n:
        raise InvalidInput(f"ell={ell} exceeds the row count {n}")
    if ell < tp.alpha * k * mu:
        raise InvalidInput(
            f"ell={ell} is below alpha * k * mu = {tp.alpha * k * mu:.2f}"
        )
    thr_pinv = np.sqrt(n / ((1.0 - tp.delta) * ell))
    thr_norm = np.sqrt((1.0 + tp.delta_prime) * ell / n)
    rng = np.random.default_rng(seed)
    hits_pinv = 0
    hits_norm = 0
    for _ in range(trials):
        rows = rng.choice(n, size=ell, replace=False)
        s = np.linalg.svd(arr[rows, :], compute_uv=False)
        inv_norm = np.inf if s[-1] == 0.0 else 1.0 / s[-1]
        if inv_norm >= thr_pinv:
            hits_pinv += 1
        if s[0] >= thr_norm:
            hits_norm += 1
    return TailCheckReport(
        trials=trials, ell=ell, mu=mu,
        threshold_pinv=float(thr_pinv), freq_pinv=hits_pinv / trials,
        ceiling_pinv=float(k * tail_constant_lower(tp.delta) ** tp.alpha),
        threshold_norm=float(thr_norm), freq_norm=hits_norm / trials,
        ceiling_norm=float(k * tail_constant_upper(tp.delta_prime) ** tp.alpha),
    )


GENERATOR_NAMES = ("cross", "block", "bivariate", "inverse-quadratic", "assumption")


def _no_extras(name, params):
    if params:
        raise InvalidInput(
            f"generator {name!r} does not accept: {', '.join(sorted(params))}"
        )


def named_generator(name, **params):
    """Build a matrix by generator name; used by the CLI and experiments."""
    if name == "cross":
        n = params.pop("n", 100)
        _no_extras(name, params)
        return gen_cross(n)
    if name == "block":
        n = params.pop("n", 100)
        _no_extras(name, params)
        return gen_block_example(n)
    if name == "bivariate":
        grid_n = params.pop("grid_n", 200)
        noise_norm = params.pop("noise_norm", 0.0)
        seed = params.pop("seed", 0)
        _no_extras(name, params)
        return gen_bivariate(grid_n, noise_norm=noise_norm, seed=seed)
    if name == "inverse-quadratic":
        n = params.pop("n", 200)
        m = params.pop("m", None)
        _no_extras(name, params)
        return gen_inverse_quadratic(n, m=m)
    if name == "assumption":
        try:
            spec = AssumptionSpec(**params)
        except TypeError as exc:
            raise InvalidInput(f"bad assumption parameters: {exc}") from exc
        return gen_assumption_matrix(spec).a
    raise InvalidInput(
        f"unknown generator {name!r}; expected one of {', '.join(GENERATOR_NAMES)}"
    )

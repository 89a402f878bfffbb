"""Latent process generation via Gaussian subordination.

Each real or imaginary part of a latent component is a transformed
stationary Gaussian driver: white noise, AR(1), or fractional Gaussian
noise (fGn).  Drivers are sampled exactly with circulant embedding, and
the transform is a function with a finite expansion in the probabilists'
Hermite basis.  Components are mixed with a fixed nonsingular matrix to
produce the observed series.

A model lists ``2d`` part specifications: the ``d`` real parts first,
then the ``d`` imaginary parts, one scalar driver per part.  All
randomness flows through
``numpy.random.SeedSequence`` so that draws are reproducible bit for bit
regardless of scheduling.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ConfigError, DimensionError, SingularMatrixError

#: Largest Hermite degree handled by the double-precision recurrence.
MAX_HERMITE_DEGREE = 60
#: Number of Gauss-Hermite nodes used for transform moments and ranks.
QUADRATURE_NODES = 128
#: Hermite coefficients below this are treated as zero in rank detection.
RANK_COEFF_TOL = 1e-9
#: Relative clamped eigenvalue mass above which the sampler warns.
CLAMP_REPORT_TOL = 1e-8


# ---------------------------------------------------------------------------
# Hermite polynomials and quadrature
# ---------------------------------------------------------------------------

def hermite_poly(k: int, x):
    """Probabilists' Hermite polynomial ``H_k`` evaluated at ``x``.

    Uses the three-term recurrence ``H_{k+1}(x) = x H_k(x) - k H_{k-1}(x)``;
    degrees above ``MAX_HERMITE_DEGREE`` are rejected to stay inside the
    range where double precision is trustworthy.
    """
    k = int(k)
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k > MAX_HERMITE_DEGREE:
        raise ValueError(f"degree {k} beyond guard {MAX_HERMITE_DEGREE}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for degree in range(1, k):
        prev, cur = cur, x * cur - degree * prev
    return cur if cur.ndim else float(cur)


_QUAD_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _quadrature(nodes: int = QUADRATURE_NODES):
    """Nodes/weights for standard-normal expectations plus Hermite values.

    Returns ``(points, weights, hvals)`` with ``sum(weights) == 1``,
    ``E[g(X)] ~ weights @ g(points)`` for ``X`` standard normal, and
    ``hvals[k]`` the values of ``H_k`` at the points.
    """
    cached = _QUAD_CACHE.get(nodes)
    if cached is None:
        raw_x, raw_w = np.polynomial.hermite.hermgauss(nodes)
        points = raw_x * np.sqrt(2.0)
        weights = raw_w / np.sqrt(np.pi)
        hvals = np.empty((MAX_HERMITE_DEGREE + 1, nodes))
        hvals[0] = 1.0
        hvals[1] = points
        for k in range(1, MAX_HERMITE_DEGREE):
            hvals[k + 1] = points * hvals[k] - k * hvals[k - 1]
        cached = (points, weights, hvals)
        _QUAD_CACHE[nodes] = cached
    return cached


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Driver:
    """Stationary Gaussian driver with unit marginal variance.

    ``kind`` is one of ``iid``, ``ar1`` (param = coefficient, |phi| < 1) or
    ``fgn`` (param = Hurst index in [0.5, 1)).
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ("iid", "ar1", "fgn"):
            raise ConfigError(f"unknown driver kind {self.kind!r}")
        if self.kind == "ar1" and not abs(self.param) < 1:
            raise ConfigError(f"ar1 coefficient must satisfy |phi| < 1, got {self.param}")
        if self.kind == "fgn" and not (0.5 <= self.param < 1.0):
            raise ConfigError(f"fgn Hurst index must lie in [0.5, 1), got {self.param}")

    def autocov(self, lags) -> np.ndarray:
        lags = np.asarray(lags, dtype=float)
        if self.kind == "iid":
            return (lags == 0).astype(float)
        if self.kind == "ar1":
            return self.param ** np.abs(lags)
        return fgn_autocov(self.param, lags)

    def is_long_range(self) -> bool:
        return self.kind == "fgn" and self.param > 0.5

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "ar1":
            out["phi"] = self.param
        elif self.kind == "fgn":
            out["hurst"] = self.param
        return out

    @staticmethod
    def from_dict(d: dict) -> "Driver":
        kind = d.get("kind")
        if kind == "ar1":
            return Driver("ar1", float(d["phi"]))
        if kind == "fgn":
            return Driver("fgn", float(d["hurst"]))
        if kind == "iid":
            return Driver("iid")
        raise ConfigError(f"unknown driver kind {kind!r}")


@dataclass(frozen=True)
class Transform:
    """Subordinating function, expressed in the Hermite basis.

    ``identity`` maps to ``x``, ``hermite`` to ``H_degree``,
    ``square_centered`` to ``x^2 - 1`` and ``coeffs`` to
    ``sum_k coeffs[k] H_k(x)``.
    """

    kind: str = "identity"
    degree: int = 0
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("identity", "hermite", "square_centered", "coeffs"):
            raise ConfigError(f"unknown transform kind {self.kind!r}")
        if self.kind == "hermite" and not (0 < self.degree <= MAX_HERMITE_DEGREE):
            raise ConfigError(f"hermite degree must lie in [1, {MAX_HERMITE_DEGREE}]")
        if self.kind == "coeffs":
            if not self.coeffs or len(self.coeffs) > MAX_HERMITE_DEGREE + 1:
                raise ConfigError("coefficient list must have 1..61 entries")
            if not np.all(np.isfinite(self.coeffs)):
                raise ConfigError("coefficient list contains non-finite values")

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return x
        if self.kind == "hermite":
            return hermite_poly(self.degree, x)
        if self.kind == "square_centered":
            return x * x - 1.0
        out = np.zeros_like(x)
        for k, a in enumerate(self.coeffs):
            if a != 0.0:
                out = out + a * hermite_poly(k, x)
        return out

    def to_dict(self) -> dict:
        if self.kind == "hermite":
            return {"kind": "hermite", "degree": self.degree}
        if self.kind == "coeffs":
            return {"kind": "coeffs", "coeffs": list(self.coeffs)}
        return {"kind": self.kind}

    @staticmethod
    def from_dict(d: dict) -> "Transform":
        kind = d.get("kind", "identity")
        if kind == "hermite":
            return Transform("hermite", degree=int(d["degree"]))
        if kind == "coeffs":
            return Transform("coeffs", coeffs=tuple(float(c) for c in d["coeffs"]))
        return Transform(kind)


@dataclass(frozen=True)
class LatentComponentSpec:
    """One subordinated scalar process: driver, transform, optional ranks.

    ``declared_ranks`` short-circuits quadrature rank detection when the
    ranks ``(q1, q2)`` of the transform and its centered square are known.
    """

    driver: Driver
    transform: Transform = field(default_factory=Transform)
    declared_ranks: tuple | None = None

    def to_dict(self) -> dict:
        out = {"driver": self.driver.to_dict(), "transform": self.transform.to_dict()}
        if self.declared_ranks is not None:
            out["declared_ranks"] = list(self.declared_ranks)
        return out

    @staticmethod
    def from_dict(d: dict) -> "LatentComponentSpec":
        ranks = d.get("declared_ranks")
        return LatentComponentSpec(
            driver=Driver.from_dict(d["driver"]),
            transform=Transform.from_dict(d.get("transform", {"kind": "identity"})),
            declared_ranks=tuple(int(q) for q in ranks) if ranks is not None else None,
        )


@dataclass(frozen=True)
class ModelSpec:
    """Mixing model: ``x_t = A z_t + location`` with subordinated latents.

    ``components`` lists the ``2d`` part specs, real parts first.  With
    ``normalize`` set, every part is standardized with its quadrature
    mean and variance (each part gets variance 1/2, so each complex
    component has unit variance) and the generated latent block is
    additionally sample-centered when ``centering`` is ``"empirical"``;
    ``"population"`` keeps the raw sampling noise in the mean, which the
    location-error diagnostics need.
    """

    d: int
    components: tuple
    mixing: np.ndarray | None = None
    location: np.ndarray | None = None
    normalize: bool = True
    centering: str = "empirical"

    def __post_init__(self):
        if self.d < 1:
            raise ConfigError("dimension must be at least 1")
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != 2 * self.d:
            raise ConfigError(
                f"need {2 * self.d} part specs (real parts then imaginary), "
                f"got {len(self.components)}")
        if self.centering not in ("empirical", "population"):
            raise ConfigError(f"unknown centering mode {self.centering!r}")
        if self.mixing is not None:
            a = linalg.as_cmatrix(self.mixing, "mixing")
            if a.shape != (self.d, self.d):
                raise ConfigError(f"mixing must be {self.d}x{self.d}, got {a.shape}")
            try:
                linalg.inverse(a)
            except SingularMatrixError as exc:
                raise ConfigError(f"mixing must be nonsingular: {exc}") from exc
            object.__setattr__(self, "mixing", a)
        if self.location is not None:
            loc = np.asarray(self.location, dtype=np.complex128).reshape(-1)
            if loc.shape != (self.d,):
                raise ConfigError(f"location must have length {self.d}")
            object.__setattr__(self, "location", loc)

    def mixing_matrix(self) -> np.ndarray:
        if self.mixing is None:
            return np.eye(self.d, dtype=np.complex128)
        return self.mixing

    def location_vector(self) -> np.ndarray:
        if self.location is None:
            return np.zeros(self.d, dtype=np.complex128)
        return self.location

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "components": [c.to_dict() for c in self.components],
            "normalize": self.normalize,
            "centering": self.centering,
        }
        if self.mixing is not None:
            out["mixing"] = {"re": self.mixing.real.tolist(), "im": self.mixing.imag.tolist()}
        if self.location is not None:
            out["location"] = {"re": self.location.real.tolist(),
                               "im": self.location.imag.tolist()}
        return out

    @staticmethod
    def from_dict(d: dict) -> "ModelSpec":
        try:
            mixing = None
            if d.get("mixing") is not None:
                m = d["mixing"]
                mixing = np.asarray(m["re"], dtype=float) + 1j * np.asarray(m["im"], dtype=float)
            location = None
            if d.get("location") is not None:
                loc = d["location"]
                location = (np.asarray(loc["re"], dtype=float)
                            + 1j * np.asarray(loc["im"], dtype=float))
            return ModelSpec(
                d=int(d["d"]),
                components=tuple(LatentComponentSpec.from_dict(c) for c in d["components"]),
                mixing=mixing,
                location=location,
                normalize=bool(d.get("normalize", True)),
                centering=str(d.get("centering", "empirical")),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"invalid model spec: {exc}") from exc


# ---------------------------------------------------------------------------
# Autocovariances and exact Gaussian sampling
# ---------------------------------------------------------------------------

def fgn_autocov(hurst: float, lags) -> np.ndarray:
    """Autocovariance of unit-variance fGn with the given Hurst index.

    ``r(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2``; decays like
    ``H(2H-1) k^{2H-2}``, which is non-summable for ``H > 1/2``.
    """
    if not (0.5 <= hurst < 1.0):
        raise ConfigError(f"Hurst index must lie in [0.5, 1), got {hurst}")
    k = np.abs(np.asarray(lags, dtype=float))
    h2 = 2.0 * hurst
    out = 0.5 * (np.abs(k + 1) ** h2 - 2.0 * k ** h2 + np.abs(k - 1) ** h2)
    return out if out.ndim else float(out)


def embedding_spectrum(autocov) -> np.ndarray:
    """Eigenvalues of the circulant embedding of a covariance sequence.

    The sequence ``r(0..N-1)`` is wrapped into a circulant of size
    ``2(N-1)`` whose eigenvalues come out of a single FFT; they are real
    for a valid covariance and non-negative when the embedding is exact.
    """
    from . import fourier

    r = np.asarray(autocov, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise DimensionError("need autocovariances at lags 0..N-1 with N >= 2")
    circ = np.concatenate([r, r[-2:0:-1]])
    return fourier.fft(circ).real


def _rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed))


def _draw_from_embedding(sqrt_eigs: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    from . import fourier

    m = sqrt_eigs.size
    half = m // 2
    spectrum = np.empty(m, dtype=np.complex128)
    spectrum[0] = rng.standard_normal()
    spectrum[half] = rng.standard_normal()
    re = rng.standard_normal(half - 1)
    im = rng.standard_normal(half - 1)
    spectrum[1:half] = (re + 1j * im) / np.sqrt(2.0)
    spectrum[half + 1:] = np.conj(spectrum[1:half][::-1])
    sample = fourier.ifft(sqrt_eigs * spectrum) * np.sqrt(m)
    return sample.real[:n].copy()


def sample_stationary_gaussian(autocov, n: int, seed) -> np.ndarray:
    """Exact draw of a stationary Gaussian path via circulant embedding.

    ``autocov`` holds ``r(0..N-1)`` with ``r(0) = 1`` and ``N >= n``; the
    embedding has size ``2(N-1)``, so callers wanting power-of-two FFTs
    should supply ``N = 2^k + 1``.  Negative embedding eigenvalues are
    clamped at zero; when the clamped mass exceeds ``CLAMP_REPORT_TOL``
    relative to the total a ``RuntimeWarning`` reports it.
    """
    r = np.asarray(autocov, dtype=float)
    n = int(n)
    if n < 1:
        raise DimensionError("need n >= 1")
    if r.ndim != 1 or r.size < max(n, 2):
        raise DimensionError(f"need autocovariances at lags 0..N-1 with N >= max(n, 2) = {max(n, 2)}")
    if abs(r[0] - 1.0) > 1e-12:
        raise ValueError(f"autocov must be normalized to r(0) = 1, got {r[0]}")
    eigs = embedding_spectrum(r)
    clamped = -float(eigs[eigs < 0].sum())
    total = float(np.abs(eigs).sum())
    if total > 0 and clamped / total > CLAMP_REPORT_TOL:
        warnings.warn(
            f"circulant embedding clamped relative eigenvalue mass {clamped / total:.3e}",
            RuntimeWarning, stacklevel=2)
    return _draw_from_embedding(np.sqrt(np.clip(eigs, 0.0, None)), n, _rng_from(seed))


_EMBEDDING_CACHE: dict[tuple, np.ndarray] = {}


def _cached_sqrt_eigs(driver: Driver, length: int) -> np.ndarray:
    key = (driver.kind, driver.param, length)
    sq = _EMBEDDING_CACHE.get(key)
    if sq is None:
        r = driver.autocov(np.arange(length + 1))
        eigs = embedding_spectrum(r)
        sq = np.sqrt(np.clip(eigs, 0.0, None))
        _EMBEDDING_CACHE[key] = sq
    return sq


def _sample_driver(driver: Driver, n: int, rng: np.random.Generator) -> np.ndarray:
    if driver.kind == "iid":
        return rng.standard_normal(n)
    length = 1 << max(int(np.ceil(np.log2(max(n - 1, 8)))), 3)
    return _draw_from_embedding(_cached_sqrt_eigs(driver, length), n, rng)


# ---------------------------------------------------------------------------
# Transform moments and Hermite ranks
# ---------------------------------------------------------------------------

def hermite_coefficients(transform: Transform, max_degree: int = MAX_HERMITE_DEGREE) -> np.ndarray:
    """Coefficients ``a_k`` of the transform in the Hermite basis.

    ``a_k = E[f(X) H_k(X)] / k!`` computed with Gauss-Hermite quadrature,
    exact for polynomial transforms well past the guard degree.
    """
    points, weights, hvals = _quadrature()
    fx = transform.apply(points)
    coeffs = np.empty(max_degree + 1)
    factorial = 1.0
    for k in range(max_degree + 1):
        if k > 0:
            factorial *= k
        coeffs[k] = float(weights @ (fx * hvals[k])) / factorial
    return coeffs


def transform_moments(transform: Transform) -> tuple[float, float]:
    """Mean and variance of the transform under a standard Gaussian."""
    points, weights, _ = _quadrature()
    fx = transform.apply(points)
    mean = float(weights @ fx)
    var = float(weights @ (fx - mean) ** 2)
    return mean, var


def hermite_rank(transform: Transform) -> tuple[int, int]:
    """Ranks ``(q1, q2)`` of the transform and of its centered square.

    ``q1`` is the first index ``k >= 1`` with ``|a_k| > RANK_COEFF_TOL``
    for the transform itself, ``q2`` the same for ``(f - E f)^2``.
    Raises ``ValueError`` when no coefficient clears the threshold up to
    the guard degree (rank undeterminable).
    """
    coeffs = hermite_coefficients(transform)
    q1 = _first_nonzero(coeffs)
    points, weights, hvals = _quadrature()
    fx = transform.apply(points)
    centered_sq = (fx - float(weights @ fx)) ** 2
    sq_coeffs = np.empty(MAX_HERMITE_DEGREE + 1)
    factorial = 1.0
    for k in range(MAX_HERMITE_DEGREE + 1):
        if k > 0:
            factorial *= k
        sq_coeffs[k] = float(weights @ (centered_sq * hvals[k])) / factorial
    q2 = _first_nonzero(sq_coeffs)
    return q1, q2


def _first_nonzero(coeffs: np.ndarray) -> int:
    for k in range(1, coeffs.size):
        if abs(coeffs[k]) > RANK_COEFF_TOL:
            return k
    raise ValueError(
        f"all Hermite coefficients up to degree {MAX_HERMITE_DEGREE} fall below "
        f"{RANK_COEFF_TOL}; rank undeterminable")


def component_ranks(spec: LatentComponentSpec) -> tuple[int, int]:
    """Declared ranks when present, else quadrature-detected ones."""
    if spec.declared_ranks is not None:
        q1, q2 = spec.declared_ranks
        return int(q1), int(q2)
    return hermite_rank(spec.transform)


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def generate(model: ModelSpec, length: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``(x, z)``: observed and latent series of the mixing model.

    ``z`` stacks the ``2d`` subordinated parts into ``d`` complex
    components; every part is centered with its quadrature mean, and
    rescaled under ``normalize``.  ``x = z A^T + location`` rowwise.
    Deterministic per seed: every part consumes an independent child of
    the seed sequence, so adding parts or reordering evaluation cannot
    shift other draws.
    """
    t = int(length)
    if t < 16:
        raise DimensionError(f"need at least 16 observations, got {t}")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(2 * model.d)
    parts = np.empty((2 * model.d, t))
    for idx, spec in enumerate(model.components):
        raw = _sample_driver(spec.driver, t, np.random.default_rng(children[idx]))
        mean, var = transform_moments(spec.transform)
        y = spec.transform.apply(raw) - mean
        if model.normalize:
            if var <= 0:
                raise ConfigError("transform has zero variance; cannot normalize")
            y = y / np.sqrt(2.0 * var)
        parts[idx] = y
    z = (parts[:model.d] + 1j * parts[model.d:]).T.copy()
    if model.normalize and model.centering == "empirical":
        z -= z.mean(axis=0)
    x = z @ model.mixing_matrix().T + model.location_vector()
    return x, z


def population_lambdas(model: ModelSpec, tau: int) -> np.ndarray:
    """Population lag-``tau`` autocovariance of each latent component.

    Uses the Hermite-expansion identity
    ``Cov[f(X_s), f(X_t)] = sum_k k! a_k^2 rho^k`` with ``rho`` the driver
    autocovariance, combining the real and imaginary parts with the same
    scaling as :func:`generate`.
    """
    tau = int(tau)
    out = np.empty(model.d)
    for comp in range(model.d):
        total = 0.0
        for idx in (comp, comp + model.d):
            spec = model.components[idx]
            rho = float(spec.driver.autocov(np.array([tau]))[0])
            coeffs = hermite_coefficients(spec.transform)
            ks = np.arange(1, coeffs.size)
            factorials = np.cumprod(ks.astype(float))
            cov = float(np.sum(factorials * coeffs[1:] ** 2 * rho ** ks))
            if model.normalize:
                var = float(np.sum(factorials * coeffs[1:] ** 2))
                total += cov / (2.0 * var)
            else:
                total += cov
        out[comp] = total
    return out


# ---------------------------------------------------------------------------
# Rate regime
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateInfo:
    """Convergence-rate exponent and regime diagnostics for a model.

    ``exponent`` is the power of ``T`` at which the unmixing estimate
    converges: ``1/2`` in the short-range regime, otherwise
    ``-max_i q2_i (2 H_i - 2) / 2 < 1/2`` over the long-range parts.

    Flags (informational, never errors):

    * ``cross_terms_dominated`` - the squared-transform decay strictly
      dominates every cross-product decay and the ``-1`` summability
      floor; when False the slower cross terms may pollute the limit.
    * ``mean_term_compatible`` - the location-estimate contribution does
      not decay slower than the leading term.
    * ``sqrt_log_boundary`` - the exponent sits exactly on the ``-1``
      floor, where the true rate picks up a ``sqrt(log T)`` factor.
    """

    exponent: float
    regime: str
    long_range_indices: tuple = ()
    ranks: tuple = ()
    cross_terms_dominated: bool = True
    mean_term_compatible: bool = True
    sqrt_log_boundary: bool = False


def theoretical_gamma(model: ModelSpec, ranks=None) -> RateInfo:
    """Rate exponent for a model, with regime-assumption diagnostics.

    ``ranks`` optionally supplies ``(q1, q2)`` per part (length ``2d``);
    otherwise declared or quadrature-detected ranks are used.  Only
    long-range parts strictly need ranks: for short-range parts an
    undeterminable rank is recorded as ``None`` instead of failing.
    """
    lr = tuple(i for i, spec in enumerate(model.components) if spec.driver.is_long_range())
    if ranks is None:
        detected = []
        for i, spec in enumerate(model.components):
            try:
                detected.append(component_ranks(spec))
            except ValueError:
                if i in lr:
                    raise
                detected.append(None)
        ranks = tuple(detected)
    ranks = tuple(None if rk is None else (int(rk[0]), int(rk[1])) for rk in ranks)
    if len(ranks) != 2 * model.d:
        raise ConfigError(f"need ranks for all {2 * model.d} parts")
    if any(ranks[i] is None for i in lr):
        raise ConfigError("long-range parts need ranks")
    if not lr:
        return RateInfo(exponent=0.5, regime="short-range", ranks=ranks)

    hurst = {i: model.components[i].driver.param for i in lr}
    q2_terms = {i: ranks[i][1] * (2.0 * hurst[i] - 2.0) for i in lr}
    dominant = max(q2_terms.values())
    gamma = -0.5 * dominant

    cross_terms = [
        ranks[j][0] * (2.0 * hurst[j] - 2.0) + ranks[k][0] * (2.0 * hurst[k] - 2.0)
        for j in lr for k in lr if j != k
    ]
    floor = max(cross_terms, default=-np.inf)
    eps = 1e-12
    dominated = dominant > max(floor, -1.0) + eps
    boundary = abs(dominant + 1.0) <= eps
    mean_ok = all(dominant >= ranks[k][0] * (4.0 * hurst[k] - 4.0) - eps for k in lr)
    return RateInfo(
        exponent=float(gamma),
        regime="long-range",
        long_range_indices=lr,
        ranks=ranks,
        cross_terms_dominated=bool(dominated),
        mean_term_compatible=bool(mean_ok),
        sqrt_log_boundary=bool(boundary),
    )

"""Matrix elements for two exactly solvable bases.

* spiked harmonic oscillator H0 = -d^2/dx^2 + x^2 + A/x^2 on (0, inf),
  perturbed by x^(-alpha);
* Kratzer potential -B/r + A/r^2, perturbed by r^alpha.

All elements come from terminating F2 / 3F2 sums at unit argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .appell import f2_lemma10
from .errors import DomainError, HypergeometricError, ParameterError
from .special_core import gamma, hyp2f1, ln_gamma, pfq, pochhammer

SYMMETRY_TOL = 1e-9


def _check_level(n: int, name: str = "n") -> int:
    if int(n) != n or n < 0:
        raise ParameterError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def _poly_1f1(n: int, b: float) -> np.ndarray:
    """Coefficients (highest degree first) of 1F1(-n; b; z) in z."""
    c = [pochhammer(-n, j) / (pochhammer(b, j) * math.factorial(j)) for j in range(n + 1)]
    return np.array(c[::-1])


# beyond this the Gaussian / exponential factor underflows every polynomial
DECAY_CUTOFF = 1400.0


def _log_scaled(log_mag, poly_fn, live) -> np.ndarray:
    """exp(log_mag) * poly on the live points, zero elsewhere."""
    log_mag = np.atleast_1d(log_mag)
    live = np.atleast_1d(live)
    out = np.zeros_like(log_mag)
    poly = poly_fn(live)
    nz = poly != 0
    idx = np.flatnonzero(live)[nz]
    out[idx] = np.sign(poly[nz]) * np.exp(log_mag[idx] + np.log(np.abs(poly[nz])))
    return out


# ---------------------------------------------------------------------------
# spiked oscillator


@dataclass(frozen=True)
class OscillatorBasis:
    """Gol'dman-Krivchenkov eigenbasis; gamma = 1 + sqrt(1 + 4A)/2."""

    A: float
    gamma: float = field(init=False)

    def __post_init__(self):
        if not self.A >= 0:
            raise DomainError(f"need A >= 0, got {self.A!r}")
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "gamma", 1.0 + 0.5 * math.sqrt(1.0 + 4.0 * self.A))

    @classmethod
    def from_gamma(cls, gamma_: float) -> "OscillatorBasis":
        if gamma_ < 1.5:
            raise DomainError("gamma >= 3/2 is needed for A >= 0")
        # A = ((2(gamma-1))^2 - 1)/4, snapped back so gamma round-trips
        basis = cls(((2.0 * (gamma_ - 1.0)) ** 2 - 1.0) / 4.0)
        object.__setattr__(basis, "gamma", float(gamma_))
        return basis

    def describe(self) -> dict:
        return {"basis": "spiked", "A": self.A, "gamma": self.gamma}


def gk_energy(n: int, basis: OscillatorBasis) -> float:
    return 2.0 * (2 * _check_level(n) + basis.gamma)


def _gk_log_norm(n: int, g: float) -> float:
    lg, _ = ln_gamma(g)
    return 0.5 * (math.log(2.0) + math.log(pochhammer(g, n)) - math.lgamma(n + 1) - lg)


def gk_wavefunction(n: int, basis: OscillatorBasis, x):
    """psi_n(x) = (-1)^n sqrt(2 (g)_n/(n! Gamma(g))) x^(g-1/2) e^(-x^2/2) 1F1(-n; g; x^2)."""
    n = _check_level(n)
    g = basis.gamma
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("wavefunction is defined for x > 0")
    xa = np.atleast_1d(xa)
    live = xa < math.sqrt(2 * DECAY_CUTOFF)
    log_mag = _gk_log_norm(n, g) + (g - 0.5) * np.log(xa) - 0.5 * np.where(live, xa, 0.0) ** 2
    coef = _poly_1f1(n, g)
    out = _log_scaled(log_mag, lambda mask: (-1) ** n * np.polyval(coef, xa[mask] ** 2), live)
    return out if np.ndim(x) else float(out[0])


def spiked_element_integrand(n: int, m: int, basis: OscillatorBasis, alpha: float = 0.0):
    """x -> psi_n(x) psi_m(x) x^-alpha, assembled in log space for quadrature."""
    n, m = _check_level(n), _check_level(m, "m")
    g = basis.gamma
    pn, pm = _poly_1f1(n, g), _poly_1f1(m, g)
    c = _gk_log_norm(n, g) + _gk_log_norm(m, g)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        live = x < math.sqrt(DECAY_CUTOFF)
        xl = np.where(live, x, 0.0)
        log_mag = c + (2 * g - 1 - alpha) * np.log(x) - xl**2

        def poly(mask):
            z = x[mask] ** 2
            return (-1) ** (n + m) * np.polyval(pn, z) * np.polyval(pm, z)

        return _log_scaled(log_mag, poly, live)

    return f


def gk_overlap(n: int, m: int, basis: OscillatorBasis) -> float:
    """<psi_n|psi_m> through F2(g; -n, -m; g, g; 1, 1)."""
    n, m = _check_level(n), _check_level(m, "m")
    g = basis.gamma
    f2 = f2_lemma10(g, n, m, g, g, 1.0, 1.0).value
    norm = math.sqrt(pochhammer(g, n) * pochhammer(g, m) / (math.factorial(n) * math.factorial(m)))
    return (-1) ** (n + m) * norm * f2


def _spiked_oriented(n, m, g, alpha):
    # (alpha/2)_n (g)_n^-1 3F2(-m, g-alpha/2, 1-alpha/2; g, 1-n-alpha/2; 1)
    h = alpha / 2
    f = pfq((-m, g - h, 1 - h), (g, 1 - n - h), 1.0).value
    return pochhammer(h, n) / pochhammer(g, n) * f


def spiked_matrix_element(n: int, m: int, basis: OscillatorBasis, alpha: float) -> float:
    """<psi_m| x^-alpha |psi_n> for 2 gamma > alpha.

    The 3F2 lower parameter 1-n-alpha/2 can hit a nonpositive integer for
    even integer alpha; the (n, m)-exchanged form is used then.
    """
    n, m = _check_level(n), _check_level(m, "m")
    g = basis.gamma
    if not 2 * g > alpha:
        raise DomainError(f"need 2*gamma > alpha, got gamma={g:g}, alpha={alpha:g}")
    # larger index in the lower-parameter slot first: its collisions never bite
    orders = [(max(n, m), min(n, m)), (min(n, m), max(n, m))]
    last = None
    core = None
    for nn, mm in orders:
        try:
            core = _spiked_oriented(nn, mm, g, alpha)
            break
        except HypergeometricError as exc:
            last = exc
    if core is None:
        raise ParameterError(f"both orientations of the 3F2 collide at (n, m) = ({n}, {m}): {last}")
    lg1, s1 = ln_gamma(g - alpha / 2)
    lg2, s2 = ln_gamma(g)
    ratio = s1 * s2 * math.exp(lg1 - lg2)
    norm = math.sqrt(pochhammer(g, n) * pochhammer(g, m) / (math.factorial(n) * math.factorial(m)))
    return (-1) ** (n + m) * ratio * norm * core


# ---------------------------------------------------------------------------
# Kratzer


@dataclass(frozen=True)
class KratzerBasis:
    """Bound states of -B/r + A/r^2 at angular momentum l."""

    A: float
    B: float
    l: int
    s: float = field(init=False)

    def __post_init__(self):
        if not self.A >= 0:
            raise DomainError(f"need A >= 0, got {self.A!r}")
        if not self.B > 0:
            raise DomainError(f"need B > 0, got {self.B!r}")
        _check_level(self.l, "l")
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))
        object.__setattr__(self, "l", int(self.l))
        if self.A == 0.0:
            s = float(self.l)
        else:
            s = -0.5 + 0.5 * math.sqrt(4 * self.A + (2 * self.l + 1) ** 2)
        object.__setattr__(self, "s", s)

    def describe(self) -> dict:
        return {"basis": "kratzer", "A": self.A, "B": self.B, "l": self.l, "s": self.s}


def kratzer_energy(n: int, basis: KratzerBasis) -> float:
    return -basis.B**2 / (4.0 * (_check_level(n) + basis.s + 1) ** 2)


def _kratzer_log_inv_norm_sq(n: int, basis: KratzerBasis) -> float:
    s, B = basis.s, basis.B
    lg, _ = ln_gamma(2 * s + 2)
    return (math.log(2.0) - (2 * s + 3) * math.log(B) + (2 * s + 4) * math.log(s + n + 1)
            + lg + math.lgamma(n + 1) - math.log(pochhammer(2 * s + 2, n)))


def kratzer_normalization(n: int, basis: KratzerBasis) -> float:
    """C with C^-2 = 2 B^(-2s-3) (s+n+1)^(2s+4) Gamma(2s+2) n!/(2s+2)_n."""
    return math.exp(-0.5 * _kratzer_log_inv_norm_sq(_check_level(n), basis))


def kratzer_wavefunction(n: int, basis: KratzerBasis, r):
    """Normalised C r^s e^(-beta r/2) 1F1(-n; 2s+2; beta r), beta = B/(n+s+1)."""
    n = _check_level(n)
    s = basis.s
    beta = basis.B / (n + s + 1)
    ra = np.asarray(r, dtype=float)
    if np.any(ra <= 0):
        raise DomainError("wavefunction is defined for r > 0")
    ra = np.atleast_1d(ra)
    live = 0.5 * beta * ra < DECAY_CUTOFF
    log_mag = -0.5 * _kratzer_log_inv_norm_sq(n, basis) + s * np.log(ra) - 0.5 * beta * np.where(live, ra, 0.0)
    coef = _poly_1f1(n, 2 * s + 2)
    out = _log_scaled(log_mag, lambda mask: np.polyval(coef, beta * ra[mask]), live)
    return out if np.ndim(r) else float(out[0])


def kratzer_element_integrand(n: int, m: int, basis: KratzerBasis, alpha: float = 0.0):
    """r -> psi_n(r) psi_m(r) r^(2+alpha) with the r^2 radial weight included."""
    n, m = _check_level(n), _check_level(m, "m")
    s = basis.s
    bn, bm = basis.B / (n + s + 1), basis.B / (m + s + 1)
    pn, pm = _poly_1f1(n, 2 * s + 2), _poly_1f1(m, 2 * s + 2)
    c = -0.5 * (_kratzer_log_inv_norm_sq(n, basis) + _kratzer_log_inv_norm_sq(m, basis))

    def f(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        live = 0.5 * (bn + bm) * r < DECAY_CUTOFF
        log_mag = c + (2 * s + 2 + alpha) * np.log(r) - 0.5 * (bn + bm) * np.where(live, r, 0.0)

        def poly(mask):
            return np.polyval(pn, bn * r[mask]) * np.polyval(pm, bm * r[mask])

        return _log_scaled(log_mag, poly, live)

    return f


def _kratzer_offdiag(n, m, basis, alpha):
    s, B = basis.s, basis.B
    d = 2 * s + 3 + alpha
    b = 2 * s + 2
    den = 2 * s + n + m + 2
    x = (2 * m + 2 * s + 2) / den
    y = (2 * n + 2 * s + 2) / den
    lam = B / 2 * (1 / (n + s + 1) + 1 / (m + s + 1))
    parts = []
    for k in range(n + 1):
        coef = pochhammer(d, k) * pochhammer(-n, k) / (pochhammer(b, k) * math.factorial(k)) * x**k
        parts.append(coef * hyp2f1(d + k, -m, b, y).value)
    lg, _ = ln_gamma(d)
    log_pref = (lg - d * math.log(lam) - 0.5 * _kratzer_log_inv_norm_sq(n, basis)
                - 0.5 * _kratzer_log_inv_norm_sq(m, basis))
    return math.exp(log_pref) * math.fsum(parts)


def _kratzer_diag(n, basis, alpha):
    s, B = basis.s, basis.B
    f = pfq((-n, 2 * s + 3 + alpha, 2 + alpha), (2 * s + 2, 2 + alpha - n), 1.0).value
    lg1, _ = ln_gamma(2 * s + 3 + alpha)
    lg2, _ = ln_gamma(2 * s + 2)
    pref = 0.5 * B ** (-alpha) * (n + s + 1) ** (alpha - 1) * math.exp(lg1 - lg2)
    return pref * pochhammer(-1 - alpha, n) / math.factorial(n) * f


def kratzer_matrix_element(n: int, m: int, basis: KratzerBasis, alpha: float) -> float:
    """<psi_n| r^alpha |psi_m> with both states normalised.

    Off the diagonal: finite k-sum of terminating 2F1 values.  On the
    diagonal: a single terminating 3F2 at 1, falling back to the k-sum when
    its lower parameter 2+alpha-n is a nonpositive integer.
    """
    n, m = _check_level(n), _check_level(m, "m")
    if not alpha > 0:
        raise DomainError(f"need alpha > 0, got {alpha!r}")
    if n == m:
        try:
            return _kratzer_diag(n, basis, alpha)
        except HypergeometricError:
            pass
    return _kratzer_offdiag(n, m, basis, alpha)


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class MatrixBlock:
    size: int
    entries: np.ndarray
    alpha: float
    basis: dict

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (self.size, self.size):
            raise ValueError("entries must be size x size")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def rows(self):
        for n in range(self.size):
            for m in range(self.size):
                yield n, m, float(self.entries[n, m])


def _element_fn(basis):
    if isinstance(basis, OscillatorBasis):
        return spiked_matrix_element, gk_energy
    if isinstance(basis, KratzerBasis):
        return kratzer_matrix_element, kratzer_energy
    raise TypeError(f"unsupported basis {type(basis).__name__}")


def build_perturbation_matrix(basis, alpha: float, N: int) -> MatrixBlock:
    """N x N block of the perturbation in the chosen basis.

    The upper triangle is computed and mirrored after comparing every
    sampled off-diagonal pair (at most N of them) in both orientations.
    """
    if int(N) != N or N < 1:
        raise ParameterError("N must be a positive integer")
    N = int(N)
    element, _ = _element_fn(basis)
    M = np.empty((N, N))

    def elem(n, m):
        try:
            return element(n, m, basis, alpha)
        except HypergeometricError as exc:
            raise type(exc)(f"element ({n}, {m}): {exc}") from exc

    for n in range(N):
        for m in range(n, N):
            M[n, m] = M[m, n] = elem(n, m)
    pairs = [(n, n + 1 + (n * 7) % (N - n - 1)) for n in range(N - 1) if N - n - 1 > 0]
    for n, m in pairs:
        other = elem(m, n)
        scale = max(abs(other), abs(M[n, m]), 1e-300)
        if abs(other - M[n, m]) > SYMMETRY_TOL * scale and abs(other - M[n, m]) > 1e-14:
            raise ArithmeticError(f"asymmetric element ({n}, {m}): {M[n, m]!r} vs {other!r}")
    return MatrixBlock(N, M, float(alpha), basis.describe())


def unperturbed_energies(basis, N: int) -> np.ndarray:
    _, energy = _element_fn(basis)
    return np.array([energy(n, basis) for n in range(N)])


def variational_eigenvalues(basis, block: MatrixBlock, lam: float) -> np.ndarray:
    """Eigenvalues of diag(E_n) + lam * block (truncated-basis Ritz values)."""
    H = np.diag(unperturbed_energies(basis, block.size)) + lam * block.entries
    return np.linalg.eigvalsh(H)

"""Scalar and vector calculus of the power integrand t^p/p.

Everything here is closed form.  The integrand, its convex conjugate, the
shifted versions, and the relaxed (truncated) versions all have derivatives
of the shape

    psi'(s) = kappa(s)^(p-2) * s,    kappa(s) = clamp(max(r, s), eps_-, eps_+),

with shift r >= 0 and truncation interval (eps_-, eps_+).  The plain
integrand is (r, eps_-, eps_+) = (0, 0, inf), a shifted one has r > 0, a
relaxed one has a finite truncation interval.  All evaluation routines
accept scalars or numpy arrays and broadcast; the shift may vary per entry.
"""

import math
from dataclasses import dataclass

import numpy as np


class SingularWeightError(ValueError):
    """Raised when the diffusion weight degenerates (kappa = 0, p != 2)."""


@dataclass(frozen=True)
class NFunction:
    """Power integrand phi(t) = t^p / p with exponent p > 1."""

    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"exponent must satisfy p > 1, got {self.p}")

    @property
    def p_conj(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def c_uc(self) -> float:
        """Lower uniform-convexity constant of the power integrand."""
        return min(1.0, 1.0 / (self.p - 1.0))

    @property
    def C_uc(self) -> float:
        """Upper uniform-convexity constant of the power integrand."""
        return max(1.0, 1.0 / (self.p - 1.0))


@dataclass(frozen=True)
class RelaxationInterval:
    """Truncation interval (eps_minus, eps_plus) of the relaxed integrand."""

    eps_minus: float
    eps_plus: float

    def __post_init__(self):
        if not (0.0 <= self.eps_minus < self.eps_plus):
            raise ValueError(
                f"need 0 <= eps_minus < eps_plus, got "
                f"({self.eps_minus}, {self.eps_plus})"
            )

    def halve_minus(self) -> "RelaxationInterval":
        return RelaxationInterval(0.5 * self.eps_minus, self.eps_plus)

    def double_plus(self) -> "RelaxationInterval":
        return RelaxationInterval(self.eps_minus, 2.0 * self.eps_plus)


#: No truncation: the relaxed machinery reduces to the plain integrand.
UNRELAXED = RelaxationInterval(0.0, math.inf)


def _check_nonneg(name, value):
    if np.any(np.asarray(value) < 0):
        raise ValueError(f"{name} must be nonnegative")


def _maybe_scalar(out):
    return out if out.ndim else float(out)


def _psi(p, r, eps: RelaxationInterval, t):
    """Antiderivative of kappa(s)^(p-2) s, vanishing at 0.

    Below s_lo = max(r, eps_-) the slope weight is constant, between s_lo and
    eps_+ it is the plain power, above eps_+ it is capped.  If s_lo >= eps_+
    the function is one global quadratic with weight eps_+^(p-2).
    """
    r, t = np.broadcast_arrays(
        np.asarray(r, dtype=float), np.asarray(t, dtype=float)
    )
    e_minus, e_plus = eps.eps_minus, eps.eps_plus
    s_lo = np.maximum(r, e_minus)
    kappa_lo = np.minimum(s_lo, e_plus)
    w_lo = np.where(kappa_lo > 0.0, kappa_lo, 1.0) ** (p - 2.0)
    w_lo = np.where(kappa_lo > 0.0, w_lo, 0.0)

    quad = 0.5 * w_lo * t**2
    val_lo = 0.5 * w_lo * s_lo**2
    mid = val_lo + (np.maximum(t, s_lo) ** p - s_lo**p) / p
    out = np.where(t <= s_lo, quad, mid)
    if math.isfinite(e_plus):
        w_hi = e_plus ** (p - 2.0)
        val_hi = val_lo + (e_plus**p - s_lo**p) / p
        hi = val_hi + 0.5 * w_hi * (t**2 - e_plus**2)
        out = np.where(t > e_plus, hi, out)
        out = np.where(s_lo >= e_plus, quad, out)
    return _maybe_scalar(out)


def _psi_conj(p, r, eps: RelaxationInterval, t):
    """Convex conjugate of ``_psi``, by piecewise inversion of its slope."""
    r, t = np.broadcast_arrays(
        np.asarray(r, dtype=float), np.asarray(t, dtype=float)
    )
    e_minus, e_plus = eps.eps_minus, eps.eps_plus
    p_conj = p / (p - 1.0)
    s_lo = np.maximum(r, e_minus)
    kappa_lo = np.minimum(s_lo, e_plus)
    w_lo = np.where(kappa_lo > 0.0, kappa_lo, 1.0) ** (p - 2.0)
    w_lo = np.where(kappa_lo > 0.0, w_lo, 0.0)

    y_lo = np.where(s_lo > 0.0, s_lo, 1.0) ** (p - 1.0)
    y_lo = np.where(s_lo > 0.0, y_lo, 0.0)
    quad = 0.5 * t**2 / np.where(w_lo > 0.0, w_lo, 1.0)
    quad = np.where(w_lo > 0.0, quad, 0.0)
    mid = np.maximum(t, y_lo) ** p_conj / p_conj - s_lo**p * (0.5 - 1.0 / p)
    out = np.where(t <= y_lo, quad, mid)
    if math.isfinite(e_plus):
        y_hi = e_plus ** (p - 1.0)
        w_hi = e_plus ** (p - 2.0)
        hi = 0.5 * t**2 / w_hi + (e_plus**p - s_lo**p) * (0.5 - 1.0 / p)
        out = np.where(t > y_hi, hi, out)
        out = np.where(s_lo >= e_plus, 0.5 * t**2 / w_hi, out)
    return _maybe_scalar(out)


def phi(nf: NFunction, t):
    """Integrand value t^p / p."""
    _check_nonneg("t", t)
    t = np.asarray(t, dtype=float)
    return _maybe_scalar(t**nf.p / nf.p)


def phi_prime(nf: NFunction, t):
    """Derivative t^(p-1)."""
    _check_nonneg("t", t)
    t = np.asarray(t, dtype=float)
    return _maybe_scalar(t ** (nf.p - 1.0))


def phi_conj(nf: NFunction, t):
    """Convex conjugate t^p' / p' with p' = p/(p-1)."""
    _check_nonneg("t", t)
    t = np.asarray(t, dtype=float)
    pc = nf.p_conj
    return _maybe_scalar(t**pc / pc)


def shifted_phi(nf: NFunction, r, t):
    """Shifted integrand: linear-weight regime below the shift r."""
    _check_nonneg("r", r)
    _check_nonneg("t", t)
    return _psi(nf.p, r, UNRELAXED, t)


def shifted_phi_prime(nf: NFunction, r, t):
    _check_nonneg("r", r)
    _check_nonneg("t", t)
    r, t = np.broadcast_arrays(
        np.asarray(r, dtype=float), np.asarray(t, dtype=float)
    )
    m = np.maximum(t, r)
    out = np.where(m > 0.0, np.where(m > 0.0, m, 1.0) ** (nf.p - 2.0), 0.0) * t
    return _maybe_scalar(out)


def shifted_phi_conj(nf: NFunction, r, t):
    """Convex conjugate of the shifted integrand."""
    _check_nonneg("r", r)
    _check_nonneg("t", t)
    return _psi(nf.p, r, UNRELAXED, t) if False else _psi_conj(nf.p, r, UNRELAXED, t)


def relaxed_weight(nf: NFunction, eps: RelaxationInterval, t):
    """Diffusion weight a_eps(t) = kappa^(p-2), kappa = clamp(t, eps)."""
    _check_nonneg("t", t)
    t = np.asarray(t, dtype=float)
    kappa = np.clip(t, eps.eps_minus, eps.eps_plus)
    if np.any(kappa == 0.0) and nf.p != 2.0:
        raise SingularWeightError(
            "zero weight argument with p != 2; choose eps_minus > 0"
        )
    return _maybe_scalar(kappa ** (nf.p - 2.0))


def relaxed_phi(nf: NFunction, eps: RelaxationInterval, t):
    """Relaxed integrand: quadratic caps outside the truncation interval."""
    _check_nonneg("t", t)
    return _psi(nf.p, 0.0, eps, t)


def relaxed_phi_prime(nf: NFunction, eps: RelaxationInterval, t):
    _check_nonneg("t", t)
    t = np.asarray(t, dtype=float)
    kappa = np.clip(t, eps.eps_minus, eps.eps_plus)
    out = np.where(kappa > 0.0, np.where(kappa > 0.0, kappa, 1.0) ** (nf.p - 2.0), 0.0) * t
    return _maybe_scalar(out)


def relaxed_shifted_phi(nf: NFunction, eps: RelaxationInterval, r, t):
    """Relaxed integrand shifted by r (both truncations stay active)."""
    _check_nonneg("r", r)
    _check_nonneg("t", t)
    return _psi(nf.p, r, eps, t)


def relaxed_shifted_phi_conj(nf: NFunction, eps: RelaxationInterval, r, t):
    """Convex conjugate of the shifted relaxed integrand."""
    _check_nonneg("r", r)
    _check_nonneg("t", t)
    return _psi_conj(nf.p, r, eps, t)


def _vec_weight(weights, Q):
    Q = np.asarray(Q, dtype=float)
    return weights[..., None] * Q if np.ndim(weights) else weights * Q


def _vec_norm(Q):
    Q = np.asarray(Q, dtype=float)
    return np.sqrt(np.sum(Q * Q, axis=-1))


def F_map(nf: NFunction, Q):
    """F(Q) = sqrt(phi'(|Q|)/|Q|) Q = |Q|^((p-2)/2) Q, zero at zero."""
    n = _vec_norm(Q)
    w = np.where(n > 0.0, n, 1.0) ** (0.5 * (nf.p - 2.0))
    return _vec_weight(np.where(n > 0.0, w, 0.0), Q)


def A_map(nf: NFunction, Q):
    """A(Q) = phi'(|Q|)/|Q| Q = |Q|^(p-2) Q, zero at zero."""
    n = _vec_norm(Q)
    w = np.where(n > 0.0, n, 1.0) ** (nf.p - 2.0)
    return _vec_weight(np.where(n > 0.0, w, 0.0), Q)


def relaxed_F_map(nf: NFunction, eps: RelaxationInterval, Q):
    """F-construction for the relaxed integrand: sqrt(a_eps(|Q|)) Q."""
    n = _vec_norm(Q)
    kappa = np.clip(n, eps.eps_minus, eps.eps_plus)
    w = np.where(kappa > 0.0, kappa, 1.0) ** (0.5 * (nf.p - 2.0))
    w = np.where(kappa > 0.0, w, 0.0)
    return _vec_weight(np.where(n > 0.0, w, 0.0), Q)


def relaxed_A_map(nf: NFunction, eps: RelaxationInterval, Q):
    """A-construction for the relaxed integrand: a_eps(|Q|) Q."""
    n = _vec_norm(Q)
    kappa = np.clip(n, eps.eps_minus, eps.eps_plus)
    w = np.where(kappa > 0.0, kappa, 1.0) ** (nf.p - 2.0)
    w = np.where(kappa > 0.0, w, 0.0)
    return _vec_weight(np.where(n > 0.0, w, 0.0), Q)


def Fstar_map(nf: NFunction, eps: RelaxationInterval, Q):
    """Dual construction sqrt((phi_eps^*)'(|Q|)/|Q|) Q, zero at zero.

    (phi_eps^*)' is the inverse of s -> a_eps(s) s, inverted branchwise:
    the truncation interval maps to slopes [eps_-^(p-1), eps_+^(p-1)];
    below and above those, the slope is linear in s.
    """
    n = _vec_norm(Q)
    p = nf.p
    e_minus, e_plus = eps.eps_minus, eps.eps_plus
    y_lo = e_minus ** (p - 1.0) if e_minus > 0.0 else 0.0

    safe_n = np.where(n > 0.0, n, 1.0)
    s = safe_n ** (1.0 / (p - 1.0))
    if y_lo > 0.0:
        s = np.where(n <= y_lo, safe_n * e_minus ** (2.0 - p), s)
    if math.isfinite(e_plus):
        y_hi = e_plus ** (p - 1.0)
        s = np.where(n > y_hi, safe_n * e_plus ** (2.0 - p), s)
    w = np.sqrt(s / safe_n)
    return _vec_weight(np.where(n > 0.0, w, 0.0), Q)

"""Dirichlet-Neumann operator backends and the operators built around it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

from wavecascade.elliptic import DEFAULT_CG_MAXITER, DEFAULT_CG_TOL, DEFAULT_NZ, StripSolver
from wavecascade.errors import InvalidInputError, UnsupportedRegimeError
from wavecascade.spectral import (
    ScalarField,
    VectorField,
    div,
    div_gamma,
    frak_p,
    g0,
    grad,
    grad_gamma,
    inner,
    l2_norm,
    project_zero_mean,
)
from wavecascade.strip import StripGeometry

BackendKind = Literal["elliptic", "shallow1", "shallow2", "small_amplitude"]
MAX_EXPANSION_ORDER = 8


@dataclass(frozen=True)
class DnBackend:
    kind: BackendKind = "elliptic"
    nz: int = DEFAULT_NZ
    cg_tol: float = DEFAULT_CG_TOL
    cg_maxiter: int = DEFAULT_CG_MAXITER
    order: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("elliptic", "shallow1", "shallow2", "small_amplitude"):
            raise InvalidInputError(f"unknown DN backend {self.kind!r}")
        if not (0.0 < self.cg_tol <= 1e-4):
            raise InvalidInputError(f"cg_tol must lie in (0, 1e-4], got {self.cg_tol!r}")
        if self.kind == "small_amplitude" and not (1 <= self.order <= MAX_EXPANSION_ORDER):
            raise UnsupportedRegimeError(
                f"small-amplitude order must lie in [1, {MAX_EXPANSION_ORDER}], got {self.order!r}"
            )

    @classmethod
    def elliptic(cls, nz: int = DEFAULT_NZ, cg_tol: float = DEFAULT_CG_TOL, cg_maxiter: int = DEFAULT_CG_MAXITER) -> "DnBackend":
        return cls("elliptic", nz=nz, cg_tol=cg_tol, cg_maxiter=cg_maxiter)

    @classmethod
    def small_amplitude(cls, order: int, nz: int = DEFAULT_NZ) -> "DnBackend":
        return cls("small_amplitude", nz=nz, order=order)

    def describe(self) -> str:
        if self.kind == "elliptic":
            return f"elliptic(nz={self.nz},cg_tol={self.cg_tol:g},cg_maxiter={self.cg_maxiter})"
        if self.kind == "small_amplitude":
            return f"small_amplitude(order={self.order})"
        return self.kind


def strip_solver(geom: StripGeometry, backend: DnBackend) -> StripSolver:
    return StripSolver(geom, nz=backend.nz, cg_tol=backend.cg_tol, cg_maxiter=backend.cg_maxiter)


def dn_apply(geom: StripGeometry, psi: ScalarField, backend: DnBackend) -> ScalarField:
    """G_{mu,gamma}[eps zeta, beta b] psi with the selected backend."""
    psi = project_zero_mean(psi)
    if backend.kind == "elliptic":
        return strip_solver(geom, backend).dirichlet_neumann(psi)
    if backend.kind == "shallow1":
        return dn_shallow1(geom, psi)
    if backend.kind == "shallow2":
        return dn_shallow2(geom, psi)
    return dn_small_amplitude(geom, psi, backend.order, backend)


# ---------------------------------------------------------------------------
# Shallow-water expansions
# ---------------------------------------------------------------------------


def _require_isotropic(geom: StripGeometry, what: str) -> None:
    if geom.p.gamma != 1.0:
        raise UnsupportedRegimeError(f"{what} is only available for gamma = 1, got {geom.p.gamma!r}")


def t_operator(h: ScalarField, b: ScalarField, v: VectorField) -> VectorField:
    """T[h, b] v = -1/3 grad(h^3 div v) + 1/2 [grad(h^2 grad b.v) - h^2 grad b div v] + h grad b (grad b.v)."""
    div_v = div(v)
    grad_b = grad(b)
    b_v = grad_b.dot(v)
    h2 = h * h
    return (
        grad(h2 * h * div_v) * (-1.0 / 3.0)
        + (grad(h2 * b_v) - grad_b * (h2 * div_v)) * 0.5
        + grad_b * (h * b_v)
    )


def dn_shallow1(geom: StripGeometry, psi: ScalarField) -> ScalarField:
    _require_isotropic(geom, "shallow-water expansion")
    return -geom.p.mu * div(grad(psi) * geom.depth)


def dn_shallow2(geom: StripGeometry, psi: ScalarField) -> ScalarField:
    _require_isotropic(geom, "shallow-water expansion")
    mu = geom.p.mu
    grad_psi = grad(psi)
    correction = div(t_operator(geom.depth, geom.p.beta * geom.b, grad_psi))
    return -mu * div(grad_psi * geom.depth) + (mu * mu) * correction


# ---------------------------------------------------------------------------
# Shape derivative and Z
# ---------------------------------------------------------------------------


def z_operator(geom: StripGeometry, psi: ScalarField, backend: DnBackend) -> ScalarField:
    p = geom.p
    grad_zeta = grad_gamma(geom.zeta, p.gamma)
    numerator = dn_apply(geom, psi, backend) + p.epsilon * p.mu * grad_zeta.dot(grad_gamma(psi, p.gamma))
    return numerator / (1.0 + p.epsilon ** 2 * p.mu * grad_zeta.norm_squared())


def dn_shape_derivative(
    geom: StripGeometry, psi: ScalarField, h: ScalarField, backend: DnBackend
) -> ScalarField:
    p = geom.p
    z = z_operator(geom, psi, backend)
    v = grad_gamma(psi, p.gamma) - grad_gamma(geom.zeta, p.gamma) * (p.epsilon * z)
    return -p.epsilon * dn_apply(geom, h * z, backend) - (p.epsilon * p.mu) * div_gamma(v * h, p.gamma)


# ---------------------------------------------------------------------------
# Small-amplitude expansion
# ---------------------------------------------------------------------------


def _flat_surface_operator(geom: StripGeometry, backend: DnBackend) -> Callable[[ScalarField], ScalarField]:
    """G[0, beta b]: the Fourier multiplier over a flat bottom, an elliptic solve otherwise."""
    if geom.has_flat_bottom:
        return lambda u: g0(project_zero_mean(u), geom.p)
    solver = strip_solver(geom.with_surface(geom.grid.zeros()), backend)
    return solver.dirichlet_neumann


def small_amplitude_terms(
    geom: StripGeometry,
    psi: ScalarField,
    order: int,
    backend: Optional[DnBackend] = None,
) -> list[ScalarField]:
    """Taylor coefficients [G_0 psi, ..., G_order psi] of t -> G[t eps zeta] psi at t = 0.

    The coefficients follow from differentiating the shape-derivative formula
    in t: with Z(t) (1 + t^2 c) = G(t) phi + t eps mu grad zeta . grad phi and
    c = eps^2 mu |grad zeta|^2,

        (k+1) G_{k+1} phi = -eps sum_{a+b=k} G_a(zeta Z_b phi) - eps mu div(zeta V_k phi),
        V_k phi = [k=0] grad phi - eps Z_{k-1} phi grad zeta.
    """
    if not (1 <= order <= MAX_EXPANSION_ORDER):
        raise UnsupportedRegimeError(f"small-amplitude order must lie in [1, {MAX_EXPANSION_ORDER}], got {order!r}")
    if order > 1 and not geom.has_flat_bottom:
        raise UnsupportedRegimeError("small-amplitude expansion beyond order 1 requires a flat bottom")
    backend = backend or DnBackend.elliptic()
    p = geom.p
    eps, mu, gamma = p.epsilon, p.mu, p.gamma
    zeta = geom.zeta
    flat = _flat_surface_operator(geom, backend)
    grad_zeta = grad_gamma(zeta, gamma)
    c = (eps * eps * mu) * grad_zeta.norm_squared()

    def series(phi: ScalarField, m: int) -> list[ScalarField]:
        terms = [flat(phi)]
        if m == 0:
            return terms
        grad_phi = grad_gamma(phi, gamma)
        z_terms: list[ScalarField] = []
        shifted: list[list[ScalarField]] = []
        for k in range(m):
            z_k = terms[k]
            if k == 1:
                z_k = z_k + (eps * mu) * grad_zeta.dot(grad_phi)
            if k >= 2:
                z_k = z_k - c * z_terms[k - 2]
            z_terms.append(z_k)
            shifted.append(series(zeta * z_k, m - 1 - k))
            v_k = grad_zeta * (-eps * z_terms[k - 1]) if k >= 1 else VectorField.zeros(phi.grid)
            if k == 0:
                v_k = v_k + grad_phi
            total = -(eps * mu) * div_gamma(v_k * zeta, gamma)
            for b in range(k + 1):
                total = total - eps * shifted[b][k - b]
            terms.append(total / (k + 1))
        return terms

    return series(project_zero_mean(psi), order)


def dn_small_amplitude(
    geom: StripGeometry,
    psi: ScalarField,
    order: int,
    backend: Optional[DnBackend] = None,
) -> ScalarField:
    terms = small_amplitude_terms(geom, psi, order, backend)
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    return project_zero_mean(total)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def garding_ratio(geom: StripGeometry, u: ScalarField, backend: DnBackend, nu: Optional[float] = None) -> float:
    """<u, (mu nu)^-1 G u> / |P u|_2^2 for zero-mean u."""
    p = geom.p
    nu = p.nu if nu is None else nu
    u = project_zero_mean(u)
    denominator = l2_norm(frak_p(u, p)) ** 2
    if denominator == 0.0:
        raise InvalidInputError("Garding ratio needs a non-constant field")
    return inner(u, dn_apply(geom, u, backend)) / (p.mu * nu) / denominator


def bottom_velocity(geom: StripGeometry, psi: ScalarField, backend: Optional[DnBackend] = None) -> VectorField:
    backend = backend if backend is not None and backend.kind == "elliptic" else DnBackend.elliptic()
    return strip_solver(geom, backend).bottom_velocity(psi)

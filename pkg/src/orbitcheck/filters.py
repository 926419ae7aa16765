"""Centralizer geometry and cheap necessary conditions for the GO property.

The verdict engine certifies single tangent vectors; the filters here
rule entire spaces out before any sampling. They key on where the
bracket of the two isotropy modules lands and on principal stabilizer
dimensions of the isotropy action, both computable by exact basis
sweeps and small rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LieAlgebra, OrbitcheckError, center_basis
from .linalg import gram_orthonormalize, nullspace, rng_for, svd_rank
from .spaces import ReductiveSpace, minimal_ideals, pair_bracket_tensor


class FilterError(OrbitcheckError):
    pass


def centralizer(g: LieAlgebra, basis: np.ndarray, u: np.ndarray,
                rtol: float | None = None) -> np.ndarray:
    """Basis of {z in span(basis): [z, u] = 0}, orthonormal w.r.t. g's gram.

    ``basis`` columns must be orthonormal w.r.t. g's inner product; the
    result is expressed in ambient g coordinates.
    """
    if basis.shape[1] == 0:
        return basis.copy()
    brackets = np.stack([g.bracket(basis[:, a], u)
                         for a in range(basis.shape[1])], axis=1)
    kernel = nullspace(brackets, rtol)
    if kernel.shape[1] == 0:
        return np.zeros((g.dim, 0))
    return gram_orthonormalize(basis @ kernel, g.inner_product)


@dataclass(frozen=True)
class CentralizerSplit:
    """C = centralizer of u in h, N its normalizer in h, and N = C + C~."""

    u: np.ndarray
    c: np.ndarray
    n: np.ndarray
    c_tilde: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.c.shape[1], self.n.shape[1], self.c_tilde.shape[1])


def normalizer_split(space: ReductiveSpace, u: np.ndarray,
                     tol: float = 1e-8) -> CentralizerSplit:
    """Split h along the centralizer of u and its normalizer.

    Verifies the structural identity [C~, C] = 0: the complement of the
    centralizer inside its own normalizer commutes with the centralizer.
    """
    g = space.g
    h_basis = space.h.basis
    gram = g.inner_product
    c = centralizer(g, h_basis, u)
    dc = c.shape[1]
    dh = h_basis.shape[1]
    if dc == dh:
        n = h_basis.copy()
    elif dc == 0:
        n = h_basis.copy()
    else:
        comp = gram_orthonormalize(
            h_basis @ nullspace(c.T @ gram @ h_basis), gram)
        raw = pair_bracket_tensor(g, h_basis, c)
        coords = np.einsum("abk,kc->abc", raw, gram @ comp)
        rows = coords.reshape(dh, -1).T
        kernel = nullspace(rows)
        n = gram_orthonormalize(h_basis @ kernel, gram) \
            if kernel.shape[1] else np.zeros((g.dim, 0))
    if n.shape[1] > dc and dc > 0:
        c_tilde = gram_orthonormalize(n @ nullspace(c.T @ gram @ n), gram)
    elif dc == 0:
        c_tilde = n.copy()
    else:
        c_tilde = np.zeros((g.dim, 0))
    if c_tilde.shape[1] and dc:
        cross = pair_bracket_tensor(g, c_tilde, c)
        worst = float(np.abs(cross).max())
        if worst > tol:
            raise FilterError(
                f"normalizer complement does not commute with the "
                f"centralizer (residual {worst:.2e})")
    return CentralizerSplit(u=u, c=c, n=n, c_tilde=c_tilde)


def bracket_location(space: ReductiveSpace, tol: float = 1e-8) -> str:
    """Where [m1, m2] lands: 'in_m1', 'in_m2', 'mixed', or 'zero'.

    Exact basis sweep over all pairs of module basis vectors; the m
    component of each bracket is resolved against the two modules.
    """
    if len(space.modules) != 2:
        raise FilterError("bracket location needs exactly two modules")
    g = space.g
    gram = g.inner_product
    b1 = space.modules[0].basis
    b2 = space.modules[1].basis
    raw = pair_bracket_tensor(g, b1, b2)
    in1 = float(np.abs(np.einsum("abk,kc->abc", raw, gram @ b1)).max())
    in2 = float(np.abs(np.einsum("abk,kc->abc", raw, gram @ b2)).max())
    if in1 > tol and in2 > tol:
        return "mixed"
    if in2 > tol:
        return "in_m2"
    if in1 > tol:
        return "in_m1"
    return "zero"


def principal_isotropy_dim(action: np.ndarray, seed: int = 0,
                           n_seeds: int = 20) -> int:
    """Generic stabilizer dimension of an action (k generators on R^d).

    Samples unit vectors and minimizes the kernel dimension of the
    stabilizer system; the minimum over draws is the principal value.
    """
    k, d, _ = action.shape
    if k == 0:
        return 0
    if d == 0:
        return k
    best = k
    for i in range(n_seeds):
        rng = rng_for("principal", seed, i)
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        columns = np.einsum("apq,q->pa", action, v)
        best = min(best, k - svd_rank(columns))
        if best == 0:
            break
    return best


def _module_action(space: ReductiveSpace, index: int) -> np.ndarray:
    """ad(h) restricted to module ``index`` in module coordinates."""
    block = space.module_coords_in_m(index)
    return np.einsum("pi,apq,qj->aij", block, space.iso_action, block)


def _subalgebra_action_on_module(space: ReductiveSpace, from_index: int,
                                 to_index: int) -> np.ndarray:
    """Generators of (h + m_from) acting on m_to, in module coordinates."""
    h_part = _module_action(space, to_index)
    bf = space.module_coords_in_m(from_index)
    bt = space.module_coords_in_m(to_index)
    cross = np.einsum("abc,ai,bj,ck->ijk", space.m_bracket_m, bf, bt, bt)
    cross = cross.transpose(0, 2, 1)
    return np.concatenate([h_part, cross], axis=0)


@dataclass(frozen=True)
class FilterRule:
    rule: str
    required: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.actual >= self.required

    def as_dict(self) -> dict:
        return {"rule": self.rule, "required": self.required,
                "actual": self.actual, "passed": self.passed}


@dataclass(frozen=True)
class FilterReport:
    """Outcome of the necessary conditions for the GO property."""

    bracket_location: str
    rules: tuple[FilterRule, ...]
    principal_dims: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rules)

    def as_dict(self) -> dict:
        return {
            "bracket_location": self.bracket_location,
            "passed": self.passed,
            "principal_dims": dict(self.principal_dims),
            "rules": [r.as_dict() for r in self.rules],
        }


def necessary_filter(space: ReductiveSpace, seed: int = 0,
                     n_seeds: int = 20, tol: float = 1e-8) -> FilterReport:
    """Necessary conditions for the GO property on a two-module space.

    With a mixed bracket both modules must have positive-dimensional
    generic stabilizers in h. When [m1, m2] lies in one module, the
    other module needs a positive stabilizer and the enlarged algebra
    h + m_absorbed must act on the big module with generic stabilizer
    at least dim m_absorbed. A vanishing bracket forces g decomposable.
    """
    if len(space.modules) != 2:
        raise FilterError("necessary filter needs exactly two modules")
    location = bracket_location(space, tol)
    d1 = space.modules[0].dim
    d2 = space.modules[1].dim
    chi1 = principal_isotropy_dim(_module_action(space, 0), seed, n_seeds)
    chi2 = principal_isotropy_dim(_module_action(space, 1), seed, n_seeds)
    dims = {"module_1_stabilizer": chi1, "module_2_stabilizer": chi2}
    rules = []
    if location == "mixed":
        rules.append(FilterRule("module_1_stabilizer_positive", 1, chi1))
        rules.append(FilterRule("module_2_stabilizer_positive", 1, chi2))
    elif location in ("in_m1", "in_m2"):
        absorbed, big = (1, 0) if location == "in_m1" else (0, 1)
        small_chi = chi2 if location == "in_m1" else chi1
        rules.append(FilterRule(
            f"module_{absorbed + 1}_stabilizer_positive", 1, small_chi))
        eta = principal_isotropy_dim(
            _subalgebra_action_on_module(space, absorbed, big), seed, n_seeds)
        dims["extended_action_stabilizer"] = eta
        rules.append(FilterRule(
            "extended_action_stabilizer_bound",
            space.modules[absorbed].dim, eta))
    else:
        center = center_basis(space.g).shape[1]
        ideals = len(minimal_ideals(space.g, seed=seed))
        components = center + ideals
        dims["algebra_components"] = components
        rules.append(FilterRule("commuting_modules_need_decomposable_g",
                                2, components))
    return FilterReport(bracket_location=location, rules=tuple(rules),
                        principal_dims=dims)

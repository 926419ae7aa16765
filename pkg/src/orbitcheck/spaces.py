"""Reductive decompositions, isotropy module splitting, and structure labels.

A reductive space is g = h + m with m the orthocomplement of a
subalgebra h against the chosen ad-invariant inner product. The
isotropy decomposition splits m into irreducible ad(h)-modules with the
commutant trick: solve the equivariance constraint on symmetric
operators once, split along the eigenspaces of a random element of that
kernel, then certify irreducibility of each summand by a commutant
rank computation. The structure classifier labels the pair (g, h) by
one of seven coarse cases from the center dimension, the minimal ideals
of g, and how the simple ideals of h project onto them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from fractions import Fraction

from . import exact
from .core import (LieAlgebra, OrbitcheckError, Subspace, ValidationError,
                   EffectivenessError, center_basis)
from .linalg import (column_space, gram_orthonormalize, nullspace, rng_for,
                     subspace_intersection, svd_rank, sym_basis)
from .zoo import Embedding, EmbeddingChain, as_embedding


class DecompositionError(OrbitcheckError):
    pass


class ClassificationError(OrbitcheckError):
    pass


class ExactUnavailableError(OrbitcheckError):
    pass


@dataclass(frozen=True)
class ReductiveSpace:
    """g = h + m with h a subalgebra and m its orthocomplement."""

    g: LieAlgebra
    h: Subspace
    m: Subspace
    name: str = ""
    embedding: Embedding | None = field(default=None, compare=False)
    h_algebra: LieAlgebra | None = field(default=None, compare=False)
    modules: tuple[Subspace, ...] = ()
    isotypic_groups: tuple[tuple[int, ...], ...] = ()
    metric_space_dim: int | None = None
    decomposition_seed: int | None = None

    @property
    def dim_m(self) -> int:
        return self.m.dim

    @property
    def module_dims(self) -> tuple[int, ...]:
        return tuple(mod.dim for mod in self.modules)

    @property
    def two_summand(self) -> bool:
        return len(self.modules) == 2

    @cached_property
    def iso_action(self) -> np.ndarray:
        """ad(h) on m in orthonormal coordinates, shape (dim h, dim m, dim m)."""
        return self._action_tensor(self.h.basis)

    def _action_tensor(self, generators: np.ndarray) -> np.ndarray:
        raw = pair_bracket_tensor(self.g, generators, self.m.basis)
        gm = self.g.inner_product @ self.m.basis
        return np.einsum("abk,kc->acb", raw, gm).transpose(0, 2, 1)

    @cached_property
    def m_bracket_h(self) -> np.ndarray:
        """h-coordinates of [m_i, m_j], shape (dim m, dim m, dim h)."""
        raw = pair_bracket_tensor(self.g, self.m.basis, self.m.basis)
        return np.einsum("abk,kc->abc", raw, self.g.inner_product @ self.h.basis)

    @cached_property
    def m_bracket_m(self) -> np.ndarray:
        """m-coordinates of [m_i, m_j], shape (dim m, dim m, dim m)."""
        raw = pair_bracket_tensor(self.g, self.m.basis, self.m.basis)
        return np.einsum("abk,kc->abc", raw, self.g.inner_product @ self.m.basis)

    def module_coords_in_m(self, index: int) -> np.ndarray:
        """Module basis expressed in m coordinates."""
        mod = self.modules[index]
        return self.m.basis.T @ self.g.inner_product @ mod.basis

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "dim_g": self.g.dim,
            "dim_h": self.h.dim,
            "dim_m": self.m.dim,
            "module_dims": list(self.module_dims),
            "isotypic_groups": [list(gp) for gp in self.isotypic_groups],
            "metric_space_dim": self.metric_space_dim,
        }


def pair_bracket_tensor(g: LieAlgebra, left: np.ndarray,
                        right: np.ndarray) -> np.ndarray:
    """Brackets of basis columns: out[a, b] = [left_a, right_b] in g coords."""
    half = np.einsum("ijk,ia->ajk", g.structure, left)
    return np.einsum("ajk,jb->abk", half, right)


def reductive_space(g: LieAlgebra | None,
                    h_embedding: Embedding | EmbeddingChain | np.ndarray,
                    name: str = "", tol: float = 1e-8) -> ReductiveSpace:
    """Build the orthogonal reductive decomposition for h inside g.

    ``h_embedding`` is an Embedding (or chain) whose target matches g,
    or a raw coordinate matrix whose columns span h. Verifies that h is
    a subalgebra, that [h, m] stays in m, and that h contains no
    nonzero ideal of g (almost-effective action).
    """
    emb = None
    h_alg = None
    if isinstance(h_embedding, (Embedding, EmbeddingChain)):
        emb = as_embedding(h_embedding)
        if g is None:
            g = emb.target
        elif g.dim != emb.target.dim:
            raise ValidationError("embedding target does not match g")
        cols = emb.matrix
        h_alg = emb.source
    else:
        if g is None:
            raise ValidationError("g is required with a raw basis matrix")
        cols = np.asarray(h_embedding, dtype=np.float64)
        if cols.ndim != 2 or cols.shape[0] != g.dim:
            raise ValidationError(f"h basis shape {cols.shape} does not match g")
    h = Subspace.from_columns(g, cols, name="h")
    if h.dim:
        closure = h.closure_residual()
        if closure > tol:
            raise ValidationError(f"h is not a subalgebra (residual {closure:.2e})")
    if h.dim == g.dim:
        raise EffectivenessError("h equals g; the space is a point")
    comp = nullspace(cols.T @ g.inner_product) if h.dim else np.eye(g.dim)
    m = Subspace(ambient=g, basis=gram_orthonormalize(comp, g.inner_product),
                 name="m")
    if h.dim + m.dim != g.dim:
        raise ValidationError("h and m do not span g")
    worst = 0.0
    for a in range(h.dim):
        brackets = g.bracket_matrix(h.basis[:, a], m.basis)
        for j in range(m.dim):
            worst = max(worst, m.distance(brackets[:, j]))
    if worst > tol:
        raise ValidationError(f"[h, m] leaves m (residual {worst:.2e})")
    if h.dim:
        rows = pair_bracket_tensor(g, h.basis, m.basis).reshape(h.dim, -1).T
        kernel = nullspace(rows)
        if kernel.shape[1]:
            raise EffectivenessError(
                f"h contains a {kernel.shape[1]}-dimensional ideal of g "
                "acting trivially on m")
    return ReductiveSpace(g=g, h=h, m=m, name=name, embedding=emb,
                          h_algebra=h_alg)


def _cluster(values: np.ndarray, rel_gap: float = 1e-6) -> list[np.ndarray]:
    """Indices of values grouped by gaps relative to the overall scale."""
    order = np.argsort(values)
    scale = max(float(np.abs(values).max()), 1.0) if values.size else 1.0
    groups: list[list[int]] = []
    for idx in order:
        if groups and values[idx] - values[groups[-1][-1]] <= rel_gap * scale:
            groups[-1].append(int(idx))
        else:
            groups.append([int(idx)])
    return [np.array(gp) for gp in groups]


def _sym_commutant_dim(action: np.ndarray, tol_rel: float = 1e-8) -> int:
    """Dimension of symmetric operators commuting with every action matrix."""
    dh, dm, _ = action.shape
    basis = sym_basis(dm)
    if dh == 0:
        return basis.shape[0]
    lhs = np.einsum("aij,sjk->asik", action, basis)
    rhs = np.einsum("sij,ajk->asik", basis, action)
    mat = np.moveaxis(lhs - rhs, 1, -1).reshape(dh * dm * dm, basis.shape[0])
    return int(basis.shape[0] - svd_rank(mat))


def _equivariant_sym_kernel(action: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ad-invariant symmetric operators, as sym coords."""
    dh, dm, _ = action.shape
    basis = sym_basis(dm)
    ns = basis.shape[0]
    if dh == 0:
        return np.eye(ns)
    lhs = np.einsum("aij,sjk->asik", action, basis)
    rhs = np.einsum("sij,ajk->asik", basis, action)
    mat = np.moveaxis(lhs - rhs, 1, -1).reshape(dh * dm * dm, ns)
    return nullspace(mat)


def decompose_isotropy(space: ReductiveSpace, seed: int = 0,
                       tol: float = 1e-8) -> ReductiveSpace:
    """Split m into irreducible ad(h)-modules; returns an updated space.

    A random invariant symmetric operator is drawn from the equivariance
    kernel; m splits along its eigenvalue clusters (relative gap 1e-6).
    Each summand is certified irreducible by a 1-dimensional symmetric
    commutant; isomorphic summands are grouped by nonzero equivariant
    cross maps. Degenerate draws retry with derived seeds, then fail.
    """
    action = space.iso_action
    dm = space.m.dim
    if dm == 0:
        return replace(space, modules=(), isotypic_groups=(),
                       metric_space_dim=0, decomposition_seed=seed)
    kernel = _equivariant_sym_kernel(action)
    metric_dim = kernel.shape[1]
    basis = sym_basis(dm)
    last_error = None
    for attempt in range(3):
        rng = rng_for("decompose", space.name, seed, attempt)
        raw = rng.standard_normal((dm, dm))
        raw = (raw + raw.T) / 2
        raw_coords = np.einsum("sij,ij->s", basis, raw)
        coeffs = kernel.T @ raw_coords
        op = np.einsum("s,sij->ij", kernel @ coeffs, basis)
        eigvals, eigvecs = np.linalg.eigh(op)
        clusters = _cluster(eigvals)
        ok = True
        mods = []
        for cl in clusters:
            block = eigvecs[:, cl]
            inv_res = _invariance_residual(action, block)
            if inv_res > tol:
                ok = False
                break
            sub_action = np.einsum("pi,apq,qj->aij", block, action, block)
            if _sym_commutant_dim(sub_action) != 1:
                ok = False
                break
            mods.append((float(np.mean(eigvals[cl])), block, sub_action))
        if not ok:
            last_error = f"attempt {attempt}: degenerate eigenvalue split"
            continue
        mods.sort(key=lambda t: (t[1].shape[1], t[0]))
        groups = _isotypic_groups([sa for _, _, sa in mods])
        modules = tuple(
            Subspace(ambient=space.g, basis=space.m.basis @ block,
                     name=f"m{i + 1}")
            for i, (_, block, _) in enumerate(mods))
        return replace(space, modules=modules,
                       isotypic_groups=tuple(groups),
                       metric_space_dim=metric_dim,
                       decomposition_seed=seed)
    raise DecompositionError(
        f"isotropy decomposition failed after 3 attempts ({last_error})")


def _invariance_residual(action: np.ndarray, block: np.ndarray) -> float:
    if action.shape[0] == 0:
        return 0.0
    image = np.einsum("apq,qj->apj", action, block)
    inside = np.einsum("pi,apj->aij", block, image)
    recon = np.einsum("pi,aij->apj", block, inside)
    return float(np.abs(image - recon).max())


def _isotypic_groups(sub_actions: list[np.ndarray]) -> list[tuple[int, ...]]:
    r = len(sub_actions)
    parent = list(range(r))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(r):
        for j in range(i + 1, r):
            ai, aj = sub_actions[i], sub_actions[j]
            di, dj = ai.shape[1], aj.shape[1]
            if di != dj:
                continue
            if ai.shape[0] == 0:
                hom_dim = di * dj
            else:
                mat = np.kron(np.eye(dj), np.eye(di))
                rows = []
                for a in range(ai.shape[0]):
                    rows.append(np.kron(aj[a], np.eye(di)) -
                                np.kron(np.eye(dj), ai[a].T))
                hom_dim = nullspace(np.vstack(rows)).shape[1]
            if hom_dim > 0:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pj] = pi
    groups: dict[int, list[int]] = {}
    for i in range(r):
        groups.setdefault(find(i), []).append(i)
    return [tuple(v) for _, v in sorted(groups.items())]


# --- minimal ideals and the structure classifier -----------------------

def minimal_ideals(alg: LieAlgebra, seed: int = 0,
                   tol: float = 1e-8) -> list[np.ndarray]:
    """Orthonormal bases of the minimal ideals of the derived algebra.

    Splits along eigenspaces of (ad X)^2 for random X, merges blocks
    connected by nonzero brackets, completes each block with its part of
    the kernel, and intersects the partitions of two independent draws.
    The result is verified to consist of ideals spanning the derived
    algebra; minimality holds for generic draws and is deterministic
    under the seed.
    """
    n = alg.dim
    if n == 0:
        return []
    center = center_basis(alg)
    if center.shape[1] == n:
        return []
    gram = alg.inner_product
    if center.shape[1] == 0:
        s_basis = gram_orthonormalize(np.eye(n), gram)
    else:
        s_basis = gram_orthonormalize(nullspace(center.T @ gram), gram)
    for attempt in range(3):
        rng = rng_for("ideals", alg.name, seed, attempt)
        try:
            parts1 = _ideal_split_once(alg, s_basis, rng)
            parts2 = _ideal_split_once(alg, s_basis, rng)
            parts = _common_refinement(alg, parts1, parts2)
            _verify_ideals(alg, parts, s_basis, tol)
            parts.sort(key=lambda b: (b.shape[1], _first_coord_key(b)))
            return parts
        except DecompositionError:
            continue
    raise DecompositionError(f"minimal ideal split failed for {alg.name}")


def _first_coord_key(basis: np.ndarray) -> tuple:
    weights = np.abs(basis).sum(axis=1)
    return tuple(np.round(-weights, 9))


def _ideal_split_once(alg: LieAlgebra, s_basis: np.ndarray,
                      rng: np.random.Generator) -> list[np.ndarray]:
    gram = alg.inner_product
    ds = s_basis.shape[1]
    x = s_basis @ rng.standard_normal(ds)
    sq = np.empty((ds, ds))
    for j in range(ds):
        v = alg.bracket(x, alg.bracket(x, s_basis[:, j]))
        sq[:, j] = s_basis.T @ gram @ v
    sq = (sq + sq.T) / 2
    eigvals, eigvecs = np.linalg.eigh(sq)
    scale = max(float(np.abs(eigvals).max()), 1.0)
    kernel_idx = np.abs(eigvals) <= 1e-9 * scale
    clusters = [c for c in _cluster(eigvals) if not kernel_idx[c[0]]]
    kernel = s_basis @ eigvecs[:, kernel_idx]
    blocks = [s_basis @ eigvecs[:, c] for c in clusters]
    if not blocks:
        raise DecompositionError("no nonzero eigenvalue blocks")
    merged = _merge_connected(alg, blocks)
    completed = []
    used_kernel_dims = 0
    for block in merged:
        cart = _kernel_part(alg, block, kernel, gram)
        used_kernel_dims += cart.shape[1]
        basis = np.hstack([block, cart]) if cart.shape[1] else block
        completed.append(gram_orthonormalize(basis, gram))
    completed = _merge_connected(alg, completed)
    total = sum(b.shape[1] for b in completed)
    if used_kernel_dims != kernel.shape[1] or total != ds:
        raise DecompositionError("kernel completion did not account for the "
                                 "whole derived algebra")
    return completed


def _merge_connected(alg: LieAlgebra, blocks: list[np.ndarray],
                     tol: float = 1e-8) -> list[np.ndarray]:
    r = len(blocks)
    parent = list(range(r))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(r):
        for j in range(i + 1, r):
            raw = pair_bracket_tensor(alg, blocks[i], blocks[j])
            if float(np.abs(raw).max()) > tol:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pj] = pi
    groups: dict[int, list[int]] = {}
    for i in range(r):
        groups.setdefault(find(i), []).append(i)
    return [np.hstack([blocks[i] for i in idxs])
            for _, idxs in sorted(groups.items())]


def _kernel_part(alg: LieAlgebra, block: np.ndarray, kernel: np.ndarray,
                 gram: np.ndarray) -> np.ndarray:
    if kernel.shape[1] == 0:
        return np.zeros((alg.dim, 0))
    raw = pair_bracket_tensor(alg, block, block).reshape(-1, alg.dim).T
    coords = kernel.T @ gram @ raw
    span = column_space(coords)
    return kernel @ span


def _common_refinement(alg: LieAlgebra, parts1: list[np.ndarray],
                       parts2: list[np.ndarray]) -> list[np.ndarray]:
    refined = []
    for b1 in parts1:
        for b2 in parts2:
            inter = subspace_intersection(b1, b2)
            if inter.shape[1]:
                refined.append(gram_orthonormalize(inter, alg.inner_product))
    total = sum(b.shape[1] for b in refined)
    if total != sum(b.shape[1] for b in parts1):
        raise DecompositionError("draws produced incompatible partitions")
    return refined


def _verify_ideals(alg: LieAlgebra, parts: list[np.ndarray],
                   s_basis: np.ndarray, tol: float) -> None:
    gram = alg.inner_product
    for basis in parts:
        raw = pair_bracket_tensor(alg, np.eye(alg.dim), basis)
        flat = raw.reshape(-1, alg.dim)
        recon = (flat @ gram @ basis) @ np.linalg.solve(
            basis.T @ gram @ basis, basis.T)
        if float(np.abs(flat - recon).max()) > tol * 10:
            raise DecompositionError("candidate block is not an ideal")
    total = sum(b.shape[1] for b in parts)
    if total != s_basis.shape[1]:
        raise DecompositionError("ideals do not span the derived algebra")


@dataclass(frozen=True)
class StructureReport:
    """Coarse label for the pair (g, h) with the counters that drove it."""

    case_label: int
    center_dim: int
    ideal_dims: tuple[int, ...]
    proj_dims: tuple[int, ...]
    deficient: tuple[bool, ...]
    h_center_dim: int
    h_ideal_dims: tuple[int, ...]
    hit_matrix: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]
    counting_value: int

    @property
    def deficient_count(self) -> int:
        return sum(self.deficient)

    def as_dict(self) -> dict:
        return {
            "case": self.case_label,
            "center_dim": self.center_dim,
            "ideal_dims": list(self.ideal_dims),
            "proj_dims": list(self.proj_dims),
            "deficient": [bool(b) for b in self.deficient],
            "h_center_dim": self.h_center_dim,
            "h_ideal_dims": list(self.h_ideal_dims),
            "hit_matrix": [list(r) for r in self.hit_matrix],
            "v": list(self.v),
            "counting_value": self.counting_value,
        }


def _subalgebra_algebra(g: LieAlgebra, basis: np.ndarray,
                        name: str) -> LieAlgebra:
    """Abstract algebra carried by an orthonormal subalgebra basis."""
    d = basis.shape[1]
    raw = pair_bracket_tensor(g, basis, basis)
    structure = np.einsum("abk,kc->abc", raw, g.inner_product @ basis)
    return LieAlgebra(structure=structure, inner_product=np.eye(d), name=name)


def classify_structure(g: LieAlgebra | ReductiveSpace,
                       h_embedding=None, seed: int = 0,
                       tol: float = 1e-8) -> StructureReport:
    """Label (g, h) by the seven-case coarse structure decision tree.

    The tree keys on the center dimension of g, then on how the simple
    ideals of h project onto the minimal ideals of g: a simple h-ideal
    hitting three g-ideals is the triple-diagonal case (1); two h-ideals
    hitting two each is (2); one hitting two routes to (3) or (4) by
    whether it touches a deficiently covered ideal; with no diagonal
    h-ideals the count of deficiently covered ideals decides (2) or (7).
    Center dimension 2 is the flat case (5); center dimension 1 routes
    to (6) or (4) by whether h sits inside the derived algebra.
    """
    if isinstance(g, ReductiveSpace):
        space = g
    else:
        space = reductive_space(g, h_embedding, tol=tol)
    g = space.g
    h_basis = space.h.basis
    gram = g.inner_product
    eigs = np.linalg.eigvalsh(-g.killing_form)
    scale = max(float(np.abs(eigs).max()), 1.0)
    if eigs.min() < -1e-8 * scale:
        raise ClassificationError("g is not compact (Killing form sign)")
    center = center_basis(g)
    cg = center.shape[1]
    ideals = minimal_ideals(g, seed=seed, tol=tol)
    ideal_dims = tuple(b.shape[1] for b in ideals)
    proj_dims = tuple(int(svd_rank(b.T @ gram @ h_basis)) if space.h.dim else 0
                      for b in ideals)
    deficient = tuple(pd < b.shape[1] for pd, b in zip(proj_dims, ideals))
    if space.h.dim:
        h_alg = _subalgebra_algebra(g, h_basis, "h")
        h_center = center_basis(h_alg)
        l_dim = h_center.shape[1]
        h_ideals = minimal_ideals(h_alg, seed=seed, tol=tol)
    else:
        l_dim = 0
        h_ideals = []
    h_ideal_dims = [b.shape[1] for b in h_ideals]
    hit = []
    for hb in h_ideals:
        h_cols = h_basis @ hb
        row = []
        for b in ideals:
            r = int(svd_rank(b.T @ gram @ h_cols))
            if r not in (0, hb.shape[1]):
                raise ClassificationError(
                    f"simple h-ideal projects with rank {r}, expected 0 or "
                    f"{hb.shape[1]}")
            row.append(1 if r else 0)
        hit.append(tuple(row))
    order = sorted(range(len(h_ideals)),
                   key=lambda i: (-sum(hit[i]), -h_ideal_dims[i]))
    hit = [hit[i] for i in order]
    h_ideal_dims = [h_ideal_dims[i] for i in order]
    v = [sum(row) for row in hit]
    p = sum(deficient)
    counting = p + (cg - l_dim) + sum(vi - 1 for vi in v)

    def report(case):
        return StructureReport(case_label=case, center_dim=cg,
                               ideal_dims=ideal_dims, proj_dims=proj_dims,
                               deficient=deficient, h_center_dim=l_dim,
                               h_ideal_dims=tuple(h_ideal_dims),
                               hit_matrix=tuple(hit), v=tuple(v),
                               counting_value=counting)

    if cg > 2:
        raise ClassificationError(f"center dimension {cg} exceeds 2")
    if cg == 2:
        if ideals or space.h.dim:
            raise ClassificationError("center dimension 2 requires g flat "
                                      "and h trivial")
        return report(5)
    if cg == 1:
        center_overlap = float(np.abs(center.T @ gram @ h_basis).max()) \
            if space.h.dim else 0.0
        return report(6 if center_overlap <= tol else 4)
    if not v or v[0] == 1:
        if p == 2:
            return report(2)
        if p == 1:
            if len(ideals) != 1:
                raise ClassificationError(
                    "one deficient ideal but g is not simple")
            return report(7)
        raise ClassificationError(f"no matching case (p = {p}, v = {v})")
    if v[0] >= 4:
        raise ClassificationError(f"h-ideal spread across {v[0]} ideals")
    if v[0] == 3:
        return report(1)
    if len(v) >= 2 and v[1] == 2:
        return report(2)
    hits_deficient = any(a and d for a, d in zip(hit[0], deficient))
    return report(4 if hits_deficient else 3)


# --- exact (rational) bases for certified verdicts ----------------------

def _require_exact(space: ReductiveSpace) -> None:
    g = space.g
    if g.structure_exact is None or g.inner_product_exact is None:
        raise ExactUnavailableError(f"{g.name or 'g'} lacks exact data")
    emb = space.embedding
    if emb is None or emb.matrix_exact is None:
        raise ExactUnavailableError("h embedding lacks exact coordinates")
    if emb.source.structure_exact is None:
        raise ExactUnavailableError("h source algebra lacks exact structure")


def exact_m_basis(space: ReductiveSpace) -> np.ndarray:
    """Rational basis (columns, g coords) of m; not orthonormal."""
    _require_exact(space)
    g = space.g
    h_cols = space.embedding.matrix_exact
    if h_cols.shape[1] == 0:
        return exact.fidentity(g.dim)
    rows = h_cols.T @ g.inner_product_exact
    basis = exact.null_space(rows)
    if basis.shape[1] != space.m.dim:
        raise ExactUnavailableError("exact m dimension disagrees with float")
    return basis


def _exact_center(structure_exact, dim: int, indices: list[int]) -> np.ndarray:
    """Exact center of the subalgebra spanned by coordinate ``indices``."""
    pos = {idx: t for t, idx in enumerate(indices)}
    k = len(indices)
    rows = exact.fzeros((k * k, k))
    for (i, j), row in structure_exact.items():
        if i not in pos or j not in pos:
            continue
        for target, v in row.items():
            if target not in pos:
                raise ExactUnavailableError("bracket leaves coordinate block")
            rows[pos[j] * k + pos[target], pos[i]] += v
    return exact.null_space(rows)


def exact_source_ideals(source: LieAlgebra) -> list[np.ndarray]:
    """Exact bases (source coords) of the derived part, block by block.

    Coordinate indices are grouped by bracket connectivity; inside each
    block the exact orthocomplement of the block's center is returned.
    Works when distinct simple ideals do not share coordinate axes,
    which holds for all direct-sum built sources.
    """
    n = source.dim
    se = source.structure_exact
    if se is None:
        raise ExactUnavailableError("source lacks exact structure")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), row in se.items():
        if any(v != 0 for v in row.values()):
            pi, pj = find(i), find(j)
            if pi != pj:
                parent[pj] = pi
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    out = []
    for _, idxs in sorted(blocks.items()):
        center = _exact_center(se, n, idxs)
        k = len(idxs)
        if center.shape[1] == k:
            continue
        if center.shape[1] == 0:
            local = exact.fidentity(k)
        else:
            pos = {idx: t for t, idx in enumerate(idxs)}
            images = []
            for (i, j), row in se.items():
                if i in pos and j in pos:
                    col = exact.fzeros(k)
                    hit = False
                    for target, v in row.items():
                        col[pos[target]] = v
                        hit = hit or v != 0
                    if hit:
                        images.append(col)
            stacked = np.stack(images, axis=1)
            _, pivots = exact.rref(stacked)
            local = stacked[:, pivots]
            if local.shape[1] != k - center.shape[1]:
                raise ExactUnavailableError(
                    "derived span does not complement the center")
        basis = exact.fzeros((n, local.shape[1]))
        for a, ia in enumerate(idxs):
            basis[ia, :] = local[a, :]
        out.append(basis)
    return out


def _exact_multi_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` (matrix rhs) exactly; a must be invertible."""
    n = a.shape[0]
    k = b.shape[1]
    aug = exact.fzeros((n, n + k))
    aug[:, :n] = a
    aug[:, n:] = b
    r, pivots = exact.rref(aug)
    if pivots != list(range(n)):
        raise ExactUnavailableError("exact system is singular")
    return r[:, n:]


def exact_module_bases(space: ReductiveSpace) -> tuple[np.ndarray, ...]:
    """Rational bases of the isotropy modules, aligned with the float ones.

    Modules are cut out as joint eigenspaces of the per-block Casimir
    operators of h acting on m; eigenvalues are recognized as small
    rationals and certified by exact kernel dimensions. Raises
    ExactUnavailableError when the Casimirs cannot separate the modules
    (isotypic pairs) or any exact ingredient is missing.
    """
    _require_exact(space)
    if not space.modules:
        raise ExactUnavailableError("decompose the isotropy modules first")
    g = space.g
    gram = g.inner_product_exact
    m_x = exact_m_basis(space)
    dm = m_x.shape[1]
    gm = m_x.T @ gram @ m_x
    source = space.embedding.source
    ideals = exact_source_ideals(source)
    casimirs = []
    for ideal in ideals:
        gens = space.embedding.matrix_exact @ ideal
        k = gens.shape[1]
        kmat = gens.T @ gram @ gens
        kinv = _exact_multi_solve(kmat, exact.fidentity(k))
        first = np.empty((k, dm), dtype=object)
        for b in range(k):
            for j in range(dm):
                first[b, j] = g.bracket_exact(gens[:, b], m_x[:, j])
        images = exact.fzeros((g.dim, dm))
        for a in range(k):
            for b in range(k):
                if kinv[a, b] == 0:
                    continue
                for j in range(dm):
                    images[:, j] += kinv[a, b] * g.bracket_exact(
                        gens[:, a], first[b, j])
        cas = _exact_multi_solve(gm, m_x.T @ gram @ images)
        casimirs.append(cas)
    if source.structure_exact is not None and source.dim:
        h_center = _exact_center(source.structure_exact, source.dim,
                                 list(range(source.dim)))
        for t in range(h_center.shape[1]):
            zc = space.embedding.matrix_exact @ h_center[:, t]
            images = exact.fzeros((g.dim, dm))
            for j in range(dm):
                images[:, j] = g.bracket_exact(
                    zc, g.bracket_exact(zc, m_x[:, j]))
            casimirs.append(_exact_multi_solve(gm, m_x.T @ gram @ images))
    if not casimirs:
        raise ExactUnavailableError("h provides no invariant averages")
    gram_f = space.g.inner_product
    m_f = exact.to_float(m_x)
    gm_f = exact.to_float(gm)
    bases = []
    for idx in range(len(space.modules)):
        block = space.modules[idx].basis
        coords = np.linalg.solve(gm_f, m_f.T @ gram_f @ block)
        stacked = []
        for cas in casimirs:
            cas_f = exact.to_float(cas)
            probe = cas_f @ coords[:, 0]
            pivot = int(np.argmax(np.abs(coords[:, 0])))
            q = Fraction(float(probe[pivot] / coords[pivot, 0]))
            q = q.limit_denominator(1000)
            shifted = cas.copy()
            for t in range(dm):
                shifted[t, t] = shifted[t, t] - q
            stacked.append(shifted)
        kernel = exact.null_space(np.vstack(stacked))
        if kernel.shape[1] != block.shape[1]:
            raise ExactUnavailableError(
                f"joint Casimir eigenspace has dimension {kernel.shape[1]}, "
                f"module has {block.shape[1]}")
        basis = m_x @ kernel
        basis_f = exact.to_float(basis)
        proj = block @ (block.T @ gram_f @ basis_f)
        if float(np.abs(basis_f - proj).max()) > 1e-8 * max(
                1.0, float(np.abs(basis_f).max())):
            raise ExactUnavailableError(
                "exact eigenspace does not match the float module")
        bases.append(basis)
    return tuple(bases)

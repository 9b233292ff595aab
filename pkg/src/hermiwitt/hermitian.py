"""Epsilon-hermitian Gram forms over D: validation, congruence
diagonalization, Witt decomposition, twisting, the trace lift to L, and
Cayley isometries.

Conventions: V is a right D-space with coordinate columns, so
h(v, w) = rho(x)^T M y for coordinate vectors x, y, a congruence acts as
M -> rho(S)^T M S, and the hermitian axiom reads M = eps * rho(M)^T.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateForm,
    NotSelfAdjoint,
    NotSkewAdjoint,
    Singular,
)
from .padic import FieldConfig, tau_conj
from .quaternion import QuaternionElement


# ---------------------------------------------------------------------------
# small matrix helpers over D (non-commutative) and over L (commutative)
# ---------------------------------------------------------------------------

def dmat_identity(cfg: FieldConfig, n: int):
    one, zero = QuaternionElement.one(cfg), QuaternionElement.zero(cfg)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def dmat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = A[i][0] * B[0][j]
            for t in range(1, k):
                s = s + A[i][t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def dmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def dmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def dmat_neg(A):
    return [[-a for a in row] for row in A]


def dmat_rho_t(A):
    """Entrywise rho followed by transpose."""
    n, m = len(A), len(A[0])
    return [[A[j][i].rho() for j in range(n)] for i in range(m)]


def dmat_is_zero(A) -> bool:
    return all(e.is_zero() for row in A for e in row)


def dmat_inv(A):
    """Inverse over the division ring D by row reduction with min-nu_D
    pivoting.  Raises Singular when a pivot column is indistinguishable
    from zero."""
    n = len(A)
    M = [row[:] for row in A]
    cfg = M[0][0].cfg
    I = dmat_identity(cfg, n)
    for col in range(n):
        piv, pv = None, None
        for r in range(col, n):
            e = M[r][col]
            if e.is_zero():
                continue
            v = e.nu_D()
            if pv is None or v < pv:
                piv, pv = r, v
        if piv is None:
            raise Singular("matrix over D not invertible at tracked precision")
        M[col], M[piv] = M[piv], M[col]
        I[col], I[piv] = I[piv], I[col]
        inv = M[col][col].inv()
        M[col] = [inv * e for e in M[col]]
        I[col] = [inv * e for e in I[col]]
        for r in range(n):
            if r == col or M[r][col].is_zero():
                continue
            c = M[r][col]
            M[r] = [e - c * f for e, f in zip(M[r], M[col])]
            I[r] = [e - c * f for e, f in zip(I[r], I[col])]
    return I


def lmat_det(A):
    """Determinant of a matrix over L (or any commutative field element type
    with the same interface), by fraction-producing Gaussian elimination with
    min-valuation pivoting."""
    n = len(A)
    M = [row[:] for row in A]
    det = None
    sign = 1
    for col in range(n):
        piv, pv = None, None
        for r in range(col, n):
            e = M[r][col]
            if e.is_zero():
                continue
            v = e.valuation()
            if pv is None or v < pv:
                piv, pv = r, v
        if piv is None:
            raise Singular("matrix over L not invertible at tracked precision")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        d = M[col][col]
        det = d if det is None else det * d
        for r in range(col + 1, n):
            if M[r][col].is_zero():
                continue
            c = M[r][col] / d
            M[r] = [e - c * f for e, f in zip(M[r], M[col])]
    return det if sign == 1 else -det


def vec_apply(A, x):
    return [row_dot(row, x) for row in A]


def row_dot(row, x):
    s = row[0] * x[0]
    for a, b in zip(row[1:], x[1:]):
        s = s + a * b
    return s


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermitianForm:
    """Nondegenerate eps-hermitian form given by its Gram matrix over D."""

    epsilon: int
    gram: tuple  # tuple of tuples of QuaternionElement

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")

    @staticmethod
    def from_rows(epsilon: int, rows) -> HermitianForm:
        return HermitianForm(epsilon, tuple(tuple(r) for r in rows))

    @staticmethod
    def diagonal(epsilon: int, entries) -> HermitianForm:
        entries = list(entries)
        cfg = entries[0].cfg
        zero = QuaternionElement.zero(cfg)
        n = len(entries)
        return HermitianForm.from_rows(
            epsilon,
            [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def hyperbolic_plane(cfg: FieldConfig, epsilon: int) -> HermitianForm:
        one = QuaternionElement.one(cfg)
        zero = QuaternionElement.zero(cfg)
        eps = one if epsilon == 1 else -one
        return HermitianForm.from_rows(epsilon, [[zero, one], [eps, zero]])

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def cfg(self) -> FieldConfig:
        return self.gram[0][0].cfg

    def rows(self):
        return [list(r) for r in self.gram]

    def evaluate(self, x, y) -> QuaternionElement:
        """h(v, w) for coordinate vectors of quaternions."""
        s = None
        for i in range(self.rank):
            rx = x[i].rho()
            for j in range(self.rank):
                t = rx * self.gram[i][j] * y[j]
                s = t if s is None else s + t
        return s

    def orthogonal_sum(self, other: HermitianForm) -> HermitianForm:
        if other.epsilon != self.epsilon:
            raise ValueError("epsilon mismatch in orthogonal sum")
        zero = QuaternionElement.zero(self.cfg)
        n, m = self.rank, other.rank
        rows = []
        for i in range(n):
            rows.append(list(self.gram[i]) + [zero] * m)
        for i in range(m):
            rows.append([zero] * n + list(other.gram[i]))
        return HermitianForm.from_rows(self.epsilon, rows)


@dataclass(frozen=True)
class DiagonalForm:
    """Diagonal entries plus split-off standard hyperbolic pairs.

    Every entry is symmetric (eps = +1) or skew (eps = -1) and
    distinguishable from zero; each hyperbolic pair stands for an
    antidiag(1, eps) block."""

    epsilon: int
    entries: tuple
    hyperbolic_pairs: int = 0

    @property
    def rank(self) -> int:
        return len(self.entries) + 2 * self.hyperbolic_pairs


def validate(form: HermitianForm) -> bool:
    want = dmat_rho_t(form.rows())
    if form.epsilon == -1:
        want = dmat_neg(want)
    return dmat_is_zero(dmat_sub(form.rows(), want))


def diagonalize(form: HermitianForm):
    """Congruence-diagonalize: returns (T, DiagonalForm) with
    rho(T)^T M T = blockdiag(entries..., antidiag(1, eps) pairs...).

    The pivot is the basis vector minimizing nu_D(h(v, v)) (ties: lowest
    index).  When every diagonal candidate is indistinguishable from zero a
    hyperbolic plane is split off from the first non-orthogonal pair."""
    if not validate(form):
        raise DegenerateForm("not an eps-hermitian Gram matrix")
    cfg, n, eps = form.cfg, form.rank, form.epsilon
    # current basis vectors as coordinate columns in the original basis
    basis = [[QuaternionElement.one(cfg) if i == j else QuaternionElement.zero(cfg)
              for i in range(n)] for j in range(n)]
    h = lambda x, y: form.evaluate(x, y)
    active = list(range(n))
    entry_cols, pair_cols, entries, pairs = [], [], [], 0
    while active:
        piv, pv = None, None
        for i in active:
            e = h(basis[i], basis[i])
            if e.is_zero():
                continue
            v = e.nu_D()
            if pv is None or v < pv:
                piv, pv = i, v
        if piv is not None:
            d = h(basis[piv], basis[piv])
            dinv = d.inv()
            for j in active:
                if j == piv:
                    continue
                c = dinv * h(basis[piv], basis[j])
                basis[j] = [bj - bi * c for bj, bi in zip(basis[j], basis[piv])]
            entries.append(d)
            entry_cols.append(basis[piv])
            active.remove(piv)
            continue
        # all diagonal candidates vanish: split a hyperbolic plane
        pair = None
        for ii, i in enumerate(active):
            for j in active[ii + 1:]:
                if not h(basis[i], basis[j]).is_zero():
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            raise DegenerateForm("remaining block is indistinguishable from zero")
        i, j = pair
        c = h(basis[i], basis[j]).inv()
        basis[j] = [bj * c for bj in basis[j]]
        # orthogonalize the rest against the plane via the 2x2 block inverse
        blk = [[h(basis[i], basis[i]), h(basis[i], basis[j])],
               [h(basis[j], basis[i]), h(basis[j], basis[j])]]
        blk_inv = dmat_inv(blk)
        for k in active:
            if k in (i, j):
                continue
            rhs = [h(basis[i], basis[k]), h(basis[j], basis[k])]
            sol = vec_apply(blk_inv, rhs)
            basis[k] = [bk - bi * sol[0] - bj * sol[1]
                        for bk, bi, bj in zip(basis[k], basis[i], basis[j])]
        pair_cols.extend([basis[i], basis[j]])
        pairs += 1
        active.remove(i)
        active.remove(j)
    cols = entry_cols + pair_cols
    T = [[cols[j][i] for j in range(n)] for i in range(n)]
    return T, DiagonalForm(eps, tuple(entries), pairs)


def witt_decompose(form: HermitianForm):
    """Witt decomposition: (witt_index, anisotropic DiagonalForm).

    The anisotropic part is certified by the isotropy oracle in the
    wittclass module."""
    from . import wittclass  # local import; wittclass builds on this module

    _, diag = diagonalize(form)
    entries = list(diag.entries)
    index = diag.hyperbolic_pairs
    classes = [wittclass.classify_line(d, form.epsilon) for d in entries]
    changed = True
    while changed:
        changed = False
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                if classes[i] == classes[j]:
                    for k in sorted((i, j), reverse=True):
                        del entries[k]
                        del classes[k]
                    index += 1
                    changed = True
                    break
            if changed:
                break
    rest = DiagonalForm(form.epsilon, tuple(entries), 0)
    if entries and wittclass.is_isotropic(rest):
        raise AssertionError("greedy cancellation left an isotropic part")
    return index, rest


def twist(form: HermitianForm, gamma) -> HermitianForm:
    """h^gamma(v, w) := h(v, gamma w).  gamma must be sigma_h-self-adjoint or
    skew-adjoint and invertible; epsilon flips exactly when gamma is skew."""
    cfg, n = form.cfg, form.rank
    if isinstance(gamma, QuaternionElement):
        G = [[gamma if i == j else QuaternionElement.zero(cfg) for j in range(n)]
             for i in range(n)]
    else:
        G = [list(r) for r in gamma]
    M = form.rows()
    try:
        Minv = dmat_inv(M)
        dmat_inv(G)
    except Singular:
        raise Singular("twist needs an invertible gamma and form")
    adj = dmat_mul(Minv, dmat_mul(dmat_rho_t(G), M))
    if dmat_is_zero(dmat_sub(adj, G)):
        new_eps = form.epsilon
    elif dmat_is_zero(dmat_add(adj, G)):
        new_eps = -form.epsilon
    else:
        raise NotSelfAdjoint("gamma is neither self- nor skew-adjoint for sigma_h")
    return HermitianForm.from_rows(new_eps, dmat_mul(M, G))


# ---------------------------------------------------------------------------
# trace lift to L and reduced norms of D-matrices
# ---------------------------------------------------------------------------

def l_embedding(X):
    """The 2n x 2n matrix over L of a D-matrix X acting on V with L-basis
    (e_1..e_n, e_1 pi_D .. e_n pi_D): blocks [[A, B pi_F], [tau(B), tau(A)]]
    for X = A + B pi_D."""
    n = len(X)
    cfg = X[0][0].cfg
    pf = cfg.pi()
    top, bot = [], []
    for i in range(n):
        r1, r2 = [], []
        for j in range(n):
            r1.append(X[i][j].a)
            r2.append(tau_conj(X[i][j].b))
        top.append(r1)
        bot.append(r2)
    rows = []
    for i in range(n):
        rows.append(top[i] + [X[i][j].b.scale_f(pf) for j in range(n)])
    for i in range(n):
        rows.append(bot[i] + [tau_conj(X[i][j].a) for j in range(n)])
    return rows


def reduced_norm(X):
    """Nrd of a matrix over D, computed through the splitting over L."""
    det = lmat_det(l_embedding(X))
    # the determinant lies in F; return its F-part after checking
    if not det.b.is_zero():
        raise AssertionError("reduced norm computation left L \\ F")
    return det.a


def reduced_trace(X):
    t = None
    for i in range(len(X)):
        s = X[i][i].trd()
        t = s if t is None else t + s
    return t


def trace_lift_hL(form: HermitianForm):
    """The unique L-bilinear eps-symmetric form h_L with
    tr_{L|F} o h_L = trd_{D|F} o h; returned as its 2n x 2n Gram matrix over
    L in the basis (e_1..e_n, e_1 pi_D .. e_n pi_D)."""
    if not validate(form):
        raise DegenerateForm("invalid hermitian form")
    n = len(form.gram)
    pf = form.cfg.pi()
    A = [[form.gram[i][j].a for j in range(n)] for i in range(n)]
    B = [[form.gram[i][j].b for j in range(n)] for i in range(n)]
    rows = []
    for i in range(n):
        rows.append(A[i] + [B[i][j].scale_f(pf) for j in range(n)])
    for i in range(n):
        rows.append([tau_conj(B[i][j]).scale_f(pf) for j in range(n)]
                    + [tau_conj(A[i][j]).scale_f(pf) for j in range(n)])
    return rows


def hL_evaluate(hL, x, y):
    """Evaluate the lifted bilinear form on L-coordinate vectors."""
    s = None
    for i in range(len(hL)):
        for j in range(len(hL)):
            t = x[i] * hL[i][j] * y[j]
            s = t if s is None else s + t
    return s


def l_coordinates(vec):
    """L-coordinates (a_1..a_n, tau(b_1)..tau(b_n)) of a D-coordinate
    vector, matching the basis used by trace_lift_hL."""
    return [q.a for q in vec] + [tau_conj(q.b) for q in vec]


def cayley_isometry(X, form: HermitianForm):
    """g = (1 + X)(1 - X)^(-1) for sigma_h-skew-adjoint X; g is an isometry
    of the form (and has reduced norm 1)."""
    M = form.rows()
    n = form.rank
    cfg = form.cfg
    Minv = dmat_inv(M)
    adj = dmat_mul(Minv, dmat_mul(dmat_rho_t(X), M))
    if not dmat_is_zero(dmat_add(adj, X)):
        raise NotSkewAdjoint("X is not sigma_h-skew-adjoint")
    I = dmat_identity(cfg, n)
    try:
        g = dmat_mul(dmat_add(I, X), dmat_inv(dmat_sub(I, X)))
    except Singular:
        raise Singular("1 - X is not invertible")
    return g


def is_isometry(g, form: HermitianForm) -> bool:
    M = form.rows()
    return dmat_is_zero(dmat_sub(dmat_mul(dmat_rho_t(g), dmat_mul(M, g)), M))

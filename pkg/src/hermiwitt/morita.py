"""Splitting E (x)_F D = M_2(E) for a quadratic subfield E of D, the
hermitian category equivalence and its inverse, similitude scaling, Witt
towers, the h~_beta construction, and trace transfers.

Elements of E (x) D are handled in two coordinate systems: "tensor"
coordinates (four E-coefficients over the D-basis {1, u, pi_D, u pi_D}) and
2x2 matrices over E through the splitting isomorphism Phi.  Phi is chosen so
that the involution sigma_E (x) rho pushes forward to
X -> u_mat sigma_E(X)^T u_mat^(-1) with a diagonal sigma_E-symmetric pair
u_mat = diag(u1, u2).

Forms over E (x) D live on sums of t copies of the simple right module
(rows E^(1x2)); in the standard frame such a form is encoded by a t x t
matrix H over E with H = eps sigma(H)^T, the pairing being
h~(X, Y) = u_mat sigma(X)^T H Y for t x 2 coordinate matrices X, Y.  Free
modules correspond to even t, with Gram over E (x) D recoverable blockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateForm,
    NoSimilitudeFound,
    NotASquare,
    NotInD,
    NotQuadratic,
    NotSkewAdjoint,
    Singular,
)
from .padic import (
    FElement,
    FieldConfig,
    QuadExtElement,
    QuadExtField,
    solve_norm_equation,
)
from .quaternion import QuaternionElement
from .hermitian import HermitianForm, dmat_inv, dmat_mul, dmat_rho_t, vec_apply

# rho acts on the D-basis (1, u, pi_D, u pi_D) by these signs
_RHO_SIGNS = (1, 1, 1, -1)


# ---------------------------------------------------------------------------
# generic commutative matrix helpers (elements: FElement or QuadExtElement)
# ---------------------------------------------------------------------------

def cmat_mul(A, B):
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


def cmat_inv(A):
    n = len(A)
    M = [row[:] for row in A]
    one = A[0][0] ** 0
    zero = one - one
    I = [[one if i == j else zero for j in range(n)] for i in range(n)]
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
            raise Singular("matrix not invertible at tracked precision")
        M[col], M[piv] = M[piv], M[col]
        I[col], I[piv] = I[piv], I[col]
        inv = M[col][col].inv() if hasattr(M[col][col], "inv") else 1 / M[col][col]
        M[col] = [inv * e for e in M[col]]
        I[col] = [inv * e for e in I[col]]
        for r in range(n):
            if r == col or M[r][col].is_zero():
                continue
            c = M[r][col]
            M[r] = [e - c * f for e, f in zip(M[r], M[col])]
            I[r] = [e - c * f for e, f in zip(I[r], I[col])]
    return I


def cmat_is_zero(A):
    return all(e.is_zero() for row in A for e in row)


def _sigma_t(A):
    return [[A[j][i].sigma() for j in range(len(A))] for i in range(len(A[0]))]


def _fixed_to_f(e: QuadExtElement) -> FElement:
    if not e.b.is_zero():
        raise AssertionError("expected a sigma-fixed element of E")
    return e.a


def quat_f_coords(q: QuaternionElement):
    return [q.a.a, q.a.b, q.b.a, q.b.b]


def quat_from_f_coords(cfg: FieldConfig, c) -> QuaternionElement:
    return QuaternionElement(cfg.l(c[0], c[1]), cfg.l(c[2], c[3]))


# ---------------------------------------------------------------------------
# tensor coordinates for E (x) D
# ---------------------------------------------------------------------------

def tensor_from_quat(E: QuadExtField, d: QuaternionElement):
    """1 (x) d in tensor coordinates."""
    return tuple(E.from_f(c) for c in quat_f_coords(d))


def tensor_scale(e: QuadExtElement, ten):
    return tuple(e * c for c in ten)


def tensor_add(t1, t2):
    return tuple(a + b for a, b in zip(t1, t2))


def tensor_theta(ten):
    """(sigma_E (x) rho) in tensor coordinates."""
    return tuple(c.sigma() if s == 1 else -c.sigma()
                 for c, s in zip(ten, _RHO_SIGNS))


def tensor_lambda_apply(cfg: FieldConfig, ten, lam_scale: FElement | None = None):
    """(lambda_beta (x) id_D): kill the beta-part of each E-coefficient and
    reassemble the quaternion; optionally post-scale by an F-unit (every
    admissible equivariant lambda is an F-multiple of lambda_beta)."""
    q = quat_from_f_coords(cfg, [c.a for c in ten])
    return q.scale_f(lam_scale) if lam_scale is not None else q


# ---------------------------------------------------------------------------
# the splitting
# ---------------------------------------------------------------------------

def find_beta0(cfg: FieldConfig, delta: FElement) -> QuaternionElement:
    """A pure quaternion with square delta (delta normalized: valuation 0
    non-residue, or valuation 1)."""
    if delta.valuation() == 0:
        ratio = delta / cfg.nonresidue_r
        if not ratio.is_square():
            raise NotInD("unit delta must be a non-residue times a square")
        return QuaternionElement.make(cfg, cfg.u().scale_f(ratio.sqrt()))
    w = delta / cfg.pi()
    l = solve_norm_equation(cfg.L_field, w)
    return QuaternionElement.make(cfg, 0, l)


@dataclass(frozen=True)
class SplitData:
    """Explicit isomorphism E (x)_F D = M_2(E) adapted to sigma_E (x) rho."""

    cfg: FieldConfig
    E: QuadExtField
    beta0: QuaternionElement      # generator of E inside D
    w_choice: int
    gens: tuple                   # final Phi-images of 1(x)u, 1(x)pi_D
    mphi_inv: tuple               # inverse of the tensor->matrix matrix, over E
    u1: FElement
    u2: FElement
    row_solve: tuple              # 4x4 F-matrix: first-row-of-G_x -> x

    # -- conversions ---------------------------------------------------------
    def basis_images(self):
        Gu, Gpi = [ [list(r) for r in g] for g in self.gens ]
        return [None, Gu, Gpi, cmat_mul(Gu, Gpi)]

    def to_matrix(self, ten):
        E = self.E
        one = E.one()
        out = [[ten[0], E.zero()], [E.zero(), ten[0]]]
        imgs = self.basis_images()
        for k in (1, 2, 3):
            g = imgs[k]
            out = [[out[i][j] + ten[k] * g[i][j] for j in range(2)] for i in range(2)]
        return out

    def to_tensor(self, X):
        flat = [X[0][0], X[0][1], X[1][0], X[1][1]]
        M = [list(r) for r in self.mphi_inv]
        return tuple(row_dot_e(M[i], flat) for i in range(4))

    def embed_quat(self, d: QuaternionElement):
        return self.to_matrix(tensor_from_quat(self.E, d))

    @property
    def u_mat(self):
        E = self.E
        return [[E.from_f(self.u1), E.zero()], [E.zero(), E.from_f(self.u2)]]

    def theta(self, X):
        u = self.u_mat
        return cmat_mul(u, cmat_mul(_sigma_t(X), cmat_inv(u)))

    def e1(self) -> IdempotentE:
        E = self.E
        return IdempotentE(self, ((E.one(), E.zero()), (E.zero(), E.zero())))

    def e2(self) -> IdempotentE:
        E = self.E
        return IdempotentE(self, ((E.zero(), E.zero()), (E.zero(), E.one())))

    def quat_of_row(self, row) -> QuaternionElement:
        """The x in D whose matrix has the given first row (an E^2 pair)."""
        coords = [row[0].a, row[0].b, row[1].a, row[1].b]
        sol = vec_apply_f(self.row_solve, coords)
        return quat_from_f_coords(self.cfg, sol)

    def idempotent_from_line(self, x) -> IdempotentE:
        """b-orthogonal projection onto the anisotropic line spanned by the
        row vector x."""
        u = self.u_mat
        col = cmat_mul(u, _sigma_t([list(x)]))      # 2x1
        q = row_dot_e(list(x), [col[0][0], col[1][0]])
        if q.is_zero():
            raise DegenerateForm("line is isotropic for the reference form")
        qi = q.inv()
        mat = [[col[0][0] * qi * x[0], col[0][0] * qi * x[1]],
               [col[1][0] * qi * x[0], col[1][0] * qi * x[1]]]
        return IdempotentE(self, tuple(tuple(r) for r in mat))

    def validate(self) -> bool:
        E, cfg = self.E, self.cfg
        Gu, Gpi = self.basis_images()[1], self.basis_images()[2]
        r = E.from_f(cfg.f(cfg.nonresidue_r))
        pf = E.from_f(cfg.pi())
        checks = []
        checks.append(cmat_is_zero(mat_sub(cmat_mul(Gu, Gu), scalar_mat(E, r))))
        checks.append(cmat_is_zero(mat_sub(cmat_mul(Gpi, Gpi), scalar_mat(E, pf))))
        checks.append(cmat_is_zero(mat_add(cmat_mul(Gpi, Gu), cmat_mul(Gu, Gpi))))
        # pushforward identity on the basis and involutivity of theta
        for k in (1, 2, 3):
            ten = [E.zero()] * 4
            ten[k] = E.one()
            X = self.to_matrix(tuple(ten))
            checks.append(cmat_is_zero(
                mat_sub(self.theta(X), self.to_matrix(tensor_theta(tuple(ten))))))
        checks.append(self.u1.same(self.u1) and self.u2.same(self.u2))
        e1 = self.e1().mat
        checks.append(cmat_is_zero(mat_sub(self.theta([list(r) for r in e1]),
                                           [list(r) for r in e1])))
        # round trip tensor <-> matrix
        ten = tensor_from_quat(E, QuaternionElement.make(cfg, cfg.l(1, 2), cfg.l(3, 4)))
        checks.append(all((a - b).is_zero()
                          for a, b in zip(self.to_tensor(self.to_matrix(ten)), ten)))
        return all(checks)


def row_dot_e(row, vec):
    s = row[0] * vec[0]
    for a, b in zip(row[1:], vec[1:]):
        s = s + a * b
    return s


def vec_apply_f(A, x):
    return [row_dot_e(list(r), x) for r in A]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scalar_mat(E: QuadExtField, e: QuadExtElement):
    return [[e, E.zero()], [E.zero(), e]]


_SPLIT_CACHE: dict = {}


def split(cfg: FieldConfig, generator: QuaternionElement, w_choice: int = 0) -> SplitData:
    """Build SplitData for E = F[generator], generator a pure quaternion with
    square in F^x (non-square unit or odd valuation)."""
    g2 = generator * generator
    if not (g2.b.is_zero() and g2.a.b.is_zero()):
        raise NotQuadratic("generator^2 must lie in F")
    delta = g2.a.a
    k = delta.valuation() // 2
    if k:
        generator = generator.scale_f(cfg.pi() ** (-k))
        delta = delta * cfg.pi() ** (-2 * k)
    if delta.valuation() == 0 and delta.is_square():
        raise NotQuadratic("generator generates F, not a quadratic extension")
    key = (cfg, delta.val, delta.unit, w_choice)
    if key in _SPLIT_CACHE:
        return _SPLIT_CACHE[key]
    data = _build_split(cfg, delta, w_choice)
    _SPLIT_CACHE[key] = data
    return data


def split_for_delta(cfg: FieldConfig, delta: FElement, w_choice: int = 0) -> SplitData:
    return split(cfg, find_beta0(cfg, delta), w_choice)


def _build_split(cfg: FieldConfig, delta: FElement, w_choice: int) -> SplitData:
    E = QuadExtField(cfg, delta, "E")
    beta0 = find_beta0(cfg, delta)
    # left-E basis {1, w} of D, with scalars acting by left multiplication
    candidates = [QuaternionElement.u_elem(cfg), QuaternionElement.pi_D(cfg),
                  QuaternionElement.u_elem(cfg) * QuaternionElement.pi_D(cfg)]
    chosen = []
    one = QuaternionElement.one(cfg)
    for w in candidates:
        cols = [quat_f_coords(x) for x in (one, beta0, w, beta0 * w)]
        A = [[cols[j][i] for j in range(4)] for i in range(4)]
        try:
            ainv = cmat_inv(A)
        except Singular:
            continue
        chosen.append((w, ainv))
    if len(chosen) <= w_choice:
        raise NotInD("no independent complement basis found")
    w, ainv = chosen[w_choice]

    def coords_E(z: QuaternionElement):
        sol = vec_apply_f(ainv, quat_f_coords(z))
        return (QuadExtElement(E, sol[0], sol[1]), QuadExtElement(E, sol[2], sol[3]))

    def g0_of(d: QuaternionElement):
        # operator x -> x * rho(d) in left-E coordinates over {1, w}
        rd = d.rho()
        c1 = coords_E(one * rd)
        c2 = coords_E(w * rd)
        return [[c1[0], c2[0]], [c1[1], c2[1]]]

    G0u = g0_of(QuaternionElement.u_elem(cfg))
    G0pi = g0_of(QuaternionElement.pi_D(cfg))

    def mphi_of(Gu, Gpi):
        imgs = [scalar_mat(E, E.one()), Gu, Gpi, cmat_mul(Gu, Gpi)]
        cols = [[m[0][0], m[0][1], m[1][0], m[1][1]] for m in imgs]
        return [[cols[j][i] for j in range(4)] for i in range(4)]

    mphi0_inv = cmat_inv(mphi_of(G0u, G0pi))

    def to_tensor0(X):
        flat = [X[0][0], X[0][1], X[1][0], X[1][1]]
        return tuple(row_dot_e(list(r), flat) for r in mphi0_inv)

    def to_matrix0(ten):
        out = scalar_mat(E, ten[0])
        for kk, g in ((1, G0u), (2, G0pi), (3, cmat_mul(G0u, G0pi))):
            out = [[out[i][j] + ten[kk] * g[i][j] for j in range(2)] for i in range(2)]
        return out

    def psi0(X):
        return to_matrix0(tensor_theta(to_tensor0(X)))

    # solve B * Psi0(X) = sigma(X)^T * B on the generating images
    rows, zero = [], E.zero()
    for X in (G0u, G0pi, cmat_mul(G0u, G0pi)):
        P = psi0(X)
        S = _sigma_t(X)
        for i in range(2):
            for j in range(2):
                coeff = [zero, zero, zero, zero]
                for b in range(2):
                    coeff[2 * i + b] = coeff[2 * i + b] + P[b][j]
                for a in range(2):
                    coeff[2 * a + j] = coeff[2 * a + j] - S[i][a]
                rows.append(coeff)
    sol = _nullspace_vector(rows, E)
    B = [[sol[0], sol[1]], [sol[2], sol[3]]]
    # make B hermitian: sigma(B)^T = mu B with mu sigma(mu) = 1
    Bs = _sigma_t(B)
    mu = None
    for i in range(2):
        for j in range(2):
            if not B[i][j].is_zero():
                mu = Bs[i][j] / B[i][j]
                break
        if mu:
            break
    if not (mu - E.one()).is_zero():
        lam = E.one() + mu
        if lam.is_zero():
            lam = E.gen()
        B = [[lam * e for e in row] for row in B]
    if not cmat_is_zero(mat_sub(_sigma_t(B), B)):
        raise AssertionError("could not symmetrize the involution Gram")
    C = cmat_inv(B)
    S = _e_gram_schmidt_basis(C, E)
    u_entries = []
    for v in S:
        q = row_dot_e([c.sigma() for c in v], vec_apply_f(C, v))
        u_entries.append(_fixed_to_f(q))
    # S holds the orthogonal basis as column vectors; m = sigma(S^T) makes
    # m C sigma(m)^T = diag(u1, u2)
    Smat = [[S[j][i] for j in range(2)] for i in range(2)]
    m = _sigma_t(Smat)
    minv = cmat_inv(m)
    Gu = cmat_mul(m, cmat_mul(G0u, minv))
    Gpi = cmat_mul(m, cmat_mul(G0pi, minv))
    mphi_inv = cmat_inv(mphi_of(Gu, Gpi))

    # first-row solve: x -> first row of G_x (final Phi)
    imgs = [scalar_mat(E, E.one()), Gu, Gpi, cmat_mul(Gu, Gpi)]
    cols = []
    for g in imgs:
        cols.append([g[0][0].a, g[0][0].b, g[0][1].a, g[0][1].b])
    A = [[cols[j][i] for j in range(4)] for i in range(4)]
    row_solve = cmat_inv(A)

    data = SplitData(
        cfg=cfg, E=E, beta0=beta0, w_choice=w_choice,
        gens=(tuple(tuple(r) for r in Gu), tuple(tuple(r) for r in Gpi)),
        mphi_inv=tuple(tuple(r) for r in mphi_inv),
        u1=u_entries[0], u2=u_entries[1],
        row_solve=tuple(tuple(r) for r in row_solve))
    if not data.validate():
        raise AssertionError("splitting construction failed its relation checks")
    return data


def _nullspace_vector(rows, E: QuadExtField):
    """One nonzero solution of a homogeneous system over E (4 unknowns)."""
    M = [row[:] for row in rows]
    ncols = 4
    pivots = {}
    r = 0
    for col in range(ncols):
        piv, pv = None, None
        for i in range(r, len(M)):
            e = M[i][col]
            if e.is_zero():
                continue
            v = e.valuation()
            if pv is None or v < pv:
                piv, pv = i, v
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][col].inv()
        M[r] = [inv * e for e in M[r]]
        for i in range(len(M)):
            if i != r and not M[i][col].is_zero():
                c = M[i][col]
                M[i] = [e - c * f for e, f in zip(M[i], M[r])]
        pivots[col] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        raise AssertionError("involution transport system has no kernel")
    f = free[0]
    sol = [E.zero()] * ncols
    sol[f] = E.one()
    for col, rr in pivots.items():
        sol[col] = -M[rr][f]
    return sol


def _e_gram_schmidt_basis(C, E: QuadExtField):
    """Orthogonal basis (list of column vectors) for the hermitian form
    sigma(x)^T C y on E^2."""
    def q(v):
        return row_dot_e([c.sigma() for c in v], vec_apply_f(C, v))

    basis = [[E.one(), E.zero()], [E.zero(), E.one()]]
    v1 = None
    for v in basis:
        if not q(v).is_zero():
            v1 = v
            break
    if v1 is None:
        for c in (E.one(), E.gen(), E.one() + E.gen()):
            v = [E.one(), c]
            if not q(v).is_zero():
                v1 = v
                break
    if v1 is None:
        raise DegenerateForm("reference hermitian form is degenerate")
    other = basis[1] if v1 is not basis[1] else basis[0]
    phi = row_dot_e([c.sigma() for c in v1], vec_apply_f(C, other))
    coef = phi / q(v1)
    v2 = [o - coef * w for o, w in zip(other, v1)]
    if q(v2).is_zero():
        raise DegenerateForm("reference hermitian form is degenerate")
    return [v1, v2]


# ---------------------------------------------------------------------------
# idempotents and forms over E (x) D
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdempotentE:
    """Rank-1 idempotent of E (x) D fixed by sigma_E (x) rho, as a 2x2
    matrix over E."""

    split: SplitData
    mat: tuple

    def validate(self) -> bool:
        X = [list(r) for r in self.mat]
        if not cmat_is_zero(mat_sub(cmat_mul(X, X), X)):
            return False
        if not cmat_is_zero(mat_sub(self.split.theta(X), X)):
            return False
        tr = X[0][0] + X[1][1]
        return (tr - self.split.E.one()).is_zero()


@dataclass(frozen=True)
class EDForm:
    """eps-hermitian form over E (x) D on t copies of the simple module,
    encoded by the t x t matrix H over E (H = eps sigma(H)^T)."""

    split: SplitData
    epsilon: int
    H: tuple

    @property
    def t(self) -> int:
        return len(self.H)

    def rows(self):
        return [list(r) for r in self.H]

    def validate(self) -> bool:
        Hs = _sigma_t(self.rows())
        if self.epsilon == -1:
            Hs = [[-e for e in row] for row in Hs]
        if not cmat_is_zero(mat_sub(self.rows(), Hs)):
            return False
        try:
            cmat_inv(self.rows())
        except Singular:
            return False
        return True

    def value(self, X, Y):
        """h~(X, Y) as a 2x2 matrix over E, for t x 2 coordinate matrices."""
        sX = [[X[j][i].sigma() for j in range(self.t)] for i in range(2)]
        return cmat_mul(self.split.u_mat, cmat_mul(sX, cmat_mul(self.rows(), Y)))

    def orthogonal_sum(self, other: EDForm) -> EDForm:
        assert other.split is self.split and other.epsilon == self.epsilon
        E = self.split.E
        z = E.zero()
        n, m = self.t, other.t
        rows = [list(self.H[i]) + [z] * m for i in range(n)]
        rows += [[z] * n + list(other.H[i]) for i in range(m)]
        return EDForm(self.split, self.epsilon, tuple(tuple(r) for r in rows))

    def free_gram(self):
        """Gram over E (x) D for even t (free module of rank t/2): matrices
        K_ij = u_mat * H[2i:2i+2, 2j:2j+2]."""
        if self.t % 2:
            raise ValueError("free Gram needs an even number of simple summands")
        k = self.t // 2
        u = self.split.u_mat
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                blk = [[self.H[2 * i][2 * j], self.H[2 * i][2 * j + 1]],
                       [self.H[2 * i + 1][2 * j], self.H[2 * i + 1][2 * j + 1]]]
                row.append(cmat_mul(u, blk))
            out.append(row)
        return out


# ---------------------------------------------------------------------------
# E-side Witt machinery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EWittClass:
    """Witt class of an eps-hermitian form over (E, sigma_E): complete
    invariants are the rank parity and the norm class of
    disc * (-1)^floor(n/2)."""

    field: QuadExtField
    epsilon: int
    rank_parity: int
    i_is_norm: bool

    def is_hyperbolic(self) -> bool:
        return self.rank_parity == 0 and self.i_is_norm

    @property
    def anisotropic_dim(self) -> int:
        if self.rank_parity:
            return 1
        return 0 if self.i_is_norm else 2

    def __add__(self, other: EWittClass):
        assert self.field == other.field and self.epsilon == other.epsilon
        par = self.rank_parity ^ other.rank_parity
        i = self.i_is_norm == other.i_is_norm
        if self.rank_parity and other.rank_parity:
            i = i == self.field.is_norm(self.field.cfg.f(-1))
        return EWittClass(self.field, self.epsilon, par, i)

    def scale(self, s: FElement) -> EWittClass:
        if self.rank_parity == 0:
            return self
        return EWittClass(self.field, self.epsilon, 1,
                          self.i_is_norm == self.field.is_norm(s))


def e_diagonalize(H, field: QuadExtField):
    """Diagonal entries (sigma-fixed, as F-elements) of a hermitian form
    over (E, sigma) by Gram-Schmidt with anisotropic-vector probing."""
    n = len(H)
    vecs = [[field.one() if i == j else field.zero() for i in range(n)]
            for j in range(n)]
    M = [list(r) for r in H]

    def phi(x, y):
        return row_dot_e([c.sigma() for c in x], vec_apply_f(M, y))

    entries = []
    active = list(range(n))
    while active:
        piv = None
        for i in active:
            if not phi(vecs[i], vecs[i]).is_zero():
                piv = i
                break
        if piv is None:
            found = False
            for ii, i in enumerate(active):
                for j in active[ii + 1:]:
                    for c in (field.one(), field.gen(), field.one() + field.gen()):
                        cand = [a + c * b for a, b in zip(vecs[i], vecs[j])]
                        if not phi(cand, cand).is_zero():
                            vecs[i] = cand
                            piv, found = i, True
                            break
                    if found:
                        break
                if found:
                    break
            if not found:
                raise DegenerateForm("hermitian form over E is degenerate")
        q = phi(vecs[piv], vecs[piv])
        qinv = q.inv()
        for j in active:
            if j == piv:
                continue
            c = qinv * phi(vecs[piv], vecs[j])
            vecs[j] = [b - c * a for a, b in zip(vecs[piv], vecs[j])]
        entries.append(_fixed_to_f(q))
        active.remove(piv)
    return entries


def e_witt_class(H, field: QuadExtField, epsilon: int) -> EWittClass:
    """Witt class of an eps-hermitian Gram matrix over (E, sigma_E).  Skew
    forms are classified through the fixed twist by the generator of E."""
    H = [list(r) for r in H]
    if epsilon == -1:
        winv = field.gen().inv()
        H = [[winv * e for e in row] for row in H]
    entries = e_diagonalize(H, field)
    n = len(entries)
    disc = entries[0]
    for e in entries[1:]:
        disc = disc * e
    if (n // 2) % 2:
        disc = -disc
    return EWittClass(field, epsilon, n % 2, field.is_norm(disc))


def max_anisotropic_edform(data: SplitData, epsilon: int) -> EDForm:
    """Rank-2 form whose E-side class is the unique maximal anisotropic one."""
    cfg, E = data.cfg, data.E
    w0 = cfg.pi() if not E.ramified else cfg.f(cfg.nonresidue_r)
    assert not E.is_norm(w0)
    d1, d2 = cfg.f(1), -w0
    u1inv = data.u1.inv()
    if epsilon == 1:
        h = [[E.from_f(d1 * u1inv), E.zero()], [E.zero(), E.from_f(d2 * u1inv)]]
    else:
        g = E.gen()
        h = [[g.scale_f(d1 * u1inv), E.zero()], [E.zero(), g.scale_f(d2 * u1inv)]]
    form = EDForm(data, epsilon, tuple(tuple(r) for r in h))
    assert e_witt_class(form.rows(), E, epsilon).anisotropic_dim == 2 or epsilon == -1
    return form


# ---------------------------------------------------------------------------
# the category equivalence
# ---------------------------------------------------------------------------

def functor_Fe(form: EDForm, idem: IdempotentE):
    """F_e: the E-valued form tr_E o h~ restricted to V e.  Returns the
    t x t Gram matrix over E.  Nondegeneracy of the output is verified on
    every call."""
    data, E, t = form.split, form.split.E, form.t
    e = [list(r) for r in idem.mat]
    # E-basis of V e from the 2t candidate rows r_i^(c) e
    cands = []
    for i in range(t):
        for c in range(2):
            X = [[E.zero(), E.zero()] for _ in range(t)]
            X[i][c] = E.one()
            Xe = [list(vec) for vec in X]
            Xe = [[row_dot_e(Xe[r], [e[0][cc], e[1][cc]]) for cc in range(2)]
                  for r in range(t)]
            cands.append(Xe)
    basis, ech = [], []
    for X in cands:
        flat = [X[r][c] for r in range(t) for c in range(2)]
        red = flat[:]
        for prow in ech:
            lead = next(i for i, v in enumerate(prow) if not v.is_zero())
            if not red[lead].is_zero():
                c = red[lead] / prow[lead]
                red = [a - c * b for a, b in zip(red, prow)]
        if any(not v.is_zero() for v in red):
            ech.append(red)
            basis.append(X)
        if len(basis) == t:
            break
    if len(basis) < t:
        raise DegenerateForm("V e has unexpected dimension")
    gram = []
    for X in basis:
        row = []
        for Y in basis:
            val = form.value(X, Y)
            row.append(val[0][0] + val[1][1])
        gram.append(row)
    sg = _sigma_t(gram)
    if form.epsilon == -1:
        sg = [[-x for x in r] for r in sg]
    if not cmat_is_zero(mat_sub(gram, sg)):
        raise AssertionError("F_e output failed the hermitian check")
    try:
        cmat_inv(gram)
    except Singular:
        raise DegenerateForm("F_e produced a degenerate form (construction bug)")
    return gram


def functor_Ge(hE, data: SplitData, epsilon: int) -> EDForm:
    """G_e1: inverse functor on the canonical idempotent; on the standard
    frame it is H = u1^(-1) hE."""
    E = data.E
    u1inv = data.u1.inv()
    H = [[x.scale_f(u1inv) for x in row] for row in hE]
    form = EDForm(data, epsilon, tuple(tuple(r) for r in H))
    if not form.validate():
        raise DegenerateForm("G_e input must be nondegenerate eps-hermitian")
    return form


def similitude_scale(e: IdempotentE, f: IdempotentE):
    """Similitude g with g e g^(-1) = f and g theta(g) = s in E^x (here s
    lands in the sigma-fixed subfield F).  Returns (s, g)."""
    data = e.split
    E = data.E

    def line_of(idem):
        for row in idem.mat:
            if not (row[0].is_zero() and row[1].is_zero()):
                return list(row)
        raise DegenerateForm("zero idempotent")

    u = data.u_mat

    def b(x, y):
        col = cmat_mul(u, _sigma_t([y]))
        return row_dot_e(x, [col[0][0], col[1][0]])

    def perp(x):
        col = cmat_mul(u, _sigma_t([x]))
        return [col[1][0], -col[0][0]]

    x, y = line_of(e), line_of(f)
    qx, qy = _fixed_to_f(b(x, x)), _fixed_to_f(b(y, y))
    xp, yp = perp(x), perp(y)
    qxp, qyp = _fixed_to_f(b(xp, xp)), _fixed_to_f(b(yp, yp))
    mu = qx / qy
    target = mu * qyp / qxp
    try:
        c = solve_norm_equation(E, target)
    except NotASquare:
        raise NoSimilitudeFound("norm equation for the similitude is unsolvable")
    R_from = [y, yp]
    R_to = [x, [c * v for v in xp]]
    g = cmat_mul(cmat_inv(R_from), R_to)
    # verify both similitude conditions
    s_mat = cmat_mul(g, data.theta(g))
    if not cmat_is_zero(mat_sub(s_mat, scalar_mat(E, E.from_f(mu)))):
        raise NoSimilitudeFound("similitude verification failed")
    lhs = cmat_mul(g, cmat_mul([list(r) for r in e.mat], cmat_inv(g)))
    if not cmat_is_zero(mat_sub(lhs, [list(r) for r in f.mat])):
        raise NoSimilitudeFound("conjugation verification failed")
    return mu, g


# ---------------------------------------------------------------------------
# h~_beta, trace transfer, Witt towers
# ---------------------------------------------------------------------------

def _beta_normalize(cfg: FieldConfig, form: HermitianForm, beta):
    n = form.rank
    if isinstance(beta, QuaternionElement):
        zero = QuaternionElement.zero(cfg)
        beta = [[beta if i == j else zero for j in range(n)] for i in range(n)]
    else:
        beta = [list(r) for r in beta]
    M = form.rows()
    adj = dmat_mul(dmat_inv(M), dmat_mul(dmat_rho_t(beta), M))
    if not cmat_is_zero(mat_add(adj, beta)):
        raise NotSkewAdjoint("beta must be skew for sigma_h")
    sq = dmat_mul(beta, beta)
    d00 = sq[0][0]
    if not (d00.b.is_zero() and d00.a.b.is_zero()):
        raise NotQuadratic("beta^2 must be a scalar in F")
    for i in range(n):
        for j in range(n):
            want = d00 if i == j else QuaternionElement.zero(cfg)
            if not (sq[i][j] - want).is_zero():
                raise NotQuadratic("beta^2 must be a scalar matrix")
    delta = d00.a.a
    k = delta.valuation() // 2
    if k:
        sc = cfg.pi() ** (-k)
        beta = [[q.scale_f(sc) for q in row] for row in beta]
        delta = delta * cfg.pi() ** (-2 * k)
    if delta.valuation() == 0 and delta.is_square():
        raise NotQuadratic("beta generates F")
    return beta, delta


@dataclass(frozen=True)
class HtildeBeta:
    """The unique sesquilinear lift h~_beta together with its frame data."""

    form: HermitianForm
    beta: tuple                 # n x n matrix over D, beta^2 = delta
    split: SplitData
    edform: EDForm
    frame: tuple                # E-basis g_1..g_n of V e1 (D-coordinate vectors)

    def pair(self, v, w):
        """h~_beta(v, w) in tensor coordinates: 1 (x) h(v,w) +
        beta (x) h(v, beta w)/delta."""
        E = self.split.E
        delta = E.delta
        h0 = self.form.evaluate(v, w)
        h1 = self.form.evaluate(v, vec_apply([list(r) for r in self.beta], w))
        h1 = h1.scale_f(delta.inv())
        t0 = tensor_from_quat(E, h0)
        t1 = tensor_scale(E.gen(), tensor_from_quat(E, h1))
        return tensor_add(t0, t1)


def compute_htilde_beta(form: HermitianForm, beta, w_choice: int = 0) -> HtildeBeta:
    """Construct h~_beta for a skew beta generating a quadratic field."""
    cfg = form.cfg
    if not form.rank or not formvalid(form):
        raise DegenerateForm("invalid input form")
    beta, delta = _beta_normalize(cfg, form, beta)
    data = split_for_delta(cfg, delta, w_choice)
    E = data.E
    n = form.rank

    def beta_apply(v):
        return vec_apply(beta, v)

    def e_action(e: QuadExtElement, v):
        av = [q.scale_f(e.a) for q in v]
        bv = [q.scale_f(e.b) for q in beta_apply(v)]
        return [a + b for a, b in zip(av, bv)]

    def tensor_op(ten, v):
        basis = [QuaternionElement.one(cfg), QuaternionElement.u_elem(cfg),
                 QuaternionElement.pi_D(cfg),
                 QuaternionElement.u_elem(cfg) * QuaternionElement.pi_D(cfg)]
        out = None
        for coeff, d in zip(ten, basis):
            part = [q * d for q in e_action(coeff, v)]
            out = part if out is None else [a + b for a, b in zip(out, part)]
        return out

    e1_tensor = data.to_tensor([list(r) for r in data.e1().mat])
    # E-basis of V e1
    frame = []
    echelon: list = []
    cand_vectors = []
    dbasis = [QuaternionElement.one(cfg), QuaternionElement.u_elem(cfg),
              QuaternionElement.pi_D(cfg),
              QuaternionElement.u_elem(cfg) * QuaternionElement.pi_D(cfg)]
    for i in range(n):
        for d in dbasis:
            v = [QuaternionElement.zero(cfg)] * n
            v[i] = d
            cand_vectors.append(tensor_op(e1_tensor, v))

    def flat(v):
        return [c for q in v for c in quat_f_coords(q)]

    def reduce_vec(fv):
        red = fv[:]
        for prow in echelon:
            lead = next(i for i, x in enumerate(prow) if not x.is_zero())
            if not red[lead].is_zero():
                c = red[lead] / prow[lead]
                red = [a - c * b for a, b in zip(red, prow)]
        return red

    for v in cand_vectors:
        if len(frame) == n:
            break
        red = reduce_vec(flat(v))
        if all(x.is_zero() for x in red):
            continue
        frame.append(v)
        for w in (v, e_action(E.gen(), v)):
            red = reduce_vec(flat(w))
            if any(not x.is_zero() for x in red):
                echelon.append(red)
    if len(frame) < n:
        raise DegenerateForm("frame extraction failed")

    def pair(v, w):
        h0 = form.evaluate(v, w)
        h1 = form.evaluate(v, beta_apply(w)).scale_f(delta.inv())
        return tensor_add(tensor_from_quat(E, h0),
                          tensor_scale(E.gen(), tensor_from_quat(E, h1)))

    u1inv = data.u1.inv()
    H = []
    for gi in frame:
        row = []
        for gj in frame:
            val = data.to_matrix(pair(list(gi), list(gj)))
            if not (val[0][1].is_zero() and val[1][0].is_zero()
                    and val[1][1].is_zero()):
                raise DegenerateForm("frame vectors are not e1-adapted")
            row.append(val[0][0].scale_f(u1inv))
        H.append(row)
    ed = EDForm(data, form.epsilon, tuple(tuple(r) for r in H))
    if not ed.validate():
        raise DegenerateForm("h~_beta is degenerate at tracked precision")
    return HtildeBeta(form, tuple(tuple(r) for r in beta), data, ed,
                      tuple(tuple(v) for v in frame))


def formvalid(form: HermitianForm) -> bool:
    from .hermitian import validate as _v

    return _v(form)


def frame_rows(data: SplitData, t: int):
    """Standard frame row vectors r_i as t x 2 matrices."""
    E = data.E
    rows = []
    for i in range(t):
        X = [[E.zero(), E.zero()] for _ in range(t)]
        X[i][0] = E.one()
        rows.append(X)
    return rows


def trace_transfer(form: EDForm, lam_scale: FElement | None = None) -> HermitianForm:
    """Tr_lambda: the D-valued form (lambda (x) id_D) o h~ on the standard
    D-basis of the underlying module.  lambda = lam_scale * lambda_beta
    (lam_scale = None means lambda_beta itself)."""
    data, t = form.split, form.t
    cfg = data.cfg
    rows = frame_rows(data, t)
    gram = []
    for X in rows:
        grow = []
        for Y in rows:
            val = form.value(X, Y)
            ten = data.to_tensor(val)
            grow.append(tensor_lambda_apply(cfg, ten, lam_scale))
        gram.append(grow)
    out = HermitianForm.from_rows(form.epsilon, gram)
    if not formvalid(out):
        raise DegenerateForm("trace transfer produced an invalid form")
    return out


def trace_transfer_e_to_f(hE, field: QuadExtField, lam_scale: FElement | None = None):
    """Tr_lambda on an E-valued form: the composed F-bilinear form on the
    underlying F-space of E^t, as its 2t x 2t Gram matrix over F in the
    basis (e_1, ..., e_t, e_1 w, ..., e_t w)."""
    cfg = field.cfg
    t = len(hE)

    def lam(e: QuadExtElement) -> FElement:
        return e.a if lam_scale is None else e.a * lam_scale

    gen = field.gen()
    basis = [[field.one() if i == j else field.zero() for j in range(t)]
             for i in range(t)]
    basis += [[gen if i == j else field.zero() for j in range(t)]
              for i in range(t)]

    def pair(x, y):
        s = None
        for i in range(t):
            for j in range(t):
                term = x[i].sigma() * hE[i][j] * y[j]
                s = term if s is None else s + term
        return s

    return [[lam(pair(v, w)) for w in basis] for v in basis]


def realize_instance(form: EDForm):
    """Turn an abstract E (x) D form into an element-level pair (h, beta):
    h = Tr_{lambda_beta}(form) on the standard D-frame and beta the matrix of
    the E-generator action in that frame."""
    data, t = form.split, form.t
    cfg = data.cfg
    h = trace_transfer(form)
    gen_row = [data.E.gen(), data.E.zero()]
    z = data.quat_of_row(gen_row)
    zero = QuaternionElement.zero(cfg)
    beta = [[z if i == j else zero for j in range(t)] for i in range(t)]
    return h, beta


@dataclass(frozen=True)
class WittTowerValue:
    """A Witt tower: the E-side class at the canonical idempotent plus the
    scaling cocycle for any other idempotent."""

    split: SplitData
    epsilon: int
    class_at_e1: EWittClass
    edform: EDForm

    def value_at(self, idem: IdempotentE) -> EWittClass:
        s, _ = similitude_scale(self.split.e1(), idem)
        return self.class_at_e1.scale(s.inv())

    def value_at_direct(self, idem: IdempotentE) -> EWittClass:
        gram = functor_Fe(self.edform, idem)
        return e_witt_class(gram, self.split.E, self.epsilon)

    def trace_class(self):
        from .wittclass import class_of_form

        return class_of_form(trace_transfer(self.edform))


def witt_tower_of(form: HermitianForm, beta, w_choice: int = 0) -> WittTowerValue:
    ht = compute_htilde_beta(form, beta, w_choice)
    gram = functor_Fe(ht.edform, ht.split.e1())
    cls = e_witt_class(gram, ht.split.E, form.epsilon)
    return WittTowerValue(ht.split, form.epsilon, cls, ht.edform)

"""
Multisymplectic vector spaces over Q.

Nondegeneracy, l-orthogonal complements, subspace classification, the
canonical models V x Lambda^k_r V* and the constructive Darboux algorithm that
maps a space with a suitable 1-isotropic subspace onto its model.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import sympy

from ..errors import (
    DegenerateFormError, DegreeError, DimensionMismatchError, HypothesisError,
    InternalConsistencyError, NotIsotropicError, SingularMapError,
)
from .exterior_algebra import (
    Form, LinearMap, Vector, contraction_matrix, interior, interior_iterated, pullback, wedge,
)
from .subspace import Subspace, nullspace_subspace

logger = logging.getLogger(__name__)


def is_nondegenerate(omega):
    """
    Check that v -> i_v omega has trivial kernel.

    Args:
        omega: Form of degree >= 1

    Returns:
        True if the contraction map is injective
    """
    if omega.degree < 1:
        raise DegreeError("nondegeneracy needs a form of degree >= 1")
    return contraction_matrix(omega).rank() == omega.dim


class MultisymplecticSpace:
    """(Q^n, omega) with omega a nondegenerate (k+1)-form"""

    __slots__ = ("_omega",)

    def __init__(self, omega, check=True):
        if omega.degree < 2:
            raise DegreeError(f"a multisymplectic form has degree >= 2, got {omega.degree}")
        if check and not is_nondegenerate(omega):
            logger.error(f"Degenerate {omega.degree}-form on Q^{omega.dim}")
            raise DegenerateFormError(f"the {omega.degree}-form on Q^{omega.dim} is degenerate")
        self._omega = omega

    @property
    def omega(self):
        return self._omega

    @property
    def dim(self):
        return self._omega.dim

    @property
    def degree(self):
        return self._omega.degree

    @property
    def k(self):
        return self._omega.degree - 1

    def __eq__(self, other):
        return isinstance(other, MultisymplecticSpace) and self._omega == other.omega

    def __hash__(self):
        return hash(self._omega)

    def __repr__(self):
        return f"MultisymplecticSpace(dim={self.dim}, degree={self.degree})"


@dataclass(frozen=True)
class SubspaceClassification:
    """Result of classify"""
    l: int
    isotropic: bool
    coisotropic: bool
    lagrangian: bool
    multisymplectic: bool

    def labels(self):
        names = ("isotropic", "coisotropic", "lagrangian", "multisymplectic")
        return [name for name in names if getattr(self, name)]

    @property
    def summary(self):
        for name in ("lagrangian", "isotropic", "coisotropic", "multisymplectic"):
            if getattr(self, name):
                return name
        return "none"


def _check_subspace(S, W):
    if W.ambient != S.dim:
        raise DimensionMismatchError(f"subspace of Q^{W.ambient} in a space of dimension {S.dim}")


def perp(S, W, l):
    """
    The l-orthogonal complement of W.

    Args:
        S: MultisymplecticSpace
        W: Subspace of the same ambient space
        l: 1 <= l <= k

    Returns:
        Subspace of vectors v with i_{v ^ w1 ^ ... ^ wl} omega = 0 for all w's in W
    """
    _check_subspace(S, W)
    if not 1 <= l <= S.k:
        raise DegreeError(f"l={l} outside 1..{S.k}")
    if W.dim < l:
        return Subspace.full(S.dim)
    blocks = []
    for ws in combinations(W.basis, l):
        contracted = interior_iterated(ws, S.omega)
        if contracted.is_zero():
            continue
        blocks.append(contraction_matrix(contracted))
    if not blocks:
        return Subspace.full(S.dim)
    return nullspace_subspace(sympy.Matrix.vstack(*blocks), S.dim)


def classify(S, W, l):
    """
    Classify W as l-isotropic, l-coisotropic, l-lagrangian and multisymplectic.

    The multisymplectic flag always uses l = k.
    """
    complement = perp(S, W, l)
    isotropic = complement.contains(W)
    coisotropic = W.contains(complement)
    top = complement if l == S.k else perp(S, W, S.k)
    multisymplectic = W.intersection(top).dim == 0
    return SubspaceClassification(
        l=l,
        isotropic=isotropic,
        coisotropic=coisotropic,
        lagrangian=isotropic and coisotropic,
        multisymplectic=multisymplectic,
    )


def horizontal_dimension(q, k, r, e):
    """
    Dimension of the k-forms on Q^q vanishing on r arguments from an e-dimensional subspace.

    r = 0 means no horizontality condition.
    """
    if r == 0:
        return comb(q, k)
    return sum(comb(e, j) * comb(q - e, k - j) for j in range(min(r, k + 1)))


class ModelSpace:
    """
    Layout of the canonical model V x Lambda^k_r V*.

    Coordinates 1..n0 carry V, the remaining ones the coefficients of a k-form
    in the basis ``form_basis``. The basis of V used for the form slot is
    adapted to E: the reduced echelon vectors of E plus standard vectors,
    ordered by pivot column.
    """

    def __init__(self, base_dim, degree_k, r=0, E=None):
        if base_dim < 1 or degree_k < 1:
            raise DegreeError(f"model needs n0 >= 1 and k >= 1, got n0={base_dim}, k={degree_k}")
        if degree_k > base_dim:
            raise DegreeError(f"k={degree_k} exceeds n0={base_dim}: the form slot would be zero")
        if not 0 <= r <= degree_k:
            raise DegreeError(f"r={r} outside 0..{degree_k}")
        if r > 0 and E is None:
            raise ValueError("a horizontal model (r > 0) needs the subspace E")
        if E is not None and E.ambient != base_dim:
            raise DimensionMismatchError(f"E lives in Q^{E.ambient}, expected Q^{base_dim}")
        self.base_dim = base_dim
        self.degree_k = degree_k
        self.r = r
        self.E = E if r > 0 else None
        self._build_form_basis()

    def _build_form_basis(self):
        n0 = self.base_dim
        if self.E is None or self.E.dim == 0:
            columns = [Vector.basis(n0, i) for i in range(1, n0 + 1)]
            vertical = set()
        else:
            by_pivot = {}
            vertical = set()
            for row in self.E.echelon:
                pivot = next(i for i, c in enumerate(row) if c != 0)
                by_pivot[pivot] = row
                vertical.add(pivot + 1)
            for i in range(n0):
                by_pivot.setdefault(i, Vector.basis(n0, i + 1))
            columns = [by_pivot[i] for i in range(n0)]
        self.adapted_basis = LinearMap.from_columns(columns)
        self.vertical_indices = frozenset(vertical)
        dual = self.adapted_basis.inverse()
        self.dual_covectors = [
            Form(n0, 1, {(j + 1,): dual.matrix[i, j] for j in range(n0)}) for i in range(n0)
        ]
        labels = []
        for alpha in combinations(range(1, n0 + 1), self.degree_k):
            if self.r > 0 and len(self.vertical_indices.intersection(alpha)) >= self.r:
                continue
            labels.append(alpha)
        self.form_labels = labels
        self.form_basis = [self._wedge_dual(alpha) for alpha in labels]

    def _wedge_dual(self, alpha):
        result = Form.constant(self.base_dim, 1)
        for i in alpha:
            result = wedge(result, self.dual_covectors[i - 1])
        return result

    @property
    def form_dim(self):
        return len(self.form_labels)

    @property
    def dim(self):
        return self.base_dim + self.form_dim

    def projection(self):
        """Projection of the model onto its V slot."""
        rows = [[1 if j == i else 0 for j in range(self.dim)] for i in range(self.base_dim)]
        return LinearMap.from_rows(rows)

    def lift(self, form):
        """Pull a form on V back to the whole model along the projection."""
        return pullback(self.projection(), form)

    def omega(self):
        """
        The canonical form -sum_j f*_j ^ gamma_j.

        Evaluated on pairs (v_i, gamma_i) this is sum_i (-1)^i gamma_i(v_1, .., v_i omitted, .., v_{k+1}).
        """
        total = Form.zero(self.dim, self.degree_k + 1)
        for j, gamma in enumerate(self.form_basis):
            f_star = Form.basis(self.dim, self.base_dim + j + 1)
            total = total - wedge(f_star, self.lift(gamma))
        return total

    def space(self):
        return MultisymplecticSpace(self.omega())

    def v_slot(self):
        return Subspace.coordinate(self.dim, range(1, self.base_dim + 1))

    def form_slot(self):
        return Subspace.coordinate(self.dim, range(self.base_dim + 1, self.dim + 1))

    def coordinate_labels(self):
        return [f"e{i}" for i in range(1, self.base_dim + 1)] + [
            "f" + "".join(str(i) for i in alpha) for alpha in self.form_labels
        ]

    def describe(self):
        return {
            "n0": self.base_dim,
            "k": self.degree_k,
            "r": self.r,
            "E": [[str(c) for c in v] for v in self.E.basis] if self.E is not None else [],
            "dim": self.dim,
            "coordinates": self.coordinate_labels(),
        }

    def __repr__(self):
        return f"ModelSpace(n0={self.base_dim}, k={self.degree_k}, r={self.r}, dim={self.dim})"


def model_space(n0, k, r=0, E=None):
    """
    Build the canonical model and its multisymplectic space.

    Returns:
        (ModelSpace, MultisymplecticSpace)
    """
    model = ModelSpace(n0, k, r, E)
    logger.debug(f"Built {model!r}")
    return model, model.space()


def product_minus(S1, S2):
    """(Q^{n1+n2}, pi1* omega1 - pi2* omega2)."""
    if S1.degree != S2.degree:
        raise DimensionMismatchError(f"product of forms of degree {S1.degree} and {S2.degree}")
    n1, n2 = S1.dim, S2.dim
    total = n1 + n2
    pi1 = LinearMap.from_rows([[1 if j == i else 0 for j in range(total)] for i in range(n1)])
    pi2 = LinearMap.from_rows([[1 if j == n1 + i else 0 for j in range(total)] for i in range(n2)])
    return MultisymplecticSpace(pullback(pi1, S1.omega) - pullback(pi2, S2.omega))


def graph(phi):
    """Graph {(v, phi v)} as a subspace of the product."""
    n = phi.domain_dim
    vectors = []
    for j in range(1, n + 1):
        e = Vector.basis(n, j)
        vectors.append(Vector(list(e) + list(phi.apply(e))))
    return Subspace(n + phi.codomain_dim, vectors)


def _check_map(S1, S2, phi):
    if phi.domain_dim != S1.dim or phi.codomain_dim != S2.dim:
        raise DimensionMismatchError(
            f"map {phi.domain_dim}->{phi.codomain_dim} between spaces of dimension {S1.dim} and {S2.dim}")
    if not phi.is_invertible():
        raise SingularMapError("phi is singular")


def is_multisymplectomorphism(S1, S2, phi):
    """phi* omega2 == omega1."""
    _check_map(S1, S2, phi)
    return pullback(phi, S2.omega) == S1.omega


def graph_is_multisymplectomorphism(S1, S2, phi):
    """The graph of phi is k-lagrangian in S1 (-) S2."""
    _check_map(S1, S2, phi)
    product = product_minus(S1, S2)
    return classify(product, graph(phi), S1.k).lagrangian


def quotient_complement(W):
    """Standard vectors spanning a complement of W; they represent the quotient."""
    return W.complement_basis()


def _iota_matrix(S, W, representatives):
    k = S.k
    tuples = list(combinations(range(len(representatives)), k))
    entries = sympy.zeros(len(tuples), W.dim)
    for col, w in enumerate(W.basis):
        contracted = interior(w, S.omega)
        for row, idx in enumerate(tuples):
            entries[row, col] = interior_iterated([representatives[i] for i in idx], contracted).scalar_value()
    return entries


def iota(S, W):
    """
    w -> class of i_w omega in Lambda^k(V/W)*.

    The quotient is represented by ``quotient_complement(W)`` and the target by
    the increasing k-tuples of that basis.

    Raises:
        NotIsotropicError: if W is not 1-isotropic
    """
    _check_subspace(S, W)
    if W.dim and not classify(S, W, 1).isotropic:
        logger.error("iota requested for a subspace that is not 1-isotropic")
        raise NotIsotropicError("i_w omega does not vanish on W: W is not 1-isotropic")
    if W.dim == 0:
        return LinearMap.zero(comb(S.dim, S.k), 0)
    return LinearMap(_iota_matrix(S, W, quotient_complement(W)))


@dataclass
class DarbouxResult:
    """Output of the Darboux construction"""
    space: MultisymplecticSpace
    W: Subspace
    V: Subspace
    psi: LinearMap
    model: ModelSpace
    model_space: MultisymplecticSpace
    darboux_basis: list
    normalization: object
    E: Subspace = None
    iterations: int = 0
    log: list = field(default_factory=list)

    @property
    def e_vectors(self):
        return self.darboux_basis[:self.model.base_dim]

    @property
    def f_vectors(self):
        return self.darboux_basis[self.model.base_dim:]

    def dual_basis(self):
        """Covectors dual to the Darboux basis, in the same order."""
        inverse = LinearMap.from_columns(self.darboux_basis).inverse()
        n = self.space.dim
        return [Form(n, 1, {(j + 1,): inverse.matrix[i, j] for j in range(n)}) for i in range(n)]

    def e_star(self, alpha, dual=None):
        dual = dual or self.dual_basis()
        result = Form.constant(self.space.dim, 1)
        for i in alpha:
            result = wedge(result, dual[i - 1])
        return result

    def relations_hold(self):
        """i_{f_alpha} omega == e*_{alpha_1} ^ ... ^ e*_{alpha_k} for every label alpha."""
        dual = self.dual_basis()
        for alpha, f in zip(self.model.form_labels, self.f_vectors):
            if interior(f, self.space.omega) != self.e_star(alpha, dual):
                return False
        return True


def _project_onto(U, W, vector):
    """Coordinates of the U-component of vector in the splitting U (+) W."""
    basis = list(U.basis) + list(W.basis)
    coords = Subspace(U.ambient, basis).coordinates_of(vector)
    return coords[:U.dim]


def _grow_lagrangian_complement(S, W):
    k = S.k
    n = S.dim
    start = next(i for i in range(1, n + 1) if not W.contains_vector(Vector.basis(n, i)))
    U = Subspace(n, [Vector.basis(n, start)])
    iterations = 0
    while U.dim + W.dim < n:
        iterations += 1
        occupied = U + W
        chosen = next((v for v in perp(S, U, k).echelon if not occupied.contains_vector(v)), None)
        if chosen is None:
            raise InternalConsistencyError(
                f"no vector of the k-orthogonal complement extends U (dim {U.dim}) transversally to W")
        U = Subspace(n, list(U.basis) + [chosen])
        logger.debug(f"Darboux step {iterations}: dim U = {U.dim}")
    return U, iterations


def _check_hypotheses(S, W, r, E):
    violations = []
    details = {}
    n = S.dim
    k = S.k
    q = n - W.dim
    isotropic = W.dim == 0 or classify(S, W, 1).isotropic
    if not isotropic:
        violations.append("one_isotropic")
    e = 0
    if r > 0:
        e = (E + W).dim - W.dim
        if isotropic:
            horizontal = True
            quotient_vertical = Subspace.span(n, [v for v in E.basis])
            if r <= quotient_vertical.dim:
                for w in W.basis:
                    for vs in combinations(quotient_vertical.basis, r):
                        if not interior_iterated([w, *vs], S.omega).is_zero():
                            horizontal = False
                            break
                    if not horizontal:
                        break
            if not horizontal:
                violations.append("horizontality")
    target = horizontal_dimension(q, k, r, e)
    if W.dim != target:
        violations.append("dimension")
        details["dimension"] = f"dim W = {W.dim}, expected {target}"
    if q <= k:
        violations.append("codimension")
        details["codimension"] = f"dim(V/W) = {q} must exceed k = {k}"
    if isotropic and W.dim == target and q > k:
        rank = _iota_matrix(S, W, quotient_complement(W)).rank()
        if rank != W.dim:
            violations.append("iota_isomorphism")
            details["iota_isomorphism"] = f"rank {rank} of {W.dim}"
    if violations:
        logger.error(f"Darboux hypotheses violated: {violations}")
        raise HypothesisError(violations, details)
    return q, e


def _darboux(S, W, r=0, E=None):
    _check_subspace(S, W)
    if r > 0:
        if E is None:
            raise ValueError("darboux_horizontal needs E")
        if E.ambient != S.dim:
            raise DimensionMismatchError(f"E lives in Q^{E.ambient}, expected Q^{S.dim}")
        if r > S.k:
            raise DegreeError(f"r={r} exceeds k={S.k}")
    q, e = _check_hypotheses(S, W, r, E)
    U, iterations = _grow_lagrangian_complement(S, W)
    logger.info(f"Darboux: k-lagrangian complement of dimension {U.dim} after {iterations} steps")

    E_base = None
    if r > 0:
        projected = [_project_onto(U, W, v) for v in E.basis]
        E_base = Subspace.span(q, projected)
    model = ModelSpace(q, S.k, r, E_base)
    model_form = model.omega()

    # adapted basis of V expressed in the ambient space
    V_adapted = []
    for column in model.adapted_basis.columns():
        combo = Vector.zero(S.dim)
        for c, u in zip(column, U.basis):
            combo = combo + u * c
        V_adapted.append(combo)

    R = sympy.zeros(model.form_dim, W.dim)
    for col, w in enumerate(W.basis):
        contracted = interior(w, S.omega)
        for row, alpha in enumerate(model.form_labels):
            R[row, col] = interior_iterated([V_adapted[i - 1] for i in alpha], contracted).scalar_value()
    splitting = LinearMap.from_columns(list(U.basis) + list(W.basis))
    splitting_inv = splitting.inverse().matrix

    def assemble(c):
        block = sympy.diag(sympy.eye(q), c * R)
        return LinearMap(block * splitting_inv)

    probe = assemble(sympy.Integer(1))
    unscaled = pullback(probe, model_form)
    c = None
    for key, value in unscaled.coeffs.items():
        c = S.omega.coefficient(key) / value
        break
    if c is None or c == 0:
        raise InternalConsistencyError("could not normalize the Darboux map")
    psi = assemble(c)
    if pullback(psi, model_form) != S.omega:
        logger.error("Darboux pullback identity failed")
        raise InternalConsistencyError("psi* omega_model != omega")
    logger.debug(f"Darboux normalization constant {c}")

    psi_inv = psi.inverse()
    # e_i follow the adapted basis of the model's V slot; f_alpha carry the sign
    # that makes i_{f_alpha} omega = +e*_alpha
    e_vectors = [
        psi_inv.apply(Vector(list(column) + [0] * model.form_dim))
        for column in model.adapted_basis.columns()
    ]
    f_vectors = [-psi_inv.apply(Vector.basis(model.dim, q + j)) for j in range(1, model.form_dim + 1)]
    darboux_basis = e_vectors + f_vectors

    V = Subspace(S.dim, list(U.basis))
    return DarbouxResult(
        space=S, W=W, V=V, psi=psi, model=model, model_space=MultisymplecticSpace(model_form, check=False),
        darboux_basis=darboux_basis, normalization=c, E=E, iterations=iterations,
    )


def darboux(S, W):
    """
    Map S onto its model V x Lambda^k V*.

    Args:
        S: MultisymplecticSpace
        W: 1-isotropic subspace with dim W = C(dim S - dim W, k) and codimension > k

    Returns:
        DarbouxResult with psi* omega_model == S.omega

    Raises:
        HypothesisError: listing every violated hypothesis
    """
    return _darboux(S, W)


def darboux_horizontal(S, W, E, r):
    """
    Map S onto the r-horizontal model V x Lambda^k_r V*.

    Args:
        S: MultisymplecticSpace
        W: 1-isotropic subspace
        E: ambient representatives of the vertical subspace of S/W
        r: horizontality order, 1 <= r <= k
    """
    if r < 1:
        raise DegreeError(f"horizontal order r={r} must be >= 1")
    return _darboux(S, W, r, E)


@dataclass(frozen=True)
class DarbouxExpansion:
    """omega = sum_alpha f*_alpha ^ e*_alpha in a Darboux dual basis"""
    terms: list
    form: Form
    certified: bool


def darboux_expansion(result):
    """Re-express omega in the Darboux dual basis and compare coefficients."""
    dual = result.dual_basis()
    q = result.model.base_dim
    terms = []
    total = Form.zero(result.space.dim, result.space.degree)
    for j, alpha in enumerate(result.model.form_labels):
        f_star = dual[q + j]
        e_star = result.e_star(alpha, dual)
        terms.append((alpha, f_star, e_star))
        total = total + wedge(f_star, e_star)
    certified = total == result.space.omega
    if not certified:
        logger.warning("Darboux expansion does not reproduce omega")
    return DarbouxExpansion(terms=terms, form=total, certified=certified)

//! The spaces `V`, `S^2 V`, `Lambda^4 V` in the fixed basis `{x, y, z, w}`:
//! internal products, wedge coefficients, Gram matrices and ranks, quadric
//! factorization, and invertible coordinate changes.

use std::fmt;

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::mat;

/// The four basis variables of `V`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
    Z,
    W,
}

pub const VARS: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::W];

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
            Var::W => 3,
        }
    }

    pub fn from_index(i: usize) -> Var {
        VARS[i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "w"][self.index()]
    }
}

/// A linear form on `V`, stored as coefficients of `x, y, z, w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinForm(pub [Scalar; 4]);

impl LinForm {
    pub fn zero(spec: FieldSpec) -> Self {
        LinForm(std::array::from_fn(|_| spec.zero()))
    }

    pub fn var(spec: FieldSpec, v: Var) -> Self {
        let mut l = LinForm::zero(spec);
        l.0[v.index()] = spec.one();
        l
    }

    pub fn from_i64(spec: FieldSpec, c: [i64; 4]) -> Self {
        LinForm(std::array::from_fn(|i| spec.from_i64(c[i])))
    }

    pub fn spec(&self) -> FieldSpec {
        self.0[0].spec()
    }

    pub fn coeff(&self, v: Var) -> &Scalar {
        &self.0[v.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, rhs: &LinForm) -> LinForm {
        LinForm(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }

    pub fn sub(&self, rhs: &LinForm) -> LinForm {
        LinForm(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }

    pub fn neg(&self) -> LinForm {
        LinForm(std::array::from_fn(|i| -&self.0[i]))
    }

    pub fn scale(&self, c: &Scalar) -> LinForm {
        LinForm(std::array::from_fn(|i| &self.0[i] * c))
    }

    /// Symmetric product of two linear forms.
    pub fn mul(&self, rhs: &LinForm) -> QuadForm {
        let mut q = QuadForm::zero(self.spec());
        for i in 0..4 {
            for j in 0..4 {
                let t = &self.0[i] * &rhs.0[j];
                let k = mono_index(i.min(j), i.max(j));
                q.0[k] = &q.0[k] + &t;
            }
        }
        q
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, Var::from_index(i).name())?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Monomial order used everywhere a quadratic form is flattened:
/// `x2, xy, xz, xw, y2, yz, yw, z2, zw, w2`.
pub const MONOMIALS: [&str; 10] = ["x2", "xy", "xz", "xw", "y2", "yz", "yw", "z2", "zw", "w2"];

/// Index of the monomial `var_i * var_j` (`i <= j`) in [`MONOMIALS`].
pub fn mono_index(i: usize, j: usize) -> usize {
    const TABLE: [[usize; 4]; 4] = [
        [0, 1, 2, 3],
        [1, 4, 5, 6],
        [2, 5, 7, 8],
        [3, 6, 8, 9],
    ];
    TABLE[i][j]
}

/// The variable pair `(i, j)`, `i <= j`, of monomial index `k`.
pub fn mono_vars(k: usize) -> (usize, usize) {
    const PAIRS: [(usize, usize); 10] = [
        (0, 0),
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 1),
        (1, 2),
        (1, 3),
        (2, 2),
        (2, 3),
        (3, 3),
    ];
    PAIRS[k]
}

/// A quadratic form in `S^2 V`, stored as the ten monomial coefficients in
/// the order of [`MONOMIALS`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadForm(pub [Scalar; 10]);

impl QuadForm {
    pub fn zero(spec: FieldSpec) -> Self {
        QuadForm(std::array::from_fn(|_| spec.zero()))
    }

    /// Test/readability helper: builds a form from `(monomial, coefficient)`
    /// pairs like `("x2", 1)`.
    pub fn from_monomials(spec: FieldSpec, terms: &[(&str, i64)]) -> Self {
        let mut q = QuadForm::zero(spec);
        for (name, c) in terms {
            let k = MONOMIALS
                .iter()
                .position(|m| m == name)
                .unwrap_or_else(|| panic!("unknown monomial {name:?}"));
            q.0[k] = &q.0[k] + &spec.from_i64(*c);
        }
        q
    }

    pub fn spec(&self) -> FieldSpec {
        self.0[0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn coeff(&self, a: Var, b: Var) -> &Scalar {
        &self.0[mono_index(a.index().min(b.index()), a.index().max(b.index()))]
    }

    pub fn add(&self, rhs: &QuadForm) -> QuadForm {
        QuadForm(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }

    pub fn sub(&self, rhs: &QuadForm) -> QuadForm {
        QuadForm(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }

    pub fn neg(&self) -> QuadForm {
        QuadForm(std::array::from_fn(|i| -&self.0[i]))
    }

    pub fn scale(&self, c: &Scalar) -> QuadForm {
        QuadForm(std::array::from_fn(|i| &self.0[i] * c))
    }

    /// The symmetric Gram matrix: `G_ii` is the coefficient of the i-th
    /// square, `G_ij` half the mixed coefficient (characteristic != 2).
    pub fn gram(&self) -> Vec<Vec<Scalar>> {
        let spec = self.spec();
        let half = spec.from_i64(2).inv();
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let c = &self.0[mono_index(i.min(j), i.max(j))];
                        if i == j {
                            c.clone()
                        } else {
                            c * &half
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Rebuilds the form from a symmetric Gram matrix.
    pub fn from_gram(g: &[Vec<Scalar>], spec: FieldSpec) -> QuadForm {
        let mut q = QuadForm::zero(spec);
        for k in 0..10 {
            let (i, j) = mono_vars(k);
            q.0[k] = if i == j {
                g[i][j].clone()
            } else {
                &g[i][j] + &g[j][i]
            };
        }
        q
    }

    /// Evaluates the form on a coefficient vector.
    pub fn eval(&self, v: &[Scalar; 4]) -> Scalar {
        let mut acc = self.spec().zero();
        for k in 0..10 {
            let (i, j) = mono_vars(k);
            acc += &(&self.0[k] * &(&v[i] * &v[j]));
        }
        acc
    }

    /// The ternary form obtained by setting `w = 0`.
    pub fn drop_w(&self) -> TernaryQuadForm {
        let mut t = TernaryQuadForm::zero(self.spec());
        for k in 0..6 {
            let (i, j) = mono3_vars(k);
            t.0[k] = self.0[mono_index(i, j)].clone();
        }
        t
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.0, &MONOMIALS)
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, coeffs: &[Scalar], names: &[&str]) -> fmt::Result {
    let mut first = true;
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "{c}*{name}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Internal product `i_v q` realized as the partial derivative with respect
/// to the i-th variable: `i_x(x^2) = 2x`.
pub fn internal_product(v: Var, q: &QuadForm) -> LinForm {
    let spec = q.spec();
    let i = v.index();
    let two = spec.from_i64(2);
    LinForm(std::array::from_fn(|j| {
        if i == j {
            &two * &q.0[mono_index(i, i)]
        } else {
            q.0[mono_index(i.min(j), i.max(j))].clone()
        }
    }))
}

/// Coefficient of `l1 ^ l2 ^ l3 ^ l4` against `x ^ y ^ z ^ w`: the 4x4
/// determinant of the coefficient rows in the given order.
pub fn wedge4(l1: &LinForm, l2: &LinForm, l3: &LinForm, l4: &LinForm) -> Scalar {
    let rows: Vec<Vec<Scalar>> = [l1, l2, l3, l4]
        .iter()
        .map(|l| l.0.to_vec())
        .collect();
    mat::det(rows, l1.spec())
}

/// Rank of the Gram matrix, by exact elimination.
pub fn gram_rank(q: &QuadForm) -> usize {
    mat::rank(q.gram())
}

/// Factors a quadric of Gram rank at most 2 into two linear forms over the
/// active field.
///
/// Rank 1 always factors; rank 2 factors exactly when the discriminant of
/// the reduced binary form is a square, otherwise the factorization lives in
/// a quadratic extension and `NeedsExtension` is returned. Rank >= 3 input is
/// a precondition violation.
pub fn factor_quadric(q: &QuadForm) -> crate::Result<(LinForm, LinForm)> {
    let spec = q.spec();
    if q.is_zero() {
        return Err(Error::precondition("factor_quadric: zero form"));
    }
    let g = q.gram();
    let rank = mat::rank(g.clone());
    if rank >= 3 {
        return Err(Error::precondition(format!(
            "factor_quadric: Gram rank {rank} >= 3, form is irreducible"
        )));
    }
    if rank == 1 {
        return Ok(factor_rank_one(&g, spec));
    }
    // rank 2: ensure some diagonal entry is nonzero, transforming by
    // x_i -> x_i + x_j if necessary
    if let Some(i) = (0..4).find(|&i| !g[i][i].is_zero()) {
        return factor_rank_two(q, &g, i);
    }
    let (i, j) = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .find(|&(i, j)| !g[i][j].is_zero())
        .expect("nonzero rank-2 form has a nonzero Gram entry");
    let mut m: Vec<Vec<Scalar>> = (0..4)
        .map(|r| (0..4).map(|c| spec.from_i64((r == c) as i64)).collect())
        .collect();
    m[i][j] = spec.one();
    let t = CoordChange::new(m)?;
    let qt = t.apply_quad(q);
    let gt = qt.gram();
    debug_assert!(!gt[i][i].is_zero());
    let (u, v) = factor_rank_two(&qt, &gt, i)?;
    let ti = t.inverse();
    Ok((ti.apply_lin(&u), ti.apply_lin(&v)))
}

fn factor_rank_one(g: &[Vec<Scalar>], spec: FieldSpec) -> (LinForm, LinForm) {
    // a rank-1 symmetric matrix in odd characteristic has a nonzero diagonal
    let i = (0..4)
        .find(|&i| !g[i][i].is_zero())
        .expect("rank-1 Gram matrix has a nonzero diagonal entry");
    let row = LinForm(std::array::from_fn(|j| g[i][j].clone()));
    let _ = spec;
    (row.scale(&g[i][i].inv()), row)
}

fn factor_rank_two(q: &QuadForm, g: &[Vec<Scalar>], i: usize) -> crate::Result<(LinForm, LinForm)> {
    let spec = q.spec();
    // split off the square at variable i: q = (1/g_ii) l^2 + q', with q' of
    // rank 1 supported away from variable i
    let l = LinForm(std::array::from_fn(|j| g[i][j].clone()));
    let a = g[i][i].inv();
    let rest = q.sub(&l.mul(&l).scale(&a));
    let gr = rest.gram();
    debug_assert_eq!(mat::rank(gr.clone()), 1);
    let (m1, m2) = factor_rank_one(&gr, spec);
    // q = a l^2 + mu m^2 with m = m2, mu = leading inverse from m1
    let k = (0..4).find(|&k| !m2.0[k].is_zero()).expect("nonzero factor");
    let mu = &m1.0[k] * &m2.0[k].inv();
    // q = a (l - s m)(l + s m) requires s^2 = -mu / a
    let s = (-&(&mu * &a.inv()))
        .sqrt_if_square()
        .ok_or_else(|| Error::needs_extension("rank-2 quadric with non-square discriminant"))?;
    let sm = m2.scale(&s);
    Ok((l.sub(&sm).scale(&a), l.add(&sm)))
}

/// An invertible change of basis of `V`, acting on coefficient vectors of
/// linear forms by left multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordChange {
    m: Vec<Vec<Scalar>>,
    minv: Vec<Vec<Scalar>>,
}

impl CoordChange {
    /// Wraps a 4x4 matrix; rejects singular input.
    pub fn new(m: Vec<Vec<Scalar>>) -> crate::Result<Self> {
        assert_eq!(m.len(), 4);
        let spec = m[0][0].spec();
        let minv = mat::inverse(&m, spec)
            .ok_or_else(|| Error::precondition("coordinate change must be invertible"))?;
        Ok(CoordChange { m, minv })
    }

    pub fn from_i64(spec: FieldSpec, m: [[i64; 4]; 4]) -> crate::Result<Self> {
        CoordChange::new(
            m.iter()
                .map(|r| r.iter().map(|&v| spec.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn identity(spec: FieldSpec) -> Self {
        CoordChange::from_i64(
            spec,
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        )
        .expect("identity is invertible")
    }

    /// Swaps two variables.
    pub fn swap(spec: FieldSpec, a: Var, b: Var) -> Self {
        let mut m = [[0i64; 4]; 4];
        let (i, j) = (a.index(), b.index());
        for k in 0..4 {
            let target = if k == i { j } else if k == j { i } else { k };
            m[k][target] = 1;
        }
        CoordChange::from_i64(spec, m).expect("permutation is invertible")
    }

    pub fn spec(&self) -> FieldSpec {
        self.m[0][0].spec()
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.m
    }

    pub fn det(&self) -> Scalar {
        mat::det(self.m.clone(), self.spec())
    }

    pub fn inverse(&self) -> CoordChange {
        CoordChange {
            m: self.minv.clone(),
            minv: self.m.clone(),
        }
    }

    /// `self` after `other`: `(self.compose(other)).apply = self.apply ∘ other.apply`.
    pub fn compose(&self, other: &CoordChange) -> CoordChange {
        CoordChange {
            m: mat::mat_mul(&self.m, &other.m, self.spec()),
            minv: mat::mat_mul(&other.minv, &self.minv, self.spec()),
        }
    }

    pub fn apply_lin(&self, l: &LinForm) -> LinForm {
        let spec = self.spec();
        LinForm(std::array::from_fn(|i| {
            let mut acc = spec.zero();
            for j in 0..4 {
                acc += &(&self.m[i][j] * &l.0[j]);
            }
            acc
        }))
    }

    pub fn apply_quad(&self, q: &QuadForm) -> QuadForm {
        let spec = self.spec();
        let g = q.gram();
        let mt: Vec<Vec<Scalar>> = (0..4)
            .map(|i| (0..4).map(|j| self.m[j][i].clone()).collect())
            .collect();
        let gg = mat::mat_mul(&mat::mat_mul(&self.m, &g, spec), &mt, spec);
        QuadForm::from_gram(&gg, spec)
    }

    /// Extends a 3x3 change on `span{x, y, z}` by the identity on `w`.
    pub fn embed3(u: &CoordChange3) -> CoordChange {
        let spec = u.m[0][0].spec();
        let mut m: Vec<Vec<Scalar>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| spec.from_i64((i == j && i == 3) as i64))
                    .collect()
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = u.m[i][j].clone();
            }
        }
        CoordChange::new(m).expect("block-diagonal extension of invertible map")
    }
}

/// Linear form in three variables (a chosen complement `U` of a direction).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinForm3(pub [Scalar; 3]);

impl LinForm3 {
    pub fn zero(spec: FieldSpec) -> Self {
        LinForm3(std::array::from_fn(|_| spec.zero()))
    }

    pub fn spec(&self) -> FieldSpec {
        self.0[0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, rhs: &LinForm3) -> TernaryQuadForm {
        let mut q = TernaryQuadForm::zero(self.spec());
        for i in 0..3 {
            for j in 0..3 {
                let t = &self.0[i] * &rhs.0[j];
                let k = mono3_index(i.min(j), i.max(j));
                q.0[k] = &q.0[k] + &t;
            }
        }
        q
    }
}

pub const MONOMIALS3: [&str; 6] = ["x2", "xy", "xz", "y2", "yz", "z2"];

pub fn mono3_index(i: usize, j: usize) -> usize {
    const TABLE: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    TABLE[i][j]
}

pub fn mono3_vars(k: usize) -> (usize, usize) {
    [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)][k]
}

/// A quadratic form in three variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryQuadForm(pub [Scalar; 6]);

impl TernaryQuadForm {
    pub fn zero(spec: FieldSpec) -> Self {
        TernaryQuadForm(std::array::from_fn(|_| spec.zero()))
    }

    pub fn from_monomials(spec: FieldSpec, terms: &[(&str, i64)]) -> Self {
        let mut q = TernaryQuadForm::zero(spec);
        for (name, c) in terms {
            let k = MONOMIALS3
                .iter()
                .position(|m| m == name)
                .unwrap_or_else(|| panic!("unknown ternary monomial {name:?}"));
            q.0[k] = &q.0[k] + &spec.from_i64(*c);
        }
        q
    }

    pub fn spec(&self) -> FieldSpec {
        self.0[0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> TernaryQuadForm {
        TernaryQuadForm(std::array::from_fn(|i| &self.0[i] * c))
    }

    pub fn sub(&self, rhs: &TernaryQuadForm) -> TernaryQuadForm {
        TernaryQuadForm(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }

    pub fn gram(&self) -> Vec<Vec<Scalar>> {
        let spec = self.spec();
        let half = spec.from_i64(2).inv();
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let c = &self.0[mono3_index(i.min(j), i.max(j))];
                        if i == j {
                            c.clone()
                        } else {
                            c * &half
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn eval(&self, v: &[Scalar; 3]) -> Scalar {
        let mut acc = self.spec().zero();
        for k in 0..6 {
            let (i, j) = mono3_vars(k);
            acc += &(&self.0[k] * &(&v[i] * &v[j]));
        }
        acc
    }

    /// Polar form `B(a, b) = (q(a+b) - q(a) - q(b))/2` evaluated via Gram.
    pub fn polar(&self, a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
        let g = self.gram();
        let mut acc = self.spec().zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &(&a[i] * &(&g[i][j] * &b[j]));
            }
        }
        acc
    }
}

pub fn gram_rank3(q: &TernaryQuadForm) -> usize {
    mat::rank(q.gram())
}

impl fmt::Display for TernaryQuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.0, &MONOMIALS3)
    }
}

/// An invertible change of basis on the 3-dimensional subspace `U`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordChange3 {
    m: Vec<Vec<Scalar>>,
    minv: Vec<Vec<Scalar>>,
}

impl CoordChange3 {
    pub fn new(m: Vec<Vec<Scalar>>) -> crate::Result<Self> {
        assert_eq!(m.len(), 3);
        let spec = m[0][0].spec();
        let minv = mat::inverse(&m, spec)
            .ok_or_else(|| Error::precondition("coordinate change must be invertible"))?;
        Ok(CoordChange3 { m, minv })
    }

    pub fn identity(spec: FieldSpec) -> Self {
        CoordChange3::new(
            (0..3)
                .map(|i| (0..3).map(|j| spec.from_i64((i == j) as i64)).collect())
                .collect(),
        )
        .expect("identity is invertible")
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.m
    }

    pub fn spec(&self) -> FieldSpec {
        self.m[0][0].spec()
    }

    pub fn det(&self) -> Scalar {
        mat::det(self.m.clone(), self.spec())
    }

    pub fn apply_quad(&self, q: &TernaryQuadForm) -> TernaryQuadForm {
        let spec = self.spec();
        let g = q.gram();
        let mt: Vec<Vec<Scalar>> = (0..3)
            .map(|i| (0..3).map(|j| self.m[j][i].clone()).collect())
            .collect();
        let gg = mat::mat_mul(&mat::mat_mul(&self.m, &g, spec), &mt, spec);
        let mut out = TernaryQuadForm::zero(spec);
        for k in 0..6 {
            let (i, j) = mono3_vars(k);
            out.0[k] = if i == j {
                gg[i][j].clone()
            } else {
                &gg[i][j] + &gg[j][i]
            };
        }
        out
    }
}

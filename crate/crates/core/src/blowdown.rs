//! The bigraded matrix model over `P^1 x P^1`: bidegree-typed forms, the
//! 4x4 block matrices `psi`, the region trichotomy, the elimination `alpha`,
//! the blow-down map `beta`, and the snake-diagram identity checks.

use serde::Serialize;

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::kronecker::KModule;
use crate::mat::Mat2;
use crate::modulimap::{eta, WPoint};
use crate::multilinear::{LinForm, QuadForm, Var};

/// A bihomogeneous form of bidegree `(r, s)` in `(u1, v1) x (u2, v2)`;
/// coefficient of `u1^(r-i) v1^i u2^(s-j) v2^j` at index `i*(s+1)+j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiForm {
    pub r: usize,
    pub s: usize,
    c: Vec<Scalar>,
}

impl BiForm {
    pub fn zero(spec: FieldSpec, r: usize, s: usize) -> Self {
        BiForm {
            r,
            s,
            c: vec![spec.zero(); (r + 1) * (s + 1)],
        }
    }

    pub fn from_scalar(c: &Scalar) -> Self {
        BiForm {
            r: 0,
            s: 0,
            c: vec![c.clone()],
        }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        &self.c[i * (self.s + 1) + j]
    }

    pub fn coeff_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.c[i * (self.s + 1) + j]
    }

    pub fn spec(&self) -> FieldSpec {
        self.c[0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// Addition; a zero form of any declared bidegree absorbs into the
    /// other side, otherwise bidegrees must match.
    pub fn add(&self, rhs: &BiForm) -> BiForm {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.bidegree(),
            rhs.bidegree(),
            "adding biforms of different bidegrees"
        );
        BiForm {
            r: self.r,
            s: self.s,
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> BiForm {
        BiForm {
            r: self.r,
            s: self.s,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, rhs: &BiForm) -> BiForm {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, t: &Scalar) -> BiForm {
        BiForm {
            r: self.r,
            s: self.s,
            c: self.c.iter().map(|a| a * t).collect(),
        }
    }

    pub fn mul(&self, rhs: &BiForm) -> BiForm {
        let spec = self.spec();
        let mut out = BiForm::zero(spec, self.r + rhs.r, self.s + rhs.s);
        for i1 in 0..=self.r {
            for j1 in 0..=self.s {
                let a = self.coeff(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=rhs.r {
                    for j2 in 0..=rhs.s {
                        let t = a * rhs.coeff(i2, j2);
                        let e = out.coeff_mut(i1 + i2, j1 + j2);
                        *e = &*e + &t;
                    }
                }
            }
        }
        out
    }
}

/// A linear form on `V_1` (coefficients of `u1, v1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct V1Form(pub [Scalar; 2]);

/// A linear form on `V_2` (coefficients of `u2, v2`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct V2Form(pub [Scalar; 2]);

impl V1Form {
    pub fn zero(spec: FieldSpec) -> Self {
        V1Form([spec.zero(), spec.zero()])
    }

    pub fn from_i64(spec: FieldSpec, c: [i64; 2]) -> Self {
        V1Form([spec.from_i64(c[0]), spec.from_i64(c[1])])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn to_biform(&self) -> BiForm {
        let mut b = BiForm::zero(self.0[0].spec(), 1, 0);
        *b.coeff_mut(0, 0) = self.0[0].clone();
        *b.coeff_mut(1, 0) = self.0[1].clone();
        b
    }
}

impl V2Form {
    pub fn zero(spec: FieldSpec) -> Self {
        V2Form([spec.zero(), spec.zero()])
    }

    pub fn from_i64(spec: FieldSpec, c: [i64; 2]) -> Self {
        V2Form([spec.from_i64(c[0]), spec.from_i64(c[1])])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn to_biform(&self) -> BiForm {
        let mut b = BiForm::zero(self.0[0].spec(), 0, 1);
        *b.coeff_mut(0, 0) = self.0[0].clone();
        *b.coeff_mut(0, 1) = self.0[1].clone();
        b
    }
}

fn independent2(a: &[Scalar; 2], b: &[Scalar; 2]) -> bool {
    !(&(&a[0] * &b[1]) - &(&a[1] * &b[0])).is_zero()
}

/// The pure tensor `l1 (x) l2` as a 4-variable linear form under the Segre
/// identification `x = u1 u2, y = v1 u2, z = u1 v2, w = v1 v2`.
pub fn tensor(l1: &V1Form, l2: &V2Form) -> LinForm {
    LinForm([
        &l1.0[0] * &l2.0[0],
        &l1.0[1] * &l2.0[0],
        &l1.0[0] * &l2.0[1],
        &l1.0[1] * &l2.0[1],
    ])
}

/// Segre substitution on a linear form: an injective map onto bidegree
/// `(1, 1)` biforms.
pub fn segre(l: &LinForm) -> BiForm {
    let mut b = BiForm::zero(l.spec(), 1, 1);
    *b.coeff_mut(0, 0) = l.coeff(Var::X).clone();
    *b.coeff_mut(1, 0) = l.coeff(Var::Y).clone();
    *b.coeff_mut(0, 1) = l.coeff(Var::Z).clone();
    *b.coeff_mut(1, 1) = l.coeff(Var::W).clone();
    b
}

/// Entrywise Segre substitution on a module.
pub fn segre_module(phi: &KModule) -> [[BiForm; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| segre(&phi.e[i][j])))
}

/// Inverse of [`segre`] on bidegree `(1, 1)` forms.
pub fn unsegre(b: &BiForm) -> crate::Result<LinForm> {
    if b.is_zero() {
        return Ok(LinForm::zero(b.spec()));
    }
    if b.bidegree() != (1, 1) {
        return Err(Error::precondition("unsegre expects bidegree (1, 1)"));
    }
    Ok(LinForm([
        b.coeff(0, 0).clone(),
        b.coeff(1, 0).clone(),
        b.coeff(0, 1).clone(),
        b.coeff(1, 1).clone(),
    ]))
}

/// Segre substitution on a quadratic form, landing in bidegree `(2, 2)`.
pub fn segre_quad(q: &QuadForm) -> BiForm {
    let spec = q.spec();
    let vars: Vec<BiForm> = crate::multilinear::VARS
        .iter()
        .map(|&v| segre(&LinForm::var(spec, v)))
        .collect();
    let mut acc = BiForm::zero(spec, 2, 2);
    for k in 0..10 {
        let (i, j) = crate::multilinear::mono_vars(k);
        acc = acc.add(&vars[i].mul(&vars[j]).scale(&q.0[k]));
    }
    acc
}

/// Region of the matrix model.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Region {
    W0,
    W1,
    W2,
    Invalid,
}

/// The 4x4 block matrix of the model, with typed bidegree blocks:
///
/// ```text
/// [ 1(x)u12   1(x)v12   a1        0       ]
/// [ u11(x)1   v11(x)1   0         a2      ]
/// [ f11       f12       u21(x)1   1(x)u22 ]
/// [ f21       f22       v21(x)1   1(x)v22 ]
/// ```
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigPsi {
    pub a1: Scalar,
    pub a2: Scalar,
    pub u12: V2Form,
    pub v12: V2Form,
    pub u11: V1Form,
    pub v11: V1Form,
    pub u21: V1Form,
    pub v21: V1Form,
    pub u22: V2Form,
    pub v22: V2Form,
    pub f: [[LinForm; 2]; 2],
}

impl BigPsi {
    pub fn spec(&self) -> FieldSpec {
        self.a1.spec()
    }

    /// The region trichotomy. `W0` needs both diagonal scalars nonzero; `W1`
    /// and `W2` additionally need their independence side conditions, and
    /// `a1 = a2 = 0` is always invalid.
    pub fn classify(&self) -> Region {
        match (self.a1.is_zero(), self.a2.is_zero()) {
            (false, false) => Region::W0,
            (false, true) => {
                if independent2(&self.u11.0, &self.v11.0) && independent2(&self.u22.0, &self.v22.0)
                {
                    Region::W1
                } else {
                    Region::Invalid
                }
            }
            (true, false) => {
                if independent2(&self.u12.0, &self.v12.0) && independent2(&self.u21.0, &self.v21.0)
                {
                    Region::W2
                } else {
                    Region::Invalid
                }
            }
            (true, true) => Region::Invalid,
        }
    }

    pub fn to_matrix(&self) -> Vec<Vec<BiForm>> {
        let spec = self.spec();
        let z = |r, s| BiForm::zero(spec, r, s);
        vec![
            vec![
                self.u12.to_biform(),
                self.v12.to_biform(),
                BiForm::from_scalar(&self.a1),
                z(0, 0),
            ],
            vec![
                self.u11.to_biform(),
                self.v11.to_biform(),
                z(0, 0),
                BiForm::from_scalar(&self.a2),
            ],
            vec![
                segre(&self.f[0][0]),
                segre(&self.f[0][1]),
                self.u21.to_biform(),
                self.u22.to_biform(),
            ],
            vec![
                segre(&self.f[1][0]),
                segre(&self.f[1][1]),
                self.v21.to_biform(),
                self.v22.to_biform(),
            ],
        ]
    }

    /// Rebuilds the typed structure from a raw 4x4 biform matrix, checking
    /// every bidegree and the two structural zeros.
    pub fn from_matrix(m: &[Vec<BiForm>]) -> crate::Result<BigPsi> {
        let as_v2 = |b: &BiForm| -> crate::Result<V2Form> {
            if b.is_zero() {
                return Ok(V2Form::zero(b.spec()));
            }
            if b.bidegree() != (0, 1) {
                return Err(Error::precondition("expected a (0,1) entry"));
            }
            Ok(V2Form([b.coeff(0, 0).clone(), b.coeff(0, 1).clone()]))
        };
        let as_v1 = |b: &BiForm| -> crate::Result<V1Form> {
            if b.is_zero() {
                return Ok(V1Form::zero(b.spec()));
            }
            if b.bidegree() != (1, 0) {
                return Err(Error::precondition("expected a (1,0) entry"));
            }
            Ok(V1Form([b.coeff(0, 0).clone(), b.coeff(1, 0).clone()]))
        };
        let as_scalar = |b: &BiForm| -> crate::Result<Scalar> {
            if b.is_zero() {
                return Ok(b.spec().zero());
            }
            if b.bidegree() != (0, 0) {
                return Err(Error::precondition("expected a scalar entry"));
            }
            Ok(b.coeff(0, 0).clone())
        };
        if !m[0][3].is_zero() || !m[1][2].is_zero() {
            return Err(Error::precondition("structural zero positions are occupied"));
        }
        Ok(BigPsi {
            a1: as_scalar(&m[0][2])?,
            a2: as_scalar(&m[1][3])?,
            u12: as_v2(&m[0][0])?,
            v12: as_v2(&m[0][1])?,
            u11: as_v1(&m[1][0])?,
            v11: as_v1(&m[1][1])?,
            u21: as_v1(&m[2][2])?,
            v21: as_v1(&m[3][2])?,
            u22: as_v2(&m[2][3])?,
            v22: as_v2(&m[3][3])?,
            f: [
                [unsegre(&m[2][0])?, unsegre(&m[2][1])?],
                [unsegre(&m[3][0])?, unsegre(&m[3][1])?],
            ],
        })
    }
}

/// Product of biform matrices.
pub fn bimat_mul(a: &[Vec<BiForm>], b: &[Vec<BiForm>], spec: FieldSpec) -> Vec<Vec<BiForm>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = BiForm::zero(spec, 0, 0);
                    for l in 0..k {
                        acc = acc.add(&a[i][l].mul(&b[l][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// A lower-triangular pair `(g, h)` of block automorphisms: constant
/// invertible diagonal blocks, off-diagonal blocks of the positive
/// bidegrees fixed by the twists.
#[derive(Clone, Debug)]
pub struct BigGroupElem {
    pub g11: Mat2,
    /// Row 0 entries of bidegree (0,1), row 1 of bidegree (1,0).
    pub g21: [[BiForm; 2]; 2],
    pub g22: [Scalar; 2],
    pub h11: [Scalar; 2],
    /// Column 0 entries of bidegree (1,0), column 1 of bidegree (0,1).
    pub h21: [[BiForm; 2]; 2],
    pub h22: Mat2,
}

impl BigGroupElem {
    pub fn new(
        g11: Mat2,
        g21: [[BiForm; 2]; 2],
        g22: [Scalar; 2],
        h11: [Scalar; 2],
        h21: [[BiForm; 2]; 2],
        h22: Mat2,
    ) -> crate::Result<Self> {
        if !g11.is_invertible() || !h22.is_invertible() {
            return Err(Error::precondition("corner blocks must be invertible"));
        }
        if g22.iter().any(Scalar::is_zero) || h11.iter().any(Scalar::is_zero) {
            return Err(Error::precondition("diagonal middle blocks must be invertible"));
        }
        let deg_ok = |b: &BiForm, d: (usize, usize)| b.is_zero() || b.bidegree() == d;
        for j in 0..2 {
            if !deg_ok(&g21[0][j], (0, 1)) || !deg_ok(&g21[1][j], (1, 0)) {
                return Err(Error::precondition("g21 entry of illegal bidegree"));
            }
            if !deg_ok(&h21[j][0], (1, 0)) || !deg_ok(&h21[j][1], (0, 1)) {
                return Err(Error::precondition("h21 entry of illegal bidegree"));
            }
        }
        Ok(BigGroupElem {
            g11,
            g21,
            g22,
            h11,
            h21,
            h22,
        })
    }

    pub fn identity(spec: FieldSpec) -> Self {
        let z = || BiForm::zero(spec, 0, 0);
        BigGroupElem {
            g11: Mat2::identity(spec),
            g21: [[z(), z()], [z(), z()]],
            g22: [spec.one(), spec.one()],
            h11: [spec.one(), spec.one()],
            h21: [[z(), z()], [z(), z()]],
            h22: Mat2::identity(spec),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.g11.spec()
    }

    pub fn g_matrix(&self) -> Vec<Vec<BiForm>> {
        let spec = self.spec();
        let sc = BiForm::from_scalar;
        let z = || BiForm::zero(spec, 0, 0);
        vec![
            vec![sc(&self.g11.0[0][0]), sc(&self.g11.0[0][1]), z(), z()],
            vec![sc(&self.g11.0[1][0]), sc(&self.g11.0[1][1]), z(), z()],
            vec![self.g21[0][0].clone(), self.g21[0][1].clone(), sc(&self.g22[0]), z()],
            vec![self.g21[1][0].clone(), self.g21[1][1].clone(), z(), sc(&self.g22[1])],
        ]
    }

    pub fn g_inv_matrix(&self) -> Vec<Vec<BiForm>> {
        // [[A, 0], [C, D]]^{-1} = [[A^{-1}, 0], [-D^{-1} C A^{-1}, D^{-1}]]
        let spec = self.spec();
        let sc = BiForm::from_scalar;
        let z = || BiForm::zero(spec, 0, 0);
        let a_inv = self.g11.inv();
        let d_inv = [self.g22[0].inv(), self.g22[1].inv()];
        let mut lower = [[z(), z()], [z(), z()]];
        for (i, row) in lower.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut acc = BiForm::zero(spec, 0, 0);
                for l in 0..2 {
                    acc = acc.add(&self.g21[i][l].scale(&a_inv.0[l][j]));
                }
                *e = acc.scale(&d_inv[i]).neg();
            }
        }
        vec![
            vec![sc(&a_inv.0[0][0]), sc(&a_inv.0[0][1]), z(), z()],
            vec![sc(&a_inv.0[1][0]), sc(&a_inv.0[1][1]), z(), z()],
            vec![lower[0][0].clone(), lower[0][1].clone(), sc(&d_inv[0]), z()],
            vec![lower[1][0].clone(), lower[1][1].clone(), z(), sc(&d_inv[1])],
        ]
    }

    pub fn h_matrix(&self) -> Vec<Vec<BiForm>> {
        let spec = self.spec();
        let sc = BiForm::from_scalar;
        let z = || BiForm::zero(spec, 0, 0);
        vec![
            vec![sc(&self.h11[0]), z(), z(), z()],
            vec![z(), sc(&self.h11[1]), z(), z()],
            vec![self.h21[0][0].clone(), self.h21[0][1].clone(), sc(&self.h22.0[0][0]), sc(&self.h22.0[0][1])],
            vec![self.h21[1][0].clone(), self.h21[1][1].clone(), sc(&self.h22.0[1][0]), sc(&self.h22.0[1][1])],
        ]
    }
}

/// The conjugation action `psi -> h psi g^{-1}`, computed on raw biform
/// matrices and re-typed; the block degrees guarantee the result fits the
/// display again.
pub fn act_big(gh: &BigGroupElem, psi: &BigPsi) -> crate::Result<BigPsi> {
    let spec = psi.spec();
    let m = bimat_mul(
        &bimat_mul(&gh.h_matrix(), &psi.to_matrix(), spec),
        &gh.g_inv_matrix(),
        spec,
    );
    BigPsi::from_matrix(&m)
}

/// The elimination `alpha(psi) = psi_21 - psi_22 psi_12^{-1} psi_11` on the
/// open region, expanded into pure tensors.
pub fn alpha(psi: &BigPsi) -> crate::Result<KModule> {
    if psi.classify() != Region::W0 {
        return Err(Error::precondition("alpha is defined on W0 only"));
    }
    let a1_inv = psi.a1.inv();
    let a2_inv = psi.a2.inv();
    let rows2 = [&psi.u21, &psi.v21];
    let cols2 = [&psi.u12, &psi.v12];
    let rows1 = [&psi.u11, &psi.v11];
    let cols1 = [&psi.u22, &psi.v22];
    Ok(KModule {
        e: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                psi.f[i][j]
                    .sub(&tensor(rows2[i], cols2[j]).scale(&a1_inv))
                    .sub(&tensor(rows1[j], cols1[i]).scale(&a2_inv))
            })
        }),
    })
}

/// Elimination certificate on `W0`: a group element carrying `psi` to the
/// block form `[[0, I], [alpha, 0]]`, returned together with that reduced
/// matrix.
pub fn reduce_psi(psi: &BigPsi) -> crate::Result<(BigGroupElem, BigPsi)> {
    if psi.classify() != Region::W0 {
        return Err(Error::precondition("reduce_psi is defined on W0 only"));
    }
    let spec = psi.spec();
    let a1_inv = psi.a1.inv();
    let a2_inv = psi.a2.inv();
    // g = [[I, 0], [psi_11, psi_12]], h = [[I, 0], [-psi_22 psi_12^{-1}, I]]
    let g21 = [
        [psi.u12.to_biform(), psi.v12.to_biform()],
        [psi.u11.to_biform(), psi.v11.to_biform()],
    ];
    let h21 = [
        [
            psi.u21.to_biform().scale(&a1_inv).neg(),
            psi.u22.to_biform().scale(&a2_inv).neg(),
        ],
        [
            psi.v21.to_biform().scale(&a1_inv).neg(),
            psi.v22.to_biform().scale(&a2_inv).neg(),
        ],
    ];
    let gh = BigGroupElem::new(
        Mat2::identity(spec),
        g21,
        [psi.a1.clone(), psi.a2.clone()],
        [spec.one(), spec.one()],
        h21,
        Mat2::identity(spec),
    )?;
    let reduced = act_big(&gh, psi)?;
    let al = alpha(psi)?;
    let expected = BigPsi {
        a1: spec.one(),
        a2: spec.one(),
        u12: V2Form::zero(spec),
        v12: V2Form::zero(spec),
        u11: V1Form::zero(spec),
        v11: V1Form::zero(spec),
        u21: V1Form::zero(spec),
        v21: V1Form::zero(spec),
        u22: V2Form::zero(spec),
        v22: V2Form::zero(spec),
        f: al.e.clone(),
    };
    assert_eq!(reduced, expected, "elimination replay mismatch");
    Ok((gh, reduced))
}

fn beta_matrix_w01(psi: &BigPsi) -> KModule {
    // a2 psi_21 - a1^{-1} a2 [u21; v21][1(x)u12, 1(x)v12]
    //          - [1(x)u22; 1(x)v22][u11, v11]
    let c = &psi.a2 * &psi.a1.inv();
    let rows2 = [&psi.u21, &psi.v21];
    let cols2 = [&psi.u12, &psi.v12];
    let rows1 = [&psi.u11, &psi.v11];
    let cols1 = [&psi.u22, &psi.v22];
    KModule {
        e: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                psi.f[i][j]
                    .scale(&psi.a2)
                    .sub(&tensor(rows2[i], cols2[j]).scale(&c))
                    .sub(&tensor(rows1[j], cols1[i]))
            })
        }),
    }
}

fn beta_matrix_w2(psi: &BigPsi) -> KModule {
    let c = &psi.a1 * &psi.a2.inv();
    let rows2 = [&psi.u21, &psi.v21];
    let cols2 = [&psi.u12, &psi.v12];
    let rows1 = [&psi.u11, &psi.v11];
    let cols1 = [&psi.u22, &psi.v22];
    KModule {
        e: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                psi.f[i][j]
                    .scale(&psi.a1)
                    .sub(&tensor(rows1[j], cols1[i]).scale(&c))
                    .sub(&tensor(rows2[i], cols2[j]))
            })
        }),
    }
}

/// The blow-down: the regional matrix formula followed by `eta`. On `W0` the
/// two regional formulas differ from `alpha` by the scalars `a2` or `a1`,
/// which weighted scaling absorbs; `W1` collapses to `nu1`, `W2` to `nu2`.
pub fn beta(psi: &BigPsi) -> crate::Result<WPoint> {
    match psi.classify() {
        Region::W0 | Region::W1 => eta(&beta_matrix_w01(psi)),
        Region::W2 => eta(&beta_matrix_w2(psi)),
        Region::Invalid => Err(Error::precondition("beta is undefined on the invalid region")),
    }
}

/// The 3x3 matrix eliminating the `a1` column on `W1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Xi {
    pub top: [V1Form; 2],
    pub mid: [[LinForm; 2]; 2],
    pub right: [V2Form; 2],
}

impl Xi {
    pub fn to_matrix(&self) -> Vec<Vec<BiForm>> {
        let spec = self.top[0].0[0].spec();
        vec![
            vec![
                self.top[0].to_biform(),
                self.top[1].to_biform(),
                BiForm::zero(spec, 0, 1),
            ],
            vec![
                segre(&self.mid[0][0]),
                segre(&self.mid[0][1]),
                self.right[0].to_biform(),
            ],
            vec![
                segre(&self.mid[1][0]),
                segre(&self.mid[1][1]),
                self.right[1].to_biform(),
            ],
        ]
    }
}

/// Builds the displayed 3x3 matrix `xi` with the `a1^{-1}` correction terms.
pub fn build_xi(psi: &BigPsi) -> crate::Result<Xi> {
    if psi.classify() != Region::W1 {
        return Err(Error::precondition("xi is defined on W1 only"));
    }
    let a1_inv = psi.a1.inv();
    let rows2 = [&psi.u21, &psi.v21];
    let cols2 = [&psi.u12, &psi.v12];
    Ok(Xi {
        top: [psi.u11.clone(), psi.v11.clone()],
        mid: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                psi.f[i][j].sub(&tensor(rows2[i], cols2[j]).scale(&a1_inv))
            })
        }),
        right: [psi.u22.clone(), psi.v22.clone()],
    })
}

/// Result of the snake-diagram identity checks: the labels of any nonzero
/// compositions, empty when everything commutes exactly.
#[derive(Clone, Debug, Serialize)]
pub struct SnakeReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Verifies, as exact biform identities, that the two short rows of the
/// snake diagram are complexes and that the two squares relating `xi` to the
/// column inclusion and projection commute entrywise.
pub fn verify_snake(psi: &BigPsi) -> crate::Result<SnakeReport> {
    let xi = build_xi(psi)?;
    let spec = psi.spec();
    let mut failures = Vec::new();

    // (i) top row: [-1(x)v22, 1(x)u22] o [1(x)u22; 1(x)v22] = 0
    let top_in = vec![
        vec![psi.u22.to_biform()],
        vec![psi.v22.to_biform()],
    ];
    let top_out = vec![vec![psi.v22.to_biform().neg(), psi.u22.to_biform()]];
    let comp = bimat_mul(&top_out, &top_in, spec);
    if !comp[0][0].is_zero() {
        failures.push(format!("top row composition: {:?}", comp[0][0]));
    }

    // (ii) bottom row: [u11(x)1, v11(x)1] o [-v11(x)1; u11(x)1] = 0
    let bot_in = vec![
        vec![psi.v11.to_biform().neg()],
        vec![psi.u11.to_biform()],
    ];
    let bot_out = vec![vec![psi.u11.to_biform(), psi.v11.to_biform()]];
    let comp = bimat_mul(&bot_out, &bot_in, spec);
    if !comp[0][0].is_zero() {
        failures.push(format!("bottom row composition: {:?}", comp[0][0]));
    }

    // (iii) square with the right column inclusion:
    // xi o incl_3 = incl_23 o [1(x)u22; 1(x)v22]
    let m = xi.to_matrix();
    let zero = |r, s| BiForm::zero(spec, r, s);
    let incl3 = vec![vec![zero(0, 0)], vec![zero(0, 0)], vec![BiForm::from_scalar(&spec.one())]];
    let lhs = bimat_mul(&m, &incl3, spec);
    let rhs = [
        zero(0, 1),
        psi.u22.to_biform(),
        psi.v22.to_biform(),
    ];
    for (i, r) in rhs.iter().enumerate() {
        if !lhs[i][0].sub(r).is_zero() {
            failures.push(format!("inclusion square, entry {i}"));
        }
    }

    // and with the left column projection:
    // proj_1 o xi = [u11(x)1, v11(x)1] o proj_12
    let proj1 = vec![vec![
        BiForm::from_scalar(&spec.one()),
        zero(0, 0),
        zero(0, 0),
    ]];
    let lhs = bimat_mul(&proj1, &m, spec);
    let rhs = [psi.u11.to_biform(), psi.v11.to_biform(), zero(1, 0)];
    for (j, r) in rhs.iter().enumerate() {
        if !lhs[0][j].sub(r).is_zero() {
            failures.push(format!("projection square, entry {j}"));
        }
    }

    Ok(SnakeReport {
        ok: failures.is_empty(),
        failures,
    })
}

//! The Kronecker module: a 2x2 matrix of linear forms, the action of
//! `G = (GL2 x GL2)/C*`, and the semi-invariants `det`, `e`, `epsilon`, `rho`.

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::mat::Mat2;
use crate::multilinear::{wedge4, CoordChange, LinForm, LinForm3, QuadForm, TernaryQuadForm, Var};

/// A module `phi in Hom(C^2, C^2 (x) V)`: four linear forms, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KModule {
    pub e: [[LinForm; 2]; 2],
}

impl KModule {
    pub fn new(e11: LinForm, e12: LinForm, e21: LinForm, e22: LinForm) -> Self {
        KModule {
            e: [[e11, e12], [e21, e22]],
        }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        KModule::new(
            LinForm::zero(spec),
            LinForm::zero(spec),
            LinForm::zero(spec),
            LinForm::zero(spec),
        )
    }

    pub fn from_i64(spec: FieldSpec, rows: [[[i64; 4]; 2]; 2]) -> Self {
        KModule {
            e: std::array::from_fn(|i| std::array::from_fn(|j| LinForm::from_i64(spec, rows[i][j]))),
        }
    }

    /// The matrix `[[x, y], [z, w]]` representing the first distinguished
    /// point over the Segre quadric.
    pub fn nu1_matrix(spec: FieldSpec) -> Self {
        KModule::new(
            LinForm::var(spec, Var::X),
            LinForm::var(spec, Var::Y),
            LinForm::var(spec, Var::Z),
            LinForm::var(spec, Var::W),
        )
    }

    /// The matrix `[[x, z], [y, w]]` representing the second one.
    pub fn nu2_matrix(spec: FieldSpec) -> Self {
        KModule::new(
            LinForm::var(spec, Var::X),
            LinForm::var(spec, Var::Z),
            LinForm::var(spec, Var::Y),
            LinForm::var(spec, Var::W),
        )
    }

    /// The normal-form module `[[x + aw, y + bw], [lambda z + cw, x + dw]]`.
    pub fn normal_form_module(
        lambda: &Scalar,
        a: &Scalar,
        b: &Scalar,
        c: &Scalar,
        d: &Scalar,
    ) -> Self {
        let spec = lambda.spec();
        let x = LinForm::var(spec, Var::X);
        let y = LinForm::var(spec, Var::Y);
        let z = LinForm::var(spec, Var::Z);
        let w = LinForm::var(spec, Var::W);
        KModule::new(
            x.add(&w.scale(a)),
            y.add(&w.scale(b)),
            z.scale(lambda).add(&w.scale(c)),
            x.add(&w.scale(d)),
        )
    }

    pub fn spec(&self) -> FieldSpec {
        self.e[0][0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(LinForm::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> KModule {
        KModule {
            e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].scale(c))),
        }
    }

    pub fn sub(&self, rhs: &KModule) -> KModule {
        KModule {
            e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].sub(&rhs.e[i][j]))),
        }
    }

    /// The constant slice of a variable: `M_v` with `phi = sum_v M_v v`.
    pub fn slice(&self, v: Var) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.e[i][j].coeff(v).clone())
        }))
    }

    pub fn apply_coord_change(&self, u: &CoordChange) -> KModule {
        KModule {
            e: std::array::from_fn(|i| std::array::from_fn(|j| u.apply_lin(&self.e[i][j]))),
        }
    }
}

/// A group element `(g, h)` acting by `phi -> h phi g^{-1}`. The class modulo
/// simultaneous scalars is not quotiented in storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElem {
    pub g: Mat2,
    pub h: Mat2,
}

impl GroupElem {
    /// Rejects pairs with a singular factor.
    pub fn new(g: Mat2, h: Mat2) -> crate::Result<Self> {
        if !g.is_invertible() || !h.is_invertible() {
            return Err(Error::precondition("group element must be invertible"));
        }
        Ok(GroupElem { g, h })
    }

    pub fn identity(spec: FieldSpec) -> Self {
        GroupElem {
            g: Mat2::identity(spec),
            h: Mat2::identity(spec),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.g.spec()
    }

    /// `a.compose(b)` acts like `a` after `b`.
    pub fn compose(&self, other: &GroupElem) -> GroupElem {
        GroupElem {
            g: self.g.mul(&other.g),
            h: self.h.mul(&other.h),
        }
    }

    pub fn inverse(&self) -> GroupElem {
        GroupElem {
            g: self.g.inv(),
            h: self.h.inv(),
        }
    }
}

/// `det(phi) = phi_11 phi_22 - phi_12 phi_21` as a quadratic form.
pub fn det_semiinvariant(phi: &KModule) -> QuadForm {
    phi.e[0][0]
        .mul(&phi.e[1][1])
        .sub(&phi.e[0][1].mul(&phi.e[1][0]))
}

/// `e(phi) = phi_11 ^ phi_22 ^ phi_12 ^ phi_21`, read against
/// `x ^ y ^ z ^ w`. In the fixed dual basis this is `epsilon(phi)`.
pub fn e_semiinvariant(phi: &KModule) -> Scalar {
    wedge4(&phi.e[0][0], &phi.e[1][1], &phi.e[0][1], &phi.e[1][0])
}

/// `epsilon(phi)`, equal to [`e_semiinvariant`] in the fixed basis.
pub fn epsilon(phi: &KModule) -> Scalar {
    e_semiinvariant(phi)
}

/// `rho(phi)`: the wedge of the four internal products of `det(phi)`, i.e.
/// the resultant of the determinant form.
pub fn rho(phi: &KModule) -> Scalar {
    crate::modulimap::resultant(&det_semiinvariant(phi))
}

/// The group action `phi -> h phi g^{-1}`. Satisfies
/// `det((g,h) phi) = det(g)^{-1} det(h) det(phi)` and
/// `e((g,h) phi) = det(g)^{-2} det(h)^2 e(phi)` exactly.
pub fn act(gh: &GroupElem, phi: &KModule) -> KModule {
    let gi = gh.g.inv();
    // left: h * phi
    let left: [[LinForm; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            phi.e[0][j]
                .scale(&gh.h.0[i][0])
                .add(&phi.e[1][j].scale(&gh.h.0[i][1]))
        })
    });
    // right: (h phi) * g^{-1}
    KModule {
        e: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                left[i][0]
                    .scale(&gi.0[0][j])
                    .add(&left[i][1].scale(&gi.0[1][j]))
            })
        }),
    }
}

/// A module over a 3-dimensional space of forms, obtained by projection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KModule3 {
    pub e: [[LinForm3; 2]; 2],
}

impl KModule3 {
    pub fn spec(&self) -> FieldSpec {
        self.e[0][0].spec()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(LinForm3::is_zero)
    }

    pub fn det(&self) -> TernaryQuadForm {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    /// Constant slice of the i-th ternary variable.
    pub fn slice(&self, v: usize) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.e[i][j].0[v].clone())
        }))
    }

    pub fn act(&self, gh: &GroupElem) -> KModule3 {
        let gi = gh.g.inv();
        let scale3 = |l: &LinForm3, c: &Scalar| LinForm3(std::array::from_fn(|i| &l.0[i] * c));
        let add3 =
            |a: &LinForm3, b: &LinForm3| LinForm3(std::array::from_fn(|i| &a.0[i] + &b.0[i]));
        let left: [[LinForm3; 2]; 2] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                add3(
                    &scale3(&self.e[0][j], &gh.h.0[i][0]),
                    &scale3(&self.e[1][j], &gh.h.0[i][1]),
                )
            })
        });
        KModule3 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    add3(
                        &scale3(&left[i][0], &gi.0[0][j]),
                        &scale3(&left[i][1], &gi.0[1][j]),
                    )
                })
            }),
        }
    }
}

/// Drops the variable outside `kept` from every entry; the determinant of
/// the result is `det(phi)` with that variable set to zero.
pub fn project_module(phi: &KModule, kept: [Var; 3]) -> KModule3 {
    KModule3 {
        e: std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                LinForm3(std::array::from_fn(|k| phi.e[i][j].coeff(kept[k]).clone()))
            })
        }),
    }
}

/// True iff `det(phi)` is not a scalar multiple of the Segre quadric
/// `xw - yz`.
pub fn is_injective_on_quadric(phi: &KModule) -> bool {
    let q = det_semiinvariant(phi);
    let c = q.coeff(Var::X, Var::W).clone();
    let segre = QuadForm::from_monomials(phi.spec(), &[("xw", 1), ("yz", -1)]);
    !q.sub(&segre.scale(&c)).is_zero()
}

/// Equality of orbit classes, decided through the weighted-projective point
/// `<det, e>`. Both inputs must be semi-stable. A constructive group witness
/// for stable classes is available from [`crate::normalform::orbit_witness`].
pub fn class_equal(phi1: &KModule, phi2: &KModule) -> crate::Result<bool> {
    let p1 = crate::modulimap::eta(phi1)?;
    let p2 = crate::modulimap::eta(phi2)?;
    Ok(p1 == p2)
}

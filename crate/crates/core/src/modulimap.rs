//! The weighted projective space of pairs `(q, p)` with the action
//! `t(q, p) = (tq, t^2 p)`, the hypersurface `res(q) = p^2`, the moduli map
//! `eta`, its fibers, and its constructive inverse.

use crate::error::Error;
use crate::field::Scalar;
use crate::kronecker::{det_semiinvariant, epsilon, KModule};
use crate::multilinear::{gram_rank, internal_product, wedge4, QuadForm, Var};
use crate::normalform;
use crate::stability::is_semistable;

/// The resultant of a quadratic form: the wedge coefficient of its four
/// partial derivatives. By construction `resultant(det(phi)) = rho(phi)`,
/// which pins the scaling; the classical Gram determinant is this value
/// divided by 16.
pub fn resultant(q: &QuadForm) -> Scalar {
    wedge4(
        &internal_product(Var::X, q),
        &internal_product(Var::Y, q),
        &internal_product(Var::Z, q),
        &internal_product(Var::W, q),
    )
}

/// A point of the weighted projective space, stored canonically: the first
/// nonzero coefficient of `q` (in the order `x2, xy, xz, xw, y2, yz, yw, z2,
/// zw, w2`) is scaled to one, `p` rescaled by the square of the same factor.
/// When `q = 0`, `p` is reduced to its canonical square-class representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WPoint {
    q: QuadForm,
    p: Scalar,
}

impl WPoint {
    /// Canonicalizes `(q, p)`; rejects the origin.
    pub fn new(q: QuadForm, p: Scalar) -> crate::Result<Self> {
        if q.is_zero() && p.is_zero() {
            return Err(Error::precondition("(0, 0) is not a point"));
        }
        if let Some(k) = q.0.iter().position(|c| !c.is_zero()) {
            let t = q.0[k].inv();
            let p = &p * &t.square();
            Ok(WPoint { q: q.scale(&t), p })
        } else {
            // only the weight-2 coordinate is visible; squares act trivially
            Ok(WPoint {
                q,
                p: p.square_class_rep(),
            })
        }
    }

    pub fn q(&self) -> &QuadForm {
        &self.q
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }
}

/// `eta(<phi>) = <det(phi), e(phi)>`. Requires a semi-stable module; the two
/// transformation laws make the pair scale with weights `(1, 2)`, so the
/// class is constant on orbits.
pub fn eta(phi: &KModule) -> crate::Result<WPoint> {
    if !is_semistable(phi) {
        return Err(Error::precondition("eta requires det(phi) != 0"));
    }
    WPoint::new(det_semiinvariant(phi), epsilon(phi))
}

/// Exact membership test for the hypersurface `res(q) = p^2`; both sides
/// scale by the fourth power of the weighted action, so the test is
/// well-defined on canonical representatives.
pub fn on_hypersurface(point: &WPoint) -> bool {
    resultant(&point.q) == point.p.square()
}

/// The point under `[[x, y], [z, w]]`.
pub fn nu1(spec: crate::FieldSpec) -> WPoint {
    eta(&KModule::nu1_matrix(spec)).expect("nu1 matrix is semi-stable")
}

/// The point under `[[x, z], [y, w]]`.
pub fn nu2(spec: crate::FieldSpec) -> WPoint {
    eta(&KModule::nu2_matrix(spec)).expect("nu2 matrix is semi-stable")
}

/// The fiber of the double cover `<q, p> -> <q>` over a nonzero form:
/// two points `<q, ±r>` when `res(q)` is a nonzero square `r^2`, one point
/// on the branch locus `res(q) = 0`, and `NeedsExtension` when the resultant
/// is a non-square in the active field.
pub fn det_fiber(q: &QuadForm) -> crate::Result<Vec<WPoint>> {
    if q.is_zero() {
        return Err(Error::precondition("det_fiber requires q != 0"));
    }
    let res = resultant(q);
    let r = res
        .sqrt_if_square()
        .ok_or_else(|| Error::needs_extension("res(q) is not a square in the active field"))?;
    if r.is_zero() {
        Ok(vec![WPoint::new(q.clone(), r)?])
    } else {
        Ok(vec![
            WPoint::new(q.clone(), r.clone())?,
            WPoint::new(q.clone(), -r)?,
        ])
    }
}

/// A module mapping to the given hypersurface point under [`eta`].
///
/// Reducible determinants produce the strictly semi-stable class
/// `diag(u, u')`; irreducible ones are rebuilt from the normal-form display
/// after a conic normalization of a rank-3 projection. The consistency of the
/// `w^2` coefficient with `ad - bc` is automatic exactly on the hypersurface.
pub fn eta_inverse(point: &WPoint) -> crate::Result<KModule> {
    let q = &point.q;
    let p = &point.p;
    let spec = q.spec();
    if q.is_zero() {
        return Err(Error::precondition("eta_inverse requires q != 0"));
    }
    if !on_hypersurface(point) {
        return Err(Error::precondition("point is not on the hypersurface"));
    }

    if gram_rank(q) <= 2 {
        // res(q) = 0 forces p = 0; the fiber is the class of diag(u, u')
        let (u, v) = crate::multilinear::factor_quadric(q)?;
        debug_assert!(p.is_zero());
        let zero = crate::multilinear::LinForm::zero(spec);
        return Ok(KModule::new(u, zero.clone(), zero, v));
    }

    let upsilon4 = normalform::find_splitting_for_quad(q)?;
    let t = upsilon4.apply_quad(q).drop_w();
    let (upsilon_u, lambda) = normalform::conic_normalize(&t)?;
    let upsilon = crate::multilinear::CoordChange::embed3(&upsilon_u).compose(&upsilon4);

    // in the new coordinates, q / lambda matches the normal-form determinant
    // display with lambda = 1
    let r = upsilon.apply_quad(q).scale(&lambda.inv());
    let sum_ad = r.coeff(Var::X, Var::W).clone();
    let b = -r.coeff(Var::Z, Var::W);
    let c = -r.coeff(Var::Y, Var::W);
    let delta = r.coeff(Var::W, Var::W).clone();

    // d - a is pinned by the weight-2 coordinate
    let s = &(&upsilon.det() * &lambda.inv().square()) * p;
    let half = spec.from_i64(2).inv();
    let a = &(&sum_ad - &s) * &half;
    let d = &(&sum_ad + &s) * &half;
    assert_eq!(
        &(&a * &d) - &(&b * &c),
        delta,
        "w^2 coefficient inconsistent on a hypersurface point"
    );

    let nf = KModule::normal_form_module(&spec.one(), &a, &b, &c, &d);
    Ok(nf.apply_coord_change(&upsilon.inverse()))
}

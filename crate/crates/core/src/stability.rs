//! Semi-stability and stability of Kronecker modules: the determinant
//! criterion, and an independent brute-force oracle that searches for
//! destabilizing subrepresentations directly.

use serde::Serialize;

use crate::field::{FieldSpec, Scalar};
use crate::kronecker::{det_semiinvariant, KModule};
use crate::mat;
use crate::multilinear::{gram_rank, VARS};

/// `phi` is semi-stable iff `det(phi) != 0`.
pub fn is_semistable(phi: &KModule) -> bool {
    !det_semiinvariant(phi).is_zero()
}

/// `phi` is stable iff `det(phi)` is irreducible over the algebraic closure,
/// i.e. its Gram rank is at least 3.
pub fn is_stable(phi: &KModule) -> bool {
    gram_rank(&det_semiinvariant(phi)) >= 3
}

/// A destabilizing pair of subspaces `(K, L)` with `M_v K ⊆ L` for every
/// variable slice `M_v`.
#[derive(Clone, Debug, Serialize)]
pub struct Destabilizer {
    pub source_dim: usize,
    pub target_dim: usize,
    pub source_basis: Vec<[Scalar; 2]>,
    pub target_basis: Vec<[Scalar; 2]>,
}

/// The oracle's verdict. `witness` carries a destabilizer when one exists
/// over the active field; a destabilizer may exist only over an extension,
/// in which case the verdict is still negative but `witness` is `None`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityVerdict {
    pub semistable: bool,
    pub stable: bool,
    pub witness: Option<Destabilizer>,
}

/// Brute-force search for destabilizing subrepresentations, independent of
/// the determinant criterion.
///
/// Writing `phi = M_x x + M_y y + M_z z + M_w w`, a subrepresentation is a
/// pair `(K, L)` with `M_v K ⊆ L` for all four slices. Semi-stability fails
/// iff some pair has `dim L < dim K`; stability fails iff some proper nonzero
/// pair has `dim L <= dim K`. Dimensions `(1,0)`, `(2,0)`, `(2,1)` are plain
/// linear algebra; for `(1,1)` the source line is parametrized over the
/// projective line and the gcd of the 2x2 minors of `[M_x k | ... | M_w k]`
/// decides whether a common root exists over the closure.
pub fn king_oracle(phi: &KModule) -> StabilityVerdict {
    let spec = phi.spec();
    let slices: Vec<mat::Mat2> = VARS.iter().map(|&v| phi.slice(v)).collect();

    // (1, 0) and (2, 0): common kernel of all slices
    let stacked: Vec<Vec<Scalar>> = slices
        .iter()
        .flat_map(|m| (0..2).map(|i| m.0[i].to_vec()))
        .collect();
    let kernel = mat::nullspace(stacked, 2, spec);
    if let Some(k) = kernel.first() {
        return StabilityVerdict {
            semistable: false,
            stable: false,
            witness: Some(Destabilizer {
                source_dim: 1,
                target_dim: 0,
                source_basis: vec![[k[0].clone(), k[1].clone()]],
                target_basis: vec![],
            }),
        };
    }

    // (2, 1) and (2, 0): the combined image of all slices fits in a line
    let image_cols: Vec<Vec<Scalar>> = (0..2)
        .map(|i| {
            slices
                .iter()
                .flat_map(|m| (0..2).map(move |j| m.0[i][j].clone()))
                .collect()
        })
        .collect();
    let image_rank = mat::rank(image_cols.clone());
    if image_rank <= 1 {
        let target = image_line(&slices);
        return StabilityVerdict {
            semistable: false,
            stable: false,
            witness: Some(Destabilizer {
                source_dim: 2,
                target_dim: target.len(),
                source_basis: vec![
                    [spec.one(), spec.zero()],
                    [spec.zero(), spec.one()],
                ],
                target_basis: target,
            }),
        };
    }

    // semistable; look for (1, 1) destabilizers of stability
    if let Some(verdict) = one_dim_destabilizer(&slices, spec) {
        return verdict;
    }

    StabilityVerdict {
        semistable: true,
        stable: true,
        witness: None,
    }
}

fn image_line(slices: &[mat::Mat2]) -> Vec<[Scalar; 2]> {
    for m in slices {
        for j in 0..2 {
            let col = [m.0[0][j].clone(), m.0[1][j].clone()];
            if !col[0].is_zero() || !col[1].is_zero() {
                return vec![col];
            }
        }
    }
    vec![]
}

fn one_dim_destabilizer(slices: &[mat::Mat2], spec: FieldSpec) -> Option<StabilityVerdict> {
    // the point at infinity k = (0, 1)
    let k_inf = [spec.zero(), spec.one()];
    if images_rank(slices, &k_inf) <= 1 {
        return Some(not_stable_witness(slices, k_inf));
    }

    // k = (1, t): the six 2x2 minors of [M_x k | M_y k | M_z k | M_w k]
    // are quadratics in t; a common root over the closure destabilizes
    let cols: Vec<[UniPoly; 2]> = slices
        .iter()
        .map(|m| {
            [
                UniPoly(vec![m.0[0][0].clone(), m.0[0][1].clone()]),
                UniPoly(vec![m.0[1][0].clone(), m.0[1][1].clone()]),
            ]
        })
        .collect();
    let mut gcd: Option<UniPoly> = None;
    for a in 0..4 {
        for b in a + 1..4 {
            let minor = cols[a][0]
                .mul(&cols[b][1], spec)
                .sub(&cols[a][1].mul(&cols[b][0], spec), spec);
            gcd = Some(match gcd {
                None => minor,
                Some(g) => g.gcd(&minor, spec),
            });
        }
    }
    let gcd = gcd.expect("six minors computed");
    if gcd.degree() == Some(0) {
        return None; // minors have no common root anywhere
    }
    // gcd is zero (every t works) or has positive degree: not stable
    let root = if gcd.is_zero() {
        Some(spec.zero())
    } else {
        gcd.any_root(spec)
    };
    match root {
        Some(t) => {
            let k = [spec.one(), t];
            debug_assert!(images_rank(slices, &k) <= 1);
            Some(not_stable_witness(slices, k))
        }
        None => Some(StabilityVerdict {
            semistable: true,
            stable: false,
            witness: None, // destabilizer lives in a quadratic extension
        }),
    }
}

fn images_rank(slices: &[mat::Mat2], k: &[Scalar; 2]) -> usize {
    let rows: Vec<Vec<Scalar>> = slices.iter().map(|m| m.apply(k).to_vec()).collect();
    mat::rank(rows)
}

fn not_stable_witness(slices: &[mat::Mat2], k: [Scalar; 2]) -> StabilityVerdict {
    let mut target = Vec::new();
    for m in slices {
        let v = m.apply(&k);
        if !v[0].is_zero() || !v[1].is_zero() {
            target.push(v);
            break;
        }
    }
    StabilityVerdict {
        semistable: true,
        stable: false,
        witness: Some(Destabilizer {
            source_dim: 1,
            target_dim: target.len(),
            source_basis: vec![k],
            target_basis: target,
        }),
    }
}

/// Dense univariate polynomial, ascending coefficients. Only degrees up to
/// two occur here, but the arithmetic is general.
#[derive(Clone, Debug)]
struct UniPoly(Vec<Scalar>);

impl UniPoly {
    fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    fn mul(&self, rhs: &UniPoly, spec: FieldSpec) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly(vec![spec.zero()]);
        }
        let mut out = vec![spec.zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly(out)
    }

    fn sub(&self, rhs: &UniPoly, spec: FieldSpec) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        let get = |p: &UniPoly, i: usize| p.0.get(i).cloned().unwrap_or_else(|| spec.zero());
        UniPoly((0..n).map(|i| &get(self, i) - &get(rhs, i)).collect())
    }

    /// Monic remainder-sequence gcd; monic normalization is the canonical
    /// content normalization over a field.
    fn gcd(&self, rhs: &UniPoly, spec: FieldSpec) -> UniPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b, spec);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn rem(&self, rhs: &UniPoly, spec: FieldSpec) -> UniPoly {
        let db = rhs.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let factor = &r.0[dr] * &rhs.0[db].inv();
            for i in 0..=db {
                let t = &rhs.0[i] * &factor;
                r.0[i + dr - db] = &r.0[i + dr - db] - &t;
            }
        }
        let _ = spec;
        r
    }

    fn monic(&self) -> UniPoly {
        match self.degree() {
            None => self.clone(),
            Some(d) => {
                let inv = self.0[d].inv();
                UniPoly(self.0[..=d].iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = t.zero_like();
        for c in self.0.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Some root in the active field, if any. Over `F_p` the roots of the
    /// (low-degree) gcd are found by exhaustive scan; over the rationals by
    /// the linear/quadratic formulas.
    fn any_root(&self, spec: FieldSpec) -> Option<Scalar> {
        let d = self.degree()?;
        match spec {
            FieldSpec::Fp(p) => (0..p)
                .map(|v| Scalar::Fp { value: v, modulus: p })
                .find(|t| self.eval(t).is_zero()),
            FieldSpec::Rational => match d {
                0 => None,
                1 => Some(-&(&self.0[0] * &self.0[1].inv())),
                2 => {
                    let (a, b, c) = (&self.0[2], &self.0[1], &self.0[0]);
                    let four_ac = &spec.from_i64(4) * &(a * c);
                    let disc = &(b * b) - &four_ac;
                    let s = disc.sqrt_if_square()?;
                    let two_a = &spec.from_i64(2) * a;
                    Some(&(&s - b) * &two_a.inv())
                }
                _ => {
                    // not reachable from 2x2 minors, which have degree <= 2
                    (-100..100i64)
                        .map(|v| spec.from_i64(v))
                        .find(|t| self.eval(t).is_zero())
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kronecker::act;
    use crate::kronecker::GroupElem;
    use crate::mat::Mat2;

    const Q: FieldSpec = FieldSpec::Rational;

    fn check_witness(phi: &KModule, w: &Destabilizer) {
        // every slice maps the source basis into the span of the target basis
        let slices: Vec<Mat2> = VARS.iter().map(|&v| phi.slice(v)).collect();
        for k in &w.source_basis {
            for m in &slices {
                let img = m.apply(k);
                let mut rows: Vec<Vec<Scalar>> =
                    w.target_basis.iter().map(|t| t.to_vec()).collect();
                rows.push(img.to_vec());
                assert!(
                    mat::rank(rows) <= w.target_basis.len(),
                    "witness image escapes the target subspace"
                );
            }
        }
    }

    #[test]
    fn strictly_semistable_example() {
        // [[x, y], [0, x]]: semistable, not stable, K = L = span(e1)
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0; 4], [1, 0, 0, 0]],
            ],
        );
        assert!(is_semistable(&phi));
        assert!(!is_stable(&phi));
        let v = king_oracle(&phi);
        assert!(v.semistable);
        assert!(!v.stable);
        let w = v.witness.expect("rational destabilizer exists");
        assert_eq!((w.source_dim, w.target_dim), (1, 1));
        check_witness(&phi, &w);
    }

    #[test]
    fn zero_column_kills_semistability() {
        let phi = KModule::from_i64(
            Q,
            [
                [[0; 4], [0, 1, 0, 0]],
                [[0; 4], [1, 0, 0, 2]],
            ],
        );
        let v = king_oracle(&phi);
        assert!(!v.semistable);
        assert!(!v.stable);
        let w = v.witness.unwrap();
        assert_eq!((w.source_dim, w.target_dim), (1, 0));
        check_witness(&phi, &w);
        assert_eq!(is_semistable(&phi), v.semistable);
    }

    #[test]
    fn zero_module_and_rank_one_image() {
        let v = king_oracle(&KModule::zero(Q));
        assert!(!v.semistable);

        // both columns of every slice lie on the same target line
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0; 4], [0; 4]],
            ],
        );
        let v = king_oracle(&phi);
        assert!(!v.semistable);
        let w = v.witness.unwrap();
        check_witness(&phi, &w);
    }

    #[test]
    fn stable_example_agrees() {
        let v = king_oracle(&KModule::nu1_matrix(Q));
        assert!(v.semistable && v.stable);
    }

    #[test]
    fn geometric_destabilizer_without_rational_witness() {
        // det = x^2 + y^2 is reducible only over an extension; the oracle
        // must still call the module unstable, with no witness to show
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0, -1, 0, 0], [1, 0, 0, 0]],
            ],
        );
        assert!(is_semistable(&phi));
        assert!(!is_stable(&phi));
        let v = king_oracle(&phi);
        assert!(v.semistable);
        assert!(!v.stable);
        assert!(v.witness.is_none());
    }

    #[test]
    fn verdicts_invariant_under_action_and_coord_change() {
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 0], [0, 1, 0, 0]],
                [[0; 4], [1, 0, 0, 0]],
            ],
        );
        let gh = GroupElem::new(
            Mat2::from_i64(Q, [[1, 2], [1, 3]]),
            Mat2::from_i64(Q, [[2, 1], [3, 2]]),
        )
        .unwrap();
        let moved = act(&gh, &phi);
        let a = king_oracle(&phi);
        let b = king_oracle(&moved);
        assert_eq!((a.semistable, a.stable), (b.semistable, b.stable));
        assert_eq!(is_semistable(&phi), is_semistable(&moved));
        assert_eq!(is_stable(&phi), is_stable(&moved));

        let u = crate::multilinear::CoordChange::from_i64(
            Q,
            [[1, 1, 0, 0], [0, 1, 0, 2], [0, 0, 1, 0], [1, 0, 0, 1]],
        )
        .unwrap();
        let changed = phi.apply_coord_change(&u);
        let c = king_oracle(&changed);
        assert_eq!((a.semistable, a.stable), (c.semistable, c.stable));
        assert_eq!(is_semistable(&phi), is_semistable(&changed));
        assert_eq!(is_stable(&phi), is_stable(&changed));
    }
}

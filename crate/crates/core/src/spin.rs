//! Higher-spin extensions of the matrix `L`.
//!
//! `L_(k) = k S^(k) L_1 S^(k)` restricted to the symmetric component of
//! `V^{otimes k}`, written in the multiplicity-free symmetric basis
//! `v_{k1,k2} = sum of distinct permutations of v1^{k1} (x) v2^{k2}`
//! (no normalizing factors, so the k = 2 matrix comes out entry-for-entry
//! in the published form). The compact-form conjugate of `L_(2)` is built
//! with the fixed transition matrix.

use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::ScalarMat;
use crate::ncmatrix::{base_matrix, tensor_perm_matrix, NCMatrix};
use crate::pbw::{change_basis, AlgebraContext, NCElement, Presentation};
use crate::scalars::Scalar;

/// Default cap on the spin parameter `k`; overridable per call.
pub const DEFAULT_K_CAP: usize = 5;

/// Line-bundle label `(k1, k2)` with `k1 + k2 = k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize, serde::Deserialize)]
pub struct QlbLabel {
    pub k1: u32,
    pub k2: u32,
}

impl QlbLabel {
    pub fn new(k1: u32, k2: u32) -> Self {
        QlbLabel { k1, k2 }
    }

    pub fn k(&self) -> u32 {
        self.k1 + self.k2
    }
}

impl std::fmt::Display for QlbLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// Labels with `k1 + k2 = k` in the fixed order: descending `k1`.
pub fn labels_for(k: u32) -> Vec<QlbLabel> {
    (0..=k).map(|k2| QlbLabel::new(k - k2, k2)).collect()
}

/// Basis of the symmetric component of `V^{otimes k}`: for each label,
/// the 0/1 support over the `2^k` tensor basis (all arrangements with
/// `k2` factors equal to `v2`).
#[derive(Clone, Debug)]
pub struct SymBasis {
    pub k: u32,
    pub labels: Vec<QlbLabel>,
    pub supports: Vec<Vec<usize>>,
}

impl SymBasis {
    pub fn new(k: u32) -> Self {
        let labels = labels_for(k);
        let dim = 1usize << k;
        let mut supports = vec![Vec::new(); labels.len()];
        for idx in 0..dim {
            let ones = (idx as u32).count_ones();
            // label position: k2 = number of v2 factors = set bits
            supports[ones as usize].push(idx);
        }
        SymBasis { k, labels, supports }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Express a tensor-space column (right-module coordinates) in this
    /// basis; errors if the vector is not constant on some support.
    pub fn express(&self, v: &[NCElement]) -> Result<Vec<NCElement>> {
        let mut coords = Vec::with_capacity(self.labels.len());
        for support in &self.supports {
            let first = &v[support[0]];
            for &idx in &support[1..] {
                if &v[idx] != first {
                    return Err(Error::ShapeMismatch(
                        "vector does not lie in the symmetric component".into(),
                    ));
                }
            }
            coords.push(first.clone());
        }
        Ok(coords)
    }
}

/// `Delta^{k-1}(L) = sum_i id^{(i-1)} (x) L (x) id^{(k-i)}` on `V^{otimes k}`.
pub fn coproduct_matrix(ctx: &Arc<AlgebraContext>, k: u32) -> Result<NCMatrix> {
    if k < 1 {
        return Err(Error::IndexOutOfRange("coproduct needs k >= 1".into()));
    }
    let l = base_matrix(ctx);
    let mut sum = NCMatrix::zeros(ctx, 1 << k, 1 << k);
    for i in 0..k {
        let left = NCMatrix::identity(ctx, 1 << i);
        let right = NCMatrix::identity(ctx, 1 << (k - 1 - i));
        sum = sum.add(&left.kron(&l)?.kron(&right)?)?;
    }
    Ok(sum)
}

/// Young symmetrizer `S^(k) = (1/k!) sum over permutation matrices`.
pub fn symmetrizer(k: u32) -> ScalarMat {
    let k = k as usize;
    let dim = 1usize << k;
    let mut sum = ScalarMat::zeros(dim, dim);
    let mut count = 0i64;
    for perm in (0..k).permutations(k) {
        sum = sum.add(&tensor_perm_matrix(k, &perm));
        count += 1;
    }
    sum.scale(&Scalar::ratio(1, count))
}

/// The matrix `L_(k)` on the symmetric component, with its basis.
#[derive(Clone, Debug)]
pub struct ExtensionMatrix {
    pub k: u32,
    pub matrix: NCMatrix,
    pub basis: SymBasis,
}

/// Build `L_(k) = k S^(k) L_1 S^(k)` and restrict it to the symmetric basis.
pub fn extension_matrix(ctx: &Arc<AlgebraContext>, k: u32) -> Result<ExtensionMatrix> {
    extension_matrix_capped(ctx, k, DEFAULT_K_CAP)
}

pub fn extension_matrix_capped(
    ctx: &Arc<AlgebraContext>,
    k: u32,
    cap: usize,
) -> Result<ExtensionMatrix> {
    if k < 1 || (k as usize) > cap {
        return Err(Error::IndexOutOfRange(format!("k = {k} outside 1..={cap}")));
    }
    let basis = SymBasis::new(k);
    if k == 1 {
        return Ok(ExtensionMatrix { k, matrix: base_matrix(ctx), basis });
    }
    let full = full_extension_operator(ctx, k)?;
    let matrix = restrict_to_sym(&full, &basis)?;
    Ok(ExtensionMatrix { k, matrix, basis })
}

/// The full `2^k x 2^k` operator `k S L_1 S` before restriction.
pub fn full_extension_operator(ctx: &Arc<AlgebraContext>, k: u32) -> Result<NCMatrix> {
    let s = NCMatrix::from_scalar_mat(ctx, &symmetrizer(k));
    let l = base_matrix(ctx);
    let l1 = l.kron(&NCMatrix::identity(ctx, 1 << (k - 1)))?;
    Ok(s.mul(&l1)?.mul(&s)?.scale(&Scalar::int(k as i64)))
}

/// Restrict an operator that preserves the symmetric component to the
/// `SymBasis` coordinates.
pub fn restrict_to_sym(full: &NCMatrix, basis: &SymBasis) -> Result<NCMatrix> {
    let ctx = full.ctx();
    let dim = 1usize << basis.k;
    let n = basis.dim();
    let mut out = NCMatrix::zeros(ctx, n, n);
    for (j, support) in basis.supports.iter().enumerate() {
        // image of the j-th basis vector: sum of the support columns
        let mut image = vec![NCElement::zero(ctx); dim];
        for &col in support {
            for (r, img) in image.iter_mut().enumerate() {
                let e = full.get(r, col);
                if !e.is_zero() {
                    *img = img.add(e);
                }
            }
        }
        let coords = basis.express(&image)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// Transition matrix `P` of the compact-basis change for `k = 2`.
pub fn compact_transition() -> ScalarMat {
    let i = Scalar::i();
    let half = Scalar::ratio(1, 2);
    ScalarMat::new(
        3,
        3,
        vec![
            Scalar::zero(),
            Scalar::one(),
            Scalar::zero(),
            half.clone(),
            Scalar::zero(),
            -&half,
            -&(&i * &half),
            Scalar::zero(),
            -&(&i * &half),
        ],
    )
}

/// Conjugate `L_(2)` into the compact form: entries pass through the basis
/// change into `su2h`, then `Lbar_(2) = P L_(2) P^{-1}`.
pub fn conjugate_to_compact(
    ext: &ExtensionMatrix,
    su2h: &Arc<AlgebraContext>,
) -> Result<NCMatrix> {
    if ext.k != 2 {
        return Err(Error::IndexOutOfRange(format!(
            "compact conjugation is defined for k = 2, got {}",
            ext.k
        )));
    }
    if su2h.presentation() != Presentation::Su2h {
        return Err(Error::ContextMismatch("target context must be su2h".into()));
    }
    let mapped = NCMatrix::from_fn(su2h, 3, 3, |r, c| {
        change_basis(ext.matrix.get(r, c), su2h).expect("entry basis change")
    });
    let p = compact_transition();
    let p_inv = p.inverse()?;
    NCMatrix::from_scalar_mat(su2h, &p)
        .mul(&mapped)?
        .mul(&NCMatrix::from_scalar_mat(su2h, &p_inv))
}

/// The expected compact form `2 [[0,-z,y],[z,0,-x],[-y,x,0]]`.
pub fn expected_compact_l2(su2h: &Arc<AlgebraContext>) -> NCMatrix {
    let x = NCElement::gen(su2h, 0);
    let y = NCElement::gen(su2h, 1);
    let z = NCElement::gen(su2h, 2);
    let zero = NCElement::zero(su2h);
    NCMatrix::new(
        su2h,
        3,
        3,
        vec![
            zero.clone(),
            z.neg(),
            y.clone(),
            z.clone(),
            zero.clone(),
            x.neg(),
            y.neg(),
            x.clone(),
            zero,
        ],
    )
    .unwrap()
    .scale(&Scalar::int(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncmatrix::flip_perm;

    fn sl2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Sl2h, Some(Scalar::alpha()))
    }

    fn su2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Su2h, Some(Scalar::alpha()))
    }

    #[test]
    fn symmetrizer_is_projector() {
        for k in 1..=4u32 {
            let s = symmetrizer(k);
            assert_eq!(s.mul(&s), s, "S^2 = S at k = {k}");
            // rank = dim Sym^k(C^2) = k + 1
            assert_eq!(s.rank(), (k + 1) as usize, "rank at k = {k}");
        }
    }

    #[test]
    fn symmetrizer_absorbs_transpositions() {
        let ctx = sl2h_q();
        for k in 2..=4u32 {
            let s = NCMatrix::from_scalar_mat(&ctx, &symmetrizer(k));
            for i in 1..k as usize {
                let p = flip_perm(&ctx, k as usize, i).unwrap();
                assert_eq!(s.mul(&p).unwrap(), s, "S P = S at k = {k}, i = {i}");
                assert_eq!(p.mul(&s).unwrap(), s, "P S = S at k = {k}, i = {i}");
            }
        }
    }

    #[test]
    fn sym_basis_k2_is_the_published_one() {
        let basis = SymBasis::new(2);
        assert_eq!(basis.labels, vec![QlbLabel::new(2, 0), QlbLabel::new(1, 1), QlbLabel::new(0, 2)]);
        // v20 = v1(x)v1 -> index 0; v11 = v1(x)v2 + v2(x)v1 -> {1, 2}; v02 -> 3
        assert_eq!(basis.supports, vec![vec![0], vec![1, 2], vec![3]]);
    }

    #[test]
    fn coproduct_matrix_k1_is_l() {
        let ctx = sl2h_q();
        assert_eq!(coproduct_matrix(&ctx, 1).unwrap(), base_matrix(&ctx));
    }

    #[test]
    fn coproduct_trace_vanishes_in_sl2h() {
        // tr Delta(L) = 2 * 2^{k-1} * (a + d) = 0 when d = -a
        let ctx = sl2h_q();
        let m = coproduct_matrix(&ctx, 2).unwrap();
        assert!(m.trace().unwrap().is_zero());
    }

    #[test]
    fn extension_k1_is_l_and_k2_matches_published_matrix() {
        let ctx = sl2h_q();
        let e1 = extension_matrix(&ctx, 1).unwrap();
        assert_eq!(e1.matrix, base_matrix(&ctx));

        let e2 = extension_matrix(&ctx, 2).unwrap();
        let b = NCElement::gen(&ctx, 0);
        let a = NCElement::gen(&ctx, 1);
        let c = NCElement::gen(&ctx, 2);
        let two = Scalar::int(2);
        let expected = NCMatrix::new(
            &ctx,
            3,
            3,
            vec![
                a.scale(&two),
                b.scale(&two),
                NCElement::zero(&ctx),
                c.clone(),
                NCElement::zero(&ctx),
                b.clone(),
                NCElement::zero(&ctx),
                c.scale(&two),
                a.scale(&two).neg(),
            ],
        )
        .unwrap();
        assert_eq!(e2.matrix, expected);
    }

    #[test]
    fn extension_agrees_with_coproduct_restriction() {
        // independent route: restrict Delta^{k-1}(L) directly
        let ctx = sl2h_q();
        for k in 2..=3u32 {
            let ext = extension_matrix(&ctx, k).unwrap();
            let cop = coproduct_matrix(&ctx, k).unwrap();
            let restricted = restrict_to_sym(&cop, &ext.basis).unwrap();
            assert_eq!(ext.matrix, restricted, "k = {k}");
        }
    }

    #[test]
    fn extension_k3_top_entry() {
        // (v30, v30) entry of L_(3) is 3a
        let ctx = sl2h_q();
        let e3 = extension_matrix(&ctx, 3).unwrap();
        assert_eq!(e3.matrix.rows(), 4);
        let a = NCElement::gen(&ctx, 1);
        assert_eq!(*e3.matrix.get(0, 0), a.scale(&Scalar::int(3)));
    }

    #[test]
    fn restricted_operator_consistency_on_random_vectors() {
        // k S L1 S w in SymBasis coordinates equals ExtensionMatrix * coords(w)
        let ctx = sl2h_q();
        for k in 2..=3u32 {
            let ext = extension_matrix(&ctx, k).unwrap();
            let full = full_extension_operator(&ctx, k).unwrap();
            let b = NCElement::gen(&ctx, 0);
            let probes: Vec<Vec<NCElement>> = (0..4)
                .map(|t| {
                    ext.basis
                        .labels
                        .iter()
                        .enumerate()
                        .map(|(i, _)| {
                            // simple varied coefficients f_i in A_h
                            b.scale(&Scalar::int((t + 2 * i as i64) % 5 - 2))
                                .add(&NCElement::constant(&ctx, Scalar::int(i as i64 - t)))
                        })
                        .collect()
                })
                .collect();
            for coords in probes {
                // w = sum v_i f_i as a tensor-space column
                let dim = 1usize << k;
                let mut w = vec![NCElement::zero(&ctx); dim];
                for (i, support) in ext.basis.supports.iter().enumerate() {
                    for &idx in support {
                        w[idx] = coords[i].clone();
                    }
                }
                let image = full.apply(&w).unwrap();
                let via_full = ext.basis.express(&image).unwrap();
                let via_matrix = ext.matrix.apply(&coords).unwrap();
                assert_eq!(via_full, via_matrix, "k = {k}");
            }
        }
    }

    #[test]
    fn pre_restriction_identity_on_v_tensor_v() {
        // On all of V (x) V: M^3 - 4h M^2 + 4(al + h^2) M - 4 h al (id + P) = 0
        // with M = (1/2)(id+P) L1 (id+P)
        let ctx = sl2h_q();
        let l = base_matrix(&ctx);
        let id2 = NCMatrix::identity(&ctx, 2);
        let l1 = l.kron(&id2).unwrap();
        let p = flip_perm(&ctx, 2, 1).unwrap();
        let id4 = NCMatrix::identity(&ctx, 4);
        let id_plus_p = id4.add(&p).unwrap();
        let m = id_plus_p.mul(&l1).unwrap().mul(&id_plus_p).unwrap().scale(&Scalar::ratio(1, 2));
        let h = Scalar::hbar();
        let al = Scalar::alpha();
        let m2 = m.mul(&m).unwrap();
        let m3 = m2.mul(&m).unwrap();
        let four = Scalar::int(4);
        let residual = m3
            .sub(&m2.scale(&(&four * &h)))
            .unwrap()
            .add(&m.scale(&(&four * &(&al + &(&h * &h)))))
            .unwrap()
            .sub(&id_plus_p.scale(&(&four * &(&h * &al))))
            .unwrap();
        assert!(residual.is_zero());
    }

    #[test]
    fn compact_conjugate_matches_published_form() {
        let sl = sl2h_q();
        let su = su2h_q();
        let ext = extension_matrix(&sl, 2).unwrap();
        let lbar = conjugate_to_compact(&ext, &su).unwrap();
        assert_eq!(lbar, expected_compact_l2(&su));
        assert!(lbar.trace().unwrap().is_zero());
    }

    #[test]
    fn k_cap_enforced() {
        let ctx = sl2h_q();
        assert!(extension_matrix_capped(&ctx, 6, 5).is_err());
        assert!(extension_matrix_capped(&ctx, 3, 3).is_ok());
    }
}

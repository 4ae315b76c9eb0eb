//! Finite-dimensional irreducibles, the evaluation homomorphism and the
//! NC index pairing.
//!
//! The dimension-`n` irreducible is built from ladder matrices with rational
//! entries, scaled so that `[pi(x), pi(y)] = h pi(z)` cyclically; `pi(b)` is
//! upper triangular, which pins the residual basis freedom. The Casimir acts
//! by `-h^2 (n^2 - 1)/4`, so every irreducible forces `al`, and evaluation
//! specializes `(h, al, s)` accordingly with the branch `s = n h`.
//!
//! The pairing `<E^{k1,k2}, U> = tr pi_U(tr e_{k1,k2})` is computed through
//! the explicit matrices (the trace of an exact idempotent over the Gaussian
//! rationals, hence an integer) and compared with the closed form
//! `n + k1 - k2` inside its regime `n > k1 + k2`.

use std::sync::Arc;

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::bundles::lagrange_idempotent;
use crate::error::{Error, Result};
use crate::linalg::ScalarMat;
use crate::ncmatrix::NCMatrix;
use crate::pbw::{AlgebraContext, NCElement, Presentation};
use crate::report::Status;
use crate::scalars::{grat_from_ratio, GRat, Scalar, Specialization};
use crate::spin::QlbLabel;

/// Dense matrix over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussMat {
    rows: usize,
    cols: usize,
    data: Vec<GRat>,
}

impl GaussMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GaussMat { rows, cols, data: vec![GRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GaussMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GRat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &GaussMat) -> GaussMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &GaussMat) -> GaussMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &GaussMat) -> GaussMat {
        assert_eq!(self.cols, other.rows);
        let mut out = GaussMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = self.get2(&out, r, c) + a * b;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    fn get2(&self, m: &GaussMat, r: usize, c: usize) -> GRat {
        m.get(r, c).clone()
    }

    pub fn scale(&self, s: &GRat) -> GaussMat {
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> GRat {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(GRat::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GRat::is_zero)
    }

    pub fn pow(&self, e: u32) -> GaussMat {
        let mut out = GaussMat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// The spin-`j` irreducible with `n = 2j + 1`, generator matrices symbolic
/// in `h`.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub n: u32,
    mat_b: ScalarMat,
    mat_a: ScalarMat,
    mat_c: ScalarMat,
}

impl Irrep {
    /// `pi(a) = h * diag((n-1-2r)/2)`, `pi(b) = h e` (upper triangular,
    /// `e v_r = r(n-r) v_{r-1}`), `pi(c) = h f` (`f v_r = v_{r+1}`).
    pub fn new(n: u32) -> Irrep {
        let size = n as usize;
        let h = Scalar::hbar();
        let mut mat_a = ScalarMat::zeros(size, size);
        let mut mat_b = ScalarMat::zeros(size, size);
        let mut mat_c = ScalarMat::zeros(size, size);
        for r in 0..size {
            mat_a.set(r, r, &h * &Scalar::ratio(n as i64 - 1 - 2 * r as i64, 2));
            if r >= 1 {
                // e v_r = r (n - r) v_{r-1}
                mat_b.set(r - 1, r, &h * &Scalar::int((r as i64) * (n as i64 - r as i64)));
            }
            if r + 1 < size {
                mat_c.set(r + 1, r, h.clone());
            }
        }
        Irrep { n, mat_b, mat_a, mat_c }
    }

    /// The Casimir constraint this irreducible forces: `al = -h^2 (n^2-1)/4`.
    pub fn forced_alpha(&self) -> Scalar {
        let n2 = (self.n as i64) * (self.n as i64);
        &(&Scalar::hbar() * &Scalar::hbar()) * &Scalar::ratio(-(n2 - 1), 4)
    }

    /// Generator matrices in the order of the presentation's generators,
    /// still symbolic in `h`.
    pub fn generator_mats(&self, presentation: Presentation) -> Vec<ScalarMat> {
        let i = Scalar::i();
        let half = Scalar::ratio(1, 2);
        match presentation {
            Presentation::Sl2h => vec![self.mat_b.clone(), self.mat_a.clone(), self.mat_c.clone()],
            Presentation::Gl2h => vec![
                self.mat_b.clone(),
                self.mat_a.clone(),
                self.mat_a.scale(&Scalar::int(-1)),
                self.mat_c.clone(),
            ],
            Presentation::Su2h => {
                // x = -i a, y = i(b+c)/2, z = (b-c)/2
                let x = self.mat_a.scale(&-&i);
                let y = self.mat_b.add(&self.mat_c).scale(&(&i * &half));
                let z = self.mat_b.sub(&self.mat_c).scale(&half);
                vec![x, y, z]
            }
        }
    }
}

fn specialize_mat(m: &ScalarMat, sp: &Specialization) -> Result<GaussMat> {
    let mut out = GaussMat::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, m.get(r, c).specialize(sp)?);
        }
    }
    Ok(out)
}

/// Evaluation homomorphism `pi_U: A_h -> End(U)` at a compatible
/// specialization.
pub struct Evaluator {
    pub irrep: Irrep,
    pub sp: Specialization,
}

impl Evaluator {
    pub fn new(irrep: Irrep, sp: Specialization) -> Result<Evaluator> {
        let forced = irrep.forced_alpha().specialize(&sp)?;
        if forced != grat_from_ratio(sp.alpha.clone()) {
            return Err(Error::SpecializationMismatch(format!(
                "alpha = {} incompatible with n = {} at hbar = {}",
                sp.alpha, irrep.n, sp.hbar
            )));
        }
        Ok(Evaluator { irrep, sp })
    }

    /// Standard evaluator for dimension `n` at a rational `hbar`,
    /// branch `s = n h`.
    pub fn for_irrep(n: u32, hbar: BigRational) -> Result<Evaluator> {
        Evaluator::new(Irrep::new(n), Specialization::for_irrep(n, hbar)?)
    }

    fn gens(&self, presentation: Presentation) -> Result<Vec<GaussMat>> {
        self.irrep
            .generator_mats(presentation)
            .iter()
            .map(|m| specialize_mat(m, &self.sp))
            .collect()
    }

    /// Image of a PBW-normalized element: monomials map to ordered matrix
    /// products, coefficients through the specialization.
    pub fn elt(&self, f: &NCElement) -> Result<GaussMat> {
        let n = self.irrep.n as usize;
        let gens = self.gens(f.ctx().presentation())?;
        let mut out = GaussMat::zeros(n, n);
        for (exps, coeff) in f.terms() {
            let c = coeff.specialize(&self.sp)?;
            let mut m = GaussMat::identity(n);
            for (g, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    m = m.mul(&gens[g]);
                }
            }
            out = out.add(&m.scale(&c));
        }
        Ok(out)
    }

    /// Entry-wise image of a matrix over `A_h` as one block matrix.
    pub fn mat(&self, m: &NCMatrix) -> Result<GaussMat> {
        let n = self.irrep.n as usize;
        let mut out = GaussMat::zeros(m.rows() * n, m.cols() * n);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let block = self.elt(m.get(r, c))?;
                for br in 0..n {
                    for bc in 0..n {
                        out.set(r * n + br, c * n + bc, block.get(br, bc).clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One pairing cell `<E^{k1,k2}(h), U_j>`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingCell {
    pub k1: u32,
    pub k2: u32,
    pub n: u32,
    /// `tr pi_U(tr e)`, present unless degenerate at the specialization.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub value: Option<BigInt>,
    /// `n + k1 - k2`, asserted only for `n > k1 + k2`.
    pub closed_form: Option<i64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn ser_opt_bigint<S: serde::Serializer>(
    v: &Option<BigInt>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => ser.serialize_some(&n.to_string()),
        None => ser.serialize_none(),
    }
}

/// Evaluate the index pairing through explicit matrices and compare with the
/// closed form where `n > k1 + k2`.
pub fn index_pairing(
    ctx: &Arc<AlgebraContext>,
    label: QlbLabel,
    n: u32,
    hbar: BigRational,
) -> Result<PairingCell> {
    let k = label.k();
    let in_regime = n > k;
    let closed_form =
        if in_regime { Some(n as i64 + label.k1 as i64 - label.k2 as i64) } else { None };
    let evaluator = Evaluator::for_irrep(n, hbar)?;
    // degenerate specialization: some predicted roots collide at this point
    let idem = lagrange_idempotent(ctx, k, label)?;
    let big = match evaluator.mat(&idem.e) {
        Ok(b) => b,
        Err(Error::DenominatorVanishes(what)) => {
            return Ok(PairingCell {
                k1: label.k1,
                k2: label.k2,
                n,
                value: None,
                closed_form,
                status: Status::Degenerate,
                detail: Some(format!("spectrum degenerate at the specialization: {what}")),
            });
        }
        Err(e) => return Err(e),
    };
    // the image must be an exact idempotent; its trace is its rank
    if big.mul(&big) != big {
        return Ok(PairingCell {
            k1: label.k1,
            k2: label.k2,
            n,
            value: None,
            closed_form,
            status: Status::Failed,
            detail: Some("specialized matrix is not idempotent".into()),
        });
    }
    let tr = big.trace();
    if !tr.im.is_zero() || !tr.re.denom().is_one() {
        return Ok(PairingCell {
            k1: label.k1,
            k2: label.k2,
            n,
            value: None,
            closed_form,
            status: Status::Failed,
            detail: Some(format!("pairing is not an integer: {}", tr.re)),
        });
    }
    let value = tr.re.numer().clone();
    let status = match closed_form {
        Some(cf) => {
            if value == BigInt::from(cf) {
                Status::Verified
            } else {
                Status::Failed
            }
        }
        None => Status::OutsideRegime,
    };
    Ok(PairingCell {
        k1: label.k1,
        k2: label.k2,
        n,
        value: Some(value),
        closed_form,
        status,
        detail: None,
    })
    .map(|mut cell| {
        if cell.status == Status::Failed && cell.detail.is_none() {
            cell.detail = Some("computed value disagrees with the closed form".into());
        }
        cell
    })
}

/// Pairing table over all labels with `k1 + k2 <= max_k` and `1 <= n <= max_n`.
pub fn pairing_table(
    ctx: &Arc<AlgebraContext>,
    max_k: u32,
    max_n: u32,
    hbar: BigRational,
) -> Result<Vec<PairingCell>> {
    let mut cells = Vec::new();
    for k in 0..=max_k {
        for label in crate::spin::labels_for(k) {
            for n in 1..=max_n {
                cells.push(index_pairing(ctx, label, n, hbar.clone())?);
            }
        }
    }
    Ok(cells)
}

/// TSV rendering with the header `k1 k2 n pairing regime`.
pub fn pairing_table_tsv(cells: &[PairingCell]) -> String {
    let mut out = String::from("k1\tk2\tn\tpairing\tregime\n");
    for cell in cells {
        let value = cell
            .value
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_string());
        let regime = match cell.status {
            Status::OutsideRegime => "outside-closed-form-regime",
            Status::Degenerate => "degenerate",
            Status::Verified => "closed-form",
            Status::Failed => "FAILED",
        };
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", cell.k1, cell.k2, cell.n, value, regime));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncmatrix::base_matrix;
    use crate::scalars::ratio;

    fn sl2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Sl2h, Some(Scalar::alpha()))
    }

    fn su2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Su2h, Some(Scalar::alpha()))
    }

    #[test]
    fn irrep_satisfies_the_relations_symbolically() {
        let h = Scalar::hbar();
        for n in 1..=5u32 {
            let rep = Irrep::new(n);
            let [x, y, z]: [ScalarMat; 3] =
                rep.generator_mats(Presentation::Su2h).try_into().unwrap();
            let comm = |p: &ScalarMat, q: &ScalarMat| p.mul(q).sub(&q.mul(p));
            assert_eq!(comm(&x, &y), z.scale(&h), "[x,y] = h z at n = {n}");
            assert_eq!(comm(&y, &z), x.scale(&h), "[y,z] = h x at n = {n}");
            assert_eq!(comm(&z, &x), y.scale(&h), "[z,x] = h y at n = {n}");
            // Casimir scalarity
            let cas = x.mul(&x).add(&y.mul(&y)).add(&z.mul(&z));
            let expected = ScalarMat::identity(n as usize).scale(&rep.forced_alpha());
            assert_eq!(cas, expected, "Casimir at n = {n}");
        }
    }

    #[test]
    fn forced_alpha_examples() {
        // n = 2: -3 h^2/4; n = 3: -2 h^2; n = 1: 0 (trivial rep, all zero)
        let h2 = &Scalar::hbar() * &Scalar::hbar();
        assert_eq!(Irrep::new(2).forced_alpha(), &h2 * &Scalar::ratio(-3, 4));
        assert_eq!(Irrep::new(3).forced_alpha(), &h2 * &Scalar::int(-2));
        let triv = Irrep::new(1);
        assert!(triv.forced_alpha().is_zero());
        for m in triv.generator_mats(Presentation::Sl2h) {
            assert!(m.is_zero());
        }
    }

    #[test]
    fn pi_b_is_upper_triangular() {
        let rep = Irrep::new(4);
        let b = &rep.generator_mats(Presentation::Sl2h)[0];
        for r in 0..4 {
            for c in 0..=r {
                assert!(b.get(r, c).is_zero());
            }
        }
    }

    #[test]
    fn evaluator_rejects_incompatible_alpha() {
        let sp = Specialization::new(ratio(1, 1), ratio(-3, 4), grat_from_ratio(ratio(2, 1))).unwrap();
        assert!(Evaluator::new(Irrep::new(3), sp).is_err());
        assert!(Evaluator::for_irrep(3, ratio(1, 1)).is_ok());
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let ctx = sl2h_q();
        let ev = Evaluator::for_irrep(3, ratio(1, 1)).unwrap();
        let b = NCElement::gen(&ctx, 0);
        let a = NCElement::gen(&ctx, 1);
        let c = NCElement::gen(&ctx, 2);
        let f = b.multiply(&c).unwrap().add(&a.scale(&Scalar::gauss(1, 2)));
        let g = c.multiply(&c).unwrap().sub(&b.scale(&Scalar::ratio(1, 3)));
        let lhs = ev.elt(&f.multiply(&g).unwrap()).unwrap();
        let rhs = ev.elt(&f).unwrap().mul(&ev.elt(&g).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn casimir_evaluates_to_alpha() {
        let ctx = su2h_q();
        for n in 2..=4u32 {
            let ev = Evaluator::for_irrep(n, ratio(1, 1)).unwrap();
            let x = NCElement::gen(&ctx, 0);
            let y = NCElement::gen(&ctx, 1);
            let z = NCElement::gen(&ctx, 2);
            let cas = x
                .multiply(&x)
                .unwrap()
                .add(&y.multiply(&y).unwrap())
                .add(&z.multiply(&z).unwrap());
            let img = ev.elt(&cas).unwrap();
            let expected =
                GaussMat::identity(n as usize).scale(&grat_from_ratio(ev.sp.alpha.clone()));
            assert_eq!(img, expected);
        }
    }

    #[test]
    fn normal_form_oracle_under_irreps() {
        // evaluate unordered products as matrix products and compare with
        // the image of the PBW normal form, n = 2..5
        let ctx = sl2h_q();
        let b = NCElement::gen(&ctx, 0);
        let a = NCElement::gen(&ctx, 1);
        let c = NCElement::gen(&ctx, 2);
        let cbb = c.multiply(&b).unwrap().multiply(&b).unwrap();
        let a2b = a.multiply(&a).unwrap().multiply(&b).unwrap();
        for n in 2..=5u32 {
            let ev = Evaluator::for_irrep(n, ratio(1, 1)).unwrap();
            let gens = [&b, &a, &c].map(|g| ev.elt(g).unwrap());
            let direct_cbb = gens[2].mul(&gens[0]).mul(&gens[0]);
            assert_eq!(ev.elt(&cbb).unwrap(), direct_cbb, "c b b at n = {n}");
            let direct_a2b = gens[1].mul(&gens[1]).mul(&gens[0]);
            assert_eq!(ev.elt(&a2b).unwrap(), direct_a2b, "a^2 b at n = {n}");
        }
    }

    #[test]
    fn numeric_ch_under_evaluation() {
        // pi(L)^2 - h pi(L) + al = 0 as Gaussian-rational matrices
        let ctx = sl2h_q();
        let l = base_matrix(&ctx);
        for n in 2..=5u32 {
            let ev = Evaluator::for_irrep(n, ratio(1, 1)).unwrap();
            let pl = ev.mat(&l).unwrap();
            let lhs = pl
                .pow(2)
                .sub(&pl.scale(&grat_from_ratio(ev.sp.hbar.clone())))
                .add(&GaussMat::identity(2 * n as usize).scale(&grat_from_ratio(ev.sp.alpha.clone())));
            assert!(lhs.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn published_pairing_values() {
        let ctx = sl2h_q();
        let one = ratio(1, 1);
        let check = |k1, k2, n, expect: i64| {
            let cell = index_pairing(&ctx, QlbLabel::new(k1, k2), n, one.clone()).unwrap();
            assert_eq!(cell.status, Status::Verified, "({k1},{k2}) at n = {n}");
            assert_eq!(cell.value.unwrap(), BigInt::from(expect), "({k1},{k2}) at n = {n}");
        };
        check(0, 0, 2, 2);
        check(0, 0, 5, 5);
        check(1, 0, 2, 3);
        check(0, 1, 2, 1);
        check(2, 0, 5, 7);
        check(0, 2, 4, 2);
        check(3, 0, 4, 7);
        check(1, 1, 3, 3);
    }

    #[test]
    fn pairing_additivity_symmetry() {
        // <E^{k1,k2}> + <E^{k2,k1}> = 2n
        let ctx = sl2h_q();
        let one = ratio(1, 1);
        for (k1, k2, n) in [(1u32, 0u32, 3u32), (2, 0, 4), (2, 1, 5)] {
            let a = index_pairing(&ctx, QlbLabel::new(k1, k2), n, one.clone()).unwrap();
            let b = index_pairing(&ctx, QlbLabel::new(k2, k1), n, one.clone()).unwrap();
            assert_eq!(a.value.unwrap() + b.value.unwrap(), BigInt::from(2 * n as i64));
        }
    }

    #[test]
    fn negative_branch_swaps_labels() {
        // s = -n h swaps the roles of (k1,k2) and (k2,k1) in traces
        let ctx = sl2h_q();
        let n = 4u32;
        let neg = Specialization::new(
            ratio(1, 1),
            ratio(-((n * n - 1) as i64), 4),
            grat_from_ratio(ratio(-(n as i64), 1)),
        )
        .unwrap();
        let ev_neg = Evaluator::new(Irrep::new(n), neg).unwrap();
        let e10 = lagrange_idempotent(&ctx, 1, QlbLabel::new(1, 0)).unwrap();
        let big = ev_neg.mat(&e10.e).unwrap();
        // with the positive branch this would be n + 1
        assert_eq!(big.trace(), grat_from_ratio(ratio(n as i64 - 1, 1)));
    }

    #[test]
    fn out_of_regime_cells_are_flagged() {
        let ctx = sl2h_q();
        // (2,0) at n = 2: computable, outside the closed-form regime
        let cell = index_pairing(&ctx, QlbLabel::new(2, 0), 2, ratio(1, 1)).unwrap();
        assert_eq!(cell.status, Status::OutsideRegime);
        assert!(cell.closed_form.is_none());
        assert!(cell.value.is_some());
        // (2,2) at n = 2: the specialized spectrum degenerates
        let cell = index_pairing(&ctx, QlbLabel::new(2, 2), 2, ratio(1, 1)).unwrap();
        assert_eq!(cell.status, Status::Degenerate);
        assert!(cell.value.is_none());
    }

    #[test]
    fn tsv_table_shape() {
        let ctx = sl2h_q();
        let cells = pairing_table(&ctx, 1, 3, ratio(1, 1)).unwrap();
        let tsv = pairing_table_tsv(&cells);
        let mut lines = tsv.lines();
        assert_eq!(lines.next().unwrap(), "k1\tk2\tn\tpairing\tregime");
        // labels (0,0), (1,0), (0,1) times n = 1..3
        assert_eq!(tsv.lines().count(), 1 + 9);
        // row (1,1)-style check: (0,0) pairs to n everywhere
        for n in 1..=3 {
            assert!(tsv.contains(&format!("0\t0\t{n}\t{n}\t")));
        }
    }
}

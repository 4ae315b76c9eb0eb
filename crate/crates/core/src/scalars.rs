//! Exact coefficient field `K = Frac(Z[i][h, al])` adjoined a square root
//! `s` of the discriminant `h^2 - 4*al`.
//!
//! A [`Scalar`] is stored as `(p + q*s) / d` with `p`, `q`, `d` Gaussian-integer
//! polynomials in `h` and `al`. Fractions are reduced by integer content only;
//! equality is decided by cross-multiplication, which is exact because
//! `h^2 - 4*al` is not a square in the base field. [`Specialization`] sends
//! `(h, al, s)` to concrete Gaussian-rational points with `s^2 = h^2 - 4*al`
//! held exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Gaussian integer.
pub type GInt = Complex<BigInt>;
/// Gaussian rational, the value domain of specializations.
pub type GRat = Complex<BigRational>;

pub fn gint(re: i64, im: i64) -> GInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

pub fn grat_int(n: i64) -> GRat {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn grat_from_ratio(r: BigRational) -> GRat {
    Complex::new(r, BigRational::zero())
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational given as `P` or `P/Q` in decimal.
pub fn parse_ratio(text: &str) -> Option<BigRational> {
    let mut parts = text.splitn(2, '/');
    let num: BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(BigRational::from_integer(num)),
        Some(den) => {
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
    }
}

/// Exact square root of a rational, if one exists in `Q` or `i*Q`.
pub fn sqrt_exact(r: &BigRational) -> Option<GRat> {
    if r.is_zero() {
        return Some(GRat::zero());
    }
    let positive = r.is_positive();
    let abs = r.abs();
    let num = abs.numer();
    let den = abs.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) != num || &(&sd * &sd) != den {
        return None;
    }
    let root = BigRational::new(sn, sd);
    if positive {
        Some(Complex::new(root, BigRational::zero()))
    } else {
        Some(Complex::new(BigRational::zero(), root))
    }
}

/// Exact Gaussian-integer division: `a / b` when `b` divides `a`.
fn gint_div_exact(a: &GInt, b: &GInt) -> Option<GInt> {
    let norm = &b.re * &b.re + &b.im * &b.im;
    if norm.is_zero() {
        return None;
    }
    let re = &a.re * &b.re + &a.im * &b.im;
    let im = &a.im * &b.re - &a.re * &b.im;
    if (&re % &norm).is_zero() && (&im % &norm).is_zero() {
        Some(Complex::new(re / &norm, im / norm))
    } else {
        None
    }
}

fn fmt_grat(v: &GRat) -> String {
    if v.im.is_zero() {
        format!("{}", v.re)
    } else if v.re.is_zero() {
        format!("{}*I", v.im)
    } else {
        format!("{}{}{}*I", v.re, if v.im.is_negative() { "-" } else { "+" }, v.im.abs())
    }
}

/// Polynomial in `h` and `al` with Gaussian-integer coefficients.
///
/// Terms are keyed by the exponent pair `(exp_h, exp_al)` in a fixed order;
/// zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GPoly {
    terms: BTreeMap<(u32, u32), GInt>,
}

impl GPoly {
    pub fn zero() -> Self {
        GPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        GPoly::constant(gint(1, 0))
    }

    pub fn constant(c: GInt) -> Self {
        GPoly::monomial(0, 0, c)
    }

    pub fn int(n: i64) -> Self {
        GPoly::constant(gint(n, 0))
    }

    pub fn hbar() -> Self {
        GPoly::monomial(1, 0, gint(1, 0))
    }

    pub fn alpha() -> Self {
        GPoly::monomial(0, 1, gint(1, 0))
    }

    pub fn monomial(eh: u32, ea: u32, c: GInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((eh, ea), c);
        }
        GPoly { terms }
    }

    /// The discriminant polynomial `h^2 - 4*al`.
    pub fn discriminant() -> Self {
        let mut p = GPoly::monomial(2, 0, gint(1, 0));
        p.add_term((0, 1), gint(-4, 0));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.re.is_one() && c.im.is_zero()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<&GInt> {
        if self.terms.len() == 1 {
            self.terms.get(&(0, 0))
        } else if self.terms.is_empty() {
            None
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (u32, u32), c: GInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &GPoly) -> GPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GPoly) -> GPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> GPoly {
        GPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn mul(&self, other: &GPoly) -> GPoly {
        let mut out = GPoly::zero();
        for ((h1, a1), c1) in &self.terms {
            for ((h2, a2), c2) in &other.terms {
                out.add_term((h1 + h2, a1 + a2), c1 * c2);
            }
        }
        out
    }

    /// Leading term in the fixed order (lexicographic on the exponent pair).
    pub fn leading(&self) -> Option<(&(u32, u32), &GInt)> {
        self.terms.last_key_value()
    }

    /// Exact multivariate division; `None` unless `divisor` divides exactly.
    pub fn div_exact(&self, divisor: &GPoly) -> Option<GPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(GPoly::zero());
        }
        if divisor.is_one() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.as_constant() {
            let mut out = GPoly::zero();
            for (k, v) in &self.terms {
                out.add_term(*k, gint_div_exact(v, c)?);
            }
            return Some(out);
        }
        let (dk, dc) = divisor.leading().map(|(k, c)| (*k, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = GPoly::zero();
        while let Some((rk, rc)) = rem.leading().map(|(k, c)| (*k, c.clone())) {
            if rk.0 < dk.0 || rk.1 < dk.1 {
                return None;
            }
            let qk = (rk.0 - dk.0, rk.1 - dk.1);
            let qc = gint_div_exact(&rc, &dc)?;
            for (tk, tc) in &divisor.terms {
                rem.add_term((qk.0 + tk.0, qk.1 + tk.1), -(&qc * tc));
            }
            quot.add_term(qk, qc);
        }
        Some(quot)
    }

    /// Nonnegative gcd of all integer components of all coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&c.re);
            g = g.gcd(&c.im);
        }
        g
    }

    fn div_int(&self, n: &BigInt) -> GPoly {
        GPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, Complex::new(&c.re / n, &c.im / n)))
                .collect(),
        }
    }

    /// Multiply by `i^u`.
    fn mul_i_pow(&self, u: u8) -> GPoly {
        let rot = |c: &GInt| -> GInt {
            match u % 4 {
                0 => c.clone(),
                1 => Complex::new(-c.im.clone(), c.re.clone()),
                2 => -c.clone(),
                _ => Complex::new(c.im.clone(), -c.re.clone()),
            }
        };
        GPoly { terms: self.terms.iter().map(|(k, c)| (*k, rot(c))).collect() }
    }

    pub fn eval(&self, hbar: &BigRational, alpha: &BigRational) -> GRat {
        let mut out = GRat::zero();
        for ((eh, ea), c) in &self.terms {
            let mut v = BigRational::one();
            for _ in 0..*eh {
                v *= hbar;
            }
            for _ in 0..*ea {
                v *= alpha;
            }
            out += Complex::new(
                BigRational::new(c.re.clone(), BigInt::one()) * &v,
                BigRational::new(c.im.clone(), BigInt::one()) * &v,
            );
        }
        out
    }

    /// Substitute a rational for `h` only, returning numerator (a polynomial
    /// in `al`) and a positive integer denominator.
    pub fn eval_hbar(&self, hbar: &BigRational) -> (GPoly, BigInt) {
        let max_eh = self.terms.keys().map(|(eh, _)| *eh).max().unwrap_or(0);
        let num = hbar.numer();
        let den = hbar.denom();
        // common denominator den^max_eh
        let mut out = GPoly::zero();
        for ((eh, ea), c) in &self.terms {
            let mut f = BigInt::one();
            for _ in 0..*eh {
                f = f * num;
            }
            for _ in 0..(max_eh - eh) {
                f = f * den;
            }
            out.add_term((0, *ea), Complex::new(&c.re * &f, &c.im * &f));
        }
        let mut dpow = BigInt::one();
        for _ in 0..max_eh {
            dpow = dpow * den;
        }
        (out, dpow)
    }
}

impl fmt::Display for GPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((eh, ea), c) in &self.terms {
            let mut factors = Vec::new();
            let coeff = if c.im.is_zero() {
                c.re.to_string()
            } else {
                format!("({}{}{}*I)", c.re, if c.im.is_negative() { "-" } else { "+" }, c.im.abs())
            };
            let unit_coeff = c.im.is_zero() && c.re.is_one();
            if !unit_coeff || (*eh == 0 && *ea == 0) {
                factors.push(coeff);
            }
            match eh {
                0 => {}
                1 => factors.push("h".to_string()),
                _ => factors.push(format!("h^{eh}")),
            }
            match ea {
                0 => {}
                1 => factors.push("al".to_string()),
                _ => factors.push(format!("al^{ea}")),
            }
            parts.push(factors.join("*"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    re: String,
    im: String,
    eh: u32,
    ea: u32,
}

impl Serialize for GPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|((eh, ea), c)| TermJson {
                re: c.re.to_string(),
                im: c.im.to_string(),
                eh: *eh,
                ea: *ea,
            })
            .collect();
        terms.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(de)?;
        let mut out = GPoly::zero();
        for t in terms {
            let re: BigInt = t.re.parse().map_err(D::Error::custom)?;
            let im: BigInt = t.im.parse().map_err(D::Error::custom)?;
            out.add_term((t.eh, t.ea), Complex::new(re, im));
        }
        Ok(out)
    }
}

/// Element of the coefficient field, held as `(p + q*s) / d`.
///
/// Invariants: `d != 0`; the integer content common to `p`, `q`, `d` is 1;
/// the leading coefficient of `d` lies in the fundamental unit domain
/// (positive real part, or zero real part with positive imaginary part).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScalarJson", into = "ScalarJson")]
pub struct Scalar {
    p: GPoly,
    q: GPoly,
    d: GPoly,
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    p: GPoly,
    q: GPoly,
    d: GPoly,
}

impl From<Scalar> for ScalarJson {
    fn from(s: Scalar) -> Self {
        ScalarJson { p: s.p, q: s.q, d: s.d }
    }
}

impl TryFrom<ScalarJson> for Scalar {
    type Error = String;
    fn try_from(j: ScalarJson) -> std::result::Result<Self, String> {
        if j.d.is_zero() {
            return Err("scalar denominator is zero".to_string());
        }
        Ok(Scalar::make(j.p, j.q, j.d))
    }
}

impl Scalar {
    /// Normalizing constructor. `d` must be nonzero.
    fn make(p: GPoly, q: GPoly, d: GPoly) -> Scalar {
        assert!(!d.is_zero(), "scalar denominator must be nonzero");
        if p.is_zero() && q.is_zero() {
            return Scalar { p: GPoly::zero(), q: GPoly::zero(), d: GPoly::one() };
        }
        let mut content = p.content().gcd(&q.content()).gcd(&d.content());
        if content.is_zero() {
            content = BigInt::one();
        }
        let (mut p, mut q, mut d) = if content.is_one() {
            (p, q, d)
        } else {
            (p.div_int(&content), q.div_int(&content), d.div_int(&content))
        };
        // Rotate by the unit that puts d's leading coefficient into the
        // fundamental domain Re > 0, or Re == 0 and Im > 0.
        let (_, lc) = d.leading().expect("nonzero denominator");
        let u = if lc.re.is_positive() && !lc.im.is_negative() {
            0
        } else if !lc.im.is_positive() && lc.re.is_negative() {
            2
        } else if lc.im.is_positive() {
            3
        } else {
            1
        };
        if u != 0 {
            p = p.mul_i_pow(u);
            q = q.mul_i_pow(u);
            d = d.mul_i_pow(u);
        }
        debug_assert!({
            let (_, lc) = d.leading().unwrap();
            lc.re.is_positive() && !lc.im.is_negative()
                || lc.re.is_zero() && lc.im.is_positive()
        });
        Scalar { p, q, d }
    }

    pub fn zero() -> Scalar {
        Scalar { p: GPoly::zero(), q: GPoly::zero(), d: GPoly::one() }
    }

    pub fn one() -> Scalar {
        Scalar { p: GPoly::one(), q: GPoly::zero(), d: GPoly::one() }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::make(GPoly::int(n), GPoly::zero(), GPoly::one())
    }

    pub fn gauss(re: i64, im: i64) -> Scalar {
        Scalar::make(GPoly::constant(gint(re, im)), GPoly::zero(), GPoly::one())
    }

    pub fn i() -> Scalar {
        Scalar::gauss(0, 1)
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0);
        Scalar::make(GPoly::int(num), GPoly::zero(), GPoly::int(den))
    }

    pub fn from_ratio(r: &BigRational) -> Scalar {
        Scalar::make(
            GPoly::constant(Complex::new(r.numer().clone(), BigInt::zero())),
            GPoly::zero(),
            GPoly::constant(Complex::new(r.denom().clone(), BigInt::zero())),
        )
    }

    pub fn from_grat(v: &GRat) -> Scalar {
        let den = v.re.denom().lcm(v.im.denom());
        let re = v.re.numer() * (&den / v.re.denom());
        let im = v.im.numer() * (&den / v.im.denom());
        Scalar::make(
            GPoly::constant(Complex::new(re, im)),
            GPoly::zero(),
            GPoly::constant(Complex::new(den, BigInt::zero())),
        )
    }

    pub fn hbar() -> Scalar {
        Scalar::make(GPoly::hbar(), GPoly::zero(), GPoly::one())
    }

    pub fn alpha() -> Scalar {
        Scalar::make(GPoly::alpha(), GPoly::zero(), GPoly::one())
    }

    /// The adjoined square root `s` of `h^2 - 4*al`.
    pub fn s() -> Scalar {
        Scalar::make(GPoly::zero(), GPoly::one(), GPoly::one())
    }

    /// Root `lambda_1 = (h - s)/2` of `x^2 - h*x + al`.
    pub fn lambda1() -> Scalar {
        Scalar::make(GPoly::hbar(), GPoly::int(-1), GPoly::int(2))
    }

    /// Root `lambda_2 = (h + s)/2`.
    pub fn lambda2() -> Scalar {
        Scalar::make(GPoly::hbar(), GPoly::one(), GPoly::int(2))
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }

    /// Numerator `s`-part; zero iff the scalar lies in `Frac(Z[i][h,al])`.
    pub fn s_part(&self) -> &GPoly {
        &self.q
    }

    pub fn parts(&self) -> (&GPoly, &GPoly, &GPoly) {
        (&self.p, &self.q, &self.d)
    }

    /// Constant value if the scalar equals a Gaussian rational (decided by
    /// cross-multiplication, so `h^2 / h^2` counts as 1).
    pub fn as_constant(&self) -> Option<GRat> {
        if !self.q.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(GRat::zero());
        }
        let (pk, pc) = self.p.leading()?;
        let (dk, dc) = self.d.leading()?;
        if pk != dk {
            return None;
        }
        let (pc, dc) = (pc.clone(), dc.clone());
        // candidate ratio pc/dc; constant iff p * dc == d * pc
        if self.p.mul(&GPoly::constant(dc.clone())) != self.d.mul(&GPoly::constant(pc.clone())) {
            return None;
        }
        let norm = &dc.re * &dc.re + &dc.im * &dc.im;
        let num_re = &pc.re * &dc.re + &pc.im * &dc.im;
        let num_im = &pc.im * &dc.re - &pc.re * &dc.im;
        Some(Complex::new(
            BigRational::new(num_re, norm.clone()),
            BigRational::new(num_im, norm),
        ))
    }

    fn add_impl(&self, other: &Scalar) -> Scalar {
        // Shared or nested denominators are the norm in matrix arithmetic;
        // without these paths denominators grow as blind products.
        if self.d == other.d {
            return Scalar::make(
                self.p.add(&other.p),
                self.q.add(&other.q),
                self.d.clone(),
            );
        }
        if let Some(f) = other.d.div_exact(&self.d) {
            return Scalar::make(
                self.p.mul(&f).add(&other.p),
                self.q.mul(&f).add(&other.q),
                other.d.clone(),
            );
        }
        if let Some(f) = self.d.div_exact(&other.d) {
            return Scalar::make(
                self.p.add(&other.p.mul(&f)),
                self.q.add(&other.q.mul(&f)),
                self.d.clone(),
            );
        }
        let p = self.p.mul(&other.d).add(&other.p.mul(&self.d));
        let q = self.q.mul(&other.d).add(&other.q.mul(&self.d));
        let d = self.d.mul(&other.d);
        Scalar::make(p, q, d)
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        // Cross-cancel numerators against the opposite denominator first.
        let mut lp = self.p.clone();
        let mut lq = self.q.clone();
        let mut ld = self.d.clone();
        let mut rp = other.p.clone();
        let mut rq = other.q.clone();
        let mut rd = other.d.clone();
        if !rd.is_one() {
            if let (Some(p2), Some(q2)) = (lp.div_exact(&rd), lq.div_exact(&rd)) {
                lp = p2;
                lq = q2;
                rd = GPoly::one();
            }
        }
        if !ld.is_one() {
            if let (Some(p2), Some(q2)) = (rp.div_exact(&ld), rq.div_exact(&ld)) {
                rp = p2;
                rq = q2;
                ld = GPoly::one();
            }
        }
        let disc = GPoly::discriminant();
        let p = lp.mul(&rp).add(&lq.mul(&rq).mul(&disc));
        let q = lp.mul(&rq).add(&lq.mul(&rp));
        let d = ld.mul(&rd);
        Scalar::make(p, q, d)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/((p+q*s)/d) = d*(p - q*s) / (p^2 - q^2*(h^2-4*al)); the new
        // denominator is nonzero because the discriminant is not a square.
        let disc = GPoly::discriminant();
        let n = self.p.mul(&self.p).sub(&self.q.mul(&self.q).mul(&disc));
        debug_assert!(!n.is_zero());
        Ok(Scalar::make(self.d.mul(&self.p), self.d.mul(&self.q).neg(), n))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul_impl(&other.inv()?))
    }

    /// Field automorphism `s -> -s`.
    pub fn conj_s(&self) -> Scalar {
        Scalar::make(self.p.clone(), self.q.neg(), self.d.clone())
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = out.mul_impl(self);
        }
        out
    }

    /// Evaluate at a specialization point. The homomorphism sends
    /// `h -> hbar`, `al -> alpha`, `s -> s`.
    pub fn specialize(&self, sp: &Specialization) -> Result<GRat> {
        let dv = self.d.eval(&sp.hbar, &sp.alpha);
        if dv.is_zero() {
            return Err(Error::DenominatorVanishes(self.d.to_string()));
        }
        let pv = self.p.eval(&sp.hbar, &sp.alpha);
        let qv = self.q.eval(&sp.hbar, &sp.alpha);
        Ok((pv + qv * sp.s.clone()) / dv)
    }

    /// Substitute a rational for `h` only, keeping `al` symbolic. Defined on
    /// the `s`-free subfield.
    pub fn eval_hbar(&self, hbar: &BigRational) -> Result<Scalar> {
        if !self.q.is_zero() {
            return Err(Error::NotSFree);
        }
        let (dn, dden) = self.d.eval_hbar(hbar);
        if dn.is_zero() {
            return Err(Error::DenominatorVanishes(self.d.to_string()));
        }
        if self.p.is_zero() {
            return Ok(Scalar::zero());
        }
        let (pn, pden) = self.p.eval_hbar(hbar);
        Ok(Scalar::make(
            pn.mul(&GPoly::constant(Complex::new(dden, BigInt::zero()))),
            GPoly::zero(),
            dn.mul(&GPoly::constant(Complex::new(pden, BigInt::zero()))),
        ))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        // cross-multiplication; p, q components compare independently since
        // s^2 is already reduced away by representation
        self.p.mul(&other.d) == other.p.mul(&self.d)
            && self.q.mul(&other.d) == other.q.mul(&self.d)
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}) + ({})*s) / ({})", self.p, self.q, self.d)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$impl_fn(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$impl_fn(rhs)
            }
        }
    };
}

impl Scalar {
    fn sub_impl(&self, other: &Scalar) -> Scalar {
        self.add_impl(&other.neg_impl())
    }
    fn neg_impl(&self) -> Scalar {
        Scalar { p: self.p.neg(), q: self.q.neg(), d: self.d.clone() }
    }
    fn div_impl(&self, other: &Scalar) -> Scalar {
        self.try_div(other).expect("scalar division by zero")
    }
}

scalar_binop!(Add, add, add_impl);
scalar_binop!(Sub, sub, sub_impl);
scalar_binop!(Mul, mul, mul_impl);
scalar_binop!(Div, div, div_impl);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_impl()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_impl()
    }
}

/// A concrete evaluation point `(hbar, alpha, s)` with `s^2 = hbar^2 - 4*alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization {
    pub hbar: BigRational,
    pub alpha: BigRational,
    pub s: GRat,
}

impl Specialization {
    pub fn new(hbar: BigRational, alpha: BigRational, s: GRat) -> Result<Self> {
        let disc = &hbar * &hbar - ratio(4, 1) * &alpha;
        if disc.is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        let s2 = s.clone() * s.clone();
        if s2 != grat_from_ratio(disc) {
            return Err(Error::InvalidSpecialization(format!(
                "s^2 != hbar^2 - 4*alpha for s = {}",
                fmt_grat(&s)
            )));
        }
        Ok(Specialization { hbar, alpha, s })
    }

    /// Derive `s` by exact square root (principal branch).
    pub fn from_point(hbar: BigRational, alpha: BigRational) -> Result<Self> {
        let disc = &hbar * &hbar - ratio(4, 1) * &alpha;
        if disc.is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        let s = sqrt_exact(&disc).ok_or_else(|| {
            Error::InvalidSpecialization(format!(
                "h^2 - 4*al = {disc} has no exact Gaussian-rational square root"
            ))
        })?;
        Specialization::new(hbar, alpha, s)
    }

    /// The point forced by the dimension-`n` irreducible:
    /// `alpha = -hbar^2 (n^2-1)/4`, branch `s = n*hbar`.
    pub fn for_irrep(n: u32, hbar: BigRational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpecialization("irrep dimension must be >= 1".into()));
        }
        if hbar.is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        let n_big = BigRational::from_integer(BigInt::from(n));
        let alpha = -(&hbar * &hbar) * (&n_big * &n_big - BigRational::one()) / ratio(4, 1);
        let s = grat_from_ratio(&n_big * &hbar);
        Specialization::new(hbar, alpha, s)
    }
}

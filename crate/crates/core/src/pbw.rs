//! Presented algebras with PBW normal forms.
//!
//! Three presentations are supported: `U(gl(2)_h)` on generators `a,b,c,d`,
//! `U(sl(2)_h)` on `b,a,c` (with `d` eliminated as `-a`), and the compact
//! form `U(su(2)_h)` on `x,y,z`. Each may carry the central quotient
//! `Delta = al`, which turns it into the NC sphere/hyperboloid algebra `A_h`.
//!
//! Rewriting moves out-of-order adjacent generator pairs into order, paying
//! the commutator correction, and reduces the quotient rule's leading power
//! (`a^2` resp. `z^2`, plus `d -> -a` for the gl2h quotient). Every rewrite
//! strictly decreases the measure (degree, quotient-generator count,
//! inversions), so reduction terminates under any strategy; confluence is
//! exercised by the property suite rather than proved.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Algebra presentation names.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Presentation {
    /// `U(gl(2)_h)`, generators ordered b < a < d < c.
    Gl2h,
    /// `U(sl(2)_h)`, generators ordered b < a < c, with d = -a.
    Sl2h,
    /// Compact form `U(su(2)_h)`, generators ordered x < y < z.
    Su2h,
}

impl Presentation {
    pub fn name(&self) -> &'static str {
        match self {
            Presentation::Gl2h => "gl2h",
            Presentation::Sl2h => "sl2h",
            Presentation::Su2h => "su2h",
        }
    }

    pub fn parse(name: &str) -> Result<Presentation> {
        match name {
            "gl2h" => Ok(Presentation::Gl2h),
            "sl2h" => Ok(Presentation::Sl2h),
            "su2h" => Ok(Presentation::Su2h),
            other => Err(Error::UnknownPresentation(other.to_string())),
        }
    }
}

/// A generator-power substitution `gen^power -> rhs`.
#[derive(Clone, Debug)]
struct QuotientRule {
    gen: u8,
    power: u8,
    rhs: Vec<(Vec<u8>, Scalar)>,
}

/// Immutable presentation context: ordered generators, swap rules for each
/// out-of-order adjacent pair, and the optional quotient rules.
#[derive(Debug)]
pub struct AlgebraContext {
    presentation: Presentation,
    hbar: Scalar,
    quotient_alpha: Option<Scalar>,
    gens: Vec<&'static str>,
    /// `swap[hi][lo]` holds the correction terms of `g_hi g_lo -> g_lo g_hi + sum c*g`.
    swap: Vec<Vec<Vec<(u8, Scalar)>>>,
    quotient_rules: Vec<QuotientRule>,
}

/// The spec-facing constructor: presentation by name, optional quotient.
pub fn make_algebra(name: &str, quotient: Option<Scalar>) -> Result<Arc<AlgebraContext>> {
    Ok(AlgebraContext::new(Presentation::parse(name)?, quotient))
}

impl AlgebraContext {
    /// Context with symbolic `h`.
    pub fn new(presentation: Presentation, quotient_alpha: Option<Scalar>) -> Arc<Self> {
        Self::with_hbar(presentation, Scalar::hbar(), quotient_alpha)
    }

    /// Context with an explicit `h` scalar (a rational constant gives the
    /// specialized algebra; zero gives the commutative classical ring).
    pub fn with_hbar(
        presentation: Presentation,
        hbar: Scalar,
        quotient_alpha: Option<Scalar>,
    ) -> Arc<Self> {
        let h = &hbar;
        let (gens, swap_table): (Vec<&'static str>, Vec<((u8, u8), Vec<(u8, Scalar)>)>) =
            match presentation {
                Presentation::Gl2h => (
                    vec!["b", "a", "d", "c"],
                    vec![
                        // a*b = b*a + h*b
                        ((1, 0), vec![(0, h.clone())]),
                        // d*b = b*d - h*b
                        ((2, 0), vec![(0, -h)]),
                        // c*b = b*c - h*a + h*d
                        ((3, 0), vec![(1, -h), (2, h.clone())]),
                        // d*a = a*d
                        ((2, 1), vec![]),
                        // c*a = a*c + h*c
                        ((3, 1), vec![(3, h.clone())]),
                        // c*d = d*c - h*c
                        ((3, 2), vec![(3, -h)]),
                    ],
                ),
                Presentation::Sl2h => (
                    vec!["b", "a", "c"],
                    vec![
                        // a*b = b*a + h*b
                        ((1, 0), vec![(0, h.clone())]),
                        // c*b = b*c - 2h*a
                        ((2, 0), vec![(1, -(h * &Scalar::int(2)))]),
                        // c*a = a*c + h*c
                        ((2, 1), vec![(2, h.clone())]),
                    ],
                ),
                Presentation::Su2h => (
                    vec!["x", "y", "z"],
                    vec![
                        // y*x = x*y - h*z
                        ((1, 0), vec![(2, -h)]),
                        // z*y = y*z - h*x
                        ((2, 1), vec![(0, -h)]),
                        // z*x = x*z + h*y
                        ((2, 0), vec![(1, h.clone())]),
                    ],
                ),
            };
        let n = gens.len();
        let mut swap = vec![vec![Vec::new(); n]; n];
        for ((hi, lo), corr) in swap_table {
            swap[hi as usize][lo as usize] = corr;
        }
        let quotient_rules = match (&quotient_alpha, presentation) {
            (None, _) => Vec::new(),
            (Some(al), Presentation::Sl2h) => vec![QuotientRule {
                // a^2 = h*a - b*c - al
                gen: 1,
                power: 2,
                rhs: vec![
                    (vec![1], hbar.clone()),
                    (vec![0, 2], Scalar::int(-1)),
                    (vec![], -al),
                ],
            }],
            (Some(al), Presentation::Su2h) => vec![QuotientRule {
                // z^2 = al - x^2 - y^2
                gen: 2,
                power: 2,
                rhs: vec![
                    (vec![], al.clone()),
                    (vec![0, 0], Scalar::int(-1)),
                    (vec![1, 1], Scalar::int(-1)),
                ],
            }],
            (Some(al), Presentation::Gl2h) => vec![
                // tr = 0: d = -a
                QuotientRule { gen: 2, power: 1, rhs: vec![(vec![1], Scalar::int(-1))] },
                // Delta = al with d = -a: a^2 = h*a - b*c - al
                QuotientRule {
                    gen: 1,
                    power: 2,
                    rhs: vec![
                        (vec![1], hbar.clone()),
                        (vec![0, 2], Scalar::int(-1)),
                        (vec![], -al),
                    ],
                },
            ],
        };
        Arc::new(AlgebraContext { presentation, hbar, quotient_alpha, gens, swap, quotient_rules })
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn hbar(&self) -> &Scalar {
        &self.hbar
    }

    pub fn quotient_alpha(&self) -> Option<&Scalar> {
        self.quotient_alpha.as_ref()
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient_alpha.is_some()
    }

    pub fn gens(&self) -> &[&'static str] {
        &self.gens
    }

    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<u8> {
        self.gens.iter().position(|g| *g == name).map(|i| i as u8)
    }

    pub fn same_context(&self, other: &AlgebraContext) -> bool {
        self.presentation == other.presentation
            && self.hbar == other.hbar
            && self.quotient_alpha == other.quotient_alpha
    }

    pub fn check_same(&self, other: &AlgebraContext) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "{} vs {}",
                self.presentation.name(),
                other.presentation.name()
            )))
        }
    }

    /// The square root `s` of `h^2 - 4*al` for this context's parameters:
    /// the adjoined symbol when both are symbolic, an exact Gaussian
    /// rational when both are constants.
    pub fn discriminant_root(&self) -> Result<Scalar> {
        let alpha = self.quotient_alpha.as_ref().ok_or_else(|| {
            Error::ContextMismatch("discriminant root needs the quotient algebra".into())
        })?;
        let disc = &(&self.hbar * &self.hbar) - &(&Scalar::int(4) * alpha);
        if disc.is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        let symbolic =
            &(&Scalar::hbar() * &Scalar::hbar()) - &(&Scalar::int(4) * &Scalar::alpha());
        if disc == symbolic {
            return Ok(Scalar::s());
        }
        let sqrt_const = |c: crate::scalars::GRat| -> Result<Scalar> {
            if !c.im.is_zero() {
                return Err(Error::InvalidSpecialization(
                    "discriminant must be a real rational".into(),
                ));
            }
            let root = crate::scalars::sqrt_exact(&c.re).ok_or_else(|| {
                Error::InvalidSpecialization(format!(
                    "h^2 - 4*al = {} has no exact Gaussian-rational square root",
                    c.re
                ))
            })?;
            Ok(Scalar::from_grat(&root))
        };
        if let Some(c) = disc.as_constant() {
            return sqrt_const(c);
        }
        // c * h^2 shapes (e.g. al = 0 at symbolic h): root is sqrt(c) * h
        let h2 = &Scalar::hbar() * &Scalar::hbar();
        if let Some(c) = (&disc / &h2).as_constant() {
            return Ok(&sqrt_const(c)? * &Scalar::hbar());
        }
        Err(Error::InvalidSpecialization(
            "h^2 - 4*al has no square root in the coefficient field".into(),
        ))
    }

    /// Exponent bound per generator in PBW normal form (1 for quotient
    /// leading generators of power-2 rules, 0 for eliminated generators).
    fn exp_cap(&self, gen: u8) -> u32 {
        for rule in &self.quotient_rules {
            if rule.gen == gen {
                return (rule.power - 1) as u32;
            }
        }
        u32::MAX
    }

    /// All PBW basis exponent vectors of total degree <= `deg`, in graded
    /// lexicographic order.
    pub fn pbw_monomials_up_to(&self, deg: u32) -> Vec<Vec<u8>> {
        let n = self.n_gens();
        let mut out = Vec::new();
        let mut current = vec![0u8; n];
        fn rec(
            ctx: &AlgebraContext,
            pos: usize,
            remaining: u32,
            current: &mut Vec<u8>,
            out: &mut Vec<Vec<u8>>,
        ) {
            if pos == current.len() {
                out.push(current.clone());
                return;
            }
            let cap = ctx.exp_cap(pos as u8).min(remaining);
            for e in 0..=cap {
                current[pos] = e as u8;
                rec(ctx, pos + 1, remaining - e, current, out);
            }
            current[pos] = 0;
        }
        for d in 0..=deg {
            let mut layer = Vec::new();
            rec(self, 0, d, &mut current, &mut layer);
            layer.retain(|m| m.iter().map(|&e| e as u32).sum::<u32>() == d);
            layer.sort();
            out.extend(layer);
        }
        out
    }
}

/// Strategy for picking the next redex during reduction; used by the
/// confluence property suite. `Leftmost` is the deterministic default.
pub enum ReductionStrategy<'a> {
    Leftmost,
    /// Callback receives the number of available redexes, returns an index.
    Choose(&'a mut dyn FnMut(usize) -> usize),
}

enum Redex {
    Swap(usize),
    Quotient { pos: usize, rule: usize },
}

fn find_redexes(ctx: &AlgebraContext, word: &[u8], out: &mut Vec<Redex>) {
    out.clear();
    for i in 0..word.len().saturating_sub(1) {
        if word[i] > word[i + 1] {
            out.push(Redex::Swap(i));
        }
    }
    for (ri, rule) in ctx.quotient_rules.iter().enumerate() {
        if rule.power == 1 {
            for (i, &g) in word.iter().enumerate() {
                if g == rule.gen {
                    out.push(Redex::Quotient { pos: i, rule: ri });
                }
            }
        } else {
            for i in 0..word.len().saturating_sub(1) {
                if word[i] == rule.gen && word[i + 1] == rule.gen {
                    out.push(Redex::Quotient { pos: i, rule: ri });
                }
            }
        }
    }
}

/// Reduce `coeff * word` to normal form, accumulating into `out`.
fn reduce_word_into(
    ctx: &AlgebraContext,
    word: Vec<u8>,
    coeff: Scalar,
    strategy: &mut ReductionStrategy,
    out: &mut BTreeMap<Vec<u8>, Scalar>,
) {
    let mut stack = vec![(word, coeff)];
    let mut redexes = Vec::new();
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        find_redexes(ctx, &w, &mut redexes);
        if redexes.is_empty() {
            let mut exps = vec![0u8; ctx.n_gens()];
            for &g in &w {
                exps[g as usize] += 1;
            }
            match out.entry(exps) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
            continue;
        }
        let pick = match strategy {
            ReductionStrategy::Leftmost => 0,
            ReductionStrategy::Choose(f) => f(redexes.len()) % redexes.len(),
        };
        match redexes[pick] {
            Redex::Swap(i) => {
                let hi = w[i] as usize;
                let lo = w[i + 1] as usize;
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                for (g, corr) in &ctx.swap[hi][lo] {
                    let mut nw = Vec::with_capacity(w.len() - 1);
                    nw.extend_from_slice(&w[..i]);
                    nw.push(*g);
                    nw.extend_from_slice(&w[i + 2..]);
                    stack.push((nw, &c * corr));
                }
                stack.push((swapped, c));
            }
            Redex::Quotient { pos, rule } => {
                let rule = &ctx.quotient_rules[rule];
                let span = rule.power as usize;
                for (rhs_word, rc) in &rule.rhs {
                    let mut nw = Vec::with_capacity(w.len() - span + rhs_word.len());
                    nw.extend_from_slice(&w[..pos]);
                    nw.extend_from_slice(rhs_word);
                    nw.extend_from_slice(&w[pos + span..]);
                    stack.push((nw, &c * rc));
                }
            }
        }
    }
}

/// An element of a presented algebra in PBW normal form: a map from exponent
/// vectors over the ordered generators to nonzero scalars.
#[derive(Clone)]
pub struct NCElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<Vec<u8>, Scalar>,
}

impl NCElement {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        NCElement { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        NCElement::constant(ctx, Scalar::one())
    }

    pub fn constant(ctx: &Arc<AlgebraContext>, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u8; ctx.n_gens()], c);
        }
        NCElement { ctx: Arc::clone(ctx), terms }
    }

    /// Single generator by index.
    pub fn gen(ctx: &Arc<AlgebraContext>, idx: u8) -> Self {
        NCElement::from_words(ctx, [(vec![idx], Scalar::one())])
    }

    /// Single generator by name; errors on unknown names.
    pub fn gen_named(ctx: &Arc<AlgebraContext>, name: &str) -> Result<Self> {
        let idx = ctx
            .gen_index(name)
            .ok_or_else(|| Error::IndexOutOfRange(format!("generator `{name}`")))?;
        Ok(NCElement::gen(ctx, idx))
    }

    /// Build from arbitrary words, reducing to normal form. This is the
    /// normal-form entry point: words may be unordered and unreduced.
    pub fn from_words(
        ctx: &Arc<AlgebraContext>,
        words: impl IntoIterator<Item = (Vec<u8>, Scalar)>,
    ) -> Self {
        Self::from_words_with(ctx, words, &mut ReductionStrategy::Leftmost)
    }

    pub fn from_words_with(
        ctx: &Arc<AlgebraContext>,
        words: impl IntoIterator<Item = (Vec<u8>, Scalar)>,
        strategy: &mut ReductionStrategy,
    ) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in words {
            reduce_word_into(ctx, w, c, strategy, &mut terms);
        }
        NCElement { ctx: Arc::clone(ctx), terms }
    }

    /// Re-run reduction on the stored terms. Idempotent by construction;
    /// exposed so the property suite can check exactly that.
    pub fn normal_form(&self) -> Self {
        NCElement::from_words(
            &self.ctx,
            self.terms.iter().map(|(e, c)| (exps_to_word(e), c.clone())),
        )
    }

    pub fn ctx(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Scalar)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u8]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Scalar value if the element is a multiple of 1; None otherwise.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            let (exps, c) = self.terms.iter().next().unwrap();
            if exps.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &NCElement) -> NCElement {
        debug_assert!(self.ctx.same_context(&other.ctx));
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.entry(e.clone()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get() + c;
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = sum;
                    }
                }
            }
        }
        NCElement { ctx: Arc::clone(&self.ctx), terms }
    }

    pub fn sub(&self, other: &NCElement) -> NCElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCElement {
        NCElement {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> NCElement {
        if s.is_zero() {
            return NCElement::zero(&self.ctx);
        }
        NCElement {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Product, reduced to normal form. Errors on mismatched contexts.
    pub fn multiply(&self, other: &NCElement) -> Result<NCElement> {
        self.ctx.check_same(&other.ctx)?;
        let mut terms = BTreeMap::new();
        let mut strategy = ReductionStrategy::Leftmost;
        for (e1, c1) in &self.terms {
            let w1 = exps_to_word(e1);
            for (e2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(exps_to_word(e2));
                reduce_word_into(&self.ctx, w, c1 * c2, &mut strategy, &mut terms);
            }
        }
        Ok(NCElement { ctx: Arc::clone(&self.ctx), terms })
    }

    pub fn pow(&self, n: u32) -> Result<NCElement> {
        let mut out = NCElement::one(&self.ctx);
        for _ in 0..n {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &NCElement) -> Result<NCElement> {
        Ok(self.multiply(other)?.sub(&other.multiply(self)?))
    }
}

fn exps_to_word(exps: &[u8]) -> Vec<u8> {
    let mut w = Vec::with_capacity(exps.iter().map(|&e| e as usize).sum());
    for (g, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            w.push(g as u8);
        }
    }
    w
}

impl PartialEq for NCElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_context(&other.ctx)
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((e1, c1), (e2, c2))| e1 == e2 && c1 == c2)
    }
}

impl Eq for NCElement {}

impl fmt::Debug for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCElement({self})")
    }
}

impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (exps, c) in &self.terms {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(g, &e)| {
                    if e == 1 {
                        self.ctx.gens()[g].to_string()
                    } else {
                        format!("{}^{}", self.ctx.gens()[g], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                parts.push(format!("{c}"));
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{}*{}", c, mono.join("*")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized form of an element: context by name, terms by exponent vector.
#[derive(Serialize, Deserialize)]
pub struct NCElementData {
    pub ctx: String,
    pub terms: Vec<NCTermData>,
}

#[derive(Serialize, Deserialize)]
pub struct NCTermData {
    pub exps: Vec<u8>,
    pub coeff: Scalar,
}

impl NCElement {
    pub fn to_data(&self) -> NCElementData {
        NCElementData {
            ctx: self.ctx.presentation().name().to_string(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| NCTermData { exps: e.clone(), coeff: c.clone() })
                .collect(),
        }
    }
}

impl NCElementData {
    /// Rebind serialized terms to a live context of the same presentation.
    pub fn bind(&self, ctx: &Arc<AlgebraContext>) -> Result<NCElement> {
        if self.ctx != ctx.presentation().name() {
            return Err(Error::ContextMismatch(format!(
                "serialized ctx `{}` vs `{}`",
                self.ctx,
                ctx.presentation().name()
            )));
        }
        Ok(NCElement::from_words(
            ctx,
            self.terms.iter().map(|t| (exps_to_word(&t.exps), t.coeff.clone())),
        ))
    }
}

impl Serialize for NCElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_data().serialize(ser)
    }
}

/// Casimir `Delta` and trace element of an unquotiented context, plus whether
/// both commute with every generator.
pub fn casimir_and_center(
    ctx: &Arc<AlgebraContext>,
) -> Result<(NCElement, NCElement, bool)> {
    if ctx.is_quotient() {
        return Err(Error::ContextMismatch(
            "casimir_and_center expects a context without quotient".into(),
        ));
    }
    let half = Scalar::ratio(1, 2);
    let (delta, trace) = match ctx.presentation() {
        Presentation::Gl2h => {
            let (b, a, d, c) = (
                NCElement::gen(ctx, 0),
                NCElement::gen(ctx, 1),
                NCElement::gen(ctx, 2),
                NCElement::gen(ctx, 3),
            );
            let delta = a
                .multiply(&d)?
                .sub(&b.multiply(&c)?.add(&c.multiply(&b)?).scale(&half));
            (delta, a.add(&d))
        }
        Presentation::Sl2h => {
            let (b, a, c) =
                (NCElement::gen(ctx, 0), NCElement::gen(ctx, 1), NCElement::gen(ctx, 2));
            // d = -a: Delta = -a^2 - (bc+cb)/2
            let delta = a
                .multiply(&a)?
                .neg()
                .sub(&b.multiply(&c)?.add(&c.multiply(&b)?).scale(&half));
            (delta, NCElement::zero(ctx))
        }
        Presentation::Su2h => {
            let (x, y, z) =
                (NCElement::gen(ctx, 0), NCElement::gen(ctx, 1), NCElement::gen(ctx, 2));
            let delta = x.multiply(&x)?.add(&y.multiply(&y)?).add(&z.multiply(&z)?);
            (delta, NCElement::zero(ctx))
        }
    };
    let mut central = true;
    for g in 0..ctx.n_gens() as u8 {
        let gen = NCElement::gen(ctx, g);
        if !delta.commutator(&gen)?.is_zero() || !trace.commutator(&gen)?.is_zero() {
            central = false;
        }
    }
    Ok((delta, trace, central))
}

/// Generator images under the basis change between the split and compact
/// forms: `x = -i a, y = i(b+c)/2, z = (b-c)/2` and its inverse.
fn basis_images(
    from: Presentation,
    to: Presentation,
    target: &Arc<AlgebraContext>,
) -> Result<Vec<NCElement>> {
    let i = Scalar::i();
    let half = Scalar::ratio(1, 2);
    match (from, to) {
        (Presentation::Sl2h, Presentation::Su2h) => {
            let x = NCElement::gen(target, 0);
            let y = NCElement::gen(target, 1);
            let z = NCElement::gen(target, 2);
            // b -> z - i y, a -> i x, c -> -z - i y
            Ok(vec![
                z.sub(&y.scale(&i)),
                x.scale(&i),
                z.neg().sub(&y.scale(&i)),
            ])
        }
        (Presentation::Su2h, Presentation::Sl2h) => {
            let b = NCElement::gen(target, 0);
            let a = NCElement::gen(target, 1);
            let c = NCElement::gen(target, 2);
            // x -> -i a, y -> i(b+c)/2, z -> (b-c)/2
            Ok(vec![
                a.scale(&-&i),
                b.add(&c).scale(&(&i * &half)),
                b.sub(&c).scale(&half),
            ])
        }
        _ => Err(Error::ContextMismatch(format!(
            "change_basis supports sl2h <-> su2h, got {} -> {}",
            from.name(),
            to.name()
        ))),
    }
}

/// Algebra homomorphism between the split (`sl2h`) and compact (`su2h`)
/// presentations; quotient parameters and `h` must agree.
pub fn change_basis(e: &NCElement, target: &Arc<AlgebraContext>) -> Result<NCElement> {
    let src = e.ctx();
    if src.hbar() != target.hbar() || src.quotient_alpha() != target.quotient_alpha() {
        return Err(Error::ContextMismatch(
            "change_basis requires equal h and quotient parameters".into(),
        ));
    }
    let images = basis_images(src.presentation(), target.presentation(), target)?;
    let mut out = NCElement::zero(target);
    for (exps, c) in e.terms() {
        let mut term = NCElement::constant(target, c.clone());
        for (g, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = term.multiply(&images[g])?;
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// The normalized adjoint action `ad_g(f) = h^{-1}(g f - f g)`.
///
/// The three compact-form actions satisfy `[ad_x, ad_y] = ad_z` cyclically;
/// the classical limit is the Kirillov rotation field.
pub fn ad_action(g: &NCElement, f: &NCElement) -> Result<NCElement> {
    let h_inv = g.ctx().hbar().inv().map_err(|_| {
        Error::ContextMismatch("ad_action needs invertible h (h = 0 context)".into())
    })?;
    Ok(g.commutator(f)?.scale(&h_inv))
}

/// `ad` of a generator by index.
pub fn ad_gen(ctx: &Arc<AlgebraContext>, g: u8, f: &NCElement) -> Result<NCElement> {
    ad_action(&NCElement::gen(ctx, g), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ratio;

    fn sl2h() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Sl2h, None)
    }

    fn sl2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Sl2h, Some(Scalar::alpha()))
    }

    fn su2h_q() -> Arc<AlgebraContext> {
        AlgebraContext::new(Presentation::Su2h, Some(Scalar::alpha()))
    }

    fn gens3(ctx: &Arc<AlgebraContext>) -> (NCElement, NCElement, NCElement) {
        (NCElement::gen(ctx, 0), NCElement::gen(ctx, 1), NCElement::gen(ctx, 2))
    }

    #[test]
    fn sl2h_swap_rules() {
        let ctx = sl2h();
        let (b, a, c) = gens3(&ctx);
        let h = Scalar::hbar();
        // c*b = b*c - 2h*a
        let cb = c.multiply(&b).unwrap();
        let expected = b.multiply(&c).unwrap().sub(&a.scale(&(&h * &Scalar::int(2))));
        assert_eq!(cb, expected);
        // a*b = b*a + h*b
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab, b.multiply(&a).unwrap().add(&b.scale(&h)));
        // already ordered monomial is untouched
        let bac = NCElement::from_words(&ctx, [(vec![0, 1, 2], Scalar::one())]);
        assert_eq!(bac.coeff(&[1, 1, 1]), Scalar::one());
        assert_eq!(bac.n_terms(), 1);
    }

    #[test]
    fn quotient_rules_reduce_leading_powers() {
        let ctx = sl2h_q();
        let (b, a, c) = gens3(&ctx);
        // a^2 = h*a - b*c - al
        let a2 = a.multiply(&a).unwrap();
        let expected = a
            .scale(&Scalar::hbar())
            .sub(&b.multiply(&c).unwrap())
            .sub(&NCElement::constant(&ctx, Scalar::alpha()));
        assert_eq!(a2, expected);

        let su = su2h_q();
        let (x, y, z) = gens3(&su);
        let z2 = z.multiply(&z).unwrap();
        let expected = NCElement::constant(&su, Scalar::alpha())
            .sub(&x.multiply(&x).unwrap())
            .sub(&y.multiply(&y).unwrap());
        assert_eq!(z2, expected);
    }

    #[test]
    fn casimir_reduces_to_alpha_in_quotient() {
        // Delta * f = al * f for an arbitrary element in the quotient
        let ctx = sl2h_q();
        let (b, a, c) = gens3(&ctx);
        let half = Scalar::ratio(1, 2);
        let delta = a
            .multiply(&a)
            .unwrap()
            .neg()
            .sub(&b.multiply(&c).unwrap().add(&c.multiply(&b).unwrap()).scale(&half));
        let f = b.multiply(&c).unwrap().add(&a.scale(&Scalar::gauss(2, 1)));
        let lhs = delta.multiply(&f).unwrap();
        assert_eq!(lhs, f.scale(&Scalar::alpha()));
    }

    #[test]
    fn gl2h_quotient_kills_trace() {
        let ctx = AlgebraContext::new(Presentation::Gl2h, Some(Scalar::alpha()));
        let a = NCElement::gen(&ctx, 1);
        let d = NCElement::gen(&ctx, 2);
        let b = NCElement::gen(&ctx, 0);
        let tr = a.add(&d);
        assert!(tr.is_zero());
        let f = b.multiply(&a).unwrap();
        assert!(tr.multiply(&f).unwrap().is_zero());
    }

    #[test]
    fn casimir_centrality() {
        for pres in [Presentation::Gl2h, Presentation::Sl2h, Presentation::Su2h] {
            let ctx = AlgebraContext::new(pres, None);
            let (delta, trace, central) = casimir_and_center(&ctx).unwrap();
            assert!(central, "{} casimir must be central", pres.name());
            assert!(!delta.is_zero());
            if pres == Presentation::Gl2h {
                assert!(!trace.is_zero());
            }
        }
        // a itself is not central: [a, b] = h*b != 0
        let ctx = AlgebraContext::new(Presentation::Gl2h, None);
        let a = NCElement::gen(&ctx, 1);
        let b = NCElement::gen(&ctx, 0);
        assert_eq!(a.commutator(&b).unwrap(), b.scale(&Scalar::hbar()));
    }

    #[test]
    fn change_basis_generator_images() {
        let sl = sl2h_q();
        let su = su2h_q();
        // x -> -i a
        let x = NCElement::gen(&su, 0);
        let img = change_basis(&x, &sl).unwrap();
        assert_eq!(img, NCElement::gen(&sl, 1).scale(&-&Scalar::i()));
        // Casimir x^2+y^2+z^2 maps to alpha (both sides reduce in quotients)
        let (xx, yy, zz) = gens3(&su);
        let cas = xx
            .multiply(&xx)
            .unwrap()
            .add(&yy.multiply(&yy).unwrap())
            .add(&zz.multiply(&zz).unwrap());
        let mapped = change_basis(&cas, &sl).unwrap();
        assert_eq!(mapped, NCElement::constant(&sl, Scalar::alpha()));
    }

    #[test]
    fn change_basis_round_trip_without_quotient() {
        let sl = AlgebraContext::new(Presentation::Sl2h, None);
        let su = AlgebraContext::new(Presentation::Su2h, None);
        let (b, a, c) = gens3(&sl);
        let f = b
            .multiply(&c)
            .unwrap()
            .add(&a.scale(&Scalar::gauss(0, 3)))
            .add(&b.multiply(&b).unwrap().scale(&Scalar::ratio(1, 2)));
        let round = change_basis(&change_basis(&f, &su).unwrap(), &sl).unwrap();
        assert_eq!(round, f);
        // Casimir maps to Delta = -a^2 - (bc+cb)/2
        let (x, y, z) = gens3(&su);
        let cas = x
            .multiply(&x)
            .unwrap()
            .add(&y.multiply(&y).unwrap())
            .add(&z.multiply(&z).unwrap());
        let (delta, _, _) = casimir_and_center(&sl).unwrap();
        assert_eq!(change_basis(&cas, &sl).unwrap(), delta);
    }

    #[test]
    fn ad_action_examples() {
        let ctx = sl2h_q();
        let (b, a, c) = gens3(&ctx);
        // ad_a(b) = b
        assert_eq!(ad_action(&a, &b).unwrap(), b);
        // ad_b(b^k) = 0
        let b3 = b.pow(3).unwrap();
        assert!(ad_action(&b, &b3).unwrap().is_zero());
        // ad_c(b) = h^{-1}(cb - bc) = -2a under the fixed sign convention
        assert_eq!(ad_action(&c, &b).unwrap(), a.scale(&Scalar::int(-2)));
    }

    #[test]
    fn ad_actions_satisfy_su2_relations() {
        let su = su2h_q();
        let (x, y, z) = gens3(&su);
        let f = x
            .multiply(&y)
            .unwrap()
            .add(&z.scale(&Scalar::gauss(1, 1)))
            .add(&y.pow(2).unwrap());
        // [ad_x, ad_y] f = ad_z f
        let lhs = ad_action(&x, &ad_action(&y, &f).unwrap())
            .unwrap()
            .sub(&ad_action(&y, &ad_action(&x, &f).unwrap()).unwrap());
        assert_eq!(lhs, ad_action(&z, &f).unwrap());
    }

    #[test]
    fn pbw_dimension_count() {
        // degree <= N basis of A_h(sl2h) has (N+1)^2 monomials b^i a^eps c^k
        let ctx = sl2h_q();
        for n in 0..=6u32 {
            let count = ctx.pbw_monomials_up_to(n).len() as u32;
            let expected: u32 = (0..=n).map(|m| 2 * m + 1).sum();
            assert_eq!(count, expected, "degree cap {n}");
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let ctx = sl2h_q();
        let raw = NCElement::from_words(
            &ctx,
            [
                (vec![2, 0, 0], Scalar::one()),
                (vec![1, 1, 0], Scalar::ratio(3, 2)),
                (vec![2, 2, 1], Scalar::i()),
            ],
        );
        assert_eq!(raw.normal_form(), raw);
    }

    #[test]
    fn numeric_hbar_context_is_commutative_at_zero() {
        let ctx =
            AlgebraContext::with_hbar(Presentation::Su2h, Scalar::zero(), Some(Scalar::alpha()));
        let (x, y, _) = gens3(&ctx);
        assert_eq!(x.multiply(&y).unwrap(), y.multiply(&x).unwrap());
        let at_half =
            AlgebraContext::with_hbar(Presentation::Su2h, Scalar::ratio(1, 2), Some(Scalar::alpha()));
        let (x, y, z) = gens3(&at_half);
        let comm = x.commutator(&y).unwrap();
        assert_eq!(comm, z.scale(&Scalar::ratio(1, 2)));
        let _ = ratio(1, 2);
    }

    #[test]
    fn unknown_presentation_rejected() {
        assert!(matches!(
            make_algebra("so3", None),
            Err(Error::UnknownPresentation(_))
        ));
    }

    #[test]
    fn element_json_round_trip() {
        let ctx = sl2h_q();
        let (b, a, c) = gens3(&ctx);
        let f = b.multiply(&c).unwrap().add(&a.scale(&Scalar::lambda1()));
        let text = serde_json::to_string(&f).unwrap();
        let data: NCElementData = serde_json::from_str(&text).unwrap();
        assert_eq!(data.bind(&ctx).unwrap(), f);
    }
}

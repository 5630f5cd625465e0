//! The star-order family on dual matrices.
//!
//! | relation | defining identities | prerequisite |
//! |----------|---------------------|--------------|
//! | star (real) | `A†A = A†B`, `AA† = BA†` | none |
//! | T-star | `ÂᵀÂ = ÂᵀB̂`, `ÂÂᵀ = B̂Âᵀ` | none |
//! | D-star | `Â†Â = Â†B̂`, `ÂÂ† = B̂Â†` | both DMPGIs exist |
//! | P-order | `ÂᵖÂ = ÂᵖB̂`, `ÂÂᵖ = B̂Âᵖ` | none |
//! | P-star | as P-order | both DMPGIs exist |
//!
//! Each predicate returns an [`OrderReport`]. A dual identity contributes
//! two conditions, one per part.
//!
//! The canonical-form routes work in the frame of
//! [`linalg::star_decompose`], where `A = U·diag(T₁,0,0)·Vᵀ`,
//! `B = U·diag(T₁,T₂,0)·Vᵀ` and the dual parts are split into blocks
//! `1..=9` (see [`BlockGrid`]).

use serde::Serialize;

use crate::dual::{DualMatrix, Matrix, Tolerances};
use crate::error::{Error, Result};
use crate::ginv;
use crate::linalg::{self, scale_cols, scale_rows, BlockGrid, StarDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    StarReal,
    DStar,
    TStar,
    POrder,
    PStar,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::StarReal,
        Relation::DStar,
        Relation::TStar,
        Relation::POrder,
        Relation::PStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::StarReal => "star",
            Relation::DStar => "d-star",
            Relation::TStar => "t-star",
            Relation::POrder => "p-order",
            Relation::PStar => "p-star",
        }
    }

    /// The definitional predicate for this relation.
    pub fn check(self, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
        match self {
            Relation::StarReal => star_real_leq(a, b, tol),
            Relation::DStar => d_star_leq(a, b, tol),
            Relation::TStar => t_star_leq(a, b, tol),
            Relation::POrder => p_order_leq(a, b, tol),
            Relation::PStar => p_star_leq(a, b, tol),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Definition,
    Characterization,
    CanonicalForm,
}

/// One named equality with its residual norm and the bound it must meet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
}

impl Condition {
    pub fn new(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            bound,
        }
    }

    pub fn holds(&self) -> bool {
        self.residual <= self.bound
    }
}

fn matrix_identity(name: &str, lhs: &Matrix, rhs: &Matrix, tol: &Tolerances) -> Condition {
    let (r, b) = linalg::eq_residual(lhs, rhs, tol);
    Condition::new(name, r, b)
}

fn dual_identity(name: &str, lhs: &DualMatrix, rhs: &DualMatrix, tol: &Tolerances) -> [Condition; 2] {
    [
        matrix_identity(&format!("{name} [real]"), lhs.real(), rhs.real(), tol),
        matrix_identity(&format!("{name} [dual]"), lhs.dual(), rhs.dual(), tol),
    ]
}

fn max_residual(conditions: &[Condition]) -> f64 {
    conditions.iter().map(|c| c.residual).fold(0.0, f64::max)
}

/// Verdict of one order predicate along one route.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderReport {
    pub relation: Relation,
    pub holds: bool,
    pub route: Route,
    pub condition_residuals: Vec<Condition>,
    /// For example `"DMPGI of B absent"`.
    pub prerequisite_failures: Vec<String>,
    /// Disagreements with a cross-checking route.
    pub defects: Vec<String>,
}

impl OrderReport {
    fn assemble(relation: Relation, route: Route, conditions: Vec<Condition>, prerequisite_failures: Vec<String>) -> Self {
        let holds = prerequisite_failures.is_empty() && conditions.iter().all(Condition::holds);
        Self {
            relation,
            holds,
            route,
            condition_residuals: conditions,
            prerequisite_failures,
            defects: Vec::new(),
        }
    }

    pub fn max_residual(&self) -> f64 {
        max_residual(&self.condition_residuals)
    }

    pub fn failed_conditions(&self) -> impl Iterator<Item = &Condition> {
        self.condition_residuals.iter().filter(|c| !c.holds())
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.condition_residuals.iter().find(|c| c.name == name)
    }
}

/// A conjunction of named identities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSet {
    pub holds: bool,
    pub conditions: Vec<Condition>,
}

impl ConditionSet {
    fn new(conditions: Vec<Condition>) -> Self {
        Self {
            holds: conditions.iter().all(Condition::holds),
            conditions,
        }
    }

    pub fn max_residual(&self) -> f64 {
        max_residual(&self.conditions)
    }
}

fn same_shape(a: &DualMatrix, b: &DualMatrix, op: &'static str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// DMPGIs of both operands; absent ones are listed as prerequisite failures.
fn dmpgi_pair(
    a: &DualMatrix,
    b: &DualMatrix,
    tol: &Tolerances,
) -> Result<(Option<DualMatrix>, Option<DualMatrix>, Vec<String>)> {
    let mut failures = Vec::new();
    let mut one = |x: &DualMatrix, label: &str| -> Result<Option<DualMatrix>> {
        let g = ginv::dmpgi(x, tol)?;
        if !g.exists {
            failures.push(format!(
                "DMPGI of {label} absent (projector residual {:e})",
                g.projector_residual
            ));
        }
        Ok(g.value)
    };
    let ai = one(a, "A")?;
    let bi = one(b, "B")?;
    Ok((ai, bi, failures))
}

/// `XÂ = XB̂` and `ÂX = B̂X` for a generalized inverse `X` of `Â`.
fn inverse_identities(x: &DualMatrix, sym: &str, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<Vec<Condition>> {
    let mut c = Vec::with_capacity(4);
    c.extend(dual_identity(&format!("{sym}A = {sym}B"), &x.mul(a)?, &x.mul(b)?, tol));
    c.extend(dual_identity(&format!("A{sym} = B{sym}"), &a.mul(x)?, &b.mul(x)?, tol));
    Ok(c)
}

fn real_star_conditions(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<Vec<Condition>> {
    let [(r1, b1), (r2, b2)] = linalg::star_residuals_real(a, b, tol)?;
    Ok(vec![
        Condition::new("AᵀA = AᵀB", r1, b1),
        Condition::new("AAᵀ = BAᵀ", r2, b2),
    ])
}

/// Real star order on the real parts, `A†A = A†B` and `AA† = BA†`. The
/// transpose form is kept as a cross-check.
pub fn star_real_leq(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "star_real_leq")?;
    let (ra, rb) = (a.real(), b.real());
    let ap = linalg::pinv(ra, tol)?;
    let conditions = vec![
        matrix_identity("A†A = A†B", &(&ap * ra), &(&ap * rb), tol),
        matrix_identity("AA† = BA†", &(ra * &ap), &(rb * &ap), tol),
    ];
    let mut report = OrderReport::assemble(Relation::StarReal, Route::Definition, conditions, Vec::new());
    let alt = ConditionSet::new(real_star_conditions(ra, rb, tol)?);
    if alt.holds != report.holds {
        report.defects.push(format!(
            "transpose form gives {} (max residual {:e})",
            alt.holds,
            alt.max_residual()
        ));
    }
    Ok(report)
}

/// T-star order `ÂᵀÂ = ÂᵀB̂`, `ÂÂᵀ = B̂Âᵀ`.
pub fn t_star_leq(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "t_star_leq")?;
    let at = a.transpose();
    let mut c = Vec::with_capacity(4);
    c.extend(dual_identity("AᵀA = AᵀB", &at.mul(a)?, &at.mul(b)?, tol));
    c.extend(dual_identity("AAᵀ = BAᵀ", &a.mul(&at)?, &b.mul(&at)?, tol));
    Ok(OrderReport::assemble(Relation::TStar, Route::Definition, c, Vec::new()))
}

/// D-star order by definition, with `Â†` the DMPGI.
pub fn d_star_leq(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "d_star_leq")?;
    let (ai, _, pre) = dmpgi_pair(a, b, tol)?;
    let conditions = match &ai {
        Some(x) => inverse_identities(x, "A†", a, b, tol)?,
        None => Vec::new(),
    };
    Ok(OrderReport::assemble(Relation::DStar, Route::Definition, conditions, pre))
}

/// D-star order through the real star order and the two dual-part identities
/// `A†A₀ + RA = A†B₀ + RB`, `AR + A₀A† = BR + B₀A†`.
pub fn d_star_leq_char(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "d_star_leq_char")?;
    let (_, _, pre) = dmpgi_pair(a, b, tol)?;
    let mut c = Vec::new();
    if pre.is_empty() {
        let r = ginv::dmpgi_correction(a, tol)?;
        c = dual_part_identities(a, b, &r, tol)?;
    }
    Ok(OrderReport::assemble(Relation::DStar, Route::Characterization, c, pre))
}

fn dual_part_identities(a: &DualMatrix, b: &DualMatrix, r: &Matrix, tol: &Tolerances) -> Result<Vec<Condition>> {
    let (ra, a0, rb, b0) = (a.real(), a.dual(), b.real(), b.dual());
    let ap = linalg::pinv(ra, tol)?;
    let mut c = real_star_conditions(ra, rb, tol)?;
    c.push(matrix_identity(
        "A†A₀ + RA = A†B₀ + RB",
        &(&ap * a0 + r * ra),
        &(&ap * b0 + r * rb),
        tol,
    ));
    c.push(matrix_identity(
        "AR + A₀A† = BR + B₀A†",
        &(ra * r + a0 * &ap),
        &(rb * r + b0 * &ap),
        tol,
    ));
    Ok(c)
}

/// P-order by definition, with `Âᵖ` the MPDGI.
pub fn p_order_leq(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "p_order_leq")?;
    let x = ginv::mpdgi_value(a, tol)?;
    let c = inverse_identities(&x, "Aᵖ", a, b, tol)?;
    Ok(OrderReport::assemble(Relation::POrder, Route::Definition, c, Vec::new()))
}

/// P-order through the real star order and the dual-part identities with
/// `R = −A†A₀A†`.
pub fn p_order_leq_char(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "p_order_leq_char")?;
    let ap = linalg::pinv(a.real(), tol)?;
    let rp = -(&ap * a.dual() * &ap);
    let c = dual_part_identities(a, b, &rp, tol)?;
    Ok(OrderReport::assemble(Relation::POrder, Route::Characterization, c, Vec::new()))
}

/// P-star order: P-order with both DMPGIs present. The four transpose
/// identities are evaluated alongside and a mismatch is recorded as a defect.
pub fn p_star_leq(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "p_star_leq")?;
    let (_, _, pre) = dmpgi_pair(a, b, tol)?;
    let x = ginv::mpdgi_value(a, tol)?;
    let c = inverse_identities(&x, "Aᵖ", a, b, tol)?;
    let checked = pre.is_empty();
    let mut report = OrderReport::assemble(Relation::PStar, Route::Definition, c, pre);
    if checked {
        let alt = p_star_transpose_conditions(a, b, tol)?;
        if alt.holds != report.holds {
            report.defects.push(format!(
                "transpose identities give {} (max residual {:e})",
                alt.holds,
                alt.max_residual()
            ));
        }
    }
    Ok(report)
}

/// P-star order through `AᵀA = AᵀB`, `AAᵀ = BAᵀ`, `AᵀA₀ = AᵀB₀`,
/// `A₀Aᵀ = B₀Aᵀ` with both DMPGIs present.
pub fn p_star_leq_char(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    same_shape(a, b, "p_star_leq_char")?;
    let (_, _, pre) = dmpgi_pair(a, b, tol)?;
    let c = if pre.is_empty() {
        p_star_transpose_conditions(a, b, tol)?.conditions
    } else {
        Vec::new()
    };
    Ok(OrderReport::assemble(Relation::PStar, Route::Characterization, c, pre))
}

/// `AᵀA = AᵀB`, `AAᵀ = BAᵀ`, `AᵀA₀ = AᵀB₀`, `A₀Aᵀ = B₀Aᵀ`.
pub fn p_star_transpose_conditions(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<ConditionSet> {
    same_shape(a, b, "p_star_transpose_conditions")?;
    let (ra, a0, b0) = (a.real(), a.dual(), b.dual());
    let at = ra.transpose();
    let mut c = real_star_conditions(ra, b.real(), tol)?;
    c.push(matrix_identity("AᵀA₀ = AᵀB₀", &(&at * a0), &(&at * b0), tol));
    c.push(matrix_identity("A₀Aᵀ = B₀Aᵀ", &(a0 * &at), &(b0 * &at), tol));
    Ok(ConditionSet::new(c))
}

/// `A₀ᵀA = A₀ᵀB` and `AA₀ᵀ = BA₀ᵀ`.
pub fn dual_transpose_conditions(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<ConditionSet> {
    same_shape(a, b, "dual_transpose_conditions")?;
    let (ra, rb) = (a.real(), b.real());
    let a0t = a.dual().transpose();
    Ok(ConditionSet::new(vec![
        matrix_identity("A₀ᵀA = A₀ᵀB", &(&a0t * ra), &(&a0t * rb), tol),
        matrix_identity("AA₀ᵀ = BA₀ᵀ", &(ra * &a0t), &(rb * &a0t), tol),
    ]))
}

/// The four P-star transpose identities together with the two of
/// [`dual_transpose_conditions`].
pub fn six_transpose_conditions(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<ConditionSet> {
    let mut c = p_star_transpose_conditions(a, b, tol)?.conditions;
    c.extend(dual_transpose_conditions(a, b, tol)?.conditions);
    Ok(ConditionSet::new(c))
}

/// `BB₀ᵀA = AB₀ᵀA` and `AB₀ᵀB = AB₀ᵀA`.
pub fn mpdgi_transpose_conditions(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<ConditionSet> {
    same_shape(a, b, "mpdgi_transpose_conditions")?;
    let (ra, rb) = (a.real(), b.real());
    let b0t = b.dual().transpose();
    let ab0ta = ra * &b0t * ra;
    Ok(ConditionSet::new(vec![
        matrix_identity("BB₀ᵀA = AB₀ᵀA", &(rb * &b0t * ra), &ab0ta, tol),
        matrix_identity("AB₀ᵀB = AB₀ᵀA", &(ra * &b0t * rb), &ab0ta, tol),
    ]))
}

/// Block patterns of ordered pairs in the shared frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalForm {
    /// `A₀` vanishes off the first block row and column; `B₁ = A₁`,
    /// `B₂ = A₂ − T₁⁻¹A₄ᵀT₂`, `B₃ = A₃`, `B₄ = A₄ − T₂A₂ᵀT₁⁻¹`, `B₇ = A₇`,
    /// `B₉ = 0`.
    DStar,
    /// `B₁, B₂, B₃, B₄, B₇` equal the blocks of `A₀`; other blocks free.
    POrder,
    /// As [`CanonicalForm::POrder`] plus the DMPGI zeros of `DStar`.
    PStar,
    /// D-star pattern with `A₂ = A₄ = 0`.
    DStarAndPStar,
    /// D-star pattern on `A₀` with `B₂ = B₄ = 0`.
    MpdgiDStar,
    /// P-star pattern with `A₄T₁ + T₂A₂ᵀ = 0` and `A₄ᵀT₂ + T₁A₂ = 0`.
    DmpgiPStar,
}

/// Membership of a pair in one [`CanonicalForm`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormReport {
    pub form: CanonicalForm,
    pub holds: bool,
    pub conditions: Vec<Condition>,
}

struct Frame {
    dec: StarDecomposition,
    a0: BlockGrid,
    b0: BlockGrid,
    bound: f64,
}

impl Frame {
    fn t1_inv(&self) -> Vec<f64> {
        self.dec.t1.iter().map(|t| 1.0 / t).collect()
    }

    fn zero(&self, name: &str, m: &Matrix) -> Condition {
        Condition::new(name, m.norm(), self.bound)
    }

    fn equal(&self, name: &str, x: &Matrix, y: &Matrix) -> Condition {
        Condition::new(name, (x - y).norm(), self.bound)
    }

    fn same_block(&self, k: usize) -> Condition {
        self.equal(&format!("B{k} = A{k}"), self.b0.block(k), self.a0.block(k))
    }

    fn zero_a(&self, k: usize) -> Condition {
        self.zero(&format!("A{k} = 0"), self.a0.block(k))
    }

    fn zero_b(&self, k: usize) -> Condition {
        self.zero(&format!("B{k} = 0"), self.b0.block(k))
    }

    /// `A₀` blocks 5, 6, 8, 9 and `B₀` block 9 vanish.
    fn dmpgi_zeros(&self) -> Vec<Condition> {
        let mut c: Vec<_> = [5, 6, 8, 9].into_iter().map(|k| self.zero_a(k)).collect();
        c.push(self.zero_b(9));
        c
    }

    /// `T₁⁻¹A₄ᵀT₂` and `T₂A₂ᵀT₁⁻¹`.
    fn couplings(&self) -> (Matrix, Matrix) {
        let ti = self.t1_inv();
        let t2 = &self.dec.t2;
        let row = scale_cols(&scale_rows(&self.a0.block(4).transpose(), &ti), t2);
        let col = scale_cols(&scale_rows(&self.a0.block(2).transpose(), t2), &ti);
        (row, col)
    }

    fn d_star_blocks(&self) -> Vec<Condition> {
        let (row, col) = self.couplings();
        let mut c = self.dmpgi_zeros();
        c.push(self.same_block(1));
        c.push(self.equal("B2 = A2 − T₁⁻¹A4ᵀT₂", self.b0.block(2), &(self.a0.block(2) - row)));
        c.push(self.same_block(3));
        c.push(self.equal("B4 = A4 − T₂A2ᵀT₁⁻¹", self.b0.block(4), &(self.a0.block(4) - col)));
        c.push(self.same_block(7));
        c
    }

    fn p_order_blocks(&self) -> Vec<Condition> {
        [1, 2, 3, 4, 7].into_iter().map(|k| self.same_block(k)).collect()
    }

    fn conditions(&self, form: CanonicalForm) -> Vec<Condition> {
        match form {
            CanonicalForm::DStar => self.d_star_blocks(),
            CanonicalForm::POrder => self.p_order_blocks(),
            CanonicalForm::PStar => {
                let mut c = self.dmpgi_zeros();
                c.extend(self.p_order_blocks());
                c
            }
            CanonicalForm::DStarAndPStar => {
                let mut c = self.d_star_blocks();
                c.push(self.zero_a(2));
                c.push(self.zero_a(4));
                c
            }
            CanonicalForm::MpdgiDStar => {
                let mut c = self.dmpgi_zeros();
                c.push(self.same_block(1));
                c.push(self.zero_b(2));
                c.push(self.same_block(3));
                c.push(self.zero_b(4));
                c.push(self.same_block(7));
                c
            }
            CanonicalForm::DmpgiPStar => {
                let mut c = self.dmpgi_zeros();
                c.extend(self.p_order_blocks());
                let (t1, t2) = (&self.dec.t1, &self.dec.t2);
                let (a2, a4) = (self.a0.block(2), self.a0.block(4));
                let first = scale_cols(a4, t1) + scale_rows(&a2.transpose(), t2);
                let second = scale_cols(&a4.transpose(), t2) + scale_rows(a2, t1);
                c.push(self.zero("A4T₁ + T₂A2ᵀ = 0", &first));
                c.push(self.zero("A4ᵀT₂ + T₁A2 = 0", &second));
                c
            }
        }
    }
}

fn frame(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<std::result::Result<Frame, Condition>> {
    let dec = match linalg::star_decompose(a.real(), b.real(), tol) {
        Ok(dec) => dec,
        Err(Error::OrderViolation { what, residuals }) => {
            let worst = residuals.iter().copied().fold(0.0, f64::max);
            return Ok(Err(Condition::new(format!("frame: {what}"), worst, tol.bound(a.real().norm(), b.real().norm()))));
        }
        Err(e) => return Err(e),
    };
    let a0 = dec.to_blocks(a.dual())?;
    let b0 = dec.to_blocks(b.dual())?;
    let bound = tol.eq_atol + tol.eq_rtol * a.dual().norm().max(b.dual().norm());
    Ok(Ok(Frame { dec, a0, b0, bound }))
}

/// Membership test for a canonical block form. When the real parts are not
/// star ordered the report carries a single failing `frame` condition.
pub fn canonical_form(form: CanonicalForm, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<FormReport> {
    same_shape(a, b, "canonical_form")?;
    let conditions = match frame(a, b, tol)? {
        Ok(f) => f.conditions(form),
        Err(c) => vec![c],
    };
    Ok(FormReport {
        form,
        holds: conditions.iter().all(Condition::holds),
        conditions,
    })
}

fn canonical_report(relation: Relation, form: CanonicalForm, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    let f = canonical_form(form, a, b, tol)?;
    Ok(OrderReport::assemble(relation, Route::CanonicalForm, f.conditions, Vec::new()))
}

/// D-star order through the canonical block form.
pub fn d_star_leq_canonical(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    canonical_report(Relation::DStar, CanonicalForm::DStar, a, b, tol)
}

/// P-order through the canonical block form.
pub fn p_order_leq_canonical(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    canonical_report(Relation::POrder, CanonicalForm::POrder, a, b, tol)
}

/// P-star order through the canonical block form.
pub fn p_star_leq_canonical(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    canonical_report(Relation::PStar, CanonicalForm::PStar, a, b, tol)
}

/// D-star verdicts before and after inverting both operands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DaggerMonotoneReport {
    pub direct: OrderReport,
    pub inverted: OrderReport,
    pub consistent: bool,
}

/// Compares `Â ≤ B̂` with `Â† ≤ B̂†` under the D-star order.
pub fn check_dagger_monotone(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<DaggerMonotoneReport> {
    same_shape(a, b, "check_dagger_monotone")?;
    let (ai, bi, pre) = dmpgi_pair(a, b, tol)?;
    let (Some(ai), Some(bi)) = (ai, bi) else {
        return Err(Error::Prerequisite(pre.join("; ")));
    };
    let direct = d_star_leq(a, b, tol)?;
    let inverted = d_star_leq(&ai, &bi, tol)?;
    Ok(DaggerMonotoneReport {
        consistent: direct.holds == inverted.holds,
        direct,
        inverted,
    })
}

/// Existence and identity residuals for `(B̂ ± Â)†`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumDiffReport {
    pub sum_projector_residual: f64,
    pub diff_projector_residual: f64,
    /// `‖(B̂+Â)† − (B̂† − ½Â†)‖`.
    pub sum_residual: f64,
    /// `‖(B̂−Â)† − (B̂† − Â†)‖`.
    pub diff_residual: f64,
    /// `1 + ‖B̂†‖`.
    pub scale: f64,
    pub holds: bool,
}

impl SumDiffReport {
    pub fn residuals(&self) -> [f64; 4] {
        [
            self.sum_projector_residual,
            self.diff_projector_residual,
            self.sum_residual,
            self.diff_residual,
        ]
    }
}

/// DMPGIs of `B̂ + Â` and `B̂ − Â` for a D-star ordered pair.
pub fn check_sum_diff_dmpgi(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<SumDiffReport> {
    let order = d_star_leq(a, b, tol)?;
    if !order.holds {
        let mut residuals: Vec<f64> = order.condition_residuals.iter().map(|c| c.residual).collect();
        if residuals.is_empty() {
            residuals.push(f64::INFINITY);
        }
        let mut what = "pair is not D-star ordered".to_string();
        if !order.prerequisite_failures.is_empty() {
            what = format!("{what}: {}", order.prerequisite_failures.join("; "));
        }
        return Err(Error::OrderViolation { what, residuals });
    }
    let ai = ginv::dmpgi_value(a, tol)?.ok_or_else(|| Error::Prerequisite("DMPGI of A absent".into()))?;
    let bi = ginv::dmpgi_value(b, tol)?.ok_or_else(|| Error::Prerequisite("DMPGI of B absent".into()))?;
    let sum = ginv::dmpgi(&b.add(a)?, tol)?;
    let diff = ginv::dmpgi(&b.sub(a)?, tol)?;
    let scale = 1.0 + bi.norm();

    let sum_expected = bi.sub(&ai.scale(0.5))?;
    let diff_expected = bi.sub(&ai)?;
    let gap = |g: &ginv::GinvResult, want: &DualMatrix| -> Result<f64> {
        match g.value() {
            Some(v) => v.distance(want),
            None => Ok(f64::INFINITY),
        }
    };
    let sum_residual = gap(&sum, &sum_expected)?;
    let diff_residual = gap(&diff, &diff_expected)?;
    let bound = tol.eq_atol + tol.eq_rtol * scale;
    Ok(SumDiffReport {
        sum_projector_residual: sum.projector_residual,
        diff_projector_residual: diff.projector_residual,
        sum_residual,
        diff_residual,
        scale,
        holds: sum.exists && diff.exists && sum_residual <= bound && diff_residual <= bound,
    })
}

/// Every relation between two dual matrices together with the transpose
/// identities and the relations induced on their generalized inverses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationSummary {
    pub star_real: OrderReport,
    pub d_star: OrderReport,
    pub t_star: OrderReport,
    pub p_order: OrderReport,
    pub p_star: OrderReport,
    /// `A₀ᵀA = A₀ᵀB`, `AA₀ᵀ = BA₀ᵀ`.
    pub dual_transpose: ConditionSet,
    /// The four P-star transpose identities and `dual_transpose`.
    pub six_transpose: ConditionSet,
    /// `BB₀ᵀA = AB₀ᵀA`, `AB₀ᵀB = AB₀ᵀA`.
    pub mpdgi_transpose: ConditionSet,
    /// D-star between the MPDGIs.
    pub d_star_mpdgi: OrderReport,
    /// P-star between the MPDGIs.
    pub p_star_mpdgi: OrderReport,
    /// P-star between the DMPGIs, when both exist.
    pub p_star_dmpgi: Option<OrderReport>,
    /// D-star between the DMPGIs, when both exist.
    pub d_star_dmpgi: Option<OrderReport>,
}

impl RelationSummary {
    pub fn report(&self, relation: Relation) -> &OrderReport {
        match relation {
            Relation::StarReal => &self.star_real,
            Relation::DStar => &self.d_star,
            Relation::TStar => &self.t_star,
            Relation::POrder => &self.p_order,
            Relation::PStar => &self.p_star,
        }
    }
}

pub fn relation_matrix(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<RelationSummary> {
    same_shape(a, b, "relation_matrix")?;
    let ap = ginv::mpdgi_value(a, tol)?;
    let bp = ginv::mpdgi_value(b, tol)?;
    let (ai, bi, _) = dmpgi_pair(a, b, tol)?;
    let (p_star_dmpgi, d_star_dmpgi) = match (&ai, &bi) {
        (Some(x), Some(y)) => (Some(p_star_leq(x, y, tol)?), Some(d_star_leq(x, y, tol)?)),
        _ => (None, None),
    };
    Ok(RelationSummary {
        star_real: star_real_leq(a, b, tol)?,
        d_star: d_star_leq(a, b, tol)?,
        t_star: t_star_leq(a, b, tol)?,
        p_order: p_order_leq(a, b, tol)?,
        p_star: p_star_leq(a, b, tol)?,
        dual_transpose: dual_transpose_conditions(a, b, tol)?,
        six_transpose: six_transpose_conditions(a, b, tol)?,
        mpdgi_transpose: mpdgi_transpose_conditions(a, b, tol)?,
        d_star_mpdgi: d_star_leq(&ap, &bp, tol)?,
        p_star_mpdgi: p_star_leq(&ap, &bp, tol)?,
        p_star_dmpgi,
        d_star_dmpgi,
    })
}

//! Seeded property suites, one per theorem, plus replays of the published
//! counterexamples.
//!
//! Trial `i` of a run seeded with `s` draws everything from
//! [`trial_seed`]`(s, i)`, so outcomes do not depend on scheduling. Suites
//! with a premise (for example "given D-star") skip trials where it fails.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dual::{DualMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::ginv;
use crate::linalg;
use crate::orders::{self, CanonicalForm, ConditionSet, OrderReport};
use crate::synthesis::{self, trial_seed, CanonicalPair, GenSpec};

/// Every suite id accepted by [`verify`].
pub const THEOREM_IDS: [&str; 20] = [
    "thm-2.2",
    "thm-2.3",
    "thm-2.4",
    "thm-3.1",
    "thm-3.2",
    "thm-3.3",
    "thm-3.4",
    "thm-3.5",
    "thm-3.6",
    "thm-4.1",
    "thm-4.2",
    "thm-4.3",
    "thm-4.4",
    "thm-5.1",
    "thm-5.2",
    "thm-5.3",
    "thm-5.4",
    "thm-5.5",
    "fixtures-4.1",
    "fixtures-5.x",
];

const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub trials: u64,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            seed: 1,
            tol: Tolerances::with_eq(1e-8),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub theorem_id: String,
    /// Seeded trials plus replayed fixtures.
    pub trials: u64,
    pub failures: u64,
    /// Trials whose premise did not hold.
    pub skipped: u64,
    /// Largest residual among identities that were expected to hold.
    pub max_residual: f64,
    pub seed: u64,
    pub failure_examples: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Default)]
struct Trial {
    failures: Vec<String>,
    residual: f64,
    skipped: bool,
}

impl Trial {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records a failure unless every verdict is the same.
    fn agree(&mut self, verdicts: &[(&str, bool)]) {
        let first = verdicts[0].1;
        if verdicts.iter().any(|(_, v)| *v != first) {
            let list: Vec<String> = verdicts.iter().map(|(n, v)| format!("{n}={v}")).collect();
            self.failures.push(format!("routes disagree: {}", list.join(", ")));
        }
    }

    fn residual(&mut self, r: f64) {
        self.residual = self.residual.max(r);
    }

    fn track(&mut self, r: &OrderReport) -> bool {
        if r.holds {
            self.residual(r.max_residual());
        }
        if !r.defects.is_empty() {
            self.failures.push(format!("{:?} defects: {}", r.relation, r.defects.join("; ")));
        }
        r.holds
    }

    fn track_set(&mut self, c: &ConditionSet) -> bool {
        if c.holds {
            self.residual(c.max_residual());
        }
        c.holds
    }

    fn skip(&mut self) {
        self.skipped = true;
    }
}

/// Random dimensions and generator spec for one trial.
struct Case {
    rng: ChaCha8Rng,
    index: u64,
}

impl Case {
    fn new(seed: u64, index: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(trial_seed(seed, index)),
            index,
        }
    }

    /// `m ≤ 8`, `n ≤ 6`, `a ≤ b ≤ min(m, n)` with `a ≤ 5`. With `strict`
    /// the pair has `1 ≤ a < b`.
    fn spec(&mut self, strict: bool) -> GenSpec {
        let (m, n) = if strict {
            (self.rng.random_range(2..=8), self.rng.random_range(2..=6))
        } else {
            (self.rng.random_range(1..=8), self.rng.random_range(1..=6))
        };
        let k = m.min(n);
        let (a, b) = if strict {
            let a = self.rng.random_range(1..k.min(6));
            (a, self.rng.random_range(a + 1..=k))
        } else {
            let a = self.rng.random_range(0..=k.min(5));
            (a, self.rng.random_range(a..=k))
        };
        GenSpec::new(m, n, a, b, self.rng.next_u64())
    }

    fn rank_c(&mut self, spec: &GenSpec) -> usize {
        self.rng.random_range(spec.rank_b..=spec.m.min(spec.n))
    }

    fn seed(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[derive(Clone, Copy, Debug)]
enum Source {
    DStar,
    PStar,
    Both,
    POrder,
    MpdgiDStar,
    DmpgiPStar,
}

impl Source {
    fn generate(self, spec: &GenSpec) -> Result<CanonicalPair> {
        match self {
            Source::DStar => synthesis::gen_d_star_pair(spec),
            Source::PStar => synthesis::gen_p_star_pair(spec),
            Source::Both => synthesis::gen_both_pair(spec),
            Source::POrder => synthesis::gen_p_order_pair(spec),
            Source::MpdgiDStar => synthesis::gen_mpdgi_d_star_pair(spec),
            Source::DmpgiPStar => synthesis::gen_dmpgi_p_star_pair(spec),
        }
    }
}

/// Instance recipe: a generator and whether to perturb one coupled block.
type Recipe = (Source, bool);

type PairCheck = fn(&DualMatrix, &DualMatrix, &Tolerances, &mut Trial) -> Result<()>;

struct PairSuite {
    recipes: &'static [Recipe],
    fixtures: &'static [(&'static str, &'static str)],
    check: PairCheck,
}

fn fixture(name: &str) -> DualMatrix {
    fixtures::all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, x)| x)
        .expect("known fixture name")
}

const ALL_FIXTURE_PAIRS: &[(&str, &str)] = &[
    ("F1", "F2"),
    ("F2", "F1"),
    ("F3", "F4"),
    ("F3", "F5"),
    ("F6", "F7"),
    ("F6", "F8"),
    ("F6", "F6"),
];

const D_STAR_MIX: &[Recipe] = &[
    (Source::DStar, false),
    (Source::DStar, true),
    (Source::PStar, false),
    (Source::Both, false),
    (Source::POrder, false),
];

const P_STAR_MIX: &[Recipe] = &[
    (Source::PStar, false),
    (Source::PStar, true),
    (Source::DStar, false),
    (Source::Both, true),
    (Source::POrder, false),
];

const P_ORDER_MIX: &[Recipe] = &[
    (Source::POrder, false),
    (Source::POrder, true),
    (Source::PStar, false),
    (Source::DStar, false),
];

const BOTH_MIX: &[Recipe] = &[
    (Source::Both, false),
    (Source::DStar, false),
    (Source::PStar, false),
    (Source::Both, true),
    (Source::MpdgiDStar, false),
    (Source::DmpgiPStar, false),
];

impl PairSuite {
    fn trial(&self, case: &mut Case, tol: &Tolerances) -> Result<Trial> {
        let (source, perturb) = self.recipes[case.index as usize % self.recipes.len()];
        let spec = case.spec(perturb);
        let mut pair = source.generate(&spec)?;
        if perturb {
            pair.perturb_coupled(0.1, case.seed());
        }
        let (a, b) = pair.pair();
        let mut t = Trial::default();
        (self.check)(&a, &b, tol, &mut t)?;
        Ok(t)
    }

    fn fixture_trial(&self, (x, y): (&str, &str), tol: &Tolerances) -> Result<Trial> {
        let mut t = Trial::default();
        (self.check)(&fixture(x), &fixture(y), tol, &mut t)?;
        Ok(t)
    }
}

fn both_dmpgi(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<Option<(DualMatrix, DualMatrix)>> {
    Ok(match (ginv::dmpgi_value(a, tol)?, ginv::dmpgi_value(b, tol)?) {
        (Some(x), Some(y)) => Some((x, y)),
        _ => None,
    })
}

fn both_mpdgi(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<(DualMatrix, DualMatrix)> {
    Ok((ginv::mpdgi_value(a, tol)?, ginv::mpdgi_value(b, tol)?))
}

fn form(f: CanonicalForm, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<bool> {
    let r = orders::canonical_form(f, a, b, tol)?;
    if r.holds {
        t.residual(r.conditions.iter().map(|c| c.residual).fold(0.0, f64::max));
    }
    Ok(r.holds)
}

fn d_star_char_agrees(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let d = t.track(&orders::d_star_leq(a, b, tol)?);
    let c = t.track(&orders::d_star_leq_char(a, b, tol)?);
    t.agree(&[("definition", d), ("characterization", c)]);
    Ok(())
}

fn d_star_form_agrees(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    if both_dmpgi(a, b, tol)?.is_none() {
        t.skip();
        return Ok(());
    }
    let d = t.track(&orders::d_star_leq(a, b, tol)?);
    let f = t.track(&orders::d_star_leq_canonical(a, b, tol)?);
    t.agree(&[("definition", d), ("canonical form", f)]);
    Ok(())
}

fn dagger_reverses_d_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    if both_dmpgi(a, b, tol)?.is_none() {
        t.skip();
        return Ok(());
    }
    let r = orders::check_dagger_monotone(a, b, tol)?;
    let d = t.track(&r.direct);
    let i = t.track(&r.inverted);
    t.agree(&[("A ≤ B", d), ("A† ≤ B†", i)]);
    Ok(())
}

fn d_star_matches_t_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    if both_dmpgi(a, b, tol)?.is_none() {
        t.skip();
        return Ok(());
    }
    let d = t.track(&orders::d_star_leq(a, b, tol)?);
    let ts = t.track(&orders::t_star_leq(a, b, tol)?);
    t.agree(&[("d-star", d), ("t-star", ts)]);
    Ok(())
}

fn p_order_char_agrees(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let d = t.track(&orders::p_order_leq(a, b, tol)?);
    let c = t.track(&orders::p_order_leq_char(a, b, tol)?);
    t.agree(&[("definition", d), ("characterization", c)]);
    Ok(())
}

fn p_order_form_agrees(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let d = t.track(&orders::p_order_leq(a, b, tol)?);
    let f = t.track(&orders::p_order_leq_canonical(a, b, tol)?);
    t.agree(&[("definition", d), ("canonical form", f)]);
    Ok(())
}

fn p_star_routes_agree(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let d = t.track(&orders::p_star_leq(a, b, tol)?);
    let c = t.track(&orders::p_star_leq_char(a, b, tol)?);
    let f = t.track(&orders::p_star_leq_canonical(a, b, tol)?);
    t.agree(&[("definition", d), ("transpose identities", c), ("canonical form", f)]);
    Ok(())
}

fn p_star_given_d_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let Some((ai, bi)) = both_dmpgi(a, b, tol)? else {
        t.skip();
        return Ok(());
    };
    if !t.track(&orders::d_star_leq(a, b, tol)?) {
        t.skip();
        return Ok(());
    }
    let p = t.track(&orders::p_star_leq(a, b, tol)?);
    let f = form(CanonicalForm::DStarAndPStar, a, b, tol, t)?;
    let c = t.track_set(&orders::dual_transpose_conditions(a, b, tol)?);
    let pi = t.track(&orders::p_star_leq(&ai, &bi, tol)?);
    t.agree(&[("p-star", p), ("canonical form", f), ("A₀ᵀA = A₀ᵀB ∧ AA₀ᵀ = BA₀ᵀ", c), ("p-star(A†, B†)", pi)]);
    Ok(())
}

fn d_star_given_p_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    if !t.track(&orders::p_star_leq(a, b, tol)?) {
        t.skip();
        return Ok(());
    }
    let (ap, bp) = both_mpdgi(a, b, tol)?;
    let d = t.track(&orders::d_star_leq(a, b, tol)?);
    let pp = t.track(&orders::p_star_leq(&ap, &bp, tol)?);
    let f = form(CanonicalForm::DStarAndPStar, a, b, tol, t)?;
    let c = t.track_set(&orders::dual_transpose_conditions(a, b, tol)?);
    t.agree(&[("d-star", d), ("p-star(Aᵖ, Bᵖ)", pp), ("canonical form", f), ("A₀ᵀA = A₀ᵀB ∧ AA₀ᵀ = BA₀ᵀ", c)]);
    Ok(())
}

fn joint_order_routes(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let Some((ai, bi)) = both_dmpgi(a, b, tol)? else {
        t.skip();
        return Ok(());
    };
    let (ap, bp) = both_mpdgi(a, b, tol)?;
    let d = t.track(&orders::d_star_leq(a, b, tol)?);
    let p = t.track(&orders::p_star_leq(a, b, tol)?);
    let pi = t.track(&orders::p_star_leq(&ai, &bi, tol)?);
    let pp = t.track(&orders::p_star_leq(&ap, &bp, tol)?);
    let six = t.track_set(&orders::six_transpose_conditions(a, b, tol)?);
    let f = form(CanonicalForm::DStarAndPStar, a, b, tol, t)?;
    t.agree(&[
        ("d ∧ p", d && p),
        ("d ∧ p(A†, B†)", d && pi),
        ("p ∧ p(Aᵖ, Bᵖ)", p && pp),
        ("six transpose identities", six),
        ("canonical form", f),
    ]);
    Ok(())
}

fn mpdgi_d_star_given_d_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    if both_dmpgi(a, b, tol)?.is_none() || !t.track(&orders::d_star_leq(a, b, tol)?) {
        t.skip();
        return Ok(());
    }
    let (ap, bp) = both_mpdgi(a, b, tol)?;
    let dp = t.track(&orders::d_star_leq(&ap, &bp, tol)?);
    let f = form(CanonicalForm::MpdgiDStar, a, b, tol, t)?;
    let c = t.track_set(&orders::mpdgi_transpose_conditions(a, b, tol)?);
    t.agree(&[("d-star(Aᵖ, Bᵖ)", dp), ("canonical form", f), ("BB₀ᵀA = AB₀ᵀA ∧ AB₀ᵀB = AB₀ᵀA", c)]);
    Ok(())
}

fn dmpgi_p_star_given_p_star(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let Some((ai, bi)) = both_dmpgi(a, b, tol)? else {
        t.skip();
        return Ok(());
    };
    if !t.track(&orders::p_star_leq(a, b, tol)?) {
        t.skip();
        return Ok(());
    }
    let pi = t.track(&orders::p_star_leq(&ai, &bi, tol)?);
    let f = form(CanonicalForm::DmpgiPStar, a, b, tol, t)?;
    t.agree(&[("p-star(A†, B†)", pi), ("block conditions", f)]);
    Ok(())
}

fn pair_suite(id: &str) -> Option<PairSuite> {
    let (recipes, fixtures, check): (&'static [Recipe], &'static [(&str, &str)], PairCheck) = match id {
        "thm-3.1" => (D_STAR_MIX, ALL_FIXTURE_PAIRS, d_star_char_agrees),
        "thm-3.2" => (D_STAR_MIX, ALL_FIXTURE_PAIRS, d_star_form_agrees),
        "thm-3.4" => (D_STAR_MIX, ALL_FIXTURE_PAIRS, dagger_reverses_d_star),
        "thm-3.6" => (D_STAR_MIX, ALL_FIXTURE_PAIRS, d_star_matches_t_star),
        "thm-4.1" => (P_ORDER_MIX, ALL_FIXTURE_PAIRS, p_order_char_agrees),
        "thm-4.2" => (P_ORDER_MIX, ALL_FIXTURE_PAIRS, p_order_form_agrees),
        "thm-4.4" => (P_STAR_MIX, ALL_FIXTURE_PAIRS, p_star_routes_agree),
        "thm-5.1" => (BOTH_MIX, &[("F3", "F5"), ("F6", "F8")], p_star_given_d_star),
        "thm-5.2" => (BOTH_MIX, &[("F3", "F4"), ("F6", "F7")], d_star_given_p_star),
        "thm-5.3" => (BOTH_MIX, ALL_FIXTURE_PAIRS, joint_order_routes),
        "thm-5.4" => (
            &[(Source::MpdgiDStar, false), (Source::DStar, false), (Source::Both, false), (Source::MpdgiDStar, true)],
            &[("F3", "F5"), ("F6", "F8")],
            mpdgi_d_star_given_d_star,
        ),
        "thm-5.5" => (
            &[(Source::DmpgiPStar, false), (Source::PStar, false), (Source::Both, false), (Source::DmpgiPStar, true)],
            &[("F3", "F4"), ("F6", "F7")],
            dmpgi_p_star_given_p_star,
        ),
        _ => return None,
    };
    Some(PairSuite {
        recipes,
        fixtures,
        check,
    })
}

/// Real star order: pinv identities, transpose identities and the shared
/// frame agree; generated pairs hold and leaking perturbations fail.
fn real_star_trial(case: &mut Case, tol: &Tolerances) -> Result<Trial> {
    let perturb = case.index % 2 == 1;
    let spec = case.spec(perturb);
    let pair = synthesis::gen_d_star_pair(&spec)?;
    let a = pair.frame.lower();
    let mut y = pair.frame.to_basis(&pair.frame.upper());
    if perturb {
        let i = case.rng.random_range(0..spec.rank_a);
        let j = case.rng.random_range(0..spec.n);
        y[(i, j)] += 0.1;
    }
    let b = pair.frame.from_basis(&y);
    let mut t = Trial::default();
    let pinv_route = linalg::star_leq_real_pinv(&a, &b, tol)?;
    let transpose_route = linalg::star_leq_real(&a, &b, tol)?;
    let frame_route = match linalg::star_decompose(&a, &b, tol) {
        Ok(dec) => {
            let err = (dec.lower() - &a).norm().max((dec.upper() - &b).norm());
            t.residual(err);
            t.expect(err <= tol.bound(a.norm(), b.norm()), || format!("frame reconstruction error {err:e}"));
            true
        }
        Err(Error::OrderViolation { .. }) => false,
        Err(e) => return Err(e),
    };
    t.agree(&[("A†A = A†B ∧ AA† = BA†", pinv_route), ("AᵀA = AᵀB ∧ AAᵀ = BAᵀ", transpose_route), ("shared frame", frame_route)]);
    t.expect(pinv_route != perturb, || format!("expected {} for perturbed={perturb}", !perturb));
    Ok(t)
}

/// DMPGI existence, Penrose residuals, formula/block agreement and
/// involution. Every fifth trial adds a matrix without a DMPGI.
fn dmpgi_trial(case: &mut Case, tol: &Tolerances) -> Result<Trial> {
    let spec = case.spec(false);
    let x = synthesis::gen_dual_with_dmpgi(&spec)?;
    let mut t = Trial::default();
    let report = ginv::dmpgi_exists(&x, tol)?;
    t.expect(report.exists && report.rank_condition, || format!("existence verdicts on a constructed positive: {report:?}"));
    let g = ginv::dmpgi(&x, tol)?;
    if let (Some(v), Some(res)) = (g.value(), g.penrose_residuals) {
        let scale = 1.0 + x.norm();
        let worst = res.iter().copied().fold(0.0, f64::max);
        t.residual(worst);
        t.expect(worst <= 1e-9 * scale, || format!("Penrose residuals {res:?}"));
        let gap = g.route_discrepancy.unwrap_or(f64::INFINITY);
        t.residual(gap);
        t.expect(gap <= 1e-9, || format!("formula and block routes differ by {gap:e}"));
        let back = ginv::dmpgi_value(v, tol)?;
        let err = back.map_or(Ok(f64::INFINITY), |w| w.distance(&x))?;
        t.residual(err);
        t.expect(err <= 1e-8, || format!("dmpgi(dmpgi(x)) misses x by {err:e}"));
    } else {
        t.failures.push("DMPGI missing for a constructed positive".into());
    }
    if case.index.is_multiple_of(5) {
        let k = spec.m.min(spec.n);
        let neg = GenSpec {
            rank_a: spec.rank_a.min(k - 1),
            rank_b: spec.rank_a.min(k - 1),
            ..spec.clone()
        };
        let y = synthesis::gen_dual_without_dmpgi(&neg)?;
        let r = ginv::dmpgi_exists(&y, tol)?;
        t.expect(!r.exists && !r.rank_condition, || format!("existence verdicts on a negative control: {r:?}"));
    }
    Ok(t)
}

/// MPDGI formula against its block form on unrestricted dual parts.
fn mpdgi_trial(case: &mut Case, tol: &Tolerances) -> Result<Trial> {
    let spec = case.spec(false);
    let x = synthesis::gen_p_order_pair(&spec)?.lower();
    let g = ginv::mpdgi(&x, tol)?;
    let blocks = ginv::mpdgi_svd_blocks(&x, tol)?;
    let v = g.value().expect("MPDGI always exists");
    let gap = v.distance(&blocks)?;
    let pinv = linalg::pinv(x.real(), tol)?;
    let real_gap = (v.real() - pinv).norm();
    let mut t = Trial::default();
    t.residual(gap.max(real_gap));
    t.expect(gap <= tol.bound(v.norm(), blocks.norm()), || format!("formula and block routes differ by {gap:e}"));
    t.expect(real_gap <= tol.eq_atol, || format!("real part differs from A† by {real_gap:e}"));
    Ok(t)
}

#[derive(Clone, Copy)]
enum Law {
    DStar,
    PStar,
}

impl Law {
    fn leq(self, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
        match self {
            Law::DStar => orders::d_star_leq(a, b, tol),
            Law::PStar => orders::p_star_leq(a, b, tol),
        }
    }

    fn pair(self, spec: &GenSpec) -> Result<CanonicalPair> {
        match self {
            Law::DStar => synthesis::gen_d_star_pair(spec),
            Law::PStar => synthesis::gen_p_star_pair(spec),
        }
    }
}

/// Reflexivity, antisymmetry and transitivity on fresh instances.
fn trial_laws(case: &mut Case, tol: &Tolerances, law: Law) -> Result<Trial> {
    let mut t = Trial::default();
    let spec = case.spec(false);
    let x = synthesis::gen_dual_with_dmpgi(&spec)?;
    let r = law.leq(&x, &x, tol)?;
    t.track(&r);
    t.expect(r.holds, || "reflexivity fails".into());

    let spec = if case.index.is_multiple_of(2) {
        let mut s = case.spec(false);
        s.rank_b = s.rank_a;
        s
    } else {
        case.spec(false)
    };
    let (a, b) = law.pair(&spec)?.pair();
    let up = law.leq(&a, &b, tol)?;
    let down = law.leq(&b, &a, tol)?;
    t.track(&up);
    t.track(&down);
    if up.holds && down.holds {
        t.expect(a.approx_eq(&b, tol)?, || "antisymmetry fails".into());
    }

    let spec = case.spec(false);
    let rank_c = case.rank_c(&spec);
    let chain = match law {
        Law::DStar => synthesis::gen_d_star_chain(&spec, rank_c)?,
        Law::PStar => synthesis::gen_p_star_chain(&spec, rank_c)?,
    };
    let (a, b, c) = chain.triple();
    let ab = t.track(&law.leq(&a, &b, tol)?);
    let bc = t.track(&law.leq(&b, &c, tol)?);
    let ac = t.track(&law.leq(&a, &c, tol)?);
    t.expect(ab && bc, || "generated chain is not ordered".into());
    if ab && bc {
        t.expect(ac, || "transitivity fails".into());
    }
    Ok(t)
}

fn sum_diff(a: &DualMatrix, b: &DualMatrix, tol: &Tolerances, t: &mut Trial) -> Result<()> {
    let r = orders::check_sum_diff_dmpgi(a, b, tol)?;
    let worst = r.sum_residual.max(r.diff_residual);
    t.residual(worst);
    t.expect(worst <= 1e-8 * r.scale, || format!("sum/difference residuals {:?}", r.residuals()));
    Ok(())
}

fn sum_diff_trial(case: &mut Case, tol: &Tolerances) -> Result<Trial> {
    let spec = case.spec(false);
    let (a, b) = synthesis::gen_d_star_pair(&spec)?.pair();
    let mut t = Trial::default();
    sum_diff(&a, &b, tol, &mut t)?;
    Ok(t)
}

/// Named checks replayed by a fixture suite.
type FixtureCheck = (&'static str, fn(&Tolerances, &mut Trial) -> Result<()>);

fn verdict(r: Result<OrderReport>, want: bool, t: &mut Trial, what: &str) -> Result<()> {
    let r = r?;
    t.track(&r);
    t.expect(r.holds == want, || format!("{what}: expected {want}"));
    Ok(())
}

fn dual_part_close(x: &DualMatrix, rows: &[&[f64]], bound: f64, t: &mut Trial, what: &str) -> Result<()> {
    let want = crate::dual::matrix_from_rows(rows)?;
    let err = (x.dual() - want).norm();
    t.residual(err);
    t.expect(err <= bound, || format!("{what}: off by {err:e}"));
    Ok(())
}

const MPDGI_FIXTURES: &[FixtureCheck] = &[
    ("mpdgi(F1) = mpdgi(F2) = E₁₁ − εE₁₁", |tol, t| {
        let want = DualMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]], &[&[-1.0, 0.0], &[0.0, 0.0]])?;
        for x in [fixtures::f1(), fixtures::f2()] {
            let v = ginv::mpdgi_value(&x, tol)?;
            let err = v.distance(&want)?;
            t.residual(err);
            t.expect(err <= 1e-12, || format!("mpdgi off by {err:e}"));
        }
        Ok(())
    }),
    ("p-order(F1, F2)", |tol, t| verdict(orders::p_order_leq(&fixtures::f1(), &fixtures::f2(), tol), true, t, "p-order(F1, F2)")),
    ("p-order(F2, F1)", |tol, t| verdict(orders::p_order_leq(&fixtures::f2(), &fixtures::f1(), tol), true, t, "p-order(F2, F1)")),
    ("F1 ≠ F2", |tol, t| {
        t.expect(!fixtures::f1().approx_eq(&fixtures::f2(), tol)?, || "F1 and F2 compare equal".into());
        Ok(())
    }),
    ("DMPGI of F2 absent", |tol, t| {
        t.expect(!ginv::dmpgi_exists(&fixtures::f2(), tol)?.exists, || "F2 has a DMPGI".into());
        Ok(())
    }),
    ("p-star(F1, F2) false", |tol, t| verdict(orders::p_star_leq(&fixtures::f1(), &fixtures::f2(), tol), false, t, "p-star(F1, F2)")),
];

const ORDER_FIXTURES: &[FixtureCheck] = &[
    ("p-star(F3, F4)", |tol, t| verdict(orders::p_star_leq(&fixtures::f3(), &fixtures::f4(), tol), true, t, "p-star(F3, F4)")),
    ("d-star(F3, F4) false", |tol, t| verdict(orders::d_star_leq(&fixtures::f3(), &fixtures::f4(), tol), false, t, "d-star(F3, F4)")),
    ("d-star(F3, F5)", |tol, t| verdict(orders::d_star_leq(&fixtures::f3(), &fixtures::f5(), tol), true, t, "d-star(F3, F5)")),
    ("p-star(F3, F5) false", |tol, t| verdict(orders::p_star_leq(&fixtures::f3(), &fixtures::f5(), tol), false, t, "p-star(F3, F5)")),
    ("dmpgi(F6)", |tol, t| {
        let v = ginv::dmpgi_value(&fixtures::f6(), tol)?;
        let Some(v) = v else {
            t.failures.push("F6 has no DMPGI".into());
            return Ok(());
        };
        let real_err = (v.real() - fixtures::f6().real()).norm();
        t.residual(real_err);
        t.expect(real_err <= 1e-10, || format!("dmpgi(F6) real part off by {real_err:e}"));
        dual_part_close(&v, &[&[-1.0, 4.0, 7.0], &[2.0, 0.0, 0.0], &[3.0, 0.0, 0.0]], 1e-10, t, "dmpgi(F6)")
    }),
    ("mpdgi(F7) dual part", |tol, t| {
        let v = ginv::mpdgi_value(&fixtures::f7(), tol)?;
        dual_part_close(&v, &[&[-1.0, -1.0, 0.0], &[-2.0, 0.25, 0.0], &[0.0, 0.0, 0.0]], 1e-10, t, "mpdgi(F7)")
    }),
    ("mpdgi(F8) dual part", |tol, t| {
        let v = ginv::mpdgi_value(&fixtures::f8(), tol)?;
        dual_part_close(&v, &[&[-1.0, 3.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.0]], 1e-10, t, "mpdgi(F8)")
    }),
    ("relations of (F6, F7)", |tol, t| {
        let s = orders::relation_matrix(&fixtures::f6(), &fixtures::f7(), tol)?;
        t.expect(s.p_star.holds, || "p-star(F6, F7) false".into());
        t.expect(!s.d_star.holds, || "d-star(F6, F7) true".into());
        t.expect(!s.p_star_mpdgi.holds, || "p-star(F6ᵖ, F7ᵖ) true".into());
        t.expect(!s.t_star.holds, || "t-star(F6, F7) true".into());
        Ok(())
    }),
    ("relations of (F6, F8)", |tol, t| {
        let s = orders::relation_matrix(&fixtures::f6(), &fixtures::f8(), tol)?;
        t.expect(s.d_star.holds, || "d-star(F6, F8) false".into());
        t.expect(!s.p_star.holds, || "p-star(F6, F8) true".into());
        t.expect(!s.d_star_mpdgi.holds, || "d-star(F6ᵖ, F8ᵖ) true".into());
        t.expect(s.p_star_dmpgi.as_ref().is_some_and(|r| !r.holds), || "p-star(F6†, F8†) not false".into());
        t.expect(s.t_star.holds, || "t-star(F6, F8) false".into());
        Ok(())
    }),
    ("t-star(ε, 2ε) and t-star(2ε, ε)", |tol, t| {
        let (e1, e2) = fixtures::eps_pair();
        verdict(orders::t_star_leq(&e1, &e2, tol), true, t, "t-star(ε, 2ε)")?;
        verdict(orders::t_star_leq(&e2, &e1, tol), true, t, "t-star(2ε, ε)")
    }),
];

const SUM_DIFF_FIXTURES: &[FixtureCheck] = &[
    ("sum and difference DMPGIs of (F6, F8)", |tol, t| sum_diff(&fixtures::f6(), &fixtures::f8(), tol, t)),
    ("sum and difference DMPGIs of (F3, F5)", |tol, t| sum_diff(&fixtures::f3(), &fixtures::f5(), tol, t)),
];

fn summarize(id: &str, cfg: &VerifyConfig, trials: Vec<(String, Result<Trial>)>) -> VerifyOutcome {
    let mut out = VerifyOutcome {
        theorem_id: id.to_string(),
        trials: trials.len() as u64,
        failures: 0,
        skipped: 0,
        max_residual: 0.0,
        seed: cfg.seed,
        failure_examples: Vec::new(),
    };
    for (label, t) in trials {
        let messages = match t {
            Ok(t) => {
                out.max_residual = out.max_residual.max(t.residual);
                out.skipped += u64::from(t.skipped);
                t.failures
            }
            Err(e) => vec![format!("error: {e}")],
        };
        if !messages.is_empty() {
            out.failures += 1;
            if out.failure_examples.len() < MAX_EXAMPLES {
                out.failure_examples.push(format!("{label}: {}", messages.join("; ")));
            }
        }
    }
    out
}

fn run_seeded<F>(cfg: &VerifyConfig, f: F) -> Vec<(String, Result<Trial>)>
where
    F: Fn(&mut Case, &Tolerances) -> Result<Trial> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut case = Case::new(cfg.seed, i);
            (format!("trial {i} (seed {})", trial_seed(cfg.seed, i)), f(&mut case, &cfg.tol))
        })
        .collect()
}

fn run_fixtures(checks: &[FixtureCheck], tol: &Tolerances) -> Vec<(String, Result<Trial>)> {
    checks
        .iter()
        .map(|(name, check)| {
            let mut t = Trial::default();
            let r = check(tol, &mut t).map(|_| t);
            (name.to_string(), r)
        })
        .collect()
}

/// Runs one suite. Unknown ids are an [`Error::InvalidSpec`].
pub fn verify(id: &str, cfg: &VerifyConfig) -> Result<VerifyOutcome> {
    let trials = if let Some(suite) = pair_suite(id) {
        let mut t = run_seeded(cfg, |case, tol| suite.trial(case, tol));
        for &(x, y) in suite.fixtures {
            t.push((format!("fixture ({x}, {y})"), suite.fixture_trial((x, y), &cfg.tol)));
        }
        t
    } else {
        match id {
            "thm-2.2" => run_seeded(cfg, real_star_trial),
            "thm-2.3" => run_seeded(cfg, dmpgi_trial),
            "thm-2.4" => run_seeded(cfg, mpdgi_trial),
            "thm-3.3" => run_seeded(cfg, |c, tol| trial_laws(c, tol, Law::DStar)),
            "thm-4.3" => run_seeded(cfg, |c, tol| trial_laws(c, tol, Law::PStar)),
            "thm-3.5" => {
                let mut t = run_seeded(cfg, sum_diff_trial);
                t.extend(run_fixtures(SUM_DIFF_FIXTURES, &cfg.tol));
                t
            }
            "fixtures-4.1" => run_fixtures(MPDGI_FIXTURES, &cfg.tol),
            "fixtures-5.x" => {
                let mut t = run_fixtures(ORDER_FIXTURES, &cfg.tol);
                t.extend(run_fixtures(SUM_DIFF_FIXTURES, &cfg.tol));
                t
            }
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "unknown theorem id {id:?}; expected one of {}",
                    THEOREM_IDS.join(", ")
                )))
            }
        }
    };
    Ok(summarize(id, cfg, trials))
}

/// Runs every suite in [`THEOREM_IDS`] order.
pub fn verify_all(cfg: &VerifyConfig) -> Result<Vec<VerifyOutcome>> {
    THEOREM_IDS.iter().map(|id| verify(id, cfg)).collect()
}

/// Result of [`negative_controls`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControlOutcome {
    pub trials: u64,
    /// Perturbed pairs whose advertised order no longer holds.
    pub flipped: u64,
    pub seed: u64,
}

impl ControlOutcome {
    pub fn flip_rate(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.flipped as f64 / self.trials as f64
    }
}

/// Perturbs one coupled block of a generated D-star, P-star or two-sided pair
/// by `delta` and counts how often the advertised order stops holding.
pub fn negative_controls(trials: u64, seed: u64, delta: f64, tol: &Tolerances) -> Result<ControlOutcome> {
    let flips: Vec<Result<bool>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut case = Case::new(seed, i);
            let spec = case.spec(true);
            let (mut pair, law) = match i % 3 {
                0 => (synthesis::gen_d_star_pair(&spec)?, Law::DStar),
                1 => (synthesis::gen_p_star_pair(&spec)?, Law::PStar),
                _ => (synthesis::gen_both_pair(&spec)?, if i % 2 == 0 { Law::DStar } else { Law::PStar }),
            };
            pair.perturb_coupled(delta, case.seed());
            let (a, b) = pair.pair();
            Ok(!law.leq(&a, &b, tol)?.holds)
        })
        .collect();
    let mut flipped = 0;
    for f in flips {
        flipped += u64::from(f?);
    }
    Ok(ControlOutcome { trials, flipped, seed })
}

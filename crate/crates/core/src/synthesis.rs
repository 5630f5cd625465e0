//! Seeded generators for dual matrices and ordered pairs.
//!
//! Every object is assembled in the shared frame `U, V` of a star-ordered
//! pair of real parts. The dual blocks are drawn and coupled in that basis,
//! and only then rotated by `U` and `V`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dual::{DualMatrix, Matrix};
use crate::error::{Error, Result};
use crate::linalg::{scale_cols, scale_rows, BlockGrid, StarDecomposition};

/// Dimensions, ranks and sampling ranges for one generated object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    pub seed: u64,
    /// Range for the diagonals of `T₁`, `T₂`, `T₃`.
    pub block_scale: (f64, f64),
    /// Range for the free dual blocks.
    pub noise_scale: (f64, f64),
}

impl GenSpec {
    pub fn new(m: usize, n: usize, rank_a: usize, rank_b: usize, seed: u64) -> Self {
        Self {
            m,
            n,
            rank_a,
            rank_b,
            seed,
            block_scale: (0.5, 2.0),
            noise_scale: (-1.0, 1.0),
        }
    }

    pub fn with_block_scale(mut self, lo: f64, hi: f64) -> Self {
        self.block_scale = (lo, hi);
        self
    }

    pub fn with_noise_scale(mut self, lo: f64, hi: f64) -> Self {
        self.noise_scale = (lo, hi);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!("dimensions must be positive, got {}x{}", self.m, self.n));
        }
        if self.rank_a > self.rank_b || self.rank_b > self.m.min(self.n) {
            return bad(format!(
                "ranks must satisfy a ≤ b ≤ min(m, n), got a={}, b={} for {}x{}",
                self.rank_a, self.rank_b, self.m, self.n
            ));
        }
        let (lo, hi) = self.block_scale;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return bad(format!("block_scale must be a positive range, got [{lo}, {hi}]"));
        }
        let (lo, hi) = self.noise_scale;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("noise_scale must be a finite range, got [{lo}, {hi}]"));
        }
        Ok(())
    }
}

/// Seed of trial `trial` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial
}

struct Sampler {
    rng: ChaCha8Rng,
    block_scale: (f64, f64),
    noise_scale: (f64, f64),
}

impl Sampler {
    fn new(spec: &GenSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            block_scale: spec.block_scale,
            noise_scale: spec.noise_scale,
        })
    }

    /// Haar-distributed orthogonal matrix from the QR of a Gaussian matrix.
    fn orthogonal(&mut self, d: usize) -> Matrix {
        let g = Matrix::from_fn(d, d, |_, _| self.rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for i in 0..d {
            if r[(i, i)] < 0.0 {
                q.column_mut(i).neg_mut();
            }
        }
        q
    }

    fn scalar(&mut self) -> f64 {
        let (lo, hi) = self.block_scale;
        self.rng.random_range(lo..=hi)
    }

    /// Positive diagonal, sorted descending.
    fn diagonal(&mut self, k: usize) -> Vec<f64> {
        let mut d: Vec<f64> = (0..k).map(|_| self.scalar()).collect();
        d.sort_by(|x, y| y.total_cmp(x));
        d
    }

    fn block(&mut self, r: usize, c: usize) -> Matrix {
        let (lo, hi) = self.noise_scale;
        Matrix::from_fn(r, c, |_, _| self.rng.random_range(lo..=hi))
    }

    fn fill(&mut self, grid: &mut BlockGrid, ks: &[usize]) {
        for &k in ks {
            let (r, c) = grid.block(k).shape();
            *grid.block_mut(k) = self.block(r, c);
        }
    }

    fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }
}

/// A pair assembled in a shared frame: `Â = U·diag(T₁,0,0)·Vᵀ + εU·A₀·Vᵀ`
/// and `B̂ = U·diag(T₁,T₂,0)·Vᵀ + εU·B₀·Vᵀ`.
#[derive(Clone, Debug)]
pub struct CanonicalPair {
    pub frame: StarDecomposition,
    pub a0: BlockGrid,
    pub b0: BlockGrid,
}

impl CanonicalPair {
    pub fn new(frame: StarDecomposition, a0: BlockGrid, b0: BlockGrid) -> Result<Self> {
        for g in [&a0, &b0] {
            if g.split_rows != frame.split_rows || g.split_cols != frame.split_cols {
                return Err(Error::Dimension {
                    op: "CanonicalPair::new",
                    left: (g.split_rows.iter().sum(), g.split_cols.iter().sum()),
                    right: frame.shape(),
                });
            }
        }
        Ok(Self { frame, a0, b0 })
    }

    pub fn lower(&self) -> DualMatrix {
        DualMatrix::from_parts(self.frame.lower(), self.frame.from_basis(&self.a0.assemble()))
    }

    pub fn upper(&self) -> DualMatrix {
        DualMatrix::from_parts(self.frame.upper(), self.frame.from_basis(&self.b0.assemble()))
    }

    pub fn pair(&self) -> (DualMatrix, DualMatrix) {
        (self.lower(), self.upper())
    }

    /// Blocks of `B₀` that the canonical forms tie to `A₀`, restricted to
    /// nonempty ones.
    pub fn coupled_blocks(&self) -> Vec<usize> {
        [1, 2, 3, 4, 7]
            .into_iter()
            .filter(|&k| !self.b0.block(k).is_empty())
            .collect()
    }

    /// Adds `delta` to one entry of a randomly chosen coupled block of `B₀`.
    /// Returns the block index, or `None` when every coupled block is empty.
    pub fn perturb_coupled(&mut self, delta: f64, seed: u64) -> Option<usize> {
        let blocks = self.coupled_blocks();
        if blocks.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = blocks[rng.random_range(0..blocks.len())];
        let blk = self.b0.block_mut(k);
        let (i, j) = (rng.random_range(0..blk.nrows()), rng.random_range(0..blk.ncols()));
        blk[(i, j)] += delta;
        Some(k)
    }
}

/// A triple `Â ≤ B̂ ≤ Ĉ` as two pairs sharing `B̂`.
#[derive(Clone, Debug)]
pub struct CanonicalChain {
    pub lower: CanonicalPair,
    pub upper: CanonicalPair,
}

impl CanonicalChain {
    pub fn triple(&self) -> (DualMatrix, DualMatrix, DualMatrix) {
        (self.lower.lower(), self.lower.upper(), self.upper.upper())
    }
}

/// `B₀` of the D-star canonical form: blocks 1, 3, 7 copied from `A₀`,
/// `B₂ = A₂ − T₁⁻¹A₄ᵀT₂`, `B₄ = A₄ − T₂A₂ᵀT₁⁻¹`, blocks 5, 6, 8 from `free`
/// and block 9 zero.
pub fn couple_d_star(frame: &StarDecomposition, a0: &BlockGrid, free: &BlockGrid) -> Result<BlockGrid> {
    let ti: Vec<f64> = frame.t1.iter().map(|t| 1.0 / t).collect();
    let t2 = &frame.t2;
    let mut b0 = couple_shared(frame, a0, free, &[1, 3, 7])?;
    let a2 = a0.block(2);
    let a4 = a0.block(4);
    b0.set_block(2, a2 - scale_cols(&scale_rows(&a4.transpose(), &ti), t2))?;
    b0.set_block(4, a4 - scale_cols(&scale_rows(&a2.transpose(), t2), &ti))?;
    Ok(b0)
}

/// `B₀` of the P-star canonical form: blocks 1, 2, 3, 4, 7 copied from `A₀`,
/// blocks 5, 6, 8 from `free` and block 9 zero.
pub fn couple_p_star(frame: &StarDecomposition, a0: &BlockGrid, free: &BlockGrid) -> Result<BlockGrid> {
    couple_shared(frame, a0, free, &[1, 2, 3, 4, 7])
}

fn couple_shared(frame: &StarDecomposition, a0: &BlockGrid, free: &BlockGrid, copied: &[usize]) -> Result<BlockGrid> {
    for g in [a0, free] {
        if g.split_rows != frame.split_rows || g.split_cols != frame.split_cols {
            return Err(Error::Dimension {
                op: "couple",
                left: (g.split_rows.iter().sum(), g.split_cols.iter().sum()),
                right: frame.shape(),
            });
        }
    }
    let mut b0 = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    for &k in copied {
        b0.set_block(k, a0.block(k).clone())?;
    }
    for k in [5, 6, 8] {
        b0.set_block(k, free.block(k).clone())?;
    }
    Ok(b0)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Coupling {
    DStar,
    PStar,
}

fn couple(kind: Coupling, frame: &StarDecomposition, a0: &BlockGrid, free: &BlockGrid) -> Result<BlockGrid> {
    match kind {
        Coupling::DStar => couple_d_star(frame, a0, free),
        Coupling::PStar => couple_p_star(frame, a0, free),
    }
}

fn draw_frame(s: &mut Sampler, spec: &GenSpec, t2_len: usize) -> Result<StarDecomposition> {
    let u = s.orthogonal(spec.m);
    let v = s.orthogonal(spec.n);
    let t1 = s.diagonal(spec.rank_a);
    let t2 = s.diagonal(t2_len);
    StarDecomposition::new(u, v, t1, t2)
}

/// Lower dual part with the DMPGI pattern: blocks 1, 2, 3, 4, 7 random.
fn draw_lower(s: &mut Sampler, frame: &StarDecomposition) -> BlockGrid {
    let mut a0 = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    s.fill(&mut a0, &[1, 2, 3, 4, 7]);
    a0
}

fn draw_free(s: &mut Sampler, frame: &StarDecomposition) -> BlockGrid {
    let mut free = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    s.fill(&mut free, &[5, 6, 8]);
    free
}

fn gen_pair(spec: &GenSpec, kind: Coupling) -> Result<CanonicalPair> {
    let mut s = Sampler::new(spec)?;
    let frame = draw_frame(&mut s, spec, spec.rank_b - spec.rank_a)?;
    let a0 = draw_lower(&mut s, &frame);
    let free = draw_free(&mut s, &frame);
    let b0 = couple(kind, &frame, &a0, &free)?;
    CanonicalPair::new(frame, a0, b0)
}

/// Random dual matrix of real rank `rank_a` whose DMPGI exists. Only
/// `m`, `n`, `rank_a` and the seed are used.
pub fn gen_dual_with_dmpgi(spec: &GenSpec) -> Result<DualMatrix> {
    Ok(dmpgi_frame(spec, false)?.lower())
}

/// As [`gen_dual_with_dmpgi`] but with a nonzero trailing dual block, so the
/// DMPGI is absent. Requires `rank_a < min(m, n)`.
pub fn gen_dual_without_dmpgi(spec: &GenSpec) -> Result<DualMatrix> {
    if spec.rank_a >= spec.m.min(spec.n) {
        return Err(Error::InvalidSpec(format!(
            "a matrix of full rank {} always has a DMPGI",
            spec.rank_a
        )));
    }
    Ok(dmpgi_frame(spec, true)?.lower())
}

fn dmpgi_frame(spec: &GenSpec, violate: bool) -> Result<CanonicalPair> {
    let base = GenSpec {
        rank_b: spec.rank_a,
        ..spec.clone()
    };
    let mut s = Sampler::new(&base)?;
    let frame = draw_frame(&mut s, &base, 0)?;
    let mut a0 = draw_lower(&mut s, &frame);
    if violate {
        let blk = a0.block_mut(9);
        let (r, c) = blk.shape();
        let (i, j) = (s.index(r), s.index(c));
        let magnitude = s.scalar();
        blk[(i, j)] = if s.rng.random::<bool>() { magnitude } else { -magnitude };
    }
    let b0 = a0.clone();
    CanonicalPair::new(frame, a0, b0)
}

/// Pair in the D-star canonical form.
pub fn gen_d_star_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    gen_pair(spec, Coupling::DStar)
}

/// Pair in the P-star canonical form.
pub fn gen_p_star_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    gen_pair(spec, Coupling::PStar)
}

/// Pair in both the D-star and the P-star order (`A₂ = A₄ = 0`).
pub fn gen_both_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    let mut s = Sampler::new(spec)?;
    let frame = draw_frame(&mut s, spec, spec.rank_b - spec.rank_a)?;
    let mut a0 = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    s.fill(&mut a0, &[1, 3, 7]);
    let free = draw_free(&mut s, &frame);
    let b0 = couple_d_star(&frame, &a0, &free)?;
    CanonicalPair::new(frame, a0, b0)
}

/// Pair in the P-order canonical form: blocks 5, 6, 8, 9 of both dual parts
/// are free, so DMPGIs are generally absent.
pub fn gen_p_order_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    let mut s = Sampler::new(spec)?;
    let frame = draw_frame(&mut s, spec, spec.rank_b - spec.rank_a)?;
    let mut a0 = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    s.fill(&mut a0, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    let mut b0 = BlockGrid::zeros(frame.split_rows, frame.split_cols);
    for k in [1, 2, 3, 4, 7] {
        b0.set_block(k, a0.block(k).clone())?;
    }
    s.fill(&mut b0, &[5, 6, 8, 9]);
    CanonicalPair::new(frame, a0, b0)
}

fn tied_frame(s: &mut Sampler, spec: &GenSpec) -> Result<StarDecomposition> {
    let u = s.orthogonal(spec.m);
    let v = s.orthogonal(spec.n);
    let t = s.scalar();
    StarDecomposition::new(u, v, vec![t; spec.rank_a], vec![t; spec.rank_b - spec.rank_a])
}

/// D-star pair whose MPDGIs are also D-star ordered: `T₁ = T₂ = tI` and
/// `A₄ = A₂ᵀ`, which makes `B₂ = B₄ = 0`.
pub fn gen_mpdgi_d_star_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    tied_pair(spec, Coupling::DStar, 1.0)
}

/// P-star pair whose DMPGIs are also P-star ordered: `T₁ = T₂ = tI` and
/// `A₄ = −A₂ᵀ`.
pub fn gen_dmpgi_p_star_pair(spec: &GenSpec) -> Result<CanonicalPair> {
    tied_pair(spec, Coupling::PStar, -1.0)
}

fn tied_pair(spec: &GenSpec, kind: Coupling, sign: f64) -> Result<CanonicalPair> {
    let mut s = Sampler::new(spec)?;
    let frame = tied_frame(&mut s, spec)?;
    let mut a0 = draw_lower(&mut s, &frame);
    let a4 = a0.block(2).transpose() * sign;
    a0.set_block(4, a4)?;
    let free = draw_free(&mut s, &frame);
    let b0 = couple(kind, &frame, &a0, &free)?;
    CanonicalPair::new(frame, a0, b0)
}

fn gen_chain(spec: &GenSpec, rank_c: usize, kind: Coupling) -> Result<CanonicalChain> {
    if rank_c < spec.rank_b || rank_c > spec.m.min(spec.n) {
        return Err(Error::InvalidSpec(format!(
            "chain ranks must satisfy a ≤ b ≤ c ≤ min(m, n), got a={}, b={}, c={rank_c} for {}x{}",
            spec.rank_a, spec.rank_b, spec.m, spec.n
        )));
    }
    let mut s = Sampler::new(spec)?;
    let u = s.orthogonal(spec.m);
    let v = s.orthogonal(spec.n);
    let t1 = s.diagonal(spec.rank_a);
    let t2 = s.diagonal(spec.rank_b - spec.rank_a);
    let t3 = s.diagonal(rank_c - spec.rank_b);
    let t12: Vec<f64> = t1.iter().chain(&t2).copied().collect();
    let fine = StarDecomposition::new(u.clone(), v.clone(), t1, t2)?;
    let coarse = StarDecomposition::new(u, v, t12, t3)?;

    let a0 = draw_lower(&mut s, &fine);
    let free = draw_free(&mut s, &fine);
    let b0 = couple(kind, &fine, &a0, &free)?;

    let b0_coarse = BlockGrid::from_basis(&b0.assemble(), coarse.split_rows, coarse.split_cols)?;
    let free = draw_free(&mut s, &coarse);
    let c0 = couple(kind, &coarse, &b0_coarse, &free)?;
    Ok(CanonicalChain {
        lower: CanonicalPair::new(fine, a0, b0)?,
        upper: CanonicalPair::new(coarse, b0_coarse, c0)?,
    })
}

/// Chain `Â ≤ B̂ ≤ Ĉ` under the D-star order with ranks `a ≤ b ≤ rank_c`.
pub fn gen_d_star_chain(spec: &GenSpec, rank_c: usize) -> Result<CanonicalChain> {
    gen_chain(spec, rank_c, Coupling::DStar)
}

/// Chain `Â ≤ B̂ ≤ Ĉ` under the P-star order.
pub fn gen_p_star_chain(spec: &GenSpec, rank_c: usize) -> Result<CanonicalChain> {
    gen_chain(spec, rank_c, Coupling::PStar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Tolerances;
    use crate::fixtures;
    use crate::ginv;
    use crate::orders;

    fn tol() -> Tolerances {
        Tolerances::with_eq(1e-8)
    }

    fn identity_frame(t1: Vec<f64>, t2: Vec<f64>) -> StarDecomposition {
        StarDecomposition::new(Matrix::identity(3, 3), Matrix::identity(3, 3), t1, t2).unwrap()
    }

    #[test]
    fn d_star_coupling_reproduces_f8() {
        let frame = identity_frame(vec![1.0], vec![2.0]);
        let a0 = frame.to_blocks(fixtures::f6().dual()).unwrap();
        let mut free = BlockGrid::zeros(frame.split_rows, frame.split_cols);
        free.set_block(5, Matrix::from_element(1, 1, -2.0)).unwrap();
        free.set_block(6, Matrix::from_element(1, 1, -1.0)).unwrap();
        free.set_block(8, Matrix::from_element(1, 1, -3.0)).unwrap();
        let b0 = couple_d_star(&frame, &a0, &free).unwrap();
        let pair = CanonicalPair::new(frame, a0, b0).unwrap();
        let (a, b) = pair.pair();
        assert_eq!(a, fixtures::f6());
        assert_eq!(b, fixtures::f8());
    }

    #[test]
    fn p_star_coupling_reproduces_f4_and_f7() {
        let frame = identity_frame(vec![1.0], vec![1.0]);
        let a0 = frame.to_blocks(fixtures::f3().dual()).unwrap();
        let mut free = BlockGrid::zeros(frame.split_rows, frame.split_cols);
        free.set_block(5, Matrix::from_element(1, 1, 1.0)).unwrap();
        let b0 = couple_p_star(&frame, &a0, &free).unwrap();
        assert_eq!(CanonicalPair::new(frame, a0, b0).unwrap().upper(), fixtures::f4());

        let frame = identity_frame(vec![1.0], vec![2.0]);
        let a0 = frame.to_blocks(fixtures::f6().dual()).unwrap();
        let free = frame.to_blocks(fixtures::f7().dual()).unwrap();
        let b0 = couple_p_star(&frame, &a0, &free).unwrap();
        assert_eq!(CanonicalPair::new(frame, a0, b0).unwrap().upper(), fixtures::f7());
    }

    #[test]
    fn generators_are_deterministic() {
        let spec = GenSpec::new(5, 4, 2, 3, 11);
        assert_eq!(gen_d_star_pair(&spec).unwrap().pair(), gen_d_star_pair(&spec).unwrap().pair());
        assert_ne!(
            gen_d_star_pair(&spec).unwrap().pair(),
            gen_d_star_pair(&spec.clone().with_seed(12)).unwrap().pair()
        );
    }

    #[test]
    fn dmpgi_generator_and_negative_control() {
        let x = gen_dual_with_dmpgi(&GenSpec::new(2, 2, 1, 1, 7)).unwrap();
        assert!(ginv::has_dmpgi(&x, &tol()).unwrap());
        let y = gen_dual_without_dmpgi(&GenSpec::new(3, 3, 1, 1, 42)).unwrap();
        assert!(!ginv::has_dmpgi(&y, &tol()).unwrap());
        assert!(gen_dual_without_dmpgi(&GenSpec::new(3, 3, 3, 3, 1)).is_err());
        let z = gen_dual_with_dmpgi(&GenSpec::new(3, 4, 0, 0, 1).with_noise_scale(0.0, 0.0)).unwrap();
        assert_eq!(z, DualMatrix::zeros(3, 4));
    }

    #[test]
    fn generated_pairs_satisfy_their_order() {
        for seed in 0..20 {
            let spec = GenSpec::new(5, 4, 1 + (seed as usize % 2), 3, seed);
            let (a, b) = gen_d_star_pair(&spec).unwrap().pair();
            assert!(orders::d_star_leq(&a, &b, &tol()).unwrap().holds, "seed {seed}");
            let (a, b) = gen_p_star_pair(&spec).unwrap().pair();
            assert!(orders::p_star_leq(&a, &b, &tol()).unwrap().holds, "seed {seed}");
            let (a, b) = gen_both_pair(&spec).unwrap().pair();
            assert!(orders::d_star_leq(&a, &b, &tol()).unwrap().holds);
            assert!(orders::p_star_leq(&a, &b, &tol()).unwrap().holds);
            let (a, b) = gen_p_order_pair(&spec).unwrap().pair();
            assert!(orders::p_order_leq(&a, &b, &tol()).unwrap().holds);
        }
    }

    #[test]
    fn tied_pairs_order_their_inverses() {
        let tol = tol();
        for seed in 0..10 {
            let spec = GenSpec::new(4, 5, 2, 3, seed);
            let (a, b) = gen_mpdgi_d_star_pair(&spec).unwrap().pair();
            let (ap, bp) = (ginv::mpdgi_value(&a, &tol).unwrap(), ginv::mpdgi_value(&b, &tol).unwrap());
            assert!(orders::d_star_leq(&ap, &bp, &tol).unwrap().holds);
            let (a, b) = gen_dmpgi_p_star_pair(&spec).unwrap().pair();
            assert!(orders::p_star_leq(&a, &b, &tol).unwrap().holds);
            let ai = ginv::dmpgi_value(&a, &tol).unwrap().unwrap();
            let bi = ginv::dmpgi_value(&b, &tol).unwrap().unwrap();
            assert!(orders::p_star_leq(&ai, &bi, &tol).unwrap().holds);
        }
    }

    #[test]
    fn chains_are_transitive() {
        let tol = tol();
        for seed in 0..10 {
            let spec = GenSpec::new(4, 4, 1, 2, seed);
            let (a, b, c) = gen_d_star_chain(&spec, 3).unwrap().triple();
            assert!(orders::d_star_leq(&a, &b, &tol).unwrap().holds);
            assert!(orders::d_star_leq(&b, &c, &tol).unwrap().holds);
            assert!(orders::d_star_leq(&a, &c, &tol).unwrap().holds);
            let (a, b, c) = gen_p_star_chain(&spec, 4).unwrap().triple();
            assert!(orders::p_star_leq(&a, &b, &tol).unwrap().holds);
            assert!(orders::p_star_leq(&b, &c, &tol).unwrap().holds);
            assert!(orders::p_star_leq(&a, &c, &tol).unwrap().holds);
        }
        assert!(gen_d_star_chain(&GenSpec::new(4, 4, 1, 2, 0), 1).is_err());
        assert!(gen_d_star_chain(&GenSpec::new(4, 4, 1, 2, 0), 5).is_err());
    }

    #[test]
    fn perturbation_breaks_the_order() {
        let mut pair = gen_d_star_pair(&GenSpec::new(4, 4, 1, 3, 3)).unwrap();
        assert!(pair.perturb_coupled(0.1, 9).is_some());
        let (a, b) = pair.pair();
        assert!(!orders::d_star_leq(&a, &b, &tol()).unwrap().holds);
        let mut empty = gen_d_star_pair(&GenSpec::new(3, 3, 0, 2, 3)).unwrap();
        assert_eq!(empty.perturb_coupled(0.1, 9), None);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(GenSpec::new(0, 3, 0, 0, 1).validate().is_err());
        assert!(GenSpec::new(3, 3, 2, 1, 1).validate().is_err());
        assert!(GenSpec::new(3, 2, 1, 3, 1).validate().is_err());
        assert!(GenSpec::new(3, 3, 1, 2, 1).with_block_scale(0.0, 1.0).validate().is_err());
        assert!(GenSpec::new(3, 3, 1, 2, 1).with_noise_scale(1.0, -1.0).validate().is_err());
        assert!(matches!(gen_d_star_pair(&GenSpec::new(3, 3, 2, 1, 1)), Err(Error::InvalidSpec(_))));
    }
}

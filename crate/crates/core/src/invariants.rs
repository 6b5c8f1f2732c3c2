//! Presentations `Q/I` with `I ⊆ 𝔫²`, and the numerical invariants the
//! classifier consumes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{binomial, InvariantBundle};
use crate::error::{Error, Result};
use crate::field::{CoefficientField, Field};
use crate::groebner::{buchberger, colon_equals};
use crate::poly::{PolyRing, Polynomial, Ring};
use crate::resolution::{
    ext_dimension, hilbert_data, min_resolution_over_q, resolve_residue_field, GradedComplex, QuotientRing,
    ResidueResolution,
};

/// `Q/I` with `I` minimally generated by forms of degree at least two, so
/// that the embedding dimension is the number of variables.
#[derive(Clone, Debug)]
pub struct PresentedRing<F: Field> {
    ring: Ring<F>,
    generators: Vec<Polynomial<F>>,
}

/// Outcome of presenting a quotient.
#[derive(Clone, Debug)]
pub enum Presentation<F: Field> {
    /// `I` is the unit ideal.
    ZeroRing,
    Ring(PresentedRing<F>),
}

impl<F: Field> PresentedRing<F> {
    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn embedding_dimension(&self) -> u32 {
        self.ring.nvars() as u32
    }

    /// True when `I = 0`.
    pub fn is_regular(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn quotient(&self) -> Result<QuotientRing<F>> {
        QuotientRing::new(&self.ring, &self.generators)
    }
}

/// Replaces variable `i` by `images[i]`.
fn substitute<F: Field>(p: &Polynomial<F>, target: &Ring<F>, images: &[Polynomial<F>]) -> Polynomial<F> {
    let mut out = Polynomial::zero(target);
    for t in p.terms() {
        let mut acc = Polynomial::constant(target, t.coeff.clone());
        for (i, &e) in t.mono.exps().iter().enumerate() {
            if e > 0 {
                acc = &acc * &images[i].pow(e as u32);
            }
        }
        out = &out + &acc;
    }
    out
}

/// Linear forms as coefficient rows, brought to reduced row echelon form
/// with the pivot in the lowest-index column. Returns `(pivot, row)` pairs.
fn linear_rref<F: Field>(field: &F, nvars: usize, forms: &[&Polynomial<F>]) -> Vec<(usize, Vec<F::Elem>)> {
    let mut rows: Vec<Vec<F::Elem>> = forms
        .iter()
        .map(|f| {
            let mut row = vec![field.zero(); nvars];
            for t in f.terms() {
                let i = t.mono.exps().iter().position(|&e| e == 1).expect("linear term");
                row[i] = t.coeff.clone();
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..nvars {
        let Some(k) = (next..rows.len()).find(|&k| !field.is_zero(&rows[k][col])) else {
            continue;
        };
        rows.swap(next, k);
        let inv = field.inv(&rows[next][col]);
        for x in rows[next].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for k in 0..rows.len() {
            if k != next && !field.is_zero(&rows[k][col]) {
                let factor = rows[k][col].clone();
                let pivot = rows[next].clone();
                for (entry, p) in rows[k].iter_mut().zip(&pivot) {
                    let sub = field.mul(&factor, p);
                    *entry = field.sub(entry, &sub);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots.into_iter().zip(rows).collect()
}

/// Eliminates the pivot variables of the given linear relations
/// `x_pivot = -Σ row[k] x_k`, returning the smaller ring and the images of
/// `gens` in it.
fn eliminate<F: Field>(
    ring: &Ring<F>,
    relations: &[(usize, Vec<F::Elem>)],
    gens: &[Polynomial<F>],
) -> (Ring<F>, Vec<Polynomial<F>>) {
    let field = ring.field();
    let n = ring.nvars();
    let is_pivot: Vec<bool> = (0..n).map(|i| relations.iter().any(|(p, _)| *p == i)).collect();
    let kept: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
    let target = PolyRing::new(
        field.clone(),
        kept.iter().map(|&i| ring.vars()[i].clone()),
        ring.order(),
    );
    let new_index = |i: usize| kept.iter().position(|&k| k == i).expect("kept variable");
    let images: Vec<Polynomial<F>> = (0..n)
        .map(|i| match relations.iter().find(|(p, _)| *p == i) {
            None => Polynomial::var(&target, new_index(i)),
            Some((_, row)) => {
                let mut img = Polynomial::zero(&target);
                for (k, c) in row.iter().enumerate() {
                    if k != i && !field.is_zero(c) {
                        img = &img - &Polynomial::var(&target, new_index(k)).scale(c);
                    }
                }
                img
            }
        })
        .collect();
    let gens = gens
        .iter()
        .map(|g| substitute(g, &target, &images))
        .filter(|g| !g.is_zero())
        .collect();
    (target, gens)
}

/// Keeps a minimal subset of homogeneous generators, scanning by degree.
fn minimal_generators<F: Field>(ring: &Ring<F>, mut gens: Vec<Polynomial<F>>) -> Result<Vec<Polynomial<F>>> {
    gens.sort_by_key(|g| g.total_degree().unwrap_or(0));
    let mut kept: Vec<Polynomial<F>> = Vec::new();
    for g in gens {
        if !kept.is_empty() && buchberger(ring, &kept)?.contains(&g) {
            continue;
        }
        kept.push(g);
    }
    Ok(kept)
}

/// Brings `Q/I` into the form `Q'/I'` with `I' ⊆ 𝔫'²` minimally generated.
pub fn presented_ring<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>]) -> Result<Presentation<F>> {
    for g in gens {
        if !g.is_homogeneous() {
            return Err(Error::NonHomogeneous(g.to_string()));
        }
    }
    let gens: Vec<Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(Presentation::ZeroRing);
    }
    let linear: Vec<&Polynomial<F>> = gens.iter().filter(|g| g.total_degree() == Some(1)).collect();
    let relations = linear_rref(ring.field(), ring.nvars(), &linear);
    let higher: Vec<Polynomial<F>> = gens.iter().filter(|g| g.total_degree() != Some(1)).cloned().collect();
    let (ring, higher) = if relations.is_empty() {
        (ring.clone(), higher)
    } else {
        eliminate(ring, &relations, &higher)
    };
    let generators = minimal_generators(&ring, higher)?;
    Ok(Presentation::Ring(PresentedRing { ring, generators }))
}

/// The invariants read off the minimal resolution of `R` over `Q`.
#[derive(Clone, Debug)]
pub struct BasicInvariants<F: Field> {
    pub bundle: InvariantBundle,
    pub resolution: GradedComplex<F>,
}

/// `c, e, h, l, n, m` from the minimal `Q`-resolution and Hilbert series.
pub fn basic_invariants<F: Field>(ring: &PresentedRing<F>) -> Result<BasicInvariants<F>> {
    let complex = min_resolution_over_q(&ring.ring, &ring.generators)?;
    let ranks = complex.ranks();
    let c = (ranks.len() - 1) as u32;
    let e = ring.embedding_dimension();
    let hd = hilbert_data(&complex, e as usize);
    let depth = e - c;
    let m = ranks.get(1).copied().unwrap_or(0) as u64;
    let bundle = InvariantBundle {
        c,
        e,
        h: hd.krull_dimension as u32 - depth,
        l: m as i64 - 1,
        n: ranks[c as usize] as u64,
        m,
        ..Default::default()
    };
    Ok(BasicInvariants {
        bundle,
        resolution: complex,
    })
}

/// Settings for generic reduction modulo a regular sequence of linear forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionConfig {
    /// Gives `attempts²` tries in total.
    pub attempts: u32,
    pub seed: u64,
    /// Coefficients over the rationals are drawn from `[-bound, bound]`.
    pub rational_bound: i64,
}

pub const DEFAULT_ATTEMPTS: u32 = 25;
pub const DEFAULT_SEED: u64 = 0;

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            attempts: DEFAULT_ATTEMPTS,
            seed: DEFAULT_SEED,
            rational_bound: 7,
        }
    }
}

impl ReductionConfig {
    pub fn new(attempts: u32, seed: u64) -> Result<Self> {
        if attempts == 0 {
            return Err(Error::InvalidAttempts);
        }
        Ok(ReductionConfig {
            attempts,
            seed,
            ..Default::default()
        })
    }

    pub fn tries(&self) -> u64 {
        u64::from(self.attempts) * u64::from(self.attempts)
    }
}

fn random_coefficient<F: Field>(field: &F, rng: &mut ChaCha8Rng, bound: i64) -> F::Elem {
    match field.descriptor() {
        CoefficientField::Rationals => field.from_i64(rng.gen_range(-bound..=bound)),
        CoefficientField::Prime(p) => field.from_i64(rng.gen_range(0..i64::from(p))),
    }
}

/// One draw of a whole sequence; `None` when some form fails.
fn try_reduction<F: Field>(
    ring: &PresentedRing<F>,
    length: u32,
    rng: &mut ChaCha8Rng,
    bound: i64,
) -> Result<Option<PresentedRing<F>>> {
    let mut current = ring.clone();
    for _ in 0..length {
        let r = &current.ring;
        let field = r.field();
        let coeffs: Vec<F::Elem> = (0..r.nvars()).map(|_| random_coefficient(field, rng, bound)).collect();
        let Some(pivot) = coeffs.iter().position(|c| !field.is_zero(c)) else {
            return Ok(None);
        };
        let form = coeffs.iter().enumerate().fold(Polynomial::zero(r), |acc, (i, c)| {
            &acc + &Polynomial::var(r, i).scale(c)
        });
        if !current.generators.is_empty() && !colon_equals(r, &current.generators, &form)? {
            return Ok(None);
        }
        let inv = field.inv(&coeffs[pivot]);
        let row: Vec<F::Elem> = coeffs.iter().map(|c| field.mul(c, &inv)).collect();
        let (smaller, gens) = eliminate(r, &[(pivot, row)], &current.generators);
        let Presentation::Ring(next) = presented_ring(&smaller, &gens)? else {
            return Ok(None);
        };
        if next.embedding_dimension() + 1 != current.embedding_dimension() {
            return Ok(None);
        }
        current = next;
    }
    Ok(Some(current))
}

/// `R/(ℓ_1, …, ℓ_length)` for random linear forms forming a regular
/// sequence, each eliminating one variable.
pub fn generic_reduction<F: Field>(
    ring: &PresentedRing<F>,
    length: u32,
    cfg: &ReductionConfig,
) -> Result<PresentedRing<F>> {
    if length == 0 {
        return Ok(ring.clone());
    }
    if cfg.attempts == 0 {
        return Err(Error::InvalidAttempts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.tries() {
        if let Some(reduced) = try_reduction(ring, length, &mut rng, cfg.rational_bound)? {
            return Ok(reduced);
        }
    }
    Err(Error::ReductionFailed {
        attempts: cfg.attempts,
        tries: cfg.tries(),
    })
}

/// A resolution of `k` over an Artinian-or-depth-zero ring together with
/// what is needed to read off Bass numbers.
pub struct ResidueData<F: Field> {
    resolution: ResidueResolution<F>,
    regularity: i64,
}

impl<F: Field> ResidueData<F> {
    /// Resolves `k` over `R` to `steps` and prepares ring tables for
    /// `Ext^i(k, R)` with `i < steps`.
    pub fn new(ring: &PresentedRing<F>, steps: usize) -> Result<Self> {
        let regularity = i64::from(min_resolution_over_q(&ring.ring, &ring.generators)?.regularity()).max(0);
        let mut res = resolve_residue_field(ring.quotient()?, steps)?;
        let top_gen = (0..=steps)
            .flat_map(|i| res.generator_degrees(i).iter().copied())
            .max()
            .unwrap_or(0) as i64;
        res.ring_mut().ensure_degree((regularity + top_gen) as usize);
        Ok(ResidueData {
            resolution: res,
            regularity,
        })
    }

    pub fn betti_numbers(&self) -> Vec<u64> {
        self.resolution.betti_numbers()
    }

    /// `μ_i = dim_k Ext^i(k, R)`, for `i < steps`.
    pub fn bass_number(&self, i: usize) -> Result<u64> {
        ext_dimension(&self.resolution, i, self.regularity - i as i64)
    }

    pub fn resolution(&self) -> &ResidueResolution<F> {
        &self.resolution
    }
}

/// `β_i(R)` from `β_i(R/(x))` for a regular sequence `x` of linear forms of
/// length `d`: the Poincaré series gains a factor `(1+t)^d`.
pub fn lift_betti_numbers(reduced: &[u64], d: u32) -> Vec<u64> {
    (0..reduced.len())
        .map(|i| {
            (0..=i.min(d as usize))
                .map(|k| binomial(d as i64, k as i64) as u64 * reduced[i - k])
                .sum()
        })
        .collect()
}

/// Depth-zero model of a ring: itself when Artinian-like (`d = 0`), or a
/// generic reduction otherwise.
pub fn depth_zero_model<F: Field>(
    ring: &PresentedRing<F>,
    bundle: &InvariantBundle,
    cfg: &ReductionConfig,
) -> Result<PresentedRing<F>> {
    generic_reduction(ring, bundle.depth(), cfg)
}

/// `β_0 … β_{len-1}` of `R`, computed on a depth-zero model.
pub fn betti_numbers<F: Field>(model: &PresentedRing<F>, depth: u32, len: usize) -> Result<Vec<u64>> {
    let data = ResidueData::new(model, len.saturating_sub(1))?;
    Ok(lift_betti_numbers(&data.betti_numbers(), depth))
}

/// `μ_d … μ_{d+len-1}` of `R`, from a depth-zero model `R/(x)`.
pub fn bass_numbers<F: Field>(model: &PresentedRing<F>, len: usize) -> Result<Vec<u64>> {
    let data = ResidueData::new(model, len)?;
    (0..len).map(|i| data.bass_number(i)).collect()
}

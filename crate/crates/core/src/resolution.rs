//! Graded free resolutions over a polynomial ring and over a quotient of it.
//!
//! Resolutions over `Q` are built by repeated syzygy computations followed by
//! cancellation of unit entries. Resolutions of the residue field over
//! `R = Q/I` are built degree by degree with linear algebra on the graded
//! pieces of `R`, which are spanned by standard monomials of a Gröbner basis.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger, syzygies_twisted, GroebnerBasis, ModuleVector, DEFAULT_STEP_LIMIT};
use crate::linalg::{Echelon, Insertion, SparseVec};
use crate::poly::{Monomial, Polynomial, Ring};

/// A graded free module, described by the degrees of its basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedFreeModule {
    pub twists: Vec<i32>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i32>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }
}

/// A homogeneous map of graded free modules, stored by columns: column `j`
/// is the image of the `j`-th basis element of the source.
#[derive(Clone, Debug)]
pub struct GradedMatrix<F: Field> {
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    pub columns: Vec<ModuleVector<F>>,
}

impl<F: Field> GradedMatrix<F> {
    pub fn entry(&self, row: usize, col: usize) -> &Polynomial<F> {
        &self.columns[col].components()[row]
    }

    /// True when every nonzero entry `(i, j)` is homogeneous of degree
    /// `source[j] - target[i]`.
    pub fn is_homogeneous(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            col.components().iter().enumerate().all(|(i, p)| {
                let want = self.source.twists[j] - self.target.twists[i];
                p.terms().iter().all(|t| t.mono.degree() as i32 == want)
            })
        })
    }

    /// True when no entry is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.columns
            .iter()
            .all(|c| c.components().iter().all(|p| p.is_zero() || !p.is_constant()))
    }
}

/// A chain complex `F_0 <- F_1 <- ... <- F_len` of graded free modules;
/// `maps[k]` is the differential `F_{k+1} -> F_k`.
#[derive(Clone, Debug)]
pub struct GradedComplex<F: Field> {
    pub ring: Ring<F>,
    pub modules: Vec<GradedFreeModule>,
    pub maps: Vec<GradedMatrix<F>>,
}

impl<F: Field> GradedComplex<F> {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(GradedFreeModule::rank).collect()
    }

    pub fn module(&self, i: usize) -> &GradedFreeModule {
        &self.modules[i]
    }

    /// Checks `d_k ∘ d_{k+1} = 0` for all `k`, entrywise modulo `ideal` when
    /// the complex lives over a quotient ring.
    pub fn compositions_vanish(&self, ideal: Option<&GroebnerBasis<F>>) -> bool {
        for k in 1..self.maps.len() {
            let (lower, upper) = (&self.maps[k - 1], &self.maps[k]);
            for col in &upper.columns {
                let image =
                    ModuleVector::combination(&self.ring, lower.target.rank(), col.components(), &lower.columns);
                let vanishes = image.components().iter().all(|p| match ideal {
                    Some(g) => g.normal_form(p).is_zero(),
                    None => p.is_zero(),
                });
                if !vanishes {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(GradedMatrix::is_minimal)
    }

    /// Largest `t - i` over twists `t` of `F_i`: the regularity when the
    /// complex is a minimal resolution.
    pub fn regularity(&self) -> i32 {
        self.modules
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.twists.iter().map(move |t| t - i as i32))
            .max()
            .unwrap_or(0)
    }

    fn from_modules(ring: &Ring<F>, modules: Vec<GradedFreeModule>, columns: Vec<Vec<ModuleVector<F>>>) -> Self {
        let maps = columns
            .into_iter()
            .enumerate()
            .map(|(k, cols)| GradedMatrix {
                source: modules[k + 1].clone(),
                target: modules[k].clone(),
                columns: cols,
            })
            .collect();
        GradedComplex {
            ring: ring.clone(),
            modules,
            maps,
        }
    }
}

/// Cancels unit entries until none remain. Entries are reduced modulo
/// `ideal` when one is supplied.
pub fn minimalize<F: Field>(complex: &GradedComplex<F>, ideal: Option<&GroebnerBasis<F>>) -> GradedComplex<F> {
    let ring = complex.ring.clone();
    let field = ring.field().clone();
    let mut modules = complex.modules.clone();
    // cols[k][j][i]: entry (i, j) of d_{k+1}
    let mut cols: Vec<Vec<Vec<Polynomial<F>>>> = complex
        .maps
        .iter()
        .map(|m| m.columns.iter().map(|c| c.components().to_vec()).collect())
        .collect();
    let reduce = |p: Polynomial<F>| match ideal {
        Some(g) => g.normal_form(&p),
        None => p,
    };
    loop {
        let mut found = None;
        'search: for (k, map) in cols.iter().enumerate() {
            for (b, col) in map.iter().enumerate() {
                for (a, p) in col.iter().enumerate() {
                    if !p.is_zero() && p.is_constant() {
                        found = Some((k, a, b));
                        break 'search;
                    }
                }
            }
        }
        let Some((k, a, b)) = found else { break };
        let unit = cols[k][b][a].leading_coeff().cloned().expect("nonzero");
        let inv = field.inv(&unit);
        // d' = eps - gamma * phi^{-1} * delta on the complement of (a, b).
        let pivot_col: Vec<Polynomial<F>> = cols[k][b].iter().map(|p| p.scale(&inv)).collect();
        let map = &mut cols[k];
        for (j, col) in map.iter_mut().enumerate() {
            if j == b || col[a].is_zero() {
                continue;
            }
            let delta = col[a].clone();
            for (i, entry) in col.iter_mut().enumerate() {
                if i == a || pivot_col[i].is_zero() {
                    continue;
                }
                *entry = reduce(&*entry - &(&pivot_col[i] * &delta));
            }
        }
        map.remove(b);
        for col in map.iter_mut() {
            col.remove(a);
        }
        if k > 0 {
            cols[k - 1].remove(a);
        }
        if k + 1 < cols.len() {
            for col in cols[k + 1].iter_mut() {
                col.remove(b);
            }
        }
        modules[k].twists.remove(a);
        modules[k + 1].twists.remove(b);
    }
    let columns = cols
        .into_iter()
        .map(|map| {
            map.into_iter()
                .map(|c| ModuleVector::new(&ring, c).expect("same ring"))
                .collect()
        })
        .collect();
    GradedComplex::from_modules(&ring, modules, columns)
}

/// Minimal graded free resolution of `Q/I` over `Q`, for a homogeneous ideal
/// given by generators.
pub fn min_resolution_over_q<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>]) -> Result<GradedComplex<F>> {
    let gens: Vec<&Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut modules = vec![GradedFreeModule::new(vec![0])];
    let mut columns: Vec<Vec<ModuleVector<F>>> = Vec::new();
    if !gens.is_empty() {
        let twists = gens.iter().map(|g| g.total_degree().expect("nonzero") as i32).collect();
        modules.push(GradedFreeModule::new(twists));
        columns.push(
            gens.iter()
                .map(|g| ModuleVector::new(ring, vec![(*g).clone()]))
                .collect::<Result<_>>()?,
        );
    }
    let mut complex = minimalize(&GradedComplex::from_modules(ring, modules, columns), None);
    while let Some(last) = complex.maps.last() {
        if last.columns.is_empty() {
            break;
        }
        let syz = syzygies_twisted(ring, &last.columns, &last.target.twists, DEFAULT_STEP_LIMIT)?;
        if syz.is_empty() {
            break;
        }
        let source_twists = &last.source.twists;
        let twists = syz
            .iter()
            .map(|s| s.degree(source_twists).expect("homogeneous syzygy"))
            .collect();
        let mut modules = complex.modules.clone();
        modules.push(GradedFreeModule::new(twists));
        let mut columns: Vec<Vec<ModuleVector<F>>> = complex.maps.iter().map(|m| m.columns.clone()).collect();
        columns.push(syz);
        complex = minimalize(&GradedComplex::from_modules(ring, modules, columns), None);
        if complex.modules.last().is_some_and(|m| m.rank() == 0) {
            complex.modules.pop();
            complex.maps.pop();
            break;
        }
    }
    Ok(complex)
}

/// Hilbert series numerator and the dimension data it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// `K(t)`, lowest degree first.
    pub numerator: Vec<i64>,
    pub nvars: usize,
    pub krull_dimension: usize,
    /// Multiplicity of `(1 - t)` as a factor of `K(t)`.
    pub one_minus_t_multiplicity: usize,
}

/// Reads `K(t) = Σ (-1)^i Σ t^{twist}` off a graded free resolution over `Q`.
pub fn hilbert_data<F: Field>(complex: &GradedComplex<F>, nvars: usize) -> HilbertData {
    let top = complex
        .modules
        .iter()
        .flat_map(|m| m.twists.iter().copied())
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let mut k = vec![0i64; top + 1];
    for (i, m) in complex.modules.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for &t in &m.twists {
            k[t as usize] += sign;
        }
    }
    while k.len() > 1 && k.last() == Some(&0) {
        k.pop();
    }
    let numerator = k.clone();
    let mut mult = 0;
    while k.iter().any(|&c| c != 0) && k.iter().sum::<i64>() == 0 {
        // K = (1 - t) Q with q_i = k_0 + ... + k_i.
        let mut q = Vec::with_capacity(k.len() - 1);
        let mut acc = 0;
        for &c in &k[..k.len() - 1] {
            acc += c;
            q.push(acc);
        }
        k = q;
        mult += 1;
    }
    HilbertData {
        numerator,
        nvars,
        krull_dimension: nvars.saturating_sub(mult),
        one_minus_t_multiplicity: mult,
    }
}

/// Graded pieces of `R = Q/I`, spanned by standard monomials, with normal
/// forms of every monomial up to a degree limit.
#[derive(Clone, Debug)]
pub struct QuotientRing<F: Field> {
    ring: Ring<F>,
    ideal: GroebnerBasis<F>,
    leads: Vec<Monomial>,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    reducible: Vec<HashMap<Monomial, SparseVec<F::Elem>>>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(ring: &Ring<F>, gens: &[Polynomial<F>]) -> Result<Self> {
        let ideal = buchberger(ring, gens)?;
        Ok(Self::from_basis(ideal))
    }

    pub fn from_basis(ideal: GroebnerBasis<F>) -> Self {
        let leads = ideal.leading_monomials();
        let mut qr = QuotientRing {
            ring: ideal.ring().clone(),
            ideal,
            leads,
            bases: Vec::new(),
            index: Vec::new(),
            reducible: Vec::new(),
        };
        qr.ensure_degree(0);
        qr
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn ideal(&self) -> &GroebnerBasis<F> {
        &self.ideal
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Largest degree of a leading monomial of the Gröbner basis, at least 2.
    pub fn max_lead_degree(&self) -> u32 {
        self.leads.iter().map(Monomial::degree).max().unwrap_or(0).max(2)
    }

    pub fn degree_limit(&self) -> usize {
        self.bases.len() - 1
    }

    /// Extends the tables to cover every degree up to `k`.
    pub fn ensure_degree(&mut self, k: usize) {
        let n = self.ring.nvars();
        while self.bases.len() <= k {
            let d = self.bases.len() as u32;
            let all = Monomial::all_of_degree(n, d);
            let (standard, other): (Vec<Monomial>, Vec<Monomial>) =
                all.into_iter().partition(|m| !self.leads.iter().any(|l| l.divides(m)));
            let index: HashMap<Monomial, usize> = standard.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let field = self.ring.field().clone();
            let mut reducible = HashMap::with_capacity(other.len());
            for m in other {
                let p = Polynomial::monomial(&self.ring, field.one(), m.clone());
                let nf = self.ideal.normal_form(&p);
                let entries = nf.terms().iter().map(|t| (index[&t.mono], t.coeff.clone())).collect();
                reducible.insert(m, SparseVec::from_unsorted(&field, entries));
            }
            self.bases.push(standard);
            self.index.push(index);
            self.reducible.push(reducible);
        }
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k < self.bases.len() {
            Ok(())
        } else {
            Err(Error::Consistency(format!(
                "graded piece of degree {k} requested beyond the computed limit {}",
                self.bases.len() - 1
            )))
        }
    }

    /// Standard monomials of degree `k`. Panics above the degree limit.
    pub fn basis(&self, k: usize) -> &[Monomial] {
        &self.bases[k]
    }

    /// `dim_k R_k`; zero for negative degrees.
    pub fn dim(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.bases[k as usize].len()
        }
    }

    /// Hilbert function values `dim R_0, ..., dim R_k`.
    pub fn hilbert_function(&mut self, k: usize) -> Vec<usize> {
        self.ensure_degree(k);
        (0..=k).map(|d| self.bases[d].len()).collect()
    }

    /// Adds `c * NF(m)` into `out`, shifting indices by `offset`.
    fn push_monomial(&self, m: &Monomial, c: &F::Elem, offset: usize, out: &mut Vec<(usize, F::Elem)>) {
        let d = m.degree() as usize;
        if let Some(&i) = self.index[d].get(m) {
            out.push((offset + i, c.clone()));
        } else {
            let f = self.ring.field();
            for (i, x) in &self.reducible[d][m].entries {
                out.push((offset + i, f.mul(c, x)));
            }
        }
    }

    /// Coordinates of a homogeneous polynomial of degree `k` in `R_k`.
    pub fn element(&self, p: &Polynomial<F>, k: usize) -> Result<SparseVec<F::Elem>> {
        self.check_degree(k)?;
        let mut raw = Vec::new();
        for t in p.terms() {
            if t.mono.degree() as usize != k {
                return Err(Error::Consistency(format!(
                    "polynomial {p} is not homogeneous of degree {k}"
                )));
            }
            self.push_monomial(&t.mono, &t.coeff, 0, &mut raw);
        }
        Ok(SparseVec::from_unsorted(self.field(), raw))
    }

    /// The polynomial in standard monomials with the given coordinates.
    pub fn polynomial(&self, k: usize, v: &SparseVec<F::Elem>) -> Polynomial<F> {
        let terms = v
            .entries
            .iter()
            .map(|(i, c)| (c.clone(), self.bases[k][*i].clone()))
            .collect::<Vec<_>>();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Raw entries of `s * u` for `u ∈ R_a` and a standard monomial `s`,
    /// shifted by `offset`.
    fn push_product(
        &self,
        a: usize,
        u: &SparseVec<F::Elem>,
        s: &Monomial,
        offset: usize,
        out: &mut Vec<(usize, F::Elem)>,
    ) {
        for (i, c) in &u.entries {
            let m = self.bases[a][*i].mul(s);
            self.push_monomial(&m, c, offset, out);
        }
    }
}

/// An element of a graded free `R`-module: coefficients on basis elements,
/// each an element of the appropriate graded piece of `R`.
type FreeElement<E> = Vec<(usize, SparseVec<E>)>;

/// A minimal free resolution of the residue field over `R`, truncated at a
/// fixed homological degree.
#[derive(Clone, Debug)]
pub struct ResidueResolution<F: Field> {
    ring: QuotientRing<F>,
    /// `degrees[i][g]`: internal degree of the `g`-th basis element of `F_i`.
    degrees: Vec<Vec<u32>>,
    /// `diffs[i][g] = d_i(g)` for `i ≥ 1`; `diffs[0]` is empty.
    diffs: Vec<Vec<FreeElement<F::Elem>>>,
}

/// Upper bound for the degrees of generators of `F_i`: `1 + (i-1)(D-1)`.
fn degree_bound(i: usize, lead_degree: u32) -> usize {
    if i == 0 {
        0
    } else {
        1 + (i - 1) * (lead_degree as usize - 1)
    }
}

/// Offsets of each generator's block in `(F)_j`, and the total dimension.
fn layout<F: Field>(ring: &QuotientRing<F>, degrees: &[u32], j: usize) -> (Vec<Option<usize>>, usize) {
    let mut offsets = Vec::with_capacity(degrees.len());
    let mut total = 0;
    for &d in degrees {
        if d as usize <= j {
            offsets.push(Some(total));
            total += ring.dim((j - d as usize) as i64);
        } else {
            offsets.push(None);
        }
    }
    (offsets, total)
}

impl<F: Field> ResidueResolution<F> {
    pub fn ring(&self) -> &QuotientRing<F> {
        &self.ring
    }

    pub fn ring_mut(&mut self) -> &mut QuotientRing<F> {
        &mut self.ring
    }

    pub fn steps(&self) -> usize {
        self.degrees.len() - 1
    }

    /// `β_0, ..., β_steps`.
    pub fn betti_numbers(&self) -> Vec<u64> {
        self.degrees.iter().map(|d| d.len() as u64).collect()
    }

    /// Generator degrees of `F_i`.
    pub fn generator_degrees(&self, i: usize) -> &[u32] {
        &self.degrees[i]
    }

    /// Image of `s * g` in `(F_{i-1})_j`, where `g` is a generator of `F_i`
    /// and `s` a standard monomial of degree `j - deg g`.
    fn image_column(&self, i: usize, g: usize, s: &Monomial, offsets: &[Option<usize>]) -> SparseVec<F::Elem> {
        let mut raw = Vec::new();
        let dg = self.degrees[i][g] as usize;
        for (h, coeff) in &self.diffs[i][g] {
            let a = dg - self.degrees[i - 1][*h] as usize;
            let off = offsets[*h].expect("target generator present in this degree");
            self.ring.push_product(a, coeff, s, off, &mut raw);
        }
        SparseVec::from_unsorted(self.ring.field(), raw)
    }

    fn split(&self, i: usize, j: usize, v: &SparseVec<F::Elem>, offsets: &[Option<usize>]) -> FreeElement<F::Elem> {
        let mut out: FreeElement<F::Elem> = Vec::new();
        let starts: Vec<(usize, usize)> = offsets
            .iter()
            .enumerate()
            .filter_map(|(h, o)| o.map(|o| (o, h)))
            .collect();
        for (idx, c) in &v.entries {
            let k = starts.partition_point(|(o, _)| *o <= *idx) - 1;
            let (o, h) = starts[k];
            debug_assert!(self.degrees[i][h] as usize <= j);
            match out.last_mut() {
                Some((last, vec)) if *last == h => vec.entries.push((idx - o, c.clone())),
                _ => out.push((
                    h,
                    SparseVec {
                        entries: vec![(idx - o, c.clone())],
                    },
                )),
            }
        }
        out
    }

    /// The resolution as a complex of matrices with polynomial entries in
    /// normal form.
    pub fn to_complex(&self) -> GradedComplex<F> {
        let ring = self.ring.ring().clone();
        let modules: Vec<GradedFreeModule> = self
            .degrees
            .iter()
            .map(|d| GradedFreeModule::new(d.iter().map(|&x| x as i32).collect()))
            .collect();
        let mut columns = Vec::new();
        for i in 1..self.degrees.len() {
            let rank = self.degrees[i - 1].len();
            let cols = self.diffs[i]
                .iter()
                .enumerate()
                .map(|(g, elem)| {
                    let mut comps = vec![Polynomial::zero(&ring); rank];
                    let dg = self.degrees[i][g] as usize;
                    for (h, v) in elem {
                        let a = dg - self.degrees[i - 1][*h] as usize;
                        comps[*h] = self.ring.polynomial(a, v);
                    }
                    ModuleVector::new(&ring, comps).expect("same ring")
                })
                .collect();
            columns.push(cols);
        }
        GradedComplex::from_modules(&ring, modules, columns)
    }
}

/// Minimal free resolution of `k` over `R`, up to homological degree `steps`.
pub fn resolve_residue_field<F: Field>(mut ring: QuotientRing<F>, steps: usize) -> Result<ResidueResolution<F>> {
    let lead = ring.max_lead_degree();
    let top = degree_bound(steps, lead);
    ring.ensure_degree(top);
    let field = ring.field().clone();
    let mut res = ResidueResolution {
        ring,
        degrees: vec![vec![0]],
        diffs: vec![Vec::new()],
    };
    for _ in 0..steps {
        res.degrees.push(Vec::new());
        res.diffs.push(Vec::new());
    }
    for j in 1..=top {
        // Kernel of the augmentation R -> k in degree j is all of R_j.
        let mut prev_kernel: Vec<SparseVec<F::Elem>> = (0..res.ring.dim(j as i64))
            .map(|k| SparseVec::unit(&field, k))
            .collect();
        for i in 1..=steps.min(j) {
            let need_gens = j <= degree_bound(i, lead);
            let need_kernel = i < steps && j <= degree_bound(i + 1, lead);
            if !need_gens && !need_kernel {
                prev_kernel.clear();
                continue;
            }
            let (src_offsets, src_dim) = layout(&res.ring, &res.degrees[i], j);
            let (tgt_offsets, tgt_dim) = layout(&res.ring, &res.degrees[i - 1], j);
            let mut ech = if need_kernel {
                Echelon::tracking(field.clone(), tgt_dim)
            } else {
                Echelon::new(field.clone(), tgt_dim)
            };
            let mut kernel = Vec::new();
            for (g, off) in src_offsets.iter().enumerate() {
                let Some(off) = off else { continue };
                let dg = res.degrees[i][g] as usize;
                for (k, s) in res.ring.basis(j - dg).iter().enumerate() {
                    let col = res.image_column(i, g, s, &tgt_offsets);
                    if let Insertion::Dependent(Some(c)) = ech.insert(&col, off + k) {
                        kernel.push(c);
                    }
                }
            }
            debug_assert!(kernel.iter().all(|k| k.entries.iter().all(|(x, _)| *x < src_dim)));
            if need_gens {
                ech.stop_tracking();
                for v in &prev_kernel {
                    let r = ech.reduce(v);
                    if r.is_zero() {
                        continue;
                    }
                    ech.insert(&r, 0);
                    let elem = res.split(i - 1, j, &r, &tgt_offsets);
                    res.degrees[i].push(j as u32);
                    res.diffs[i].push(elem);
                }
            }
            prev_kernel = kernel;
        }
    }
    Ok(res)
}

/// `dim_k Ext^i_R(k, R)`, summed over internal degrees `j ≤ top_degree`.
///
/// Uses `Hom(F_i, R)_j = ⊕_g R_{j + deg g}` and the transposed differentials.
/// The resolution must reach `F_{i+1}` and the ring tables must cover degree
/// `top_degree + max deg F_{i+1}`.
pub fn ext_dimension<F: Field>(res: &ResidueResolution<F>, i: usize, top_degree: i64) -> Result<u64> {
    if i + 1 > res.steps() {
        return Err(Error::Consistency(format!(
            "Ext^{i} needs a resolution of length {} but only {} steps were computed",
            i + 1,
            res.steps()
        )));
    }
    let needed = top_degree + res.degrees[i + 1].iter().copied().max().unwrap_or(0) as i64;
    if needed >= 0 && needed as usize > res.ring.degree_limit() {
        return Err(Error::Consistency(format!(
            "ring tables reach degree {} but {needed} is needed",
            res.ring.degree_limit()
        )));
    }
    let bottom = -(res.degrees[i].iter().copied().max().unwrap_or(0) as i64);
    let mut total = 0i64;
    for j in bottom..=top_degree {
        let dim = cochain_dim(res, i, j);
        if dim == 0 {
            continue;
        }
        let out_rank = coboundary_rank(res, i, j);
        let in_rank = if i == 0 { 0 } else { coboundary_rank(res, i - 1, j) };
        total += dim as i64 - out_rank as i64 - in_rank as i64;
    }
    if total < 0 {
        return Err(Error::Consistency("negative cohomology dimension".into()));
    }
    Ok(total as u64)
}

fn cochain_layout<F: Field>(res: &ResidueResolution<F>, i: usize, j: i64) -> (Vec<Option<usize>>, usize) {
    let mut offsets = Vec::new();
    let mut total = 0;
    for &d in &res.degrees[i] {
        let k = j + d as i64;
        let dim = res.ring.dim(k);
        if dim > 0 {
            offsets.push(Some(total));
            total += dim;
        } else {
            offsets.push(None);
        }
    }
    (offsets, total)
}

fn cochain_dim<F: Field>(res: &ResidueResolution<F>, i: usize, j: i64) -> usize {
    cochain_layout(res, i, j).1
}

/// Rank of `Hom(F_i, R)_j -> Hom(F_{i+1}, R)_j`.
/// Entries of the differential landing on one generator: `(source index, column)`.
type Incoming<'a, E> = Vec<(usize, &'a SparseVec<E>)>;

fn coboundary_rank<F: Field>(res: &ResidueResolution<F>, i: usize, j: i64) -> usize {
    let (src, src_dim) = cochain_layout(res, i, j);
    let (tgt, tgt_dim) = cochain_layout(res, i + 1, j);
    if src_dim == 0 || tgt_dim == 0 {
        return 0;
    }
    let ring = &res.ring;
    let field = ring.field().clone();
    // Transpose: for each generator g of F_i, collect (h, c_{g,h}).
    let mut incoming: Vec<Incoming<F::Elem>> = vec![Vec::new(); res.degrees[i].len()];
    for (h, elem) in res.diffs[i + 1].iter().enumerate() {
        for (g, c) in elem {
            incoming[*g].push((h, c));
        }
    }
    let mut ech = Echelon::new(field.clone(), tgt_dim);
    for (g, off) in src.iter().enumerate() {
        if off.is_none() {
            continue;
        }
        let k = (j + res.degrees[i][g] as i64) as usize;
        for u in ring.basis(k) {
            let mut raw = Vec::new();
            for (h, c) in &incoming[g] {
                let Some(toff) = tgt[*h] else { continue };
                let a = (res.degrees[i + 1][*h] - res.degrees[i][g]) as usize;
                ring.push_product(a, c, u, toff, &mut raw);
            }
            let col = SparseVec::from_unsorted(&field, raw);
            ech.insert(&col, 0);
        }
    }
    ech.rank()
}

/// Resolution of `k` over `R = Q/I` by syzygies over `Q`: relations among
/// the columns are computed together with `I` times each basis vector and
/// projected, then unit entries are cancelled. Much slower than
/// [`resolve_residue_field`]; kept as an independent route for checking it.
pub fn resolve_residue_field_by_syzygies<F: Field>(
    ring: &Ring<F>,
    ideal: &[Polynomial<F>],
    steps: usize,
) -> Result<GradedComplex<F>> {
    let gb = buchberger(ring, ideal)?;
    let igens = gb.polynomials();
    let n = ring.nvars();
    let mut modules = vec![GradedFreeModule::new(vec![0])];
    let mut columns: Vec<Vec<ModuleVector<F>>> = Vec::new();
    if steps == 0 {
        return Ok(GradedComplex::from_modules(ring, modules, columns));
    }
    modules.push(GradedFreeModule::new(vec![1; n]));
    columns.push(
        (0..n)
            .map(|i| ModuleVector::new(ring, vec![gb.normal_form(&Polynomial::var(ring, i))]))
            .collect::<Result<_>>()?,
    );
    let mut complex = minimalize(&GradedComplex::from_modules(ring, modules, columns), Some(&gb));
    // One extra step exposes redundant generators of the last module.
    while complex.length() < steps + 1 {
        let last = complex.maps.last().expect("nonempty");
        let rank = last.target.rank();
        let k = last.columns.len();
        if k == 0 {
            break;
        }
        let mut vectors = last.columns.clone();
        for p in 0..rank {
            for g in &igens {
                let mut comps = vec![Polynomial::zero(ring); rank];
                comps[p] = g.clone();
                vectors.push(ModuleVector::new(ring, comps)?);
            }
        }
        let syz = syzygies_twisted(ring, &vectors, &last.target.twists, DEFAULT_STEP_LIMIT)?;
        let mut new_cols = Vec::new();
        let mut twists = Vec::new();
        for s in syz {
            let comps: Vec<Polynomial<F>> = s.components()[..k].iter().map(|p| gb.normal_form(p)).collect();
            let v = ModuleVector::new(ring, comps)?;
            if v.is_zero() {
                continue;
            }
            twists.push(v.degree(&last.source.twists).expect("homogeneous"));
            new_cols.push(v);
        }
        let mut modules = complex.modules.clone();
        modules.push(GradedFreeModule::new(twists));
        let mut columns: Vec<Vec<ModuleVector<F>>> = complex.maps.iter().map(|m| m.columns.clone()).collect();
        columns.push(new_cols);
        complex = minimalize(&GradedComplex::from_modules(ring, modules, columns), Some(&gb));
    }
    while complex.length() > steps {
        complex.maps.pop();
        complex.modules.pop();
    }
    Ok(complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poly::{MonomialOrder, PolyRing};

    fn ring(vars: &[&str]) -> Ring<Rationals> {
        PolyRing::new(Rationals, vars.iter().copied(), MonomialOrder::DegRevLex)
    }

    fn v<F: Field>(r: &Ring<F>, i: usize) -> Polynomial<F> {
        Polynomial::var(r, i)
    }

    fn flagship() -> (Ring<Rationals>, Vec<Polynomial<Rationals>>) {
        let r = ring(&["x", "y", "z"]);
        let (x, y, z) = (v(&r, 0), v(&r, 1), v(&r, 2));
        let gens = vec![
            &x * &(&y * &y),
            &x * &(&y * &z),
            &y * &(&z * &z),
            &(&x * &x).pow(2) - &(&y.pow(3) * &z),
            &(&x * &z.pow(3)) - &y.pow(4),
        ];
        (r, gens)
    }

    #[test]
    fn koszul_resolution_over_q() {
        let r = ring(&["x", "y", "z"]);
        let gens: Vec<_> = (0..3).map(|i| &v(&r, i) * &v(&r, i)).collect();
        let c = min_resolution_over_q(&r, &gens).unwrap();
        assert_eq!(c.ranks(), vec![1, 3, 3, 1]);
        assert!(c.compositions_vanish(None));
        assert!(c.is_minimal());
        let h = hilbert_data(&c, 3);
        assert_eq!(h.numerator, vec![1, 0, -3, 0, 3, 0, -1]);
        assert_eq!(h.krull_dimension, 0);
    }

    #[test]
    fn flagship_resolution_over_q() {
        let (r, gens) = flagship();
        let c = min_resolution_over_q(&r, &gens).unwrap();
        assert_eq!(c.ranks(), vec![1, 5, 6, 2]);
        assert!(c.compositions_vanish(None));
        assert!(c.is_minimal());
        assert!(c.maps.iter().all(GradedMatrix::is_homogeneous));
        let h = hilbert_data(&c, 3);
        assert_eq!(h.one_minus_t_multiplicity, 2);
        assert_eq!(h.krull_dimension, 1);
    }

    #[test]
    fn hypersurface_and_trivial() {
        let r = ring(&["x", "y"]);
        let c = min_resolution_over_q(&r, &[&v(&r, 0) * &v(&r, 0)]).unwrap();
        assert_eq!(c.ranks(), vec![1, 1]);
        let c = min_resolution_over_q(&r, &[]).unwrap();
        assert_eq!(c.ranks(), vec![1]);
        let h = hilbert_data(&c, 2);
        assert_eq!(h.numerator, vec![1]);
        assert_eq!(h.krull_dimension, 2);
    }

    #[test]
    fn non_minimal_generators_are_pruned() {
        let r = ring(&["x", "y"]);
        let (x, y) = (v(&r, 0), v(&r, 1));
        let gens = vec![&x * &x, &x * &y, &(&x * &x) + &(&x * &y)];
        let c = min_resolution_over_q(&r, &gens).unwrap();
        assert_eq!(c.ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn minimalize_cancels_unit_blocks() {
        let r = ring(&["x"]);
        let one = Polynomial::one(&r);
        let c = GradedComplex::from_modules(
            &r,
            vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![0])],
            vec![vec![ModuleVector::new(&r, vec![one]).unwrap()]],
        );
        let m = minimalize(&c, None);
        assert_eq!(m.ranks(), vec![0, 0]);
    }

    #[test]
    fn residue_field_resolutions() {
        let r = ring(&["x"]);
        let qr = QuotientRing::new(&r, &[&v(&r, 0) * &v(&r, 0)]).unwrap();
        let res = resolve_residue_field(qr, 4).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 1, 1, 1, 1]);

        let r = ring(&["x", "y", "z"]);
        let gens: Vec<_> = (0..3).map(|i| &v(&r, i) * &v(&r, i)).collect();
        let qr = QuotientRing::new(&r, &gens).unwrap();
        let res = resolve_residue_field(qr, 4).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 3, 6, 10, 15]);
        let gb = buchberger(&r, &gens).unwrap();
        let c = res.to_complex();
        assert!(c.compositions_vanish(Some(&gb)));
        assert!(c.is_minimal());
    }

    #[test]
    fn flagship_residue_resolution() {
        let (r, gens) = flagship();
        let qr = QuotientRing::new(&r, &gens).unwrap();
        let res = resolve_residue_field(qr, 4).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 3, 8, 22, 59]);
    }

    #[test]
    fn syzygy_route_agrees_on_small_ring() {
        let f = PrimeField::new(32003).unwrap();
        let r = PolyRing::new(f, ["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = (v(&r, 0), v(&r, 1));
        let gens = vec![&x * &x, &x * &y];
        let by_syz = resolve_residue_field_by_syzygies(&r, &gens, 4).unwrap();
        let qr = QuotientRing::new(&r, &gens).unwrap();
        let res = resolve_residue_field(qr, 4).unwrap();
        let ranks: Vec<u64> = by_syz.ranks().iter().map(|&k| k as u64).collect();
        assert_eq!(ranks, res.betti_numbers());
        let gb = buchberger(&r, &gens).unwrap();
        assert!(by_syz.compositions_vanish(Some(&gb)));
    }

    #[test]
    fn socle_dimensions() {
        let r = ring(&["x"]);
        let mut qr = QuotientRing::new(&r, &[&v(&r, 0) * &v(&r, 0)]).unwrap();
        qr.ensure_degree(6);
        let res = resolve_residue_field(qr, 2).unwrap();
        assert_eq!(ext_dimension(&res, 0, 1).unwrap(), 1);

        let r = ring(&["x", "y"]);
        let (x, y) = (v(&r, 0), v(&r, 1));
        let mut qr = QuotientRing::new(&r, &[&x * &x, &x * &y]).unwrap();
        qr.ensure_degree(6);
        let res = resolve_residue_field(qr, 2).unwrap();
        // reg(R) = 1 for this ring.
        assert_eq!(ext_dimension(&res, 0, 1).unwrap(), 1);
    }
}

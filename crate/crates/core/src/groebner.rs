//! Buchberger's algorithm for ideals and submodules of graded free modules.
//!
//! Module elements are compared position-over-term: lower positions dominate,
//! and within a position the ring's monomial order decides. An ideal is the
//! rank-one case, where the coprime-leading-monomial criterion is also used.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{same_ring, Monomial, MonomialOrder, Polynomial, Ring, Term};

/// Default cap on the number of S-pair reductions per basis computation.
pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// A vector of polynomials, an element of a free module `Q^rank`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector<F: Field> {
    ring: Ring<F>,
    components: Vec<Polynomial<F>>,
}

impl<F: Field> std::fmt::Debug for ModuleVector<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

impl<F: Field> ModuleVector<F> {
    pub fn new(ring: &Ring<F>, components: Vec<Polynomial<F>>) -> Result<Self> {
        if components.iter().any(|c| !same_ring(c.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(ModuleVector {
            ring: ring.clone(),
            components,
        })
    }

    pub fn zero(ring: &Ring<F>, rank: usize) -> Self {
        ModuleVector {
            ring: ring.clone(),
            components: vec![Polynomial::zero(ring); rank],
        }
    }

    /// The `i`-th standard basis vector of `Q^rank`.
    pub fn basis(ring: &Ring<F>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[i] = Polynomial::one(ring);
        v
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial<F>> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Degree of the vector with respect to `twists`, if it is homogeneous.
    pub fn degree(&self, twists: &[i32]) -> Option<i32> {
        let mut deg = None;
        for (c, &tw) in self.components.iter().zip(twists) {
            for t in c.terms() {
                let d = tw + t.mono.degree() as i32;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    /// `Σ coeffs[i] * vectors[i]`.
    pub fn combination(ring: &Ring<F>, rank: usize, coeffs: &[Polynomial<F>], vectors: &[ModuleVector<F>]) -> Self {
        let mut acc = Self::zero(ring, rank);
        for (c, v) in coeffs.iter().zip(vectors) {
            if c.is_zero() {
                continue;
            }
            for (slot, comp) in acc.components.iter_mut().zip(&v.components) {
                if !comp.is_zero() {
                    *slot = &*slot + &(c * comp);
                }
            }
        }
        acc
    }
}

/// A term of a module element: `coeff * mono * e_pos`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MTerm<E> {
    pub pos: u32,
    pub mono: Monomial,
    pub coeff: E,
}

pub(crate) type SVec<E> = Vec<MTerm<E>>;

#[inline]
fn cmp_mterm<E>(ord: MonomialOrder, a: &MTerm<E>, b: &MTerm<E>) -> Ordering {
    match b.pos.cmp(&a.pos) {
        Ordering::Equal => ord.cmp(&a.mono, &b.mono),
        o => o,
    }
}

pub(crate) fn to_svec<F: Field>(v: &ModuleVector<F>) -> SVec<F::Elem> {
    let ord = v.ring.order();
    let mut out: SVec<F::Elem> = Vec::new();
    for (pos, c) in v.components.iter().enumerate() {
        for t in c.terms() {
            out.push(MTerm {
                pos: pos as u32,
                mono: t.mono.clone(),
                coeff: t.coeff.clone(),
            });
        }
    }
    // Components are visited in dominating order and each is sorted already.
    debug_assert!(out
        .windows(2)
        .all(|w| cmp_mterm(ord, &w[0], &w[1]) == Ordering::Greater));
    out
}

pub(crate) fn from_svec<F: Field>(ring: &Ring<F>, rank: usize, v: &[MTerm<F::Elem>]) -> ModuleVector<F> {
    let mut buckets: Vec<Vec<Term<F::Elem>>> = vec![Vec::new(); rank];
    for t in v {
        buckets[t.pos as usize].push(Term {
            coeff: t.coeff.clone(),
            mono: t.mono.clone(),
        });
    }
    ModuleVector {
        ring: ring.clone(),
        components: buckets
            .into_iter()
            .map(|terms| Polynomial::from_sorted(ring, terms))
            .collect(),
    }
}

/// Options for a basis computation.
#[derive(Clone, Debug)]
pub struct GroebnerOptions {
    /// Degree shift of each basis position of the ambient free module.
    pub twists: Vec<i32>,
    /// Maximum number of S-pair reductions before giving up.
    pub step_limit: u64,
}

impl GroebnerOptions {
    pub fn with_twists(twists: Vec<i32>) -> Self {
        GroebnerOptions {
            twists,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

/// A reduced Gröbner basis of an ideal (rank one) or of a submodule.
#[derive(Clone)]
pub struct GroebnerBasis<F: Field> {
    ring: Ring<F>,
    rank: usize,
    twists: Vec<i32>,
    elems: Vec<SVec<F::Elem>>,
}

impl<F: Field> std::fmt::Debug for GroebnerBasis<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.generators()).finish()
    }
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Degree shifts of the ambient free module's basis vectors.
    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Always true: bases are interreduced and monic on construction.
    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn generators(&self) -> Vec<ModuleVector<F>> {
        self.elems.iter().map(|e| from_svec(&self.ring, self.rank, e)).collect()
    }

    /// Generators of a rank-one basis as polynomials.
    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        self.generators()
            .into_iter()
            .map(|v| v.into_components().swap_remove(0))
            .collect()
    }

    /// Leading monomials of a rank-one basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().map(|e| e[0].mono.clone()).collect()
    }

    /// True when the basis contains a unit at some position.
    pub fn contains_unit(&self) -> bool {
        self.elems.iter().any(|e| e[0].mono.is_one())
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        debug_assert_eq!(self.rank, 1);
        let v = ModuleVector {
            ring: self.ring.clone(),
            components: vec![f.clone()],
        };
        self.normal_form_vector(&v).into_components().swap_remove(0)
    }

    pub fn normal_form_vector(&self, v: &ModuleVector<F>) -> ModuleVector<F> {
        let reducer = Reducer {
            field: self.ring.field(),
            ord: self.ring.order(),
        };
        let refs: Vec<&SVec<F::Elem>> = self.elems.iter().collect();
        let nf = reducer.full_reduce(to_svec(v), &refs);
        from_svec(&self.ring, self.rank, &nf)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Checks Buchberger's criterion exhaustively: every S-vector of two
    /// basis elements with leading terms at the same position reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let reducer = Reducer {
            field: self.ring.field(),
            ord: self.ring.order(),
        };
        let refs: Vec<&SVec<F::Elem>> = self.elems.iter().collect();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                let (a, b) = (&self.elems[i], &self.elems[j]);
                if a[0].pos != b[0].pos {
                    continue;
                }
                let s = reducer.s_vector(a, b);
                if !reducer.full_reduce(s, &refs).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

struct Reducer<'a, F: Field> {
    field: &'a F,
    ord: MonomialOrder,
}

impl<'a, F: Field> Reducer<'a, F> {
    /// `a - c * m * b`, where both inputs are sorted.
    fn sub_multiple(&self, a: &[MTerm<F::Elem>], c: &F::Elem, m: &Monomial, b: &[MTerm<F::Elem>]) -> SVec<F::Elem> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut scaled: Option<MTerm<F::Elem>> = None;
        loop {
            if scaled.is_none() && j < b.len() {
                scaled = Some(MTerm {
                    pos: b[j].pos,
                    mono: b[j].mono.mul(m),
                    coeff: f.mul(c, &b[j].coeff),
                });
            }
            match (i < a.len(), scaled.take()) {
                (false, None) => break,
                (true, None) => {
                    out.extend_from_slice(&a[i..]);
                    break;
                }
                (false, Some(s)) => {
                    out.push(MTerm {
                        coeff: f.neg(&s.coeff),
                        ..s
                    });
                    j += 1;
                }
                (true, Some(s)) => match cmp_mterm(self.ord, &a[i], &s) {
                    Ordering::Greater => {
                        out.push(a[i].clone());
                        i += 1;
                        scaled = Some(s);
                    }
                    Ordering::Less => {
                        out.push(MTerm {
                            coeff: f.neg(&s.coeff),
                            ..s
                        });
                        j += 1;
                    }
                    Ordering::Equal => {
                        let coeff = f.sub(&a[i].coeff, &s.coeff);
                        if !f.is_zero(&coeff) {
                            out.push(MTerm { coeff, ..s });
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
        out
    }

    fn find_divisor<'b>(&self, t: &MTerm<F::Elem>, basis: &[&'b SVec<F::Elem>]) -> Option<&'b SVec<F::Elem>> {
        basis
            .iter()
            .find(|g| g[0].pos == t.pos && g[0].mono.divides(&t.mono))
            .copied()
    }

    /// Reduces every term of `v` against `basis`.
    fn full_reduce(&self, v: SVec<F::Elem>, basis: &[&SVec<F::Elem>]) -> SVec<F::Elem> {
        let mut done = Vec::new();
        let mut rest = v;
        let mut k = 0;
        while k < rest.len() {
            let top = &rest[k];
            match self.find_divisor(top, basis) {
                None => {
                    done.push(top.clone());
                    k += 1;
                }
                Some(g) => {
                    let m = top.mono.div(&g[0].mono).expect("divisor");
                    let c = self.field.div(&top.coeff, &g[0].coeff);
                    rest = self.sub_multiple(&rest[k + 1..], &c, &m, &g[1..]);
                    k = 0;
                }
            }
        }
        done
    }

    fn s_vector(&self, a: &SVec<F::Elem>, b: &SVec<F::Elem>) -> SVec<F::Elem> {
        let l = a[0].mono.lcm(&b[0].mono);
        let ma = l.div(&a[0].mono).expect("lcm");
        let mb = l.div(&b[0].mono).expect("lcm");
        let f = self.field;
        let ca = f.inv(&a[0].coeff);
        let scaled_a: SVec<F::Elem> = a[1..]
            .iter()
            .map(|t| MTerm {
                pos: t.pos,
                mono: t.mono.mul(&ma),
                coeff: f.mul(&t.coeff, &ca),
            })
            .collect();
        let cb = f.inv(&b[0].coeff);
        self.sub_multiple(&scaled_a, &cb, &mb, &b[1..])
    }

    fn make_monic(&self, v: &mut SVec<F::Elem>) {
        if let Some(first) = v.first() {
            if !self.field.is_one(&first.coeff) {
                let c = self.field.inv(&first.coeff);
                for t in v.iter_mut() {
                    t.coeff = self.field.mul(&t.coeff, &c);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Monomial,
    degree: i64,
}

/// Computes the reduced Gröbner basis of an ideal.
pub fn buchberger<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>]) -> Result<GroebnerBasis<F>> {
    buchberger_with_limit(ring, gens, DEFAULT_STEP_LIMIT)
}

pub fn buchberger_with_limit<F: Field>(
    ring: &Ring<F>,
    gens: &[Polynomial<F>],
    step_limit: u64,
) -> Result<GroebnerBasis<F>> {
    let vectors = gens
        .iter()
        .map(|g| ModuleVector::new(ring, vec![g.clone()]))
        .collect::<Result<Vec<_>>>()?;
    let opts = GroebnerOptions {
        twists: vec![0],
        step_limit,
    };
    buchberger_module(ring, &vectors, &opts)
}

/// Computes the reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger_module<F: Field>(
    ring: &Ring<F>,
    gens: &[ModuleVector<F>],
    opts: &GroebnerOptions,
) -> Result<GroebnerBasis<F>> {
    let rank = opts.twists.len();
    for g in gens {
        if !same_ring(g.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        if g.rank() != rank {
            return Err(Error::Consistency(format!(
                "module element of rank {} in a free module of rank {rank}",
                g.rank()
            )));
        }
    }
    let input: Vec<SVec<F::Elem>> = gens.iter().map(to_svec).filter(|v| !v.is_empty()).collect();
    let elems = run_buchberger(ring, input, &opts.twists, rank == 1, opts.step_limit)?;
    Ok(GroebnerBasis {
        ring: ring.clone(),
        rank,
        twists: opts.twists.clone(),
        elems,
    })
}

fn run_buchberger<F: Field>(
    ring: &Ring<F>,
    mut input: Vec<SVec<F::Elem>>,
    twists: &[i32],
    product_criterion: bool,
    step_limit: u64,
) -> Result<Vec<SVec<F::Elem>>> {
    let red = Reducer {
        field: ring.field(),
        ord: ring.order(),
    };
    let ord = ring.order();
    // Feed inputs smallest first so that low-degree elements reduce the rest.
    input.sort_by(|a, b| cmp_mterm(ord, &a[0], &b[0]));

    let mut all: Vec<SVec<F::Elem>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut steps = 0u64;

    let pair_degree = |pos: u32, lcm: &Monomial| twists[pos as usize] as i64 + lcm.degree() as i64;

    let mut queue: std::collections::VecDeque<SVec<F::Elem>> = input.into();
    loop {
        let candidate = if let Some(v) = queue.pop_front() {
            v
        } else {
            // Normal strategy: lowest degree first, ties by creation order.
            let best = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.degree
                        .cmp(&b.degree)
                        .then_with(|| a.j.cmp(&b.j))
                        .then_with(|| a.i.cmp(&b.i))
                })
                .map(|(k, _)| k);
            let Some(k) = best else { break };
            let p = pairs.swap_remove(k);
            steps += 1;
            if steps > step_limit {
                return Err(Error::ResourceLimit(format!(
                    "Gröbner basis computation exceeded {step_limit} pair reductions"
                )));
            }
            red.s_vector(&all[p.i], &all[p.j])
        };
        let refs: Vec<&SVec<F::Elem>> = active.iter().map(|&k| &all[k]).collect();
        let mut h = red.full_reduce(candidate, &refs);
        if h.is_empty() {
            continue;
        }
        red.make_monic(&mut h);
        let hi = all.len();
        let hpos = h[0].pos;
        let hlm = h[0].mono.clone();
        all.push(h);

        // Gebauer–Möller update.
        let mut fresh: Vec<(usize, Monomial, bool)> = active
            .iter()
            .filter(|&&g| all[g][0].pos == hpos)
            .map(|&g| {
                let glm = &all[g][0].mono;
                (g, hlm.lcm(glm), product_criterion && hlm.is_coprime(glm))
            })
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = fresh.pop() {
            let dominated = fresh.iter().chain(kept.iter()).any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l, coprime));
            }
        }
        pairs.retain(|p| {
            if p.pos != hpos || !hlm.divides(&p.lcm) {
                return true;
            }
            let li = hlm.lcm(&all[p.i][0].mono);
            let lj = hlm.lcm(&all[p.j][0].mono);
            li == p.lcm || lj == p.lcm
        });
        for (g, l, coprime) in kept {
            if !coprime {
                let degree = pair_degree(hpos, &l);
                pairs.push(Pair {
                    i: g,
                    j: hi,
                    pos: hpos,
                    lcm: l,
                    degree,
                });
            }
        }
        active.retain(|&g| !(all[g][0].pos == hpos && hlm.divides(&all[g][0].mono)));
        active.push(hi);
    }

    // Interreduce the minimal basis.
    let mut basis: Vec<SVec<F::Elem>> = active.iter().map(|&k| all[k].clone()).collect();
    basis.sort_by(|a, b| cmp_mterm(ord, &a[0], &b[0]));
    for k in 0..basis.len() {
        let others: Vec<&SVec<F::Elem>> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, v)| v)
            .collect();
        let head = basis[k][0].clone();
        let tail = red.full_reduce(basis[k][1..].to_vec(), &others);
        let mut v = Vec::with_capacity(tail.len() + 1);
        v.push(head);
        v.extend(tail);
        red.make_monic(&mut v);
        basis[k] = v;
    }
    Ok(basis)
}

/// Normal form of `f` with respect to `g`.
pub fn normal_form<F: Field>(f: &Polynomial<F>, g: &GroebnerBasis<F>) -> Polynomial<F> {
    g.normal_form(f)
}

/// Generators of the module of relations `Σ a_i v_i = 0` among the inputs.
///
/// The inputs live in a free module whose positions carry `twists`; the
/// returned syzygies are vectors of length `vectors.len()`.
pub fn syzygies_twisted<F: Field>(
    ring: &Ring<F>,
    vectors: &[ModuleVector<F>],
    twists: &[i32],
    step_limit: u64,
) -> Result<Vec<ModuleVector<F>>> {
    let r = twists.len();
    let k = vectors.len();
    let mut ext_twists = twists.to_vec();
    let mut ext = Vec::with_capacity(k);
    for (i, v) in vectors.iter().enumerate() {
        if v.rank() != r {
            return Err(Error::Consistency(format!(
                "vector of rank {} among vectors of rank {r}",
                v.rank()
            )));
        }
        if !same_ring(v.ring(), ring) {
            return Err(Error::RingMismatch);
        }
        ext_twists.push(v.degree(twists).unwrap_or(0));
        let mut comps = v.components().to_vec();
        comps.extend((0..k).map(|j| {
            if i == j {
                Polynomial::one(ring)
            } else {
                Polynomial::zero(ring)
            }
        }));
        ext.push(ModuleVector {
            ring: ring.clone(),
            components: comps,
        });
    }
    let gb = buchberger_module(
        ring,
        &ext,
        &GroebnerOptions {
            twists: ext_twists,
            step_limit,
        },
    )?;
    let mut out = Vec::new();
    for e in &gb.elems {
        if (e[0].pos as usize) < r {
            continue;
        }
        let shifted: SVec<F::Elem> = e
            .iter()
            .map(|t| MTerm {
                pos: t.pos - r as u32,
                mono: t.mono.clone(),
                coeff: t.coeff.clone(),
            })
            .collect();
        out.push(from_svec(ring, k, &shifted));
    }
    Ok(out)
}

/// Syzygies of vectors in an untwisted free module.
pub fn syzygies<F: Field>(ring: &Ring<F>, vectors: &[ModuleVector<F>]) -> Result<Vec<ModuleVector<F>>> {
    let r = vectors.first().map_or(0, ModuleVector::rank);
    syzygies_twisted(ring, vectors, &vec![0; r], DEFAULT_STEP_LIMIT)
}

/// Generators of the ideal quotient `(I : ell)`.
pub fn colon<F: Field>(ring: &Ring<F>, ideal: &[Polynomial<F>], ell: &Polynomial<F>) -> Result<Vec<Polynomial<F>>> {
    let mut vectors = vec![ModuleVector::new(ring, vec![ell.clone()])?];
    for g in ideal {
        vectors.push(ModuleVector::new(ring, vec![g.clone()])?);
    }
    let syz = syzygies_twisted(ring, &vectors, &[0], DEFAULT_STEP_LIMIT)?;
    Ok(syz
        .into_iter()
        .map(|s| s.into_components().swap_remove(0))
        .filter(|p| !p.is_zero())
        .collect())
}

/// True iff `(I : ell) = I`, i.e. `ell` is a nonzerodivisor on `Q/I`.
pub fn colon_equals<F: Field>(ring: &Ring<F>, ideal: &[Polynomial<F>], ell: &Polynomial<F>) -> Result<bool> {
    let gb = buchberger(ring, ideal)?;
    Ok(colon(ring, ideal, ell)?.iter().all(|c| gb.contains(c)))
}

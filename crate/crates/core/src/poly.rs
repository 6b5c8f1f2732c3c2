//! Monomials, monomial orders and sparse multivariate polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

/// A power product in a fixed number of variables, with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Every monomial of total degree `degree` in `nvars` variables, in
    /// decreasing lexicographic order of exponent vectors.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u16; nvars];
        fill_degree(&mut exps, 0, degree, &mut out);
        out
    }
}

fn fill_degree(exps: &mut [u16], pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        exps[pos] = left as u16;
        out.push(Monomial::new(exps.to_vec()));
        exps[pos] = 0;
        return;
    }
    if exps.is_empty() {
        if left == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        exps[pos] = e as u16;
        fill_degree(exps, pos + 1, left - e, out);
    }
    exps[pos] = 0;
}

/// Degree-compatible monomial orders. Variables take precedence in their
/// declared order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    DegLex,
}

impl MonomialOrder {
    /// Total comparison of two monomials of equal length.
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::LengthMismatch(a.nvars(), b.nvars()));
        }
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison for monomials already known to share a ring.
    #[inline]
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.degree.cmp(&b.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        match self {
            MonomialOrder::DegRevLex => {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegLex => a.exps.cmp(&b.exps),
        }
    }
}

/// Polynomial ring descriptor: coefficient field, variable names, order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.descriptor() == other.field.descriptor() && self.vars == other.vars && self.order == other.order
    }
}

impl<F: Field> Eq for PolyRing<F> {}

impl<F: Field> PolyRing<F> {
    pub fn new<S: Into<String>>(field: F, vars: impl IntoIterator<Item = S>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing {
            field,
            vars: vars.into_iter().map(Into::into).collect(),
            order,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub type Ring<F> = Arc<PolyRing<F>>;

pub(crate) fn same_ring<F: Field>(a: &Ring<F>, b: &Ring<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A term `coeff * mono`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<E> {
    pub coeff: E,
    pub mono: Monomial,
}

/// A polynomial with terms sorted strictly decreasingly and no zero
/// coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Ring<F>,
    terms: Vec<Term<F::Elem>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Ring<F>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring<F>, c: F::Elem) -> Self {
        Self::monomial(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn one(ring: &Ring<F>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Ring<F>, i: usize) -> Self {
        Self::monomial(ring, ring.field.one(), Monomial::var(ring.nvars(), i))
    }

    pub fn monomial(ring: &Ring<F>, coeff: F::Elem, mono: Monomial) -> Self {
        let terms = if ring.field.is_zero(&coeff) {
            Vec::new()
        } else {
            vec![Term { coeff, mono }]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, sorting and combining them.
    pub fn from_terms(ring: &Ring<F>, terms: impl IntoIterator<Item = (F::Elem, Monomial)>) -> Self {
        let raw: Vec<Term<F::Elem>> = terms.into_iter().map(|(coeff, mono)| Term { coeff, mono }).collect();
        Polynomial {
            ring: ring.clone(),
            terms: normalize(ring, raw),
        }
    }

    /// Wraps terms that are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted(ring: &Ring<F>, terms: Vec<Term<F::Elem>>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order.cmp(&w[0].mono, &w[1].mono) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term<F::Elem>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<F::Elem>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term<F::Elem>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.coeff)
    }

    /// Largest degree of a term, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    /// True iff all terms share one degree (vacuously true for zero).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.mono.degree() == t.mono.degree()),
        }
    }

    /// Re-normalizes the term list; a no-op on any value built through this API.
    pub fn normalized(&self) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: normalize(&self.ring, self.terms.clone()),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.product(other))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f.mul(&t.coeff, c),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    /// Multiplies by the term `c * m`.
    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f.mul(&t.coeff, c),
                    mono: t.mono.mul(m),
                })
                .collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if self.ring.field.is_one(c) => self.clone(),
            Some(c) => self.scale(&self.ring.field.inv(c)),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.mono.degree() == degree)
                .cloned()
                .collect(),
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> F::Elem {
        self.terms
            .iter()
            .find(|t| &t.mono == m)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let f = &self.ring.field;
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match ord.cmp(&a.mono, &b.mono) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let coeff = if subtract { f.neg(&b.coeff) } else { b.coeff.clone() };
                    out.push(Term {
                        coeff,
                        mono: b.mono.clone(),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = if subtract {
                        f.sub(&a.coeff, &b.coeff)
                    } else {
                        f.add(&a.coeff, &b.coeff)
                    };
                    if !f.is_zero(&coeff) {
                        out.push(Term {
                            coeff,
                            mono: a.mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for b in &other.terms[j..] {
            let coeff = if subtract { f.neg(&b.coeff) } else { b.coeff.clone() };
            out.push(Term {
                coeff,
                mono: b.mono.clone(),
            });
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &Self) -> Self {
        let f = &self.ring.field;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(Term {
                    coeff: f.mul(&a.coeff, &b.coeff),
                    mono: a.mono.mul(&b.mono),
                });
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: normalize(&self.ring, raw),
        }
    }
}

fn normalize<F: Field>(ring: &Ring<F>, mut raw: Vec<Term<F::Elem>>) -> Vec<Term<F::Elem>> {
    let f = &ring.field;
    let ord = ring.order;
    raw.sort_by(|a, b| ord.cmp(&b.mono, &a.mono));
    let mut out: Vec<Term<F::Elem>> = Vec::with_capacity(raw.len());
    for t in raw {
        match out.last_mut() {
            Some(last) if last.mono == t.mono => {
                last.coeff = f.add(&last.coeff, &t.coeff);
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| !f.is_zero(&t.coeff));
    out
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<F: Field> $trait for &Polynomial<F> {
            type Output = Polynomial<F>;
            /// Panics if the operands live in different rings; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &Polynomial<F>) -> Polynomial<F> {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }

        impl<F: Field> $trait for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $method(self, rhs: Polynomial<F>) -> Polynomial<F> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let f = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f.neg(&t.coeff),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

pub(crate) fn render_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &e) in vars.iter().zip(m.exps()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.ring.field;
        for (k, t) in self.terms.iter().enumerate() {
            let negative = f.is_negative(&t.coeff);
            let magnitude = if negative { f.neg(&t.coeff) } else { t.coeff.clone() };
            if k == 0 {
                if negative {
                    write!(out, "-")?;
                }
            } else if negative {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mono = render_monomial(&self.ring.vars, &t.mono);
            if mono.is_empty() {
                write!(out, "{}", f.render(&magnitude))?;
            } else if f.is_one(&magnitude) {
                write!(out, "{mono}")?;
            } else {
                write!(out, "{}*{mono}", f.render(&magnitude))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[3, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[1, 1])), Ordering::Equal);
        // x*z < y^2 in degrevlex, but x*z > y^2 in deglex.
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(
            MonomialOrder::DegLex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])),
            Ordering::Greater
        );
        assert!(o.compare(&m(&[1]), &m(&[1, 0])).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let ring = PolyRing::new(Rationals, ["x", "y"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        let prod = &(&x + &y) * &(&x - &y);
        assert_eq!(prod, &(&x * &x) - &(&y * &y));
        assert_eq!(prod.to_string(), "x^2 - y^2");

        let gf2 = PolyRing::new(PrimeField::new(2).unwrap(), ["x", "y"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&gf2, 0);
        let y = Polynomial::var(&gf2, 1);
        let s = &x + &y;
        assert_eq!(&s * &s, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn leading_term_degrevlex() {
        let ring = PolyRing::new(Rationals, ["x", "y", "z"], MonomialOrder::DegRevLex);
        let f = Polynomial::from_terms(
            &ring,
            [
                (Rationals.from_i64(-1), m(&[0, 3, 1])),
                (Rationals.from_i64(1), m(&[4, 0, 0])),
            ],
        );
        assert_eq!(f.leading_monomial(), Some(&m(&[4, 0, 0])));
        assert_eq!(f.total_degree(), Some(4));
        assert!(f.is_homogeneous());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = PolyRing::new(Rationals, ["x"], MonomialOrder::DegRevLex);
        let b = PolyRing::new(Rationals, ["y"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&b, 0);
        assert_eq!(x.checked_add(&y), Err(Error::RingMismatch));
    }

    #[test]
    fn monomials_of_degree() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(1, 5), vec![m(&[5])]);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
        assert!(Monomial::all_of_degree(0, 1).is_empty());
    }
}

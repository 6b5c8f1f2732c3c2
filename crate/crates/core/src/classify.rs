//! Classification of codepth ≤ 3 rings from numerical invariants, and the
//! Poincaré and Bass series each class determines.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::{series_entry, RationalSeries, SeriesInputs};

/// Multiplicative class of the Tor algebra of a local ring of codepth ≤ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingClass {
    /// Complete intersection of codepth `c`; `C(0)` is a regular ring.
    C(u32),
    S,
    T,
    B,
    G(u32),
    H(u32, u32),
    CodepthAbove3,
    ZeroRing,
}

impl RingClass {
    /// The unparametrized tag used in data tables.
    pub fn tag(&self) -> &'static str {
        match self {
            RingClass::C(_) => "C",
            RingClass::S => "S",
            RingClass::T => "T",
            RingClass::B => "B",
            RingClass::G(_) => "G",
            RingClass::H(..) => "H",
            RingClass::CodepthAbove3 => "codepth > 3",
            RingClass::ZeroRing => "zero ring",
        }
    }

    /// `(p, q, r)` as fixed by the class, for codepth-3 classes.
    pub fn canonical_pqr(&self) -> Option<Pqr> {
        let (p, q, r) = match *self {
            RingClass::C(3) => (3, 1, 3),
            RingClass::T => (3, 0, 0),
            RingClass::B => (1, 1, 2),
            RingClass::G(r) => (0, 1, r as i64),
            RingClass::H(p, q) => (p as i64, q as i64, q as i64),
            _ => return None,
        };
        Some(Pqr { p, q, r })
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingClass::C(c) => write!(f, "C({c})"),
            RingClass::G(r) => write!(f, "G({r})"),
            RingClass::H(p, q) => write!(f, "H({p},{q})"),
            other => f.write_str(other.tag()),
        }
    }
}

impl FromStr for RingClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            column: 1,
            message: format!("unrecognized class `{s}`"),
        };
        let args = |body: &str| -> Result<Vec<u32>> {
            body.strip_suffix(')')
                .ok_or_else(bad)?
                .split(',')
                .map(|a| a.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        match s.trim() {
            "S" => Ok(RingClass::S),
            "T" => Ok(RingClass::T),
            "B" => Ok(RingClass::B),
            "codepth > 3" => Ok(RingClass::CodepthAbove3),
            "zero ring" => Ok(RingClass::ZeroRing),
            t => {
                if let Some(body) = t.strip_prefix("C(") {
                    match args(body)?.as_slice() {
                        [c] if *c <= 3 => Ok(RingClass::C(*c)),
                        _ => Err(bad()),
                    }
                } else if let Some(body) = t.strip_prefix("G(") {
                    match args(body)?.as_slice() {
                        [r] => Ok(RingClass::G(*r)),
                        _ => Err(bad()),
                    }
                } else if let Some(body) = t.strip_prefix("H(") {
                    match args(body)?.as_slice() {
                        [p, q] => Ok(RingClass::H(*p, *q)),
                        _ => Err(bad()),
                    }
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Ranks `p = rank A_1·A_1`, `q = rank A_1·A_2` and `r = rank δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pqr {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

/// The numerical invariants consumed by the classifier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantBundle {
    pub c: u32,
    pub e: u32,
    pub h: u32,
    pub l: i64,
    pub n: u64,
    pub m: u64,
    pub beta2: Option<u64>,
    pub beta3: Option<u64>,
    pub beta4: Option<u64>,
    /// `β_5`, used only to cross-check the `p = 3` branch.
    pub beta5: Option<u64>,
    pub mu_e_minus_2: Option<u64>,
    pub mu_e_minus_1: Option<u64>,
}

impl InvariantBundle {
    pub fn depth(&self) -> u32 {
        self.e - self.c
    }

    pub fn is_gorenstein(&self) -> bool {
        self.h == 0 && self.n == 1
    }
}

/// `C(a, b)`, zero when `a < b` or `b < 0`.
pub fn binomial(a: i64, b: i64) -> i64 {
    if b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: i64 = 1;
    for k in 0..b {
        acc = acc * (a - k) / (k + 1);
    }
    acc
}

/// `p` and `q` from `e, l, n` and `β_2, β_3, β_4`.
pub fn compute_pq(e: i64, l: i64, n: i64, beta2: i64, beta3: i64, beta4: i64) -> (i64, i64) {
    let p = n + l * e + beta2 - beta3 + binomial(e - 1, 3);
    let q = (n - p) * e + l * beta2 + beta3 - beta4 + binomial(e - 1, 4);
    (p, q)
}

/// `r` from `l, n` and `μ_{e-2}`.
pub fn compute_r(l: i64, n: i64, mu_e_minus_2: i64) -> i64 {
    l + n - mu_e_minus_2
}

#[allow(clippy::too_many_arguments)]
pub fn compute_pqr(e: i64, l: i64, n: i64, beta2: i64, beta3: i64, beta4: i64, mu_e_minus_2: i64) -> Pqr {
    let (p, q) = compute_pq(e, l, n, beta2, beta3, beta4);
    Pqr {
        p,
        q,
        r: compute_r(l, n, mu_e_minus_2),
    }
}

fn need(v: Option<u64>, name: &'static str) -> Result<i64> {
    v.map(|x| x as i64).ok_or(Error::MissingInvariant(name))
}

/// Runs the decision tree on a bundle.
///
/// Codepth above three yields [`RingClass::CodepthAbove3`]. For codepth three
/// with `h = 2` the class is `H(0,0)` without further invariants.
pub fn classify_from_invariants(b: &InvariantBundle) -> Result<RingClass> {
    match b.c {
        0 | 1 => return Ok(RingClass::C(b.c)),
        2 => {
            return Ok(if b.is_gorenstein() {
                RingClass::C(2)
            } else {
                RingClass::S
            })
        }
        3 => {}
        _ => return Ok(RingClass::CodepthAbove3),
    }
    if b.h == 2 {
        return Ok(RingClass::H(0, 0));
    }
    if b.is_gorenstein() {
        let r = b.l + 1;
        return Ok(if r == 3 {
            RingClass::C(3)
        } else {
            RingClass::G(r.max(0) as u32)
        });
    }
    let e = b.e as i64;
    let n = b.n as i64;
    let (p, q) = compute_pq(
        e,
        b.l,
        n,
        need(b.beta2, "beta2")?,
        need(b.beta3, "beta3")?,
        need(b.beta4, "beta4")?,
    );
    if p < 0 || q < 0 {
        return Err(Error::Consistency(format!("negative rank p = {p}, q = {q}")));
    }
    let h_class = RingClass::H(p as u32, q as u32);
    if q >= 2 || p == 2 || p >= 4 {
        return Ok(h_class);
    }
    let mu2 = need(b.mu_e_minus_2, "mu_e_minus_2")?;
    let r = compute_r(b.l, n, mu2);
    match p {
        0 => Ok(if q == r { h_class } else { RingClass::G(r.max(0) as u32) }),
        1 => Ok(if q == r { h_class } else { RingClass::B }),
        _ => {
            let mu1 = need(b.mu_e_minus_1, "mu_e_minus_1")?;
            Ok(if mu1 == mu2 + b.l * n - 2 {
                RingClass::T
            } else {
                h_class
            })
        }
    }
}

/// Outcome of the `β_5` test separating `T` from `H(3,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Beta5Hint {
    T,
    H3,
}

/// `τ = β_5 − β_4 − lβ_3 − (n−3)β_2 + qβ_1 − C(e−1,5)`: one for `T`, zero for
/// `H(3,q)`.
///
/// With `q = 0` and `e ≤ 5` this is `β_5 − β_4 − lβ_3 − (n−3)β_2`. The extra
/// terms come from the `t^4` coefficient and the numerator `(1+t)^{e-1}` of
/// the Poincaré series and vanish exactly in that range.
pub fn beta5_discriminant(e: i64, l: i64, n: i64, q: i64, betti: [i64; 5]) -> Result<Beta5Hint> {
    let [b1, b2, b3, b4, b5] = betti;
    let tau = b5 - b4 - l * b3 - (n - 3) * b2 + q * b1 - binomial(e - 1, 5);
    match tau {
        1 => Ok(Beta5Hint::T),
        0 => Ok(Beta5Hint::H3),
        t => Err(Error::Consistency(format!(
            "beta5 discriminant is {t}, expected 0 or 1"
        ))),
    }
}

/// Inputs `(e, d, l, n, p, q, r)` from a bundle and class.
fn series_inputs(class: RingClass, e: u32, d: u32, l: i64, n: u64) -> SeriesInputs {
    let pqr = class.canonical_pqr().unwrap_or(Pqr { p: 0, q: 0, r: 0 });
    SeriesInputs {
        e: e as i64,
        d: d as i64,
        l,
        n: n as i64,
        p: pqr.p,
        q: pqr.q,
        r: pqr.r,
    }
}

fn table_key(class: RingClass) -> Option<&'static str> {
    Some(match class {
        RingClass::C(0) => "C0",
        RingClass::C(1) => "C1",
        RingClass::C(2) => "C2",
        RingClass::C(3) => "C3",
        RingClass::S => "S",
        RingClass::T => "T",
        RingClass::B => "B",
        RingClass::G(_) => "G",
        RingClass::H(0, 0) => "H00",
        RingClass::H(..) => "H",
        _ => return None,
    })
}

/// Poincaré series `Σ β_i t^i` of a ring of the given class, reduced.
pub fn poincare_series(class: RingClass, e: u32, c: u32, l: i64, n: u64) -> Option<RationalSeries> {
    let entry = series_entry(table_key(class)?)?;
    let inputs = series_inputs(class, e, e.saturating_sub(c), l, n);
    Some(entry.poincare(&inputs).reduced())
}

/// Bass series `Σ μ_i t^i` of a ring of the given class, reduced.
pub fn bass_series(class: RingClass, e: u32, c: u32, l: i64, n: u64) -> Option<RationalSeries> {
    let entry = series_entry(table_key(class)?)?;
    let inputs = series_inputs(class, e, e.saturating_sub(c), l, n);
    Some(entry.bass(&inputs).reduced())
}

/// True iff the power series expansion of `s` begins with `observed`.
pub fn series_crosscheck(s: &RationalSeries, observed: &[i64]) -> bool {
    s.expand(observed.len()) == observed
}

//! Rational generating functions with integer coefficients, and the per-class
//! table of Poincaré and Bass series shipped in `data/series.toml`.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

/// `t^shift · numerator(t) / denominator(t)`, coefficients lowest degree
/// first. The denominator has constant term one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSeries {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    pub shift: u32,
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

fn content(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x))
}

fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = content(&v);
    if g <= 1 {
        return v;
    }
    v.into_iter().map(|x| x / g).collect()
}

fn is_zero_poly(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Pseudo-remainder of `a` by `b` (nonzero, trimmed).
fn pseudo_rem(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let lb = *b.last().unwrap();
    let db = b.len() - 1;
    while r.len() > db && !is_zero_poly(&r) {
        let lr = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, &c) in b.iter().enumerate() {
            r[i + shift] -= lr * c;
        }
        r = primitive(trim(r));
        if r.len() - 1 < db || (r.len() == 1 && r[0] == 0) {
            break;
        }
    }
    r
}

/// Primitive gcd over the integers, normalized to a positive constant term
/// when that term is nonzero.
fn poly_gcd(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut x = primitive(trim(a.to_vec()));
    let mut y = primitive(trim(b.to_vec()));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !is_zero_poly(&y) {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = trim(r);
    }
    let mut g = primitive(x);
    let lead = g.iter().find(|&&c| c != 0).copied().unwrap_or(1);
    if lead < 0 {
        g.iter_mut().for_each(|c| *c = -*c);
    }
    g
}

/// Exact quotient `a / b`; `b` divides `a` and has constant term ±1.
fn exact_div(a: &[i128], b: &[i128]) -> Vec<i128> {
    let b = trim(b.to_vec());
    if b.len() == 1 {
        return a.iter().map(|x| x / b[0]).collect();
    }
    let db = b.len() - 1;
    let lb = *b.last().unwrap();
    let mut r = a.to_vec();
    let mut q = vec![0i128; r.len().saturating_sub(db).max(1)];
    for k in (0..q.len()).rev() {
        let top = r[k + db];
        debug_assert_eq!(top % lb, 0);
        let c = top / lb;
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] -= c * bc;
        }
    }
    debug_assert!(is_zero_poly(&r));
    trim(q)
}

fn narrow(v: Vec<i128>) -> Vec<i64> {
    v.into_iter().map(|x| x as i64).collect()
}

fn widen(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

impl RationalSeries {
    pub fn new(shift: u32, numerator: Vec<i64>, denominator: Vec<i64>) -> Self {
        RationalSeries {
            numerator,
            denominator,
            shift,
        }
    }

    /// Divides out the common factor of numerator and denominator.
    pub fn reduced(&self) -> Self {
        let num = trim(widen(&self.numerator));
        let den = trim(widen(&self.denominator));
        if is_zero_poly(&num) {
            return RationalSeries::new(0, vec![0], vec![1]);
        }
        let g = poly_gcd(&num, &den);
        let mut num = exact_div(&num, &g);
        let mut den = exact_div(&den, &g);
        if den[0] < 0 {
            num.iter_mut().for_each(|c| *c = -*c);
            den.iter_mut().for_each(|c| *c = -*c);
        }
        RationalSeries::new(self.shift, narrow(num), narrow(den))
    }

    /// The first `len` power series coefficients, starting at `t^0`.
    pub fn expand(&self, len: usize) -> Vec<i64> {
        let den = &self.denominator;
        debug_assert_eq!(den.first(), Some(&1));
        let mut out = vec![0i64; len];
        let shift = self.shift as usize;
        for k in shift..len {
            let j = k - shift;
            let mut acc = self.numerator.get(j).copied().unwrap_or(0);
            for (i, &d) in den.iter().enumerate().skip(1) {
                if i > j {
                    break;
                }
                acc -= d * out[k - i];
            }
            out[k] = acc;
        }
        out
    }

    /// Equality as rational functions.
    pub fn same_function(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }

    /// The `k` with `numerator = (1+t)^k`, if any.
    fn binomial_power(&self) -> Option<usize> {
        let k = self.numerator.len().checked_sub(1)?;
        let mut row = vec![1i64];
        for _ in 0..k {
            let mut next = vec![1i64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        (row == self.numerator).then_some(k)
    }
}

/// Renders an integer polynomial in `T`, e.g. `1 - T - 4T^2`.
pub fn render_polynomial(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        if mag != 1 || i == 0 {
            out.push_str(&mag.to_string());
        }
        match i {
            0 => {}
            1 => out.push('T'),
            _ => out.push_str(&format!("T^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RationalSeries {
    /// One line: `(1 + T)^2 / (1 - T - 4T^2 - 2T^3 + T^4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.shift, self.binomial_power()) {
            (0, Some(0)) => "1".to_string(),
            (0, Some(1)) => "1 + T".to_string(),
            (0, Some(k)) => format!("(1 + T)^{k}"),
            _ => {
                let mut shifted = vec![0i64; self.shift as usize];
                shifted.extend_from_slice(&self.numerator);
                render_polynomial(&shifted)
            }
        };
        if self.denominator == [1] {
            return f.write_str(&num);
        }
        let num = if num.contains(' ') && !num.starts_with('(') {
            format!("({num})")
        } else {
            num
        };
        write!(f, "{num} / ({})", render_polynomial(&self.denominator))
    }
}

/// Values of the invariants that series coefficients may depend on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeriesInputs {
    pub e: i64,
    pub d: i64,
    pub l: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl SeriesInputs {
    fn get(&self, name: char) -> Option<i64> {
        Some(match name {
            'e' => self.e,
            'd' => self.d,
            'l' => self.l,
            'n' => self.n,
            'p' => self.p,
            'q' => self.q,
            'r' => self.r,
            _ => return None,
        })
    }
}

/// An affine expression such as `l - r` or `3 - n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    constant: i64,
    terms: Vec<(i64, char)>,
}

impl Affine {
    pub fn parse(src: &str) -> Result<Self, String> {
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty expression".into());
        }
        let mut out = Affine {
            constant: 0,
            terms: Vec::new(),
        };
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = match rest.as_bytes()[0] {
                b'+' => {
                    rest = &rest[1..];
                    1
                }
                b'-' => {
                    rest = &rest[1..];
                    -1
                }
                _ if first => 1,
                _ => return Err(format!("expected + or - in `{src}`")),
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coef, var) = match term.split_once('*') {
                Some((c, v)) => (c, Some(v)),
                None if term.chars().all(|c| c.is_ascii_digit()) => (term, None),
                None => ("1", Some(term)),
            };
            let coef: i64 = coef.parse().map_err(|_| format!("bad coefficient in `{src}`"))?;
            match var {
                None => out.constant += sign * coef,
                Some(v) => {
                    let mut chars = v.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) if SeriesInputs::default().get(c).is_some() => out.terms.push((sign * coef, c)),
                        _ => return Err(format!("unknown invariant `{v}` in `{src}`")),
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, inputs: &SeriesInputs) -> i64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, (c, v)| acc + c * inputs.get(*v).unwrap_or(0))
    }
}

#[derive(Deserialize)]
struct RawEntry {
    poincare_exponent: String,
    denominator: Vec<String>,
    bass_numerator: Vec<String>,
}

/// One row of the series table.
#[derive(Clone, Debug)]
pub struct SeriesEntry {
    poincare_exponent: Affine,
    denominator: Vec<Affine>,
    bass_numerator: Vec<Affine>,
}

impl SeriesEntry {
    fn eval_all(exprs: &[Affine], inputs: &SeriesInputs) -> Vec<i64> {
        exprs.iter().map(|a| a.eval(inputs)).collect()
    }

    pub fn denominator(&self, inputs: &SeriesInputs) -> Vec<i64> {
        Self::eval_all(&self.denominator, inputs)
    }

    /// Unreduced Poincaré series.
    pub fn poincare(&self, inputs: &SeriesInputs) -> RationalSeries {
        let k = self.poincare_exponent.eval(inputs).max(0) as usize;
        let mut num = vec![1i64];
        for _ in 0..k {
            let mut next = vec![1i64; num.len() + 1];
            for i in 1..num.len() {
                next[i] = num[i - 1] + num[i];
            }
            num = next;
        }
        RationalSeries::new(0, num, self.denominator(inputs))
    }

    /// Unreduced Bass series.
    pub fn bass(&self, inputs: &SeriesInputs) -> RationalSeries {
        RationalSeries::new(
            inputs.d.max(0) as u32,
            Self::eval_all(&self.bass_numerator, inputs),
            self.denominator(inputs),
        )
    }
}

const TABLE_SOURCE: &str = include_str!("../data/series.toml");

fn load_table(src: &str) -> Result<BTreeMap<String, SeriesEntry>, String> {
    let raw: BTreeMap<String, RawEntry> = toml::from_str(src).map_err(|e| e.to_string())?;
    let parse_all = |v: &[String]| v.iter().map(|s| Affine::parse(s)).collect::<Result<Vec<_>, _>>();
    raw.into_iter()
        .map(|(k, r)| {
            let entry = SeriesEntry {
                poincare_exponent: Affine::parse(&r.poincare_exponent)?,
                denominator: parse_all(&r.denominator)?,
                bass_numerator: parse_all(&r.bass_numerator)?,
            };
            Ok((k, entry))
        })
        .collect()
}

static TABLE: Lazy<BTreeMap<String, SeriesEntry>> =
    Lazy::new(|| load_table(TABLE_SOURCE).expect("bundled series table is malformed"));

/// Looks up a row of the bundled table by key (`C0`..`C3`, `S`, `T`, `B`,
/// `G`, `H`, `H00`).
pub fn series_entry(key: &str) -> Option<&'static SeriesEntry> {
    TABLE.get(key)
}

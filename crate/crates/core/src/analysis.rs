//! The full classification pipeline and the data table it produces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::{
    bass_series, beta5_discriminant, classify_from_invariants, compute_pq, poincare_series, Beta5Hint, InvariantBundle,
    Pqr, RingClass,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{
    basic_invariants, generic_reduction, lift_betti_numbers, presented_ring, Presentation, PresentedRing,
    ReductionConfig, ResidueData,
};
use crate::poly::{Polynomial, Ring};
use crate::series::RationalSeries;

/// Everything the pipeline learned about one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub bundle: InvariantBundle,
    pub class: RingClass,
    pub pqr: Option<Pqr>,
    pub poincare: Option<RationalSeries>,
    pub bass: Option<RationalSeries>,
}

impl Analysis {
    fn zero_ring() -> Self {
        Analysis {
            bundle: InvariantBundle::default(),
            class: RingClass::ZeroRing,
            pqr: None,
            poincare: None,
            bass: None,
        }
    }

    pub fn table(&self) -> DataTable {
        let b = &self.bundle;
        DataTable {
            c: b.c,
            e: b.e,
            h: b.h,
            m: b.m,
            n: b.n,
            class: self.class.tag().to_string(),
            p: self.pqr.map(|x| x.p),
            q: self.pqr.map(|x| x.q),
            r: self.pqr.map(|x| x.r),
            poincare_series: self.poincare.clone(),
            bass_series: self.bass.clone(),
        }
    }
}

/// Lazily computed data on a depth-zero model `R/(x)` of `R`.
struct DepthZeroModel<'a, F: Field> {
    ring: &'a PresentedRing<F>,
    depth: u32,
    cfg: &'a ReductionConfig,
    model: Option<PresentedRing<F>>,
    data: Option<ResidueData<F>>,
}

impl<'a, F: Field> DepthZeroModel<'a, F> {
    fn new(ring: &'a PresentedRing<F>, depth: u32, cfg: &'a ReductionConfig) -> Self {
        DepthZeroModel {
            ring,
            depth,
            cfg,
            model: None,
            data: None,
        }
    }

    fn data(&mut self, steps: usize) -> Result<&ResidueData<F>> {
        if self.model.is_none() {
            self.model = Some(generic_reduction(self.ring, self.depth, self.cfg)?);
        }
        let stale = self.data.as_ref().is_none_or(|d| d.resolution().steps() < steps);
        if stale {
            let model = self.model.as_ref().expect("model computed above");
            self.data = Some(ResidueData::new(model, steps)?);
        }
        Ok(self.data.as_ref().expect("data computed above"))
    }

    /// `β_0 … β_top` of `R`.
    fn betti(&mut self, top: usize) -> Result<Vec<u64>> {
        let depth = self.depth;
        let reduced = self.data(top)?.betti_numbers();
        Ok(lift_betti_numbers(&reduced[..=top], depth))
    }

    /// `μ_{d+i}(R) = μ_i(R/(x))`.
    fn bass(&mut self, i: usize) -> Result<u64> {
        self.data(i + 1)?.bass_number(i)
    }
}

/// Runs the pipeline on `Q/I`.
pub fn analyze<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>], cfg: &ReductionConfig) -> Result<Analysis> {
    match presented_ring(ring, gens)? {
        Presentation::ZeroRing => Ok(Analysis::zero_ring()),
        Presentation::Ring(p) => analyze_presented(&p, cfg),
    }
}

/// Classifies a presented ring, computing Betti and Bass numbers only when
/// the decision tree asks for them.
pub fn analyze_presented<F: Field>(ring: &PresentedRing<F>, cfg: &ReductionConfig) -> Result<Analysis> {
    let mut bundle = basic_invariants(ring)?.bundle;
    let mut model = DepthZeroModel::new(ring, bundle.depth(), cfg);
    let class = loop {
        match classify_from_invariants(&bundle) {
            Ok(class) => break class,
            Err(Error::MissingInvariant("beta2" | "beta3" | "beta4")) => {
                let betti = model.betti(4)?;
                bundle.beta2 = Some(betti[2]);
                bundle.beta3 = Some(betti[3]);
                bundle.beta4 = Some(betti[4]);
            }
            Err(Error::MissingInvariant("mu_e_minus_2")) => {
                bundle.mu_e_minus_2 = Some(model.bass(1)?);
            }
            Err(Error::MissingInvariant("mu_e_minus_1")) => {
                bundle.mu_e_minus_1 = Some(model.bass(2)?);
            }
            Err(e) => return Err(e),
        }
    };
    if let Some(p) = p_of(&bundle).filter(|&p| p == 3) {
        check_beta5(&mut bundle, &mut model, class, p)?;
    }
    let pqr = if bundle.c == 3 { class.canonical_pqr() } else { None };
    let (poincare, bass) = if bundle.c <= 3 {
        (
            poincare_series(class, bundle.e, bundle.c, bundle.l, bundle.n),
            bass_series(class, bundle.e, bundle.c, bundle.l, bundle.n),
        )
    } else {
        (None, None)
    };
    Ok(Analysis {
        bundle,
        class,
        pqr,
        poincare,
        bass,
    })
}

fn p_of(b: &InvariantBundle) -> Option<i64> {
    let (b2, b3, b4) = (b.beta2?, b.beta3?, b.beta4?);
    Some(compute_pq(b.e as i64, b.l, b.n as i64, b2 as i64, b3 as i64, b4 as i64).0)
}

/// The `β_5` relation must agree with the Bass-number test when `p = 3`.
fn check_beta5<F: Field>(
    bundle: &mut InvariantBundle,
    model: &mut DepthZeroModel<'_, F>,
    class: RingClass,
    p: i64,
) -> Result<()> {
    let betti = model.betti(5)?;
    bundle.beta5 = Some(betti[5]);
    let (_, q) = compute_pq(
        bundle.e as i64,
        bundle.l,
        bundle.n as i64,
        betti[2] as i64,
        betti[3] as i64,
        betti[4] as i64,
    );
    let b: [i64; 5] = std::array::from_fn(|i| betti[i + 1] as i64);
    let hint = beta5_discriminant(bundle.e as i64, bundle.l, bundle.n as i64, q, b)?;
    let agrees = matches!(
        (hint, class),
        (Beta5Hint::T, RingClass::T) | (Beta5Hint::H3, RingClass::H(3, _))
    );
    if agrees {
        Ok(())
    } else {
        Err(Error::Consistency(format!(
            "p = {p}: Bass numbers give {class} but the beta5 relation gives {hint:?}"
        )))
    }
}

/// `β_0 … β_top` and `μ_d … μ_{d+bass_len-1}` of a ring, computed directly
/// (through a generic reduction when the depth is positive).
pub fn observed_numbers<F: Field>(
    ring: &PresentedRing<F>,
    top: usize,
    bass_len: usize,
    cfg: &ReductionConfig,
) -> Result<(Vec<u64>, Vec<u64>)> {
    let bundle = basic_invariants(ring)?.bundle;
    let mut model = DepthZeroModel::new(ring, bundle.depth(), cfg);
    model.data(top.max(bass_len))?;
    let betti = model.betti(top)?;
    let bass = (0..bass_len).map(|i| model.bass(i)).collect::<Result<_>>()?;
    Ok((betti, bass))
}

/// The keys of the data table, in output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataKey {
    C,
    E,
    H,
    M,
    N,
    Class,
    P,
    Q,
    R,
    PoincareSeries,
    BassSeries,
}

impl DataKey {
    pub const ALL: [DataKey; 11] = [
        DataKey::C,
        DataKey::E,
        DataKey::H,
        DataKey::M,
        DataKey::N,
        DataKey::Class,
        DataKey::P,
        DataKey::Q,
        DataKey::R,
        DataKey::PoincareSeries,
        DataKey::BassSeries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DataKey::C => "c",
            DataKey::E => "e",
            DataKey::H => "h",
            DataKey::M => "m",
            DataKey::N => "n",
            DataKey::Class => "Class",
            DataKey::P => "p",
            DataKey::Q => "q",
            DataKey::R => "r",
            DataKey::PoincareSeries => "PoincareSeries",
            DataKey::BassSeries => "BassSeries",
        }
    }
}

impl fmt::Display for DataKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DataKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKey(s.to_string()))
    }
}

/// The data table of one ring. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataTable {
    pub c: u32,
    pub e: u32,
    pub h: u32,
    pub m: u64,
    pub n: u64,
    #[serde(rename = "Class")]
    pub class: String,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub r: Option<i64>,
    #[serde(rename = "PoincareSeries")]
    pub poincare_series: Option<RationalSeries>,
    #[serde(rename = "BassSeries")]
    pub bass_series: Option<RationalSeries>,
}

impl DataTable {
    /// Text rendering of one value; absent values render as `null`.
    pub fn value_text(&self, key: DataKey) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "null".to_string(), T::to_string)
        }
        match key {
            DataKey::C => self.c.to_string(),
            DataKey::E => self.e.to_string(),
            DataKey::H => self.h.to_string(),
            DataKey::M => self.m.to_string(),
            DataKey::N => self.n.to_string(),
            DataKey::Class => self.class.clone(),
            DataKey::P => opt(&self.p),
            DataKey::Q => opt(&self.q),
            DataKey::R => opt(&self.r),
            DataKey::PoincareSeries => opt(&self.poincare_series),
            DataKey::BassSeries => opt(&self.bass_series),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::poly::{MonomialOrder, PolyRing};

    #[test]
    fn keys_round_trip() {
        for k in DataKey::ALL {
            assert_eq!(k.name().parse::<DataKey>().unwrap(), k);
        }
        assert_eq!("z".parse::<DataKey>(), Err(Error::UnknownKey("z".into())));
    }

    #[test]
    fn flagship_pipeline() {
        let r = PolyRing::new(Rationals, ["x", "y", "z"], MonomialOrder::DegRevLex);
        let v = |i| Polynomial::var(&r, i);
        let (x, y, z) = (v(0), v(1), v(2));
        let gens = vec![
            &(&x * &y) * &y,
            &(&x * &y) * &z,
            &(&y * &z) * &z,
            &x.pow(4) - &(&y.pow(3) * &z),
            &(&x * &z.pow(3)) - &y.pow(4),
        ];
        let a = analyze(&r, &gens, &ReductionConfig::default()).unwrap();
        assert_eq!(a.class, RingClass::G(2));
        let t = a.table();
        assert_eq!((t.c, t.e, t.h, t.m, t.n), (3, 3, 1, 5, 2));
        assert_eq!((t.p, t.q, t.r), (Some(0), Some(1), Some(2)));
        assert_eq!(t.class, "G");
        assert_eq!(
            t.value_text(DataKey::PoincareSeries),
            "(1 + T)^2 / (1 - T - 4T^2 - 2T^3 + T^4)"
        );
    }
}

//! Centralizers, component groups over F₂, splittings `S_{ψ,2}/conj` and the
//! elliptic endoscopic data they determine.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::bits::{Bits, F2Map};
use crate::catalog::{Catalog, Duality};
use crate::error::{Error, Result};
use crate::parameters::{associated_l_parameter, ArthurParameter, Bucket, HalfInt, Summand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    O,
    Sp,
    GL,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerFactor {
    pub summand: Summand,
    pub kind: FactorKind,
    pub size: u32,
}

impl fmt::Display for CentralizerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            FactorKind::O => "O",
            FactorKind::Sp => "Sp",
            FactorKind::GL => "GL",
        };
        write!(f, "{k}({})", self.size)
    }
}

/// `S_ψ = ∏_{I⁺} O(m_i) × ∏_{I⁻} Sp(m_i) × ∏_J GL(m_j)`.
pub fn centralizer(psi: &ArthurParameter) -> Vec<CentralizerFactor> {
    psi.split_keys()
        .iter()
        .map(|&k| {
            let s = &psi.summands()[k];
            let kind = match psi.info()[k].bucket {
                Bucket::Iplus => FactorKind::O,
                Bucket::Iminus => FactorKind::Sp,
                Bucket::Jpair => FactorKind::GL,
            };
            CentralizerFactor {
                summand: s.clone(),
                kind,
                size: s.mult,
            }
        })
        .collect()
}

/// `𝒮_ψ ≅ μ₂^{I⁺}` with basis the I⁺ summands in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentGroup {
    pub basis: Vec<Summand>,
}

impl ComponentGroup {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u64 {
        1 << self.rank()
    }

    pub fn elements(&self) -> impl Iterator<Item = Bits> {
        Bits::all(self.rank())
    }

    pub fn identity(&self) -> Bits {
        Bits::zero(self.rank())
    }
}

pub fn component_group(psi: &ArthurParameter) -> ComponentGroup {
    ComponentGroup {
        basis: psi.basis().iter().map(|&k| psi.summands()[k].clone()).collect(),
    }
}

/// `(x_ψ, z)`: the image of `s_ψ` (bits at even `b`) and of `−1` (bits `m mod 2`).
pub fn distinguished_elements(psi: &ArthurParameter) -> (Bits, Bits) {
    let r = psi.basis().len();
    let mut x = Bits::zero(r);
    let mut z = Bits::zero(r);
    for (pos, &k) in psi.basis().iter().enumerate() {
        let s = &psi.summands()[k];
        x.set(pos, s.b.is_multiple_of(2));
        z.set(pos, s.mult % 2 == 1);
    }
    (x, z)
}

/// A class in `S_{ψ,2}/conj`, as eigenvalue multiplicities `(m′, m″)` per
/// splitting key (see [`ArthurParameter::split_keys`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Splitting {
    pub parts: Vec<(u32, u32)>,
}

impl Splitting {
    pub fn trivial(psi: &ArthurParameter) -> Splitting {
        Splitting {
            parts: psi
                .split_keys()
                .iter()
                .map(|&k| (psi.summands()[k].mult, 0))
                .collect(),
        }
    }

    /// The all-minus class `s = −1`.
    pub fn minus_one(psi: &ArthurParameter) -> Splitting {
        Splitting {
            parts: psi
                .split_keys()
                .iter()
                .map(|&k| (0, psi.summands()[k].mult))
                .collect(),
        }
    }

    /// `m″` of the splitting entry belonging to summand `k`, if any.
    pub fn m_dblprime_of(&self, psi: &ArthurParameter, k: usize) -> Option<u32> {
        psi.info()[k].split_index.map(|j| self.parts[j].1)
    }

    pub fn validate(&self, psi: &ArthurParameter) -> Result<()> {
        let bad = |why: &str| Err(Error::consistency(format!("splitting of {psi}"), why.to_string()));
        if self.parts.len() != psi.split_keys().len() {
            return bad("one entry per splitting key");
        }
        for (&(m1, m2), &k) in self.parts.iter().zip(psi.split_keys()) {
            if m1 + m2 != psi.summands()[k].mult {
                return bad("m′ + m″ = m");
            }
            if psi.info()[k].bucket == Bucket::Iminus && m2 % 2 != 0 {
                return bad("m″ is even on orthogonal-type keys");
            }
        }
        Ok(())
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(a, b)| format!("({a},{b})")).collect();
        f.write_str(&parts.join(""))
    }
}

pub fn enumerate_splittings(psi: &ArthurParameter) -> Vec<Splitting> {
    let choices: Vec<Vec<u32>> = psi
        .split_keys()
        .iter()
        .map(|&k| {
            let m = psi.summands()[k].mult;
            match psi.info()[k].bucket {
                Bucket::Iminus => (0..=m).step_by(2).collect(),
                _ => (0..=m).collect(),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(choices.len());
    splittings_rec(psi, &choices, &mut cur, &mut out);
    out
}

fn splittings_rec(psi: &ArthurParameter, choices: &[Vec<u32>], cur: &mut Vec<(u32, u32)>, out: &mut Vec<Splitting>) {
    let j = cur.len();
    if j == choices.len() {
        out.push(Splitting { parts: cur.clone() });
        return;
    }
    let m = psi.summands()[psi.split_keys()[j]].mult;
    for &m2 in &choices[j] {
        cur.push((m - m2, m2));
        splittings_rec(psi, choices, cur, out);
        cur.pop();
    }
}

/// Image in `𝒮_ψ`: bit at `i ∈ I⁺` is `m″_i mod 2`.
pub fn splitting_image(psi: &ArthurParameter, s: &Splitting) -> Bits {
    let mut x = Bits::zero(psi.basis().len());
    for (pos, &k) in psi.basis().iter().enumerate() {
        let j = psi.info()[k].split_index.expect("I⁺ summands are splitting keys");
        x.set(pos, s.parts[j].1 % 2 == 1);
    }
    x
}

/// An elliptic endoscopic datum `(n′, n″)`, ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndoscopicDatum {
    pub n_prime: u32,
    pub n_dblprime: u32,
}

impl Serialize for EndoscopicDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.n_prime, self.n_dblprime].serialize(s)
    }
}

impl fmt::Display for EndoscopicDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n_prime, self.n_dblprime)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoscopicImage {
    pub datum: EndoscopicDatum,
    pub psi_prime: Vec<Summand>,
    pub psi_dblprime: Vec<Summand>,
}

/// `m″` for every summand, J partners reading the entry of their representative.
pub fn m_dblprime_per_summand(psi: &ArthurParameter, s: &Splitting) -> Vec<u32> {
    psi.summands()
        .iter()
        .zip(psi.info())
        .map(|(summand, info)| match info.split_index {
            Some(j) => s.parts[j].1,
            None => {
                let partner = psi
                    .summands()
                    .iter()
                    .position(|t| t.constituent == info.dual_id && t.b == summand.b)
                    .expect("J pairs are complete");
                let j = psi.info()[partner].split_index.expect("partner is the representative");
                s.parts[j].1
            }
        })
        .collect()
}

/// `(n′, n″)` together with `ψ′ = ⊕ m′_i ψ_i` and `ψ″ = ⊕ m″_i ψ_i`; J pairs
/// send `m′` (resp. `m″`) copies of both members to each side.
pub fn splitting_to_endoscopic(psi: &ArthurParameter, s: &Splitting) -> EndoscopicImage {
    let mut prime = Vec::new();
    let mut dbl = Vec::new();
    let (mut dim1, mut dim2) = (0, 0);
    let m2s = m_dblprime_per_summand(psi, s);
    for ((summand, info), m2) in psi.summands().iter().zip(psi.info()).zip(m2s) {
        let m1 = summand.mult - m2;
        let weight = info.full_dim * summand.b;
        if m1 > 0 {
            prime.push(Summand::new(summand.constituent.clone(), summand.b, m1));
            dim1 += m1 * weight;
        }
        if m2 > 0 {
            dbl.push(Summand::new(summand.constituent.clone(), summand.b, m2));
            dim2 += m2 * weight;
        }
    }
    EndoscopicImage {
        datum: EndoscopicDatum {
            n_prime: dim1 / 2,
            n_dblprime: dim2 / 2,
        },
        psi_prime: prime,
        psi_dblprime: dbl,
    }
}

/// Merges `ψ′ ⊕ ψ″` back into `ψ` and recovers the splitting.
pub fn merge_endoscopic(cat: &Catalog, image: &EndoscopicImage) -> Result<(ArthurParameter, Splitting)> {
    let mut all = image.psi_prime.clone();
    all.extend(image.psi_dblprime.iter().cloned());
    let psi = ArthurParameter::new(cat, all)?;
    let parts = psi
        .split_keys()
        .iter()
        .map(|&k| {
            let s = &psi.summands()[k];
            let m2 = image
                .psi_dblprime
                .iter()
                .filter(|t| t.constituent == s.constituent && t.b == s.b)
                .map(|t| t.mult)
                .sum::<u32>();
            (s.mult - m2, m2)
        })
        .collect();
    Ok((psi, Splitting { parts }))
}

/// `ι(G̃, G!) = |Z_{(G!)∨}|⁻¹ = 2^{−#{nonzero among n′, n″}}`.
pub fn iota_coefficient(e: EndoscopicDatum) -> Ratio<u64> {
    Ratio::new(1, center_order(e))
}

/// `|Z_{(G!)∨}|`.
pub fn center_order(e: EndoscopicDatum) -> u64 {
    let factors = (e.n_prime > 0) as u32 + (e.n_dblprime > 0) as u32;
    1 << factors
}

/// The surjection `𝒮_ψ → 𝒮_{φ_ψ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentMap {
    /// Symplectic constituents occurring in `φ_ψ` with shift 0.
    pub target_basis: Vec<String>,
    #[serde(skip)]
    pub map: F2Map,
}

impl ComponentMap {
    pub fn apply(&self, x: &Bits) -> Bits {
        self.map.apply(x)
    }
}

/// Generator `i` goes to `[φ_i]` when `b_i` is odd and to 0 otherwise.
pub fn component_map_to_phi(cat: &Catalog, psi: &ArthurParameter) -> Result<ComponentMap> {
    let phi = associated_l_parameter(psi)?;
    let mut target_basis = Vec::new();
    for e in &phi.entries {
        if e.shift == HalfInt::ZERO && cat.constituent(&e.constituent)?.duality == Duality::Symplectic {
            target_basis.push(e.constituent.clone());
        }
    }
    let columns = psi
        .basis()
        .iter()
        .map(|&k| {
            let s = &psi.summands()[k];
            let mut col = Bits::zero(target_basis.len());
            if s.b % 2 == 1 {
                let j = target_basis.iter().position(|t| *t == s.constituent).expect("odd b gives a shift-0 copy");
                col.set(j, true);
            }
            col
        })
        .collect();
    Ok(ComponentMap {
        map: F2Map::new(target_basis.len(), columns),
        target_basis,
    })
}

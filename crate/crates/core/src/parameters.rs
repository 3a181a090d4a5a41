//! Local Arthur parameters as canonical multisets of `φ ⊠ r(b)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{twist_constituent, Catalog, Duality};
use crate::error::{Error, Result};
use crate::mu4::{Mu4, Sign};

/// Largest `2n` accepted by the enumerator.
pub const MAX_TOTAL_DIM: u32 = 64;

/// An exact half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(t: i32) -> HalfInt {
        HalfInt(t)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<HalfInt> {
        let bad = || Error::Schema(format!("invalid half-integer `{s}`"));
        match s.split_once('/') {
            Some((num, "2")) => {
                let n: i32 = num.trim().parse().map_err(|_| bad())?;
                if n % 2 == 0 {
                    return Err(bad());
                }
                Ok(HalfInt(n))
            }
            Some(_) => Err(bad()),
            None => {
                let n: i32 = s.trim().parse().map_err(|_| bad())?;
                Ok(HalfInt(2 * n))
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<HalfInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summand {
    pub constituent: String,
    pub b: u32,
    pub mult: u32,
}

impl Summand {
    pub fn new(constituent: impl Into<String>, b: u32, mult: u32) -> Summand {
        Summand {
            constituent: constituent.into(),
            b,
            mult,
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult == 1 {
            write!(f, "{}⊠r({})", self.constituent, self.b)
        } else {
            write!(f, "{}({}⊠r({}))", self.mult, self.constituent, self.b)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Bucket {
    Iplus,
    Iminus,
    Jpair,
}

impl Bucket {
    pub fn of(duality: &Duality, b: u32) -> Bucket {
        match duality.with_sl2(b) {
            Duality::Symplectic => Bucket::Iplus,
            Duality::Orthogonal => Bucket::Iminus,
            Duality::NonSelfDual { .. } => Bucket::Jpair,
        }
    }
}

/// Catalog data resolved once per summand.
#[derive(Clone, Debug)]
pub struct SummandInfo {
    pub bucket: Bucket,
    /// For `Jpair`: whether this summand is the canonical representative.
    pub representative: bool,
    pub dual_id: String,
    /// `dim φ` including the Deligne-SL₂ factor.
    pub full_dim: u32,
    pub sl2_dim: u32,
    pub det_at_minus_one: Sign,
    pub root_number: Option<Mu4>,
    pub unbounded: bool,
    pub unramified_character: bool,
    /// Position in the component-group basis (I⁺ summands only).
    pub basis_index: Option<usize>,
    /// Position among splitting keys (I⁺, I⁻ and J representatives).
    pub split_index: Option<usize>,
}

/// A validated local Arthur parameter in canonical order.
#[derive(Clone, Debug)]
pub struct ArthurParameter {
    summands: Vec<Summand>,
    info: Vec<SummandInfo>,
    basis: Vec<usize>,
    split_keys: Vec<usize>,
}

impl PartialEq for ArthurParameter {
    fn eq(&self, other: &Self) -> bool {
        self.summands == other.summands
    }
}

impl Eq for ArthurParameter {}

impl PartialOrd for ArthurParameter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ArthurParameter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.summands.cmp(&other.summands)
    }
}

impl std::hash::Hash for ArthurParameter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.summands.hash(state);
    }
}

impl fmt::Display for ArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

impl Serialize for ArthurParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.summands.serialize(s)
    }
}

/// Merges repeated keys and sorts by `(constituent, b)`.
pub fn canonicalize(summands: Vec<Summand>) -> Vec<Summand> {
    let mut v = summands;
    v.sort();
    let mut out: Vec<Summand> = Vec::with_capacity(v.len());
    for s in v {
        match out.last_mut() {
            Some(last) if last.constituent == s.constituent && last.b == s.b => last.mult += s.mult,
            _ => out.push(s),
        }
    }
    out
}

impl ArthurParameter {
    pub fn new(cat: &Catalog, summands: Vec<Summand>) -> Result<ArthurParameter> {
        let summands = canonicalize(summands);
        let mut info = Vec::with_capacity(summands.len());
        for s in &summands {
            if s.b == 0 || s.mult == 0 {
                return Err(Error::consistency(
                    format!("summand {s}"),
                    "b and mult are positive",
                ));
            }
            let c = cat.constituent(&s.constituent)?;
            let bucket = Bucket::of(&c.duality, s.b);
            info.push(SummandInfo {
                bucket,
                representative: bucket == Bucket::Jpair && c.id.as_str() < c.dual_id(),
                dual_id: c.dual_id().to_string(),
                full_dim: c.full_dim(),
                sl2_dim: c.sl2_dim,
                det_at_minus_one: c.det_at_minus_one,
                root_number: c.root_number,
                unbounded: c.unbounded,
                unramified_character: c.is_unramified_character,
                basis_index: None,
                split_index: None,
            });
        }
        ArthurParameter::assemble(summands, info)
    }

    /// Checks parity and pairing rules and fixes the bases; `summands` must be
    /// canonical and `info` parallel to it.
    pub(crate) fn assemble(summands: Vec<Summand>, mut info: Vec<SummandInfo>) -> Result<ArthurParameter> {
        for (s, i) in summands.iter().zip(&info) {
            match i.bucket {
                Bucket::Iminus if s.mult % 2 != 0 => {
                    return Err(Error::consistency(
                        format!("summand {s}"),
                        "orthogonal-type summands have even multiplicity",
                    ))
                }
                Bucket::Jpair => {
                    let partner = summands
                        .iter()
                        .find(|t| t.constituent == i.dual_id && t.b == s.b);
                    if partner.map(|t| t.mult) != Some(s.mult) {
                        return Err(Error::consistency(
                            format!("summand {s}"),
                            "the dual summand with equal b and mult is present",
                        ));
                    }
                }
                _ => {}
            }
        }
        let mut basis = Vec::new();
        let mut split_keys = Vec::new();
        for (k, i) in info.iter_mut().enumerate() {
            if i.bucket == Bucket::Iplus {
                i.basis_index = Some(basis.len());
                basis.push(k);
            }
            if i.bucket != Bucket::Jpair || i.representative {
                i.split_index = Some(split_keys.len());
                split_keys.push(k);
            }
        }
        Ok(ArthurParameter {
            summands,
            info,
            basis,
            split_keys,
        })
    }

    pub fn from_json(cat: &Catalog, text: &str) -> Result<ArthurParameter> {
        let summands: Vec<Summand> =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        ArthurParameter::new(cat, summands)
    }

    pub fn empty() -> ArthurParameter {
        ArthurParameter {
            summands: Vec::new(),
            info: Vec::new(),
            basis: Vec::new(),
            split_keys: Vec::new(),
        }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn info(&self) -> &[SummandInfo] {
        &self.info
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Summand indices of the I⁺ part, in basis order.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Summand indices carrying a splitting entry.
    pub fn split_keys(&self) -> &[usize] {
        &self.split_keys
    }

    /// `2n = Σ mult · dim φ · b`.
    pub fn dim(&self) -> u32 {
        self.summands
            .iter()
            .zip(&self.info)
            .map(|(s, i)| s.mult * i.full_dim * s.b)
            .sum()
    }

    pub fn n(&self) -> u32 {
        self.dim() / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub buckets: Vec<Bucket>,
    pub good_parity: bool,
    pub discrete: bool,
    pub anti_tempered: bool,
    pub unramified: bool,
    pub in_psi_star: bool,
    pub principal: bool,
}

pub fn classify(psi: &ArthurParameter) -> Classification {
    let info = psi.info();
    let good_parity = info.iter().all(|i| i.bucket == Bucket::Iplus);
    let discrete = good_parity && psi.summands().iter().all(|s| s.mult == 1);
    // ψ̂ has every b equal to 1 exactly when every constituent has a = 1.
    let anti_tempered = info.iter().all(|i| i.sl2_dim == 1);
    let unramified = info.iter().all(|i| i.unramified_character);
    let has_unramified_char = info.iter().any(|i| i.unramified_character);
    let principal = psi.len() == 1
        && psi.summands()[0].mult == 1
        && psi.summands()[0].b.is_multiple_of(2)
        && info[0].full_dim == 1
        && info[0].bucket == Bucket::Iplus;
    Classification {
        buckets: info.iter().map(|i| i.bucket).collect(),
        good_parity,
        discrete,
        anti_tempered,
        unramified,
        in_psi_star: good_parity && anti_tempered && !has_unramified_char,
        principal,
    }
}

/// One entry `φ|·|^shift` with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LEntry {
    pub constituent: String,
    pub shift: HalfInt,
    pub mult: u32,
}

/// A multiset of shifted constituents in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct LParameter {
    pub entries: Vec<LEntry>,
}

impl LParameter {
    pub fn new(entries: Vec<LEntry>) -> LParameter {
        let mut v = entries;
        v.sort();
        let mut out: Vec<LEntry> = Vec::with_capacity(v.len());
        for e in v {
            match out.last_mut() {
                Some(last) if last.constituent == e.constituent && last.shift == e.shift => {
                    last.mult += e.mult
                }
                _ => out.push(e),
            }
        }
        LParameter { entries: out }
    }

    pub fn mult_of(&self, constituent: &str, shift: HalfInt) -> u32 {
        self.entries
            .iter()
            .find(|e| e.constituent == constituent && e.shift == shift)
            .map_or(0, |e| e.mult)
    }

    pub fn dim(&self, cat: &Catalog) -> Result<u32> {
        self.entries.iter().try_fold(0, |acc, e| {
            Ok(acc + e.mult * cat.constituent(&e.constituent)?.full_dim())
        })
    }
}

impl fmt::Display for LParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let body = if e.shift.is_zero() {
                    e.constituent.clone()
                } else {
                    format!("{}|·|^{}", e.constituent, e.shift)
                };
                if e.mult == 1 {
                    body
                } else {
                    format!("{}·{}", e.mult, body)
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// `ψ|_{L_F} = ⊕ m_i b_i φ_i`.
pub fn restriction_to_lf(psi: &ArthurParameter) -> LParameter {
    LParameter::new(
        psi.summands()
            .iter()
            .map(|s| LEntry {
                constituent: s.constituent.clone(),
                shift: HalfInt::ZERO,
                mult: s.mult * s.b,
            })
            .collect(),
    )
}

/// `φ_ψ = ⊕ m_i ⊕_{h=0}^{b_i−1} φ_i |·|^{(b_i−1)/2 − h}`.
pub fn associated_l_parameter(psi: &ArthurParameter) -> Result<LParameter> {
    let mut entries = Vec::new();
    for (s, i) in psi.summands().iter().zip(psi.info()) {
        if i.unbounded {
            return Err(Error::UnboundedConstituent(s.constituent.clone()));
        }
        for h in 0..s.b as i32 {
            entries.push(LEntry {
                constituent: s.constituent.clone(),
                shift: HalfInt::from_twice(s.b as i32 - 1 - 2 * h),
                mult: s.mult,
            });
        }
    }
    Ok(LParameter::new(entries))
}

/// Swaps the Deligne and Arthur SL₂ factors summand by summand.
pub fn dual_parameter(cat: &Catalog, psi: &ArthurParameter) -> Result<ArthurParameter> {
    let mut out = Vec::with_capacity(psi.len());
    for s in psi.summands() {
        let c = cat.constituent(&s.constituent)?;
        let (core, a) = match &c.sl2_core {
            Some(core) => (core.as_str(), c.sl2_dim),
            None if c.sl2_dim == 1 => (c.id.as_str(), 1),
            None => {
                return Err(Error::UnsupportedSwap {
                    core: c.id.clone(),
                    size: 1,
                })
            }
        };
        let target = cat.sl2_swap(core, s.b)?;
        out.push(Summand::new(target.id.clone(), a, s.mult));
    }
    ArthurParameter::new(cat, out)
}

/// Index correspondence between the bases of `ψ` and `ψ̂`: entry `k` is the
/// position in `ψ̂`'s basis of `ψ`'s `k`-th basis element.
pub fn dual_basis_map(cat: &Catalog, psi: &ArthurParameter, dual: &ArthurParameter) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(psi.basis().len());
    for &k in psi.basis() {
        let s = &psi.summands()[k];
        let image = dual_parameter(cat, &ArthurParameter::new(cat, vec![s.clone()])?)?;
        let key = &image.summands()[0];
        let pos = dual
            .summands()
            .iter()
            .position(|t| t.constituent == key.constituent && t.b == key.b)
            .and_then(|p| dual.info()[p].basis_index)
            .ok_or_else(|| Error::consistency(format!("{psi}"), "ψ and ψ̂ have matching bases"))?;
        out.push(pos);
    }
    Ok(out)
}

/// `ψζ`: every constituent twisted by the quadratic character `zeta`.
pub fn twist_parameter(cat: &Catalog, psi: &ArthurParameter, zeta: &str) -> Result<ArthurParameter> {
    let summands = psi
        .summands()
        .iter()
        .map(|s| Ok(Summand::new(twist_constituent(cat, &s.constituent, zeta)?, s.b, s.mult)))
        .collect::<Result<Vec<_>>>()?;
    ArthurParameter::new(cat, summands)
}

/// `(ψ₀, ψ_GL)` with `ψ₀ = ⊕_{I⁺} m_i ψ_i` and
/// `ψ_GL = ⊕_{I⁻} (m_i/2) ψ_i ⊕ ⊕_J m_j ψ_j`.
pub fn good_parity_reduction(cat: &Catalog, psi: &ArthurParameter) -> Result<(ArthurParameter, Vec<Summand>)> {
    let mut good = Vec::new();
    let mut gl = Vec::new();
    for (s, i) in psi.summands().iter().zip(psi.info()) {
        match i.bucket {
            Bucket::Iplus => good.push(s.clone()),
            Bucket::Iminus => gl.push(Summand::new(s.constituent.clone(), s.b, s.mult / 2)),
            Bucket::Jpair if i.representative => gl.push(s.clone()),
            Bucket::Jpair => {}
        }
    }
    Ok((ArthurParameter::new(cat, good)?, canonicalize(gl)))
}

/// Dimension `Σ mult · dim φ · b` of a plain summand list.
pub fn summands_dim(cat: &Catalog, summands: &[Summand]) -> Result<u32> {
    summands.iter().try_fold(0, |acc, s| {
        Ok(acc + s.mult * s.b * cat.constituent(&s.constituent)?.full_dim())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    All,
    GoodParity,
    Discrete,
}

impl FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Restriction> {
        match s {
            "all" => Ok(Restriction::All),
            "good_parity" => Ok(Restriction::GoodParity),
            "discrete" => Ok(Restriction::Discrete),
            other => Err(Error::Schema(format!("unknown restriction `{other}`"))),
        }
    }
}

struct Block {
    summand_ids: Vec<String>,
    b: u32,
    weight: u32,
    mult_step: u32,
    max_count: u32,
}

/// Every parameter of dimension `2n` over the catalog, in canonical order.
pub fn enumerate_parameters(cat: &Catalog, n: u32, restriction: Restriction) -> Result<Vec<ArthurParameter>> {
    let total = 2 * n;
    if total > MAX_TOTAL_DIM {
        return Err(Error::consistency(
            format!("n = {n}"),
            format!("2n ≤ {MAX_TOTAL_DIM}"),
        ));
    }
    let mut blocks = Vec::new();
    for c in cat.constituents() {
        for b in 1..=total {
            let w = c.full_dim() * b;
            if w > total {
                break;
            }
            let block = match Bucket::of(&c.duality, b) {
                Bucket::Iplus => Block {
                    summand_ids: vec![c.id.clone()],
                    b,
                    weight: w,
                    mult_step: 1,
                    max_count: if restriction == Restriction::Discrete { 1 } else { u32::MAX },
                },
                _ if restriction != Restriction::All => continue,
                Bucket::Iminus => Block {
                    summand_ids: vec![c.id.clone()],
                    b,
                    weight: 2 * w,
                    mult_step: 2,
                    max_count: u32::MAX,
                },
                Bucket::Jpair if c.id.as_str() < c.dual_id() => Block {
                    summand_ids: vec![c.id.clone(), c.dual_id().to_string()],
                    b,
                    weight: 2 * w,
                    mult_step: 1,
                    max_count: u32::MAX,
                },
                Bucket::Jpair => continue,
            };
            if block.weight <= total {
                blocks.push(block);
            }
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_rec(cat, &blocks, 0, total, &mut current, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn enumerate_rec(
    cat: &Catalog,
    blocks: &[Block],
    idx: usize,
    remaining: u32,
    current: &mut Vec<Summand>,
    out: &mut Vec<ArthurParameter>,
) -> Result<()> {
    if remaining == 0 {
        out.push(ArthurParameter::new(cat, current.clone())?);
        return Ok(());
    }
    if idx == blocks.len() {
        return Ok(());
    }
    let block = &blocks[idx];
    enumerate_rec(cat, blocks, idx + 1, remaining, current, out)?;
    let mut count = 1;
    while count <= block.max_count && count * block.weight <= remaining {
        for id in &block.summand_ids {
            current.push(Summand::new(id.clone(), block.b, count * block.mult_step));
        }
        enumerate_rec(cat, blocks, idx + 1, remaining - count * block.weight, current, out)?;
        for _ in &block.summand_ids {
            current.pop();
        }
        count += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, param};

    #[test]
    fn half_int_parsing() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap().twice(), 3);
        assert_eq!("-1/2".parse::<HalfInt>().unwrap().twice(), -1);
        assert_eq!("2".parse::<HalfInt>().unwrap().twice(), 4);
        assert!("2/2".parse::<HalfInt>().is_err());
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }

    #[test]
    fn mp4_pair_classification() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let c = classify(&psi);
        assert_eq!(c.buckets, vec![Bucket::Iplus, Bucket::Iplus]);
        assert!(c.good_parity && c.discrete && c.anti_tempered && c.in_psi_star);
    }

    #[test]
    fn symplectic_times_even_is_orthogonal_type() {
        let cat = fixtures::f1();
        let psi = param(&cat, &[("rho2", 2, 2)]);
        let c = classify(&psi);
        assert_eq!(c.buckets, vec![Bucket::Iminus]);
        assert!(!c.good_parity);
    }

    #[test]
    fn principal_unramified_is_not_in_star() {
        let cat = fixtures::f1();
        let psi = param(&cat, &[("one", 4, 1)]);
        let c = classify(&psi);
        assert!(c.good_parity && c.discrete && c.anti_tempered && c.principal && c.unramified);
        assert!(!c.in_psi_star);
    }

    #[test]
    fn odd_orthogonal_multiplicity_is_rejected() {
        let cat = fixtures::f1();
        let err = ArthurParameter::new(&cat, vec![Summand::new("one", 1, 1)]).unwrap_err();
        assert!(matches!(err, Error::Consistency { .. }));
    }

    #[test]
    fn restrictions() {
        let cat = fixtures::f1();
        let r = restriction_to_lf(&param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]));
        assert_eq!((r.mult_of("rho2", HalfInt::ZERO), r.mult_of("chi_a", HalfInt::ZERO)), (1, 2));
        let r = restriction_to_lf(&param(&cat, &[("one", 4, 1)]));
        assert_eq!(r.mult_of("one", HalfInt::ZERO), 4);
        let r = restriction_to_lf(&param(&cat, &[("chi_a", 2, 2)]));
        assert_eq!(r.mult_of("chi_a", HalfInt::ZERO), 4);
    }

    #[test]
    fn associated_l_parameters() {
        let cat = fixtures::f1();
        let phi = associated_l_parameter(&param(&cat, &[("one", 4, 1)])).unwrap();
        let shifts: Vec<i32> = phi.entries.iter().map(|e| e.shift.twice()).collect();
        assert_eq!(shifts, vec![-3, -1, 1, 3]);
        let phi = associated_l_parameter(&param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)])).unwrap();
        assert_eq!(phi.to_string(), "chi_a|·|^-1/2 ⊕ chi_a|·|^1/2 ⊕ rho2");
        let phi = associated_l_parameter(&param(&cat, &[("chi_a", 2, 2)])).unwrap();
        assert!(phi.entries.iter().all(|e| e.mult == 2 && e.shift.twice().abs() == 1));
    }

    #[test]
    fn unbounded_is_refused() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("unb", 1, 2)]);
        assert!(matches!(
            associated_l_parameter(&psi),
            Err(Error::UnboundedConstituent(_))
        ));
    }

    #[test]
    fn dual_parameter_swaps() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let dual = dual_parameter(&cat, &psi).unwrap();
        assert_eq!(dual, param(&cat, &[("rho2", 1, 1), ("chi_a_r2", 1, 1)]));
        assert!(dual.summands().iter().all(|s| s.b == 1));
        assert_eq!(dual_parameter(&cat, &dual).unwrap(), psi);
        let tempered = param(&cat, &[("rho2", 1, 1)]);
        assert_eq!(dual_parameter(&cat, &tempered).unwrap(), tempered);
        let missing = param(&cat, &[("rho2", 3, 1)]);
        assert!(matches!(
            dual_parameter(&cat, &missing),
            Err(Error::UnsupportedSwap { .. })
        ));
    }

    #[test]
    fn good_parity_reductions() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("rho2", 1, 1)]);
        let (p0, gl) = good_parity_reduction(&cat, &psi).unwrap();
        assert_eq!(p0, psi);
        assert!(gl.is_empty());

        let psi = param(&cat, &[("rho2", 1, 1), ("rho2", 2, 2)]);
        let (p0, gl) = good_parity_reduction(&cat, &psi).unwrap();
        assert_eq!(p0, param(&cat, &[("rho2", 1, 1)]));
        assert_eq!(gl, vec![Summand::new("rho2", 2, 1)]);

        let psi = param(&cat, &[("nu", 1, 1), ("nu_dual", 1, 1)]);
        let (p0, gl) = good_parity_reduction(&cat, &psi).unwrap();
        assert!(p0.is_empty());
        assert_eq!(gl, vec![Summand::new("nu", 1, 1)]);
        assert_eq!(p0.dim() + 2 * summands_dim(&cat, &gl).unwrap(), psi.dim());
    }

    #[test]
    fn n1_enumeration() {
        let cat = fixtures::f1_restricted(&["one", "chi_a", "rho2"]);
        let expected_gp = vec![
            param(&cat, &[("chi_a", 2, 1)]),
            param(&cat, &[("one", 2, 1)]),
            param(&cat, &[("rho2", 1, 1)]),
        ];
        assert_eq!(enumerate_parameters(&cat, 1, Restriction::GoodParity).unwrap(), expected_gp);
        assert_eq!(enumerate_parameters(&cat, 1, Restriction::Discrete).unwrap(), expected_gp);
        let all = enumerate_parameters(&cat, 1, Restriction::All).unwrap();
        assert_eq!(all.len(), 5);
        assert!(all.contains(&param(&cat, &[("one", 1, 2)])));
        assert!(all.contains(&param(&cat, &[("chi_a", 1, 2)])));
    }
}

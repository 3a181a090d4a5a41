//! Packet models over `𝒮_ψ∨`: members are opaque labels carrying a character
//! and a copy index. Coefficient vectors `T_{ψ,x}` and `π_{ψ,χ}` are computed
//! from them by the finite Fourier transform on `𝒮_ψ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::catalog::Catalog;
use crate::components::{component_map_to_phi, distinguished_elements, splitting_image, Splitting};
use crate::epsilon::{delta_c_character, epsilon_minus_part, mu_tilde};
use crate::error::{Error, Result};
use crate::parameters::{classify, dual_basis_map, dual_parameter, twist_parameter, ArthurParameter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberFlag {
    Spherical,
    InLPacket,
}

/// One triple `(χ, π, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Member {
    pub label: String,
    pub character: Bits,
    #[serde(default = "first_copy")]
    pub copy: u32,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub flags: BTreeSet<MemberFlag>,
}

fn first_copy() -> u32 {
    1
}

impl Member {
    pub fn new(label: impl Into<String>, character: Bits) -> Member {
        Member {
            label: label.into(),
            character,
            copy: 1,
            flags: BTreeSet::new(),
        }
    }

    pub fn with_copy(mut self, copy: u32) -> Member {
        self.copy = copy;
        self
    }

    pub fn with_flag(mut self, flag: MemberFlag) -> Member {
        self.flags.insert(flag);
        self
    }

    pub fn has(&self, flag: MemberFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// A validated packet model `Π_ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PacketModel {
    parameter: ArthurParameter,
    members: Vec<Member>,
}

impl PacketModel {
    pub fn new(cat: &Catalog, parameter: ArthurParameter, mut members: Vec<Member>) -> Result<PacketModel> {
        members.sort();
        let entity = || format!("packet of {parameter}");
        let rank = parameter.basis().len();
        let mut copies: BTreeMap<(&Bits, &str), Vec<u32>> = BTreeMap::new();
        for m in &members {
            if m.character.len() != rank {
                return Err(Error::consistency(
                    entity(),
                    format!("character of `{}` has {} bits, 𝒮_ψ has rank {rank}", m.label, m.character.len()),
                ));
            }
            copies.entry((&m.character, &m.label)).or_default().push(m.copy);
        }
        for ((_, label), ks) in &copies {
            // members are sorted, so ks is increasing
            if ks.iter().enumerate().any(|(i, &k)| k as usize != i + 1) {
                return Err(Error::consistency(
                    entity(),
                    format!("copies of `{label}` are numbered 1..m without repetition"),
                ));
            }
        }
        let spherical: Vec<&Member> = members.iter().filter(|m| m.has(MemberFlag::Spherical)).collect();
        if spherical.len() > 1 {
            return Err(Error::consistency(entity(), "at most one spherical member"));
        }
        if let Some(m) = spherical.first() {
            if !m.character.is_zero() {
                return Err(Error::consistency(entity(), "the spherical member has trivial character"));
            }
            if !classify(&parameter).unramified {
                return Err(Error::consistency(entity(), "spherical members only occur for unramified ψ"));
            }
        }
        let l_members: Vec<&Member> = members.iter().filter(|m| m.has(MemberFlag::InLPacket)).collect();
        if !l_members.is_empty() {
            let map = component_map_to_phi(cat, &parameter)?;
            let mut seen = BTreeSet::new();
            for m in &l_members {
                let label_count = members.iter().filter(|o| o.label == m.label && o.character == m.character).count();
                if m.copy != 1 || label_count != 1 {
                    return Err(Error::consistency(entity(), "L-packet members have multiplicity 1"));
                }
                if !seen.insert(&m.character) {
                    return Err(Error::consistency(entity(), "L-packet members have distinct characters"));
                }
                if !pulls_back_from_phi(&map.map, &m.character) {
                    return Err(Error::consistency(
                        entity(),
                        format!("character of `{}` does not come from 𝒮_φψ", m.label),
                    ));
                }
            }
        }
        Ok(PacketModel { parameter, members })
    }

    pub fn from_json(cat: &Catalog, parameter: ArthurParameter, text: &str) -> Result<PacketModel> {
        let members: Vec<Member> = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        PacketModel::new(cat, parameter, members)
    }

    /// The one-member packet `{π°}` used at unramified places.
    pub fn spherical_singleton(cat: &Catalog, parameter: ArthurParameter) -> Result<PacketModel> {
        let rank = parameter.basis().len();
        PacketModel::new(
            cat,
            parameter,
            vec![Member::new("spherical", Bits::zero(rank)).with_flag(MemberFlag::Spherical)],
        )
    }

    pub fn parameter(&self) -> &ArthurParameter {
        &self.parameter
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn rank(&self) -> usize {
        self.parameter.basis().len()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.members.iter().all(|m| seen.insert(&m.label))
    }
}

/// Whether `chi` is trivial on the kernel of `map`, i.e. lies in the image of its transpose.
fn pulls_back_from_phi(map: &crate::bits::F2Map, chi: &Bits) -> bool {
    let rows = (0..map.codomain)
        .map(|j| {
            let mut r = Bits::zero(map.domain);
            for (i, c) in map.columns.iter().enumerate() {
                r.set(i, c.get(j));
            }
            r
        })
        .collect();
    crate::bits::F2Map::new(map.domain, rows).image_contains(chi)
}

/// Integer combination of member labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CoefficientVector(BTreeMap<String, i64>);

impl CoefficientVector {
    pub fn zero() -> CoefficientVector {
        CoefficientVector::default()
    }

    pub fn get(&self, label: &str) -> i64 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, label: &str, c: i64) {
        let v = self.0.entry(label.to_string()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(label);
        }
    }

    pub fn add_scaled(&mut self, other: &CoefficientVector, c: i64) {
        for (label, v) in &other.0 {
            self.add_term(label, c * v);
        }
    }

    pub fn scaled(&self, c: i64) -> CoefficientVector {
        let mut out = CoefficientVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Exact division of every coefficient; `None` if some coefficient is not divisible.
    pub fn checked_div(&self, d: i64) -> Option<CoefficientVector> {
        let mut out = CoefficientVector::zero();
        for (label, v) in &self.0 {
            if v % d != 0 {
                return None;
            }
            out.add_term(label, v / d);
        }
        Some(out)
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (label, v)) in self.0.iter().enumerate() {
            let (sign, abs) = if *v < 0 { ("-", -v) } else { ("+", *v) };
            match (i, sign) {
                (0, "+") => {}
                (0, _) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if abs != 1 {
                write!(f, "{abs}·")?;
            }
            f.write_str(label)?;
        }
        Ok(())
    }
}

/// `T_{ψ,x} = Σ_π ⟨x_ψ x, π⟩ Θ_π`.
pub fn t_vector(pm: &PacketModel, x: &Bits) -> CoefficientVector {
    let (x_psi, _) = distinguished_elements(&pm.parameter);
    let y = x_psi.add(x);
    let mut out = CoefficientVector::zero();
    for m in &pm.members {
        out.add_term(&m.label, m.character.pair(&y).to_i64());
    }
    out
}

/// `π_{ψ,χ} = |𝒮_ψ|⁻¹ Σ_x χ(x_ψ x) T_{ψ,x}`, evaluated through the sum.
pub fn fourier_pi(pm: &PacketModel, chi: &Bits) -> CoefficientVector {
    let (x_psi, _) = distinguished_elements(&pm.parameter);
    let mut acc = CoefficientVector::zero();
    let mut order = 0i64;
    for x in Bits::all(pm.rank()) {
        acc.add_scaled(&t_vector(pm, &x), chi.pair(&x_psi.add(&x)).to_i64());
        order += 1;
    }
    acc.checked_div(order)
        .expect("character orthogonality makes the sum divisible by |𝒮_ψ|")
}

/// `T_{ψ,x} = Σ_χ χ(x_ψ x) π_{ψ,χ}`.
pub fn t_from_pi(pm: &PacketModel, x: &Bits) -> CoefficientVector {
    let (x_psi, _) = distinguished_elements(&pm.parameter);
    let y = x_psi.add(x);
    let mut out = CoefficientVector::zero();
    for chi in Bits::all(pm.rank()) {
        out.add_scaled(&fourier_pi(pm, &chi), chi.pair(&y).to_i64());
    }
    out
}

/// The transfer `trans(SΘ_{ψ!}) = ε(ψ^{s=−1})⁻¹ T_{ψ,x}` with `x` the image of `s`.
pub fn transfer_vector(pm: &PacketModel, s: &Splitting) -> Result<CoefficientVector> {
    let eps = epsilon_minus_part(&pm.parameter, s)?;
    let x = splitting_image(&pm.parameter, s);
    Ok(t_vector(pm, &x).scaled(eps.to_i64()))
}

/// The packet `{ω⁺, ω⁻}` of `ζ ⊠ r(2n)`; `ω⁺` is spherical iff `ζ` is unramified.
pub fn build_principal_packet(cat: &Catalog, zeta: &str, n: u32) -> Result<PacketModel> {
    let psi = ArthurParameter::new(cat, vec![crate::parameters::Summand::new(zeta, 2 * n, 1)])?;
    if !classify(&psi).principal {
        return Err(Error::consistency(format!("{psi}"), "principal parameters are ζ ⊠ r(2n) with ζ quadratic"));
    }
    let mut plus = Member::new(format!("omega_plus({zeta})"), Bits::zero(1));
    if cat.constituent(zeta)?.is_unramified_character {
        plus = plus.with_flag(MemberFlag::Spherical);
    }
    let minus = Member::new(format!("omega_minus({zeta})"), Bits::unit(1, 0));
    PacketModel::new(cat, psi, vec![plus, minus])
}

/// Positions in the basis of `to` of the basis elements of `from`, matching
/// summands through `key`.
fn basis_correspondence(
    from: &ArthurParameter,
    to: &ArthurParameter,
    key: impl Fn(&str) -> Result<String>,
) -> Result<Vec<usize>> {
    from.basis()
        .iter()
        .map(|&k| {
            let s = &from.summands()[k];
            let target = key(&s.constituent)?;
            to.summands()
                .iter()
                .position(|t| t.constituent == target && t.b == s.b)
                .and_then(|p| to.info()[p].basis_index)
                .ok_or_else(|| Error::consistency(format!("{from}"), "bases correspond"))
        })
        .collect()
}

fn transport(chi: &Bits, map: &[usize], len: usize) -> Bits {
    let mut out = Bits::zero(len);
    for (i, &j) in map.iter().enumerate() {
        out.set(j, chi.get(i));
    }
    out
}

/// `π^{ψ_c}_{ψζ, χδ_c} = π^ψ_{ψ,χ}`: same members over `ψζ` with characters
/// multiplied by `δ_c`. Spherical flags are kept only if `ψζ` is unramified.
pub fn relabel_variation(cat: &Catalog, pm: &PacketModel, zeta: &str) -> Result<PacketModel> {
    let psi = &pm.parameter;
    let delta = delta_c_character(cat, psi, zeta)?;
    let twisted = twist_parameter(cat, psi, zeta)?;
    let map = basis_correspondence(psi, &twisted, |c| crate::catalog::twist_constituent(cat, c, zeta))?;
    let keep_spherical = classify(&twisted).unramified;
    let members = pm
        .members
        .iter()
        .map(|m| {
            let mut m2 = m.clone();
            m2.character = transport(&m.character.add(&delta), &map, twisted.basis().len());
            if !keep_spherical {
                m2.flags.remove(&MemberFlag::Spherical);
            }
            m2
        })
        .collect();
    PacketModel::new(cat, twisted, members)
}

/// `π_{ψ,χ} = π̂_{φ,χμ̃}`: from an L-packet model of `φ = ψ̂`, the member with
/// character `χμ̃` becomes the member of `Π_ψ` with character `χ`, its label
/// wrapped in `dual(…)`. Flags do not survive the involution.
pub fn relabel_anti_tempered(cat: &Catalog, tempered: &PacketModel, psi: &ArthurParameter, mu: &Bits) -> Result<PacketModel> {
    let dual = dual_parameter(cat, psi)?;
    if tempered.parameter != dual {
        return Err(Error::consistency(
            format!("packet of {}", tempered.parameter),
            format!("the tempered model is a packet of ψ̂ = {dual}"),
        ));
    }
    let tilde = mu_tilde(cat, psi, mu)?;
    let map = dual_basis_map(cat, psi, &dual)?;
    let rank = psi.basis().len();
    let members = tempered
        .members
        .iter()
        .map(|m| {
            let mut on_psi = Bits::zero(rank);
            for (i, &j) in map.iter().enumerate() {
                on_psi.set(i, m.character.get(j));
            }
            Member {
                label: format!("dual({})", m.label),
                character: on_psi.add(&tilde),
                copy: m.copy,
                flags: BTreeSet::new(),
            }
        })
        .collect();
    PacketModel::new(cat, psi.clone(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, param};

    #[test]
    fn principal_t_vectors() {
        let cat = fixtures::f1();
        let pm = build_principal_packet(&cat, "one", 2).unwrap();
        let t = t_vector(&pm, &Bits::zero(1));
        assert_eq!((t.get("omega_plus(one)"), t.get("omega_minus(one)")), (1, -1));
        let t = t_vector(&pm, &Bits::unit(1, 0));
        assert_eq!((t.get("omega_plus(one)"), t.get("omega_minus(one)")), (1, 1));
    }

    #[test]
    fn principal_spherical_contract() {
        let cat = fixtures::f1();
        let pm = build_principal_packet(&cat, "one", 2).unwrap();
        let sph: Vec<&str> = pm.members().iter().filter(|m| m.has(MemberFlag::Spherical)).map(|m| m.label.as_str()).collect();
        assert_eq!(sph, vec!["omega_plus(one)"]);
        assert!(pm.is_multiplicity_free());
        let pm = build_principal_packet(&cat, "chi_a", 1).unwrap();
        assert!(pm.members().iter().all(|m| !m.has(MemberFlag::Spherical)));
        assert!(build_principal_packet(&cat, "rho2", 1).is_err());
    }

    #[test]
    fn spherical_on_ramified_is_rejected() {
        let cat = fixtures::f1();
        let psi = param(&cat, &[("chi_a", 2, 1)]);
        let m = Member::new("w", Bits::zero(1)).with_flag(MemberFlag::Spherical);
        assert!(PacketModel::new(&cat, psi, vec![m]).is_err());
    }

    #[test]
    fn fourier_examples() {
        let cat = fixtures::f1();
        let pm = build_principal_packet(&cat, "one", 2).unwrap();
        let pi = fourier_pi(&pm, &Bits::unit(1, 0));
        assert_eq!(pi.to_string(), "omega_minus(one)");

        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let chi0: Bits = "10".parse().unwrap();
        let pm = PacketModel::new(
            &cat,
            psi,
            vec![Member::new("a", chi0), Member::new("a", chi0).with_copy(2), Member::new("b", Bits::zero(2))],
        )
        .unwrap();
        assert_eq!(fourier_pi(&pm, &chi0).get("a"), 2);
        assert!(fourier_pi(&pm, &"11".parse().unwrap()).is_zero());
        for x in Bits::all(2) {
            assert_eq!(t_from_pi(&pm, &x), t_vector(&pm, &x));
        }
    }

    #[test]
    fn empty_packet() {
        let cat = fixtures::f1();
        let pm = PacketModel::new(&cat, param(&cat, &[("rho2", 1, 1)]), vec![]).unwrap();
        assert!(t_vector(&pm, &Bits::zero(1)).is_zero());
    }

    #[test]
    fn copy_numbering_is_checked() {
        let cat = fixtures::f1();
        let psi = param(&cat, &[("rho2", 1, 1)]);
        let bad = vec![Member::new("a", Bits::zero(1)).with_copy(2)];
        assert!(PacketModel::new(&cat, psi, bad).is_err());
    }

    #[test]
    fn l_packet_characters_come_from_phi() {
        let cat = fixtures::f1();
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        // 𝒮_ψ → 𝒮_φψ kills the chi_a generator, so only characters trivial there pull back.
        let ok = Member::new("t", "01".parse().unwrap()).with_flag(MemberFlag::InLPacket);
        assert!(PacketModel::new(&cat, psi.clone(), vec![ok]).is_ok());
        let bad = Member::new("t", "10".parse().unwrap()).with_flag(MemberFlag::InLPacket);
        assert!(PacketModel::new(&cat, psi, vec![bad]).is_err());
    }

    #[test]
    fn transfer_examples() {
        let cat = fixtures::f1();
        let pm = build_principal_packet(&cat, "one", 2).unwrap();
        let psi = pm.parameter().clone();
        let t = transfer_vector(&pm, &Splitting::trivial(&psi)).unwrap();
        assert_eq!((t.get("omega_plus(one)"), t.get("omega_minus(one)")), (1, -1));
        let t = transfer_vector(&pm, &Splitting::minus_one(&psi)).unwrap();
        assert_eq!((t.get("omega_plus(one)"), t.get("omega_minus(one)")), (1, 1));
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let pm = PacketModel::new(&cat, psi.clone(), vec![Member::new("a", Bits::zero(2))]).unwrap();
        let s = Splitting::minus_one(&psi);
        let x = splitting_image(&psi, &s);
        assert_eq!(transfer_vector(&pm, &s).unwrap(), t_vector(&pm, &x).scaled(-1));
    }

    #[test]
    fn variation_is_an_involution() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let pm = PacketModel::new(
            &cat,
            psi,
            vec![Member::new("a", "00".parse().unwrap()), Member::new("b", "01".parse().unwrap())],
        )
        .unwrap();
        let once = relabel_variation(&cat, &pm, "chi_a").unwrap();
        assert_eq!(once.parameter(), &param(&cat, &[("rho2_a", 1, 1), ("one", 2, 1)]));
        assert_ne!(once, pm);
        assert_eq!(relabel_variation(&cat, &once, "chi_a").unwrap(), pm);
    }

    #[test]
    fn principal_variation_keeps_characters() {
        let cat = fixtures::f1_extended();
        let pm = build_principal_packet(&cat, "chi_a", 2).unwrap();
        let moved = relabel_variation(&cat, &pm, "chi_b").unwrap();
        assert_eq!(moved.parameter(), &param(&cat, &[("chi_ab", 4, 1)]));
        let chars: Vec<(String, Bits)> = moved.members().iter().map(|m| (m.label.clone(), m.character)).collect();
        let before: Vec<(String, Bits)> = pm.members().iter().map(|m| (m.label.clone(), m.character)).collect();
        assert_eq!(chars, before);
    }

    #[test]
    fn anti_tempered_relabel_on_star_shape() {
        let cat = fixtures::f1_extended();
        let psi = param(&cat, &[("rho2", 1, 1), ("chi_a", 2, 1)]);
        let phi = dual_parameter(&cat, &psi).unwrap();
        let members: Vec<Member> = Bits::all(2).map(|c| Member::new(format!("s{c}"), c)).collect();
        let tempered = PacketModel::new(&cat, phi, members).unwrap();
        let mu = crate::epsilon::xu_character_anti_tempered(&psi).unwrap();
        let out = relabel_anti_tempered(&cat, &tempered, &psi, &mu).unwrap();
        let map = dual_basis_map(&cat, &psi, tempered.parameter()).unwrap();
        for m in out.members() {
            let src = m.label.trim_start_matches("dual(s").trim_end_matches(')');
            let src: Bits = src.parse().unwrap();
            assert_eq!(transport(&m.character, &map, 2), src);
        }
    }
}

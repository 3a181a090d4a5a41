//! Root-number calculus on parameters: `ε(ψ^{s=−1})`, the characters `ν_ψ`,
//! `δ_c`, `μ_ψ`, `μ̃_ψ`, `ε^Art`, and the descent checks relating them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bits::Bits;
use crate::catalog::{Catalog, Duality};
use crate::components::{
    distinguished_elements, enumerate_splittings, m_dblprime_per_summand, splitting_image, Splitting,
};
use crate::error::{Error, Result};
use crate::mu4::{Mu4, Sign};
use crate::parameters::{
    associated_l_parameter, classify, dual_basis_map, dual_parameter, ArthurParameter, Bucket, HalfInt,
    Summand,
};

/// `ε(ρ ⊠ r(a))` from the root number of `ρ`.
pub fn epsilon_sl(cat: &Catalog, id: &str, a: u32) -> Result<Mu4> {
    let c = cat.constituent(id)?;
    if !c.duality.is_self_dual() {
        return Err(Error::NotSelfDual(id.to_string()));
    }
    let root = c
        .root_number
        .ok_or_else(|| Error::consistency(format!("constituent `{id}`"), "self-dual constituents carry a root_number"))?;
    let base = root.pow(a as u64);
    if c.is_unramified_character && a > 1 {
        let frob = c.frobenius_value.ok_or_else(|| Error::MissingFrobenius(id.to_string()))?;
        Ok(base * Mu4::from(-frob).pow(a as u64 - 1))
    } else {
        Ok(base)
    }
}

fn root_of(psi: &ArthurParameter, k: usize) -> Result<Mu4> {
    psi.info()[k].root_number.ok_or_else(|| {
        Error::consistency(
            format!("constituent `{}`", psi.summands()[k].constituent),
            "self-dual constituents carry a root_number",
        )
    })
}

/// `ε(ψ^{s=−1}) = ∏_{I⁺⊔I⁻} ε(φ_i)^{b_i m″_i} · ∏_J det φ_j(−1)^{b_j m″_j}`.
pub fn epsilon_minus_part(psi: &ArthurParameter, s: &Splitting) -> Result<Sign> {
    let mut acc = Mu4::ONE;
    for &k in psi.split_keys() {
        let info = &psi.info()[k];
        let m2 = s.parts[info.split_index.expect("key")].1 as u64;
        let b = psi.summands()[k].b as u64;
        acc *= match info.bucket {
            Bucket::Iplus | Bucket::Iminus => root_of(psi, k)?.pow(b * m2),
            Bucket::Jpair => Mu4::from(info.det_at_minus_one.pow(b * m2)),
        };
    }
    acc.expect_sign(format!("ε(ψ^(s=-1)) for ψ = {psi}, s = {s}"))
}

/// `ν_ψ`: component `ε(φ_i)^{b_i}` at each `i ∈ I⁺`.
pub fn nu_character(psi: &ArthurParameter) -> Result<Bits> {
    let mut nu = Bits::zero(psi.basis().len());
    for (pos, &k) in psi.basis().iter().enumerate() {
        let b = psi.summands()[k].b as u64;
        let v = root_of(psi, k)?
            .pow(b)
            .expect_sign(format!("ν at {}", psi.summands()[k]))?;
        nu.set(pos, v.is_minus());
    }
    Ok(nu)
}

/// `ε(ψ^{s=−1})` multiplied by the factors that each fiber move changes it by:
/// `det φ_i(−1)^{b_i ⌊m″_i/2⌋}` on `I⁺ ⊔ I⁻` and `det φ_j(−1)^{b_j m″_j}` on `J`.
pub fn corrected_minus_part(psi: &ArthurParameter, s: &Splitting) -> Result<Sign> {
    let mut acc = epsilon_minus_part(psi, s)?;
    for &k in psi.split_keys() {
        let info = &psi.info()[k];
        let m2 = s.parts[info.split_index.expect("key")].1 as u64;
        let b = psi.summands()[k].b as u64;
        acc *= match info.bucket {
            Bucket::Iplus | Bucket::Iminus => info.det_at_minus_one.pow(b * (m2 / 2)),
            Bucket::Jpair => info.det_at_minus_one.pow(b * m2),
        };
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentViolation {
    pub splitting: Splitting,
    pub image: Bits,
    pub value: Sign,
    pub expected: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub good_parity: bool,
    pub splittings: usize,
    pub fibers: usize,
    /// Whether the uncorrected `ε(ψ^{s=−1})` is itself constant on fibers.
    pub raw_fiber_constant: bool,
    pub violations: Vec<DescentViolation>,
}

impl DescentReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `ε(ψ^{s=−1})` (corrected as in [`corrected_minus_part`] when
/// `ψ` is not of good parity) only depends on the image `x` of `s` and equals
/// `ν_ψ(x)`.
pub fn verify_descent(psi: &ArthurParameter) -> Result<DescentReport> {
    let good_parity = classify(psi).good_parity;
    let nu = nu_character(psi)?;
    let splittings = enumerate_splittings(psi);
    let mut raw_by_fiber: BTreeMap<Bits, Sign> = BTreeMap::new();
    let mut raw_fiber_constant = true;
    let mut violations = Vec::new();
    for s in &splittings {
        let x = splitting_image(psi, s);
        let raw = epsilon_minus_part(psi, s)?;
        if *raw_by_fiber.entry(x).or_insert(raw) != raw {
            raw_fiber_constant = false;
        }
        let value = if good_parity { raw } else { corrected_minus_part(psi, s)? };
        let expected = nu.pair(&x);
        if value != expected {
            violations.push(DescentViolation {
                splitting: s.clone(),
                image: x,
                value,
                expected,
            });
        }
    }
    Ok(DescentReport {
        good_parity,
        splittings: splittings.len(),
        fibers: raw_by_fiber.len(),
        raw_fiber_constant,
        violations,
    })
}

/// `ε(φ_ψ^{s=−1})` computed on the side of `φ_ψ`: expand the `m″` part into
/// shifted constituents, pair `φ|·|^k` with `φ∨|·|^{−k}` (each pair gives
/// `det φ(−1)`), and let the unpaired middle terms contribute `ε(φ)`.
pub fn epsilon_phi_psi_minus_part(cat: &Catalog, psi: &ArthurParameter, s: &Splitting) -> Result<Sign> {
    let m2s = m_dblprime_per_summand(psi, s);
    let dbl: Vec<Summand> = psi
        .summands()
        .iter()
        .zip(m2s)
        .filter(|(_, m2)| *m2 > 0)
        .map(|(t, m2)| Summand::new(t.constituent.clone(), t.b, m2))
        .collect();
    let dbl = ArthurParameter::new(cat, dbl)?;
    let phi = associated_l_parameter(&dbl)?;
    let mut acc = Mu4::ONE;
    for e in &phi.entries {
        let c = cat.constituent(&e.constituent)?;
        let partner = (c.dual_id(), -e.shift);
        if partner == (e.constituent.as_str(), e.shift) {
            let root = c.root_number.ok_or_else(|| Error::NotSelfDual(c.id.clone()))?;
            acc *= root.pow(e.mult as u64);
        } else if (e.constituent.as_str(), e.shift) < partner {
            if phi.mult_of(partner.0, partner.1) != e.mult {
                return Err(Error::consistency(format!("φ_ψ of {dbl}"), "φ_ψ is self-dual"));
            }
            acc *= Mu4::from(c.det_at_minus_one.pow(e.mult as u64));
        }
    }
    acc.expect_sign(format!("ε(φ_ψ^(s=-1)) for ψ = {psi}, s = {s}"))
}

/// `ε(ψ|_{L_F})`, the minus part of the splitting `s = −1`.
pub fn epsilon_restriction(psi: &ArthurParameter) -> Result<Sign> {
    epsilon_minus_part(psi, &Splitting::minus_one(psi))
}

/// `χ(z) · ε(ψ|_{L_F})`.
pub fn central_sign(psi: &ArthurParameter, chi: &Bits) -> Result<Sign> {
    let (_, z) = distinguished_elements(psi);
    Ok(chi.pair(&z) * epsilon_restriction(psi)?)
}

/// `δ_c` for the quadratic character `ζ` attached to the square class `c`:
/// at odd `b_i` the component is `ζ(−1)^{dim φ_i/2} ε(φ_i)/ε(φ_iζ)`.
pub fn delta_c_character(cat: &Catalog, psi: &ArthurParameter, zeta: &str) -> Result<Bits> {
    let q = cat.quadratic_character(zeta)?;
    let mut delta = Bits::zero(psi.basis().len());
    for (pos, &k) in psi.basis().iter().enumerate() {
        let s = &psi.summands()[k];
        if s.b.is_multiple_of(2) {
            continue;
        }
        let c = cat.constituent(&s.constituent)?;
        let twisted = crate::catalog::twist_constituent(cat, &c.id, zeta)?;
        let root = root_of(psi, k)?;
        let root_twisted = cat
            .constituent(&twisted)?
            .root_number
            .ok_or_else(|| Error::NotSelfDual(twisted.clone()))?;
        let ratio = Mu4::from(q.value_at_minus_one.pow(c.full_dim() as u64 / 2)) * root * root_twisted.inverse();
        delta.set(pos, ratio.expect_sign(format!("δ_c at {s}"))?.is_minus());
    }
    Ok(delta)
}

/// Xu's `μ_ψ = ε^{M/MW}_ψ` on the anti-tempered good-parity shapes where it is
/// known to be trivial: every Jordan block `(ρ, 1, b)` has `b` even, or `ψ`
/// is `ρ₀ ⊠ r(1) ⊕ ζ ⊠ r(2)` with `ρ₀` two-dimensional symplectic and no
/// unramified characters.
pub fn xu_character_anti_tempered(psi: &ArthurParameter) -> Result<Bits> {
    let class = classify(psi);
    if !class.good_parity || !class.anti_tempered {
        return Err(Error::UnsupportedXuCase(format!(
            "{psi} is not anti-tempered of good parity"
        )));
    }
    let trivial = Bits::zero(psi.basis().len());
    if psi.summands().iter().all(|s| s.b % 2 == 0) {
        return Ok(trivial);
    }
    let info = psi.info();
    let summands = psi.summands();
    let small_shape = psi.len() == 2
        && summands.iter().all(|s| s.mult == 1)
        && class.in_psi_star
        && {
            let (odd, even) = if summands[0].b == 1 { (0, 1) } else { (1, 0) };
            summands[odd].b == 1 && info[odd].full_dim == 2 && summands[even].b == 2 && info[even].full_dim == 1
        };
    if small_shape {
        return Ok(trivial);
    }
    Err(Error::UnsupportedXuCase(format!(
        "no implemented rule for {psi}; supply μ_ψ explicitly"
    )))
}

/// `ν_ψ̂` transported to the basis of `ψ`.
pub fn nu_of_dual(cat: &Catalog, psi: &ArthurParameter) -> Result<Bits> {
    let dual = dual_parameter(cat, psi)?;
    let nu_dual = nu_character(&dual)?;
    let map = dual_basis_map(cat, psi, &dual)?;
    let mut out = Bits::zero(psi.basis().len());
    for (pos, &j) in map.iter().enumerate() {
        out.set(pos, nu_dual.get(j));
    }
    Ok(out)
}

/// `μ̃_ψ = μ_ψ · ν_ψ · ν_ψ̂`.
pub fn mu_tilde(cat: &Catalog, psi: &ArthurParameter, mu: &Bits) -> Result<Bits> {
    Ok(mu.add(&nu_character(psi)?).add(&nu_of_dual(cat, psi)?))
}

/// One index of a discrete parameter, as seen by the `ε^Art` rule.
#[derive(Clone, Debug)]
pub struct ArthurSlot<'a> {
    pub id: &'a str,
    pub b: u32,
    pub duality: &'a Duality,
}

/// Arthur's sign character: the component at `i` is the parity of the number
/// of `j ≠ i` with `φ_i × φ_j` symplectic, `min(b_i, b_j)` odd and
/// `ε(½, φ_i × φ_j) = −1`. The sign table is only consulted for such pairs.
pub fn arthur_sign_rule(
    slots: &[ArthurSlot<'_>],
    rankin_selberg: impl Fn(&str, &str) -> Option<Sign>,
) -> Result<Bits> {
    let mut out = Bits::zero(slots.len());
    for (i, a) in slots.iter().enumerate() {
        let mut count = 0;
        for (j, c) in slots.iter().enumerate() {
            let symplectic_pair = (*a.duality == Duality::Symplectic) != (*c.duality == Duality::Symplectic)
                && a.duality.is_self_dual()
                && c.duality.is_self_dual();
            if i == j || !symplectic_pair || a.b.min(c.b) % 2 == 0 {
                continue;
            }
            let sign = rankin_selberg(a.id, c.id).ok_or_else(|| Error::MissingRsEntry {
                left: a.id.to_string(),
                right: c.id.to_string(),
            })?;
            count += sign.is_minus() as u32;
        }
        out.set(i, count % 2 == 1);
    }
    Ok(out)
}

/// `ε^Art_ψ` for a discrete local parameter, using the catalog's
/// Rankin–Selberg table.
pub fn arthur_sign_character(cat: &Catalog, psi: &ArthurParameter) -> Result<Bits> {
    if !classify(psi).discrete {
        return Err(Error::consistency(format!("{psi}"), "ε^Art is defined for discrete parameters"));
    }
    let dualities: Vec<&Duality> = psi
        .summands()
        .iter()
        .map(|s| cat.constituent(&s.constituent).map(|c| &c.duality))
        .collect::<Result<_>>()?;
    let slots: Vec<ArthurSlot<'_>> = psi
        .summands()
        .iter()
        .zip(dualities)
        .map(|(s, d)| ArthurSlot {
            id: &s.constituent,
            b: s.b,
            duality: d,
        })
        .collect();
    arthur_sign_rule(&slots, |a, b| cat.rankin_selberg(a, b))
}

/// Shift-0 self-dual entries of `φ_ψ` that are symplectic.
pub fn symplectic_middle_terms(cat: &Catalog, psi: &ArthurParameter) -> Result<Vec<String>> {
    let phi = associated_l_parameter(psi)?;
    let mut out = Vec::new();
    for e in phi.entries {
        if e.shift == HalfInt::ZERO && cat.constituent(&e.constituent)?.duality == Duality::Symplectic {
            out.push(e.constituent);
        }
    }
    Ok(out)
}

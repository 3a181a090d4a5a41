//! Abstract arithmetic data: quadratic characters, simple constituents with
//! their root numbers, twist and Rankin–Selberg tables, and global cuspidal
//! entries with per-place localizations.
//!
//! A catalog is loaded from JSON, validated once, and immutable afterwards.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mu4::{Mu4, Sign};
use crate::parameters::HalfInt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticCharacter {
    pub id: String,
    pub value_at_minus_one: Sign,
    #[serde(default)]
    pub is_trivial: bool,
    #[serde(default)]
    pub is_unramified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius_value: Option<Sign>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub square_class_values: BTreeMap<String, Sign>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Duality {
    Symplectic,
    Orthogonal,
    NonSelfDual { dual_id: String },
}

impl Duality {
    pub fn is_self_dual(&self) -> bool {
        !matches!(self, Duality::NonSelfDual { .. })
    }

    fn tag(&self) -> &'static str {
        match self {
            Duality::Symplectic => "symplectic",
            Duality::Orthogonal => "orthogonal",
            Duality::NonSelfDual { .. } => "non_self_dual",
        }
    }

    fn from_parts(tag: &str, dual_id: Option<String>, owner: &str) -> Result<Duality> {
        match (tag, dual_id) {
            ("symplectic", None) => Ok(Duality::Symplectic),
            ("orthogonal", None) => Ok(Duality::Orthogonal),
            ("non_self_dual", Some(dual_id)) => Ok(Duality::NonSelfDual { dual_id }),
            ("non_self_dual", None) => Err(Error::Schema(format!(
                "`{owner}`: non_self_dual requires dual_id"
            ))),
            ("symplectic" | "orthogonal", Some(_)) => Err(Error::Schema(format!(
                "`{owner}`: dual_id is only allowed for non_self_dual"
            ))),
            (other, _) => Err(Error::Schema(format!(
                "`{owner}`: unknown duality `{other}`"
            ))),
        }
    }

    /// Duality of `ρ ⊠ r(a)` given the duality of `ρ`.
    pub fn with_sl2(&self, a: u32) -> Duality {
        match (self, a.is_multiple_of(2)) {
            (Duality::NonSelfDual { .. }, _) => self.clone(),
            (Duality::Symplectic, false) | (Duality::Orthogonal, true) => Duality::Symplectic,
            _ => Duality::Orthogonal,
        }
    }
}

/// One simple constituent `φ = ρ ⊠ r(a)` of the local Langlands group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub id: String,
    pub dim: u32,
    pub sl2_dim: u32,
    pub duality: Duality,
    pub det_at_minus_one: Sign,
    pub root_number: Option<Mu4>,
    pub is_unramified_character: bool,
    pub frobenius_value: Option<Sign>,
    pub det_character: Option<String>,
    pub unbounded: bool,
    /// For `ρ ⊠ r(a)` entries with `a > 1`: the id of `ρ`.
    pub sl2_core: Option<String>,
}

impl Constituent {
    /// Dimension as a representation of the Langlands group, `dim ρ · a`.
    pub fn full_dim(&self) -> u32 {
        self.dim * self.sl2_dim
    }

    pub fn dual_id(&self) -> &str {
        match &self.duality {
            Duality::NonSelfDual { dual_id } => dual_id,
            _ => &self.id,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstituentDoc {
    id: String,
    dim: u32,
    #[serde(default = "one")]
    sl2_dim: u32,
    duality: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual_id: Option<String>,
    det_at_minus_one: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root_number: Option<Mu4>,
    #[serde(default, skip_serializing_if = "is_false")]
    is_unramified_character: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frobenius_value: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    det_character: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    unbounded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sl2_core: Option<String>,
}

fn one() -> u32 {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Twist {
    pub constituent: String,
    pub character: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankinSelbergEntry {
    pub left: String,
    pub right: String,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationEntry {
    pub constituent: String,
    #[serde(default)]
    pub shift: HalfInt,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCuspidal {
    pub id: String,
    pub dim: u32,
    pub duality: Duality,
    pub global_root_number: Option<Sign>,
    pub localizations: BTreeMap<String, Vec<LocalizationEntry>>,
}

impl GlobalCuspidal {
    pub fn dual_id(&self) -> &str {
        match &self.duality {
            Duality::NonSelfDual { dual_id } => dual_id,
            _ => &self.id,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalCuspidalDoc {
    id: String,
    dim: u32,
    duality: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    global_root_number: Option<Sign>,
    #[serde(default)]
    localizations: BTreeMap<String, Vec<LocalizationEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    pub id: String,
    pub unramified: bool,
    pub catalog: Catalog,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceDoc {
    id: String,
    #[serde(default)]
    unramified: bool,
    catalog: CatalogDoc,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    #[serde(default, skip_serializing_if = "is_false")]
    archimedean: bool,
    #[serde(default)]
    quadratic_characters: Vec<QuadraticCharacter>,
    #[serde(default)]
    constituents: Vec<ConstituentDoc>,
    #[serde(default)]
    twists: Vec<Twist>,
    #[serde(default)]
    rankin_selberg: Vec<RankinSelbergEntry>,
    #[serde(default)]
    global_cuspidals: Vec<GlobalCuspidalDoc>,
    #[serde(default)]
    places: Vec<PlaceDoc>,
}

/// A validated catalog. All collections are kept sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub archimedean: bool,
    quadratic_characters: BTreeMap<String, QuadraticCharacter>,
    constituents: BTreeMap<String, Constituent>,
    twists: BTreeMap<(String, String), String>,
    rankin_selberg: Vec<RankinSelbergEntry>,
    global_cuspidals: BTreeMap<String, GlobalCuspidal>,
    places: BTreeMap<String, Place>,
}

/// One finding of [`validate_cross_constraints`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        load_catalog(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("catalog serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("catalog serializes")
    }

    pub fn constituent(&self, id: &str) -> Result<&Constituent> {
        self.constituents
            .get(id)
            .ok_or_else(|| Error::dangling("constituent", id))
    }

    pub fn constituents(&self) -> impl Iterator<Item = &Constituent> {
        self.constituents.values()
    }

    pub fn quadratic_character(&self, id: &str) -> Result<&QuadraticCharacter> {
        self.quadratic_characters
            .get(id)
            .ok_or_else(|| Error::dangling("quadratic character", id))
    }

    pub fn quadratic_characters(&self) -> impl Iterator<Item = &QuadraticCharacter> {
        self.quadratic_characters.values()
    }

    pub fn global_cuspidal(&self, id: &str) -> Result<&GlobalCuspidal> {
        self.global_cuspidals
            .get(id)
            .ok_or_else(|| Error::dangling("global cuspidal", id))
    }

    pub fn global_cuspidals(&self) -> impl Iterator<Item = &GlobalCuspidal> {
        self.global_cuspidals.values()
    }

    pub fn place(&self, id: &str) -> Result<&Place> {
        self.places.get(id).ok_or_else(|| Error::dangling("place", id))
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.places.values()
    }

    pub fn twists(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.twists
            .iter()
            .map(|((c, z), r)| (c.as_str(), z.as_str(), r.as_str()))
    }

    pub fn rankin_selberg_entries(&self) -> &[RankinSelbergEntry] {
        &self.rankin_selberg
    }

    /// `ε(½, φ_i × φ_j)` from the table, in either order.
    pub fn rankin_selberg(&self, a: &str, b: &str) -> Option<Sign> {
        self.rankin_selberg
            .iter()
            .find(|e| (e.left == a && e.right == b) || (e.left == b && e.right == a))
            .map(|e| e.sign)
    }

    /// The constituent representing `core ⊠ r(size)`; `core` itself for size 1.
    pub fn sl2_swap(&self, core: &str, size: u32) -> Result<&Constituent> {
        if size == 1 {
            return self.constituent(core);
        }
        self.constituents
            .values()
            .find(|c| c.sl2_core.as_deref() == Some(core) && c.sl2_dim == size)
            .ok_or_else(|| Error::UnsupportedSwap {
                core: core.to_string(),
                size,
            })
    }

    /// Adds Rankin–Selberg entries, e.g. from a scenario file.
    pub fn with_rankin_selberg(mut self, extra: Vec<RankinSelbergEntry>) -> Result<Catalog> {
        for e in extra {
            self.check_rs_ids(&e)?;
            self.rankin_selberg.push(e);
        }
        self.rankin_selberg.sort();
        self.rankin_selberg.dedup();
        Ok(self)
    }

    /// Union of two catalogs; an id defined in both is an error unless the
    /// two definitions coincide.
    pub fn merge(self, other: Catalog) -> Result<Catalog> {
        let mut doc = self.to_doc();
        let o = other.to_doc();
        doc.archimedean |= o.archimedean;
        doc.quadratic_characters.extend(o.quadratic_characters);
        doc.constituents.extend(o.constituents);
        doc.twists.extend(o.twists);
        doc.rankin_selberg.extend(o.rankin_selberg);
        doc.global_cuspidals.extend(o.global_cuspidals);
        doc.places.extend(o.places);
        dedup_identical(&mut doc)?;
        Catalog::from_doc(doc, true)
    }

    fn check_rs_ids(&self, e: &RankinSelbergEntry) -> Result<()> {
        for id in [&e.left, &e.right] {
            if !self.constituents.contains_key(id) && !self.global_cuspidals.contains_key(id) {
                return Err(Error::dangling("constituent or global cuspidal", id.clone()));
            }
        }
        Ok(())
    }

    fn to_doc(&self) -> CatalogDoc {
        CatalogDoc {
            archimedean: self.archimedean,
            quadratic_characters: self.quadratic_characters.values().cloned().collect(),
            constituents: self.constituents.values().map(constituent_doc).collect(),
            twists: self
                .twists
                .iter()
                .map(|((c, z), r)| Twist {
                    constituent: c.clone(),
                    character: z.clone(),
                    result: r.clone(),
                })
                .collect(),
            rankin_selberg: self.rankin_selberg.clone(),
            global_cuspidals: self
                .global_cuspidals
                .values()
                .map(|g| {
                    let (duality, dual_id) = split_duality(&g.duality);
                    GlobalCuspidalDoc {
                        id: g.id.clone(),
                        dim: g.dim,
                        duality,
                        dual_id,
                        global_root_number: g.global_root_number,
                        localizations: g.localizations.clone(),
                    }
                })
                .collect(),
            places: self
                .places
                .values()
                .map(|p| PlaceDoc {
                    id: p.id.clone(),
                    unramified: p.unramified,
                    catalog: p.catalog.to_doc(),
                })
                .collect(),
        }
    }

    fn from_doc(doc: CatalogDoc, top_level: bool) -> Result<Catalog> {
        let mut cat = Catalog {
            archimedean: doc.archimedean,
            ..Catalog::default()
        };

        for q in doc.quadratic_characters {
            validate_quadratic(&q)?;
            let id = q.id.clone();
            if cat.quadratic_characters.insert(id.clone(), q).is_some() {
                return Err(duplicate("quadratic character", &id));
            }
        }

        for c in doc.constituents {
            let duality = Duality::from_parts(&c.duality, c.dual_id, &c.id)?;
            let con = Constituent {
                id: c.id,
                dim: c.dim,
                sl2_dim: c.sl2_dim,
                duality,
                det_at_minus_one: c.det_at_minus_one,
                root_number: c.root_number,
                is_unramified_character: c.is_unramified_character,
                frobenius_value: c.frobenius_value,
                det_character: c.det_character,
                unbounded: c.unbounded,
                sl2_core: c.sl2_core,
            };
            let id = con.id.clone();
            if cat.constituents.insert(id.clone(), con).is_some() {
                return Err(duplicate("constituent", &id));
            }
        }
        let ids: Vec<String> = cat.constituents.keys().cloned().collect();
        for id in &ids {
            let fixed = cat.validate_constituent(&cat.constituents[id])?;
            cat.constituents.insert(id.clone(), fixed);
        }
        for id in &ids {
            cat.validate_sl2_core(&cat.constituents[id])?;
        }

        for t in doc.twists {
            cat.validate_twist(&t)?;
            let key = (t.constituent.clone(), t.character.clone());
            if cat.twists.insert(key, t.result).is_some() {
                return Err(duplicate(
                    "twist",
                    &format!("({}, {})", t.constituent, t.character),
                ));
            }
        }

        if !top_level && (!doc.global_cuspidals.is_empty() || !doc.places.is_empty()) {
            return Err(Error::consistency(
                "place catalog",
                "a place catalog cannot declare places or global cuspidals",
            ));
        }
        for p in doc.places {
            let place = Place {
                id: p.id.clone(),
                unramified: p.unramified,
                catalog: Catalog::from_doc(p.catalog, false)?,
            };
            if cat.places.insert(p.id.clone(), place).is_some() {
                return Err(duplicate("place", &p.id));
            }
        }

        for g in doc.global_cuspidals {
            let duality = Duality::from_parts(&g.duality, g.dual_id, &g.id)?;
            let gc = GlobalCuspidal {
                id: g.id,
                dim: g.dim,
                duality,
                global_root_number: g.global_root_number,
                localizations: g.localizations,
            };
            let id = gc.id.clone();
            if cat.global_cuspidals.insert(id.clone(), gc).is_some() {
                return Err(duplicate("global cuspidal", &id));
            }
        }
        for g in cat.global_cuspidals.values() {
            cat.validate_global(g)?;
        }

        for e in &doc.rankin_selberg {
            cat.check_rs_ids(e)?;
        }
        cat.rankin_selberg = doc.rankin_selberg;
        cat.rankin_selberg.sort();
        cat.rankin_selberg.dedup();
        Ok(cat)
    }

    fn validate_constituent(&self, c: &Constituent) -> Result<Constituent> {
        let mut c = c.clone();
        let fail = |inv: &str| Err(Error::consistency(format!("constituent `{}`", c.id), inv));
        if c.dim == 0 || c.sl2_dim == 0 {
            return fail("dim and sl2_dim are positive");
        }
        if self.archimedean && c.sl2_dim != 1 {
            return fail("archimedean catalogs have sl2_dim = 1");
        }
        if c.is_unramified_character {
            if c.dim != 1 || c.sl2_dim != 1 {
                return fail("unramified characters have dim = 1 and sl2_dim = 1");
            }
            if c.duality != Duality::Orthogonal {
                return fail("unramified characters are quadratic (orthogonal)");
            }
            match c.root_number {
                None => c.root_number = Some(Mu4::ONE),
                Some(Mu4::ONE) => {}
                Some(_) => return fail("unramified characters have root_number = 1"),
            }
            if c.det_at_minus_one != Sign::Plus {
                return fail("unramified characters are trivial at -1");
            }
        }
        match &c.duality {
            Duality::NonSelfDual { dual_id } => {
                if c.root_number.is_some() {
                    return fail("root_number is recorded only for self-dual constituents");
                }
                let d = self.constituent(dual_id)?;
                if d.dim != c.dim || d.sl2_dim != c.sl2_dim || d.det_at_minus_one != c.det_at_minus_one
                {
                    return fail("dual pairs have equal dim, sl2_dim and det_at_minus_one");
                }
                if !matches!(d.duality, Duality::NonSelfDual { .. }) {
                    return fail("the dual of a non-self-dual constituent is non-self-dual");
                }
            }
            duality => {
                let Some(root) = c.root_number else {
                    return fail("self-dual constituents carry a root_number");
                };
                if root * root != Mu4::from(c.det_at_minus_one) {
                    return fail("root_number² = det_at_minus_one");
                }
                if *duality == Duality::Symplectic {
                    if c.det_at_minus_one != Sign::Plus {
                        return fail("symplectic ⇒ det_at_minus_one = +1");
                    }
                    if !c.full_dim().is_multiple_of(2) {
                        return fail("symplectic ⇒ dim·sl2_dim even");
                    }
                }
                if *duality == Duality::Orthogonal {
                    let Some(dc) = &c.det_character else {
                        return fail("orthogonal constituents declare det_character");
                    };
                    let q = self.quadratic_character(dc)?;
                    if q.value_at_minus_one != c.det_at_minus_one {
                        return fail("det_character(-1) = det_at_minus_one");
                    }
                }
            }
        }
        if let Some(dc) = &c.det_character {
            self.quadratic_character(dc)?;
        }
        Ok(c)
    }

    fn validate_sl2_core(&self, c: &Constituent) -> Result<()> {
        let Some(core_id) = &c.sl2_core else {
            return Ok(());
        };
        let entity = format!("constituent `{}`", c.id);
        let core = self.constituent(core_id)?;
        if core.sl2_dim != 1 || c.sl2_dim < 2 || core.dim != c.dim {
            return Err(Error::consistency(
                entity,
                "sl2_core names a constituent with sl2_dim = 1 and the same dim",
            ));
        }
        if core.duality.with_sl2(c.sl2_dim).tag() != c.duality.tag() {
            return Err(Error::consistency(entity, "duality of ρ⊠r(a) follows ρ and a"));
        }
        if core.det_at_minus_one.pow(c.sl2_dim as u64) != c.det_at_minus_one {
            return Err(Error::consistency(entity, "det(ρ⊠r(a))(-1) = det ρ(-1)^a"));
        }
        if core.duality.is_self_dual() {
            let expected = crate::epsilon::epsilon_sl(self, core_id, c.sl2_dim)?;
            if c.root_number != Some(expected) {
                return Err(Error::consistency(
                    entity,
                    format!("root_number = ε(ρ⊠r(a)) = {expected}"),
                ));
            }
        }
        let clashes = self
            .constituents
            .values()
            .filter(|o| o.sl2_core.as_deref() == Some(core_id) && o.sl2_dim == c.sl2_dim)
            .count();
        if clashes > 1 {
            return Err(Error::consistency(entity, "one constituent per (sl2_core, sl2_dim)"));
        }
        Ok(())
    }

    fn validate_twist(&self, t: &Twist) -> Result<()> {
        let c = self.constituent(&t.constituent)?;
        let z = self.quadratic_character(&t.character)?;
        let r = self.constituent(&t.result)?;
        let entity = format!("twist ({}, {})", t.constituent, t.character);
        if z.is_trivial && r.id != c.id {
            return Err(Error::consistency(entity, "twisting by the trivial character is the identity"));
        }
        if c.dim != r.dim || c.sl2_dim != r.sl2_dim {
            return Err(Error::consistency(entity, "twisting preserves dim and sl2_dim"));
        }
        if c.duality.tag() != r.duality.tag() {
            return Err(Error::consistency(entity, "twisting preserves the duality type"));
        }
        let det = c.det_at_minus_one * z.value_at_minus_one.pow(c.full_dim() as u64);
        if det != r.det_at_minus_one {
            return Err(Error::consistency(entity, "det(φζ)(-1) = det φ(-1)·ζ(-1)^dim"));
        }
        Ok(())
    }

    fn validate_global(&self, g: &GlobalCuspidal) -> Result<()> {
        let entity = format!("global cuspidal `{}`", g.id);
        if g.dim == 0 {
            return Err(Error::consistency(entity, "dim is positive"));
        }
        match &g.duality {
            Duality::NonSelfDual { dual_id } => {
                let d = self.global_cuspidal(dual_id)?;
                if d.dim != g.dim {
                    return Err(Error::consistency(entity, "dual pairs have equal dim"));
                }
                if g.global_root_number.is_some() {
                    return Err(Error::consistency(
                        entity,
                        "global_root_number is recorded only for self-dual entries",
                    ));
                }
            }
            Duality::Symplectic | Duality::Orthogonal => {
                if g.global_root_number.is_none() {
                    return Err(Error::consistency(entity, "self-dual entries carry a global_root_number"));
                }
            }
        }
        for (place_id, entries) in &g.localizations {
            let place = self.place(place_id)?;
            let mut total = 0;
            for e in entries {
                let c = place.catalog.constituent(&e.constituent)?;
                if e.mult == 0 {
                    return Err(Error::consistency(entity.clone(), "localization multiplicities are positive"));
                }
                total += e.mult * c.full_dim();
                if place.unramified && !c.is_unramified_character {
                    return Err(Error::consistency(
                        entity.clone(),
                        format!("localization at unramified place `{place_id}` uses unramified characters"),
                    ));
                }
            }
            if total != g.dim {
                return Err(Error::consistency(
                    entity.clone(),
                    format!("localization at `{place_id}` has total dimension {total} ≠ {}", g.dim),
                ));
            }
            if g.duality.is_self_dual() {
                let mut counts: BTreeMap<(String, HalfInt), u32> = BTreeMap::new();
                for e in entries {
                    *counts.entry((e.constituent.clone(), e.shift)).or_default() += e.mult;
                }
                for ((c, s), m) in &counts {
                    let dual = place.catalog.constituent(c)?.dual_id().to_string();
                    if counts.get(&(dual, -*s)) != Some(m) {
                        return Err(Error::consistency(
                            entity.clone(),
                            format!("localization at `{place_id}` is self-dual"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn constituent_doc(c: &Constituent) -> ConstituentDoc {
    let (duality, dual_id) = split_duality(&c.duality);
    ConstituentDoc {
        id: c.id.clone(),
        dim: c.dim,
        sl2_dim: c.sl2_dim,
        duality,
        dual_id,
        det_at_minus_one: c.det_at_minus_one,
        root_number: c.root_number,
        is_unramified_character: c.is_unramified_character,
        frobenius_value: c.frobenius_value,
        det_character: c.det_character.clone(),
        unbounded: c.unbounded,
        sl2_core: c.sl2_core.clone(),
    }
}

fn split_duality(d: &Duality) -> (String, Option<String>) {
    match d {
        Duality::NonSelfDual { dual_id } => (d.tag().to_string(), Some(dual_id.clone())),
        _ => (d.tag().to_string(), None),
    }
}

fn duplicate(kind: &str, id: &str) -> Error {
    Error::consistency(format!("{kind} `{id}`"), "ids are unique")
}

fn dedup_identical(doc: &mut CatalogDoc) -> Result<()> {
    fn dedup<T: Clone + PartialEq>(v: &mut Vec<T>, id: impl Fn(&T) -> String, kind: &str) -> Result<()> {
        let mut out: Vec<T> = Vec::new();
        for item in v.drain(..) {
            match out.iter().find(|o| id(o) == id(&item)) {
                Some(o) if *o == item => {}
                Some(_) => return Err(duplicate(kind, &id(&item))),
                None => out.push(item),
            }
        }
        *v = out;
        Ok(())
    }
    dedup(&mut doc.quadratic_characters, |q| q.id.clone(), "quadratic character")?;
    dedup(&mut doc.constituents, |c| c.id.clone(), "constituent")?;
    dedup(&mut doc.twists, |t| format!("({}, {})", t.constituent, t.character), "twist")?;
    dedup(&mut doc.global_cuspidals, |g| g.id.clone(), "global cuspidal")?;
    dedup(&mut doc.places, |p| p.id.clone(), "place")?;
    doc.rankin_selberg.sort();
    doc.rankin_selberg.dedup();
    Ok(())
}

fn validate_quadratic(q: &QuadraticCharacter) -> Result<()> {
    let entity = format!("quadratic character `{}`", q.id);
    if q.is_unramified && q.frobenius_value.is_none() {
        return Err(Error::consistency(entity, "unramified characters declare frobenius_value"));
    }
    if q.is_trivial
        && (q.value_at_minus_one != Sign::Plus
            || q.frobenius_value == Some(Sign::Minus)
            || q.square_class_values.values().any(|s| s.is_minus()))
    {
        return Err(Error::consistency(entity, "the trivial character takes the value +1 everywhere"));
    }
    if let Some(v) = q.square_class_values.get("minus_one") {
        if *v != q.value_at_minus_one {
            return Err(Error::consistency(entity, "square_class_values[minus_one] = value_at_minus_one"));
        }
    }
    Ok(())
}

/// Parses and validates a catalog document.
pub fn load_catalog(text: &str) -> Result<Catalog> {
    let doc: CatalogDoc =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    Catalog::from_doc(doc, true)
}

/// Same as [`load_catalog`] for an already-parsed JSON value.
pub fn load_catalog_value(value: serde_json::Value) -> Result<Catalog> {
    let doc: CatalogDoc =
        serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    Catalog::from_doc(doc, true)
}

/// The twist `φζ`; the identity when `ζ` is trivial.
pub fn twist_constituent(cat: &Catalog, id: &str, zeta: &str) -> Result<String> {
    cat.constituent(id)?;
    if cat.quadratic_character(zeta)?.is_trivial {
        return Ok(id.to_string());
    }
    cat.twists
        .get(&(id.to_string(), zeta.to_string()))
        .cloned()
        .ok_or_else(|| Error::MissingTwist {
            constituent: id.to_string(),
            character: zeta.to_string(),
        })
}

/// Pairwise constraints that are reported rather than rejected at load:
/// involutivity of twists and duals, symmetry of the Rankin–Selberg table.
pub fn validate_cross_constraints(cat: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    for ((c, z), r) in &cat.twists {
        if cat.quadratic_characters.get(z).is_some_and(|q| q.is_trivial) {
            continue;
        }
        match cat.twists.get(&(r.clone(), z.clone())) {
            Some(back) if back == c => {}
            Some(back) => out.push(Violation {
                constraint: "twist involution",
                detail: format!("({c}, {z}) → {r} but ({r}, {z}) → {back}"),
            }),
            None => out.push(Violation {
                constraint: "twist involution",
                detail: format!("({c}, {z}) → {r} but ({r}, {z}) is missing"),
            }),
        }
    }
    for c in cat.constituents.values() {
        if let Duality::NonSelfDual { dual_id } = &c.duality {
            let back = cat.constituents.get(dual_id).map(|d| d.dual_id().to_string());
            if back.as_deref() != Some(c.id.as_str()) {
                out.push(Violation {
                    constraint: "dual involution",
                    detail: format!("dual of `{}` is `{dual_id}` whose dual is not `{}`", c.id, c.id),
                });
            }
        }
    }
    for g in cat.global_cuspidals.values() {
        if let Duality::NonSelfDual { dual_id } = &g.duality {
            let back = cat.global_cuspidals.get(dual_id).map(|d| d.dual_id().to_string());
            if back.as_deref() != Some(g.id.as_str()) {
                out.push(Violation {
                    constraint: "dual involution",
                    detail: format!("dual of `{}` is `{dual_id}` whose dual is not `{}`", g.id, g.id),
                });
            }
        }
    }
    let mut seen: BTreeMap<BTreeSet<&str>, Sign> = BTreeMap::new();
    for e in &cat.rankin_selberg {
        let key: BTreeSet<&str> = [e.left.as_str(), e.right.as_str()].into();
        match seen.get(&key) {
            Some(s) if *s != e.sign => out.push(Violation {
                constraint: "rankin-selberg symmetry",
                detail: format!("{{{}, {}}} has both signs", e.left, e.right),
            }),
            _ => {
                seen.insert(key, e.sign);
            }
        }
    }
    for p in cat.places.values() {
        for v in validate_cross_constraints(&p.catalog) {
            out.push(Violation {
                constraint: v.constraint,
                detail: format!("place `{}`: {}", p.id, v.detail),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn f1_loads_with_five_constituents() {
        let cat = load_catalog(&fixtures::f1_json()).unwrap();
        assert_eq!(cat.constituents().count(), 5);
        assert!(validate_cross_constraints(&cat).is_empty());
    }

    #[test]
    fn root_number_must_square_to_det() {
        let mut v: serde_json::Value = serde_json::from_str(&fixtures::f1_json()).unwrap();
        set_field(&mut v, "rho2", "root_number", serde_json::json!("i"));
        let err = load_catalog_value(v).unwrap_err();
        match err {
            Error::Consistency { entity, invariant } => {
                assert!(entity.contains("rho2"));
                assert!(invariant.contains("root_number² = det_at_minus_one"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn chi_b_with_root_i_is_accepted() {
        // i² = −1 = det(−1)
        let cat = load_catalog(&fixtures::f1_json()).unwrap();
        let c = cat.constituent("chi_b").unwrap();
        assert_eq!(c.root_number, Some(Mu4::I));
        assert_eq!(c.det_at_minus_one, Sign::Minus);
    }

    #[test]
    fn unknown_field_is_schema_error() {
        let err = load_catalog(r#"{"constituents": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn unknown_det_character_is_dangling() {
        let mut v: serde_json::Value = serde_json::from_str(&fixtures::f1_json()).unwrap();
        set_field(&mut v, "tau2", "det_character", serde_json::json!("nope"));
        assert!(matches!(
            load_catalog_value(v).unwrap_err(),
            Error::DanglingReference { .. }
        ));
    }

    #[test]
    fn unramified_root_is_enforced() {
        let mut v: serde_json::Value = serde_json::from_str(&fixtures::f1_json()).unwrap();
        set_field(&mut v, "one", "root_number", serde_json::Value::Null);
        let cat = load_catalog_value(v.clone()).unwrap();
        assert_eq!(cat.constituent("one").unwrap().root_number, Some(Mu4::ONE));
        set_field(&mut v, "one", "root_number", serde_json::json!("-1"));
        assert!(matches!(load_catalog_value(v).unwrap_err(), Error::Consistency { .. }));
    }

    #[test]
    fn archimedean_flag_forbids_deligne_sl2() {
        let cat = fixtures::f1_extended();
        let mut v = cat.to_value();
        v["archimedean"] = serde_json::json!(true);
        assert!(matches!(load_catalog_value(v).unwrap_err(), Error::Consistency { .. }));
    }

    #[test]
    fn twists() {
        let cat = fixtures::f1_extended();
        assert_eq!(twist_constituent(&cat, "one", "chi_a").unwrap(), "chi_a");
        assert_eq!(twist_constituent(&cat, "rho2", "triv").unwrap(), "rho2");
        let bare = load_catalog(&fixtures::f1_json()).unwrap();
        assert!(matches!(
            twist_constituent(&bare, "rho2", "chi_a"),
            Err(Error::MissingTwist { .. })
        ));
    }

    #[test]
    fn one_sided_twist_is_one_violation() {
        let mut v = fixtures::f1_extended().to_value();
        let twists = v["twists"].as_array_mut().unwrap();
        twists.retain(|t| !(t["constituent"] == "rho2_a" && t["character"] == "chi_a"));
        let cat = load_catalog_value(v).unwrap();
        let report = validate_cross_constraints(&cat);
        assert_eq!(report.len(), 1, "{report:?}");
        assert_eq!(report[0].constraint, "twist involution");
    }

    #[test]
    fn asymmetric_rankin_selberg_is_one_violation() {
        let mut v = fixtures::f1_extended().to_value();
        v["rankin_selberg"] = serde_json::json!([
            {"left": "rho2", "right": "chi_a", "sign": -1},
            {"left": "chi_a", "right": "rho2", "sign": 1}
        ]);
        let cat = load_catalog_value(v).unwrap();
        let report = validate_cross_constraints(&cat);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].constraint, "rankin-selberg symmetry");
    }

    #[test]
    fn type_changing_twist_is_rejected_at_load() {
        let mut v = fixtures::f1_extended().to_value();
        v["twists"]
            .as_array_mut()
            .unwrap()
            .push(serde_json::json!({"constituent": "rho2", "character": "chi_b", "result": "tau2"}));
        assert!(matches!(load_catalog_value(v).unwrap_err(), Error::Consistency { .. }));
    }

    #[test]
    fn serialization_round_trip() {
        for cat in [fixtures::f1(), fixtures::f1_extended(), fixtures::principal_global()] {
            let again = load_catalog(&cat.to_json()).unwrap();
            assert_eq!(again, cat);
            assert_eq!(again.to_json(), cat.to_json());
        }
    }

    #[test]
    fn localization_dimension_is_checked() {
        let mut v = fixtures::principal_global().to_value();
        v["global_cuspidals"][0]["localizations"]["v1"][0]["mult"] = serde_json::json!(2);
        assert!(matches!(load_catalog_value(v).unwrap_err(), Error::Consistency { .. }));
    }

    fn set_field(v: &mut serde_json::Value, id: &str, field: &str, value: serde_json::Value) {
        for c in v["constituents"].as_array_mut().unwrap() {
            if c["id"] == id {
                if value.is_null() {
                    c.as_object_mut().unwrap().remove(field);
                } else {
                    c[field] = value.clone();
                }
            }
        }
    }
}

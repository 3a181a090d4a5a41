//! Global parameters over a catalog of cuspidal entries, their localizations,
//! the global sign characters and the evaluator of the multiplicity formula.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::bits::{Bits, F2Map};
use crate::catalog::{Catalog, Duality, Place};
use crate::components::{
    center_order, distinguished_elements, enumerate_splittings, iota_coefficient, m_dblprime_per_summand,
    splitting_image, splitting_to_endoscopic, EndoscopicDatum, Splitting,
};
use crate::epsilon::{arthur_sign_rule, epsilon_minus_part, nu_character, ArthurSlot};
use crate::error::{Error, Result};
use crate::mu4::{Mu4, Sign};
use crate::packets::{Member, PacketModel};
use crate::parameters::{canonicalize, ArthurParameter, Bucket, HalfInt, Summand, SummandInfo};

/// Largest total rank `Σ_v rank 𝒮_{ψ̇_v}` the brute-force enumerators accept.
pub const MAX_TUPLE_RANK: usize = 24;

/// `ψ̇ = ⊕ m_i φ̇_i ⊠ r(b_i)` over the global cuspidal entries of a catalog.
///
/// The underlying [`ArthurParameter`] carries the global root numbers, and
/// `det(−1) = +1` for every entry, so the component-group and splitting
/// machinery applies unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GlobalParameter {
    shape: ArthurParameter,
}

impl fmt::Display for GlobalParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.shape.fmt(f)
    }
}

impl GlobalParameter {
    pub fn new(cat: &Catalog, summands: Vec<Summand>) -> Result<GlobalParameter> {
        let summands = canonicalize(summands);
        let mut info = Vec::with_capacity(summands.len());
        for s in &summands {
            if s.b == 0 || s.mult == 0 {
                return Err(Error::consistency(format!("summand {s}"), "b and mult are positive"));
            }
            let g = cat.global_cuspidal(&s.constituent)?;
            let bucket = Bucket::of(&g.duality, s.b);
            info.push(SummandInfo {
                bucket,
                representative: bucket == Bucket::Jpair && g.id.as_str() < g.dual_id(),
                dual_id: g.dual_id().to_string(),
                full_dim: g.dim,
                sl2_dim: 1,
                det_at_minus_one: Sign::Plus,
                root_number: g.global_root_number.map(Mu4::from),
                unbounded: false,
                unramified_character: false,
                basis_index: None,
                split_index: None,
            });
        }
        Ok(GlobalParameter {
            shape: ArthurParameter::assemble(summands, info)?,
        })
    }

    pub fn from_json(cat: &Catalog, text: &str) -> Result<GlobalParameter> {
        let summands: Vec<Summand> = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        GlobalParameter::new(cat, summands)
    }

    /// The parameter as an index structure (summands, buckets, bases).
    pub fn shape(&self) -> &ArthurParameter {
        &self.shape
    }

    pub fn summands(&self) -> &[Summand] {
        self.shape.summands()
    }

    pub fn rank(&self) -> usize {
        self.shape.basis().len()
    }

    /// Good parity with all multiplicities 1.
    pub fn is_discrete(&self) -> bool {
        self.shape.info().iter().all(|i| i.bucket == Bucket::Iplus) && self.summands().iter().all(|s| s.mult == 1)
    }

    fn require_discrete(&self) -> Result<()> {
        if self.is_discrete() {
            Ok(())
        } else {
            Err(Error::consistency(format!("{self}"), "the global parameter is discrete"))
        }
    }
}

/// A pair member `φ|·|^k` of the localization that does not enter the
/// component group; it pairs with `φ∨|·|^{−k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedPiece {
    pub source: usize,
    pub constituent: String,
    pub shift: HalfInt,
    pub b: u32,
    /// Copies per copy of the global summand.
    pub count: u32,
}

/// `ψ̇_v` together with `𝒮_ψ̇ → 𝒮_{ψ̇_v}`.
#[derive(Clone, Debug, Serialize)]
pub struct Localization {
    pub place: String,
    pub unramified: bool,
    /// The shift-0 part, a parameter over the place's catalog.
    pub local: ArthurParameter,
    pub shifted: Vec<ShiftedPiece>,
    #[serde(serialize_with = "columns_as_strings")]
    pub map: F2Map,
    /// Per global summand: shift-0 constituents with their counts per copy.
    #[serde(skip)]
    counts: Vec<Vec<(String, u32)>>,
}

fn columns_as_strings<S: Serializer>(m: &F2Map, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
}

fn place_of<'a>(cat: &'a Catalog, v: &str) -> Result<&'a Place> {
    cat.place(v)
}

pub fn localize(cat: &Catalog, gp: &GlobalParameter, v: &str) -> Result<Localization> {
    let place = place_of(cat, v)?;
    let mut summands = Vec::new();
    let mut shifted = Vec::new();
    let mut counts = Vec::new();
    for (idx, s) in gp.summands().iter().enumerate() {
        let g = cat.global_cuspidal(&s.constituent)?;
        let entries = g.localizations.get(v).ok_or_else(|| Error::MissingLocalization {
            cuspidal: g.id.clone(),
            place: v.to_string(),
        })?;
        let mut here: BTreeMap<String, u32> = BTreeMap::new();
        for e in entries {
            if e.shift.is_zero() {
                *here.entry(e.constituent.clone()).or_default() += e.mult;
                summands.push(Summand::new(e.constituent.clone(), s.b, s.mult * e.mult));
            } else {
                shifted.push(ShiftedPiece {
                    source: idx,
                    constituent: e.constituent.clone(),
                    shift: e.shift,
                    b: s.b,
                    count: e.mult,
                });
            }
        }
        counts.push(here.into_iter().collect::<Vec<_>>());
    }
    let local = ArthurParameter::new(&place.catalog, summands)?;
    let columns = gp
        .shape
        .basis()
        .iter()
        .map(|&k| {
            let b = gp.summands()[k].b;
            let mut col = Bits::zero(local.basis().len());
            for (c, n) in &counts[k] {
                if n % 2 == 1 {
                    let pos = local
                        .summands()
                        .iter()
                        .position(|t| t.constituent == *c && t.b == b)
                        .expect("summand present");
                    if let Some(j) = local.info()[pos].basis_index {
                        col.flip(j);
                    }
                }
            }
            col
        })
        .collect();
    Ok(Localization {
        place: v.to_string(),
        unramified: place.unramified,
        map: F2Map::new(local.basis().len(), columns),
        local,
        shifted,
        counts,
    })
}

impl Localization {
    /// The local class of `s`: `m″ = Σ_i m″_i · count_i` at each local key.
    pub fn local_splitting(&self, gp: &GlobalParameter, s: &Splitting) -> Splitting {
        let m2s = m_dblprime_per_summand(&gp.shape, s);
        let parts = self
            .local
            .split_keys()
            .iter()
            .map(|&k| {
                let key = &self.local.summands()[k];
                let m2: u32 = gp
                    .summands()
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.b == key.b)
                    .map(|(i, _)| {
                        self.counts[i]
                            .iter()
                            .filter(|(c, _)| *c == key.constituent)
                            .map(|(_, n)| m2s[i] * n)
                            .sum::<u32>()
                    })
                    .sum();
                (key.mult - m2, m2)
            })
            .collect();
        Splitting { parts }
    }

    /// `ε(ψ̇_v^{s=−1})`: the shift-0 part through the local product formula,
    /// each shifted pair contributing `det φ(−1)^{b m″ count}`.
    pub fn local_epsilon(&self, cat: &Catalog, gp: &GlobalParameter, s: &Splitting) -> Result<Sign> {
        let place = place_of(cat, &self.place)?;
        let mut acc = epsilon_minus_part(&self.local, &self.local_splitting(gp, s))?;
        let m2s = m_dblprime_per_summand(&gp.shape, s);
        for p in &self.shifted {
            let c = place.catalog.constituent(&p.constituent)?;
            let own = (p.constituent.as_str(), p.shift);
            let partner = (c.dual_id(), -p.shift);
            if own < partner {
                acc *= c.det_at_minus_one.pow((p.b * m2s[p.source] * p.count) as u64);
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationDiagnostics {
    pub v0: Vec<String>,
    pub u: String,
    pub injective_into_v0: bool,
    pub kernel_witness: Option<Bits>,
    pub surjective_at_u: bool,
    pub cokernel_witness: Option<Bits>,
}

/// Injectivity of `𝒮_ψ̇ → ∏_{v∈V₀} 𝒮_{ψ̇_v}` and surjectivity of `𝒮_ψ̇ → 𝒮_{ψ̇_u}`.
pub fn localization_diagnostics(cat: &Catalog, gp: &GlobalParameter, v0: &[String], u: &str) -> Result<LocalizationDiagnostics> {
    let locs = v0.iter().map(|v| localize(cat, gp, v)).collect::<Result<Vec<_>>>()?;
    let maps: Vec<&F2Map> = locs.iter().map(|l| &l.map).collect();
    let combined = if maps.is_empty() {
        F2Map::new(0, vec![Bits::zero(0); gp.rank()])
    } else {
        F2Map::stack(&maps)
    };
    let at_u = localize(cat, gp, u)?;
    Ok(LocalizationDiagnostics {
        v0: v0.to_vec(),
        u: u.to_string(),
        injective_into_v0: combined.is_injective(),
        kernel_witness: combined.kernel_witness(),
        surjective_at_u: at_u.map.is_surjective(),
        cokernel_witness: at_u.map.cokernel_witness(),
    })
}

/// `ν_ψ̇`: component `ε(φ̇_i)^{b_i}`.
pub fn nu_global(gp: &GlobalParameter) -> Result<Bits> {
    nu_character(&gp.shape)
}

/// `ε(ψ̇^{s=−1})` from the global root numbers.
pub fn global_minus_part(gp: &GlobalParameter, s: &Splitting) -> Result<Sign> {
    epsilon_minus_part(&gp.shape, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationRow {
    pub splitting: Splitting,
    pub image: Bits,
    pub nu: Sign,
    pub global: Sign,
    pub local: BTreeMap<String, Sign>,
    pub local_product: Sign,
    pub ok: bool,
}

/// Local factors of the splitting that is `−1` on one copy of a single summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspidalFactorRow {
    pub cuspidal: String,
    pub b: u32,
    pub global: Sign,
    pub local: BTreeMap<String, Sign>,
    pub local_product: Sign,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub places: Vec<String>,
    /// Places outside `V` that are not marked unramified.
    pub ramified_outside: Vec<String>,
    pub nu_at_s_psi: Sign,
    pub rows: Vec<FactorizationRow>,
    pub cuspidals: Vec<CuspidalFactorRow>,
}

impl FactorizationReport {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok).count()
    }

    pub fn failing_cuspidals(&self) -> Vec<&str> {
        self.cuspidals.iter().filter(|r| !r.ok).map(|r| r.cuspidal.as_str()).collect()
    }

    pub fn ok(&self) -> bool {
        self.mismatches() == 0 && self.nu_at_s_psi == Sign::Plus && self.ramified_outside.is_empty()
    }
}

/// Compares `ν_ψ̇(x)`, the global `ε(ψ̇^{s=−1})` and `∏_{v∈V} ε(ψ̇_v^{s=−1})`
/// for every splitting, and tabulates per-summand local factors.
pub fn nu_factorization_check(cat: &Catalog, gp: &GlobalParameter, places: &[String]) -> Result<FactorizationReport> {
    let locs = places.iter().map(|v| localize(cat, gp, v)).collect::<Result<Vec<_>>>()?;
    let nu = nu_global(gp)?;
    let (x_psi, _) = distinguished_elements(&gp.shape);
    let in_v: BTreeSet<&str> = places.iter().map(|s| s.as_str()).collect();
    let ramified_outside = cat
        .places()
        .filter(|p| !p.unramified && !in_v.contains(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect();

    let local_factors = |s: &Splitting| -> Result<BTreeMap<String, Sign>> {
        locs.iter()
            .map(|l| Ok((l.place.clone(), l.local_epsilon(cat, gp, s)?)))
            .collect()
    };

    let mut rows = Vec::new();
    for s in enumerate_splittings(&gp.shape) {
        let image = splitting_image(&gp.shape, &s);
        let local = local_factors(&s)?;
        let local_product = Sign::product(local.values().copied());
        let global = global_minus_part(gp, &s)?;
        let nu_x = nu.pair(&image);
        rows.push(FactorizationRow {
            ok: global == local_product && (nu_x == global || !gp.is_discrete()),
            splitting: s,
            image,
            nu: nu_x,
            global,
            local,
            local_product,
        });
    }

    let mut cuspidals = Vec::new();
    for (j, &k) in gp.shape.split_keys().iter().enumerate() {
        let summand = &gp.summands()[k];
        let step = if gp.shape.info()[k].bucket == Bucket::Iminus { 2 } else { 1 };
        let mut s = Splitting::trivial(&gp.shape);
        s.parts[j] = (summand.mult - step, step);
        let local = local_factors(&s)?;
        let local_product = Sign::product(local.values().copied());
        let global = global_minus_part(gp, &s)?;
        cuspidals.push(CuspidalFactorRow {
            cuspidal: summand.constituent.clone(),
            b: summand.b,
            ok: global == local_product,
            global,
            local,
            local_product,
        });
    }

    Ok(FactorizationReport {
        places: places.to_vec(),
        ramified_outside,
        nu_at_s_psi: nu.pair(&x_psi),
        rows,
        cuspidals,
    })
}

/// `ε^Art_ψ̇` from the Rankin–Selberg signs of the catalog's global entries.
pub fn epsilon_art(cat: &Catalog, gp: &GlobalParameter) -> Result<Bits> {
    gp.require_discrete()?;
    let dualities: Vec<&Duality> = gp
        .summands()
        .iter()
        .map(|s| cat.global_cuspidal(&s.constituent).map(|g| &g.duality))
        .collect::<Result<_>>()?;
    let slots: Vec<ArthurSlot<'_>> = gp
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

/// `ε_ψ̇ = ε^Art_ψ̇ ν_ψ̇`; `art_override` replaces the default `ε^Art` rule.
pub fn epsilon_psi(cat: &Catalog, gp: &GlobalParameter, art_override: Option<&Bits>) -> Result<Bits> {
    let art = match art_override {
        Some(a) => {
            if a.len() != gp.rank() {
                return Err(Error::consistency("epsilon_art override", format!("has {} bits", gp.rank())));
            }
            *a
        }
        None => epsilon_art(cat, gp)?,
    };
    Ok(art.add(&nu_global(gp)?))
}

/// `X(ψ̇, V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSet {
    pub places: Vec<String>,
    pub local_ranks: Vec<usize>,
    pub target: Bits,
    /// Whether the target lies in the image of `diag*_V`.
    pub solvable: bool,
    /// `2^{Σ rank − rank diag}` when solvable, else 0.
    pub expected_count: u64,
    pub tuples: Vec<Vec<Bits>>,
}

fn localizations(cat: &Catalog, gp: &GlobalParameter, places: &[String]) -> Result<Vec<Localization>> {
    places.iter().map(|v| localize(cat, gp, v)).collect()
}

/// Sum over places of the pullbacks of `tuple` along the localization maps.
fn diagonal_pullback(locs: &[Localization], tuple: &[Bits], rank: usize) -> Bits {
    locs.iter()
        .zip(tuple)
        .fold(Bits::zero(rank), |acc, (l, chi)| acc.add(&l.map.pullback(chi)))
}

/// Enumerates all tuples `(χ_v)_{v∈V}` with `diag*_V(∏ χ_v) = target`.
pub fn character_constraint_set(cat: &Catalog, gp: &GlobalParameter, places: &[String], target: &Bits) -> Result<ConstraintSet> {
    let locs = localizations(cat, gp, places)?;
    let ranks: Vec<usize> = locs.iter().map(|l| l.local.basis().len()).collect();
    let total: usize = ranks.iter().sum();
    if total > MAX_TUPLE_RANK {
        return Err(Error::consistency(
            format!("X(ψ̇, V) for {gp}"),
            format!("total local rank {total} exceeds {MAX_TUPLE_RANK}"),
        ));
    }
    // Transpose of the stacked map: a local basis character goes to its pullback.
    let pullbacks: Vec<Bits> = locs
        .iter()
        .flat_map(|l| (0..l.local.basis().len()).map(|j| l.map.pullback(&Bits::unit(l.local.basis().len(), j))))
        .collect();
    let transpose = F2Map::new(gp.rank(), pullbacks);
    let solvable = transpose.image_contains(target);
    let expected_count = if solvable { 1u64 << (total - transpose.rank()) } else { 0 };

    let mut tuples = Vec::new();
    for flat in Bits::all(total) {
        let mut tuple = Vec::with_capacity(ranks.len());
        let mut off = 0;
        for &r in &ranks {
            tuple.push(Bits::from_mask(r, flat.mask() >> off));
            off += r;
        }
        if diagonal_pullback(&locs, &tuple, gp.rank()) == *target {
            tuples.push(tuple);
        }
    }
    Ok(ConstraintSet {
        places: places.to_vec(),
        local_ranks: ranks,
        target: *target,
        solvable,
        expected_count,
        tuples,
    })
}

/// A tuple `π̇_V = (π_v)` with its multiplicity in `Π_ψ̇(ε_ψ̇)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GlobalMember {
    pub labels: Vec<String>,
    pub characters: Vec<Vec<Bits>>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalPacket {
    pub places: Vec<String>,
    pub members: Vec<GlobalMember>,
}

fn packets_at(
    cat: &Catalog,
    gp: &GlobalParameter,
    packets: &BTreeMap<String, PacketModel>,
    places: &[String],
) -> Result<(Vec<Localization>, Vec<PacketModel>)> {
    let locs = localizations(cat, gp, places)?;
    let mut models = Vec::with_capacity(locs.len());
    for l in &locs {
        let pm = match packets.get(&l.place) {
            Some(pm) => {
                if *pm.parameter() != l.local {
                    return Err(Error::consistency(
                        format!("packet at `{}`", l.place),
                        format!("is a packet of ψ̇_v = {}", l.local),
                    ));
                }
                pm.clone()
            }
            None if l.unramified => PacketModel::spherical_singleton(&place_of(cat, &l.place)?.catalog, l.local.clone())?,
            None => {
                return Err(Error::Schema(format!("no packet model at ramified place `{}`", l.place)));
            }
        };
        models.push(pm);
    }
    Ok((locs, models))
}

/// `Π_ψ̇(ε)`: member tuples over `V` whose characters pull back to `target`,
/// counted with multiplicity.
pub fn global_packet_members(
    cat: &Catalog,
    gp: &GlobalParameter,
    packets: &BTreeMap<String, PacketModel>,
    places: &[String],
    target: &Bits,
) -> Result<GlobalPacket> {
    let (locs, models) = packets_at(cat, gp, packets, places)?;
    let mut found: BTreeMap<Vec<String>, (u32, BTreeSet<Vec<Bits>>)> = BTreeMap::new();
    let mut idx = vec![0usize; models.len()];
    if models.iter().all(|m| !m.members().is_empty()) {
        loop {
            let chosen: Vec<&Member> = models.iter().zip(&idx).map(|(m, &i)| &m.members()[i]).collect();
            let chars: Vec<Bits> = chosen.iter().map(|m| m.character).collect();
            if diagonal_pullback(&locs, &chars, gp.rank()) == *target {
                let labels = chosen.iter().map(|m| m.label.clone()).collect();
                let entry = found.entry(labels).or_default();
                entry.0 += 1;
                entry.1.insert(chars);
            }
            // odometer
            let mut p = 0;
            loop {
                if p == idx.len() {
                    break;
                }
                idx[p] += 1;
                if idx[p] < models[p].members().len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == idx.len() {
                break;
            }
        }
    }
    Ok(GlobalPacket {
        places: places.to_vec(),
        members: found
            .into_iter()
            .map(|(labels, (multiplicity, chars))| GlobalMember {
                labels,
                characters: chars.into_iter().collect(),
                multiplicity,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnlargementReport {
    pub added_places: Vec<String>,
    pub added_places_unramified: bool,
    /// Tuples over `V′` trivial at the added places restrict bijectively onto `X(ψ̇, V)`.
    pub constraint_projection_ok: bool,
    /// Member tuples over `V′` that are spherical at the added places, with
    /// those coordinates dropped, equal the member tuples over `V`.
    pub members_projection_ok: bool,
    /// Contributing tuples whose member at an added place is spherical but whose character there is nontrivial.
    pub spherical_with_nontrivial_character: usize,
}

impl EnlargementReport {
    pub fn ok(&self) -> bool {
        self.added_places_unramified
            && self.constraint_projection_ok
            && self.members_projection_ok
            && self.spherical_with_nontrivial_character == 0
    }
}

pub fn enlargement_check(
    cat: &Catalog,
    gp: &GlobalParameter,
    packets: &BTreeMap<String, PacketModel>,
    places: &[String],
    larger: &[String],
    target: &Bits,
) -> Result<EnlargementReport> {
    let positions: Vec<usize> = places
        .iter()
        .map(|v| {
            larger
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::consistency("enlargement", format!("`{v}` belongs to the larger place set")))
        })
        .collect::<Result<_>>()?;
    let added: Vec<usize> = (0..larger.len()).filter(|i| !positions.contains(i)).collect();
    let added_places: Vec<String> = added.iter().map(|&i| larger[i].clone()).collect();
    let added_places_unramified = added_places
        .iter()
        .map(|v| place_of(cat, v).map(|p| p.unramified))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|u| u);

    let small = character_constraint_set(cat, gp, places, target)?;
    let big = character_constraint_set(cat, gp, larger, target)?;
    let projected: BTreeSet<Vec<Bits>> = big
        .tuples
        .iter()
        .filter(|t| added.iter().all(|&i| t[i].is_zero()))
        .map(|t| positions.iter().map(|&i| t[i]).collect())
        .collect();
    let small_set: BTreeSet<Vec<Bits>> = small.tuples.iter().cloned().collect();
    let kept = big.tuples.iter().filter(|t| added.iter().all(|&i| t[i].is_zero())).count();
    let constraint_projection_ok = projected == small_set && kept == small.tuples.len();

    let small_members = global_packet_members(cat, gp, packets, places, target)?;
    let (_, models) = packets_at(cat, gp, packets, larger)?;
    let spherical_labels: Vec<Option<String>> = models
        .iter()
        .map(|m| {
            m.members()
                .iter()
                .find(|x| x.has(crate::packets::MemberFlag::Spherical))
                .map(|x| x.label.clone())
        })
        .collect();
    let big_members = global_packet_members(cat, gp, packets, larger, target)?;
    let mut spherical_with_nontrivial_character = 0;
    let mut restricted: BTreeMap<Vec<String>, u32> = BTreeMap::new();
    for m in &big_members.members {
        let spherical_at_added = added
            .iter()
            .all(|&i| spherical_labels[i].as_deref() == Some(m.labels[i].as_str()));
        if !spherical_at_added {
            continue;
        }
        for chars in &m.characters {
            if added.iter().any(|&i| !chars[i].is_zero()) {
                spherical_with_nontrivial_character += 1;
            }
        }
        let labels: Vec<String> = positions.iter().map(|&i| m.labels[i].clone()).collect();
        *restricted.entry(labels).or_default() += m.multiplicity;
    }
    let small_map: BTreeMap<Vec<String>, u32> = small_members
        .members
        .iter()
        .map(|m| (m.labels.clone(), m.multiplicity))
        .collect();
    Ok(EnlargementReport {
        added_places,
        added_places_unramified,
        constraint_projection_ok,
        members_projection_ok: restricted == small_map,
        spherical_with_nontrivial_character,
    })
}

fn ratio_str<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// One row of the coefficient identity `ι(G̃, G!) |S̄_ψ̇!|⁻¹ = |𝒮_ψ̇|⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientRow {
    pub splitting: Splitting,
    pub datum: EndoscopicDatum,
    pub s_order: u64,
    pub z_order: u64,
    #[serde(serialize_with = "ratio_str")]
    pub iota: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub s_bar_order: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub lhs: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub rhs: Ratio<u64>,
    pub holds: bool,
}

/// For a discrete `ψ̇`: `|S_ψ̇!| = |S_ψ̇′| · |S_ψ̇″|` with each factor `2^{#summands}`,
/// `|S̄_ψ̇!| = |S_ψ̇!| / |Z_{(G!)∨}|`.
pub fn stable_coefficient_table(gp: &GlobalParameter) -> Result<Vec<CoefficientRow>> {
    gp.require_discrete()?;
    let s_order = 1u64 << gp.rank();
    let mut rows = Vec::new();
    for s in enumerate_splittings(&gp.shape) {
        let e = splitting_to_endoscopic(&gp.shape, &s);
        let endo_order = (1u64 << e.psi_prime.len()) * (1u64 << e.psi_dblprime.len());
        let z_order = center_order(e.datum);
        let s_bar_order = Ratio::new(endo_order, z_order);
        let iota = iota_coefficient(e.datum);
        let lhs = iota / s_bar_order;
        let rhs = Ratio::new(1, s_order);
        rows.push(CoefficientRow {
            splitting: s,
            datum: e.datum,
            s_order,
            z_order,
            iota,
            s_bar_order,
            lhs,
            rhs,
            holds: lhs == rhs,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::packets::build_principal_packet;

    fn gparam(cat: &Catalog, s: &[(&str, u32, u32)]) -> GlobalParameter {
        GlobalParameter::new(cat, s.iter().map(|(c, b, m)| Summand::new(*c, *b, *m)).collect()).unwrap()
    }

    fn places(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn principal_localization() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        let l = localize(&cat, &gp, "v1").unwrap();
        assert_eq!(l.local.to_string(), "chi_a⊠r(4)");
        assert_eq!(l.map.columns, vec![Bits::unit(1, 0)]);
        let l = localize(&cat, &gp, "v3").unwrap();
        assert!(l.unramified);
        assert!(crate::parameters::classify(&l.local).unramified);
    }

    #[test]
    fn missing_localization() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        let mut v = cat.to_value();
        v["global_cuspidals"][0]["localizations"].as_object_mut().unwrap().remove("v2");
        let cat2 = crate::catalog::load_catalog_value(v).unwrap();
        assert!(matches!(localize(&cat2, &gp, "v2"), Err(Error::MissingLocalization { .. })));
    }

    #[test]
    fn aux_fixture_diagnostics() {
        let cat = fixtures::aux_global();
        let gp = gparam(&cat, &fixtures::AUX_PARAMETER);
        let d = localization_diagnostics(&cat, &gp, &places(&["v1", "v2", "v3"]), "u").unwrap();
        assert!(d.injective_into_v0 && d.surjective_at_u);
        // at v1 the first summand is the only one localizing to rho2
        let l = localize(&cat, &gp, "v1").unwrap();
        let own = l.local.summands().iter().filter(|s| s.constituent == "rho2").count();
        assert_eq!(own, 1);
    }

    #[test]
    fn identical_localizations_are_not_injective() {
        let cat = fixtures::aux_global();
        let gp = gparam(&cat, &[("g1", 1, 1), ("g2", 1, 1)]);
        let d = localization_diagnostics(&cat, &gp, &places(&["v1", "v2", "v3", "u"]), "u").unwrap();
        assert!(!d.injective_into_v0);
        assert_eq!(d.kernel_witness.unwrap().to_string(), "11");
        // both land on the single bit of 2·rho2 at u
        assert!(d.surjective_at_u);
        let single = localization_diagnostics(&cat, &gp, &places(&["u"]), "u").unwrap();
        assert!(!single.injective_into_v0);
    }

    #[test]
    fn dual_pair_localizes_to_even_multiplicity() {
        let cat = fixtures::aux_global();
        let gp = gparam(&cat, &[("w", 1, 1), ("w_dual", 1, 1)]);
        assert_eq!(gp.rank(), 0);
        let l = localize(&cat, &gp, "v1").unwrap();
        assert_eq!(l.local.to_string(), "2(one⊠r(1))");
        assert!(l.local.basis().is_empty());
    }

    #[test]
    fn principal_nu_and_epsilon() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        assert!(nu_global(&gp).unwrap().is_zero());
        assert!(epsilon_psi(&cat, &gp, None).unwrap().is_zero());
        let r = nu_factorization_check(&cat, &gp, &places(&["v1", "v2"])).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn principal_constraint_set() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        let x = character_constraint_set(&cat, &gp, &places(&["v1", "v2"]), &Bits::zero(1)).unwrap();
        let got: Vec<String> = x.tuples.iter().map(|t| format!("{}{}", t[0], t[1])).collect();
        assert_eq!(got, vec!["00", "11"]);
        assert_eq!(x.expected_count, 2);
        let y = character_constraint_set(&cat, &gp, &places(&["v1", "v2", "v3"]), &Bits::zero(1)).unwrap();
        assert_eq!(y.tuples.len() as u64, y.expected_count);
    }

    #[test]
    fn principal_members() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        let mut packets = BTreeMap::new();
        for v in ["v1", "v2"] {
            let pc = &cat.place(v).unwrap().catalog;
            packets.insert(v.to_string(), build_principal_packet(pc, "chi_a", 2).unwrap());
        }
        let v = places(&["v1", "v2"]);
        let out = global_packet_members(&cat, &gp, &packets, &v, &Bits::zero(1)).unwrap();
        let got: Vec<(Vec<String>, u32)> = out.members.iter().map(|m| (m.labels.clone(), m.multiplicity)).collect();
        assert_eq!(
            got,
            vec![
                (vec!["omega_minus(chi_a)".into(), "omega_minus(chi_a)".into()], 1),
                (vec!["omega_plus(chi_a)".into(), "omega_plus(chi_a)".into()], 1),
            ]
        );
        let larger = places(&["v1", "v2", "v3"]);
        let r = enlargement_check(&cat, &gp, &packets, &v, &larger, &Bits::zero(1)).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn empty_local_packet_gives_nothing() {
        let cat = fixtures::principal_global();
        let gp = gparam(&cat, &[("zeta_dot", 4, 1)]);
        let pc = &cat.place("v1").unwrap().catalog;
        let local = localize(&cat, &gp, "v1").unwrap().local;
        let mut packets = BTreeMap::new();
        packets.insert("v1".to_string(), PacketModel::new(pc, local, vec![]).unwrap());
        packets.insert("v2".to_string(), build_principal_packet(pc, "chi_a", 2).unwrap());
        let out = global_packet_members(&cat, &gp, &packets, &places(&["v1", "v2"]), &Bits::zero(1)).unwrap();
        assert!(out.members.is_empty());
    }

    #[test]
    fn saito_kurokawa_epsilon() {
        for (sign, art) in [(Sign::Minus, "11"), (Sign::Plus, "00")] {
            let cat = fixtures::mp4_sk_global(sign);
            let gp = gparam(&cat, &fixtures::SK_PARAMETER);
            assert_eq!(epsilon_art(&cat, &gp).unwrap().to_string(), art);
            let eps = epsilon_psi(&cat, &gp, None).unwrap();
            assert_eq!(eps, epsilon_art(&cat, &gp).unwrap().add(&nu_global(&gp).unwrap()));
        }
    }

    #[test]
    fn coefficient_rows() {
        let cat = fixtures::aux_global();
        let gp = gparam(&cat, &fixtures::AUX_PARAMETER);
        let rows = stable_coefficient_table(&gp).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.holds));
        let mixed = rows.iter().find(|r| r.datum.n_prime > 0 && r.datum.n_dblprime > 0).unwrap();
        assert_eq!((mixed.s_order, mixed.z_order), (8, 4));
        assert_eq!(mixed.s_bar_order, Ratio::from_integer(2));
        assert_eq!(mixed.lhs, Ratio::new(1, 8));
        let trivial = &rows[0];
        assert_eq!(trivial.z_order, 2);
        assert_eq!(trivial.s_bar_order, Ratio::from_integer(4));

        let empty = GlobalParameter::new(&cat, vec![]).unwrap();
        let rows = stable_coefficient_table(&empty).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].z_order, rows[0].lhs), (1, Ratio::from_integer(1)));
    }
}

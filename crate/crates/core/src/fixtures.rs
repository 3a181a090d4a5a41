//! Built-in catalogs and global scenarios, plus seeded random generators for
//! property tests and benchmarks.
//!
//! `F1` is the small reference catalog over a p-adic field: the trivial
//! character, two ramified quadratic characters, one symplectic and one
//! orthogonal two-dimensional constituent. `F1-extended` adds twists,
//! `ρ ⊠ r(a)` entries, a non-self-dual pair and further variants.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::catalog::{load_catalog_value, Catalog};
use crate::mu4::{Mu4, Sign};
use crate::packets::{Member, PacketModel};
use crate::parameters::{ArthurParameter, Summand};

fn quadratic_f1() -> Vec<Value> {
    vec![
        json!({"id": "triv", "value_at_minus_one": 1, "is_trivial": true, "is_unramified": true, "frobenius_value": 1}),
        json!({"id": "chi_a", "value_at_minus_one": 1}),
        json!({"id": "chi_b", "value_at_minus_one": -1}),
    ]
}

fn constituents_f1() -> Vec<Value> {
    vec![
        json!({"id": "one", "dim": 1, "duality": "orthogonal", "det_at_minus_one": 1, "root_number": "1",
               "is_unramified_character": true, "frobenius_value": 1, "det_character": "triv"}),
        json!({"id": "chi_a", "dim": 1, "duality": "orthogonal", "det_at_minus_one": 1, "root_number": "-1",
               "det_character": "chi_a"}),
        json!({"id": "chi_b", "dim": 1, "duality": "orthogonal", "det_at_minus_one": -1, "root_number": "i",
               "det_character": "chi_b"}),
        json!({"id": "rho2", "dim": 2, "duality": "symplectic", "det_at_minus_one": 1, "root_number": "-1"}),
        json!({"id": "tau2", "dim": 2, "duality": "orthogonal", "det_at_minus_one": -1, "root_number": "i",
               "det_character": "chi_b"}),
    ]
}

fn f1_value() -> Value {
    json!({
        "quadratic_characters": quadratic_f1(),
        "constituents": constituents_f1(),
    })
}

fn twist_pairs(out: &mut Vec<Value>, character: &str, pairs: &[(&str, &str)]) {
    for (a, b) in pairs {
        out.push(json!({"constituent": a, "character": character, "result": b}));
        out.push(json!({"constituent": b, "character": character, "result": a}));
    }
}

fn f1_extended_value() -> Value {
    let mut quadratic = quadratic_f1();
    quadratic.push(json!({"id": "chi_ab", "value_at_minus_one": -1}));
    quadratic.push(json!({"id": "unr", "value_at_minus_one": 1, "is_unramified": true, "frobenius_value": -1}));

    let mut constituents = constituents_f1();
    constituents.extend([
        json!({"id": "chi_ab", "dim": 1, "duality": "orthogonal", "det_at_minus_one": -1, "root_number": "-i",
               "det_character": "chi_ab"}),
        json!({"id": "unr_minus", "dim": 1, "duality": "orthogonal", "det_at_minus_one": 1, "root_number": "1",
               "is_unramified_character": true, "frobenius_value": -1, "det_character": "unr"}),
        json!({"id": "rho2_a", "dim": 2, "duality": "symplectic", "det_at_minus_one": 1, "root_number": "1"}),
        json!({"id": "rho2_b", "dim": 2, "duality": "symplectic", "det_at_minus_one": 1, "root_number": "1"}),
        json!({"id": "tau2_a", "dim": 2, "duality": "orthogonal", "det_at_minus_one": -1, "root_number": "-i",
               "det_character": "chi_b"}),
        json!({"id": "tau2_b", "dim": 2, "duality": "orthogonal", "det_at_minus_one": -1, "root_number": "i",
               "det_character": "chi_b"}),
        json!({"id": "nu", "dim": 1, "duality": "non_self_dual", "dual_id": "nu_dual", "det_at_minus_one": -1}),
        json!({"id": "nu_dual", "dim": 1, "duality": "non_self_dual", "dual_id": "nu", "det_at_minus_one": -1}),
        json!({"id": "unb", "dim": 1, "duality": "orthogonal", "det_at_minus_one": 1, "root_number": "1",
               "det_character": "triv", "unbounded": true}),
    ]);
    // ρ ⊠ r(a) entries; rho2 ⊠ r(3) is deliberately absent.
    for (id, core, dim, a, root) in [
        ("one_r2", "one", 1, 2, "-1"),
        ("one_r4", "one", 1, 4, "-1"),
        ("chi_a_r2", "chi_a", 1, 2, "1"),
        ("chi_a_r4", "chi_a", 1, 4, "1"),
        ("chi_b_r2", "chi_b", 1, 2, "-1"),
        ("chi_b_r4", "chi_b", 1, 4, "1"),
        ("tau2_r2", "tau2", 2, 2, "-1"),
    ] {
        constituents.push(json!({"id": id, "dim": dim, "sl2_dim": a, "duality": "symplectic",
                                 "det_at_minus_one": 1, "root_number": root, "sl2_core": core}));
    }

    let mut twists = Vec::new();
    twist_pairs(&mut twists, "chi_a", &[("one", "chi_a"), ("chi_b", "chi_ab"), ("rho2", "rho2_a"), ("tau2", "tau2_a")]);
    twist_pairs(&mut twists, "chi_b", &[("one", "chi_b"), ("chi_a", "chi_ab"), ("rho2", "rho2_b"), ("tau2", "tau2_b")]);
    twist_pairs(&mut twists, "unr", &[("one", "unr_minus")]);
    json!({
        "quadratic_characters": quadratic,
        "constituents": constituents,
        "twists": twists,
    })
}

pub fn f1_json() -> String {
    serde_json::to_string_pretty(&f1_value()).expect("fixture serializes")
}

pub fn f1() -> Catalog {
    load_catalog_value(f1_value()).expect("F1 is valid")
}

pub fn f1_extended_json() -> String {
    serde_json::to_string_pretty(&f1_extended_value()).expect("fixture serializes")
}

pub fn f1_extended() -> Catalog {
    load_catalog_value(f1_extended_value()).expect("F1-extended is valid")
}

/// F1 keeping only the listed constituents.
pub fn f1_restricted(ids: &[&str]) -> Catalog {
    let mut v = f1_value();
    v["constituents"]
        .as_array_mut()
        .expect("array")
        .retain(|c| ids.iter().any(|id| c["id"] == *id));
    load_catalog_value(v).expect("restricted F1 is valid")
}

/// Builds a parameter from `(constituent, b, mult)` triples; panics on invalid input.
pub fn param(cat: &Catalog, summands: &[(&str, u32, u32)]) -> ArthurParameter {
    ArthurParameter::new(cat, summands.iter().map(|(c, b, m)| Summand::new(*c, *b, *m)).collect())
        .unwrap_or_else(|e| panic!("fixture parameter {summands:?}: {e}"))
}

/// Anti-tempered good-parity shapes of `Mp(4)` outside the unramified-character case.
pub fn mp4_psi_star_shapes() -> Vec<Vec<(&'static str, u32, u32)>> {
    vec![
        vec![("chi_a", 4, 1)],
        vec![("rho2", 1, 1), ("chi_a", 2, 1)],
        vec![("chi_a", 2, 1), ("chi_b", 2, 1)],
        vec![("tau2", 2, 1)],
        vec![("chi_a", 2, 2)],
    ]
}

fn loc(entries: &[(&str, u32)]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|(c, m)| json!({"constituent": c, "mult": m}))
            .collect(),
    )
}

fn shifted(c: &str, twice: i32, m: u32) -> Value {
    json!({"constituent": c, "shift": format!("{}/2", twice), "mult": m})
}

fn place(id: &str, unramified: bool) -> Value {
    json!({"id": id, "unramified": unramified, "catalog": f1_extended_value()})
}

fn cuspidal(id: &str, dim: u32, duality: &str, root: i32, locs: &[(&str, Value)]) -> Value {
    let localizations: serde_json::Map<String, Value> =
        locs.iter().map(|(v, l)| (v.to_string(), l.clone())).collect();
    json!({"id": id, "dim": dim, "duality": duality, "global_root_number": root, "localizations": localizations})
}

/// `ζ̇ ⊠ r(2n)` data: `ζ̇` is `chi_a` at the ramified places `v1`, `v2` and
/// trivial at the unramified place `v3`.
pub fn principal_global() -> Catalog {
    let v = json!({
        "places": [place("v1", false), place("v2", false), place("v3", true)],
        "global_cuspidals": [cuspidal("zeta_dot", 1, "orthogonal", 1, &[
            ("v1", loc(&[("chi_a", 1)])),
            ("v2", loc(&[("chi_a", 1)])),
            ("v3", loc(&[("one", 1)])),
        ])],
    });
    load_catalog_value(v).expect("principal global fixture is valid")
}

/// The Saito–Kurokawa parameter `φ̇ ⊠ r(1) ⊕ χ̇ ⊠ r(2)` of [`mp4_global`].
pub const SK_PARAMETER: [(&str, u32, u32); 2] = [("phi_dot", 1, 1), ("chi_dot", 2, 1)];

/// Global entries for `Mp(4)` over places `v1`, `v2` (ramified) and `v3`.
/// The Rankin–Selberg sign of `(phi_dot, chi_dot)` is `sk_sign`; every other
/// symplectic/orthogonal pair has sign −1.
pub fn mp4_global(sk_sign: Sign) -> Catalog {
    let two_one = loc(&[("one", 2)]);
    let cuspidals = vec![
        cuspidal("phi_dot", 2, "symplectic", 1, &[
            ("v1", loc(&[("rho2", 1)])),
            ("v2", loc(&[("rho2", 1)])),
            ("v3", two_one.clone()),
        ]),
        cuspidal("phi_a", 2, "symplectic", -1, &[
            ("v1", loc(&[("rho2", 1)])),
            ("v2", loc(&[("rho2_a", 1)])),
            ("v3", two_one.clone()),
        ]),
        cuspidal("phi4", 4, "symplectic", 1, &[
            ("v1", loc(&[("rho2", 1), ("rho2_a", 1)])),
            ("v2", loc(&[("rho2", 1), ("rho2_b", 1)])),
            ("v3", loc(&[("one", 4)])),
        ]),
        cuspidal("chi_dot", 1, "orthogonal", 1, &[
            ("v1", loc(&[("chi_a", 1)])),
            ("v2", loc(&[("chi_a", 1)])),
            ("v3", loc(&[("one", 1)])),
        ]),
        cuspidal("chi2_dot", 1, "orthogonal", 1, &[
            ("v1", loc(&[("chi_b", 1)])),
            ("v2", loc(&[("chi_ab", 1)])),
            ("v3", loc(&[("one", 1)])),
        ]),
        cuspidal("tau_dot", 2, "orthogonal", 1, &[
            ("v1", loc(&[("tau2", 1)])),
            ("v2", loc(&[("tau2_a", 1)])),
            ("v3", two_one),
        ]),
    ];
    let mut rs = Vec::new();
    for sp in ["phi_dot", "phi_a", "phi4"] {
        for o in ["chi_dot", "chi2_dot", "tau_dot"] {
            let sign = if (sp, o) == ("phi_dot", "chi_dot") { sk_sign } else { Sign::Minus };
            rs.push(json!({"left": sp, "right": o, "sign": sign}));
        }
    }
    let v = json!({
        "places": [place("v1", false), place("v2", false), place("v3", true)],
        "global_cuspidals": cuspidals,
        "rankin_selberg": rs,
    });
    load_catalog_value(v).expect("Mp(4) global fixture is valid")
}

/// [`mp4_global`] under its Saito–Kurokawa name.
pub fn mp4_sk_global(sk_sign: Sign) -> Catalog {
    mp4_global(sk_sign)
}

#[derive(Clone, Debug)]
pub struct GlobalShape {
    pub name: &'static str,
    pub summands: Vec<(&'static str, u32, u32)>,
    pub saito_kurokawa: bool,
}

/// Discrete `Mp(4)` shapes over [`mp4_global`].
pub fn mp4_global_shapes() -> Vec<GlobalShape> {
    let shape = |name, summands: &[(&'static str, u32, u32)], sk| GlobalShape {
        name,
        summands: summands.to_vec(),
        saito_kurokawa: sk,
    };
    vec![
        shape("generic-simple", &[("phi4", 1, 1)], false),
        shape("generic-endoscopic", &[("phi_dot", 1, 1), ("phi_a", 1, 1)], false),
        shape("principal", &[("chi_dot", 4, 1)], false),
        shape("saito-kurokawa", &SK_PARAMETER, true),
        shape("saito-kurokawa-odd", &[("phi_a", 1, 1), ("chi2_dot", 2, 1)], true),
        shape("soudry", &[("tau_dot", 2, 1)], false),
        shape("howe-ps", &[("chi_dot", 2, 1), ("chi2_dot", 2, 1)], false),
    ]
}

/// Three symplectic entries `f1`, `f2`, `f3` (with `b = 1, 1, 3` in
/// [`AUX_PARAMETER`]) each ramified at its own place `v_i` and all distinct at
/// the auxiliary place `u`; `g1`, `g2` share every localization; `w`, `w_dual`
/// are a non-self-dual pair.
pub fn aux_global() -> Catalog {
    let two_one = loc(&[("one", 2)]);
    let rho = loc(&[("rho2", 1)]);
    let own = |i: usize, at_u: &str, root: i32, id: &str| {
        let mut locs: Vec<(String, Value)> = (1..=3)
            .map(|j| (format!("v{j}"), if i == j { rho.clone() } else { two_one.clone() }))
            .collect();
        locs.push(("u".into(), loc(&[(at_u, 1)])));
        let locs: Vec<(&str, Value)> = locs.iter().map(|(a, b)| (a.as_str(), b.clone())).collect();
        cuspidal(id, 2, "symplectic", root, &locs)
    };
    let shared = |id: &str| {
        cuspidal(id, 2, "symplectic", -1, &[
            ("v1", two_one.clone()),
            ("v2", two_one.clone()),
            ("v3", two_one.clone()),
            ("u", rho.clone()),
        ])
    };
    let pair = |id: &str, dual: &str| {
        let mut c = cuspidal(id, 1, "non_self_dual", 0, &[
            ("v1", loc(&[("one", 1)])),
            ("v2", loc(&[("one", 1)])),
            ("v3", loc(&[("one", 1)])),
            ("u", loc(&[("one", 1)])),
        ]);
        let obj = c.as_object_mut().expect("object");
        obj.remove("global_root_number");
        obj.insert("dual_id".into(), json!(dual));
        c
    };
    let v = json!({
        "places": [place("v1", false), place("v2", false), place("v3", false), place("u", false)],
        "global_cuspidals": [
            own(1, "rho2", 1, "f1"),
            own(2, "rho2_a", -1, "f2"),
            own(3, "rho2_b", -1, "f3"),
            shared("g1"),
            shared("g2"),
            pair("w", "w_dual"),
            pair("w_dual", "w"),
        ],
    });
    load_catalog_value(v).expect("auxiliary global fixture is valid")
}

pub const AUX_PARAMETER: [(&str, u32, u32); 3] = [("f1", 1, 1), ("f2", 1, 1), ("f3", 3, 1)];

// ---------------------------------------------------------------------------
// Random generators

fn random_root<R: Rng>(rng: &mut R, det: i32) -> &'static str {
    match (det, rng.gen_bool(0.5)) {
        (1, true) => "1",
        (1, false) => "-1",
        (_, true) => "i",
        (_, false) => "-i",
    }
}

/// A random local catalog: a few quadratic characters, orthogonal characters
/// with random root numbers, symplectic and orthogonal planes, and possibly a
/// non-self-dual pair.
pub fn random_catalog<R: Rng>(rng: &mut R) -> Catalog {
    let quadratic = vec![
        json!({"id": "triv", "value_at_minus_one": 1, "is_trivial": true, "is_unramified": true, "frobenius_value": 1}),
        json!({"id": "q_plus", "value_at_minus_one": 1}),
        json!({"id": "q_minus", "value_at_minus_one": -1}),
    ];
    let mut constituents = Vec::new();
    if rng.gen_bool(0.5) {
        let frob = if rng.gen_bool(0.5) { 1 } else { -1 };
        constituents.push(json!({"id": "u0", "dim": 1, "duality": "orthogonal", "det_at_minus_one": 1,
            "root_number": "1", "is_unramified_character": true, "frobenius_value": frob, "det_character": "triv"}));
    }
    for i in 0..rng.gen_range(1..=3) {
        let det = if rng.gen_bool(0.5) { 1 } else { -1 };
        let dc = if det == 1 { "q_plus" } else { "q_minus" };
        constituents.push(json!({"id": format!("x{i}"), "dim": 1, "duality": "orthogonal",
            "det_at_minus_one": det, "root_number": random_root(rng, det), "det_character": dc}));
    }
    for i in 0..rng.gen_range(0..=2) {
        constituents.push(json!({"id": format!("s{i}"), "dim": 2, "duality": "symplectic",
            "det_at_minus_one": 1, "root_number": random_root(rng, 1)}));
    }
    if rng.gen_bool(0.5) {
        let det = if rng.gen_bool(0.5) { 1 } else { -1 };
        let dc = if det == 1 { "q_plus" } else { "q_minus" };
        constituents.push(json!({"id": "t0", "dim": 2, "duality": "orthogonal",
            "det_at_minus_one": det, "root_number": random_root(rng, det), "det_character": dc}));
    }
    if rng.gen_bool(0.5) {
        let det = if rng.gen_bool(0.5) { 1 } else { -1 };
        constituents.push(json!({"id": "y0", "dim": 1, "duality": "non_self_dual", "dual_id": "y0_dual", "det_at_minus_one": det}));
        constituents.push(json!({"id": "y0_dual", "dim": 1, "duality": "non_self_dual", "dual_id": "y0", "det_at_minus_one": det}));
    }
    load_catalog_value(json!({"quadratic_characters": quadratic, "constituents": constituents}))
        .expect("random catalog is valid")
}

/// A random packet model of `psi`: every character of `𝒮_ψ` receives up to
/// two members drawn from a small label pool, so labels recur across
/// characters and copies.
pub fn random_packet<R: Rng>(rng: &mut R, cat: &Catalog, psi: &ArthurParameter) -> PacketModel {
    let rank = psi.basis().len();
    let pool = ["pi_0", "pi_1", "pi_2", "pi_3", "pi_4"];
    let mut members = Vec::new();
    for chi in crate::bits::Bits::all(rank) {
        let mut used: BTreeMap<&str, u32> = BTreeMap::new();
        for _ in 0..rng.gen_range(0..=2) {
            let label = *pool.choose(rng).expect("nonempty");
            let copy = used.entry(label).or_default();
            *copy += 1;
            members.push(Member::new(label, chi).with_copy(*copy));
        }
    }
    PacketModel::new(cat, psi.clone(), members).expect("random packet is valid")
}

/// A discrete global parameter with local data consistent with its global
/// root numbers.
#[derive(Clone, Debug)]
pub struct GlobalFixture {
    pub catalog: Catalog,
    pub summands: Vec<Summand>,
    pub places: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Character,
    Symplectic,
    Plane,
}

type LocalOption = (Vec<Value>, Mu4);

fn entry(c: &str, m: u32) -> Value {
    json!({"constituent": c, "mult": m})
}

fn root_of(id: &str) -> Mu4 {
    match id {
        "chi_a" | "rho2" => Mu4::MINUS_ONE,
        "chi_b" | "tau2" | "tau2_b" => Mu4::I,
        "chi_ab" | "tau2_a" => Mu4::MINUS_I,
        _ => Mu4::ONE,
    }
}

fn single(c: &str) -> LocalOption {
    (vec![entry(c, 1)], root_of(c))
}

fn double(a: &str, b: &str) -> LocalOption {
    if a == b {
        (vec![entry(a, 2)], root_of(a) * root_of(a))
    } else {
        (vec![entry(a, 1), entry(b, 1)], root_of(a) * root_of(b))
    }
}

fn ramified_options(kind: Kind) -> Vec<LocalOption> {
    match kind {
        Kind::Character => ["one", "chi_a", "chi_b", "chi_ab", "unr_minus"].map(single).to_vec(),
        Kind::Symplectic => {
            let mut v: Vec<LocalOption> = ["rho2", "rho2_a", "rho2_b"].map(single).to_vec();
            v.extend([double("one", "one"), double("chi_a", "chi_a"), double("chi_b", "chi_b")]);
            // nu ⊕ nu∨ has ε = det nu(−1) = −1
            v.push((vec![entry("nu", 1), entry("nu_dual", 1)], Mu4::MINUS_ONE));
            for (c, det) in [("chi_a", Mu4::ONE), ("chi_b", Mu4::MINUS_ONE)] {
                v.push((vec![shifted(c, 1, 1), shifted(c, -1, 1)], det));
            }
            v
        }
        Kind::Plane => {
            let mut v: Vec<LocalOption> = ["tau2", "tau2_a", "tau2_b"].map(single).to_vec();
            v.extend([double("one", "chi_a"), double("one", "one"), double("chi_a", "chi_a"), double("chi_b", "chi_ab")]);
            v
        }
    }
}

fn fixing_options(kind: Kind) -> Vec<LocalOption> {
    match kind {
        Kind::Character => ["one", "chi_a", "chi_b", "chi_ab"].map(single).to_vec(),
        Kind::Symplectic => ["rho2", "rho2_a"].map(single).to_vec(),
        Kind::Plane => vec![double("one", "one"), double("one", "chi_a"), single("tau2"), single("tau2_a")],
    }
}

fn unramified_options(kind: Kind) -> Vec<LocalOption> {
    let c = ["one", "unr_minus"];
    match kind {
        Kind::Character => c.map(single).to_vec(),
        // an odd-dimensional orthogonal piece cannot sit inside a symplectic one
        Kind::Symplectic => vec![double("one", "one"), double("unr_minus", "unr_minus")],
        Kind::Plane => vec![double("one", "one"), double("one", "unr_minus"), double("unr_minus", "unr_minus")],
    }
}

/// Random discrete global fixture: 1–4 cuspidal entries, ramified places
/// `r1..`, unramified places `u1..`; the last ramified place is chosen so the
/// local root numbers multiply to the global one.
pub fn random_global_fixture<R: Rng>(rng: &mut R) -> GlobalFixture {
    let n_ram = rng.gen_range(1..=3);
    let n_unr = rng.gen_range(0..=2);
    let ram: Vec<String> = (1..=n_ram).map(|i| format!("r{i}")).collect();
    let unr: Vec<String> = (1..=n_unr).map(|i| format!("u{i}")).collect();

    let mut cuspidals = Vec::new();
    let mut summands = Vec::new();
    for k in 0..rng.gen_range(1..=4) {
        let (kind, dim, duality, b) = match rng.gen_range(0..3) {
            0 => (Kind::Character, 1, "orthogonal", *[2, 4].choose(rng).expect("nonempty")),
            1 => (Kind::Symplectic, 2, "symplectic", *[1, 3].choose(rng).expect("nonempty")),
            _ => (Kind::Plane, 2, "orthogonal", 2),
        };
        let global = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let mut locs = serde_json::Map::new();
        let mut acc = Mu4::ONE;
        for v in &ram[..n_ram - 1] {
            let (entries, root) = ramified_options(kind).choose(rng).expect("nonempty").clone();
            acc *= root;
            locs.insert(v.clone(), Value::Array(entries));
        }
        let need = Mu4::from(global) * acc.inverse();
        let (entries, _) = fixing_options(kind)
            .into_iter()
            .find(|(_, r)| *r == need)
            .expect("fixing options cover every root of unity that can occur");
        locs.insert(ram[n_ram - 1].clone(), Value::Array(entries));
        for v in &unr {
            let (entries, _) = unramified_options(kind).choose(rng).expect("nonempty").clone();
            locs.insert(v.clone(), Value::Array(entries));
        }
        let id = format!("g{k}");
        cuspidals.push(json!({"id": id, "dim": dim, "duality": duality,
                              "global_root_number": global, "localizations": locs}));
        summands.push(Summand::new(id, b, 1));
    }
    let places: Vec<Value> = ram
        .iter()
        .map(|v| place(v, false))
        .chain(unr.iter().map(|v| place(v, true)))
        .collect();
    let catalog = load_catalog_value(json!({"places": places, "global_cuspidals": cuspidals}))
        .expect("random global fixture is valid");
    GlobalFixture {
        catalog,
        summands,
        places: ram.into_iter().chain(unr).collect(),
    }
}

/// Flips the root number of a symplectic constituent at one place where it
/// enters some summand with odd `b` an odd number of times, so the product
/// formula breaks for that summand. Returns the corrupted catalog and place,
/// or `None` if the fixture has no such constituent.
pub fn corrupt_local_root(fx: &GlobalFixture) -> Option<(Catalog, String)> {
    for s in &fx.summands {
        if s.b % 2 == 0 {
            continue;
        }
        let g = fx.catalog.global_cuspidal(&s.constituent).ok()?;
        for (v, entries) in &g.localizations {
            let place = fx.catalog.place(v).ok()?;
            for e in entries {
                let c = place.catalog.constituent(&e.constituent).ok()?;
                if !e.shift.is_zero() || e.mult % 2 == 0 || c.duality != crate::catalog::Duality::Symplectic {
                    continue;
                }
                // every summand sees the flip with exponent b · count
                let total: u32 = fx
                    .summands
                    .iter()
                    .filter(|t| t.b % 2 == 1)
                    .filter_map(|t| fx.catalog.global_cuspidal(&t.constituent).ok())
                    .filter_map(|h| h.localizations.get(v))
                    .flatten()
                    .filter(|f| f.constituent == e.constituent && f.shift.is_zero())
                    .map(|f| f.mult)
                    .sum();
                if total == 0 {
                    continue;
                }
                let mut value = fx.catalog.to_value();
                let places = value["places"].as_array_mut()?;
                let p = places.iter_mut().find(|p| p["id"] == *v)?;
                for con in p["catalog"]["constituents"].as_array_mut()? {
                    if con["id"] == e.constituent.as_str() {
                        let flipped = if con["root_number"] == "1" { "-1" } else { "1" };
                        con["root_number"] = json!(flipped);
                    }
                }
                return load_catalog_value(value).ok().map(|cat| (cat, v.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::validate_cross_constraints;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_load_cleanly() {
        for cat in [f1(), f1_extended(), principal_global(), mp4_global(Sign::Minus), aux_global()] {
            assert!(validate_cross_constraints(&cat).is_empty());
        }
    }

    #[test]
    fn random_fixtures_load() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            random_catalog(&mut rng);
            let fx = random_global_fixture(&mut rng);
            assert!(!fx.summands.is_empty());
        }
    }

    #[test]
    fn missing_swap_is_reported() {
        let cat = f1_extended();
        assert!(matches!(
            cat.sl2_swap("rho2", 3),
            Err(crate::error::Error::UnsupportedSwap { .. })
        ));
        assert_eq!(cat.sl2_swap("chi_a", 4).unwrap().id, "chi_a_r4");
    }
}

//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines reach stdout; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use metaplectic_core::catalog::twist_constituent;
use metaplectic_core::components::{component_map_to_phi, distinguished_elements, enumerate_splittings};
use metaplectic_core::epsilon::{
    delta_c_character, epsilon_minus_part, epsilon_phi_psi_minus_part, mu_tilde, verify_descent,
    xu_character_anti_tempered,
};
use metaplectic_core::fixtures::{self, param};
use metaplectic_core::global::{epsilon_art, nu_factorization_check, stable_coefficient_table, GlobalParameter};
use metaplectic_core::packets::{build_principal_packet, fourier_pi, relabel_variation, t_from_pi, t_vector, MemberFlag};
use metaplectic_core::parameters::{classify, enumerate_parameters, Restriction};
use metaplectic_core::{ArthurParameter, Bits, Catalog, Sign, Summand};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const MAX_N: u32 = 6;
const RANDOM_CATALOGS: usize = 1000;
const RANDOM_CATALOG_MAX_N: u32 = 4;
const RANDOM_PACKETS: usize = 500;
const RANDOM_GLOBAL_FIXTURES: usize = 200;
const SEED: u64 = 20_240_601;

const LIMIT_DESCENT: Duration = Duration::from_secs(30);
const LIMIT_PHI_SIDE: Duration = Duration::from_secs(30);
const LIMIT_GLOBAL: Duration = Duration::from_secs(60);
const LIMIT_CLI: Duration = Duration::from_secs(5);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<String, String> {
    let took = start.elapsed();
    let line = format!("{:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs());
    if took < limit {
        Ok(line)
    } else {
        Err(format!("too slow: {line}"))
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn f1_parameters(restriction: Restriction) -> Result<Vec<ArthurParameter>, String> {
    let cat = fixtures::f1();
    let mut all = Vec::new();
    for n in 1..=MAX_N {
        all.extend(enumerate_parameters(&cat, n, restriction).map_err(e)?);
    }
    Ok(all)
}

fn descent() -> Outcome {
    let start = Instant::now();
    let params = f1_parameters(Restriction::GoodParity)?;
    for psi in &params {
        let r = verify_descent(psi).map_err(e)?;
        ensure(r.ok(), || format!("{psi}: {:?}", r.violations))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random_params = 0;
    for _ in 0..RANDOM_CATALOGS {
        let cat = fixtures::random_catalog(&mut rng);
        for n in 1..=RANDOM_CATALOG_MAX_N {
            for psi in enumerate_parameters(&cat, n, Restriction::GoodParity).map_err(e)? {
                let r = verify_descent(&psi).map_err(e)?;
                ensure(r.ok(), || format!("random catalog, {psi}: {:?}", r.violations))?;
                random_params += 1;
            }
        }
    }
    let t = within(LIMIT_DESCENT, start)?;
    Ok(format!(
        "{} parameters over F1 with n ≤ {MAX_N}; {random_params} over {RANDOM_CATALOGS} random catalogs with n ≤ {RANDOM_CATALOG_MAX_N}; {t}",
        params.len()
    ))
}

fn phi_side() -> Outcome {
    let start = Instant::now();
    let cat = fixtures::f1();
    let params = f1_parameters(Restriction::All)?;
    let (mut pairs, mut non_real) = (0usize, 0usize);
    for psi in &params {
        for s in enumerate_splittings(psi) {
            let lhs = epsilon_minus_part(psi, &s);
            let rhs = epsilon_phi_psi_minus_part(&cat, psi, &s);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => ensure(a == b, || format!("{psi} at {s}: {a} vs {b}"))?,
                (Err(_), Err(_)) => non_real += 1,
                (a, b) => return Err(format!("{psi} at {s}: {a:?} vs {b:?}")),
            }
            pairs += 1;
        }
    }
    let t = within(LIMIT_PHI_SIDE, start)?;
    Ok(format!("{pairs} (ψ, s) pairs over F1 with n ≤ {MAX_N}, {non_real} undefined on both sides; {t}"))
}

fn component_map() -> Outcome {
    let cat = fixtures::f1();
    let params = f1_parameters(Restriction::All)?;
    let mut bounded = 0;
    for psi in &params {
        if psi.summands().iter().any(|s| cat.constituent(&s.constituent).map(|c| c.unbounded).unwrap_or(true)) {
            continue;
        }
        let map = component_map_to_phi(&cat, psi).map_err(e)?;
        let (x, _) = distinguished_elements(psi);
        ensure(map.apply(&x).is_zero(), || format!("{psi}: x_ψ survives"))?;
        ensure(map.map.is_surjective(), || format!("{psi}: not surjective"))?;
        bounded += 1;
    }
    Ok(format!("{bounded} bounded parameters over F1 with n ≤ {MAX_N}"))
}

fn fourier() -> Outcome {
    let cat = fixtures::f1();
    let pool: Vec<ArthurParameter> = (1..=3)
        .map(|n| enumerate_parameters(&cat, n, Restriction::All))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?
        .into_iter()
        .flatten()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for i in 0..RANDOM_PACKETS {
        let psi = &pool[rng.gen_range(0..pool.len())];
        let pm = fixtures::random_packet(&mut rng, &cat, psi);
        for chi in Bits::all(pm.rank()) {
            let pi = fourier_pi(&pm, &chi);
            ensure(pi.terms().all(|(_, c)| c >= 0), || format!("packet {i} ({psi}): negative π at {chi}"))?;
        }
        for x in Bits::all(pm.rank()) {
            ensure(t_from_pi(&pm, &x) == t_vector(&pm, &x), || format!("packet {i} ({psi}): round trip at {x}"))?;
        }
    }
    Ok(format!("{RANDOM_PACKETS} random packet models over F1 with n ≤ 3"))
}

fn principal() -> Outcome {
    let cat = fixtures::f1_extended();
    let mut checked = 0;
    for zeta in ["one", "unr_minus", "chi_a", "chi_b"] {
        let unramified = cat.constituent(zeta).map_err(e)?.is_unramified_character;
        for n in 1..=4 {
            let pm = build_principal_packet(&cat, zeta, n).map_err(e)?;
            let (plus, minus) = (format!("omega_plus({zeta})"), format!("omega_minus({zeta})"));
            let at_one = t_vector(&pm, &Bits::zero(1));
            let at_minus = t_vector(&pm, &Bits::unit(1, 0));
            let terms = |v: &metaplectic_core::CoefficientVector| -> Vec<(String, i64)> {
                v.terms().map(|(l, c)| (l.to_string(), c)).collect()
            };
            let mut want_one = vec![(plus.clone(), 1), (minus.clone(), -1)];
            let mut want_minus = vec![(plus.clone(), 1), (minus.clone(), 1)];
            want_one.sort();
            want_minus.sort();
            ensure(terms(&at_one) == want_one, || format!("{zeta}, n = {n}: T at 1 is {:?}", terms(&at_one)))?;
            ensure(terms(&at_minus) == want_minus, || format!("{zeta}, n = {n}: T at −1 is {:?}", terms(&at_minus)))?;
            let spherical: Vec<_> = pm.members().iter().filter(|m| m.has(MemberFlag::Spherical)).collect();
            if unramified {
                ensure(
                    spherical.len() == 1 && spherical[0].label == plus && spherical[0].character.is_zero(),
                    || format!("{zeta}, n = {n}: spherical members {spherical:?}"),
                )?;
            } else {
                ensure(spherical.is_empty(), || format!("{zeta}, n = {n}: ramified packet has a spherical member"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} principal packets, ζ ∈ {{one, unr_minus, chi_a, chi_b}}, n ≤ 4"))
}

fn global_nu() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let (mut splittings, mut corrupted) = (0, 0);
    for i in 0..RANDOM_GLOBAL_FIXTURES {
        let fx = fixtures::random_global_fixture(&mut rng);
        let gp = GlobalParameter::new(&fx.catalog, fx.summands.clone()).map_err(e)?;
        let r = nu_factorization_check(&fx.catalog, &gp, &fx.places).map_err(e)?;
        for row in &r.rows {
            ensure(row.nu == row.global && row.global == row.local_product, || {
                format!("fixture {i} ({gp}) at {}: ν {}, global {}, local {}", row.splitting, row.nu, row.global, row.local_product)
            })?;
        }
        ensure(r.ok(), || format!("fixture {i} ({gp}): ν(s_ψ̇) = {}", r.nu_at_s_psi))?;
        splittings += r.rows.len();
        if let Some((bad, place)) = fixtures::corrupt_local_root(&fx) {
            let broken = nu_factorization_check(&bad, &gp, &fx.places).map_err(e)?;
            ensure(broken.mismatches() > 0, || format!("fixture {i} ({gp}): corruption at {place} not detected"))?;
            corrupted += 1;
        }
    }
    ensure(corrupted > 0, || "no fixture admitted a corruption".into())?;
    let t = within(LIMIT_GLOBAL, start)?;
    Ok(format!(
        "{RANDOM_GLOBAL_FIXTURES} random global fixtures, {splittings} splittings, {corrupted} corruptions detected; {t}"
    ))
}

fn global_parameter(cat: &Catalog, summands: &[(&str, u32, u32)]) -> Result<GlobalParameter, String> {
    GlobalParameter::new(cat, summands.iter().map(|(c, b, m)| Summand::new(*c, *b, *m)).collect()).map_err(e)
}

fn coefficients() -> Outcome {
    let mut fixtures_seen: Vec<(Catalog, GlobalParameter)> = Vec::new();
    for rs in [Sign::Minus, Sign::Plus] {
        let cat = fixtures::mp4_global(rs);
        for shape in fixtures::mp4_global_shapes() {
            let gp = global_parameter(&cat, &shape.summands)?;
            fixtures_seen.push((cat.clone(), gp));
        }
    }
    let principal = fixtures::principal_global();
    fixtures_seen.push((principal.clone(), global_parameter(&principal, &[("zeta_dot", 4, 1)])?));
    let aux = fixtures::aux_global();
    fixtures_seen.push((aux.clone(), global_parameter(&aux, &fixtures::AUX_PARAMETER)?));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for _ in 0..RANDOM_GLOBAL_FIXTURES {
        let fx = fixtures::random_global_fixture(&mut rng);
        let gp = GlobalParameter::new(&fx.catalog, fx.summands.clone()).map_err(e)?;
        fixtures_seen.push((fx.catalog, gp));
    }
    let mut rows = 0;
    for (_, gp) in &fixtures_seen {
        let expected = Ratio::new(1, 1u64 << gp.rank());
        for r in stable_coefficient_table(gp).map_err(e)? {
            ensure(r.lhs == expected && r.rhs == expected, || {
                format!("{gp} at {}: ι |S̄|⁻¹ = {}, |𝒮|⁻¹ = {expected}", r.splitting, r.lhs)
            })?;
            rows += 1;
        }
    }
    Ok(format!("{rows} splittings over {} discrete fixtures", fixtures_seen.len()))
}

fn mp4_casebook() -> Outcome {
    let local = fixtures::f1_extended();
    let shapes = fixtures::mp4_psi_star_shapes();
    for shape in &shapes {
        let psi = param(&local, shape);
        ensure(classify(&psi).in_psi_star, || format!("{psi} is not in Ψ*"))?;
        let mu = xu_character_anti_tempered(&psi).map_err(e)?;
        ensure(mu.is_zero(), || format!("μ for {psi} is {mu}"))?;
        let tilde = mu_tilde(&local, &psi, &mu).map_err(e)?;
        ensure(tilde == mu, || format!("μ̃ for {psi} is {tilde}"))?;
    }
    let (mut sk, mut other) = (0, 0);
    for rs in [Sign::Minus, Sign::Plus] {
        let cat = fixtures::mp4_global(rs);
        for shape in fixtures::mp4_global_shapes() {
            let gp = global_parameter(&cat, &shape.summands)?;
            let art = epsilon_art(&cat, &gp).map_err(e)?;
            if shape.saito_kurokawa {
                let s = gp.summands();
                let pair = cat
                    .rankin_selberg(&s[0].constituent, &s[1].constituent)
                    .ok_or_else(|| format!("{gp}: no Rankin–Selberg entry"))?;
                let slot = gp
                    .shape()
                    .basis()
                    .iter()
                    .position(|&k| s[k].b == 2)
                    .ok_or_else(|| format!("{gp}: no r(2) summand"))?;
                ensure(art.pair(&Bits::unit(art.len(), slot)) == pair, || {
                    format!("{gp}: ε^Art = {art}, Rankin–Selberg sign {pair}")
                })?;
                let (_, z) = distinguished_elements(gp.shape());
                ensure(art.pair(&z) == Sign::Plus, || format!("{gp}: ε^Art(z) = −1"))?;
                sk += 1;
            } else {
                ensure(art.is_zero(), || format!("{} ({gp}): ε^Art = {art}", shape.name))?;
                other += 1;
            }
        }
    }
    let case = metaplectic_cli::casebook::run_case("mp2-parameters").map_err(e)?;
    ensure(case.ok, || format!("n = 1 enumeration:\n{}", case.body))?;
    Ok(format!(
        "(a) {} Ψ* shapes, (b) {sk} Saito–Kurokawa and {other} other global fixtures, (c) n = 1 over F1",
        shapes.len()
    ))
}

fn delta_c() -> Outcome {
    let cat = fixtures::f1_extended();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut checked = 0;
    for n in 1..=3 {
        for psi in enumerate_parameters(&cat, n, Restriction::All).map_err(e)? {
            for zeta in ["chi_a", "chi_b", "unr"] {
                if !psi.summands().iter().all(|s| twist_constituent(&cat, &s.constituent, zeta).is_ok()) {
                    continue;
                }
                let delta = delta_c_character(&cat, &psi, zeta).map_err(e)?;
                let (x, _) = distinguished_elements(&psi);
                ensure(delta.pair(&x) == Sign::Plus, || format!("{psi} by {zeta}: δ_c(x_ψ) = −1"))?;
                let pm = fixtures::random_packet(&mut rng, &cat, &psi);
                let once = relabel_variation(&cat, &pm, zeta).map_err(e)?;
                let twice = relabel_variation(&cat, &once, zeta).map_err(e)?;
                ensure(twice == pm, || format!("{psi} by {zeta}: variation is not an involution"))?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no parameter had twist coverage".into())?;
    Ok(format!("{checked} (ψ, ζ) pairs with twist coverage over F1-extended, n ≤ 3"))
}

fn cli_multiplicity() -> Outcome {
    let scenario = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/principal_two_place.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(["multiplicity", "--format", "json", "--scenario"])
        .arg(&scenario)
        .output()
        .map_err(e)?;
    let t = within(LIMIT_CLI, start)?;
    ensure(out.status.success(), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let d: Value = serde_json::from_slice(&out.stdout).map_err(e)?;

    let tuples: BTreeSet<Vec<String>> = d["constraint_set"]["tuples"]
        .as_array()
        .ok_or("no constraint tuples")?
        .iter()
        .map(|t| t.as_array().into_iter().flatten().filter_map(|c| c.as_str().map(String::from)).collect())
        .collect();
    let even: BTreeSet<Vec<String>> =
        [vec!["0".to_string(), "0".to_string()], vec!["1".to_string(), "1".to_string()]].into();
    ensure(tuples == even, || format!("X(ψ̇, V) = {tuples:?}"))?;

    let members = d["members"]["members"].as_array().ok_or("no members")?;
    let mut got = BTreeSet::new();
    for m in members {
        ensure(m["multiplicity"] == 1, || format!("multiplicity {}", m["multiplicity"]))?;
        let chars: Vec<String> = m["characters"][0]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(|c| c.as_str().map(String::from))
            .collect();
        got.insert(chars);
    }
    ensure(got == even && members.len() == 2, || format!("members {members:?}"))?;

    let enl = &d["enlargement"];
    ensure(
        enl["added_places_unramified"] == true
            && enl["constraint_projection_ok"] == true
            && enl["members_projection_ok"] == true
            && enl["spherical_with_nontrivial_character"] == 0,
        || format!("enlargement {enl}"),
    )?;
    Ok(format!("two places, tuples {{(+,+), (−,−)}} with multiplicity 1, V enlarged by v3; {t}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("good-parity descent", descent),
        ("ε minus part equals its φ-side form", phi_side),
        ("component map kills x_ψ and is surjective", component_map),
        ("Fourier round trip", fourier),
        ("principal packets", principal),
        ("global ν factorization", global_nu),
        ("coefficient identity", coefficients),
        ("Mp(4) casebook", mp4_casebook),
        ("δ_c and variation", delta_c),
        ("multiplicity evaluator", cli_multiplicity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

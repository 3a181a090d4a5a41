use std::collections::BTreeMap;

use metaplectic_core::catalog::validate_cross_constraints;
use metaplectic_core::components::{
    centralizer, component_group, component_map_to_phi, distinguished_elements, enumerate_splittings,
    iota_coefficient, splitting_image, splitting_to_endoscopic,
};
use metaplectic_core::epsilon::{
    corrected_minus_part, epsilon_minus_part, epsilon_phi_psi_minus_part, nu_character, verify_descent,
};
use metaplectic_core::global::{
    character_constraint_set, enlargement_check, epsilon_art, epsilon_psi, global_packet_members, localize,
    nu_factorization_check, nu_global, stable_coefficient_table, GlobalParameter,
};
use metaplectic_core::packets::{fourier_pi, t_from_pi, t_vector};
use metaplectic_core::parameters::{associated_l_parameter, classify, enumerate_parameters, Restriction};
use metaplectic_core::{fixtures, ArthurParameter, Bits, Catalog, Error, PacketModel, Summand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{table, yes_no, Report};
use crate::scenario::Scenario;
use crate::CliError;

fn summands_text(s: &[Summand]) -> String {
    if s.is_empty() {
        "0".into()
    } else {
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ⊕ ")
    }
}

fn or_error<T: ToString>(r: Result<T, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("n/a ({e})"),
    }
}

/// Local analysis of one parameter.
pub fn analyze(cat: &Catalog, summands: Vec<Summand>) -> Result<Report, CliError> {
    let psi = ArthurParameter::new(cat, summands)?;
    let mut r = Report::new(format!("Analysis of {psi}"));
    let cls = classify(&psi);
    let flags = [
        ("good parity", cls.good_parity),
        ("discrete", cls.discrete),
        ("anti-tempered", cls.anti_tempered),
        ("unramified", cls.unramified),
        ("in Ψ*", cls.in_psi_star),
        ("principal", cls.principal),
    ];
    let rows: Vec<Vec<String>> = flags.iter().map(|(k, v)| vec![k.to_string(), yes_no(*v).to_string()]).collect();
    let mut text = format!("ψ = {psi}, n = {}\n\n{}", psi.n(), table(&["property", "value"], &rows));
    let spherical_expected = cls.principal && psi.info()[0].unramified_character;
    if cls.principal {
        text.push_str(&format!(
            "\nPrincipal parameter; spherical member expected: {}.\n",
            yes_no(spherical_expected)
        ));
    }
    r.section("Classification", text);
    r.put("parameter", &psi);
    r.put("classification", &cls);
    r.put("spherical_member_expected", spherical_expected);

    let group = component_group(&psi);
    let factors: Vec<String> = centralizer(&psi).iter().map(|f| format!("{f} at {}", f.summand)).collect();
    let basis: Vec<String> = psi.basis().iter().map(|&k| psi.summands()[k].to_string()).collect();
    let (x, z) = distinguished_elements(&psi);
    r.section(
        "Component group",
        format!(
            "S_ψ = {}\n\n𝒮_ψ ≅ μ₂^{} (order {}), basis: {}\n\nx_ψ = {x}, z = {z}\n",
            if factors.is_empty() { "1".into() } else { factors.join(" × ") },
            group.rank(),
            group.order(),
            if basis.is_empty() { "∅".into() } else { basis.join(", ") },
        ),
    );
    r.put("centralizer", factors);
    r.put("component_group_rank", group.rank());
    r.put("basis", &basis);
    r.put("x_psi", x);
    r.put("z", z);

    let nu = nu_character(&psi);
    let splittings = enumerate_splittings(&psi);
    let mut rows = Vec::new();
    let mut data = Vec::new();
    for s in &splittings {
        let image = splitting_image(&psi, s);
        let e = splitting_to_endoscopic(&psi, s);
        let eps = epsilon_minus_part(&psi, s);
        let corrected = corrected_minus_part(&psi, s);
        let nu_x = nu.as_ref().map(|n| n.pair(&image)).map_err(Clone::clone);
        rows.push(vec![
            s.to_string(),
            image.to_string(),
            e.datum.to_string(),
            summands_text(&e.psi_prime),
            summands_text(&e.psi_dblprime),
            iota_coefficient(e.datum).to_string(),
            or_error(eps.clone()),
            or_error(corrected.clone()),
            or_error(nu_x.clone()),
        ]);
        data.push(json!({
            "splitting": s.to_string(),
            "image": image,
            "datum": e.datum,
            "iota": iota_coefficient(e.datum).to_string(),
            "epsilon_minus": eps.ok(),
            "corrected": corrected.ok(),
            "nu": nu_x.ok(),
        }));
    }
    r.section(
        &format!("Splittings ({})", splittings.len()),
        table(&["(m′,m″)", "x", "(n′,n″)", "ψ′", "ψ″", "ι", "ε(ψ^{s=−1})", "corrected", "ν(x)"], &rows),
    );
    r.put("splittings", data);
    r.put("nu", nu.as_ref().ok());

    let phi = associated_l_parameter(&psi);
    let map = component_map_to_phi(cat, &psi);
    let mut text = format!("φ_ψ = {}\n", or_error(phi));
    match &map {
        Ok(m) => {
            let cols: Vec<String> = m.map.columns.iter().map(|c| c.to_string()).collect();
            text.push_str(&format!(
                "\n𝒮_ψ → 𝒮_φψ columns: [{}]; image of x_ψ: {}; surjective: {}\n",
                cols.join(", "),
                m.apply(&x),
                yes_no(m.map.is_surjective())
            ));
            r.put("component_map", cols);
        }
        Err(e) => text.push_str(&format!("\ncomponent map: n/a ({e})\n")),
    }
    r.section("Associated L-parameter", text);

    let descent = verify_descent(&psi);
    let text = match &descent {
        Ok(d) => format!(
            "{} splittings, {} fibers, raw value constant on fibers: {}, violations: {}",
            d.splittings,
            d.fibers,
            yes_no(d.raw_fiber_constant),
            d.violations.len()
        ),
        Err(e) => format!("n/a ({e})"),
    };
    r.section("Descent of ε(ψ^{s=−1}) to 𝒮_ψ", text);
    r.put("descent", descent.as_ref().ok());
    Ok(r)
}

fn build_packets(
    cat: &Catalog,
    gp: &GlobalParameter,
    members: &BTreeMap<String, Vec<metaplectic_core::Member>>,
) -> Result<BTreeMap<String, PacketModel>, CliError> {
    let mut out = BTreeMap::new();
    for (v, ms) in members {
        let l = localize(cat, gp, v)?;
        let place_cat = &cat.place(v)?.catalog;
        out.insert(v.clone(), PacketModel::new(place_cat, l.local, ms.clone())?);
    }
    Ok(out)
}

/// Evaluates the multiplicity formula of a scenario.
pub fn multiplicity(cat: &Catalog, sc: &Scenario) -> Result<Report, CliError> {
    let summands = sc
        .global_parameter
        .clone()
        .ok_or_else(|| Error::Schema("scenario lacks `global_parameter`".into()))?;
    let gp = GlobalParameter::new(cat, summands)?;
    let mut r = Report::new(format!("Multiplicity formula for {gp}"));
    let places = sc.places.clone();

    let art = match &sc.epsilon_art {
        Some(a) => *a,
        None => epsilon_art(cat, &gp)?,
    };
    let nu = nu_global(&gp)?;
    let eps = epsilon_psi(cat, &gp, Some(&art))?;
    let basis: Vec<String> = gp.shape().basis().iter().map(|&k| gp.summands()[k].to_string()).collect();
    r.section(
        "Global sign characters",
        format!(
            "basis: {}\n\n{}",
            basis.join(", "),
            table(
                &["character", "bits"],
                &[
                    vec!["ε^Art".to_string(), art.to_string()],
                    vec!["ν".to_string(), nu.to_string()],
                    vec!["ε_ψ̇".to_string(), eps.to_string()],
                ]
            )
        ),
    );
    r.put("parameter", &gp);
    r.put("basis", &basis);
    r.put("epsilon_art", art);
    r.put("nu", nu);
    r.put("epsilon_psi", eps);

    let mut rows = Vec::new();
    let mut locs = Vec::new();
    for v in &places {
        let l = localize(cat, &gp, v)?;
        let cols: Vec<String> = l.map.columns.iter().map(|c| c.to_string()).collect();
        rows.push(vec![v.clone(), l.local.to_string(), cols.join(", "), yes_no(l.unramified).to_string()]);
        locs.push(l);
    }
    r.section("Localizations", table(&["place", "ψ̇_v", "map columns", "unramified"], &rows));
    r.put("localizations", &locs);

    let x = character_constraint_set(cat, &gp, &places, &eps)?;
    let rows: Vec<Vec<String>> = x.tuples.iter().map(|t| t.iter().map(|c| c.to_string()).collect()).collect();
    let headers: Vec<&str> = places.iter().map(String::as_str).collect();
    r.section(
        &format!("X(ψ̇, V): {} tuples (expected {})", x.tuples.len(), x.expected_count),
        if headers.is_empty() { String::from("(no places)") } else { table(&headers, &rows) },
    );
    r.put("constraint_set", &x);

    let packets = build_packets(cat, &gp, &sc.packets)?;
    let members = global_packet_members(cat, &gp, &packets, &places, &eps)?;
    let mut headers: Vec<&str> = places.iter().map(String::as_str).collect();
    headers.push("multiplicity");
    let rows: Vec<Vec<String>> = members
        .members
        .iter()
        .map(|m| {
            let mut row = m.labels.clone();
            row.push(m.multiplicity.to_string());
            row
        })
        .collect();
    r.section(&format!("Π_ψ̇(ε_ψ̇): {} member tuples", rows.len()), table(&headers, &rows));
    r.put("members", &members);

    if let Some(larger) = &sc.larger_places {
        let e = enlargement_check(cat, &gp, &packets, &places, larger, &eps)?;
        r.section(
            "Enlarging V",
            format!(
                "added places: {}\n\nadded places unramified: {}; X restricts correctly: {}; members restrict correctly: {}; spherical members with nontrivial character: {}\n",
                e.added_places.join(", "),
                yes_no(e.added_places_unramified),
                yes_no(e.constraint_projection_ok),
                yes_no(e.members_projection_ok),
                e.spherical_with_nontrivial_character
            ),
        );
        r.put("enlargement", &e);
    }

    let f = nu_factorization_check(cat, &gp, &places)?;
    r.section(
        "Factorization of ν",
        format!(
            "{} splittings, {} mismatches, ν(s_ψ̇) = {}, ramified places outside V: {}\n",
            f.rows.len(),
            f.mismatches(),
            f.nu_at_s_psi,
            if f.ramified_outside.is_empty() { "none".into() } else { f.ramified_outside.join(", ") }
        ),
    );
    r.put("factorization_mismatches", f.mismatches());
    if gp.is_discrete() {
        let rows = stable_coefficient_table(&gp)?;
        r.put("coefficient_identity_holds", rows.iter().all(|c| c.holds));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PropertyOptions {
    pub max_n: Option<u32>,
    pub seed: Option<u64>,
}

/// Cross-constraint validation, plus optional exhaustive and randomized checks.
pub fn validate(cat: &Catalog, opts: PropertyOptions) -> Result<Report, CliError> {
    let mut r = Report::new("Catalog validation");
    let violations = validate_cross_constraints(cat);
    let rows: Vec<Vec<String>> = violations.iter().map(|v| vec![v.constraint.to_string(), v.detail.clone()]).collect();
    r.section(
        &format!("Cross constraints: {} violations", violations.len()),
        if rows.is_empty() { "none".into() } else { table(&["constraint", "detail"], &rows) },
    );
    r.put("violations", &violations);
    if !violations.is_empty() {
        r.ok = false;
    }

    if let Some(max_n) = opts.max_n {
        let mut counts = BTreeMap::new();
        let mut failures = Vec::new();
        for n in 1..=max_n {
            for psi in enumerate_parameters(cat, n, Restriction::All)? {
                *counts.entry("parameters").or_insert(0u64) += 1;
                if classify(&psi).good_parity {
                    match verify_descent(&psi) {
                        Ok(d) if d.ok() => {}
                        Ok(_) => failures.push(format!("descent fails for {psi}")),
                        Err(e) => failures.push(format!("descent for {psi}: {e}")),
                    }
                }
                if psi.info().iter().any(|i| i.unbounded) {
                    continue;
                }
                for s in enumerate_splittings(&psi) {
                    let Ok(lhs) = epsilon_minus_part(&psi, &s) else { continue };
                    *counts.entry("splittings").or_insert(0u64) += 1;
                    match epsilon_phi_psi_minus_part(cat, &psi, &s) {
                        Ok(rhs) if rhs == lhs => {}
                        _ => failures.push(format!("φ_ψ side disagrees for {psi} at {s}")),
                    }
                }
                if let Ok(m) = component_map_to_phi(cat, &psi) {
                    let (x, _) = distinguished_elements(&psi);
                    if !m.apply(&x).is_zero() || !m.map.is_surjective() {
                        failures.push(format!("component map fails for {psi}"));
                    }
                }
            }
        }
        r.section(
            &format!("Exhaustive checks up to n = {max_n}"),
            format!(
                "{} parameters, {} splittings, {} failures\n\n{}",
                counts.get("parameters").unwrap_or(&0),
                counts.get("splittings").unwrap_or(&0),
                failures.len(),
                failures.join("\n")
            ),
        );
        r.put("exhaustive_failures", &failures);
        if !failures.is_empty() {
            r.ok = false;
        }
    }

    if let Some(seed) = opts.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = Vec::new();
        let depth = opts.max_n.unwrap_or(3).min(3);
        for i in 0..100 {
            let random = fixtures::random_catalog(&mut rng);
            for n in 1..=depth {
                for psi in enumerate_parameters(&random, n, Restriction::GoodParity)? {
                    if !verify_descent(&psi)?.ok() {
                        failures.push(format!("catalog #{i}: descent fails for {psi}"));
                    }
                }
            }
            let params = enumerate_parameters(&random, 1, Restriction::All)?;
            let psi = &params[i % params.len()];
            let pm = fixtures::random_packet(&mut rng, &random, psi);
            for x in Bits::all(pm.rank()) {
                if t_from_pi(&pm, &x) != t_vector(&pm, &x) {
                    failures.push(format!("catalog #{i}: Fourier round trip fails for {psi}"));
                }
                if fourier_pi(&pm, &x).terms().any(|(_, c)| c < 0) {
                    failures.push(format!("catalog #{i}: negative coefficient for {psi}"));
                }
            }
        }
        r.section(
            &format!("Randomized checks (seed {seed}, 100 catalogs)"),
            format!("{} failures\n\n{}", failures.len(), failures.join("\n")),
        );
        r.put("seed", seed);
        r.put("random_failures", &failures);
        if !failures.is_empty() {
            r.ok = false;
        }
    }
    Ok(r)
}

use std::collections::{BTreeMap, BTreeSet};

use metaplectic_core::catalog::Duality;
use metaplectic_core::components::distinguished_elements;
use metaplectic_core::epsilon::{mu_tilde, xu_character_anti_tempered};
use metaplectic_core::global::{
    enlargement_check, epsilon_art, epsilon_psi, global_packet_members, nu_factorization_check, nu_global,
    GlobalParameter,
};
use metaplectic_core::packets::{build_principal_packet, t_vector, MemberFlag};
use metaplectic_core::parameters::{classify, enumerate_parameters, Restriction};
use metaplectic_core::{fixtures, ArthurParameter, Bits, Catalog, CoefficientVector, Sign, Summand};

use crate::report::{checks_table, Check, Report};
use crate::CliError;

pub const CASES: [&str; 5] = ["principal-local", "principal-global", "mp2-parameters", "mp4-psi-star", "mp4-sk"];

pub fn run_case(case: &str) -> Result<Report, CliError> {
    let (title, checks) = match case {
        "principal-local" => ("Principal local packets", principal_local()?),
        "principal-global" => ("Principal global multiplicities", principal_global()?),
        "mp2-parameters" => ("Parameters of Mp(2)", mp2_parameters()?),
        "mp4-psi-star" => ("Anti-tempered Mp(4) shapes", mp4_psi_star()?),
        "mp4-sk" => ("Mp(4) global signs", mp4_sk()?),
        other => {
            return Err(CliError::Usage(format!(
                "unknown casebook entry `{other}` (known: {})",
                CASES.join(", ")
            )))
        }
    };
    let mut r = Report::new(format!("Casebook: {case}"));
    let passed = checks.iter().filter(|c| c.ok).count();
    r.section(title, format!("{passed}/{} checks pass\n\n{}", checks.len(), checks_table(&checks)));
    r.ok = passed == checks.len();
    r.put("case", case);
    r.put("ok", r.ok);
    r.put("checks", &checks);
    Ok(r)
}

fn coefficients(v: &CoefficientVector, plus: &str, minus: &str) -> String {
    format!("{plus}: {}, {minus}: {}", v.get(plus), v.get(minus))
}

fn principal_local() -> Result<Vec<Check>, CliError> {
    let cat = fixtures::f1_extended();
    let mut checks = Vec::new();
    for zeta in ["one", "unr_minus", "chi_a", "chi_b"] {
        for n in 1..=2 {
            let pm = build_principal_packet(&cat, zeta, n)?;
            let (plus, minus) = (format!("omega_plus({zeta})"), format!("omega_minus({zeta})"));
            let psi = pm.parameter().to_string();
            checks.push(Check::eq(
                format!("T at s = 1 for {psi}"),
                format!("{plus}: 1, {minus}: -1"),
                coefficients(&t_vector(&pm, &Bits::zero(1)), &plus, &minus),
            ));
            checks.push(Check::eq(
                format!("T at s = −1 for {psi}"),
                format!("{plus}: 1, {minus}: 1"),
                coefficients(&t_vector(&pm, &Bits::unit(1, 0)), &plus, &minus),
            ));
            let unramified = cat.constituent(zeta)?.is_unramified_character;
            let spherical: Vec<String> = pm
                .members()
                .iter()
                .filter(|m| m.has(MemberFlag::Spherical))
                .map(|m| format!("{} with character {}", m.label, m.character))
                .collect();
            checks.push(Check::eq(
                format!("spherical members of {psi}"),
                if unramified { format!("{plus} with character 0") } else { "none".into() },
                if spherical.is_empty() { "none".into() } else { spherical.join("; ") },
            ));
        }
    }
    Ok(checks)
}

fn principal_global() -> Result<Vec<Check>, CliError> {
    let cat = fixtures::principal_global();
    let gp = GlobalParameter::new(&cat, vec![Summand::new("zeta_dot", 4, 1)])?;
    let v: Vec<String> = vec!["v1".into(), "v2".into()];
    let mut packets = BTreeMap::new();
    for p in &v {
        packets.insert(p.clone(), build_principal_packet(&cat.place(p)?.catalog, "chi_a", 2)?);
    }
    let eps = epsilon_psi(&cat, &gp, None)?;
    let members = global_packet_members(&cat, &gp, &packets, &v, &eps)?;
    let got: Vec<String> = members
        .members
        .iter()
        .map(|m| format!("({}) ×{}", m.labels.join(", "), m.multiplicity))
        .collect();
    let larger: Vec<String> = vec!["v1".into(), "v2".into(), "v3".into()];
    let enlarge = enlargement_check(&cat, &gp, &packets, &v, &larger, &eps)?;
    let f = nu_factorization_check(&cat, &gp, &v)?;
    Ok(vec![
        Check::eq("ν_ψ̇", "0", nu_global(&gp)?),
        Check::eq("ε_ψ̇", "0", eps),
        Check::eq(
            "member tuples over {v1, v2}",
            "(omega_minus(chi_a), omega_minus(chi_a)) ×1; (omega_plus(chi_a), omega_plus(chi_a)) ×1",
            got.join("; "),
        ),
        Check::eq("enlarging V by the unramified place v3", true, enlarge.ok()),
        Check::eq("ν factorization mismatches", 0, f.mismatches()),
        Check::eq("ν(s_ψ̇)", Sign::Plus, f.nu_at_s_psi),
    ])
}

fn mp2_parameters() -> Result<Vec<Check>, CliError> {
    let cat = fixtures::f1();
    let enumerated: BTreeSet<ArthurParameter> = enumerate_parameters(&cat, 1, Restriction::All)?.into_iter().collect();

    // Built independently from the catalog: bounded L-parameters of dimension 2
    // and the principal parameters ζ ⊠ r(2).
    let mut tempered = BTreeSet::new();
    let mut principal = BTreeSet::new();
    for c in cat.constituents().filter(|c| !c.unbounded) {
        let one = |s: Vec<Summand>| ArthurParameter::new(&cat, s);
        match (&c.duality, c.full_dim()) {
            (Duality::Symplectic, 2) => {
                tempered.insert(one(vec![Summand::new(c.id.clone(), 1, 1)])?);
            }
            (Duality::Orthogonal, 1) => {
                tempered.insert(one(vec![Summand::new(c.id.clone(), 1, 2)])?);
                principal.insert(one(vec![Summand::new(c.id.clone(), 2, 1)])?);
            }
            (Duality::NonSelfDual { dual_id }, 1) if c.id.as_str() < dual_id.as_str() => {
                tempered.insert(one(vec![Summand::new(c.id.clone(), 1, 1), Summand::new(dual_id.clone(), 1, 1)])?);
            }
            _ => {}
        }
    }
    let union: BTreeSet<ArthurParameter> = tempered.union(&principal).cloned().collect();
    let show = |s: &BTreeSet<ArthurParameter>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
    let flagged_principal: BTreeSet<ArthurParameter> =
        enumerated.iter().filter(|p| classify(p).principal).cloned().collect();
    Ok(vec![
        Check::eq("parameters with n = 1", show(&union), show(&enumerated)),
        Check::eq("principal among them", show(&principal), show(&flagged_principal)),
        Check::eq(
            "tempered among them",
            show(&tempered),
            show(&enumerated.iter().filter(|p| p.summands().iter().all(|s| s.b == 1)).cloned().collect()),
        ),
    ])
}

fn mp4_psi_star() -> Result<Vec<Check>, CliError> {
    let cat = fixtures::f1_extended();
    let mut checks = Vec::new();
    for shape in fixtures::mp4_psi_star_shapes() {
        let psi = fixtures::param(&cat, &shape);
        checks.push(Check::eq(format!("{psi} lies in Ψ*"), true, classify(&psi).in_psi_star));
        let mu = xu_character_anti_tempered(&psi)?;
        checks.push(Check::eq(format!("μ for {psi}"), Bits::zero(mu.len()), mu));
        checks.push(Check::eq(format!("μ̃ = μ for {psi}"), mu, mu_tilde(&cat, &psi, &mu)?));
    }
    // Outside Ψ*: the unramified principal parameter picks up ε(one ⊠ r(4)) = −1.
    let psi = fixtures::param(&cat, &[("one", 4, 1)]);
    let mu = xu_character_anti_tempered(&psi)?;
    checks.push(Check::eq(format!("μ̃ for {psi} (outside Ψ*)"), "1", mu_tilde(&cat, &psi, &mu)?));
    Ok(checks)
}

fn slot_of(gp: &GlobalParameter, b: u32) -> Option<usize> {
    gp.shape().basis().iter().position(|&k| gp.summands()[k].b == b)
}

fn shape_parameter(cat: &Catalog, summands: &[(&str, u32, u32)]) -> Result<GlobalParameter, CliError> {
    Ok(GlobalParameter::new(cat, summands.iter().map(|(c, b, m)| Summand::new(*c, *b, *m)).collect())?)
}

fn mp4_sk() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for rs in [Sign::Minus, Sign::Plus] {
        let cat = fixtures::mp4_global(rs);
        for shape in fixtures::mp4_global_shapes() {
            let gp = shape_parameter(&cat, &shape.summands)?;
            let art = epsilon_art(&cat, &gp)?;
            let nu = nu_global(&gp)?;
            if shape.saito_kurokawa {
                let slot = slot_of(&gp, 2).expect("Saito–Kurokawa shapes have an r(2) slot");
                let (_, z) = distinguished_elements(gp.shape());
                let pair_sign = cat
                    .rankin_selberg(&gp.summands()[0].constituent, &gp.summands()[1].constituent)
                    .expect("Saito–Kurokawa pairs carry a Rankin–Selberg sign");
                checks.push(Check::eq(
                    format!("ε^Art at the r(2) slot of {gp}, RS sign {pair_sign}"),
                    pair_sign,
                    art.pair(&Bits::unit(art.len(), slot)),
                ));
                checks.push(Check::eq(format!("ε^Art(z) for {gp}, RS sign {rs}"), Sign::Plus, art.pair(&z)));
                checks.push(Check::eq(format!("ε_ψ̇ = ε^Art ν for {gp}"), art.add(&nu), epsilon_psi(&cat, &gp, None)?));
            } else {
                checks.push(Check::eq(
                    format!("ε^Art trivial for {} ({gp}), RS sign {rs}", shape.name),
                    Bits::zero(art.len()),
                    art,
                ));
            }
            let f = nu_factorization_check(&cat, &gp, &["v1".into(), "v2".into()])?;
            checks.push(Check::eq(format!("ν factorizes for {gp}"), 0, f.mismatches()));
            checks.push(Check::eq(format!("ν(s_ψ̇) for {gp}"), Sign::Plus, f.nu_at_s_psi));
        }
    }
    Ok(checks)
}

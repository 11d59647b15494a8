use serde::Serialize;

use qlens::bundle::{
    canonical_obstruction_probe, expand_unity_power, freeness_witness, q0_partition,
    strong_connection_r1, verify_strong_connection, ConnectionReport, FreenessWitness,
    ObstructionReport, Q0Partition, Side, UnityExpansion,
};
use qlens::hilbert::{dirac_twice, enumerate_basis, Arrow};
use qlens::lens::{
    closed_form_spectrum, lattice_diagram, normalize, spectrum as count_spectrum,
    ClosedFormVariant, FamilyEntry, LensParams, SpectrumTable,
};

use crate::{CliError, Format, Outcome, Payload};

fn params(p: u32, r: i64, k: i64) -> Result<LensParams, CliError> {
    if k < 0 || k >= p as i64 {
        return Err(CliError::Params(format!("K={k} must lie in 0..{p}")));
    }
    Ok(normalize(p, r)
        .map_err(|e| CliError::Params(e.to_string()))?
        .with_k(k))
}

#[derive(Serialize)]
struct ClosedFormColumns {
    variant: ClosedFormVariant,
    agrees: bool,
    families: Vec<FamilyEntry>,
    mismatches: Vec<FamilyEntry>,
    uncovered: Vec<(i64, u64)>,
}

#[derive(Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    table: SpectrumTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedFormColumns>,
}

pub fn spectrum(
    p: u32,
    r: i64,
    k: i64,
    two_jmax: u32,
    variant: Option<ClosedFormVariant>,
) -> Result<Outcome, CliError> {
    let prm = params(p, r, k)?;
    let closed_form = match variant {
        None => None,
        Some(v) => {
            if p < 2 || (r + 1).rem_euclid(p as i64) != 0 {
                return Err(CliError::Params(format!(
                    "closed forms need r = p - 1, got p={p} r={r}"
                )));
            }
            // The closed forms are written for r = -1, where K may differ from the normalized labels.
            let cf = closed_form_spectrum(p, k as u32, two_jmax, v)
                .map_err(|e| CliError::Params(e.to_string()))?;
            Some(ClosedFormColumns {
                variant: v,
                agrees: cf.agrees(),
                families: cf.families.clone(),
                mismatches: cf.mismatches.clone(),
                uncovered: cf.uncovered.clone(),
            })
        }
    };
    let table = match &closed_form {
        Some(_) => count_spectrum(
            &LensParams::raw(p, -1, k).map_err(|e| CliError::Params(e.to_string()))?,
            two_jmax,
        ),
        None => count_spectrum(&prm, two_jmax),
    };
    Ok(Outcome::json(&SpectrumOutput { table, closed_form }, None))
}

#[derive(Serialize)]
struct LatticeOutput {
    p: u32,
    r: i64,
    #[serde(rename = "K")]
    k: u32,
    range: u32,
    legend: [(&'static str, &'static str); 3],
    rows: Vec<String>,
}

pub fn lattice(p: u32, r: i64, k: i64, range: u32, format: Format) -> Result<Outcome, CliError> {
    let prm = params(p, r, k)?;
    let d = lattice_diagram(&prm, range).map_err(|e| CliError::Params(e.to_string()))?;
    let payload = match format {
        Format::Ascii => Payload::Text(d.to_ascii()),
        Format::Svg => Payload::Text(d.to_svg()),
        Format::Json => {
            let out = LatticeOutput {
                p: d.p,
                r: d.r,
                k: d.k,
                range: d.range,
                legend: [
                    ("*", "integer j"),
                    ("#", "half-integer j"),
                    (".", "outside H_K"),
                ],
                rows: d.to_ascii().lines().map(str::to_string).collect(),
            };
            Payload::Json(serde_json::to_value(out).expect("json"))
        }
    };
    Ok(Outcome {
        payload,
        failure: None,
    })
}

#[derive(Serialize)]
struct BundleOutput {
    p: u32,
    r: i64,
    freeness: FreenessWitness,
    unity: [UnityExpansion; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    strong_connection: Option<ConnectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q0_partition: Option<Q0Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ObstructionReport>,
    passed: bool,
}

pub fn bundle(
    p: u32,
    r: i64,
    n_max: u32,
    q0: bool,
    probe: Option<u32>,
) -> Result<Outcome, CliError> {
    let bad = |e: qlens::error::AlgebraError| CliError::Params(e.to_string());
    if r <= 0 {
        return Err(CliError::Params(format!("r={r} must be positive")));
    }
    let freeness = freeness_witness(p, r).map_err(bad)?;
    let unity = [
        expand_unity_power(p, Side::Left),
        expand_unity_power(p, Side::Right),
    ];
    let strong_connection =
        (r == 1).then(|| verify_strong_connection(&strong_connection_r1(p, n_max), 1));
    let q0_partition = if q0 {
        Some(q0_partition(p, r).map_err(bad)?)
    } else {
        None
    };
    let probe = match probe {
        Some(b) => Some(canonical_obstruction_probe(p, r, b).map_err(bad)?),
        None => None,
    };
    let mut failed = Vec::new();
    if !freeness.verified {
        failed.push("freeness witness");
    }
    if !unity.iter().all(|u| u.reconstructs_one) {
        failed.push("unity expansion");
    }
    if strong_connection.as_ref().is_some_and(|c| !c.passed) {
        failed.push("strong connection");
    }
    if q0_partition.as_ref().is_some_and(|q| !q.verified) {
        failed.push("q = 0 partition");
    }
    if probe.as_ref().is_some_and(|pr| pr.feasible && !pr.verified) {
        failed.push("probe witness");
    }
    let out = BundleOutput {
        p,
        r,
        freeness,
        unity,
        strong_connection,
        q0_partition,
        probe,
        passed: failed.is_empty(),
    };
    let failure = (!failed.is_empty()).then(|| failed.join(", "));
    Ok(Outcome::json(&out, failure))
}

#[derive(Serialize)]
struct BasisEntry {
    index: usize,
    two_j: u32,
    arrow: &'static str,
    two_mu: i32,
    two_n: i32,
    two_lambda: i64,
}

pub fn basis_dump(two_jmax: u32) -> Outcome {
    let basis = enumerate_basis(two_jmax);
    let entries: Vec<BasisEntry> = basis
        .vectors()
        .iter()
        .enumerate()
        .map(|(index, v)| BasisEntry {
            index,
            two_j: v.two_j,
            arrow: match v.arrow {
                Arrow::Up => "up",
                Arrow::Down => "down",
            },
            two_mu: v.two_mu,
            two_n: v.two_n,
            two_lambda: dirac_twice(v),
        })
        .collect();
    Outcome::json(
        &serde_json::json!({ "two_jmax": two_jmax, "basis": entries }),
        None,
    )
}

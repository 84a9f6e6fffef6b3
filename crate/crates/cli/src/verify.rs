use serde_json::{json, Value};

use galsym_core::cohomology::{serre_restriction_check, StandardModule};
use galsym_core::padic::{verify_certificate, ApproximationCertificate};
use galsym_core::MatGroup;

use crate::commands::{classify_record, cohomology_record, curves_from_parameters, parse_generators, prime_scan_records, sha_row};
use crate::report::{input_digest, Outcome, RunReport, SCHEMA_VERSION};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn field_u32(v: &Value, key: &str) -> Result<u32, CliError> {
    v[key].as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| usage(format!("missing integer field {key:?}")))
}

fn field_str<'a>(v: &'a Value, key: &str) -> Result<&'a str, CliError> {
    v[key].as_str().ok_or_else(|| usage(format!("missing string field {key:?}")))
}

fn strings(v: &Value, key: &str) -> Result<Vec<String>, CliError> {
    serde_json::from_value(v[key].clone()).map_err(|_| usage(format!("field {key:?} must be a list of strings")))
}

fn module(v: &Value) -> Result<StandardModule, CliError> {
    let name = field_str(v, "module")?;
    StandardModule::parse(name).ok_or_else(|| usage(format!("unknown module {name:?}")))
}

/// The trivial group is recorded with no generators.
fn group(p: u32, gens: &[String]) -> Result<MatGroup, CliError> {
    let elems = if gens.is_empty() { Vec::new() } else { parse_generators(p, gens)? };
    Ok(MatGroup::close(p, &elems)?)
}

/// Recomputes one record; `Ok(true)` iff it reproduces exactly and the
/// mathematical check it records holds.
fn check_record(command: &str, params: &Value, r: &Value) -> Result<bool, CliError> {
    match command {
        "sha-scan" => {
            let p = field_u32(params, "p")?;
            let g = group(p, &strings(r, "generators")?)?;
            let fresh = sha_row(field_str(r, "family")?, &g, module(r)?);
            Ok(fresh == *r && r["sha1_dim"] == 0)
        }
        "serre-check" => {
            let fresh = serre_restriction_check(field_u32(params, "p")?, module(r)?)?;
            Ok(serde_json::to_value(&fresh)? == *r && fresh.injective)
        }
        "classify" => {
            let p = field_u32(params, "p")?;
            let gens = strings(r, "generators")?;
            let fresh = classify_record(&group(p, &gens)?, &gens);
            Ok(fresh == *r && r["witness_verified"] != false)
        }
        "cohomology" => {
            let p = field_u32(params, "p")?;
            let fresh = cohomology_record(&group(p, &strings(params, "generators")?)?, module(r)?)?;
            Ok(fresh == *r && r["sha1_dim"] == 0)
        }
        "approximate" => {
            if r["verified"] != true {
                return Ok(false);
            }
            let cert: ApproximationCertificate = serde_json::from_value(r["certificate"].clone())?;
            Ok(verify_certificate(&cert)?)
        }
        other => Err(usage(format!("cannot verify reports of command {other:?}"))),
    }
}

/// Re-runs every record of a report from the JSON alone.
pub fn verify_report(report: &RunReport) -> Result<Outcome, CliError> {
    if report.schema != SCHEMA_VERSION {
        return Err(usage(format!("unsupported schema {}; expected {SCHEMA_VERSION}", report.schema)));
    }
    let digest_ok = input_digest(&report.command, &report.parameters) == report.input_digest;
    let mut records: Vec<Value> = if report.command == "prime-scan" {
        // the scan is recomputed as a whole from the embedded curve list
        let curves = curves_from_parameters(&report.parameters)?;
        let bound = report.parameters["bound"].as_u64().ok_or_else(|| usage("missing bound"))?;
        let degree = report.parameters["degree"].as_u64().ok_or_else(|| usage("missing degree"))?;
        let fresh = RunReport::new("prime-scan", Value::Null, prime_scan_records(&curves, bound, degree)?, Value::Null, true);
        let same = fresh.records == report.records;
        vec![json!({ "index": "all", "ok": same, "records": report.records.len() })]
    } else {
        report
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| Ok(json!({ "index": i, "ok": check_record(&report.command, &report.parameters, r)? })))
            .collect::<Result<_, CliError>>()?
    };
    records.push(json!({ "index": "input_digest", "ok": digest_ok }));
    let failed = records.iter().filter(|r| r["ok"] != true).count();
    let summary = json!({ "checked": records.len(), "failed": failed });
    let params = json!({ "command": report.command, "input_digest": report.input_digest });
    Ok(RunReport::new("verify", params, records, summary, failed == 0).into_outcome())
}

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use galsym_core::cohomology::{h1, h2_small, serre_restriction_check, sha1, StandardModule, H2_MAX_ORDER};
use galsym_core::elliptic::{theorem_a_scan_with_degree, Reduction, VerdictReason, WeierstrassCurve};
use galsym_core::matgroup::{borel, gl2, nonsplit_torus, primitive_root, split_torus};
use galsym_core::padic::{
    approximate_point, approximate_rational_point, parse_rational, random_point, DepthPolicy, PadicCurve, PadicError,
};
use galsym_core::{Dichotomy, GroupElement, MatGroup};

use crate::report::{Outcome, RunReport};
use crate::CliError;

pub const MAX_PRIME_SCAN_BOUND: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_PRECISION: u32 = 40;

/// Which subgroups `sha-scan` visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Every subgroup (`p = 3` only).
    All,
    /// Subgroups of the Borel, both tori, and the overgroups of `SL_2`.
    Families,
    /// Subgroups generated by `k` random pairs of elements.
    Random(usize),
}

impl FromStr for Scope {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "all" => Ok(Self::All),
            "families" => Ok(Self::Families),
            _ => s
                .strip_prefix("random:")
                .and_then(|k| k.parse().ok())
                .map(Self::Random)
                .ok_or_else(|| CliError::Usage(format!("unknown scope {s:?}; expected all, families or random:K"))),
        }
    }
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::All => write!(f, "all"),
            Self::Families => write!(f, "families"),
            Self::Random(k) => write!(f, "random:{k}"),
        }
    }
}

/// Parses a comma-separated module list; the empty string is the empty list.
pub fn parse_modules(s: &str) -> Result<Vec<StandardModule>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| StandardModule::parse(t).ok_or_else(|| CliError::Usage(format!("unknown module {t:?}"))))
        .collect()
}

fn module_names(ms: &[StandardModule]) -> Vec<&'static str> {
    ms.iter().map(|m| m.name()).collect()
}

fn check_scan_prime(p: u32) -> Result<(), CliError> {
    if p == 3 || p == 5 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("p must be 3 or 5, got {p}")))
    }
}

pub fn parse_generators(p: u32, gens: &[String]) -> Result<Vec<GroupElement>, CliError> {
    if gens.is_empty() {
        return Err(CliError::Usage("at least one generator is required".into()));
    }
    Ok(gens.iter().map(|g| GroupElement::parse(p, g)).collect::<Result<_, _>>()?)
}

fn generator_strings(g: &MatGroup) -> Vec<String> {
    g.generators().iter().map(ToString::to_string).collect()
}

/// Subgroups for `sha-scan`, tagged by family.
pub fn scan_groups(p: u32, scope: Scope, seed: u64) -> Result<Vec<(String, MatGroup)>, CliError> {
    check_scan_prime(p)?;
    let mut out = Vec::new();
    match scope {
        Scope::All if p != 3 => {
            return Err(CliError::Usage(format!("scope all is only available for p = 3, got p = {p}")));
        }
        Scope::All => out.extend(MatGroup::enumerate_all_subgroups(p)?.into_iter().map(|g| ("all".to_string(), g))),
        Scope::Families => {
            out.extend(borel(p)?.all_subgroups().into_iter().map(|g| ("borel-subgroup".to_string(), g)));
            out.push(("split-torus".to_string(), split_torus(p)?));
            out.push(("nonsplit-torus".to_string(), nonsplit_torus(p)?));
            out.extend(sl2_overgroups(p)?.into_iter().map(|g| ("sl2-overgroup".to_string(), g)));
        }
        Scope::Random(k) => {
            let all = gl2(p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..k {
                let a = all.element(rng.gen_range(0..all.order()));
                let b = all.element(rng.gen_range(0..all.order()));
                out.push((format!("random-{i:04}"), MatGroup::close(p, &[a, b])?));
            }
        }
    }
    Ok(out)
}

/// `SL_2(F_p) · diag(d, 1)` for `d` running over the subgroups of `F_p^×`.
pub fn sl2_overgroups(p: u32) -> Result<Vec<MatGroup>, CliError> {
    let g = primitive_root(p);
    let n = p - 1;
    let u = GroupElement::new(p, 1, 1, 0, 1)?;
    let w = GroupElement::new(p, 0, -1, 1, 0)?;
    let mut out = Vec::new();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let t = (0..n / d).fold(1u64, |acc, _| acc * g as u64 % p as u64);
        let diag = GroupElement::new(p, t as i64, 0, 0, 1)?;
        out.push(MatGroup::close(p, &[u, w, diag])?);
    }
    Ok(out)
}

/// One `sha-scan` row.
pub fn sha_row(family: &str, g: &MatGroup, which: StandardModule) -> Value {
    let m = Arc::new(which.build(g));
    let s = sha1(&m);
    json!({
        "family": family,
        "group_order": g.order(),
        "generators": generator_strings(g),
        "module": which.name(),
        "h1_dim": s.h1_dim,
        "sha1_dim": s.dim,
        "cyclic_subgroups": s.cyclic_subgroups,
        "verdict": if s.dim == 0 { "zero" } else { "nonzero" },
    })
}

pub fn sha_scan(p: u32, modules: &[StandardModule], scope: Scope, seed: u64) -> Result<Outcome, CliError> {
    let groups = scan_groups(p, scope, seed)?;
    let work: Vec<(&str, &MatGroup, StandardModule)> =
        groups.iter().flat_map(|(f, g)| modules.iter().map(move |&m| (f.as_str(), g, m))).collect();
    let records: Vec<Value> = work.par_iter().map(|(f, g, m)| sha_row(f, g, *m)).collect();
    let nonzero = records.iter().filter(|r| r["sha1_dim"] != 0).count();
    let max_h1 = records.iter().filter_map(|r| r["h1_dim"].as_u64()).max().unwrap_or(0);
    let summary = json!({
        "groups": groups.len(),
        "rows": records.len(),
        "nonzero_rows": nonzero,
        "max_h1_dim": max_h1,
    });
    let params = json!({ "p": p, "modules": module_names(modules), "scope": scope.to_string(), "seed": seed });
    Ok(RunReport::new("sha-scan", params, records, summary, nonzero == 0).into_outcome())
}

pub fn serre_check(p: u32, modules: &[StandardModule]) -> Result<Outcome, CliError> {
    check_scan_prime(p)?;
    let reports = modules.par_iter().map(|&m| serre_restriction_check(p, m)).collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.injective);
    let records = reports.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect::<Vec<_>>();
    let summary = json!({ "modules": records.len(), "injective": reports.iter().filter(|r| r.injective).count() });
    let params = json!({ "p": p, "modules": module_names(modules) });
    Ok(RunReport::new("serre-check", params, records, summary, passed).into_outcome())
}

/// Dichotomy verdict for the group generated by `gens`, with the Borel
/// witness checked by explicit conjugation.
pub fn classify_record(g: &MatGroup, gens: &[String]) -> Value {
    let p = g.p();
    let (verdict, witness, witness_verified) = match g.classify_dichotomy() {
        Ok(Dichotomy::BorelConjugate { witness }) => {
            let ok = g.conjugate(&witness).elements().iter().all(GroupElement::is_upper_triangular);
            ("borel-conjugate", Some(witness.to_string()), Some(ok))
        }
        Ok(Dichotomy::ContainsSl2) => ("contains-sl2", None, Some(g.contains_sl2())),
        Err(galsym_core::GroupError::HypothesisNotMet { .. }) => ("order-prime-to-p", None, None),
        Err(_) => ("dichotomy-violated", None, Some(false)),
    };
    json!({
        "p": p,
        "generators": gens,
        "group_order": g.order(),
        "verdict": verdict,
        "witness": witness,
        "witness_verified": witness_verified,
    })
}

fn record_passes(r: &Value) -> bool {
    r["witness_verified"] != false && r["verdict"] != "dichotomy-violated"
}

pub fn classify(p: u32, gens: &[String]) -> Result<Outcome, CliError> {
    let elems = parse_generators(p, gens)?;
    let g = MatGroup::close(p, &elems)?;
    let record = classify_record(&g, gens);
    let passed = record_passes(&record);
    let summary = json!({ "verdict": record["verdict"].clone() });
    let params = json!({ "p": p, "generators": gens });
    Ok(RunReport::new("classify", params, vec![record], summary, passed).into_outcome())
}

pub fn cohomology_record(g: &MatGroup, which: StandardModule) -> Result<Value, CliError> {
    let m = Arc::new(which.build(g));
    let s = sha1(&m);
    let h0 = m.invariants().len();
    let h2 = if g.order() <= H2_MAX_ORDER { Some(h2_small(&m)?.dim) } else { None };
    debug_assert_eq!(h1(&m).dim, s.h1_dim);
    Ok(json!({
        "group_order": g.order(),
        "module": which.name(),
        "module_dim": m.dim(),
        "h0_dim": h0,
        "h1_dim": s.h1_dim,
        "sha1_dim": s.dim,
        "h2_dim": h2,
        "verdict": if s.dim == 0 { "zero" } else { "nonzero" },
    }))
}

pub fn cohomology(p: u32, gens: &[String], modules: &[StandardModule]) -> Result<Outcome, CliError> {
    let elems = parse_generators(p, gens)?;
    let g = MatGroup::close(p, &elems)?;
    let records = modules.par_iter().map(|&m| cohomology_record(&g, m)).collect::<Result<Vec<_>, _>>()?;
    let passed = records.iter().all(|r| r["sha1_dim"] == 0);
    let summary = json!({ "group_order": g.order(), "modules": records.len() });
    let params = json!({ "p": p, "generators": gens, "modules": module_names(modules) });
    Ok(RunReport::new("cohomology", params, records, summary, passed).into_outcome())
}

fn curve_json(c: &WeierstrassCurve) -> Value {
    json!({ "label": c.label, "coefficients": c.coefficients() })
}

pub fn curves_from_parameters(params: &Value) -> Result<Vec<WeierstrassCurve>, CliError> {
    let bad = || CliError::Usage("parameters.curves must list {label, coefficients}".into());
    params["curves"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|c| {
            let label = c["label"].as_str().ok_or_else(bad)?;
            let coeffs: [i64; 5] = serde_json::from_value(c["coefficients"].clone()).map_err(|_| bad())?;
            Ok(WeierstrassCurve::new(label, coeffs)?)
        })
        .collect()
}

/// Verdict records for the odd primes up to `bound`.
pub fn prime_scan_records(curves: &[WeierstrassCurve], bound: u64, degree: u64) -> Result<Vec<Value>, CliError> {
    if !(3..=MAX_PRIME_SCAN_BOUND).contains(&bound) {
        return Err(CliError::Usage(format!("bound must lie in [3, {MAX_PRIME_SCAN_BOUND}], got {bound}")));
    }
    let per_curve = curves
        .par_iter()
        .map(|c| theorem_a_scan_with_degree(c, bound, degree))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per_curve
        .into_iter()
        .flatten()
        .filter(|v| v.p != 2)
        .map(|v| serde_json::to_value(v).expect("serializable"))
        .collect())
}

fn verdict_consistent(r: &Value, degree: u64) -> bool {
    let p = r["p"].as_u64().unwrap_or(0);
    let eliminated = r["eliminated"] == true;
    let ordinary = r["reduction"] == "good-ordinary";
    let hasse = match r["ap"].as_i64() {
        Some(a) => (a as f64).abs() <= 2.0 * (p as f64).sqrt(),
        None => r["reduction"] == "bad",
    };
    let elimination = if ordinary { eliminated == (p - 1 > degree.max(2)) } else { !eliminated };
    hasse && elimination && p % 2 == 1
}

pub fn prime_scan(curves: &[WeierstrassCurve], bound: u64, degree: u64) -> Result<Outcome, CliError> {
    if degree == 0 {
        return Err(CliError::Usage("degree must be positive".into()));
    }
    let records = prime_scan_records(curves, bound, degree)?;
    let passed = records.iter().all(|r| verdict_consistent(r, degree));
    let mut per_curve: BTreeMap<String, BTreeMap<&str, usize>> = BTreeMap::new();
    for c in curves {
        per_curve.insert(c.label.clone(), VerdictReason::ALL.iter().map(|r| (r.as_str(), 0)).collect());
    }
    for r in &records {
        let label = r["label"].as_str().unwrap_or_default().to_string();
        let reason = VerdictReason::ALL.into_iter().find(|x| r["reason"] == x.as_str()).expect("known reason");
        *per_curve.entry(label).or_default().entry(reason.as_str()).or_default() += 1;
    }
    let summary = json!({
        "records": records.len(),
        "eliminated": records.iter().filter(|r| r["eliminated"] == true).count(),
        "per_curve": per_curve,
        "p2": VerdictReason::SmallPrimeNotCovered.as_str(),
    });
    let params = json!({
        "bound": bound,
        "degree": degree,
        "curves": curves.iter().map(curve_json).collect::<Vec<_>>(),
    });
    Ok(RunReport::new("prime-scan", params, records, summary, passed).into_outcome())
}

#[derive(Debug, Clone)]
pub struct ApproximateArgs {
    pub label: String,
    pub p: u32,
    pub seed: u64,
    pub depth_max: u32,
    pub pair: bool,
    /// A rational point `(x, y)` to certify instead of a random one.
    pub point: Option<(String, String)>,
    pub precision: u32,
}

impl ApproximateArgs {
    pub fn new(label: impl Into<String>, p: u32) -> Self {
        Self {
            label: label.into(),
            p,
            seed: DEFAULT_SEED,
            depth_max: DepthPolicy::default().depth_max,
            pair: false,
            point: None,
            precision: DEFAULT_PRECISION,
        }
    }
}

/// Seed of the second point in pair mode.
pub fn pair_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

pub fn approximate(curves: &[WeierstrassCurve], args: &ApproximateArgs) -> Result<Outcome, CliError> {
    let curve = curves
        .iter()
        .find(|c| c.label == args.label)
        .ok_or_else(|| CliError::Usage(format!("no curve labelled {:?}", args.label)))?;
    let p = args.p;
    if p == 2 || !galsym_core::linalg::is_prime(p as u64) {
        return Err(CliError::Usage(format!("p must be an odd prime, got {p}")));
    }
    let reduction = curve.reduction_type(p as u64)?;
    if reduction != Reduction::GoodOrdinary {
        return Err(CliError::Usage(format!(
            "{} has {} reduction at p = {p}; good ordinary reduction is required",
            curve.label,
            reduction.as_str()
        )));
    }
    if args.depth_max == 0 {
        return Err(CliError::Usage("depth-max must be at least 1".into()));
    }
    if args.precision <= args.depth_max {
        return Err(CliError::Usage(format!(
            "precision {} must exceed depth-max {}",
            args.precision, args.depth_max
        )));
    }
    let pc = PadicCurve::new(curve, p)?;
    let policy = DepthPolicy { max_precision: DepthPolicy::default().max_precision.min(args.precision), ..DepthPolicy::with_depth_max(args.depth_max) };
    let mut records = Vec::new();
    if let Some((x, y)) = &args.point {
        let (x, y) = (parse_rational(x)?, parse_rational(y)?);
        let cert = approximate_rational_point(&pc, &x, &y, args.precision)?;
        records.push(json!({ "role": "P1", "seed": null, "verified": cert.verified, "certificate": cert }));
    } else {
        let mut jobs = vec![("P1", args.seed)];
        if args.pair {
            jobs.push(("Q1", pair_seed(args.seed)));
        }
        for (role, seed) in jobs {
            let pt = random_point(&pc, seed, args.precision)?;
            match approximate_point(&pc, &pt, &policy) {
                Ok(cert) => records.push(json!({ "role": role, "seed": seed, "verified": cert.verified, "certificate": cert })),
                Err(e @ PadicError::PolicyExhausted { .. }) => {
                    records.push(json!({ "role": role, "seed": seed, "verified": false, "error": e.to_string() }))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let passed = records.iter().all(|r| r["verified"] == true);
    let summary = json!({
        "certificates": records.len(),
        "verified": records.iter().filter(|r| r["verified"] == true).count(),
        "max_depth": records.iter().filter_map(|r| r["certificate"]["depth"].as_u64()).max(),
    });
    let params = json!({
        "curve": curve_json(curve),
        "p": p,
        "seed": args.seed,
        "depth_max": args.depth_max,
        "pair": args.pair,
        "point": args.point.as_ref().map(|(x, y)| [x, y]),
        "precision": args.precision,
    });
    Ok(RunReport::new("approximate", params, records, summary, passed).into_outcome())
}

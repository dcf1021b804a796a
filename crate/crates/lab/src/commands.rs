//! One function per subcommand. Each returns an [`Outcome`]: the files to
//! write, the primary JSON document and any failed assertions. Nothing is
//! written until the whole computation has finished, so outputs appear in
//! a fixed order whatever the thread count.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use unitdist_core::exact::Rational;
use unitdist_core::exponents::{certificate, reference_point, scan_alpha, term_table, tightness_report};
use unitdist_core::families::{gen_example1, Family, FamilyKind, FamilyParams};
use unitdist_core::geometry::{AnalyticCircle, CircleRecord, Point3};
use unitdist_core::incidence::{
    bound_checker, count_unit_pairs, count_unit_pairs_bruteforce, incidences_points_circles, richest_circle_on_sphere,
    two_rich_points, BoundInput, Engine, Incidence, Metric,
};
use unitdist_core::liftcut::{
    cut_to_pseudosegments, depth_cycle_at, detect_lens, max_cospherical_or_coplanar, projections_form_lens,
    rotate_to_general_position, verify_pseudosegments, CircleChart, DepthCycle,
};
use unitdist_core::{dual6, Error as CoreError};

use crate::error::{LabError, Result};
use crate::fit::{estimate_exponent, ScalingSeries, SeriesPoint};
use crate::io::{read_circles, read_points, read_json, to_csv, to_json};

/// A failed exact assertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub command: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// Files in the order they are written.
    pub files: Vec<(PathBuf, String)>,
    /// Printed when the command has no `--out`.
    pub stdout: Option<String>,
    pub failures: Vec<Failure>,
}

impl Outcome {
    fn new(command: &str) -> OutcomeBuilder {
        OutcomeBuilder {
            command: command.to_string(),
            out: Outcome::default(),
        }
    }
}

struct OutcomeBuilder {
    command: String,
    out: Outcome,
}

impl OutcomeBuilder {
    fn check(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.out.failures.push(Failure {
                command: self.command.clone(),
                check: check.to_string(),
                detail: detail(),
            });
        }
    }

    fn file(&mut self, path: &Path, contents: String) {
        self.out.files.push((path.to_path_buf(), contents));
    }

    /// The main JSON document goes to `out` if given, else to stdout.
    fn primary(mut self, out: Option<&PathBuf>, doc: &Value) -> Outcome {
        let text = to_json(doc);
        match out {
            Some(p) => self.file(p, text),
            None => self.out.stdout = Some(text),
        }
        self.out
    }
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| LabError::Usage(format!("missing --{flag}")))
}

fn parse_family(s: &str) -> std::result::Result<FamilyKind, String> {
    serde_json::from_value(Value::String(s.to_string()))
        .map_err(|_| format!("unknown family {s:?} (example1, pencil, coplanar, random, grid)"))
}

fn verdict_name(v: DepthCycle) -> &'static str {
    match v {
        DepthCycle::Proper => "proper",
        DepthCycle::Improper => "improper",
        DepthCycle::NoCycle => "no-cycle",
    }
}

// ---------------------------------------------------------------- gen

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenArgs {
    /// example1 | pencil | coplanar | random | grid
    #[arg(long, value_parser = parse_family)]
    pub family: Option<FamilyKind>,
    /// Example 1 resolution.
    #[arg(long)]
    pub b: Option<u32>,
    /// Pencil base points (0, 0, ±h).
    #[arg(long)]
    pub h: Option<Rational>,
    /// Pencil size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of circles (coplanar, random) or points (grid).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of extra points (random).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Denominator bound (random) or lattice denominator (grid).
    #[arg(long)]
    pub den: Option<i64>,
    /// Box side (grid).
    #[arg(long)]
    pub side: Option<i64>,
    #[arg(long)]
    pub metric: Option<Metric>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen(a: &GenArgs) -> Result<Outcome> {
    let kind = *required(&a.family, "family")?;
    let params = FamilyParams {
        b: a.b,
        h: a.h.clone(),
        k: a.k,
        n: a.n,
        m: a.m,
        seed: a.seed,
        den: a.den,
        side: a.side,
        metric: a.metric,
    };
    let family = Family::generate(kind, params)?;
    let doc = serde_json::to_value(&family).expect("family serializes");
    Ok(Outcome::new("gen").primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- count

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountArgs {
    /// euclid | dstar (default euclid)
    #[arg(long)]
    pub metric: Option<Metric>,
    /// brute | grid (default grid)
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Points: a JSON array or a family file.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also run the brute-force engine and assert equality.
    #[arg(long)]
    pub check_brute: bool,
}

pub fn count(a: &CountArgs) -> Result<Outcome> {
    let pts = read_points(required(&a.input, "in")?)?;
    let metric = a.metric.unwrap_or(Metric::Euclid);
    let engine = a.engine.unwrap_or(Engine::Grid);
    let c = count_unit_pairs(&pts, metric, engine);
    let mut o = Outcome::new("count");
    let mut doc = json!({
        "points": pts.len(),
        "metric": metric,
        "engine": engine,
        "unordered_pairs": c,
        "ordered_pairs": 2 * c,
    });
    if a.check_brute {
        let b = count_unit_pairs_bruteforce(&pts, metric);
        doc["brute_unordered_pairs"] = json!(b);
        o.check(b == c, "engine-equivalence", || format!("{engine:?} {c} vs brute {b}"));
    }
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- incidence

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IncidenceArgs {
    /// Points: a JSON array or a family file.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Circles: a JSON array or a family file (default: the points file).
    #[arg(long)]
    pub circles: Option<PathBuf>,
    /// Also find the richest circle through the points (all on one sphere).
    #[arg(long)]
    pub richest: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn incidence(a: &IncidenceArgs) -> Result<Outcome> {
    let ppath = required(&a.points, "points")?;
    let pts = read_points(ppath)?;
    let records = read_circles(a.circles.as_ref().unwrap_or(ppath))?;
    let circles = records.iter().map(CircleRecord::to_analytic).collect::<Result<Vec<_>, CoreError>>()?;
    let rep = incidences_points_circles(&pts, &circles);
    let rich = two_rich_points(&circles)?;
    let b = max_cospherical_or_coplanar(&circles);
    let bounds = bound_checker(&BoundInput {
        m: pts.len() as f64,
        n: circles.len() as f64,
        b_or_q: b as f64,
        observed: rep.count as f64,
        ..Default::default()
    });
    let mut o = Outcome::new("incidence");
    let mut doc = json!({
        "points": pts.len(),
        "circles": circles.len(),
        "incidences": rep.count,
        "histogram": rep.histogram(),
        "two_rich_points": rich.len(),
        "max_cospherical_or_coplanar": b,
        "bounds": bounds,
    });
    if a.richest {
        let r = richest_circle_on_sphere(&pts)?;
        let on = pts.iter().filter(|p| r.circle.is_incident(p)).count();
        o.check(on == r.count(), "richest-circle-members", || format!("{} members, {on} incident", r.count()));
        doc["richest"] = json!({
            "count": r.count(),
            "fraction": Rational::frac(r.count() as i64, pts.len() as i64),
            "members": r.members,
            "circle": CircleRecord::from(&r.circle),
        });
    }
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- dual-check

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualCheckArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for DualCheckArgs {
    fn default() -> Self {
        DualCheckArgs {
            trials: 1000,
            seed: 1,
            out: None,
        }
    }
}

pub fn dual_check(a: &DualCheckArgs) -> Result<Outcome> {
    let r = dual6::run_dual_checks(a.trials, a.seed);
    let mut o = Outcome::new("dual-check");
    o.check(r.duality_failures == 0, "duality", || format!("{} failures", r.duality_failures));
    o.check(r.span6_failures == 0, "span-rank-6", || format!("{} failures", r.span6_failures));
    o.check(r.parity_failures == 0, "even-intersection", || format!("{} failures", r.parity_failures));
    let doc = serde_json::to_value(&r).expect("report serializes");
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- lift

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LiftArgs {
    /// Circles: a JSON array or a family file.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the rotation applied when some circle is vertical.
    #[arg(long, default_value_t = 0)]
    pub rotation_seed: u64,
    /// Fail unless every lens pair meeting the preconditions is proper.
    #[arg(long)]
    pub strict_lemma: bool,
}

fn load_circles(path: &Path, rotation_seed: u64) -> Result<(bool, Vec<AnalyticCircle>)> {
    let records = read_circles(path)?;
    let circles = records.iter().map(CircleRecord::to_analytic).collect::<Result<Vec<_>, CoreError>>()?;
    let (_, moved) = rotate_to_general_position(&circles, rotation_seed)?;
    let rotated = moved != circles;
    Ok((rotated, moved))
}

pub fn lift(a: &LiftArgs) -> Result<Outcome> {
    let (rotated, circles) = load_circles(required(&a.input, "in")?, a.rotation_seed)?;
    let charts = circles.iter().map(CircleChart::new).collect::<Result<Vec<_>, CoreError>>()?;
    let mut o = Outcome::new("lift");
    let mut per_circle = Vec::new();
    for (i, ch) in charts.iter().enumerate() {
        for e in [&ch.x2_min, &ch.x2_max] {
            let ok = ch.circle.contains_alg(e) && ch.f.eval_alg(&e.x, &e.y).is_zero() && ch.f.d1(&e.x, &e.y).is_zero();
            o.check(ok, "extremal-residue", || format!("circle {i}"));
        }
        per_circle.push(json!({ "id": i, "quadratic": ch.f, "x2_min": ch.x2_min, "x2_max": ch.x2_max }));
    }
    let mut lenses = Vec::new();
    let mut tally = std::collections::BTreeMap::<&str, usize>::new();
    let (mut planar, mut planar_proper) = (0usize, 0usize);
    for i in 0..charts.len() {
        for j in i + 1..charts.len() {
            let Some((x, y)) = detect_lens(&charts[i].circle, &charts[j].circle)? else {
                continue;
            };
            let (status, planar_lens) = match depth_cycle_at(&charts[i], &charts[j], &x, &y) {
                Ok(v) => {
                    let pl = projections_form_lens(&charts[i], &charts[j], &x, &y)?;
                    if pl {
                        planar += 1;
                        planar_proper += usize::from(v == DepthCycle::Proper);
                    }
                    if a.strict_lemma {
                        o.check(v == DepthCycle::Proper, "lens-proper", || format!("circles {i}, {j}: {v:?}"));
                    }
                    (verdict_name(v), Some(pl))
                }
                Err(CoreError::SplitByExtremal) => ("split", None),
                Err(CoreError::PoleAtExtremal) => ("pole", None),
                Err(e) => return Err(e.into()),
            };
            *tally.entry(status).or_default() += 1;
            lenses.push(json!({ "a": i, "b": j, "points": [x, y], "status": status, "planar_lens": planar_lens }));
        }
    }
    o.check(planar == planar_proper, "planar-lens-proper", || {
        format!("{} of {planar} planar lenses not proper", planar - planar_proper)
    });
    let doc = json!({
        "rotated": rotated,
        "x4": "d2f/d1f",
        "circles": per_circle,
        "lenses": lenses,
        "summary": { "by_status": tally, "planar_lenses": planar, "planar_lenses_proper": planar_proper },
    });
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- cut

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutArgs {
    /// Circles: a JSON array or a family file.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    /// Arcs JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV with columns n, B, cut_count, verified.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub rotation_seed: u64,
}

pub fn cut(a: &CutArgs) -> Result<Outcome> {
    let (rotated, circles) = load_circles(required(&a.input, "in")?, a.rotation_seed)?;
    let cutting = cut_to_pseudosegments(&circles)?;
    let witness = verify_pseudosegments(&cutting.circles)?;
    let n = circles.len();
    let b = max_cospherical_or_coplanar(&circles);
    let verified = witness.is_none();
    let mut o = Outcome::new("cut");
    o.check(verified, "pseudo-segments", || format!("{witness:?}"));
    if let Some(r) = &a.report {
        let row = vec![n.to_string(), b.to_string(), cutting.cut_count.to_string(), verified.to_string()];
        o.file(r, to_csv(&["n", "B", "cut_count", "verified"], &[row]));
    }
    let nf = n as f64;
    let doc = json!({
        "rotated": rotated,
        "n": n,
        "B": b,
        "cut_count": cutting.cut_count,
        "lens_count": cutting.lens_count,
        "verified": verified,
        "witness": witness,
        "bound_form": nf.powf(4.0 / 3.0) + nf * (b as f64).sqrt(),
        "circles": circles.iter().map(CircleRecord::from).collect::<Vec<_>>(),
        "arcs": cutting.arcs(),
    });
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- optimize / scan

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeArgs {
    /// Solve at one α in [0, 1/2].
    #[arg(long, conflicts_with = "scan")]
    pub alpha: Option<Rational>,
    /// Scan α over [0, 1/2] with this step.
    #[arg(long)]
    pub scan: Option<Rational>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Curve CSV (scan only).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanArgs {
    #[arg(long, default_value = "1/100")]
    pub step: Rational,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl Default for ScanArgs {
    fn default() -> Self {
        ScanArgs {
            step: Rational::frac(1, 100),
            out: None,
            csv: None,
        }
    }
}

pub fn optimize(a: &OptimizeArgs) -> Result<Outcome> {
    match (&a.alpha, &a.scan) {
        (Some(alpha), None) => optimize_at(alpha, a.out.as_ref()),
        (None, Some(step)) => scan(&ScanArgs {
            step: step.clone(),
            out: a.out.clone(),
            csv: a.csv.clone(),
        }),
        _ => Err(LabError::Usage("give exactly one of --alpha and --scan".into())),
    }
}

fn optimize_at(alpha: &Rational, out: Option<&PathBuf>) -> Result<Outcome> {
    let cert = certificate(alpha)?;
    let mut o = Outcome::new("optimize");
    o.check(cert.is_valid(&term_table()), "certificate", || "a term exceeds the value".into());
    let mut doc = serde_json::to_value(&cert).expect("certificate serializes");
    if *alpha == reference_point().0 {
        match tightness_report(&cert) {
            Ok(r) => doc["tight_classes"] = json!(r.tight_classes),
            Err(e) => o.check(false, "tight-set", || e.to_string()),
        }
    }
    Ok(o.primary(out, &doc))
}

pub fn scan(a: &ScanArgs) -> Result<Outcome> {
    let s = scan_alpha(&a.step)?;
    let mut o = Outcome::new("scan");
    o.check(s.reference_not_beaten, "reference-not-beaten", || {
        format!("grid value {} at alpha {} is below v(5/17)", s.best_value, s.best_alpha)
    });
    if let Some(p) = &a.csv {
        let rows: Vec<Vec<String>> = s
            .points
            .iter()
            .map(|(al, v)| vec![al.to_string(), v.to_string(), al.to_f64().to_string(), v.to_f64().to_string()])
            .collect();
        o.file(p, to_csv(&["alpha", "value", "alpha_approx", "value_approx"], &rows));
    }
    let doc = json!({
        "step": a.step,
        "points": s.points.iter().map(|(al, v)| json!({ "alpha": al, "value": v })).collect::<Vec<_>>(),
        "best_alpha": s.best_alpha,
        "best_value": s.best_value,
        "reference_value": s.reference_value,
        "reference_not_beaten": s.reference_not_beaten,
        "note": "grid evidence only; the joint problem is not convex in alpha",
    });
    Ok(o.primary(a.out.as_ref(), &doc))
}

// ---------------------------------------------------------------- slope

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlopeArgs {
    /// Series file `[{"n": .., "count": ..}, ..]`; without it the Example 1
    /// family is counted for b in b_min..=b_max.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub b_min: u32,
    #[arg(long, default_value_t = 6)]
    pub b_max: u32,
    /// euclid | dstar (default dstar)
    #[arg(long)]
    pub metric: Option<Metric>,
    /// brute | grid (default grid)
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Assert slope >= min.
    #[arg(long)]
    pub min: Option<f64>,
    /// Assert slope <= max.
    #[arg(long)]
    pub max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for SlopeArgs {
    fn default() -> Self {
        SlopeArgs {
            input: None,
            b_min: 2,
            b_max: 6,
            metric: None,
            engine: None,
            min: None,
            max: None,
            out: None,
        }
    }
}

/// Unordered d*-unit pair counts of Example 1 for each `b`.
pub fn example1_series(bs: impl IntoIterator<Item = u32>, metric: Metric, engine: Engine) -> Result<ScalingSeries> {
    let mut points = Vec::new();
    for b in bs {
        let pts = gen_example1(b)?;
        points.push(SeriesPoint {
            n: pts.len() as u64,
            count: count_unit_pairs(&pts, metric, engine),
        });
    }
    ScalingSeries::new(points)
}

pub fn slope(a: &SlopeArgs) -> Result<Outcome> {
    let metric = a.metric.unwrap_or(Metric::DStar);
    let engine = a.engine.unwrap_or(Engine::Grid);
    let series = match &a.input {
        Some(p) => read_json::<ScalingSeries>(p)?,
        None => example1_series(a.b_min..=a.b_max, metric, engine)?,
    };
    let s = estimate_exponent(&series)?;
    let mut o = Outcome::new("slope");
    if let Some(lo) = a.min {
        o.check(s >= lo, "slope-min", || format!("{s} < {lo}"));
    }
    if let Some(hi) = a.max {
        o.check(s <= hi, "slope-max", || format!("{s} > {hi}"));
    }
    let mut doc = json!({
        "series": series,
        "slope": s,
        "slope_rounded": format!("{s:.9}"),
        "approximate": true,
    });
    if a.input.is_none() {
        doc["family"] = json!({ "kind": "example1", "b_min": a.b_min, "b_max": a.b_max, "metric": metric, "engine": engine });
    }
    Ok(o.primary(a.out.as_ref(), &doc))
}

/// Rational points of a family file, for callers that want a quick check.
pub fn points_of(path: &Path) -> Result<Vec<Point3>> {
    read_points(path)
}

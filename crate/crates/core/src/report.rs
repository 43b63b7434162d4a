//! The full analysis pipeline and its JSON / text rendering.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::{check_four_meridian_criterion, BoundsCheck, InvariantCurveSet, Planes};
use crate::dynamics::{
    meridian_periodicity, meridian_verdicts, parallel_periodicity, parallel_verdicts,
    singular_points, GridOptions, MeridianVerdict, ParallelSide, PeriodicityVerdict,
    SingularAnalysis,
};
use crate::families::{canonical_first_integrals, extract_cubic, matching_families, FamilyTag};
use crate::vfield::{Torus, VectorField};
use crate::{curves, sample};

pub const SCHEMA: &str = "torus-fields/1";

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub px: String,
    pub qy: String,
    pub rz: String,
    pub m: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Param {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub tag: String,
    pub params: Vec<Param>,
    /// Every family the field belongs to, most specific first.
    pub also_matches: Vec<String>,
}

impl FamilyReport {
    fn new(tags: &[FamilyTag]) -> Self {
        let first = &tags[0];
        FamilyReport {
            tag: first.name().to_string(),
            params: first
                .params()
                .into_iter()
                .map(|(name, value)| Param {
                    name: name.to_string(),
                    value,
                })
                .collect(),
            also_matches: tags[1..].iter().map(|t| t.name().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeridianEntry {
    pub plane: String,
    pub a: f64,
    pub b: f64,
    pub multiplicity: u32,
    pub exact: bool,
    /// The two meridians of the plane, at `θ₀` and `θ₀ + π`.
    pub meridians: Vec<MeridianVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeridianReport {
    /// Counted with multiplicity, or `"infinite"`.
    pub count: String,
    pub distinct_count: String,
    /// How the periodicity verdicts were obtained.
    pub method: String,
    pub planes: Vec<MeridianEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParallelCircle {
    pub radius_squared: f64,
    pub verdict: PeriodicityVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParallelEntry {
    pub plane: String,
    pub k: f64,
    pub multiplicity: u32,
    pub exact: bool,
    pub circles: Vec<ParallelCircle>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParallelReport {
    pub count: String,
    pub plane_count: String,
    pub method: String,
    pub planes: Vec<ParallelEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstIntegralEntry {
    pub text: String,
    /// Numerator and denominator, each in the input grammar.
    pub numerator: String,
    pub denominator: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub degree: u32,
    pub meridians: String,
    pub meridian_bound: u32,
    pub parallel_planes: String,
    pub parallel_plane_bound: u32,
    pub holds: bool,
}

/// Seeded numerical cross-check: `|∇F · χ|` at random torus points.
#[derive(Debug, Clone, Serialize)]
pub struct NumericCheck {
    pub seed: u64,
    pub samples: usize,
    pub max_tangency_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub input: InputEcho,
    pub on_torus: bool,
    pub cofactor: Option<String>,
    pub degree: Option<u32>,
    pub family: Option<FamilyReport>,
    pub extactic: Option<String>,
    pub meridians: Option<MeridianReport>,
    pub parallels: Option<ParallelReport>,
    pub first_integrals: Option<Vec<FirstIntegralEntry>>,
    pub singular_set: Option<SingularAnalysis>,
    pub bounds_check: Option<BoundsReport>,
    pub numeric_check: Option<NumericCheck>,
    /// Non-fatal problems met while building the report.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub seed: u64,
    pub grid: GridOptions,
    pub check_samples: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: 0,
            grid: GridOptions::default(),
            check_samples: 256,
        }
    }
}

/// Invariant meridians with periodicity verdicts. Failures are appended to
/// `notes`.
pub fn meridian_report(
    chi: &VectorField,
    torus: &Torus,
    tag: &FamilyTag,
    notes: &mut Vec<String>,
) -> Option<MeridianReport> {
    let set = match curves::invariant_meridians(chi) {
        Ok(s) => s,
        Err(e) => {
            notes.push(format!("meridian search failed: {e}"));
            return None;
        }
    };
    let with_mult = set.with_multiplicity();
    let distinct = set.distinct();
    let double = |c: curves::Count| match c {
        curves::Count::Finite(n) => (2 * n).to_string(),
        curves::Count::Infinite => "infinite".to_string(),
    };
    let planes = match &set {
        Planes::Infinite => {
            return Some(MeridianReport {
                count: "infinite".into(),
                distinct_count: "infinite".into(),
                method: "extactic polynomial vanishes identically".into(),
                planes: Vec::new(),
            })
        }
        Planes::Finite(v) => v,
    };
    let plain: Vec<_> = planes.iter().map(|w| w.plane.clone()).collect();
    let four = matches!(
        tag,
        FamilyTag::Cubic(_)
            | FamilyTag::Quadratic(_)
            | FamilyTag::Kolmogorov(_)
            | FamilyTag::TwoParallel(_)
    )
    .then(|| extract_cubic(chi, torus))
    .flatten()
    .filter(|p| check_four_meridian_criterion(p, torus));
    let (verdicts, method) = match four {
        Some(params) => match meridian_periodicity(&params, torus) {
            Ok(v) => (v, "four-meridian criterion: zeros of K' on each meridian, stability from the sign of theta-dot"),
            Err(e) => {
                notes.push(format!("meridian periodicity failed: {e}"));
                (meridian_verdicts(chi, torus, &plain), "scan of the tangential component")
            }
        },
        None => (meridian_verdicts(chi, torus, &plain), "scan of the tangential component"),
    };
    let entries = planes
        .iter()
        .map(|w| {
            let th0 = w.plane.angle();
            let meridians = verdicts
                .iter()
                .filter(|v| (v.theta - th0).abs() < 1e-9 || (v.theta - th0 - PI).abs() < 1e-9)
                .cloned()
                .collect();
            MeridianEntry {
                plane: w.plane.to_string(),
                a: w.plane.a,
                b: w.plane.b,
                multiplicity: w.multiplicity,
                exact: w.plane.is_exact(),
                meridians,
            }
        })
        .collect();
    Some(MeridianReport {
        count: double(with_mult),
        distinct_count: double(distinct),
        method: method.into(),
        planes: entries,
    })
}

/// Invariant parallels with periodicity verdicts.
pub fn parallel_report(
    chi: &VectorField,
    torus: &Torus,
    tag: &FamilyTag,
    notes: &mut Vec<String>,
) -> Option<ParallelReport> {
    let set = match curves::invariant_parallels(chi) {
        Ok(s) => s,
        Err(e) => {
            notes.push(format!("parallel search failed: {e}"));
            return None;
        }
    };
    let planes = match &set {
        Planes::Infinite => {
            return Some(ParallelReport {
                count: "infinite".into(),
                plane_count: "infinite".into(),
                method: "R vanishes identically".into(),
                planes: Vec::new(),
            })
        }
        Planes::Finite(v) => v,
    };
    let plain: Vec<_> = planes.iter().map(|w| w.plane.clone()).collect();
    let generic = parallel_verdicts(chi, torus, &plain);
    let mut method = "scan of theta-dot on each circle";
    let mut entries: Vec<ParallelEntry> = planes
        .iter()
        .map(|w| ParallelEntry {
            plane: w.plane.to_string(),
            k: w.plane.k,
            multiplicity: w.multiplicity,
            exact: w.plane.exact.is_some(),
            circles: generic
                .iter()
                .filter(|v| v.k == w.plane.k)
                .map(|v| ParallelCircle {
                    radius_squared: v.radius_squared,
                    verdict: v.verdict.clone(),
                })
                .collect(),
        })
        .collect();
    if let FamilyTag::TwoParallel(params) = tag {
        method = "exact zero test of g on the circles via t = tan(theta/2)";
        for e in &mut entries {
            let side = if e.k > 0.0 {
                ParallelSide::Top
            } else {
                ParallelSide::Bottom
            };
            match parallel_periodicity(params, torus, side) {
                Ok(v) => {
                    for c in &mut e.circles {
                        c.verdict = v.clone();
                    }
                }
                Err(err) => notes.push(format!("parallel periodicity failed: {err}")),
            }
        }
    }
    let set_summary = InvariantCurveSet {
        meridian_planes: Planes::Finite(Vec::new()),
        parallel_planes: set.clone(),
    };
    Some(ParallelReport {
        count: set_summary.parallel_count().to_string(),
        plane_count: set.distinct().to_string(),
        method: method.into(),
        planes: entries,
    })
}

fn numeric_check(chi: &VectorField, torus: &Torus, opts: &ReportOptions) -> NumericCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let fl = chi.to_float();
    let grad: Vec<_> = crate::algebra::Var::ALL
        .iter()
        .map(|&v| torus.polynomial().derivative(v).to_float())
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..opts.check_samples {
        let p = sample::torus_point(&mut rng, torus);
        let v = fl.eval(p);
        let r: f64 = (0..3).map(|i| grad[i].eval(p) * v[i]).sum();
        worst = worst.max(r.abs());
    }
    NumericCheck {
        seed: opts.seed,
        samples: opts.check_samples,
        max_tangency_residual: worst,
    }
}

/// Runs every analysis on `χ`. Off-torus fields get a report with
/// `on_torus = false` and nothing else.
pub fn analyse(
    chi: &VectorField,
    torus: &Torus,
    input: InputEcho,
    opts: &ReportOptions,
) -> AnalysisReport {
    let cof = chi.cofactor_on_torus(torus);
    let mut report = AnalysisReport {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        input,
        on_torus: cof.is_invariant(),
        cofactor: cof.cofactor().map(|k| k.to_string()),
        degree: chi.degree(),
        family: None,
        extactic: None,
        meridians: None,
        parallels: None,
        first_integrals: None,
        singular_set: None,
        bounds_check: None,
        numeric_check: None,
        notes: Vec::new(),
    };
    if !report.on_torus {
        return report;
    }
    let tags = matching_families(chi, torus);
    let tag = tags[0].clone();
    let mut notes = Vec::new();
    report.family = Some(FamilyReport::new(&tags));
    report.extactic = Some(curves::extactic_xy(chi).to_string());
    report.meridians = meridian_report(chi, torus, &tag, &mut notes);
    report.parallels = parallel_report(chi, torus, &tag, &mut notes);
    report.first_integrals = Some(
        tags.iter()
            .find_map(|t| canonical_first_integrals(t, torus).ok())
            .unwrap_or_default()
            .into_iter()
            .map(|h| FirstIntegralEntry {
                verified: chi.check_first_integral(&h),
                text: h.to_string(),
                numerator: h.num.to_string(),
                denominator: h.den.to_string(),
            })
            .collect(),
    );
    match singular_points(chi, &tag, torus, opts.grid) {
        Ok(s) => report.singular_set = Some(s),
        Err(e) => notes.push(format!("singular-point search failed: {e}")),
    }
    if let Ok(set) = InvariantCurveSet::of(chi) {
        let b = BoundsCheck::new(chi.degree().unwrap_or(0), &set);
        report.bounds_check = Some(BoundsReport {
            degree: b.degree,
            meridians: b.meridians.to_string(),
            meridian_bound: b.meridian_bound,
            parallel_planes: b.parallel_planes.to_string(),
            parallel_plane_bound: b.parallel_plane_bound,
            holds: b.holds(),
        });
    }
    report.numeric_check = Some(numeric_check(chi, torus, opts));
    report.notes = notes;
    report
}

pub fn verdict_text(v: &PeriodicityVerdict) -> String {
    match v {
        PeriodicityVerdict::PeriodicOrbit => "periodic orbit".into(),
        PeriodicityVerdict::LimitCycle { stability } => {
            format!("{stability:?} limit cycle").to_lowercase()
        }
        PeriodicityVerdict::NotPeriodic { witness } => format!(
            "not periodic (zero at parameter {:.9}, point ({:.6}, {:.6}, {:.6}))",
            witness.parameter, witness.point[0], witness.point[1], witness.point[2]
        ),
        PeriodicityVerdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

impl MeridianReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "meridians: {} (distinct {})",
            self.count, self.distinct_count
        );
        for p in &self.planes {
            let _ = writeln!(
                s,
                "  {}  multiplicity {}{}",
                p.plane,
                p.multiplicity,
                if p.exact { "" } else { " (numeric)" }
            );
            for v in &p.meridians {
                let _ = writeln!(
                    s,
                    "    theta = {:.6}: {}",
                    v.theta,
                    verdict_text(&v.verdict)
                );
            }
        }
        s
    }
}

impl ParallelReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "parallels: {} on {} planes",
            self.count, self.plane_count
        );
        for e in &self.planes {
            let _ = writeln!(s, "  {}  multiplicity {}", e.plane, e.multiplicity);
            for c in &e.circles {
                let _ = writeln!(
                    s,
                    "    x^2 + y^2 = {:.6}: {}",
                    c.radius_squared,
                    verdict_text(&c.verdict)
                );
            }
        }
        s
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        let _ = writeln!(
            s,
            "field   P = {}\n        Q = {}\n        R = {}\n        m = {}",
            i.px, i.qy, i.rz, i.m
        );
        if !self.on_torus {
            let _ = writeln!(s, "NOT on torus");
            return s;
        }
        let _ = writeln!(
            s,
            "on torus, cofactor K = {}",
            self.cofactor.as_deref().unwrap_or("?")
        );
        if let Some(f) = &self.family {
            let params: Vec<String> = f
                .params
                .iter()
                .map(|p| format!("{} = {}", p.name, p.value))
                .collect();
            let _ = writeln!(s, "family  {} {}", f.tag, params.join(", "));
            if !f.also_matches.is_empty() {
                let _ = writeln!(s, "        also: {}", f.also_matches.join(", "));
            }
        }
        if let Some(e) = &self.extactic {
            let _ = writeln!(s, "extactic Qx - Py = {e}");
        }
        if let Some(m) = &self.meridians {
            s.push_str(&m.to_text());
        }
        if let Some(p) = &self.parallels {
            s.push_str(&p.to_text());
        }
        if let Some(fi) = &self.first_integrals {
            for h in fi {
                let _ = writeln!(
                    s,
                    "first integral {}: {}",
                    h.text,
                    if h.verified { "verified" } else { "FAILED" }
                );
            }
        }
        if let Some(sg) = &self.singular_set {
            let _ = writeln!(
                s,
                "singular set ({}): {}",
                serde_json::to_value(sg.method)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
                serde_json::to_string(&sg.set).unwrap_or_default()
            );
            for w in &sg.warnings {
                let _ = writeln!(s, "  warning: {w}");
            }
        }
        if let Some(b) = &self.bounds_check {
            let _ = writeln!(
                s,
                "bounds: {} meridians <= {}, {} parallel planes <= {}: {}",
                b.meridians,
                b.meridian_bound,
                b.parallel_planes,
                b.parallel_plane_bound,
                if b.holds { "ok" } else { "VIOLATED" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

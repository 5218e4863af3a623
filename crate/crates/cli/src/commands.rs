use std::f64::consts::PI;
use std::fmt::Write as _;

use canonforge_core::analysis::{
    character_check, expected_norm_constant, gate_check, norm_integral_check, norm_relation_check, transfer_phase,
    verify_translation, GateSpec, TranslationOptions, PRINTED_NORM_CONSTANT,
};
use canonforge_core::canon::{bell_w, hcrc, hrc_breakpoints, recover_two_level, ConjugatingMatrix, WSpec};
use canonforge_core::linalg::{c64, from_rows};
use canonforge_core::propagate::{propagate_provider, propagate_scheme, PropagationResult};
use canonforge_core::schemes::{frame_rotate_z, PaceFunction, TwoLevelScheme};
use canonforge_core::su2::{eta, random_axis, Vec3};
use canonforge_core::{base_seed, ComplexMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::sources::{load_scheme, load_w, read_file, LoadedScheme};
use crate::{emit, CliError, GateArg, SimulateArgs, TranslateArgs, VerifyArgs, WArgs};

const CLAIM_FAILED: u8 = 3;
const CHARACTER_AXES: usize = 10;
const NORM_SAMPLES: usize = 200;
const NORM_POINTS: usize = 10_000;
const NORM_STD_TOL: f64 = 1e-10;
const NORM_INTEGRAL_TOL: f64 = 1e-6;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_text(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// The scheme after optional phase alignment, with the step count to use.
fn prepared(
    loaded: &LoadedScheme,
    steps: Option<usize>,
    align: bool,
) -> Result<(TwoLevelScheme, usize, Option<f64>), CliError> {
    let steps = steps.unwrap_or_else(|| loaded.default_steps());
    if !align {
        return Ok((loaded.scheme.clone(), steps, None));
    }
    let alpha = transfer_phase(&loaded.scheme, steps)?;
    Ok((frame_rotate_z(&loaded.scheme, alpha), steps, Some(alpha)))
}

fn w_or_default(args: &WArgs, loaded: Option<&LoadedScheme>) -> Result<ConjugatingMatrix, CliError> {
    match &args.w {
        Some(spec) => load_w(spec, args.n, args.axis.as_deref(), loaded),
        None => Ok(bell_w()),
    }
}

fn populations_csv(res: &PropagationResult, source: usize, with_eta: bool) -> Result<String, CliError> {
    let m = res.dim();
    let mut out = String::from("t");
    for i in 1..=m {
        let _ = write!(out, ",pop_{i}");
    }
    if with_eta {
        out.push_str(",eta_x,eta_y,eta_z");
    }
    out.push('\n');
    for (t, u) in res.times.iter().zip(&res.samples) {
        out.push_str(&num(*t));
        for i in 0..m {
            out.push(',');
            out.push_str(&num(u[(i, source)].norm_sqr()));
        }
        if with_eta {
            for x in eta(u)? {
                out.push(',');
                out.push_str(&num(x));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn simulate(a: &SimulateArgs) -> Result<u8, CliError> {
    let loaded = load_scheme(&a.scheme)?;
    let (s, steps, _) = prepared(&loaded, a.steps, a.align_phase)?;
    let csv = if a.w.w.is_some() {
        let w = w_or_default(&a.w, Some(&loaded))?;
        let pace = s.pace_or_identity();
        let t_end = s.total.min((s.total - pace.b) / pace.a);
        let breaks = hrc_breakpoints(&s, &pace, t_end);
        let res = propagate_provider(|t| hcrc(&s, &pace, &w, t), t_end, steps, &breaks)?;
        populations_csv(&res, w.source, false)?
    } else {
        let n = a.w.n.unwrap_or(2);
        populations_csv(&propagate_scheme(&s, n, steps)?, 0, n == 2)?
    };
    emit(a.out.as_deref(), &csv)?;
    Ok(0)
}

/// Conjugated canon samples, as written by `translate` and read back by
/// `translate --reverse`.
#[derive(Debug, Serialize, Deserialize)]
struct CanonSamples {
    tau: f64,
    #[serde(default)]
    breakpoints: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<WSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pace: Option<PaceFunction>,
    samples: Vec<Sample>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sample {
    t: f64,
    /// Rows of `[re, im]` pairs.
    matrix: Vec<Vec<[f64; 2]>>,
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

fn from_sample(s: &Sample, dim: usize) -> Result<ComplexMatrix, CliError> {
    if s.matrix.len() != dim || s.matrix.iter().any(|row| row.len() != dim) {
        return Err(CliError::Input(format!("sample at t = {} is not {dim}×{dim}", s.t)));
    }
    let flat: Vec<_> = s.matrix.iter().flatten().map(|p| c64(p[0], p[1])).collect();
    Ok(from_rows(dim, dim, &flat))
}

fn knots(tau: f64, breakpoints: &[f64]) -> Vec<f64> {
    let eps = 1e-12 * tau.max(1.0);
    let mut k: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > eps && b < tau - eps).collect();
    k.push(0.0);
    k.push(tau);
    k.sort_by(f64::total_cmp);
    k.dedup_by(|a, b| (*a - *b).abs() <= eps);
    k
}

pub fn translate(a: &TranslateArgs) -> Result<u8, CliError> {
    if a.reverse {
        return translate_reverse(a);
    }
    let loaded = load_scheme(&a.scheme)?;
    let s = &loaded.scheme;
    let w = w_or_default(&a.w, Some(&loaded))?;
    let pace = s.pace_or_identity();
    let tau = pace.meeting_time(s.total)?;
    let breakpoints = hrc_breakpoints(s, &pace, tau);
    let pieces = knots(tau, &breakpoints);
    // the uniform grid plus two interior points of every smooth piece; piece
    // ends are avoided by the reverse fit since one half of the canon sits on
    // a segment boundary there
    let mut times: Vec<f64> = (0..a.samples).map(|i| tau * i as f64 / a.samples as f64).collect();
    for p in pieces.windows(2) {
        times.push(p[0] + 0.25 * (p[1] - p[0]));
        times.push(p[0] + 0.75 * (p[1] - p[0]));
    }
    times.sort_by(f64::total_cmp);
    times.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * tau.max(1.0));
    let samples = times
        .iter()
        .map(|&t| Ok(Sample { t, matrix: to_rows(&hcrc(s, &pace, &w, t)?) }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let doc = CanonSamples { tau, breakpoints, w: Some(w.to_spec()), pace: Some(pace), samples };
    emit(a.out.as_deref(), &json_text(&doc))?;
    Ok(0)
}

/// One straight line per smooth piece, through its first and last interior
/// sample.
struct PiecewiseLinear {
    pieces: Vec<(f64, f64, ComplexMatrix, ComplexMatrix)>,
}

impl PiecewiseLinear {
    fn fit(doc: &CanonSamples, dim: usize) -> Result<Self, CliError> {
        let bounds = knots(doc.tau, &doc.breakpoints);
        let eps = 1e-12 * doc.tau.max(1.0);
        let mut pieces = Vec::new();
        for p in bounds.windows(2) {
            let inside: Vec<&Sample> = doc.samples.iter().filter(|s| s.t > p[0] + eps && s.t < p[1] - eps).collect();
            let (Some(first), Some(last)) = (inside.first(), inside.last()) else {
                return Err(CliError::Input(format!("no samples inside ({}, {})", p[0], p[1])));
            };
            let (m0, m1) = (from_sample(first, dim)?, from_sample(last, dim)?);
            let slope =
                if inside.len() > 1 { (&m1 - &m0) * c64(1.0 / (last.t - first.t), 0.0) } else { &m0 * c64(0.0, 0.0) };
            let at_start = &m0 - &slope * c64(first.t - p[0], 0.0);
            pieces.push((p[0], p[1], at_start, slope));
        }
        Ok(Self { pieces })
    }

    fn at(&self, t: f64) -> ComplexMatrix {
        let (lo, _, m0, slope) =
            self.pieces.iter().find(|p| t < p.1).unwrap_or_else(|| self.pieces.last().expect("one piece"));
        m0 + slope * c64(t - lo, 0.0)
    }
}

fn translate_reverse(a: &TranslateArgs) -> Result<u8, CliError> {
    let path = a.input.as_deref().expect("clap enforces --input");
    let doc: CanonSamples =
        serde_json::from_str(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let w = match (&a.w.w, &doc.w) {
        (Some(spec), _) => load_w(spec, a.w.n, a.w.axis.as_deref(), None)?,
        (None, Some(spec)) => spec.build()?,
        (None, None) => return Err(CliError::Input("samples carry no W; pass --w".into())),
    };
    if doc.samples.is_empty() {
        return Err(CliError::Input("no samples".into()));
    }
    let fit = PiecewiseLinear::fit(&doc, w.dim())?;
    let mut scheme = recover_two_level(|t| Ok(fit.at(t)), doc.tau, &w, &doc.breakpoints)?;
    scheme.pace = doc.pace.filter(|p| *p != PaceFunction::identity());
    let mut text = scheme.to_json();
    text.push('\n');
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

pub fn verify(a: &VerifyArgs) -> Result<u8, CliError> {
    if a.character {
        return verify_character(a);
    }
    let loaded = load_scheme(&a.scheme)?;
    let (s, steps, alpha) = prepared(&loaded, a.steps, a.align_phase)?;
    let mut config = json!({
        "scheme": s,
        "steps": steps,
        "frame_alpha": alpha,
    });
    let (mut value, passed) = if let Some(gate) = a.gate {
        let (spec, default_theta) = match gate {
            GateArg::Entangling => (GateSpec::EntanglingR, 0.0),
            GateArg::DoubleRail => (GateSpec::DoubleRail, PI / 4.0),
        };
        let theta = a.theta.unwrap_or(default_theta);
        config["theta"] = json!(theta);
        let report = gate_check(&s, theta, spec, steps)?;
        (serde_json::to_value(&report).expect("serializes"), report.matches)
    } else if a.norm {
        let w = w_or_default(&a.w, Some(&loaded))?;
        config["w"] = json!(w.to_spec());
        norm_report(&s, &w)?
    } else {
        let w = w_or_default(&a.w, Some(&loaded))?;
        let pace = s.pace_or_identity();
        let opts = TranslationOptions { steps, tolerance: a.tolerance, ..TranslationOptions::default() };
        config["w"] = json!(w.to_spec());
        config["pace"] = json!(pace);
        config["tolerance"] = json!(a.tolerance);
        let report = verify_translation(&s, &pace, &w, &opts)?;
        (serde_json::to_value(&report).expect("serializes"), report.claim_holds)
    };
    value["config"] = config;
    emit(a.out.as_deref(), &json_text(&value))?;
    Ok(if passed { 0 } else { CLAIM_FAILED })
}

fn norm_report(s: &TwoLevelScheme, w: &ConjugatingMatrix) -> Result<(serde_json::Value, bool), CliError> {
    let mut ratios = Vec::new();
    for i in 0..NORM_SAMPLES {
        let r = norm_relation_check(s, w, s.total * (i as f64 + 0.5) / NORM_SAMPLES as f64)?;
        if r.rhs > 1e-9 {
            ratios.push(r.ratio);
        }
    }
    if ratios.is_empty() {
        return Err(CliError::Input("the scheme vanishes on every sample".into()));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let std = (ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / ratios.len() as f64).sqrt();
    let integral = norm_integral_check(s, w, NORM_POINTS)?;
    let integral_error = (integral.constant_sq - mean * mean).abs() / (mean * mean);
    let passed = std < NORM_STD_TOL && integral_error < NORM_INTEGRAL_TOL;
    let value = json!({
        "measured_constant": mean,
        "ratio_std": std,
        "samples": ratios.len(),
        "expected_constant": expected_norm_constant(w.n),
        "printed_constant": PRINTED_NORM_CONSTANT,
        "integral": integral,
        "integral_relative_error": integral_error,
        "passes": passed,
    });
    Ok((value, passed))
}

fn verify_character(a: &VerifyArgs) -> Result<u8, CliError> {
    let (n, k) = (a.w.n.expect("clap enforces --n"), a.k.expect("clap enforces --k"));
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed());
    let axes: Vec<Vec3> = (0..CHARACTER_AXES).map(|_| random_axis(&mut rng)).collect();
    let report = character_check(n, k, &axes)?;
    let mut value = serde_json::to_value(&report).expect("serializes");
    value["config"] = json!({ "seed": base_seed(), "axes": axes });
    emit(a.out.as_deref(), &json_text(&value))?;
    Ok(if report.passes { 0 } else { CLAIM_FAILED })
}

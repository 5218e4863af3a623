//! Scheme, pace and conjugating-matrix sources given on the command line.

use std::fs;
use std::path::Path;

use canonforge_core::canon::{
    bell_w, example_w, general_four_w, general_w_n, operator_w, pythagorean_theta, ConjugatingMatrix, GeneralFormParams,
};
use canonforge_core::propagate::{DEFAULT_STEPS, LZ_STEPS};
use canonforge_core::schemes::{landau_zener_scheme, pythagorean_scheme, PaceFunction, TwoLevelScheme};
use canonforge_core::su2::{Vec3, Y_AXIS};

use crate::{CliError, SchemeArgs};

/// A scheme together with the built-in it came from, if any.
pub struct LoadedScheme {
    pub scheme: TwoLevelScheme,
    pub pythagorean: Option<(i64, i64)>,
    pub landau_zener: bool,
}

impl LoadedScheme {
    pub fn default_steps(&self) -> usize {
        if self.landau_zener {
            LZ_STEPS
        } else {
            DEFAULT_STEPS
        }
    }
}

pub fn parse_floats(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("{what}: cannot parse `{text}`")))?;
    if values.len() != expected {
        return Err(CliError::Input(format!(
            "{what}: expected {expected} comma-separated values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("{what}: values must be finite")));
    }
    Ok(values)
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_scheme(args: &SchemeArgs) -> Result<LoadedScheme, CliError> {
    let mut loaded = if let Some(path) = &args.scheme {
        LoadedScheme { scheme: TwoLevelScheme::from_json(&read_file(path)?)?, pythagorean: None, landau_zener: false }
    } else if let Some(pq) = &args.pythagorean {
        let (p, q) = match pq.split(',').map(|v| v.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>() {
            Ok(v) if v.len() == 2 => (v[0], v[1]),
            _ => return Err(CliError::Input(format!("--pythagorean: expected two integers p,q, got `{pq}`"))),
        };
        LoadedScheme { scheme: pythagorean_scheme(p, q)?, pythagorean: Some((p, q)), landau_zener: false }
    } else if let Some(lz) = &args.lz {
        let v = parse_floats(lz, 3, "--lz")?;
        LoadedScheme { scheme: landau_zener_scheme(v[0], v[1], v[2])?, pythagorean: None, landau_zener: true }
    } else {
        return Err(CliError::Input("no scheme given (use --scheme, --pythagorean or --lz)".into()));
    };
    if let Some(pace) = &args.pace {
        let v = parse_floats(pace, 2, "--pace")?;
        loaded.scheme.pace = Some(PaceFunction::affine(v[0], v[1])?);
    }
    Ok(loaded)
}

pub fn parse_axis(text: Option<&str>) -> Result<Vec3, CliError> {
    match text {
        None => Ok(Y_AXIS),
        Some(t) => {
            let v = parse_floats(t, 3, "--axis")?;
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm == 0.0 {
                return Err(CliError::Input("--axis must be nonzero".into()));
            }
            Ok([v[0] / norm, v[1] / norm, v[2] / norm])
        }
    }
}

/// Builds `W` from `bell`, `example:auto|θ`, `operator:θ`,
/// `general4:φ₂,φ₃,φ₄,θ`, `general:k` or a JSON file path.
pub fn load_w(
    spec: &str,
    n: Option<usize>,
    axis: Option<&str>,
    scheme: Option<&LoadedScheme>,
) -> Result<ConjugatingMatrix, CliError> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let w = match name {
        "bell" if arg.is_empty() => bell_w(),
        "example" if arg == "auto" => {
            let (p, q) = scheme.and_then(|s| s.pythagorean).ok_or_else(|| {
                CliError::Input("example:auto needs a --pythagorean scheme; give θ explicitly otherwise".into())
            })?;
            example_w(pythagorean_theta(p, q))
        }
        "example" => example_w(parse_floats(arg, 1, "example θ")?[0]),
        "operator" => operator_w(parse_floats(arg, 1, "operator θ")?[0]),
        "general4" => {
            let v = parse_floats(arg, 4, "general4 φ₂,φ₃,φ₄,θ")?;
            general_four_w(&GeneralFormParams { phi2: v[0], phi3: v[1], phi4: v[2], theta: v[3] })
        }
        "general" => {
            let k = arg
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("general:k needs an integer, got `{arg}`")))?;
            let n = n.ok_or_else(|| CliError::Input("general:k needs --n".into()))?;
            general_w_n(n, k, parse_axis(axis)?)?
        }
        _ => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(CliError::Input(format!("unknown W `{spec}` (not a family and no such file)")));
            }
            ConjugatingMatrix::from_json(&read_file(path)?)?
        }
    };
    Ok(w)
}

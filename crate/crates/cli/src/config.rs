//! Line-oriented sweep configuration files.
//!
//! See [`GRAMMAR`] for the accepted syntax. [`emit`] writes a spec back in
//! the same grammar such that `parse(&emit(spec)) == spec`.

use friction_phase::experiments::{Axis, AxisPoints, Parameter, Scale, SweepSpec, Target};
use friction_phase::quadrature::{QuadratureMethod, QuadratureSpec};

use crate::number::{format_f64, parse_real};

pub const GRAMMAR: &str = "\
Sweep configuration grammar (one `key = value` per line, `#` starts a comment):

  name       = <label>                      dataset name (default: sweep)
  target     = decoherence_factor | decoherence_time | gp_exact
               | gp_normalized | gp_perturbative_ratio
  quadrature = adaptive-simpson | gauss-legendre   (default adaptive-simpson)
  tolerance  = <real>                       quadrature tolerance (default 1e-10)
  max_depth  = <int>                        adaptive-simpson depth (default 40)
  nodes      = <int>                        gauss-legendre nodes (default 256)
  error_rows = true | false                 record failing points instead of aborting
  note       = <text>                       free text, repeatable
  gamma0 | lambda | omega | velocity | theta | time = <real>
                                            fixed parameter value

  [axis.<parameter>]                        one section per swept parameter;
  min   = <real>                            sections are nested outermost first
  max   = <real>
  count = <int>                             at least 2
  scale = linear | log                      (default linear)
  values = <real>, <real>, ...              explicit list instead of min/max/count

Reals accept a `pi` suffix (`0.25pi`, `4pi`). Phase targets integrate over one
period (time = 2pi) unless `time` is given.";

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Default)]
struct AxisDraft {
    parameter: Option<Parameter>,
    line: usize,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    scale: Option<Scale>,
    values: Option<Vec<f64>>,
}

impl AxisDraft {
    fn finish(self) -> Result<Axis, ParseError> {
        let parameter = self.parameter.expect("axis section has a parameter");
        let err = |message: String| ParseError {
            line: self.line,
            message,
        };
        if let Some(values) = self.values {
            if self.min.is_some()
                || self.max.is_some()
                || self.count.is_some()
                || self.scale.is_some()
            {
                return Err(err(format!(
                    "axis.{parameter}: `values` cannot be combined with min/max/count/scale"
                )));
            }
            return Ok(Axis {
                parameter,
                points: AxisPoints::Values(values),
            });
        }
        match (self.min, self.max, self.count) {
            (Some(min), Some(max), Some(count)) => Ok(Axis {
                parameter,
                points: AxisPoints::Range {
                    min,
                    max,
                    count,
                    scale: self.scale.unwrap_or(Scale::Linear),
                },
            }),
            _ => Err(err(format!(
                "axis.{parameter}: needs min, max and count (or values)"
            ))),
        }
    }
}

/// Parses a configuration file into a sweep spec. Domain checks happen in
/// [`SweepSpec::validate`], not here.
pub fn parse(text: &str) -> Result<SweepSpec, ParseError> {
    let mut name = String::from("sweep");
    let mut target: Option<Target> = None;
    let mut fixed: Vec<(Parameter, f64)> = Vec::new();
    let mut axes: Vec<Axis> = Vec::new();
    let mut notes = Vec::new();
    let mut method = QuadratureMethod::AdaptiveSimpson;
    let mut quad = QuadratureSpec::<f64>::default();
    let mut error_rows = false;
    let mut current: Option<AxisDraft> = None;
    let mut saw_content = false;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let err = |message: String| ParseError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        saw_content = true;
        if let Some(section) = content.strip_prefix('[') {
            let section = section
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header".into()))?
                .trim();
            let param = section.strip_prefix("axis.").ok_or_else(|| {
                err(format!(
                    "unknown section `[{section}]` (expected [axis.<parameter>])"
                ))
            })?;
            let parameter: Parameter = param
                .trim()
                .parse()
                .map_err(|e: friction_phase::Error| err(strip(e)))?;
            if let Some(done) = current.take() {
                axes.push(done.finish()?);
            }
            if axes.iter().any(|a| a.parameter == parameter) {
                return Err(err(format!("axis.{parameter} defined twice")));
            }
            current = Some(AxisDraft {
                parameter: Some(parameter),
                line,
                ..AxisDraft::default()
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let real = || parse_real(value).map_err(&err);
        let int = || {
            value
                .parse::<usize>()
                .map_err(|_| err(format!("`{value}` is not a non-negative integer")))
        };

        if let Some(axis) = current.as_mut() {
            match key {
                "min" => axis.min = Some(real()?),
                "max" => axis.max = Some(real()?),
                "count" => axis.count = Some(int()?),
                "scale" => {
                    axis.scale = Some(
                        value
                            .parse()
                            .map_err(|e: friction_phase::Error| err(strip(e)))?,
                    )
                }
                "values" => {
                    let list = value
                        .split(',')
                        .map(|v| parse_real(v).map_err(&err))
                        .collect::<Result<Vec<_>, _>>()?;
                    axis.values = Some(list);
                }
                other => return Err(err(format!("unknown axis key `{other}`"))),
            }
            continue;
        }
        match key {
            "name" => name = value.to_string(),
            "target" => {
                target = Some(
                    value
                        .parse()
                        .map_err(|e: friction_phase::Error| err(strip(e)))?,
                )
            }
            "quadrature" => {
                method = match value {
                    "adaptive-simpson" | "simpson" => QuadratureMethod::AdaptiveSimpson,
                    "gauss-legendre" => QuadratureMethod::GaussLegendre,
                    other => return Err(err(format!("unknown quadrature `{other}`"))),
                }
            }
            "tolerance" => quad.tolerance = real()?,
            "max_depth" => quad.max_depth = int()? as u32,
            "nodes" => quad.nodes = int()?,
            "error_rows" => {
                error_rows = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(err(format!(
                            "error_rows must be true or false, found `{other}`"
                        )))
                    }
                }
            }
            "note" => notes.push(value.to_string()),
            other => {
                let parameter: Parameter = other
                    .parse()
                    .map_err(|_| err(format!("unknown key `{other}`")))?;
                if fixed.iter().any(|(p, _)| *p == parameter) {
                    return Err(err(format!("{parameter} set twice")));
                }
                fixed.push((parameter, real()?));
            }
        }
    }
    if !saw_content {
        return Err(ParseError {
            line: 0,
            message: format!("empty configuration\n\n{GRAMMAR}"),
        });
    }
    if let Some(done) = current.take() {
        axes.push(done.finish()?);
    }
    let target = target.ok_or(ParseError {
        line: 0,
        message: "missing `target`".into(),
    })?;
    quad.method = method;
    let mut s = SweepSpec::new(name, target);
    s.axes = axes;
    s.fixed = fixed;
    s.quadrature = quad;
    s.error_rows = error_rows;
    s.notes = notes;
    Ok(s)
}

fn strip(e: friction_phase::Error) -> String {
    match e {
        friction_phase::Error::InvalidSpec(m) => m,
        other => other.to_string(),
    }
}

/// Writes `spec` in the configuration grammar.
pub fn emit(spec: &SweepSpec) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("name = {}", spec.name));
    line(format!("target = {}", spec.target));
    line(format!("quadrature = {}", spec.quadrature.method.name()));
    line(format!(
        "tolerance = {}",
        format_f64(spec.quadrature.tolerance)
    ));
    line(format!("max_depth = {}", spec.quadrature.max_depth));
    line(format!("nodes = {}", spec.quadrature.nodes));
    line(format!("error_rows = {}", spec.error_rows));
    for note in &spec.notes {
        line(format!("note = {note}"));
    }
    for (p, v) in &spec.fixed {
        line(format!("{p} = {}", format_f64(*v)));
    }
    for axis in &spec.axes {
        line(String::new());
        line(format!("[axis.{}]", axis.parameter));
        match &axis.points {
            AxisPoints::Range {
                min,
                max,
                count,
                scale,
            } => {
                line(format!("min = {}", format_f64(*min)));
                line(format!("max = {}", format_f64(*max)));
                line(format!("count = {count}"));
                line(format!("scale = {}", scale.name()));
            }
            AxisPoints::Values(values) => {
                let items: Vec<String> = values.iter().map(|v| format_f64(*v)).collect();
                line(format!("values = {}", items.join(", ")));
            }
        }
    }
    out
}

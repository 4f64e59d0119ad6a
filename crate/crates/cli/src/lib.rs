//! JSON request/response front end for `zeromap-core`.
//!
//! One request per call. Responses are plain `serde_json` values, whose maps
//! keep keys sorted, so identical requests give byte-identical output.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use zeromap_core::catalog::{make_transform, Family, NamedParams, ParamValue, TransformSpec};
use zeromap_core::moments::{moment_closed, moment_oracle_with};
use zeromap_core::poly::{isolate_real_roots, refine_root, Polynomial};
use zeromap_core::scalar::{Scalar, MIN_PRECISION};
use zeromap_core::verify::{verify_spec, Tolerances};
use zeromap_core::{apply_zero_map, Error};

pub const DEFAULT_SEED: u64 = 0;
/// Random root multisets drawn by `verify` unless the request says otherwise.
pub const DEFAULT_VERIFY_COUNT: usize = 200;
/// Root intervals are refined to this width (`2^-40`) before output.
const ROOT_WIDTH_LOG2: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Transform,
    Moments,
    Verify,
    Roots,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformRequest {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    pub roots: Option<Vec<String>>,
    pub coeffs: Option<Vec<String>>,
    /// Parameters for `moments`.
    pub mus: Option<Vec<String>>,
    /// Largest `k` for `moments` (default 6).
    pub k_max: Option<usize>,
    /// Random instances for `verify`.
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Command,
    pub transform: Option<TransformRequest>,
    pub input: Option<Input>,
    pub precision_bits: Option<u32>,
    /// Overrides keyed `ratio` (absolute) and `series` (relative), as
    /// rational strings.
    pub tolerances: Option<BTreeMap<String, String>>,
}

/// Settings that come from the command line rather than the request.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub precision_bits: Option<u32>,
    pub seed: Option<u64>,
}

/// Errors reported to the caller, each with a stable code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
}

impl Failure {
    fn bad_request(message: impl Into<String>) -> Self {
        Failure { code: "bad_request", message: message.into() }
    }

    /// Exit status: 1 for problems with the request, 2 for internal errors.
    pub fn exit_code(&self) -> i32 {
        match self.code {
            "bad_request" | "invalid_params" | "degenerate_basis" => 1,
            _ => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DegenerateBasis => "degenerate_basis",
            Error::InvalidParams { .. }
            | Error::MissingParam { .. }
            | Error::MalformedSchedule(_)
            | Error::OutsideDomain { .. }
            | Error::DegreeExceedsBasis { .. }
            | Error::Pole { .. }
            | Error::PrecisionTooLow(_) => "invalid_params",
            Error::Parse(_) | Error::ZeroPolynomial { .. } => "bad_request",
            _ => "internal",
        };
        Failure { code, message: e.to_string() }
    }
}

pub struct Outcome {
    pub response: Value,
    pub exit_code: i32,
}

/// Parses and runs one request given as JSON text.
pub fn run_json(text: &str, opts: &Options) -> Outcome {
    let result = serde_json::from_str::<Request>(text)
        .map_err(|e| Failure::bad_request(format!("invalid request: {e}")))
        .and_then(|req| run(&req, opts));
    match result {
        Ok(body) => {
            let mut m = body;
            m.insert("status".into(), json!("ok"));
            Outcome { response: Value::Object(m), exit_code: 0 }
        }
        Err(f) => Outcome { response: error_response(&f), exit_code: f.exit_code() },
    }
}

pub fn error_response(f: &Failure) -> Value {
    json!({"status": "error", "error": {"code": f.code, "message": f.message}})
}

fn precision(req: &Request, opts: &Options) -> Result<u32, Failure> {
    let p = opts.precision_bits.or(req.precision_bits).unwrap_or(zeromap_core::DEFAULT_PRECISION);
    if p < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(p).into());
    }
    Ok(p)
}

/// Dispatches a parsed request; returns the response fields other than
/// `status`.
pub fn run(req: &Request, opts: &Options) -> Result<Map<String, Value>, Failure> {
    let prec = precision(req, opts)?;
    let mut out = Map::new();
    match req.command {
        Command::Transform => {
            let spec = spec_of(req)?;
            let p = polynomial_of(req)?;
            let image = apply_zero_map(&p, &spec)?;
            out.insert("output_coeffs".into(), strings(image.coeffs()));
            out.insert("root_intervals".into(), root_intervals(&image)?);
        }
        Command::Roots => {
            let p = polynomial_of(req)?;
            out.insert("root_intervals".into(), root_intervals(&p)?);
        }
        Command::Moments => {
            let spec = spec_of(req)?;
            let input = req.input.clone().unwrap_or_default();
            let mus = input
                .mus
                .ok_or_else(|| Failure::bad_request("moments needs input.mus"))?
                .iter()
                .map(|s| parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let k_max = input.k_max.unwrap_or(6);
            let mut rows = Vec::new();
            for mu in &mus {
                for k in 0..=k_max {
                    let closed = moment_closed(&spec, k, mu)?;
                    let oracle = moment_oracle_with(&spec, k, mu, prec)?;
                    rows.push(json!({
                        "k": k,
                        "mu": mu.to_string(),
                        "closed": closed.to_string(),
                        "oracle": oracle.value.to_string(),
                        "oracle_error_bound": oracle.error_bound.to_string(),
                    }));
                }
            }
            out.insert("moments".into(), Value::Array(rows));
        }
        Command::Verify => {
            let spec = spec_of(req)?;
            let seed = opts.seed.unwrap_or(DEFAULT_SEED);
            let count = req.input.as_ref().and_then(|i| i.count).unwrap_or(DEFAULT_VERIFY_COUNT);
            let tol = tolerances(req)?;
            let report = verify_spec(&spec, count, seed, prec, &tol)?;
            let passed = report.all_passed();
            let mut v = serde_json::to_value(&report).map_err(|e| Failure { code: "internal", message: e.to_string() })?;
            if let Value::Object(m) = &mut v {
                m.insert("all_passed".into(), json!(passed));
                m.insert("seed".into(), json!(seed));
            }
            out.insert("report".into(), v);
        }
    }
    Ok(out)
}

fn parse(s: &str) -> Result<Scalar, Failure> {
    Scalar::parse_literal(s).map_err(|_| Failure::bad_request(format!("`{s}` is not a rational literal")))
}

fn strings(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

fn spec_of(req: &Request) -> Result<TransformSpec, Failure> {
    let t = req
        .transform
        .as_ref()
        .ok_or_else(|| Failure::bad_request("this command needs a transform"))?;
    let family: Family = t
        .family
        .parse()
        .map_err(|_| Failure::bad_request(format!("unknown family `{}`", t.family)))?;
    let mut params = NamedParams::new();
    for (name, value) in &t.params {
        let v = match value {
            Value::String(s) => ParamValue::Scalar(parse(s)?),
            Value::Number(n) => ParamValue::Scalar(parse(&n.to_string())?),
            Value::Array(items) => ParamValue::Breakpoints(
                items
                    .iter()
                    .map(|i| {
                        i.as_u64()
                            .map(|b| b as usize)
                            .ok_or_else(|| Failure::bad_request(format!("{name}: breakpoints must be nonnegative integers")))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(Failure::bad_request(format!("{name}: unsupported parameter value"))),
        };
        params.insert(name.clone(), v);
    }
    Ok(make_transform(family, &params)?)
}

fn polynomial_of(req: &Request) -> Result<Polynomial, Failure> {
    let input = req.input.as_ref().ok_or_else(|| Failure::bad_request("this command needs an input"))?;
    match (&input.roots, &input.coeffs) {
        (Some(r), None) => {
            let roots = r.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(Polynomial::from_roots(&roots))
        }
        (None, Some(c)) => {
            let coeffs = c.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(Polynomial::new(coeffs))
        }
        _ => Err(Failure::bad_request("input needs exactly one of `roots` and `coeffs`")),
    }
}

fn root_intervals(p: &Polynomial) -> Result<Value, Failure> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial { op: "root isolation" }.into());
    }
    let tol = Scalar::one().checked_div(&Scalar::int(1i64 << ROOT_WIDTH_LOG2))?;
    let set = isolate_real_roots(p)?;
    let mut out = Vec::with_capacity(set.intervals.len());
    for iv in &set.intervals {
        let r = refine_root(p, iv, &tol)?;
        out.push(json!([r.lo.to_string(), r.hi.to_string()]));
    }
    Ok(Value::Array(out))
}

fn tolerances(req: &Request) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(map) = &req.tolerances {
        for (name, value) in map {
            let v = parse(value)?;
            if v.is_negative() {
                return Err(Failure::bad_request(format!("tolerance `{name}` is negative")));
            }
            match name.as_str() {
                "ratio" => tol.ratio = v,
                "series" => tol.series = v,
                _ => return Err(Failure::bad_request(format!("unknown tolerance `{name}`"))),
            }
        }
    }
    Ok(tol)
}

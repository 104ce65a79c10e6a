//! Job-file schema: strict JSON with an explicit `spec_version`, rejected
//! unknown fields, and diagnostics that name the offending field by path.
//!
//! Bundle total classes are lists of homogeneous pieces starting at the
//! constant piece. A piece is either an integer (a constant multiple of 1)
//! or a list of terms, each term a flat list of generator-name and
//! exponent pairs followed by the integer coefficient:
//! `[1, [["t", 1, 5]]]` encodes `1 + 5t`.

use crate::CliError;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub spec_version: u32,
    pub base: BaseSpec,
    pub family: FamilySpec,
    /// Inclusive interval of `n` values.
    pub n_range: [u32; 2],
    pub routes: Vec<Route>,
    #[serde(default)]
    pub output: OutputFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Closed,
    Triple,
    Pushforward,
    FamilyForm,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::Closed,
        Route::Triple,
        Route::Pushforward,
        Route::FamilyForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Triple => "triple",
            Route::Pushforward => "pushforward",
            Route::FamilyForm => "family_form",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BaseSpec {
    Point(PointBase),
    TruncatedPolynomial(TruncatedPolynomialBase),
    Surface(SurfaceBase),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointBase {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedPolynomialBase {
    pub generators: Vec<GeneratorSpec>,
    pub truncation_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    /// Least vanishing power; omitted means no generator-level relation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBase {
    pub generators: Vec<String>,
    pub intersection_matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilySpec {
    Generic(GenericFamily),
    Projectivisation(ProjectivisationFamily),
    FibreProduct(FibreProductFamily),
    Blowup(BlowupFamily),
}

/// Generic family data; omitted bundles default to trivial ones of the
/// declared ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericFamily {
    pub h0: u32,
    pub h1: u32,
    pub h2: u32,
    pub rho_g: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<BundleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v1: Option<BundleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2: Option<BundleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h20: Option<BundleSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectivisationFamily {
    pub v: BundleSpec,
    pub k: i64,
    pub line: BundleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreProductFamily {
    pub v1: BundleSpec,
    pub v2: BundleSpec,
    pub k: i64,
    pub l: i64,
    pub line: BundleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupFamily {
    pub l1: ClassSpec,
    pub l2: BundleSpec,
    pub cotangent: BundleSpec,
    pub canonical: ClassSpec,
    pub p0: u32,
    pub p1: u32,
    pub p2: u32,
    pub rho_g: u32,
    pub mode: ModeSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ModeSpec {
    Zero(EmptyMode),
    MinusEBasepointFree(EmptyMode),
    MinusKESurjective(TwistMode),
    PlusE(EmptyMode),
    PlusKESurjective(TwistMode),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyMode {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistMode {
    pub k: u32,
}

/// Total class of a bundle: pieces from degree 0 up. An empty list means
/// the trivial class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub rank: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chern: Vec<ClassSpec>,
}

/// One cohomology class: an integer constant or a list of terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Constant(i64),
    Terms(Vec<TermSpec>),
}

/// A term: generator-name and exponent pairs, then the coefficient.
pub type TermSpec = Vec<TermAtom>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermAtom {
    Name(String),
    Number(i64),
}

impl JobSpec {
    /// Deduplicates routes and checks the job-level invariants. Called by
    /// [`parse_spec`] and again after command-line overrides.
    pub fn validate(&mut self) -> Result<(), CliError> {
        if self.spec_version != 1 {
            return Err(CliError::input(
                "/spec_version",
                format!("unsupported spec_version {}; expected 1", self.spec_version),
            ));
        }
        let [a, b] = self.n_range;
        if a > b {
            return Err(CliError::input(
                "/n_range",
                format!("empty range [{a}, {b}]"),
            ));
        }
        if b >= 64 {
            return Err(CliError::input(
                "/n_range",
                format!("n = {b} does not lie within 0..64"),
            ));
        }
        let mut seen = Vec::new();
        self.routes.retain(|r| {
            let fresh = !seen.contains(r);
            seen.push(*r);
            fresh
        });
        if self.routes.is_empty() {
            return Err(CliError::input("/routes", "at least one route required"));
        }
        Ok(())
    }
}

/// Top-level mirror of [`JobSpec`] with the tagged enums left raw: their
/// contents are re-deserialized with their own path tracking, because
/// serde buffers tagged-enum payloads and drops path segments inside them.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJobSpec {
    spec_version: u32,
    base: serde_json::Value,
    family: serde_json::Value,
    n_range: [u32; 2],
    routes: Vec<Route>,
    #[serde(default)]
    output: OutputFormat,
}

/// Parses and validates a job specification from raw bytes, naming the
/// offending field on failure.
pub fn parse_spec(source: &[u8]) -> Result<JobSpec, CliError> {
    let text = std::str::from_utf8(source)
        .map_err(|e| CliError::input("/", format!("input is not UTF-8: {e}")))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawJobSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let message = e.inner().to_string();
        CliError::Input {
            path: refine_path(render_path(e.path()), &message),
            message,
        }
    })?;
    let mut job = JobSpec {
        spec_version: raw.spec_version,
        base: parse_base(&raw.base)?,
        family: parse_family(&raw.family)?,
        n_range: raw.n_range,
        routes: raw.routes,
        output: raw.output,
    };
    job.validate()?;
    Ok(job)
}

fn parse_base(value: &serde_json::Value) -> Result<BaseSpec, CliError> {
    let (tag, rest) = split_tag("/base", "type", value)?;
    match tag.as_str() {
        "point" => Ok(BaseSpec::Point(tracked("/base", rest)?)),
        "truncated_polynomial" => {
            Ok(BaseSpec::TruncatedPolynomial(tracked("/base", rest)?))
        }
        "surface" => Ok(BaseSpec::Surface(tracked("/base", rest)?)),
        other => Err(CliError::input(
            "/base/type",
            format!(
                "unknown base type `{other}`; expected point, truncated_polynomial, \
                 or surface"
            ),
        )),
    }
}

fn parse_family(value: &serde_json::Value) -> Result<FamilySpec, CliError> {
    let (tag, rest) = split_tag("/family", "type", value)?;
    match tag.as_str() {
        "generic" => Ok(FamilySpec::Generic(tracked("/family", rest)?)),
        "projectivisation" => Ok(FamilySpec::Projectivisation(tracked("/family", rest)?)),
        "fibre_product" => Ok(FamilySpec::FibreProduct(tracked("/family", rest)?)),
        "blowup" => Ok(FamilySpec::Blowup(tracked("/family", rest)?)),
        other => Err(CliError::input(
            "/family/type",
            format!(
                "unknown family type `{other}`; expected generic, projectivisation, \
                 fibre_product, or blowup"
            ),
        )),
    }
}

/// Splits an internally tagged object into its tag and remaining fields.
fn split_tag(
    path: &str,
    tag: &str,
    value: &serde_json::Value,
) -> Result<(String, serde_json::Value), CliError> {
    let object = value
        .as_object()
        .ok_or_else(|| CliError::input(path, "expected an object"))?;
    let mut rest = object.clone();
    let tag_value = rest.remove(tag).ok_or_else(|| {
        CliError::input(format!("{path}/{tag}"), format!("missing field `{tag}`"))
    })?;
    match tag_value.as_str() {
        Some(name) => Ok((name.to_string(), serde_json::Value::Object(rest))),
        None => Err(CliError::input(
            format!("{path}/{tag}"),
            "tag must be a string",
        )),
    }
}

/// Deserializes a variant payload with path tracking, prefixing reported
/// paths with the enclosing field.
fn tracked<T: serde::de::DeserializeOwned>(
    prefix: &str,
    value: serde_json::Value,
) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let message = e.inner().to_string();
        let sub = refine_path(render_path(e.path()), &message);
        let path = if sub == "/" {
            prefix.to_string()
        } else {
            format!("{prefix}{sub}")
        };
        CliError::Input { path, message }
    })
}

/// Canonical serialization of a job; parses back to an identical value.
pub fn serialize_spec(job: &JobSpec) -> String {
    let mut out = serde_json::to_string(job).expect("schema types serialize");
    out.push('\n');
    out
}

fn render_path(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Map { key } => out.push_str(key),
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Enum { variant } => out.push_str(variant),
            _ => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Missing- and unknown-field messages carry the field name in backticks;
/// fold it into the path so diagnostics point at the field itself. Some
/// deserializers already track the offending key as a segment, so skip the
/// fold when the path already ends with it.
fn refine_path(path: String, message: &str) -> String {
    for marker in ["missing field `", "unknown field `"] {
        if let Some(rest) = message.strip_prefix(marker) {
            if let Some(name) = rest.split('`').next() {
                if path.ends_with(&format!("/{name}")) {
                    return path;
                }
                return if path == "/" {
                    format!("/{name}")
                } else {
                    format!("{path}/{name}")
                };
            }
        }
    }
    path
}

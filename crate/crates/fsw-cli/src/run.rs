//! Builds the base ring and family model from a parsed job, evaluates the
//! selected routes for each `n`, and renders byte-stable reports.

use crate::schema::{
    BaseSpec, BundleSpec, ClassSpec, FamilySpec, JobSpec, ModeSpec, Route, TermAtom,
};
use crate::CliError;
use fsw_core::charclass::BundleClass;
use fsw_core::families::{
    family_closed_form, family_data, BlowupSpec, FamilyModel, FibreProductSpec, KMode,
    ProjectivisationSpec,
};
use fsw_core::fsw::{
    fsw_general, gamma_closed, gamma_pushforward, gamma_triple_sum, GammaResult,
    KahlerFamilyData,
};
use fsw_core::ring::{make_ring, Generator, GradedClass, Ring, RingSpec};
use serde::Serialize;

/// Everything needed to evaluate a job: the base ring, the family model,
/// and (when a general route or the trace table needs it) the
/// general-engine assembly.
pub struct BuiltJob {
    pub ring: Ring,
    pub model: FamilyModel,
    data: Option<KahlerFamilyData>,
}

impl BuiltJob {
    fn data(&self) -> &KahlerFamilyData {
        self.data.as_ref().expect("job built with general data")
    }
}

pub fn build_job(job: &JobSpec, needs_general: bool) -> Result<BuiltJob, CliError> {
    let ring = build_ring(&job.base)?;
    let model = build_family(&ring, &job.family)?;
    let data = if needs_general {
        Some(family_data(&model).map_err(|e| CliError::input("/family", e.to_string()))?)
    } else {
        None
    };
    Ok(BuiltJob { ring, model, data })
}

fn build_ring(base: &BaseSpec) -> Result<Ring, CliError> {
    let spec = match base {
        BaseSpec::Point(_) => RingSpec::Point,
        BaseSpec::TruncatedPolynomial(b) => RingSpec::TruncatedPolynomial {
            generators: b
                .generators
                .iter()
                .map(|g| Generator::new(&g.name, g.degree, g.power))
                .collect(),
            truncation_degree: b.truncation_degree,
        },
        BaseSpec::Surface(b) => RingSpec::SurfaceForm {
            generators: b.generators.clone(),
            intersection_matrix: b.intersection_matrix.clone(),
        },
    };
    make_ring(spec).map_err(|e| CliError::input("/base", e.to_string()))
}

fn build_class(ring: &Ring, spec: &ClassSpec, path: &str) -> Result<GradedClass, CliError> {
    match spec {
        ClassSpec::Constant(c) => Ok(ring.constant(*c)),
        ClassSpec::Terms(terms) => {
            let mut acc = ring.zero();
            for (index, term) in terms.iter().enumerate() {
                acc = &acc + &build_term(ring, term, &format!("{path}/{index}"))?;
            }
            Ok(acc)
        }
    }
}

fn build_term(ring: &Ring, term: &[TermAtom], path: &str) -> Result<GradedClass, CliError> {
    if term.len() % 2 != 1 {
        return Err(CliError::input(
            path,
            "term must list generator name and exponent pairs, then the coefficient",
        ));
    }
    let coefficient = match term.last().expect("odd length") {
        TermAtom::Number(c) => *c,
        TermAtom::Name(_) => {
            return Err(CliError::input(path, "coefficient must be an integer"))
        }
    };
    let mut factors: Vec<(&str, u32)> = Vec::new();
    for pair in term[..term.len() - 1].chunks(2) {
        let name = match &pair[0] {
            TermAtom::Name(name) => name.as_str(),
            TermAtom::Number(_) => {
                return Err(CliError::input(path, "generator name must be a string"))
            }
        };
        let exponent = match pair[1] {
            TermAtom::Number(e) if (0..=i64::from(u16::MAX)).contains(&e) => e as u32,
            _ => {
                return Err(CliError::input(
                    path,
                    "exponent must be a small nonnegative integer",
                ))
            }
        };
        factors.push((name, exponent));
    }
    ring.monomial(&factors, coefficient)
        .map_err(|e| CliError::input(path, e.to_string()))
}

fn build_bundle(ring: &Ring, spec: &BundleSpec, path: &str) -> Result<BundleClass, CliError> {
    let pieces = if spec.chern.is_empty() {
        vec![ring.one()]
    } else {
        spec.chern
            .iter()
            .enumerate()
            .map(|(index, piece)| build_class(ring, piece, &format!("{path}/chern/{index}")))
            .collect::<Result<Vec<_>, _>>()?
    };
    BundleClass::new(ring.clone(), spec.rank, pieces)
        .map_err(|e| CliError::input(path, e.to_string()))
}

fn optional_bundle(
    ring: &Ring,
    spec: &Option<BundleSpec>,
    rank: u32,
    path: &str,
) -> Result<BundleClass, CliError> {
    match spec {
        Some(s) => build_bundle(ring, s, path),
        None => Ok(BundleClass::trivial(ring.clone(), rank)),
    }
}

fn build_family(ring: &Ring, family: &FamilySpec) -> Result<FamilyModel, CliError> {
    match family {
        FamilySpec::Generic(g) => {
            let v0 = optional_bundle(ring, &g.v0, g.h0, "/family/v0")?;
            let v1 = optional_bundle(ring, &g.v1, g.h1, "/family/v1")?;
            let v2 = optional_bundle(ring, &g.v2, g.h2, "/family/v2")?;
            let h20 = optional_bundle(ring, &g.h20, g.rho_g, "/family/h20")?;
            KahlerFamilyData::new(g.h0, g.h1, g.h2, g.rho_g, v0, v1, v2, h20)
                .map(FamilyModel::Generic)
                .map_err(|e| CliError::input("/family", e.to_string()))
        }
        FamilySpec::Projectivisation(p) => {
            let v = build_bundle(ring, &p.v, "/family/v")?;
            let line = build_bundle(ring, &p.line, "/family/line")?;
            ProjectivisationSpec::new(v, p.k, line)
                .map(FamilyModel::Projectivisation)
                .map_err(|e| CliError::input("/family", e.to_string()))
        }
        FamilySpec::FibreProduct(f) => {
            let v1 = build_bundle(ring, &f.v1, "/family/v1")?;
            let v2 = build_bundle(ring, &f.v2, "/family/v2")?;
            let line = build_bundle(ring, &f.line, "/family/line")?;
            FibreProductSpec::new(v1, v2, f.k, f.l, line)
                .map(FamilyModel::FibreProduct)
                .map_err(|e| CliError::input("/family", e.to_string()))
        }
        FamilySpec::Blowup(b) => {
            let l1 = build_class(ring, &b.l1, "/family/l1")?;
            let l2 = build_bundle(ring, &b.l2, "/family/l2")?;
            let cotangent = build_bundle(ring, &b.cotangent, "/family/cotangent")?;
            let canonical = build_class(ring, &b.canonical, "/family/canonical")?;
            let mode = match &b.mode {
                ModeSpec::Zero(_) => KMode::Zero,
                ModeSpec::MinusEBasepointFree(_) => KMode::MinusEBasepointFree,
                ModeSpec::MinusKESurjective(t) => KMode::MinusKESurjective { k: t.k },
                ModeSpec::PlusE(_) => KMode::PlusE,
                ModeSpec::PlusKESurjective(t) => KMode::PlusKESurjective { k: t.k },
            };
            BlowupSpec::new(
                ring.clone(),
                l1,
                l2,
                cotangent,
                canonical,
                b.p0,
                b.p1,
                b.p2,
                b.rho_g,
                mode,
            )
            .map(FamilyModel::Blowup)
            .map_err(|e| CliError::input("/family", e.to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub spec_version: u32,
    pub n_range: [u32; 2],
    pub routes: Vec<&'static str>,
    pub results: Vec<ResultEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultEntry {
    pub n: u32,
    pub values: Vec<RouteValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteValue {
    pub route: &'static str,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub m: u32,
    pub gamma: String,
    pub weight: String,
    pub term: String,
}

impl Report {
    pub fn any_mismatch(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Some("mismatch"))
    }

    /// Text report: one block per `n` with trace rows first, then one
    /// line per route, then the verdict; a summary line closes the report.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for entry in &self.results {
            out.push_str(&format!("n = {}\n", entry.n));
            for row in &entry.trace {
                out.push_str(&format!(
                    "  trace m = {}: gamma = {}, weight = {}, term = {}\n",
                    row.m, row.gamma, row.weight, row.term
                ));
            }
            for value in &entry.values {
                out.push_str(&format!("  {} = {}\n", value.route, value.value));
            }
            if let Some(verdict) = entry.verdict {
                out.push_str(&format!("  verdict: {verdict}\n"));
            }
        }
        if self.all_equal.is_some() {
            let equal = self
                .results
                .iter()
                .filter(|r| r.verdict == Some("equal"))
                .count();
            out.push_str(&format!("summary: {}/{} equal\n", equal, self.results.len()));
        } else {
            out.push_str(&format!("summary: {} values\n", self.results.len()));
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// The exit-status contract: 1 when any verdict is a mismatch, else 0.
/// Input and evaluation errors exit 2 before a report exists.
pub fn exit_code(report: &Report) -> u8 {
    u8::from(report.any_mismatch())
}

/// Evaluates each selected route for every `n` in the job's range.
pub fn run(job: &JobSpec, trace: bool) -> Result<Report, CliError> {
    let needs_general = trace || job.routes.iter().any(|&r| r != Route::FamilyForm);
    let built = build_job(job, needs_general)?;
    let [lo, hi] = job.n_range;
    let mut results = Vec::new();
    for n in lo..=hi {
        let mut classes: Vec<(Route, GradedClass)> = Vec::new();
        for &route in &job.routes {
            classes.push((route, evaluate(&built, route, n)?));
        }
        let verdict = (classes.len() >= 2).then(|| {
            if classes.windows(2).all(|w| w[0].1 == w[1].1) {
                "equal"
            } else {
                "mismatch"
            }
        });
        let trace_rows = if trace {
            gamma_table(built.data(), n)
        } else {
            Vec::new()
        };
        results.push(ResultEntry {
            n,
            values: classes
                .into_iter()
                .map(|(route, value)| RouteValue {
                    route: route.name(),
                    value: value.to_string(),
                })
                .collect(),
            verdict,
            trace: trace_rows,
        });
    }
    let all_equal = (job.routes.len() >= 2)
        .then(|| results.iter().all(|r| r.verdict == Some("equal")));
    Ok(Report {
        spec_version: job.spec_version,
        n_range: job.n_range,
        routes: job.routes.iter().map(|r| r.name()).collect(),
        results,
        all_equal,
    })
}

fn evaluate(built: &BuiltJob, route: Route, n: u32) -> Result<GradedClass, CliError> {
    match route {
        Route::Closed => Ok(fsw_general(built.data(), n)),
        Route::Triple => Ok(weighted(built.data(), n, gamma_triple_sum)),
        Route::Pushforward => Ok(weighted(built.data(), n, gamma_pushforward)),
        Route::FamilyForm => family_closed_form(&built.model, n).map_err(|e| CliError::Eval {
            route: "family_form",
            n,
            message: e.to_string(),
        }),
    }
}

/// `FSW_n` through a chosen `Gamma` route:
/// `sum_m c_{M-m}(H^{2,0}) Gamma_{m,n}`.
fn weighted(
    data: &KahlerFamilyData,
    n: u32,
    gamma: fn(&KahlerFamilyData, u32, u32) -> GammaResult,
) -> GradedClass {
    let m_top = data.m_top();
    let mut acc = data.ring().zero();
    let mut m = 0i64;
    while m <= m_top {
        let result = gamma(data, m as u32, n);
        acc = &acc + &(&data.h20().chern(m_top - m) * &result.value);
        m += 1;
    }
    acc
}

/// Per-m decomposition of `FSW_n` for `--trace`.
fn gamma_table(data: &KahlerFamilyData, n: u32) -> Vec<TraceRow> {
    let m_top = data.m_top();
    let mut rows = Vec::new();
    let mut m = 0i64;
    while m <= m_top {
        let gamma = gamma_closed(data, m as u32, n);
        let weight = data.h20().chern(m_top - m);
        let term = &weight * &gamma.value;
        rows.push(TraceRow {
            m: m as u32,
            gamma: gamma.value.to_string(),
            weight: weight.to_string(),
            term: term.to_string(),
        });
        m += 1;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_spec;

    fn point_job(routes: &str) -> JobSpec {
        let source = format!(
            r#"{{
                "spec_version": 1,
                "base": {{"type": "point"}},
                "family": {{"type": "generic", "h0": 1, "h1": 0, "h2": 0, "rho_g": 0}},
                "n_range": [0, 2],
                "routes": {routes}
            }}"#
        );
        parse_spec(source.as_bytes()).unwrap()
    }

    #[test]
    fn point_job_gives_one_then_zero() {
        let job = point_job(r#"["closed", "triple", "pushforward", "family_form"]"#);
        let report = run(&job, false).unwrap();
        assert_eq!(report.all_equal, Some(true));
        assert_eq!(report.results[0].values[0].value, "1");
        assert!(report.results[0]
            .values
            .iter()
            .all(|v| v.value == "1"));
        assert!(report.results[1].values.iter().all(|v| v.value == "0"));
        assert_eq!(exit_code(&report), 0);
    }

    #[test]
    fn single_route_reports_have_no_verdicts() {
        let job = point_job(r#"["closed"]"#);
        let report = run(&job, false).unwrap();
        assert_eq!(report.all_equal, None);
        assert!(report.results.iter().all(|r| r.verdict.is_none()));
        assert!(report.render_text().ends_with("summary: 3 values\n"));
    }

    #[test]
    fn projectivisation_job_matches_split_example() {
        let source = r#"{
            "spec_version": 1,
            "base": {"type": "truncated_polynomial",
                     "generators": [{"name": "t", "degree": 2, "power": 2}],
                     "truncation_degree": 2},
            "family": {"type": "projectivisation",
                       "v": {"rank": 3, "chern": [1, [["t", 1, 5]]]},
                       "k": 1,
                       "line": {"rank": 1}},
            "n_range": [3, 3],
            "routes": ["family_form", "closed"]
        }"#;
        let job = parse_spec(source.as_bytes()).unwrap();
        let report = run(&job, false).unwrap();
        assert_eq!(report.results[0].values[0].value, "-5*t");
        assert_eq!(report.results[0].values[1].value, "-5*t");
        assert_eq!(report.results[0].verdict, Some("equal"));
    }

    #[test]
    fn trace_decomposes_the_invariant() {
        let source = r#"{
            "spec_version": 1,
            "base": {"type": "point"},
            "family": {"type": "generic", "h0": 2, "h1": 1, "h2": 0, "rho_g": 1},
            "n_range": [0, 0],
            "routes": ["closed"]
        }"#;
        let job = parse_spec(source.as_bytes()).unwrap();
        let report = run(&job, true).unwrap();
        let trace = &report.results[0].trace;
        assert_eq!(trace.len(), 3);
        assert!(report.render_text().contains("trace m = 0"));
    }

    #[test]
    fn mismatch_maps_to_exit_one() {
        let mut report = run(&point_job(r#"["closed", "triple"]"#), false).unwrap();
        assert_eq!(exit_code(&report), 0);
        report.results[0].verdict = Some("mismatch");
        assert_eq!(exit_code(&report), 1);
    }

    #[test]
    fn evaluation_errors_carry_route_and_n() {
        let source = r#"{
            "spec_version": 1,
            "base": {"type": "point"},
            "family": {"type": "fibre_product",
                       "v1": {"rank": 2}, "v2": {"rank": 2},
                       "k": 3, "l": 1,
                       "line": {"rank": 1}},
            "n_range": [0, 0],
            "routes": ["family_form"]
        }"#;
        let job = parse_spec(source.as_bytes()).unwrap();
        let err = run(&job, false).unwrap_err();
        match err {
            CliError::Eval { route, n, .. } => {
                assert_eq!(route, "family_form");
                assert_eq!(n, 0);
            }
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn bad_class_terms_name_their_path() {
        let source = r#"{
            "spec_version": 1,
            "base": {"type": "truncated_polynomial",
                     "generators": [{"name": "t", "degree": 2, "power": 2}],
                     "truncation_degree": 2},
            "family": {"type": "projectivisation",
                       "v": {"rank": 3, "chern": [1, [["u", 1, 5]]]},
                       "k": 1,
                       "line": {"rank": 1}},
            "n_range": [0, 1],
            "routes": ["closed"]
        }"#;
        let job = parse_spec(source.as_bytes()).unwrap();
        let err = run(&job, false).unwrap_err();
        match err {
            CliError::Input { path, message } => {
                assert_eq!(path, "/family/v/chern/1/0");
                assert!(message.contains('u'), "message: {message}");
            }
            other => panic!("expected input error, got {other:?}"),
        }
    }

    #[test]
    fn json_render_is_stable() {
        let job = point_job(r#"["closed", "triple"]"#);
        let a = run(&job, false).unwrap().render_json();
        let b = run(&job, false).unwrap().render_json();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        assert!(a.contains(r#""all_equal":true"#));
    }
}

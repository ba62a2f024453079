//! Command execution and rendering behind the command-line binary.
//!
//! This layer is argument-parser-free: a [`RunConfig`] value fully
//! describes a run and round-trips through JSON, execution produces a
//! [`Table`], and the renderers turn it into CSV or a JSON envelope
//! `{schema_version, command, config, columns, rows}`. Given the same
//! config, seed, and crate version the rendered bytes are identical, which
//! is what makes runs diffable.

use crate::ensembles::{
    gap2_trace_power_exact, gap_renyi_upper_bound, haar_frame_potential_exact, gap2_purity_exact,
    single_qubit_clifford,
};
use crate::moments::{
    design_renyi_lower_bound, haar_choi_moment, haar_state_moment, rational_to_f64, theorem_bound,
    BoundParams, ChoiPartitionSpec, MomentResult, StatePartition, TheoremId,
};
use crate::permgroup::verify_cycle_lemma;
use crate::quantum::EntropySelector;
use crate::sampling::{
    mc_choi_moment, mc_entropy_average, mc_state_moment, McEstimate, GENERATOR_ID,
};
use crate::weingarten::verify_wg_inverse;
use crate::{Error, Rational, Result};
use num::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Version of the rendered table envelope and of the config schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Monte Carlo acceptance gate, in standard errors, used by `verify`.
pub const VERIFY_SIGMA_GATE: f64 = 4.0;

fn default_verify_samples() -> u64 {
    20_000
}

/// What to average: a bipartite pure state or the Choi state of a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentTarget {
    State { d_a: u64, d_b: u64 },
    Choi { d_a: u64, d_b: u64, d_c: u64, d_d: u64 },
}

/// A complete, reproducible description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    /// Exact averaged trace powers, optionally cross-checked by sampling.
    Moment {
        target: MomentTarget,
        alphas: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_samples: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// Closed-form entropy bound calculators.
    Bounds {
        /// Explicit list; `None` evaluates every bound the parameters
        /// support.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theorems: Option<Vec<TheoremId>>,
        params: BoundParams,
    },
    /// Self-check battery of the exact kernels against independent
    /// derivations and seeded sampling.
    Verify {
        seed: u64,
        #[serde(default = "default_verify_samples")]
        samples: u64,
    },
    /// The spiked moment-matched state: exact trace powers and entropy
    /// ceilings.
    GapDesign { d_a: u64, d_b: u64, alphas: Vec<u32> },
}

impl RunConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            Self::Moment { .. } => "moment",
            Self::Bounds { .. } => "bounds",
            Self::Verify { .. } => "verify",
            Self::GapDesign { .. } => "gap-design",
        }
    }
}

/// One table cell. `Empty` renders as an empty CSV field and JSON `null`;
/// non-finite floats do the same in JSON and print as Rust floats in CSV.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Rational(Rational),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv_string(&self) -> String {
        match self {
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Rational(r) => format_rational(r),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> serde_json::Value {
        match self {
            Cell::UInt(v) => serde_json::Value::from(*v),
            Cell::Float(v) => {
                serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into)
            }
            Cell::Rational(r) => serde_json::Value::from(format_rational(r)),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Exact rationals always render as `numerator/denominator`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Result of executing a config: the table plus the overall verdict that
/// drives the process exit code (false only for failed verification).
#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionReport {
    pub table: Table,
    pub all_passed: bool,
}

/// Runs a config to completion. Configuration problems (bad dimensions,
/// unsupported orders) are `Err`; statistical verification failures are
/// reported through `all_passed`.
pub fn execute(config: &RunConfig) -> Result<ExecutionReport> {
    match config {
        RunConfig::Moment { target, alphas, mc_samples, seed } => {
            let mc = match (mc_samples, seed) {
                (Some(n), Some(s)) => Some((*n, *s)),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidArgument(
                        "Monte Carlo cross-checks need both sample count and seed".into(),
                    ))
                }
            };
            Ok(ExecutionReport { table: cmd_moment(target, alphas, mc)?, all_passed: true })
        }
        RunConfig::Bounds { theorems, params } => {
            Ok(ExecutionReport { table: cmd_bounds(theorems.as_deref(), params)?, all_passed: true })
        }
        RunConfig::Verify { seed, samples } => {
            let (table, all_passed) = cmd_verify(*seed, *samples)?;
            Ok(ExecutionReport { table, all_passed })
        }
        RunConfig::GapDesign { d_a, d_b, alphas } => {
            Ok(ExecutionReport { table: cmd_gap_design(*d_a, *d_b, alphas)?, all_passed: true })
        }
    }
}

fn require_alphas(alphas: &[u32]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("need at least one moment order".into()));
    }
    Ok(())
}

fn sigma_distance(est: &McEstimate, exact: f64) -> f64 {
    let diff = (est.mean - exact).abs();
    if est.std_error > 0.0 {
        diff / est.std_error
    } else if diff <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn jensen_cell(moment: &MomentResult) -> Cell {
    if moment.alpha >= 2 {
        design_renyi_lower_bound(moment).map_or(Cell::Empty, Cell::Float)
    } else {
        Cell::Empty
    }
}

fn cmd_moment(target: &MomentTarget, alphas: &[u32], mc: Option<(u64, u64)>) -> Result<Table> {
    require_alphas(alphas)?;
    let base_state =
        ["alpha", "d_a", "d_b", "exact", "exact_float", "jensen_lower_bits"];
    let base_choi =
        ["alpha", "d_a", "d_b", "d_c", "d_d", "exact", "exact_float", "jensen_lower_bits"];
    let mc_cols = ["mc_mean", "mc_std_error", "mc_n", "mc_sigma"];
    let mut columns: Vec<&str> = match target {
        MomentTarget::State { .. } => base_state.to_vec(),
        MomentTarget::Choi { .. } => base_choi.to_vec(),
    };
    if mc.is_some() {
        columns.extend_from_slice(&mc_cols);
    }
    let mut table = Table::new(&columns);
    for &alpha in alphas {
        let mut row = Vec::new();
        let (moment, estimate): (MomentResult, Option<McEstimate>) = match *target {
            MomentTarget::State { d_a, d_b } => {
                let p = StatePartition::new(d_a, d_b)?;
                let moment = haar_state_moment(&p, alpha)?;
                let est = match mc {
                    Some((n, seed)) => Some(mc_state_moment(&p, alpha, n, seed)?),
                    None => None,
                };
                row.extend([Cell::UInt(alpha as u64), Cell::UInt(d_a), Cell::UInt(d_b)]);
                (moment, est)
            }
            MomentTarget::Choi { d_a, d_b, d_c, d_d } => {
                let spec = ChoiPartitionSpec::new(d_a, d_b, d_c, d_d)?;
                let moment = haar_choi_moment(&spec, alpha)?;
                let est = match mc {
                    Some((n, seed)) => Some(mc_choi_moment(&spec, alpha, n, seed)?),
                    None => None,
                };
                row.extend([
                    Cell::UInt(alpha as u64),
                    Cell::UInt(d_a),
                    Cell::UInt(d_b),
                    Cell::UInt(d_c),
                    Cell::UInt(d_d),
                ]);
                (moment, est)
            }
        };
        let exact_f = rational_to_f64(&moment.value);
        row.push(Cell::Rational(moment.value.clone()));
        row.push(Cell::Float(exact_f));
        row.push(jensen_cell(&moment));
        if let Some(est) = estimate {
            row.extend([
                Cell::Float(est.mean),
                Cell::Float(est.std_error),
                Cell::UInt(est.n),
                Cell::Float(sigma_distance(&est, exact_f)),
            ]);
        }
        table.push(row);
    }
    Ok(table)
}

/// The design order a bound certifies at these parameters: the given order
/// for the fixed-order bounds, the derived `ceil(log2(dim)/a)` for the
/// min-entropy ones.
fn effective_alpha(id: TheoremId, params: &BoundParams) -> Option<u32> {
    match id {
        TheoremId::T1 | TheoremId::T2a | TheoremId::T2b | TheoremId::T4 | TheoremId::T5 => {
            params.alpha
        }
        TheoremId::T3 => {
            let (d_a, a) = (params.d_a?, params.a?);
            Some(((d_a as f64).log2() / a).ceil().max(1.0) as u32)
        }
        TheoremId::T6 => {
            let d = params.d_total.or_else(|| Some(params.d_a? * params.d_b?))?;
            let a = params.a?;
            Some(((d as f64).log2() / a).ceil().max(1.0) as u32)
        }
    }
}

/// Exact-moment Jensen counterpart of a closed-form bound, when the exact
/// moment is computable at these parameters: the state moment for the
/// bipartite bounds, the Choi moment at the balanced split for the channel
/// bounds (only when the total dimension is a perfect square), scaled by
/// `(alpha - 1) / alpha` for the min-entropy bounds.
fn exact_jensen(id: TheoremId, params: &BoundParams, alpha: Option<u32>) -> Cell {
    let Some(alpha) = alpha.filter(|&a| a >= 2) else { return Cell::Empty };
    let min_entropy_scale = match id {
        TheoremId::T3 | TheoremId::T6 => (alpha as f64 - 1.0) / alpha as f64,
        _ => 1.0,
    };
    let moment = match id {
        TheoremId::T1 | TheoremId::T2a | TheoremId::T2b | TheoremId::T3 => {
            let (Some(d_a), Some(d_b)) = (params.d_a, params.d_b) else { return Cell::Empty };
            StatePartition::new(d_a, d_b).and_then(|p| haar_state_moment(&p, alpha))
        }
        TheoremId::T4 | TheoremId::T5 | TheoremId::T6 => {
            let d = match params.d_total.or_else(|| Some(params.d_a? * params.d_b?)) {
                Some(d) => d,
                None => return Cell::Empty,
            };
            let side = (d as f64).sqrt().round() as u64;
            if side * side != d {
                return Cell::Empty;
            }
            ChoiPartitionSpec::new(side, side, side, side)
                .and_then(|spec| haar_choi_moment(&spec, alpha))
        }
    };
    match moment.and_then(|m| design_renyi_lower_bound(&m)) {
        Ok(bits) => Cell::Float(bits * min_entropy_scale),
        Err(_) => Cell::Empty,
    }
}

fn cmd_bounds(theorems: Option<&[TheoremId]>, params: &BoundParams) -> Result<Table> {
    let explicit = theorems.is_some();
    let ids: Vec<TheoremId> = theorems.map_or_else(|| TheoremId::ALL.to_vec(), |t| t.to_vec());
    if ids.is_empty() {
        return Err(Error::InvalidArgument("need at least one bound id".into()));
    }
    let mut table = Table::new(&[
        "theorem",
        "bound_bits",
        "valid",
        "alpha_effective",
        "exact_jensen_bits",
        "constraints",
    ]);
    for id in ids {
        let report = match theorem_bound(id, params) {
            Ok(report) => report,
            Err(_) if !explicit => continue,
            Err(e) => return Err(e),
        };
        let alpha = effective_alpha(id, params);
        table.push(vec![
            Cell::Text(id.to_string()),
            Cell::Float(report.bound_bits),
            Cell::Bool(report.valid),
            alpha.map_or(Cell::Empty, |a| Cell::UInt(a as u64)),
            exact_jensen(id, params, alpha),
            Cell::Text(report.constraint_report),
        ]);
    }
    if table.rows.is_empty() {
        return Err(Error::InvalidArgument(
            "no bound is computable from the given parameters".into(),
        ));
    }
    Ok(table)
}

fn cmd_gap_design(d_a: u64, d_b: u64, alphas: &[u32]) -> Result<Table> {
    require_alphas(alphas)?;
    let purity = gap2_purity_exact(d_a, d_b)?;
    let mut table = Table::new(&[
        "alpha",
        "d_a",
        "d_b",
        "purity_exact",
        "trace_rational",
        "trace_radical",
        "radical_base",
        "trace_float",
        "renyi_bits",
        "orbit_ceiling_bits",
        "haar_jensen_bits",
    ]);
    for &alpha in alphas {
        if alpha < 2 {
            return Err(Error::InvalidArgument(format!(
                "the spiked-state table needs orders >= 2, got {alpha}"
            )));
        }
        let trace = gap2_trace_power_exact(d_a, d_b, alpha)?;
        let trace_f = trace.to_f64();
        let renyi = -trace_f.log2() / (alpha as f64 - 1.0);
        let ceiling = if alpha >= 3 {
            Cell::Float(gap_renyi_upper_bound(d_a, d_b, alpha)?.bound_bits)
        } else {
            Cell::Empty
        };
        let jensen = StatePartition::new(d_a, d_b)
            .and_then(|p| haar_state_moment(&p, alpha))
            .and_then(|m| design_renyi_lower_bound(&m))
            .map_or(Cell::Empty, Cell::Float);
        table.push(vec![
            Cell::UInt(alpha as u64),
            Cell::UInt(d_a),
            Cell::UInt(d_b),
            Cell::Rational(purity.clone()),
            Cell::Rational(trace.rational_part().clone()),
            Cell::Rational(trace.radical_part().clone()),
            Cell::UInt(trace.base()),
            Cell::Float(trace_f),
            Cell::Float(renyi),
            ceiling,
            jensen,
        ]);
    }
    Ok(table)
}

struct Check {
    name: String,
    passed: bool,
    statistic: f64,
    threshold: f64,
    details: String,
}

fn derived_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn cmd_verify(seed: u64, samples: u64) -> Result<(Table, bool)> {
    let mut checks: Vec<Check> = Vec::new();
    let mut check_index = 0u64;
    let mut next_seed = || {
        check_index += 1;
        derived_seed(seed, check_index)
    };

    // Sampled state moments against the exact rational values.
    for (d_a, d_b, alpha) in [(2u64, 2u64, 2u32), (2, 2, 3), (2, 4, 2)] {
        let p = StatePartition::new(d_a, d_b)?;
        let exact = rational_to_f64(&haar_state_moment(&p, alpha)?.value);
        let est = mc_state_moment(&p, alpha, samples, next_seed())?;
        let sigma = sigma_distance(&est, exact);
        checks.push(Check {
            name: format!("state_moment_mc(d_a={d_a},d_b={d_b},alpha={alpha})"),
            passed: sigma <= VERIFY_SIGMA_GATE,
            statistic: sigma,
            threshold: VERIFY_SIGMA_GATE,
            details: format!(
                "mean {} +- {} vs exact {exact} [{GENERATOR_ID}]",
                est.mean, est.std_error
            ),
        });
    }

    // Sampled Choi moment against the Weingarten double sum.
    {
        let spec = ChoiPartitionSpec::new(2, 2, 2, 2)?;
        let exact = rational_to_f64(&haar_choi_moment(&spec, 2)?.value);
        let est = mc_choi_moment(&spec, 2, samples, next_seed())?;
        let sigma = sigma_distance(&est, exact);
        checks.push(Check {
            name: "choi_moment_mc(2,2,2,2,alpha=2)".into(),
            passed: sigma <= VERIFY_SIGMA_GATE,
            statistic: sigma,
            threshold: VERIFY_SIGMA_GATE,
            details: format!("mean {} +- {} vs exact {exact}", est.mean, est.std_error),
        });
    }

    // Exhaustive cycle inequality with Catalan saturation counts.
    {
        let mut all = true;
        let mut worst = 0.0f64;
        for alpha in 1..=8u32 {
            let report = verify_cycle_lemma(alpha)?;
            let catalan = crate::moments::catalan(alpha).to_u64().unwrap_or(u64::MAX);
            let ok = report.holds && report.saturating_count == catalan;
            if !ok {
                all = false;
                worst = worst.max((report.saturating_count as f64 - catalan as f64).abs());
            }
        }
        checks.push(Check {
            name: "cycle_inequality(alpha<=8)".into(),
            passed: all,
            statistic: worst,
            threshold: 0.0,
            details: "saturating counts equal Catalan numbers".into(),
        });
    }

    // Weingarten times Gram equals the identity on the group algebra.
    for (d, alpha) in [(3u64, 2u32), (4, 3)] {
        let ok = verify_wg_inverse(d, alpha)?;
        checks.push(Check {
            name: format!("weingarten_inverse(d={d},alpha={alpha})"),
            passed: ok,
            statistic: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            details: "sum over gamma of Wg(s g^-1) d^cycles(g r^-1) = delta(s,r)".into(),
        });
    }

    // The spiked state's purity equals the Haar average as a rational.
    {
        let mut all = true;
        for d_a in 2u64..=4 {
            for d_b in d_a..=5 {
                let p = StatePartition::new(d_a, d_b)?;
                if gap2_purity_exact(d_a, d_b)? != haar_state_moment(&p, 2)?.value {
                    all = false;
                }
            }
        }
        checks.push(Check {
            name: "spiked_purity_matches_haar(2<=d_a<=4)".into(),
            passed: all,
            statistic: if all { 0.0 } else { 1.0 },
            threshold: 0.0,
            details: "rational equality of purity with the order-2 average".into(),
        });
    }

    // Frame potentials of the 24-element Clifford group.
    {
        let cl = single_qubit_clifford();
        let f2 = cl.frame_potential(2)?;
        let f3 = cl.frame_potential(3)?;
        let f4 = cl.frame_potential(4)?;
        let haar3 = rational_to_f64(&Rational::from_integer(haar_frame_potential_exact(2, 3)?));
        let haar4 = rational_to_f64(&Rational::from_integer(haar_frame_potential_exact(2, 4)?));
        let design3 = (f2 - 2.0).abs().max((f3 - haar3).abs());
        checks.push(Check {
            name: "clifford_is_a_3_design".into(),
            passed: design3 < 1e-9,
            statistic: design3,
            threshold: 1e-9,
            details: format!("F2 = {f2}, F3 = {f3} vs Haar {haar3}"),
        });
        checks.push(Check {
            name: "clifford_is_not_a_4_design".into(),
            passed: f4 > haar4 + 0.5,
            statistic: f4 - haar4,
            threshold: 0.5,
            details: format!("F4 = {f4} vs Haar {haar4}"),
        });
    }

    // Average sampled entropy respects the exact-moment Jensen bound.
    {
        let p = StatePartition::new(2, 2)?;
        let bound = design_renyi_lower_bound(&haar_state_moment(&p, 2)?)?;
        let est =
            mc_entropy_average(&p, EntropySelector::Renyi { alpha: 2 }, samples, next_seed())?;
        let margin = est.mean + VERIFY_SIGMA_GATE * est.std_error - bound;
        checks.push(Check {
            name: "renyi2_average_above_jensen(2,2)".into(),
            passed: margin >= 0.0,
            statistic: margin,
            threshold: 0.0,
            details: format!("mean {} +- {} vs bound {bound}", est.mean, est.std_error),
        });
    }

    // Trivial channel marginals are exactly pure.
    {
        let spec = ChoiPartitionSpec::new(3, 1, 3, 1)?;
        let value = haar_choi_moment(&spec, 2)?.value;
        let ok = value == Rational::one();
        checks.push(Check {
            name: "choi_trivial_split_is_pure".into(),
            passed: ok,
            statistic: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            details: format!("exact value {}", format_rational(&value)),
        });
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let mut table = Table::new(&["check", "passed", "statistic", "threshold", "details"]);
    for c in checks {
        table.push(vec![
            Cell::Text(c.name),
            Cell::Bool(c.passed),
            Cell::Float(c.statistic),
            Cell::Float(c.threshold),
            Cell::Text(c.details),
        ]);
    }
    Ok((table, all_passed))
}

/// Output format of the binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?} (expected csv or json)"
            ))),
        }
    }
}

/// Renders the table as CSV: a header row then one line per row.
pub fn render_csv(table: &Table) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(&table.columns)
        .and_then(|_| {
            table.rows.iter().try_for_each(|row| {
                writer.write_record(row.iter().map(|c| c.csv_string()))
            })
        })
        .map_err(|e| Error::InvalidArgument(format!("csv rendering failed: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv rendering failed: {e}")))?;
    String::from_utf8(bytes)
        .map_err(|e| Error::InvalidArgument(format!("csv rendering failed: {e}")))
}

/// Renders the JSON envelope
/// `{schema_version, command, config, columns, rows}`.
pub fn render_json(config: &RunConfig, report: &ExecutionReport) -> Result<String> {
    let mut config_value = serde_json::to_value(config)?;
    if let serde_json::Value::Object(map) = &mut config_value {
        map.remove("command");
    }
    let rows: Vec<serde_json::Value> = report
        .table
        .rows
        .iter()
        .map(|row| serde_json::Value::from(row.iter().map(Cell::json_value).collect::<Vec<_>>()))
        .collect();
    let envelope = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": config.command_name(),
        "config": config_value,
        "columns": report.table.columns,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    Ok(text)
}

//! Command-line front end: golden constants, overlap and uncertainty tables
//! as CSV, and verification suites.

use clap::{Parser, ValueEnum};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::kinematics::{normalization_constant, Angle, CoherentLabel, FluxParameter};
use crate::numerics::QuadratureRule;
use crate::observables::{
    correction_p2, expectations, expectations_by_quadrature, heisenberg_formula, unitary_position_expectation,
};
use crate::overlaps::{half_circle_grid, overlap_analytic, overlap_grid, overlap_quadrature};
use crate::resolution::verify_rou;

/// Values quoted in the literature for comparison.
pub const QUOTED_A: f64 = 0.751128;
pub const QUOTED_EXP_IQ: f64 = 0.778816;
pub const QUOTED_UNCERTAINTY: f64 = 0.499_999_997_3;

/// Tolerance of every check in `verify-all`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;
/// Tolerance of the oracle comparisons in `verify-all`.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Constants,
    OverlapGrid,
    UncertaintyCurve,
    Expectations,
    VerifyRou,
    VerifyAll,
}

#[derive(Debug, Parser)]
#[command(name = "circle-cs", version, about = "Coherent states on the circle")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Flux parameter in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 61)]
    pub grid_steps: usize,
    #[arg(long, default_value_t = 50)]
    pub k_cutoff: usize,
    #[arg(long, default_value_t = 512)]
    pub quad_order: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m_minus_n: i64,
    /// Output file, or `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
}

/// Validated run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub theta: FluxParameter,
    pub grid_steps: usize,
    pub k_cutoff: usize,
    pub quad_order: usize,
    pub m_minus_n: i64,
    pub output_path: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Constants,
            theta: FluxParameter::ZERO,
            grid_steps: 61,
            k_cutoff: 50,
            quad_order: 512,
            m_minus_n: 0,
            output_path: "-".into(),
        }
    }
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self> {
        let cfg = Self {
            command: args.command,
            theta: FluxParameter::new(args.theta)?,
            grid_steps: args.grid_steps,
            k_cutoff: args.k_cutoff,
            quad_order: args.quad_order,
            m_minus_n: args.m_minus_n,
            output_path: args.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_steps < 2 {
            return Err(Error::Config(format!("grid_steps must be >= 2 (got {})", self.grid_steps)));
        }
        if self.quad_order < 64 {
            return Err(Error::Config(format!("quad_order must be >= 64 (got {})", self.quad_order)));
        }
        Ok(())
    }

    fn rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::gauss_legendre(self.quad_order)
    }
}

/// Text or CSV produced by a command, plus whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub success: bool,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn quoted_line(out: &mut String, key: &str, value: f64, quoted: f64) {
    let _ = writeln!(out, "{key} = {} (quoted {quoted} ±{:.3e})", num(value), (value - quoted).abs());
}

/// Dispatches on `cfg.command`. The configuration is not validated here, so
/// library callers can run deliberately starved settings.
pub fn run(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        Command::Constants => cmd_constants(cfg),
        Command::OverlapGrid => cmd_overlap_grid(cfg),
        Command::UncertaintyCurve => cmd_uncertainty_curve(cfg),
        Command::Expectations => cmd_expectations(cfg),
        Command::VerifyRou => cmd_verify_rou(cfg),
        Command::VerifyAll => cmd_verify_all(cfg),
    }
}

pub fn cmd_constants(cfg: &RunConfig) -> Result<Output> {
    let rule = cfg.rule()?;
    let a = normalization_constant(FluxParameter::ZERO);
    let at = normalization_constant(cfg.theta);
    let t = cfg.theta.value();
    let exp_iq = unitary_position_expectation(CoherentLabel::plain(0, 0.0), &rule);
    let product = expectations(CoherentLabel::plain(0, 0.0)).uncertainty_product;
    let mut text = String::new();
    quoted_line(&mut text, "A", a, QUOTED_A);
    let _ = writeln!(text, "theta = {}", num(t));
    quoted_line(&mut text, "A_theta", at, QUOTED_A * (-(t * t) / 2.0).exp());
    quoted_line(&mut text, "vacuum_exp_iq_re", exp_iq.re, QUOTED_EXP_IQ);
    quoted_line(&mut text, "vacuum_exp_iq_vs_exp_quarter", exp_iq.re, (-0.25f64).exp());
    quoted_line(&mut text, "uncertainty_product_0", product, QUOTED_UNCERTAINTY);
    quoted_line(&mut text, "uncertainty_formula_a2", heisenberg_formula(a * a), QUOTED_UNCERTAINTY);
    quoted_line(&mut text, "p2", correction_p2(cfg.theta), QUOTED_A * QUOTED_A * PI * (-PI * PI).exp());
    Ok(Output { text, success: true })
}

pub fn cmd_overlap_grid(cfg: &RunConfig) -> Result<Output> {
    let angles = half_circle_grid(cfg.grid_steps);
    let cells = overlap_grid(cfg.m_minus_n, &angles, &angles, cfg.theta)?;
    let mut text = String::from("alpha,beta,re,im,abs\n");
    for c in &cells {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            num(c.alpha),
            num(c.beta),
            num(c.value.re),
            num(c.value.im),
            num(c.abs())
        );
    }
    Ok(Output { text, success: true })
}

pub fn cmd_uncertainty_curve(cfg: &RunConfig) -> Result<Output> {
    let mut text = String::from("alpha,disp_q,disp_p,product\n");
    for alpha in half_circle_grid(cfg.grid_steps) {
        let r = expectations(CoherentLabel { m: 0, alpha: Angle::new(alpha), theta: cfg.theta });
        let _ = writeln!(
            text,
            "{},{},{},{}",
            num(alpha),
            num(r.disp_q),
            num(r.disp_p),
            num(r.uncertainty_product)
        );
    }
    Ok(Output { text, success: true })
}

/// Full closed-form reports over `alpha` in `[-pi, pi)` for `m = 0`.
pub fn cmd_expectations(cfg: &RunConfig) -> Result<Output> {
    let mut text = String::from("alpha,q1,q2,p2,mean_q,mean_q2,mean_p,mean_p2,disp_q,disp_p,product\n");
    for i in 0..cfg.grid_steps {
        let alpha = -PI + 2.0 * PI * i as f64 / cfg.grid_steps as f64;
        let r = expectations(CoherentLabel { m: 0, alpha: Angle::new(alpha), theta: cfg.theta });
        let fields = [
            alpha, r.q1, r.q2, r.p2, r.mean_q, r.mean_q2, r.mean_p, r.mean_p2, r.disp_q, r.disp_p,
            r.uncertainty_product,
        ];
        let row: Vec<String> = fields.iter().map(|&x| num(x)).collect();
        let _ = writeln!(text, "{}", row.join(","));
    }
    Ok(Output { text, success: true })
}

struct Check {
    name: String,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

fn rou_checks(theta: FluxParameter, cfg: &RunConfig, rule: &QuadratureRule, text: &mut String) -> Result<Vec<Check>> {
    let report = verify_rou(theta, cfg.k_cutoff, rule)?;
    for (name, (r, c)) in report
        .test_functions
        .iter()
        .zip(report.residuals.iter().zip(&report.constants))
    {
        let _ = writeln!(
            text,
            "rou theta={} {name}: residual = {} c = {}{:+e}i",
            theta.value(),
            num(*r),
            num(c.re),
            c.im
        );
    }
    let label = format!("rou theta={}", theta.value());
    Ok(vec![
        Check { name: format!("{label} max_residual"), value: report.max_residual, tolerance: VERIFY_TOLERANCE },
        Check { name: format!("{label} |c - 2pi|"), value: report.max_constant_error, tolerance: VERIFY_TOLERANCE },
        Check {
            name: format!("{label} positivity"),
            value: if report.positive { 0.0 } else { f64::INFINITY },
            tolerance: 0.0,
        },
    ])
}

fn finish(text: &mut String, checks: &[Check]) -> bool {
    let mut ok = true;
    for c in checks {
        let pass = c.passed();
        ok &= pass;
        let _ = writeln!(
            text,
            "{} = {} (tolerance {:e}) {}",
            c.name,
            num(c.value),
            c.tolerance,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(text, "overall = {}", if ok { "PASS" } else { "FAIL" });
    ok
}

pub fn cmd_verify_rou(cfg: &RunConfig) -> Result<Output> {
    let rule = cfg.rule()?;
    let mut text = String::new();
    let checks = rou_checks(cfg.theta, cfg, &rule, &mut text)?;
    let success = finish(&mut text, &checks);
    Ok(Output { text, success })
}

/// Largest `|analytic - quadrature|` over the standard overlap grid.
pub fn overlap_oracle_error(thetas: &[f64], rule: &QuadratureRule) -> Result<f64> {
    let angles = [0.0, 0.3, 0.9, 1.7, 2.8];
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        for (i, &alpha) in angles.iter().enumerate() {
            for &beta in &angles[i..] {
                for k in 0..=5 {
                    let a = CoherentLabel::new(0, alpha, theta)?;
                    let b = CoherentLabel::new(k, beta, theta)?;
                    let exact = overlap_analytic(a, b)?.value;
                    let quad = overlap_quadrature(a, b, rule)?.value;
                    worst = worst.max(nan_to_inf((exact - quad).norm()));
                }
            }
        }
    }
    Ok(worst)
}

/// Largest deviation between closed-form and quadrature expectations.
pub fn expectation_oracle_error(thetas: &[f64], rule: &QuadratureRule) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        for m in [0, 3] {
            for alpha in [0.0, 1.0, -1.0, 2.5] {
                let l = CoherentLabel::new(m, alpha, theta)?;
                let exact = expectations(l);
                let quad = expectations_by_quadrature(l, rule);
                let diffs = [
                    exact.q1 - quad.q1,
                    exact.q2 - quad.q2,
                    exact.p2 - quad.p2,
                    exact.mean_p - quad.mean_p,
                    exact.mean_p2 - quad.mean_p2,
                ];
                for d in diffs {
                    worst = worst.max(nan_to_inf(d.abs()));
                }
            }
        }
    }
    Ok(worst)
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

pub fn cmd_verify_all(cfg: &RunConfig) -> Result<Output> {
    let rule = cfg.rule()?;
    let mut text = String::new();
    let mut checks = rou_checks(FluxParameter::ZERO, cfg, &rule, &mut text)?;
    if cfg.theta != FluxParameter::ZERO {
        checks.extend(rou_checks(cfg.theta, cfg, &rule, &mut text)?);
    }
    let mut thetas = vec![0.0, 0.25, 0.7];
    if !thetas.contains(&cfg.theta.value()) {
        thetas.push(cfg.theta.value());
    }
    checks.push(Check {
        name: "overlap oracle max_error".into(),
        value: overlap_oracle_error(&thetas, &rule)?,
        tolerance: ORACLE_TOLERANCE,
    });
    let mut flux = vec![0.0, 0.4];
    if !flux.contains(&cfg.theta.value()) {
        flux.push(cfg.theta.value());
    }
    checks.push(Check {
        name: "expectation oracle max_error".into(),
        value: expectation_oracle_error(&flux, &rule)?,
        tolerance: ORACLE_TOLERANCE,
    });
    let success = finish(&mut text, &checks);
    Ok(Output { text, success })
}

/// Writes `output` to `path` (or standard output for `-`).
pub fn emit(output: &Output, path: &str) -> std::io::Result<()> {
    if path == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(output.text.as_bytes())?;
        stdout.flush()
    } else {
        std::fs::write(path, output.text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig { command, grid_steps: 5, ..RunConfig::default() }
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.grid_steps = 1;
        assert!(c.validate().is_err());
        c.grid_steps = 2;
        c.quad_order = 63;
        assert!(c.validate().is_err());
    }

    #[test]
    fn args_parse() {
        let args = Args::try_parse_from(["circle-cs", "overlap-grid", "--m-minus-n", "-4", "--theta", "0.25"]).unwrap();
        let c = RunConfig::from_args(args).unwrap();
        assert_eq!(c.command, Command::OverlapGrid);
        assert_eq!(c.m_minus_n, -4);
        assert_eq!(c.theta.value(), 0.25);
        let bad = Args::try_parse_from(["circle-cs", "constants", "--theta", "1.5"]).unwrap();
        assert!(RunConfig::from_args(bad).is_err());
    }

    #[test]
    fn constants_report() {
        let out = cmd_constants(&cfg(Command::Constants)).unwrap();
        assert!(out.success);
        let line = out.text.lines().next().unwrap();
        assert!(line.starts_with("A = 7.5112887803727"), "{line}");
        let theta_line = out.text.lines().find(|l| l.starts_with("A_theta")).unwrap();
        assert!(theta_line.starts_with("A_theta = 7.5112887803727"));
    }

    #[test]
    fn overlap_csv_shape() {
        let out = cmd_overlap_grid(&cfg(Command::OverlapGrid)).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines[0], "alpha,beta,re,im,abs");
        assert_eq!(lines.len(), 26);
        assert!(!out.text.contains('\r'));
        assert_eq!(out.text, cmd_overlap_grid(&cfg(Command::OverlapGrid)).unwrap().text);
    }

    #[test]
    fn uncertainty_csv_shape() {
        let out = cmd_uncertainty_curve(&cfg(Command::UncertaintyCurve)).unwrap();
        let rows: Vec<Vec<f64>> = out
            .text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 5);
        assert!(rows[0][3] < 0.5);
        assert!(rows.iter().all(|r| r[2] == rows[0][2]));
    }

    #[test]
    fn expectations_csv_shape() {
        let out = cmd_expectations(&cfg(Command::Expectations)).unwrap();
        assert_eq!(out.text.lines().count(), 6);
    }
}

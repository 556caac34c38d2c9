mod args;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use gpctest::harness::{
    self, default_curve_grid, parse_threshold_spec, pvalue_curve, quantile_plot_points, render_pvalue_curve,
    render_quantile_plot, run_replicated_test, save_curve_csv, save_reports_csv, save_svg, summarize, Dataset,
    ExperimentConfig, ModelSpec, PlotStyle,
};
use gpctest::limit_dist::WeightedChiSquareLaw;
use gpctest::rng::substream;
use gpctest::statistic::TestReport;
use gpctest::{CopulaModel, CorrMatrix, Error, GridSpec, Sample, Subset};

use args::{Cli, Command, CurveArgs, DistArgs, FamilyName, ModelArgs, ProcessArgs, SimulateArgs, TestArgs};

const CONFIG_ERROR: u8 = 2;
const NUMERIC_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Curve(a) => curve(a),
        Command::Test(a) => test(a),
        Command::Dist(a) => dist(a),
        Command::Process(a) => process(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { NUMERIC_ERROR } else { CONFIG_ERROR })
        }
    }
}

fn build_model(m: &ModelArgs) -> gpctest::Result<CopulaModel> {
    let need =
        |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::Domain(format!("--{flag} is required for this family")));
    match m.family {
        FamilyName::Lemma1 => CopulaModel::lemma_one(m.lambda),
        FamilyName::Clayton => CopulaModel::clayton(m.dim, need(m.theta, "theta")?),
        FamilyName::Gumbel => CopulaModel::gumbel(m.dim, need(m.theta, "theta")?),
        FamilyName::Normal => CopulaModel::normal(CorrMatrix::equicorrelated(m.dim, need(m.rho, "rho")?)?),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

fn print_summary(reports: &[TestReport], thresholds: &[f64]) {
    println!("{:>8} {:>6} {:>6} {:>9} {:>8} {:>9}", "c", "reps", "degen", "reject5%", "ks", "m_d_hat");
    for s in summarize(reports, thresholds) {
        println!(
            "{:>8.4} {:>6} {:>6} {:>9.4} {:>8.4} {:>9.4}",
            s.c, s.replications, s.degenerate, s.rejection_rate, s.ks_uniform, s.mean_m_d_hat
        );
    }
}

/// Writes the report CSV and one quantile plot per threshold.
fn write_replicated(prefix: &Path, reports: &[TestReport], thresholds: &[f64], label: &str) -> gpctest::Result<()> {
    let csv = with_suffix(prefix, ".csv");
    save_reports_csv(reports, &csv)?;
    println!("wrote {}", csv.display());
    for &c in thresholds {
        let p = harness::p_values_at(reports, c);
        if p.is_empty() {
            continue;
        }
        let style = PlotStyle { title: format!("{label}, c = {c}"), width: 420.0, height: 420.0 };
        let svg = with_suffix(prefix, &if thresholds.len() == 1 { ".svg".into() } else { format!("_c{c}.svg") });
        save_svg(&render_quantile_plot(&quantile_plot_points(&p), &style), &svg)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn run_and_report(config: ExperimentConfig) -> gpctest::Result<()> {
    let reports = run_replicated_test(&config)?;
    println!("model {}, n = {}, k = {}, seed = {}", config.model.label(), config.n, config.k, config.seed);
    print_summary(&reports, &config.thresholds);
    if let Some(prefix) = &config.output {
        write_replicated(prefix, &reports, &config.thresholds, &config.model.label())?;
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> gpctest::Result<()> {
    let config = ExperimentConfig {
        model: ModelSpec::Copula(build_model(&a.model)?),
        n: a.run.n,
        thresholds: parse_threshold_spec(&a.c)?,
        k: a.run.k,
        replications: a.reps,
        subset: a.subset.parse()?,
        seed: a.run.seed,
        output: a.run.out,
    };
    run_and_report(config)
}

fn process(a: ProcessArgs) -> gpctest::Result<()> {
    let config = ExperimentConfig {
        model: ModelSpec::Process { lambda: a.lambda, grid: GridSpec::equidistant(a.grid_d)? },
        n: a.run.n,
        thresholds: parse_threshold_spec(&a.c)?,
        k: a.run.k,
        replications: a.reps,
        subset: a.subset.parse()?,
        seed: a.run.seed,
        output: a.run.out,
    };
    run_and_report(config)
}

fn curve(a: CurveArgs) -> gpctest::Result<()> {
    let thresholds = match &a.c {
        Some(spec) => parse_threshold_spec(spec)?,
        None => default_curve_grid(),
    };
    let (dataset, label) = match &a.input {
        Some(path) => {
            let subset: Subset = a.subset.as_deref().unwrap_or("auto").parse()?;
            let data = Sample::load_csv(path)?;
            subset.size(data.nrows())?;
            (Dataset::Raw { data, subset }, path.display().to_string())
        }
        None => {
            let subset: Subset = a.subset.as_deref().unwrap_or("full").parse()?;
            let model = ModelSpec::Copula(build_model(&a.model)?);
            let mut rng = substream(a.run.seed, 0);
            let dataset = model.generate(a.run.n, &subset, &mut rng)?;
            if let Some(path) = &a.save_data {
                dataset.sample().save_csv(path)?;
            }
            (dataset, model.label())
        }
    };
    let curve = pvalue_curve(&dataset, &thresholds, a.run.k)?;
    println!("{label}, n = {}, k = {}, fingerprint {:016x}", dataset.nrows(), a.run.k, curve.dataset_fingerprint);
    println!("{:>8} {:>10}", "c", "p_value");
    for (c, p) in curve.thresholds.iter().zip(&curve.p_values) {
        match p {
            Some(p) => println!("{c:>8.4} {p:>10.4}"),
            None => println!("{c:>8.4} {:>10}", "-"),
        }
    }
    if let Some(prefix) = &a.run.out {
        let csv = with_suffix(prefix, ".csv");
        save_curve_csv(&curve, &csv)?;
        let svg = with_suffix(prefix, ".svg");
        let style = PlotStyle { title: label, ..PlotStyle::default() };
        save_svg(&render_pvalue_curve(&curve, &style), &svg)?;
        println!("wrote {}\nwrote {}", csv.display(), svg.display());
    }
    Ok(())
}

fn test(a: TestArgs) -> gpctest::Result<()> {
    let data = Sample::load_csv(&a.input)?;
    let subset: Subset = a.subset.parse()?;
    let thresholds = parse_threshold_spec(&a.c)?;
    let m = subset.size(data.nrows())?;
    let dataset = Dataset::Raw { data, subset };
    let law = WeightedChiSquareLaw::null(a.k)?;
    let mut reports = Vec::with_capacity(thresholds.len());
    println!("{}: n = {}, d = {}, m = {m}, k = {}", a.input.display(), dataset.nrows(), dataset.dimension(), a.k);
    println!("{:>8} {:>10} {:>10} {:>9}  counts", "c", "T", "p_value", "m_d_hat");
    for &c in &thresholds {
        let counts = dataset.counts(c, a.k)?;
        let mut r = gpctest::statistic::run_test(counts, dataset.dimension(), &law)?;
        r.params.family = a.input.display().to_string();
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{c:>8.4} {:>10} {:>10} {:>9}  {:?}",
            fmt(r.statistic),
            fmt(r.p_value),
            fmt(r.m_d_hat),
            r.counts.counts
        );
        reports.push(r);
    }
    if let Some(prefix) = &a.out {
        let csv = with_suffix(prefix, ".csv");
        save_reports_csv(&reports, &csv)?;
        println!("wrote {}", csv.display());
    }
    Ok(())
}

fn dist(a: DistArgs) -> gpctest::Result<()> {
    let law = WeightedChiSquareLaw::null(a.k)?;
    println!("x,cdf,p_value");
    for x in a.x {
        let cdf = law.cdf(x)?;
        println!("{x},{cdf:.10},{:.10}", 1.0 - cdf);
    }
    Ok(())
}

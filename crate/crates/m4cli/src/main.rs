use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use m4bench::compare::{compare, read_published, render_text, write_csv};
use m4bench::registry::{RecipeConfig, Registry, WindowRule};
use m4bench::runner::{read_results, run, RunManifest};
use m4bench::stats::{render_cd_svg, render_pairs, stats, to_json, StatTest};
use m4bench::DatasetSpec;
use tsforecast::eval::{MaseDenominator, Metric};

#[derive(Parser)]
#[command(name = "m4bench", about = "Run and analyse M4 forecasting benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate models on M4 datasets and write JSON-lines results.
    Run {
        /// Frequency name, comma-separated list, or `all`.
        #[arg(long)]
        dataset: String,
        /// Comma-separated model names. Naive2 is always added.
        #[arg(long, value_delimiter = ',')]
        models: Vec<String>,
        #[arg(long)]
        train_dir: PathBuf,
        #[arg(long)]
        test_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "as_formula")]
        mase_denominator: String,
        #[arg(long, default_value = "max")]
        window_rule: String,
        /// Deseasonalize the input of the boosted Theta-bc recipes.
        #[arg(long)]
        deseasonalize_residuals: bool,
    },
    /// Percentage differences between a results file and reference values.
    Compare {
        #[arg(long)]
        results: PathBuf,
        /// Reference CSV; defaults to the values bundled with the tool.
        #[arg(long)]
        published: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Significance tests over a complete model x series grid.
    Stats {
        #[arg(long)]
        results: PathBuf,
        /// friedman, nemenyi, wilcoxon_holm or ttest.
        #[arg(long)]
        test: String,
        #[arg(long, default_value = "smape")]
        metric: String,
        #[arg(long)]
        out: PathBuf,
        /// Critical-difference diagram (nemenyi only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run {
            dataset,
            models,
            train_dir,
            test_dir,
            out,
            jobs,
            seed,
            mase_denominator,
            window_rule,
            deseasonalize_residuals,
        } => {
            let manifest = RunManifest {
                datasets: DatasetSpec::resolve(&dataset, &train_dir, &test_dir)?,
                models,
                jobs,
                seed,
                mase_denominator: MaseDenominator::parse(&mase_denominator)
                    .ok_or_else(|| anyhow!("unknown MASE denominator {mase_denominator:?}"))?,
                recipe: RecipeConfig {
                    window_rule: WindowRule::parse(&window_rule)
                        .ok_or_else(|| anyhow!("unknown window rule {window_rule:?}"))?,
                    deseasonalize_residuals,
                },
                out,
            };
            let aggregate = run(&manifest, &Registry::new(manifest.recipe))?;
            println!(
                "{:<10}{:<18}{:>8}{:>8}{:>12}{:>12}{:>10}{:>10}",
                "dataset", "model", "series", "failed", "sMAPE", "MASE", "OWA", "rank"
            );
            let fmt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
            for s in &aggregate.summaries {
                println!(
                    "{:<10}{:<18}{:>8}{:>8}{:>12}{:>12}{:>10}{:>10}",
                    s.dataset,
                    s.model,
                    s.n_series,
                    s.n_failed,
                    fmt(s.smape, 3),
                    fmt(s.mase, 3),
                    fmt(s.owa, 3),
                    fmt(s.mean_rank_smape, 3)
                );
            }
            println!("total runtime {:.1}s", aggregate.total_runtime_s);
        }
        Command::Compare {
            results,
            published,
            out,
        } => {
            let (rows, _) = read_results(&results)?;
            let reference = match published {
                Some(p) => read_published(&p)?,
                None => m4bench::compare::parse_published(m4bench::compare::PUBLISHED_CSV)?,
            };
            let table = compare(&rows, &reference)?;
            write_csv(&out, &table)?;
            print!("{}", render_text(&table));
        }
        Command::Stats {
            results,
            test,
            metric,
            out,
            svg,
        } => {
            let test = StatTest::parse(&test).ok_or_else(|| anyhow!("unknown test {test:?}"))?;
            let metric = Metric::parse(&metric).ok_or_else(|| anyhow!("unknown metric {metric:?}"))?;
            let (rows, _) = read_results(&results)?;
            let report = stats(&rows, test, metric)?;
            std::fs::write(&out, to_json(&report)?).with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = svg {
                let cd = report
                    .cd
                    .as_ref()
                    .ok_or_else(|| anyhow!("--svg needs --test nemenyi"))?;
                std::fs::write(&path, render_cd_svg(cd)).with_context(|| format!("writing {}", path.display()))?;
            }
            for r in &report.mean_ranks {
                println!("{:<18}{:>10.3}", r.model, r.mean_rank);
            }
            if let Some(f) = &report.friedman {
                println!("Friedman chi2 = {:.4}, df = {}, p = {:.3e}", f.chi2, f.df, f.p);
            }
            if let Some(cd) = &report.critical_difference {
                println!("CD = {:.4} (alpha {})", cd.cd, cd.alpha);
            }
            if !report.pairs.is_empty() {
                print!("{}", render_pairs(&report));
            }
        }
    }
    Ok(())
}

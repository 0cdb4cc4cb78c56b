//! Runs an analysis from an inline TOML configuration and prints the text
//! report, then the same run with a deliberately flipped verdict.

use recurrence::config::AnalysisConfig;
use recurrence::report;

const CONFIG: &str = r#"
seed = 3
analyzers = ["all"]

[system]
kind = "substitution"
preset = "fibonacci"

[budget]
level = 2
radius = 128
samples = 6
"#;

fn main() -> recurrence::Result<()> {
    let config = AnalysisConfig::from_toml(CONFIG)?;
    print!("{}", report::run(&config)?.to_text());

    let faulty = AnalysisConfig::from_toml(&format!("{CONFIG}\n[fault]\nflip = \"pointwise-ap\"\n"))?;
    let report = report::run(&faulty)?;
    println!("\nwith a flipped verdict the run is consistent = {}", report.consistency.consistent);
    for v in &report.consistency.violations {
        println!("  {}: {}", v.rule, v.detail);
    }
    Ok(())
}

//! Cross-checks the nine conditions on a handful of catalog systems and
//! prints the trace of each run.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recurrence::analyzers::{cross_check_equivalences, AnalysisBudget};
use recurrence::flow::{
    build_odometer, build_one_dot_subshift, build_substitution_subshift, random_finite_action, SharedFlow,
};
use recurrence::group::Group;

fn main() -> recurrence::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let systems: Vec<SharedFlow> = vec![
        Arc::new(build_odometer(2)?),
        Arc::new(build_substitution_subshift("thue-morse", vec![vec![0, 1], vec![1, 0]])?),
        Arc::new(build_substitution_subshift("fibonacci", vec![vec![0, 1], vec![0]])?),
        Arc::new(build_one_dot_subshift()),
        Arc::new(random_finite_action(Group::free(2)?, 12, &mut rng)?),
    ];
    let budget = AnalysisBudget::new(3, 256, 8, 0);
    for sys in &systems {
        let start = std::time::Instant::now();
        let report = cross_check_equivalences(sys, &budget)?;
        println!("== {} ({:.2?})", report.system, start.elapsed());
        for line in &report.trace {
            println!("  {line}");
        }
        for v in &report.violations {
            println!("  VIOLATION {}: {}", v.rule, v.detail);
        }
    }
    Ok(())
}

//! Random actions of F2 and Z^2 on finite sets. Every point of a finite
//! system is almost periodic, so all nine conditions should hold.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recurrence::analyzers::{cross_check_equivalences, AnalysisBudget, Condition};
use recurrence::flow::{random_finite_action, FiniteAction, SharedFlow};
use recurrence::group::Group;
use recurrence::verdict::Outcome;

fn main() -> recurrence::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (group, size) in [(Group::free(2)?, 10), (Group::free_abelian(2)?, 12), (Group::symmetric3(), 14)] {
        let action: FiniteAction = random_finite_action(group, size, &mut rng)?;
        let orbit_sizes: Vec<usize> = action.orbits().iter().map(|o| o.len()).collect();
        let sys: SharedFlow = Arc::new(action);
        let report = cross_check_equivalences(&sys, &AnalysisBudget::new(1, 8, size, 0))?;
        let holding = Condition::ALL.iter().filter(|&&c| report.verdict(c).outcome == Outcome::True).count();
        println!(
            "{}: orbits {orbit_sizes:?}, {holding}/9 conditions hold, consistent = {}",
            report.system, report.consistent
        );
    }
    Ok(())
}

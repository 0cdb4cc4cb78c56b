//! The one-dot subshift, where the marked point is not recurrent and the
//! orbit closure relation fails to be closed.

use std::sync::Arc;

use recurrence::analyzers::{cross_check_equivalences, type1_bidirectional, AnalysisBudget, Condition};
use recurrence::flow::{build_one_dot_subshift, orbit_closure_cells, SharedFlow};

fn main() -> recurrence::Result<()> {
    let dot = build_one_dot_subshift();
    let x = dot.marked();
    for k in 1..=3 {
        let cells = orbit_closure_cells(&dot, &x, k, 32)?;
        println!("orbit of the marked point meets {} level-{k} cells", cells.cells.len());
    }
    let v = type1_bidirectional(&dot, &x, 2, 64)?;
    println!("type-I at the marked point: {} [{}]", v.outcome, v.note);

    let sys: SharedFlow = Arc::new(dot);
    let report = cross_check_equivalences(&sys, &AnalysisBudget::new(3, 128, 6, 0))?;
    for c in Condition::ALL {
        let v = report.verdict(c);
        println!("{:<32} {} (exact = {})", c.to_string(), v.outcome, v.exact);
    }
    Ok(())
}

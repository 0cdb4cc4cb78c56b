//! Thue-Morse and Fibonacci subshifts: language, recurrence and a
//! user-supplied substitution.

use recurrence::analyzers::check_recurrence_type1;
use recurrence::flow::{build_substitution_subshift, Flow, Substitution};

fn main() -> recurrence::Result<()> {
    for sys in [Substitution::thue_morse(), Substitution::fibonacci()] {
        let counts: Vec<usize> = (1..=8).map(|n| sys.language(n).len()).collect();
        println!("== {}: factor counts for n = 1..8: {counts:?}", sys.name());
        let seed = sys.seeds()[0];
        println!("  window around the fixed point: {}", sys.export_window(seed, -16, 16)?);
        let x = sys.base_points()[0].clone();
        let v = check_recurrence_type1(&sys, &x, 3, 256)?;
        println!("  type-I recurrent at {x}: {} (exact = {})", v.outcome, v.exact);
    }

    let period_doubling = build_substitution_subshift("period-doubling", vec![vec![0, 1], vec![0, 0]])?;
    println!("period doubling seeds: {:?}", period_doubling.seeds());
    match build_substitution_subshift("reducible", vec![vec![0, 0], vec![0, 1]]) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

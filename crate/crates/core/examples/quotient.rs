//! Collapsing orbit closures. The quotient exists for finite systems and
//! for minimal ones; the one-dot subshift is refused.

use recurrence::analyzers::quotient_by_orbit_closure;
use recurrence::flow::{build_finite_action, build_odometer, build_one_dot_subshift, Flow};
use recurrence::group::Group;

fn show(sys: &dyn Flow) {
    match quotient_by_orbit_closure(sys) {
        Ok(q) => println!(
            "{}: {} classes, zero-dimensional = {}, trivial action = {}, verified = {}",
            sys.name(),
            q.classes.len(),
            q.zero_dimensional,
            q.trivial_action,
            q.verified()
        ),
        Err(e) => println!("{}: refused ({e})", sys.name()),
    }
}

fn main() -> recurrence::Result<()> {
    let f2 = Group::free(2)?;
    show(&build_finite_action(f2, vec![vec![1, 2, 0, 4, 3], vec![2, 0, 1, 3, 4]])?);
    show(&build_odometer(3)?);
    show(&build_one_dot_subshift());
    Ok(())
}

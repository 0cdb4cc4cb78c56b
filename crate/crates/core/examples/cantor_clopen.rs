//! Clopen set algebra on the ternary odometer.

use recurrence::cantor::{separation_level, CellSpace, ClopenSet, Point};
use recurrence::flow::build_odometer;

fn main() -> recurrence::Result<()> {
    let odo = build_odometer(3)?;
    let x = Point::adic(0, 1);
    let a = ClopenSet::cylinder(odo.cell_of(&x, 1)?);
    let b = ClopenSet::cylinder(odo.cell_of(&Point::adic(4, 1), 2)?);
    let union = a.union(&b, &odo)?;
    println!("A = {}", a.describe(&odo));
    println!("B = {}", b.describe(&odo));
    println!("A ∪ B = {}", union.describe(&odo));
    println!("complement of A = {}", a.complement(&odo)?.describe(&odo));
    println!("A refined to level 2 = {}", a.refine(&odo, 2)?.describe(&odo));
    println!("B ⊆ A ∪ B: {}", b.is_subset(&union, &odo)?);

    for y in [Point::adic(9, 1), Point::adic(27, 1), Point::adic(1, 2)] {
        println!("0 and {y} separate at {:?}", separation_level(&odo, &x, &y, 8)?);
    }
    Ok(())
}

//! The dyadic odometer: returns to cylinders, almost periodicity and
//! equicontinuity.

use recurrence::analyzers::{check_ap, check_equicontinuous, check_regularly_ap, point_pool};
use recurrence::cantor::{CellSpace, ClopenSet, Point};
use recurrence::flow::{build_odometer, return_times, Flow};
use recurrence::group::Element;

fn main() -> recurrence::Result<()> {
    let odo = build_odometer(2)?;
    let x = Point::adic(1, 3);
    for level in 1..=4 {
        let cell = ClopenSet::cylinder(odo.cell_of(&x, level)?);
        let set = return_times(&odo, &x, &cell, 24)?;
        let times: Vec<i64> = set.elements.iter().filter_map(Element::as_int).collect();
        println!("returns of {x} to its level-{level} cell within 24: {times:?}");
    }

    let ap = check_ap(&odo, &x, 4, 256)?;
    println!("almost periodic: {} (exact = {})", ap.outcome, ap.exact);
    let rap = check_regularly_ap(&odo, &x, 4, 256)?;
    println!("regularly almost periodic: {} via {:?}", rap.outcome, rap.witness);

    let pool = point_pool(&odo, 8, 0);
    let eq = check_equicontinuous(&odo, 4, 128, &pool)?;
    println!("equicontinuous: {} [{}]", eq.outcome, eq.note);
    println!("{} moves {x} to {}", odo.name(), odo.act(&Element::Int(5), &x)?);
    Ok(())
}

//! Ball sizes and K-sets in the built-in groups.

use recurrence::group::{BallVariant, Element, Group, KVariant};

fn main() -> recurrence::Result<()> {
    let groups = [
        Group::integers(),
        Group::free_abelian(2)?,
        Group::free(2)?,
        Group::symmetric3(),
    ];
    for g in &groups {
        let sizes: Vec<usize> = (0..5)
            .map(|r| g.ball(r, BallVariant::Closed).map(|b| b.len()))
            .collect::<Result<_, _>>()?;
        println!("{:<8} |B_r|, r = 0..4: {sizes:?}", g.name());
    }

    let z = Group::integers();
    let k = z.k_set(&Element::Int(5), KVariant::Punctured)?;
    println!("K(5) in Z: {:?}", k.elements.iter().filter_map(Element::as_int).collect::<Vec<_>>());

    let f2 = Group::free(2)?;
    let g = f2.word("ab")?;
    let k = f2.k_set(&g, KVariant::Punctured)?;
    println!("K(ab) in F2 has {} elements", k.elements.len());
    let h = f2.word("a")?;
    println!("a in K(ab): {}", f2.in_k_set(&h, &g, KVariant::Punctured));
    Ok(())
}

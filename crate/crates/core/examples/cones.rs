//! Windowed cone approximations for a few length-divergent sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recurrence::analyzers::{sequence_battery, SequenceKind};
use recurrence::group::{Group, KVariant};

fn main() -> recurrence::Result<()> {
    let radius = 3;
    for group in [Group::integers(), Group::free_abelian(2)?, Group::free(2)?] {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let battery = sequence_battery(&group, &SequenceKind::defaults(), radius, &mut rng);
        println!("== {}", group.name());
        for (kind, seq) in &battery {
            let cone = group.cone_approx(seq, radius, KVariant::Punctured)?;
            println!(
                "  {kind:?}: lower {} / upper {} elements, stabilized = {}",
                cone.lower.len(),
                cone.upper.len(),
                cone.stabilized
            );
        }
    }
    Ok(())
}

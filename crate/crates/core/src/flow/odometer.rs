use std::collections::BTreeSet;

use rand::{Rng, RngCore};

use super::{root_or, Capabilities, Flow};
use crate::cantor::{gcd, Cell, CellKey, CellSpace, ClopenSet, Point};
use crate::group::{Element, Group};
use crate::verdict::{ExactReturns, SubgroupWitness};
use crate::{Error, Result};

const MAX_LEVEL_CELLS: u128 = 1 << 22;

/// The adding machine `x ↦ x + 1` on the b-adic integers.
///
/// Points are rationals with denominator coprime to the base, so every
/// address is eventually periodic. The level-`k` cell of `x` is `x mod b^k`.
#[derive(Debug)]
pub struct Odometer {
    base: u64,
    depth: usize,
    group: Group,
}

pub fn build_odometer(base: u64) -> Result<Odometer> {
    if base < 2 {
        return Err(Error::Config(format!("odometer base must be >= 2, got {base}")));
    }
    let mut depth = 0;
    while depth < 16 && (base as u128).pow(depth as u32 + 1) <= MAX_LEVEL_CELLS {
        depth += 1;
    }
    Ok(Odometer { base, depth, group: Group::integers() })
}

impl Odometer {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn modulus(&self, level: usize) -> u64 {
        self.base.pow(level as u32)
    }

    /// The b-adic point `0`.
    pub fn zero(&self) -> Point {
        Point::adic(0, 1)
    }

    fn residue(&self, x: &Point, level: usize) -> Result<u64> {
        let Point::Adic { num, den } = x else {
            return Err(Error::ForeignPoint(x.to_string()));
        };
        let m = self.modulus(level) as i128;
        if m == 1 {
            return Ok(0);
        }
        let inv = mod_inverse(den.rem_euclid(m), m)
            .ok_or_else(|| Error::ForeignPoint(format!("{x}: denominator not a unit")))?;
        Ok((num.rem_euclid(m) * inv).rem_euclid(m) as u64)
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

impl CellSpace for Odometer {
    fn depth(&self) -> usize {
        self.depth
    }

    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell> {
        self.check_level(level)?;
        let r = self.residue(x, level)?;
        Ok(root_or(level, || CellKey::Index(r)))
    }

    fn cells(&self, level: usize) -> Result<Vec<Cell>> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(vec![Cell::root()]);
        }
        Ok((0..self.modulus(level)).map(|r| Cell::new(level, CellKey::Index(r))).collect())
    }

    fn children(&self, cell: &Cell) -> Result<Vec<Cell>> {
        self.check_level(cell.level + 1)?;
        let r = match &cell.key {
            CellKey::Root => 0,
            CellKey::Index(r) => *r,
            other => return Err(Error::ForeignCell(format!("{other:?}"))),
        };
        let m = self.modulus(cell.level);
        Ok((0..self.base)
            .map(|d| Cell::new(cell.level + 1, CellKey::Index(r + d * m)))
            .collect())
    }

    fn parent(&self, cell: &Cell) -> Option<Cell> {
        match (&cell.key, cell.level) {
            (CellKey::Index(_), 1) => Some(Cell::root()),
            (CellKey::Index(r), k) if k > 1 => {
                Some(Cell::new(k - 1, CellKey::Index(r % self.modulus(k - 1))))
            }
            _ => None,
        }
    }

    /// Digits least significant first.
    fn label(&self, cell: &Cell) -> String {
        match &cell.key {
            CellKey::Index(r) => {
                let mut r = *r;
                let mut s = String::new();
                for _ in 0..cell.level {
                    let d = r % self.base;
                    s.push(std::char::from_digit(d as u32, 36).unwrap_or('?'));
                    r /= self.base;
                }
                s
            }
            _ => "*".into(),
        }
    }
}

impl Flow for Odometer {
    fn name(&self) -> String {
        format!("odometer(base {})", self.base)
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            exact_language: true,
            exact_return_sets: true,
            level_equivariant: true,
            finite: false,
        }
    }

    fn act(&self, g: &Element, x: &Point) -> Result<Point> {
        let Element::Int(n) = g else {
            return Err(Error::MixedGroups);
        };
        let Point::Adic { num, den } = x else {
            return Err(Error::ForeignPoint(x.to_string()));
        };
        Ok(Point::Adic { num: num + (*n as i128) * den, den: *den })
    }

    fn base_points(&self) -> Vec<Point> {
        let mut pts = vec![self.zero(), Point::adic(-1, 1)];
        let q = (2..).find(|&q| gcd(q, self.base as u128) == 1).unwrap() as i128;
        pts.push(Point::adic(1, q));
        pts
    }

    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point> {
        (0..n)
            .map(|_| loop {
                let den: i128 = rng.gen_range(1..=30);
                if gcd(den as u128, self.base as u128) == 1 {
                    let num: i128 = rng.gen_range(-10_000..=10_000);
                    break Point::adic(num, den);
                }
            })
            .collect()
    }

    fn exact_returns(&self, x: &Point, level: usize) -> Option<ExactReturns> {
        self.residue(x, level).ok()?;
        if level == 0 {
            return Some(ExactReturns::Everything);
        }
        let m = self.modulus(level);
        Some(ExactReturns::Subgroup {
            subgroup: SubgroupWitness::Multiples { modulus: m },
            transversal: (0..m as i64).map(Element::Int).collect(),
        })
    }

    fn exact_closure_cells(&self, _x: &Point, level: usize) -> Option<BTreeSet<CellKey>> {
        Some(self.cells(level).ok()?.into_iter().map(|c| c.key).collect())
    }

    fn closure_contains(&self, _x: &Point, _y: &Point) -> Option<bool> {
        Some(true)
    }

    fn is_minimal(&self) -> Option<bool> {
        Some(true)
    }

    fn designated_clopens(&self) -> Vec<ClopenSet> {
        (1..=2.min(self.depth))
            .filter_map(|k| self.cell_of(&self.zero(), k).ok().map(ClopenSet::cylinder))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::return_times;

    #[test]
    fn successor_carries() {
        let odo = build_odometer(2).unwrap();
        let one = odo.act(&Element::Int(1), &odo.zero()).unwrap();
        assert_eq!(odo.label(&odo.cell_of(&odo.zero(), 3).unwrap()), "000");
        assert_eq!(odo.label(&odo.cell_of(&one, 3).unwrap()), "100");
        let x = Point::adic(5, 7);
        assert_eq!(
            odo.cell_of(&odo.act(&Element::Int(8), &x).unwrap(), 3).unwrap(),
            odo.cell_of(&x, 3).unwrap()
        );
    }

    #[test]
    fn level_counts() {
        let odo = build_odometer(2).unwrap();
        for k in 0..6 {
            assert_eq!(odo.cells(k).unwrap().len(), 1 << k);
        }
        assert!(build_odometer(1).is_err());
    }

    #[test]
    fn rational_points_address_consistently() {
        let odo = build_odometer(3).unwrap();
        // -1/2 in Z_3 is ...1111 since 2·(...111) = ...222 = -1.
        let x = Point::adic(-1, 2);
        assert_eq!(odo.label(&odo.cell_of(&x, 4).unwrap()), "1111");
        assert!(odo.cell_of(&Point::adic(1, 3), 2).is_err());
    }

    #[test]
    fn zero_returns_at_level_two() {
        let odo = build_odometer(2).unwrap();
        let u = ClopenSet::cylinder(odo.cell_of(&odo.zero(), 2).unwrap());
        let r = return_times(&odo, &odo.zero(), &u, 10).unwrap();
        let got: Vec<i64> = r.elements.iter().filter_map(Element::as_int).collect();
        assert_eq!(got, vec![0, -4, 4, -8, 8]);
        assert!(r.exact);
    }
}

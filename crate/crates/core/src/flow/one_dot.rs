use std::collections::BTreeSet;

use rand::{Rng, RngCore};

use super::{root_or, Capabilities, Flow};
use crate::cantor::{Cell, CellKey, CellSpace, ClopenSet, Point};
use crate::group::{Element, Group};
use crate::verdict::ExactReturns;
use crate::{Error, Result};

/// Shift orbit closure of the indicator of `{0}`: the shifted marks plus the
/// all-zero fixed point.
///
/// `(n·x)[i] = x[i + n]`, so `n` moves a mark at `p` to `p - n`. Returns and
/// orbit closures are given in closed form.
#[derive(Debug)]
pub struct OneDot {
    depth: usize,
    group: Group,
}

pub fn build_one_dot_subshift() -> OneDot {
    OneDot { depth: 16, group: Group::integers() }
}

impl OneDot {
    /// The indicator of `{0}`.
    pub fn marked(&self) -> Point {
        Point::Mark { position: 0 }
    }

    pub fn zero(&self) -> Point {
        Point::Zero
    }

    fn window(&self, x: &Point, level: usize) -> Result<Vec<u8>> {
        let k = level as i64;
        let mut w = vec![0u8; 2 * level + 1];
        match x {
            Point::Zero => {}
            Point::Mark { position } => {
                if position.abs() <= k {
                    w[(position + k) as usize] = 1;
                }
            }
            _ => return Err(Error::ForeignPoint(x.to_string())),
        }
        Ok(w)
    }

    fn words(&self, level: usize) -> Vec<Vec<u8>> {
        let len = 2 * level + 1;
        let mut out = vec![vec![0u8; len]];
        for i in 0..len {
            let mut w = vec![0u8; len];
            w[i] = 1;
            out.push(w);
        }
        out.sort();
        out
    }
}

impl CellSpace for OneDot {
    fn depth(&self) -> usize {
        self.depth
    }

    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell> {
        self.check_level(level)?;
        let w = self.window(x, level)?;
        Ok(root_or(level, || CellKey::Word(w)))
    }

    fn cells(&self, level: usize) -> Result<Vec<Cell>> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(vec![Cell::root()]);
        }
        Ok(self.words(level).into_iter().map(|w| Cell::new(level, CellKey::Word(w))).collect())
    }

    fn children(&self, cell: &Cell) -> Result<Vec<Cell>> {
        self.check_level(cell.level + 1)?;
        let level = cell.level + 1;
        let words = self.words(level);
        let kids: Vec<Vec<u8>> = match &cell.key {
            CellKey::Root => words,
            CellKey::Word(w) => {
                words.into_iter().filter(|c| &c[1..c.len() - 1] == w.as_slice()).collect()
            }
            other => return Err(Error::ForeignCell(format!("{other:?}"))),
        };
        Ok(kids.into_iter().map(|w| Cell::new(level, CellKey::Word(w))).collect())
    }

    fn parent(&self, cell: &Cell) -> Option<Cell> {
        match (&cell.key, cell.level) {
            (CellKey::Word(_), 1) => Some(Cell::root()),
            (CellKey::Word(w), k) if k > 1 && w.len() >= 3 => {
                Some(Cell::new(k - 1, CellKey::Word(w[1..w.len() - 1].to_vec())))
            }
            _ => None,
        }
    }

    fn label(&self, cell: &Cell) -> String {
        match &cell.key {
            CellKey::Word(w) => w.iter().map(|s| char::from(b'0' + s)).collect(),
            _ => "*".into(),
        }
    }
}

impl Flow for OneDot {
    fn name(&self) -> String {
        "one-dot".into()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            exact_language: true,
            exact_return_sets: true,
            level_equivariant: false,
            finite: false,
        }
    }

    fn act(&self, g: &Element, x: &Point) -> Result<Point> {
        let Element::Int(n) = g else {
            return Err(Error::MixedGroups);
        };
        match x {
            Point::Zero => Ok(Point::Zero),
            Point::Mark { position } => Ok(Point::Mark { position: position - n }),
            _ => Err(Error::ForeignPoint(x.to_string())),
        }
    }

    fn base_points(&self) -> Vec<Point> {
        vec![self.marked(), self.zero()]
    }

    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point> {
        (0..n)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    Point::Zero
                } else {
                    Point::Mark { position: rng.gen_range(-64..=64) }
                }
            })
            .collect()
    }

    fn exact_returns(&self, x: &Point, level: usize) -> Option<ExactReturns> {
        let k = level as i64;
        match x {
            Point::Zero => Some(ExactReturns::Everything),
            _ if level == 0 => Some(ExactReturns::Everything),
            Point::Mark { position } if position.abs() <= k => {
                Some(ExactReturns::Finite { elements: vec![Element::Int(0)] })
            }
            // The window is all zeros; returns fail only while the mark is visible.
            Point::Mark { position } => Some(ExactReturns::Cofinite {
                excluded: (position - k..=position + k).map(Element::Int).collect(),
            }),
            _ => None,
        }
    }

    fn exact_closure_cells(&self, x: &Point, level: usize) -> Option<BTreeSet<CellKey>> {
        let all: BTreeSet<CellKey> =
            self.cells(level).ok()?.into_iter().map(|c| c.key).collect();
        match x {
            Point::Zero => Some(BTreeSet::from([self.cell_of(&Point::Zero, level).ok()?.key])),
            Point::Mark { .. } => Some(all),
            _ => None,
        }
    }

    fn closure_contains(&self, x: &Point, y: &Point) -> Option<bool> {
        match (x, y) {
            (Point::Mark { .. }, Point::Mark { .. } | Point::Zero) => Some(true),
            (Point::Zero, Point::Zero) => Some(true),
            (Point::Zero, Point::Mark { .. }) => Some(false),
            _ => None,
        }
    }

    fn is_minimal(&self) -> Option<bool> {
        Some(false)
    }

    /// Cylinders of the zero point at levels 1 to 3.
    fn designated_clopens(&self) -> Vec<ClopenSet> {
        (1..=3)
            .filter_map(|k| self.cell_of(&Point::Zero, k).ok().map(ClopenSet::cylinder))
            .collect()
    }

    fn probe_pairs(&self) -> Vec<(Point, Point)> {
        vec![(self.marked(), self.zero())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_shifts() {
        let od = build_one_dot_subshift();
        assert_eq!(od.label(&od.cell_of(&od.marked(), 1).unwrap()), "010");
        assert_eq!(od.cell_of(&od.marked(), 0).unwrap(), Cell::root());
        let y = od.act(&Element::Int(3), &od.marked()).unwrap();
        assert_eq!(y, Point::Mark { position: -3 });
        for k in 1..6 {
            assert_eq!(od.cells(k).unwrap().len(), 2 * k + 2);
        }
    }

    #[test]
    fn closures() {
        let od = build_one_dot_subshift();
        assert_eq!(od.exact_closure_cells(&Point::Zero, 2).unwrap().len(), 1);
        assert_eq!(od.closure_contains(&Point::Zero, &od.marked()), Some(false));
        assert_eq!(od.closure_contains(&od.marked(), &Point::Zero), Some(true));
    }
}

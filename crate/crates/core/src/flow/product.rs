use std::collections::{BTreeSet, HashMap};

use rand::RngCore;

use super::{Capabilities, Flow, SharedFlow};
use crate::cantor::{Cell, CellKey, CellSpace, ClopenSet, Point};
use crate::group::{Element, Group};
use crate::verdict::{ExactReturns, SubgroupWitness};
use crate::{Error, Result};

const MAX_PRODUCT_CELLS: usize = 1 << 20;

/// The diagonal action `g·(x, y) = (g·x, g·y)` on `X × X`. Level-`k` cells are
/// ordered pairs of level-`k` cells.
pub struct ProductFlow {
    base: SharedFlow,
}

pub fn product(base: SharedFlow) -> ProductFlow {
    ProductFlow { base }
}

fn split(p: &Point) -> Result<(&Point, &Point)> {
    match p {
        Point::Pair { first, second } => Ok((first, second)),
        _ => Err(Error::ForeignPoint(p.to_string())),
    }
}

fn split_key(key: &CellKey) -> Result<(&CellKey, &CellKey)> {
    match key {
        CellKey::Pair(a, b) => Ok((a, b)),
        other => Err(Error::ForeignCell(format!("{other:?}"))),
    }
}

impl ProductFlow {
    pub fn base(&self) -> &SharedFlow {
        &self.base
    }

    /// `Δ_X` at level `level`: all cells `(c, c)`.
    pub fn diagonal(&self, level: usize) -> Result<ClopenSet> {
        if level == 0 {
            return Ok(ClopenSet::full());
        }
        let cells = self.base.cells(level)?;
        ClopenSet::from_cells(self, level, cells.into_iter().map(|c| CellKey::pair(c.key.clone(), c.key)))
    }

    /// Orbit of a pair with BFS transversal; finite bases only.
    fn finite_orbit(&self, x: &Point) -> Option<Vec<(Point, Element)>> {
        self.base.all_points()?;
        let group = self.base.group();
        let mut seen: HashMap<Point, ()> = HashMap::from([(x.clone(), ())]);
        let mut out = vec![(x.clone(), group.identity())];
        let mut head = 0;
        while head < out.len() {
            let (y, g) = out[head].clone();
            head += 1;
            for s in group.gamma() {
                let z = self.act(s, &y).ok()?;
                if seen.insert(z.clone(), ()).is_none() {
                    out.push((z, group.compose_unchecked(s, &g)));
                }
            }
        }
        Some(out)
    }
}

impl CellSpace for ProductFlow {
    fn depth(&self) -> usize {
        self.base.depth()
    }

    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell> {
        let (a, b) = split(x)?;
        let ca = self.base.cell_of(a, level)?;
        let cb = self.base.cell_of(b, level)?;
        if level == 0 {
            return Ok(Cell::root());
        }
        Ok(Cell::new(level, CellKey::pair(ca.key, cb.key)))
    }

    fn cells(&self, level: usize) -> Result<Vec<Cell>> {
        if level == 0 {
            return Ok(vec![Cell::root()]);
        }
        let cells = self.base.cells(level)?;
        if cells.len().saturating_mul(cells.len()) > MAX_PRODUCT_CELLS {
            return Err(Error::Budget(format!("{}² product cells at level {level}", cells.len())));
        }
        let mut out = Vec::with_capacity(cells.len() * cells.len());
        for a in &cells {
            for b in &cells {
                out.push(Cell::new(level, CellKey::pair(a.key.clone(), b.key.clone())));
            }
        }
        Ok(out)
    }

    fn children(&self, cell: &Cell) -> Result<Vec<Cell>> {
        let (ka, kb) = match &cell.key {
            CellKey::Root => (CellKey::Root, CellKey::Root),
            key => {
                let (a, b) = split_key(key)?;
                (a.clone(), b.clone())
            }
        };
        let ca = self.base.children(&Cell::new(cell.level, ka))?;
        let cb = self.base.children(&Cell::new(cell.level, kb))?;
        let mut out = Vec::new();
        for a in &ca {
            for b in &cb {
                out.push(Cell::new(cell.level + 1, CellKey::pair(a.key.clone(), b.key.clone())));
            }
        }
        Ok(out)
    }

    fn parent(&self, cell: &Cell) -> Option<Cell> {
        let (a, b) = split_key(&cell.key).ok()?;
        let pa = self.base.parent(&Cell::new(cell.level, a.clone()))?;
        let pb = self.base.parent(&Cell::new(cell.level, b.clone()))?;
        if cell.level == 1 {
            return Some(Cell::root());
        }
        Some(Cell::new(cell.level - 1, CellKey::pair(pa.key, pb.key)))
    }

    fn label(&self, cell: &Cell) -> String {
        match split_key(&cell.key) {
            Ok((a, b)) => format!(
                "({},{})",
                self.base.label(&Cell::new(cell.level, a.clone())),
                self.base.label(&Cell::new(cell.level, b.clone()))
            ),
            Err(_) => "*".into(),
        }
    }
}

impl Flow for ProductFlow {
    fn name(&self) -> String {
        format!("{} x {}", self.base.name(), self.base.name())
    }

    fn group(&self) -> &Group {
        self.base.group()
    }

    fn capabilities(&self) -> Capabilities {
        let c = self.base.capabilities();
        Capabilities {
            exact_language: c.finite,
            exact_return_sets: c.finite,
            level_equivariant: c.level_equivariant,
            finite: c.finite,
        }
    }

    fn act(&self, g: &Element, x: &Point) -> Result<Point> {
        let (a, b) = split(x)?;
        Ok(Point::pair(self.base.act(g, a)?, self.base.act(g, b)?))
    }

    fn base_points(&self) -> Vec<Point> {
        let pts = self.base.base_points();
        let mut out = Vec::new();
        for a in pts.iter().take(8) {
            for b in pts.iter().take(8) {
                out.push(Point::pair(a.clone(), b.clone()));
            }
        }
        out
    }

    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point> {
        let a = self.base.sample_points(rng, n);
        let b = self.base.sample_points(rng, n);
        a.into_iter().zip(b).map(|(x, y)| Point::pair(x, y)).collect()
    }

    fn exact_returns(&self, x: &Point, level: usize) -> Option<ExactReturns> {
        let orbit = self.finite_orbit(x)?;
        if level == 0 {
            return Some(ExactReturns::Everything);
        }
        let all = self.base.all_points()?;
        let (a, b) = split(x).ok()?;
        let pos = |p: &Point| all.iter().position(|q| q == p);
        let point = pos(a)? * all.len() + pos(b)?;
        Some(ExactReturns::Subgroup {
            subgroup: SubgroupWitness::Stabilizer { point, index: orbit.len() },
            transversal: orbit.into_iter().map(|(_, g)| g).collect(),
        })
    }

    fn exact_closure_cells(&self, x: &Point, level: usize) -> Option<BTreeSet<CellKey>> {
        let orbit = self.finite_orbit(x)?;
        orbit.iter().map(|(p, _)| self.cell_of(p, level).ok().map(|c| c.key)).collect()
    }

    fn closure_contains(&self, x: &Point, y: &Point) -> Option<bool> {
        Some(self.finite_orbit(x)?.iter().any(|(p, _)| p == y))
    }

    fn all_points(&self) -> Option<Vec<Point>> {
        let pts = self.base.all_points()?;
        let mut out = Vec::new();
        for a in &pts {
            for b in &pts {
                out.push(Point::pair(a.clone(), b.clone()));
            }
        }
        Some(out)
    }

    fn is_minimal(&self) -> Option<bool> {
        let pts = self.all_points()?;
        Some(self.finite_orbit(&pts[0])?.len() == pts.len())
    }
}

//! Zero-dimensional compact spaces as refining chains of finite clopen
//! partitions.
//!
//! Level `0` is always the one-cell partition and level `k + 1` refines level
//! `k`. Points are finite descriptors that a [`CellSpace`] can address at any
//! supported level; clopen sets are finite unions of cells of one level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// A point with a finite descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Point {
    /// The b-adic integer `num / den`, `den > 0` coprime to the base.
    Adic { num: i128, den: i128 },
    /// The shift by `offset` of the two-sided substitutive point grown from
    /// the seed `left.right` (coordinates `-1` and `0`).
    Shift { left: u8, right: u8, offset: i64 },
    /// The sequence with a single `1` at `position`.
    Mark { position: i64 },
    /// The all-zero sequence.
    Zero,
    /// A point of a finite space.
    Finite { index: usize },
    Pair { first: Box<Point>, second: Box<Point> },
}

impl Point {
    pub fn adic(num: i128, den: i128) -> Self {
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        Point::Adic { num, den }
    }

    pub fn pair(first: Point, second: Point) -> Self {
        Point::Pair { first: Box::new(first), second: Box::new(second) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Adic { num, den } if *den == 1 => write!(f, "{num}"),
            Point::Adic { num, den } => write!(f, "{num}/{den}"),
            Point::Shift { left, right, offset } => write!(f, "T^{offset}({left}.{right})"),
            Point::Mark { position } => write!(f, "mark@{position}"),
            Point::Zero => write!(f, "zero"),
            Point::Finite { index } => write!(f, "p{index}"),
            Point::Pair { first, second } => write!(f, "({first}, {second})"),
        }
    }
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Identifier of a cell inside its level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKey {
    Root,
    Index(u64),
    Word(Vec<u8>),
    Pair(Box<CellKey>, Box<CellKey>),
}

impl CellKey {
    pub fn pair(a: CellKey, b: CellKey) -> Self {
        CellKey::Pair(Box::new(a), Box::new(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub level: usize,
    pub key: CellKey,
}

impl Cell {
    pub fn root() -> Self {
        Cell { level: 0, key: CellKey::Root }
    }

    pub fn new(level: usize, key: CellKey) -> Self {
        Cell { level, key }
    }
}

/// A space presented by its partition chain.
pub trait CellSpace: Send + Sync {
    /// Deepest supported level.
    fn depth(&self) -> usize;

    /// The level-`level` cell containing `x`.
    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell>;

    /// Every cell of the level, in canonical order.
    fn cells(&self, level: usize) -> Result<Vec<Cell>>;

    /// The level-`k+1` cells partitioning `cell`.
    fn children(&self, cell: &Cell) -> Result<Vec<Cell>>;

    fn parent(&self, cell: &Cell) -> Option<Cell>;

    fn label(&self, cell: &Cell) -> String;

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            Err(Error::Depth { requested: level, supported: self.depth() })
        } else {
            Ok(())
        }
    }
}

/// Result of [`separation_level`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separation {
    /// First level at which the cells differ.
    At(usize),
    /// The cells agree at every level up to and including the depth.
    Beyond(usize),
}

impl Separation {
    /// Levels `0..value` agree.
    pub fn value(self) -> usize {
        match self {
            Separation::At(k) => k,
            Separation::Beyond(d) => d + 1,
        }
    }
}

/// Least `k ≤ depth` at which `x` and `y` sit in different cells.
pub fn separation_level(space: &dyn CellSpace, x: &Point, y: &Point, depth: usize) -> Result<Separation> {
    let depth = depth.min(space.depth());
    if x == y {
        return Ok(Separation::Beyond(depth));
    }
    for k in 0..=depth {
        if space.cell_of(x, k)? != space.cell_of(y, k)? {
            return Ok(Separation::At(k));
        }
    }
    Ok(Separation::Beyond(depth))
}

/// A finite union of level-`level` cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClopenSet {
    pub level: usize,
    pub cells: BTreeSet<CellKey>,
}

impl ClopenSet {
    pub fn empty() -> Self {
        ClopenSet { level: 0, cells: BTreeSet::new() }
    }

    pub fn full() -> Self {
        ClopenSet { level: 0, cells: BTreeSet::from([CellKey::Root]) }
    }

    /// A single cell.
    pub fn cylinder(cell: Cell) -> Self {
        ClopenSet { level: cell.level, cells: BTreeSet::from([cell.key]) }
    }

    /// Builds a set from level-`level` cells and brings it to normal form.
    pub fn from_cells(
        space: &dyn CellSpace,
        level: usize,
        cells: impl IntoIterator<Item = CellKey>,
    ) -> Result<Self> {
        space.check_level(level)?;
        let set = ClopenSet { level, cells: cells.into_iter().collect() };
        let valid: BTreeSet<CellKey> = space.cells(level)?.into_iter().map(|c| c.key).collect();
        if let Some(bad) = set.cells.iter().find(|c| !valid.contains(c)) {
            return Err(Error::ForeignCell(format!("{bad:?}")));
        }
        set.normalize(space)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, space: &dyn CellSpace, x: &Point) -> Result<bool> {
        Ok(self.cells.contains(&space.cell_of(x, self.level)?.key))
    }

    /// Same point set represented at the finer level `level`.
    pub fn refine(&self, space: &dyn CellSpace, level: usize) -> Result<ClopenSet> {
        if level < self.level {
            return Err(Error::Coarsen { from: self.level, to: level });
        }
        space.check_level(level)?;
        let mut current: Vec<Cell> =
            self.cells.iter().map(|k| Cell::new(self.level, k.clone())).collect();
        for _ in self.level..level {
            let mut next = Vec::new();
            for c in &current {
                next.extend(space.children(c)?);
            }
            current = next;
        }
        Ok(ClopenSet { level, cells: current.into_iter().map(|c| c.key).collect() })
    }

    /// Coarsest representation: lift while every touched parent is fully
    /// covered by its children.
    pub fn normalize(&self, space: &dyn CellSpace) -> Result<ClopenSet> {
        let mut level = self.level;
        let mut cells = self.cells.clone();
        if cells.is_empty() {
            return Ok(ClopenSet::empty());
        }
        while level > 0 {
            let mut by_parent: BTreeMap<CellKey, usize> = BTreeMap::new();
            for k in &cells {
                let parent = space
                    .parent(&Cell::new(level, k.clone()))
                    .ok_or_else(|| Error::ForeignCell(format!("{k:?} has no parent")))?;
                *by_parent.entry(parent.key).or_default() += 1;
            }
            let mut complete = true;
            for (p, count) in &by_parent {
                let family = space.children(&Cell::new(level - 1, p.clone()))?;
                if family.len() != *count {
                    complete = false;
                    break;
                }
            }
            if !complete {
                break;
            }
            cells = by_parent.into_keys().collect();
            level -= 1;
        }
        Ok(ClopenSet { level, cells })
    }

    fn aligned(
        &self,
        other: &ClopenSet,
        space: &dyn CellSpace,
    ) -> Result<(usize, BTreeSet<CellKey>, BTreeSet<CellKey>)> {
        let level = self.level.max(other.level);
        Ok((level, self.refine(space, level)?.cells, other.refine(space, level)?.cells))
    }

    pub fn union(&self, other: &ClopenSet, space: &dyn CellSpace) -> Result<ClopenSet> {
        let (level, a, b) = self.aligned(other, space)?;
        ClopenSet { level, cells: a.union(&b).cloned().collect() }.normalize(space)
    }

    pub fn intersect(&self, other: &ClopenSet, space: &dyn CellSpace) -> Result<ClopenSet> {
        let (level, a, b) = self.aligned(other, space)?;
        ClopenSet { level, cells: a.intersection(&b).cloned().collect() }.normalize(space)
    }

    pub fn complement(&self, space: &dyn CellSpace) -> Result<ClopenSet> {
        let all = space.cells(self.level)?;
        let cells = all.into_iter().map(|c| c.key).filter(|k| !self.cells.contains(k));
        ClopenSet { level: self.level, cells: cells.collect() }.normalize(space)
    }

    pub fn is_subset(&self, other: &ClopenSet, space: &dyn CellSpace) -> Result<bool> {
        let (_, a, b) = self.aligned(other, space)?;
        Ok(a.is_subset(&b))
    }

    /// Equality of the underlying point sets.
    pub fn same_set(&self, other: &ClopenSet, space: &dyn CellSpace) -> Result<bool> {
        Ok(self.normalize(space)? == other.normalize(space)?)
    }

    pub fn is_full(&self, space: &dyn CellSpace) -> Result<bool> {
        Ok(self.normalize(space)? == ClopenSet::full())
    }

    pub fn describe(&self, space: &dyn CellSpace) -> String {
        let labels: Vec<String> =
            self.cells.iter().map(|k| space.label(&Cell::new(self.level, k.clone()))).collect();
        format!("L{}{{{}}}", self.level, labels.join(","))
    }
}

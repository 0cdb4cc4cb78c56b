use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::{root_or, Capabilities, Flow};
use crate::cantor::{Cell, CellKey, CellSpace, Point};
use crate::group::{Element, Group, GroupKind};
use crate::verdict::{ExactReturns, SubgroupWitness};
use crate::{Error, Result};

const MAX_POINTS: usize = 4096;

/// A group acting on `{0, …, m-1}` by permutations. Level `0` is the
/// trivial partition and every deeper level is discrete.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    group: Group,
    size: usize,
    generator_perms: Vec<Vec<usize>>,
    inverse_perms: Vec<Vec<usize>>,
    /// Per table index, for finite table groups.
    element_perms: Option<Vec<Vec<usize>>>,
    depth: usize,
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `(p ∘ q)[x] = p[q[x]]`.
fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// Builds the action after checking it respects the group's relations.
pub fn build_finite_action(group: Group, perms: Vec<Vec<usize>>) -> Result<FiniteAction> {
    if perms.len() != group.generators().len() {
        return Err(Error::InvalidPermutation(format!(
            "{} permutations for {} generators",
            perms.len(),
            group.generators().len()
        )));
    }
    let size = perms.first().map_or(0, Vec::len);
    if size == 0 || size > MAX_POINTS {
        return Err(Error::InvalidPermutation(format!("space size {size} outside 1..={MAX_POINTS}")));
    }
    for p in &perms {
        let distinct: BTreeSet<usize> = p.iter().copied().collect();
        if p.len() != size || distinct.len() != size || p.iter().any(|&v| v >= size) {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a permutation of 0..{size}")));
        }
    }
    let inverse_perms: Vec<Vec<usize>> = perms.iter().map(|p| invert_perm(p)).collect();
    let mut element_perms = None;
    match group.kind() {
        GroupKind::Integers | GroupKind::Free { .. } => {}
        GroupKind::FreeAbelian { .. } => {
            for i in 0..perms.len() {
                for j in i + 1..perms.len() {
                    if compose_perm(&perms[i], &perms[j]) != compose_perm(&perms[j], &perms[i]) {
                        return Err(Error::Relation(format!(
                            "[{}, {}]",
                            group.generators()[i],
                            group.generators()[j]
                        )));
                    }
                }
            }
        }
        GroupKind::Finite(table) => {
            let n = table.order();
            let Element::Table(e) = group.identity() else { unreachable!() };
            let gens: Vec<(usize, Vec<usize>)> = group
                .generators()
                .iter()
                .zip(perms.iter().zip(&inverse_perms))
                .flat_map(|(g, (p, q))| {
                    let Element::Table(i) = g else { unreachable!() };
                    let Element::Table(j) = group.invert_unchecked(g) else { unreachable!() };
                    [(*i, p.clone()), (j, q.clone())]
                })
                .collect();
            let mut assigned: Vec<Option<Vec<usize>>> = vec![None; n];
            assigned[e] = Some((0..size).collect());
            let mut queue = VecDeque::from([e]);
            while let Some(a) = queue.pop_front() {
                let pa = assigned[a].clone().unwrap();
                for (s, ps) in &gens {
                    let b = table.product(a, *s);
                    let pb = compose_perm(&pa, ps);
                    match &assigned[b] {
                        None => {
                            assigned[b] = Some(pb);
                            queue.push_back(b);
                        }
                        Some(existing) if *existing != pb => {
                            return Err(Error::Relation(format!("#{a}·#{s} = #{b}")));
                        }
                        Some(_) => {}
                    }
                }
            }
            element_perms = Some(assigned.into_iter().map(Option::unwrap).collect());
        }
        GroupKind::Product(_) => {
            return Err(Error::InvalidPermutation(
                "finite actions of product groups are not supported".into(),
            ))
        }
    }
    Ok(FiniteAction { group, size, generator_perms: perms, inverse_perms, element_perms, depth: 16 })
}

/// A random action on `size` points for `Z`, `Z^d`, `F_k` or a finite table
/// group.
///
/// `Z^d` generators are powers of one random permutation, so they commute.
/// Finite groups act by a random number of copies of the left-regular action
/// plus fixed points, under a random relabelling.
pub fn random_finite_action(group: Group, size: usize, rng: &mut dyn RngCore) -> Result<FiniteAction> {
    let random_perm = |rng: &mut dyn RngCore| {
        let mut p: Vec<usize> = (0..size).collect();
        p.shuffle(rng);
        p
    };
    let k = group.generators().len();
    let perms = match group.kind() {
        GroupKind::FreeAbelian { .. } => {
            let base = random_perm(rng);
            (0..k)
                .map(|_| {
                    let e: usize = rng.gen_range(0..4);
                    let mut p: Vec<usize> = (0..size).collect();
                    for _ in 0..e {
                        p = compose_perm(&base, &p);
                    }
                    p
                })
                .collect()
        }
        GroupKind::Finite(table) => {
            let order = table.order();
            let copies = rng.gen_range(0..=size / order);
            let label = random_perm(rng);
            group
                .generators()
                .iter()
                .map(|g| {
                    let Element::Table(s) = g else { unreachable!("table groups have table generators") };
                    let mut p: Vec<usize> = (0..size).collect();
                    for c in 0..copies {
                        for h in 0..order {
                            p[label[c * order + h]] = label[c * order + table.product(*s, h)];
                        }
                    }
                    p
                })
                .collect()
        }
        GroupKind::Product(_) => {
            return Err(Error::InvalidGroup("random actions of product groups are not supported".into()))
        }
        _ => (0..k).map(|_| random_perm(rng)).collect(),
    };
    build_finite_action(group, perms)
}

impl FiniteAction {
    pub fn size(&self) -> usize {
        self.size
    }

    fn index(x: &Point) -> Result<usize> {
        match x {
            Point::Finite { index } => Ok(*index),
            _ => Err(Error::ForeignPoint(x.to_string())),
        }
    }

    fn power(&self, gen: usize, n: i64, x: usize) -> usize {
        let perm = if n >= 0 { &self.generator_perms[gen] } else { &self.inverse_perms[gen] };
        let mut cycle = vec![x];
        let mut y = perm[x];
        while y != x {
            cycle.push(y);
            y = perm[y];
        }
        cycle[(n.unsigned_abs() % cycle.len() as u64) as usize]
    }

    fn act_index(&self, g: &Element, x: usize) -> Result<usize> {
        self.group.check(g)?;
        Ok(match g {
            Element::Int(n) => self.power(0, *n, x),
            Element::Vector(v) => {
                let mut y = x;
                for (i, &n) in v.iter().enumerate() {
                    y = self.power(i, n, y);
                }
                y
            }
            Element::Word(w) => {
                let mut y = x;
                for &l in w.iter().rev() {
                    let i = (l.unsigned_abs() - 1) as usize;
                    y = if l > 0 { self.generator_perms[i][y] } else { self.inverse_perms[i][y] };
                }
                y
            }
            Element::Table(i) => self.element_perms.as_ref().expect("table action")[*i][x],
            Element::Tuple(_) => return Err(Error::MixedGroups),
        })
    }

    /// Orbit of `x` with a shortest `g_y` (BFS over `Γ`) for each `y = g_y·x`.
    pub fn orbit_with_transversal(&self, x: usize) -> Vec<(usize, Element)> {
        let mut seen = vec![false; self.size];
        seen[x] = true;
        let mut out = vec![(x, self.group.identity())];
        let mut head = 0;
        while head < out.len() {
            let (y, g) = out[head].clone();
            head += 1;
            for s in self.group.gamma() {
                let z = self.act_index(s, y).expect("gamma acts");
                if !seen[z] {
                    seen[z] = true;
                    out.push((z, self.group.compose_unchecked(s, &g)));
                }
            }
        }
        out
    }

    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        self.orbit_with_transversal(x).into_iter().map(|(y, _)| y).collect()
    }

    /// Orbits in order of their least point.
    pub fn orbits(&self) -> Vec<BTreeSet<usize>> {
        let mut covered = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if !covered[x] {
                let o = self.orbit(x);
                for &y in &o {
                    covered[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Image of `x` under a member of `Γ`.
    pub fn gamma_images(&self, x: usize) -> Vec<usize> {
        self.group.gamma().iter().map(|s| self.act_index(s, x).expect("gamma acts")).collect()
    }
}

impl CellSpace for FiniteAction {
    fn depth(&self) -> usize {
        self.depth
    }

    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell> {
        self.check_level(level)?;
        let i = Self::index(x)?;
        if i >= self.size {
            return Err(Error::ForeignPoint(x.to_string()));
        }
        Ok(root_or(level, || CellKey::Index(i as u64)))
    }

    fn cells(&self, level: usize) -> Result<Vec<Cell>> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(vec![Cell::root()]);
        }
        Ok((0..self.size as u64).map(|i| Cell::new(level, CellKey::Index(i))).collect())
    }

    fn children(&self, cell: &Cell) -> Result<Vec<Cell>> {
        self.check_level(cell.level + 1)?;
        match &cell.key {
            CellKey::Root => self.cells(1),
            CellKey::Index(i) => Ok(vec![Cell::new(cell.level + 1, CellKey::Index(*i))]),
            other => Err(Error::ForeignCell(format!("{other:?}"))),
        }
    }

    fn parent(&self, cell: &Cell) -> Option<Cell> {
        match (&cell.key, cell.level) {
            (CellKey::Index(_), 1) => Some(Cell::root()),
            (CellKey::Index(i), k) if k > 1 => Some(Cell::new(k - 1, CellKey::Index(*i))),
            _ => None,
        }
    }

    fn label(&self, cell: &Cell) -> String {
        match &cell.key {
            CellKey::Index(i) => format!("p{i}"),
            _ => "*".into(),
        }
    }
}

impl Flow for FiniteAction {
    fn name(&self) -> String {
        format!("finite-action({} on {} points)", self.group.name(), self.size)
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            exact_language: true,
            exact_return_sets: true,
            level_equivariant: true,
            finite: true,
        }
    }

    fn act(&self, g: &Element, x: &Point) -> Result<Point> {
        let i = Self::index(x)?;
        if i >= self.size {
            return Err(Error::ForeignPoint(x.to_string()));
        }
        Ok(Point::Finite { index: self.act_index(g, i)? })
    }

    fn base_points(&self) -> Vec<Point> {
        (0..self.size).map(|index| Point::Finite { index }).collect()
    }

    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point> {
        (0..n).map(|_| Point::Finite { index: rng.gen_range(0..self.size) }).collect()
    }

    fn exact_returns(&self, x: &Point, level: usize) -> Option<ExactReturns> {
        let i = Self::index(x).ok()?;
        if level == 0 {
            return Some(ExactReturns::Everything);
        }
        let orbit = self.orbit_with_transversal(i);
        Some(ExactReturns::Subgroup {
            subgroup: SubgroupWitness::Stabilizer { point: i, index: orbit.len() },
            transversal: orbit.into_iter().map(|(_, g)| g).collect(),
        })
    }

    fn exact_closure_cells(&self, x: &Point, level: usize) -> Option<BTreeSet<CellKey>> {
        let i = Self::index(x).ok()?;
        if level == 0 {
            return Some(BTreeSet::from([CellKey::Root]));
        }
        Some(self.orbit(i).into_iter().map(|y| CellKey::Index(y as u64)).collect())
    }

    fn closure_contains(&self, x: &Point, y: &Point) -> Option<bool> {
        Some(self.orbit(Self::index(x).ok()?).contains(&Self::index(y).ok()?))
    }

    fn is_minimal(&self) -> Option<bool> {
        Some(self.orbits().len() == 1)
    }

    fn all_points(&self) -> Option<Vec<Point>> {
        Some(self.base_points())
    }
}

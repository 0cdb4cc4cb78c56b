use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use rand::{Rng, RngCore};

use super::{Capabilities, Flow};
use crate::cantor::{Cell, CellKey, CellSpace, Point};
use crate::group::{Element, Group};
use crate::{Error, Result};

const MAX_ALPHABET: usize = 8;
const MAX_COORDINATE: u64 = 1 << 24;

/// The two half-lines of a substitutive point: `right[i] = x[i]`,
/// `left[j] = x[-1-j]`.
#[derive(Clone, Debug, Default)]
struct Halves {
    right: Vec<u8>,
    left: Vec<u8>,
}

/// Shift on the orbit closure of a two-sided fixed point of a primitive
/// substitution.
#[derive(Debug)]
pub struct Substitution {
    name: String,
    rules: Vec<Vec<u8>>,
    power: usize,
    seeds: Vec<(u8, u8)>,
    depth: usize,
    group: Group,
    halves: Mutex<HashMap<(u8, u8), Halves>>,
    languages: Mutex<HashMap<usize, Arc<BTreeSet<Vec<u8>>>>>,
}

fn incidence(rules: &[Vec<u8>]) -> Vec<Vec<u64>> {
    let m = rules.len();
    let mut mat = vec![vec![0u64; m]; m];
    for (a, image) in rules.iter().enumerate() {
        for &c in image {
            mat[a][c as usize] += 1;
        }
    }
    mat
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| a[i][k].saturating_mul(b[k][j])).fold(0, u64::saturating_add))
                .collect()
        })
        .collect()
}

fn apply(rules: &[Vec<u8>], word: &[u8]) -> Vec<u8> {
    word.iter().flat_map(|&c| rules[c as usize].iter().copied()).collect()
}

fn apply_n(rules: &[Vec<u8>], word: &[u8], n: usize) -> Vec<u8> {
    let mut w = word.to_vec();
    for _ in 0..n {
        w = apply(rules, &w);
    }
    w
}

/// Validates primitivity and finds two-sided fixed points of a power.
pub fn build_substitution_subshift(name: &str, rules: Vec<Vec<u8>>) -> Result<Substitution> {
    let m = rules.len();
    if !(2..=MAX_ALPHABET).contains(&m) {
        return Err(Error::InvalidSubstitution(format!("alphabet size {m} outside 2..={MAX_ALPHABET}")));
    }
    for (a, image) in rules.iter().enumerate() {
        if image.is_empty() {
            return Err(Error::InvalidSubstitution(format!("symbol {a} maps to the empty word")));
        }
        if let Some(c) = image.iter().find(|&&c| c as usize >= m) {
            return Err(Error::InvalidSubstitution(format!("symbol {c} outside the alphabet")));
        }
    }
    // Wielandt: a primitive m×m matrix has a positive power at most m²-2m+2.
    let bound = m * m - 2 * m + 2;
    let base = incidence(&rules);
    let mut power = base.clone();
    let mut primitive = power.iter().all(|r| r.iter().all(|&v| v > 0));
    for _ in 1..bound {
        if primitive {
            break;
        }
        power = mat_mul(&power, &base);
        primitive = power.iter().all(|r| r.iter().all(|&v| v > 0));
    }
    if !primitive {
        return Err(Error::NotPrimitive(format!("incidence matrix power {bound} is {power:?}")));
    }

    let legal2 = legal_pairs(&rules);
    let first: Vec<u8> = rules.iter().map(|w| w[0]).collect();
    let last: Vec<u8> = rules.iter().map(|w| *w.last().unwrap()).collect();
    let compose = |f: &[u8], g: &[u8]| -> Vec<u8> { (0..m).map(|a| f[g[a] as usize]).collect() };
    let idempotent = |f: &[u8]| compose(f, f) == f;
    let (mut fp, mut lp) = (first.clone(), last.clone());
    let mut p = 1;
    while !(idempotent(&fp) && idempotent(&lp)) {
        fp = compose(&first, &fp);
        lp = compose(&last, &lp);
        p += 1;
    }
    let mut power = p;
    while (0..m).any(|c| apply_n(&rules, &[c as u8], power).len() < 2) {
        power += p;
    }
    let seeds: Vec<(u8, u8)> = legal2
        .iter()
        .copied()
        .filter(|&(a, b)| lp[a as usize] == a && fp[b as usize] == b)
        .collect();
    if seeds.is_empty() {
        return Err(Error::InvalidSubstitution("no two-sided fixed point".into()));
    }
    Ok(Substitution {
        name: name.to_string(),
        rules,
        power,
        seeds,
        depth: 16,
        group: Group::integers(),
        halves: Mutex::new(HashMap::new()),
        languages: Mutex::new(HashMap::new()),
    })
}

fn legal_pairs(rules: &[Vec<u8>]) -> BTreeSet<(u8, u8)> {
    let mut set: BTreeSet<(u8, u8)> = BTreeSet::new();
    for image in rules {
        set.extend(image.windows(2).map(|w| (w[0], w[1])));
    }
    loop {
        let mut next = set.clone();
        for &(a, b) in &set {
            let w = apply(rules, &[a, b]);
            next.extend(w.windows(2).map(|w| (w[0], w[1])));
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

impl Substitution {
    pub fn thue_morse() -> Self {
        build_substitution_subshift("thue-morse", vec![vec![0, 1], vec![1, 0]]).expect("primitive")
    }

    pub fn fibonacci() -> Self {
        build_substitution_subshift("fibonacci", vec![vec![0, 1], vec![0]]).expect("primitive")
    }

    pub fn rules(&self) -> &[Vec<u8>] {
        &self.rules
    }

    pub fn seeds(&self) -> &[(u8, u8)] {
        &self.seeds
    }

    /// Factors of length `len` of the language.
    pub fn language(&self, len: usize) -> Arc<BTreeSet<Vec<u8>>> {
        if let Some(l) = self.languages.lock().get(&len) {
            return l.clone();
        }
        let m = self.rules.len();
        let mut n = 0;
        while (0..m).any(|c| apply_n(&self.rules, &[c as u8], n).len() < len) {
            n += 1;
        }
        let mut factors = BTreeSet::new();
        for (a, b) in legal_pairs(&self.rules) {
            let w = apply_n(&self.rules, &[a, b], n);
            factors.extend(w.windows(len).map(<[u8]>::to_vec));
        }
        let factors = Arc::new(factors);
        self.languages.lock().insert(len, factors.clone());
        factors
    }

    /// Symbols of the seed point at coordinates `from..=to`.
    pub fn symbols(&self, seed: (u8, u8), from: i64, to: i64) -> Result<Vec<u8>> {
        if !self.seeds.contains(&seed) {
            return Err(Error::ForeignPoint(format!("seed {}.{}", seed.0, seed.1)));
        }
        let reach = from.unsigned_abs().max(to.unsigned_abs()) + 1;
        if reach > MAX_COORDINATE {
            return Err(Error::Budget(format!("coordinate {reach} beyond generated window")));
        }
        let mut cache = self.halves.lock();
        let h = cache.entry(seed).or_insert_with(|| Halves { right: vec![seed.1], left: vec![seed.0] });
        while (h.right.len() as u64) < reach {
            h.right = apply_n(&self.rules, &h.right, self.power);
        }
        while (h.left.len() as u64) < reach {
            let mut forward: Vec<u8> = h.left.iter().rev().copied().collect();
            forward = apply_n(&self.rules, &forward, self.power);
            h.left = forward.into_iter().rev().collect();
        }
        Ok((from..=to)
            .map(|i| if i >= 0 { h.right[i as usize] } else { h.left[(-1 - i) as usize] })
            .collect())
    }

    /// Plain-text export of coordinates `from..=to` of a seed point.
    pub fn export_window(&self, seed: (u8, u8), from: i64, to: i64) -> Result<String> {
        let syms = self.symbols(seed, from, to)?;
        Ok(syms.iter().map(|s| char::from(b'0' + s)).collect())
    }

    fn window(&self, x: &Point, level: usize) -> Result<Vec<u8>> {
        let Point::Shift { left, right, offset } = x else {
            return Err(Error::ForeignPoint(x.to_string()));
        };
        let k = level as i64;
        self.symbols((*left, *right), offset - k, offset + k)
    }
}

impl CellSpace for Substitution {
    fn depth(&self) -> usize {
        self.depth
    }

    fn cell_of(&self, x: &Point, level: usize) -> Result<Cell> {
        self.check_level(level)?;
        if level == 0 {
            if !matches!(x, Point::Shift { .. }) {
                return Err(Error::ForeignPoint(x.to_string()));
            }
            return Ok(Cell::root());
        }
        Ok(Cell::new(level, CellKey::Word(self.window(x, level)?)))
    }

    fn cells(&self, level: usize) -> Result<Vec<Cell>> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(vec![Cell::root()]);
        }
        Ok(self
            .language(2 * level + 1)
            .iter()
            .map(|w| Cell::new(level, CellKey::Word(w.clone())))
            .collect())
    }

    fn children(&self, cell: &Cell) -> Result<Vec<Cell>> {
        self.check_level(cell.level + 1)?;
        let level = cell.level + 1;
        let lang = self.language(2 * level + 1);
        let kids = match &cell.key {
            CellKey::Root => lang.iter().cloned().collect::<Vec<_>>(),
            CellKey::Word(w) => lang
                .iter()
                .filter(|c| &c[1..c.len() - 1] == w.as_slice())
                .cloned()
                .collect(),
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

impl Flow for Substitution {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            exact_language: true,
            exact_return_sets: false,
            level_equivariant: false,
            finite: false,
        }
    }

    fn act(&self, g: &Element, x: &Point) -> Result<Point> {
        let Element::Int(n) = g else {
            return Err(Error::MixedGroups);
        };
        match x {
            Point::Shift { left, right, offset } => {
                Ok(Point::Shift { left: *left, right: *right, offset: offset + n })
            }
            _ => Err(Error::ForeignPoint(x.to_string())),
        }
    }

    fn base_points(&self) -> Vec<Point> {
        self.seeds
            .iter()
            .map(|&(left, right)| Point::Shift { left, right, offset: 0 })
            .collect()
    }

    fn sample_points(&self, rng: &mut dyn RngCore, n: usize) -> Vec<Point> {
        (0..n)
            .map(|_| {
                let (left, right) = self.seeds[rng.gen_range(0..self.seeds.len())];
                Point::Shift { left, right, offset: rng.gen_range(-2000..=2000) }
            })
            .collect()
    }

    fn exact_closure_cells(&self, x: &Point, level: usize) -> Option<BTreeSet<CellKey>> {
        matches!(x, Point::Shift { .. }).then_some(())?;
        Some(self.cells(level).ok()?.into_iter().map(|c| c.key).collect())
    }

    // Primitive substitution subshifts are minimal.
    fn closure_contains(&self, _x: &Point, _y: &Point) -> Option<bool> {
        Some(true)
    }

    fn is_minimal(&self) -> Option<bool> {
        Some(true)
    }

    fn probe_pairs(&self) -> Vec<(Point, Point)> {
        let pts = self.base_points();
        let mut pairs = Vec::new();
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i + 1..] {
                pairs.push((x.clone(), y.clone()));
            }
        }
        pairs
    }
}

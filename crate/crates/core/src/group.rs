//! Finitely generated groups with canonical element forms and word geometry.
//!
//! Every group carries an ordered list of user generators `S` and the derived
//! symmetric generating set `Γ = S ∪ S⁻¹ ∪ {e}`. Word length, balls and
//! K-sets are all taken with respect to `Γ`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::verdict::{Budget, Outcome, Verdict, Witness};
use crate::{Error, Result};

/// Default cap on the number of elements a single ball may hold.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// Canonical representation of a group element.
///
/// The representation is unique per group kind, so structural equality is
/// group equality. Free-group words use letter `i + 1` for the generator `i`
/// and `-(i + 1)` for its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Int(i64),
    Vector(Vec<i64>),
    Word(Vec<i32>),
    Table(usize),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Element::Word(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
            Element::Table(i) => write!(f, "#{i}"),
            Element::Tuple(parts) => {
                write!(f, "<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ">")
            }
        }
    }
}

/// Lowercase letters are generators, uppercase their inverses.
pub fn letter_char(letter: i32) -> char {
    let idx = (letter.unsigned_abs() - 1) as u8;
    let c = (b'a' + idx % 26) as char;
    if letter > 0 {
        c
    } else {
        c.to_ascii_uppercase()
    }
}

/// Parses a free-group word written with `a..z` and inverses `A..Z`.
pub fn parse_word(s: &str) -> Result<Vec<i32>> {
    let mut letters = Vec::with_capacity(s.len());
    for c in s.chars() {
        let l = match c {
            'e' if s.len() == 1 => continue,
            'a'..='z' => (c as u8 - b'a') as i32 + 1,
            'A'..='Z' => -((c as u8 - b'A') as i32 + 1),
            _ => return Err(Error::InvalidGroup(format!("bad letter {c:?} in word {s:?}"))),
        };
        letters.push(l);
    }
    Ok(free_reduce(letters))
}

fn free_reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Multiplication table of a finite group, with generator-derived lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    lengths: Vec<u64>,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    fn validate(mul: Vec<Vec<usize>>) -> Result<(Vec<Vec<usize>>, usize, Vec<usize>)> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if n > 512 {
            return Err(Error::InvalidGroup(format!("table of order {n} exceeds 512")));
        }
        for row in &mul {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(Error::InvalidGroup("table is not a square table over 0..n".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok((mul, identity, inverse))
    }
}

/// The catalog of group kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// `Z` with `S = {1}`.
    Integers,
    /// `Z^d` with the standard basis.
    FreeAbelian { rank: usize },
    /// `F_k` on letters `a, b, ...`.
    Free { rank: usize },
    /// A finite group given by its multiplication table.
    Finite(CayleyTable),
    /// Direct product; the generators are the embedded factor generators.
    Product(Vec<Group>),
}

/// Closed balls include the identity, punctured balls exclude it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallVariant {
    Closed,
    Punctured,
}

/// `Punctured` is `B_{|g|-1}·g`; `Closed` is `Γ^{|g|-1}·g` and also holds `g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KVariant {
    Closed,
    #[default]
    Punctured,
}

impl KVariant {
    fn ball(self) -> BallVariant {
        match self {
            KVariant::Closed => BallVariant::Closed,
            KVariant::Punctured => BallVariant::Punctured,
        }
    }
}

/// A finitely generated group together with its generating set `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    generators: Vec<Element>,
    gamma: Vec<Element>,
    ball_cap: usize,
    label: Option<String>,
}

impl Group {
    pub fn integers() -> Self {
        Self::from_kind(GroupKind::Integers, vec![Element::Int(1)])
    }

    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup("Z^0 is trivial; use a finite table".into()));
        }
        let gens = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                Element::Vector(v)
            })
            .collect();
        Ok(Self::from_kind(GroupKind::FreeAbelian { rank }, gens))
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidGroup(format!("free group rank {rank} outside 1..=26")));
        }
        let gens = (1..=rank as i32).map(|l| Element::Word(vec![l])).collect();
        Ok(Self::from_kind(GroupKind::Free { rank }, gens))
    }

    /// A finite group from its multiplication table and generator indices.
    pub fn finite(mul: Vec<Vec<usize>>, generators: &[usize]) -> Result<Self> {
        let (mul, identity, inverse) = CayleyTable::validate(mul)?;
        let n = mul.len();
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidGroup(format!("generator {g} is not in the table")));
        }
        let mut gamma_idx: BTreeSet<usize> = generators.iter().copied().collect();
        gamma_idx.extend(generators.iter().map(|&g| inverse[g]));
        gamma_idx.insert(identity);
        let mut lengths = vec![u64::MAX; n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(a) = queue.pop_front() {
            for &s in &gamma_idx {
                let b = mul[a][s];
                if lengths[b] == u64::MAX {
                    lengths[b] = lengths[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        if lengths.contains(&u64::MAX) {
            return Err(Error::InvalidGroup("generators do not generate the table group".into()));
        }
        let table = CayleyTable { mul, identity, inverse, lengths };
        let gens = generators.iter().map(|&g| Element::Table(g)).collect();
        Ok(Self::from_kind(GroupKind::Finite(table), gens))
    }

    /// Cyclic group of order `n` generated by `1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Ok(Self::finite(mul, &[1 % n.max(1)])?.labeled(format!("C_{n}")))
    }

    /// Symmetric group on three letters, generated by a transposition and a 3-cycle.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| idx([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        Self::finite(mul, &[1, 4]).expect("S3 table is a group").labeled("S_3".into())
    }

    pub fn product(factors: Vec<Group>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidGroup("a product needs at least two factors".into()));
        }
        let identities: Vec<Element> = factors.iter().map(Group::identity).collect();
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for g in &f.generators {
                let mut t = identities.clone();
                t[i] = g.clone();
                gens.push(Element::Tuple(t));
            }
        }
        Ok(Self::from_kind(GroupKind::Product(factors), gens))
    }

    fn from_kind(kind: GroupKind, generators: Vec<Element>) -> Self {
        let mut g = Group { kind, generators, gamma: Vec::new(), ball_cap: DEFAULT_BALL_CAP, label: None };
        let mut gamma: BTreeSet<Element> = BTreeSet::new();
        gamma.insert(g.identity());
        for s in &g.generators {
            gamma.insert(s.clone());
            gamma.insert(g.invert_unchecked(s));
        }
        let mut gamma: Vec<Element> = gamma.into_iter().collect();
        gamma.sort_by(|a, b| g.canonical_cmp(a, b));
        g.gamma = gamma;
        g
    }

    pub fn with_ball_cap(mut self, cap: usize) -> Self {
        self.ball_cap = cap;
        self
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// `Γ = S ∪ S⁻¹ ∪ {e}` in canonical order.
    pub fn gamma(&self) -> &[Element] {
        &self.gamma
    }

    pub fn ball_cap(&self) -> usize {
        self.ball_cap
    }

    fn labeled(mut self, label: String) -> Self {
        self.label = Some(label);
        self
    }

    /// Short descriptor, e.g. `Z`, `Z^2`, `F_2`, `S_3`, `Table(6)`.
    pub fn name(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        match &self.kind {
            GroupKind::Integers => "Z".into(),
            GroupKind::FreeAbelian { rank } => format!("Z^{rank}"),
            GroupKind::Free { rank } => format!("F_{rank}"),
            GroupKind::Finite(t) => format!("Table({})", t.order()),
            GroupKind::Product(fs) => {
                fs.iter().map(Group::name).collect::<Vec<_>>().join(" x ")
            }
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.kind, GroupKind::Integers)
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            GroupKind::Finite(_) => true,
            GroupKind::Product(fs) => fs.iter().all(Group::is_finite),
            _ => false,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            GroupKind::Integers | GroupKind::FreeAbelian { .. } => true,
            GroupKind::Free { rank } => *rank == 1,
            GroupKind::Finite(t) => {
                let n = t.order();
                (0..n).all(|a| (0..n).all(|b| t.mul[a][b] == t.mul[b][a]))
            }
            GroupKind::Product(fs) => fs.iter().all(Group::is_abelian),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Integers => Element::Int(0),
            GroupKind::FreeAbelian { rank } => Element::Vector(vec![0; *rank]),
            GroupKind::Free { .. } => Element::Word(Vec::new()),
            GroupKind::Finite(t) => Element::Table(t.identity),
            GroupKind::Product(fs) => Element::Tuple(fs.iter().map(Group::identity).collect()),
        }
    }

    /// Checks that `g` is a canonical element of this group.
    pub fn check(&self, g: &Element) -> Result<()> {
        let ok = match (&self.kind, g) {
            (GroupKind::Integers, Element::Int(_)) => true,
            (GroupKind::FreeAbelian { rank }, Element::Vector(v)) => v.len() == *rank,
            (GroupKind::Free { rank }, Element::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::Finite(t), Element::Table(i)) => *i < t.order(),
            (GroupKind::Product(fs), Element::Tuple(parts)) => {
                parts.len() == fs.len()
                    && fs.iter().zip(parts).all(|(f, p)| f.check(p).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MixedGroups)
        }
    }

    pub fn compose(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.compose_unchecked(g, h))
    }

    pub fn invert(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.invert_unchecked(g))
    }

    pub(crate) fn compose_unchecked(&self, g: &Element, h: &Element) -> Element {
        match (&self.kind, g, h) {
            (GroupKind::Integers, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (GroupKind::FreeAbelian { .. }, Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupKind::Free { .. }, Element::Word(a), Element::Word(b)) => {
                Element::Word(free_reduce(a.iter().chain(b).copied()))
            }
            (GroupKind::Finite(t), Element::Table(a), Element::Table(b)) => {
                Element::Table(t.mul[*a][*b])
            }
            (GroupKind::Product(fs), Element::Tuple(a), Element::Tuple(b)) => Element::Tuple(
                fs.iter()
                    .zip(a.iter().zip(b))
                    .map(|(f, (x, y))| f.compose_unchecked(x, y))
                    .collect(),
            ),
            _ => panic!("compose_unchecked on foreign elements"),
        }
    }

    pub(crate) fn invert_unchecked(&self, g: &Element) -> Element {
        match (&self.kind, g) {
            (GroupKind::Integers, Element::Int(a)) => Element::Int(-a),
            (GroupKind::FreeAbelian { .. }, Element::Vector(a)) => {
                Element::Vector(a.iter().map(|x| -x).collect())
            }
            (GroupKind::Free { .. }, Element::Word(a)) => {
                Element::Word(a.iter().rev().map(|l| -l).collect())
            }
            (GroupKind::Finite(t), Element::Table(a)) => Element::Table(t.inverse[*a]),
            (GroupKind::Product(fs), Element::Tuple(a)) => {
                Element::Tuple(fs.iter().zip(a).map(|(f, x)| f.invert_unchecked(x)).collect())
            }
            _ => panic!("invert_unchecked on foreign element"),
        }
    }

    /// `Γ`-length; `0` for the identity.
    pub fn word_length(&self, g: &Element) -> u64 {
        match (&self.kind, g) {
            (GroupKind::Integers, Element::Int(a)) => a.unsigned_abs(),
            (GroupKind::FreeAbelian { .. }, Element::Vector(a)) => {
                a.iter().map(|x| x.unsigned_abs()).sum()
            }
            (GroupKind::Free { .. }, Element::Word(w)) => w.len() as u64,
            (GroupKind::Finite(t), Element::Table(a)) => t.lengths[*a],
            (GroupKind::Product(fs), Element::Tuple(a)) => {
                fs.iter().zip(a).map(|(f, x)| f.word_length(x)).sum()
            }
            _ => panic!("word_length on foreign element"),
        }
    }

    /// Length first, then the derived order on canonical forms.
    pub fn canonical_cmp(&self, a: &Element, b: &Element) -> std::cmp::Ordering {
        self.word_length(a).cmp(&self.word_length(b)).then_with(|| a.cmp(b))
    }

    /// Number of elements of length at most `r` (closed ball), if a closed
    /// form is known for the kind.
    pub fn closed_ball_size(&self, r: u64) -> Option<u128> {
        match &self.kind {
            GroupKind::Integers => Some(2 * r as u128 + 1),
            GroupKind::FreeAbelian { rank } => Some(lattice_ball_size(*rank, r)),
            GroupKind::Free { rank } => {
                let k = *rank as u128;
                let mut total = 1u128;
                let mut sphere = 2 * k;
                for _ in 0..r {
                    total = total.saturating_add(sphere);
                    sphere = sphere.saturating_mul(2 * k - 1);
                }
                Some(total)
            }
            GroupKind::Finite(t) => Some(t.lengths.iter().filter(|&&l| l <= r).count() as u128),
            GroupKind::Product(_) => None,
        }
    }

    /// All elements of length `≤ r`, canonically ordered and duplicate-free.
    pub fn ball(&self, r: u64, variant: BallVariant) -> Result<Ball> {
        if let Some(size) = self.closed_ball_size(r) {
            if size > self.ball_cap as u128 {
                return Err(Error::BallCap { radius: r, cap: self.ball_cap });
            }
        }
        let mut elements = match &self.kind {
            GroupKind::Integers => {
                let r = r as i64;
                (-r..=r).map(Element::Int).collect()
            }
            GroupKind::Finite(t) => (0..t.order())
                .filter(|&i| t.lengths[i] <= r)
                .map(Element::Table)
                .collect(),
            _ => self.bfs_ball(r)?,
        };
        if variant == BallVariant::Punctured {
            let e = self.identity();
            elements.retain(|x| *x != e);
        }
        elements.sort_by(|a, b| self.canonical_cmp(a, b));
        let members = elements.iter().cloned().collect();
        Ok(Ball { radius: r, variant, elements, members })
    }

    fn bfs_ball(&self, r: u64) -> Result<Vec<Element>> {
        let e = self.identity();
        let mut seen: HashSet<Element> = HashSet::from([e.clone()]);
        let mut frontier = vec![e];
        for _ in 0..r {
            let mut next = Vec::new();
            for h in &frontier {
                for s in &self.gamma {
                    let x = self.compose_unchecked(h, s);
                    if !seen.contains(&x) {
                        if seen.len() >= self.ball_cap {
                            return Err(Error::BallCap { radius: r, cap: self.ball_cap });
                        }
                        seen.insert(x.clone());
                        next.push(x);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }

    /// Membership `h ∈ K(g)` without enumerating `K(g)`.
    pub fn in_k_set(&self, h: &Element, g: &Element, variant: KVariant) -> bool {
        let len = self.word_length(g);
        if len == 0 {
            return false;
        }
        let b = self.compose_unchecked(h, &self.invert_unchecked(g));
        let lb = self.word_length(&b);
        match variant {
            KVariant::Closed => lb < len,
            KVariant::Punctured => lb > 0 && lb < len,
        }
    }

    /// `K(g)`: the left translate of the ball of radius `|g|-1` by `g`.
    pub fn k_set(&self, g: &Element, variant: KVariant) -> Result<KSet> {
        self.check(g)?;
        let len = self.word_length(g);
        if len == 0 {
            return Err(Error::IdentityKSet);
        }
        let ball = self.ball(len - 1, variant.ball())?;
        let mut elements: Vec<Element> =
            ball.iter().map(|b| self.compose_unchecked(b, g)).collect();
        elements.sort_by(|a, b| self.canonical_cmp(a, b));
        Ok(KSet { base: g.clone(), variant, elements })
    }

    /// Finite-window approximation of the cone of `seq` inside `B_radius`.
    ///
    /// The tail is every index whose element is longer than `2·radius`.
    pub fn cone_approx(&self, seq: &[Element], radius: u64, variant: KVariant) -> Result<ConeApprox> {
        if seq.is_empty() {
            return Err(Error::Empty("cone sequence"));
        }
        for g in seq {
            self.check(g)?;
        }
        let lengths: Vec<u64> = seq.iter().map(|g| self.word_length(g)).collect();
        if let Some(i) = lengths.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::NotMonotone(i + 1));
        }
        let tail: Vec<usize> = (0..seq.len()).filter(|&i| lengths[i] > 2 * radius).collect();
        if tail.is_empty() {
            return Err(Error::Budget(format!(
                "no sequence element is longer than 2R = {}",
                2 * radius
            )));
        }
        let window = self.ball(radius, BallVariant::Punctured)?;
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for h in window.iter() {
            let hits = tail.iter().filter(|&&i| self.in_k_set(h, &seq[i], variant)).count();
            if hits == tail.len() {
                lower.push(h.clone());
            }
            if hits > 0 {
                upper.push(h.clone());
            }
        }
        let stabilized = lower == upper;
        Ok(ConeApprox { radius, lower, upper, stabilized, tail, variant })
    }

    /// A random element reached by a walk of `steps` uniform letters of `Γ`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, steps: usize) -> Element {
        let mut g = self.identity();
        for _ in 0..steps {
            let s = &self.gamma[rng.gen_range(0..self.gamma.len())];
            g = self.compose_unchecked(&g, s);
        }
        g
    }

    /// `Z^d` element helper; `None` if the group is not `Z^d` with that rank.
    pub fn vector(&self, coords: &[i64]) -> Option<Element> {
        match self.kind {
            GroupKind::FreeAbelian { rank } if rank == coords.len() => {
                Some(Element::Vector(coords.to_vec()))
            }
            _ => None,
        }
    }

    /// Free-group element helper parsing `a..z`/`A..Z`.
    pub fn word(&self, s: &str) -> Result<Element> {
        let w = Element::Word(parse_word(s)?);
        self.check(&w)?;
        Ok(w)
    }
}

fn lattice_ball_size(d: usize, r: u64) -> u128 {
    // Number of integer points with L1 norm <= r in dimension d.
    let r = r as usize;
    let mut counts = vec![1u128; r + 1];
    for _ in 0..d {
        let mut next = vec![0u128; r + 1];
        for (s, slot) in next.iter_mut().enumerate() {
            let mut total = counts[s];
            for a in 1..=s {
                total += 2 * counts[s - a];
            }
            *slot = total;
        }
        counts = next;
    }
    counts[r]
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u64,
    pub variant: BallVariant,
    elements: Vec<Element>,
    members: HashSet<Element>,
}

impl Ball {
    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.members.contains(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KSet {
    pub base: Element,
    pub variant: KVariant,
    pub elements: Vec<Element>,
}

impl KSet {
    pub fn contains(&self, h: &Element) -> bool {
        self.elements.contains(h)
    }
}

/// Lower/upper brackets of a cone restricted to a punctured ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeApprox {
    pub radius: u64,
    /// In `K(g_i)` for every tail index.
    pub lower: Vec<Element>,
    /// In `K(g_i)` for at least one tail index.
    pub upper: Vec<Element>,
    pub stabilized: bool,
    /// Indices of the source sequence forming the tail.
    pub tail: Vec<usize>,
    pub variant: KVariant,
}

/// Windowed thickness: some `t ∈ B_R` with `B_n·t ⊆ A`.
///
/// Never returns `False`: thickness is a tail property.
pub fn is_thick_window(
    group: &Group,
    member: &dyn Fn(&Element) -> bool,
    n: u64,
    radius: u64,
) -> Result<Verdict> {
    if n > radius {
        return Err(Error::Budget(format!("thickness window n = {n} exceeds R = {radius}")));
    }
    let kernel = group.ball(n, BallVariant::Closed)?;
    let window = group.ball(radius, BallVariant::Closed)?;
    let budget = Budget::radius(radius);
    for t in window.iter() {
        if kernel.iter().all(|k| member(&group.compose_unchecked(k, t))) {
            return Ok(Verdict::new(Outcome::True, false, Witness::Element(t.clone()), budget));
        }
    }
    Ok(Verdict::unknown(budget, format!("no t in B_{radius} with B_{n}·t inside the set")))
}

/// How much the caller knows about a set handed to [`is_syndetic_window`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKnowledge {
    /// Only membership inside the window is trustworthy.
    Window,
    /// The predicate is correct on the whole group.
    Exact,
}

/// Windowed syndeticity: a finite `F ⊆ B_n` with `B_R ⊆ F·(A ∩ B_{R+n})`.
///
/// The witness is greedily reduced in canonical order. With exact knowledge
/// a complement that stays thick at every scale up to `R/2` yields `False`.
pub fn is_syndetic_window(
    group: &Group,
    member: &dyn Fn(&Element) -> bool,
    n: u64,
    radius: u64,
    knowledge: SetKnowledge,
) -> Result<Verdict> {
    if n > radius {
        return Err(Error::Budget(format!("syndetic window n = {n} exceeds R = {radius}")));
    }
    let window = group.ball(radius, BallVariant::Closed)?;
    let candidates = group.ball(n, BallVariant::Closed)?;
    let budget = Budget::radius(radius);
    // h ∈ f·A  ⇔  f⁻¹h ∈ A
    let inverses: Vec<Element> = candidates.iter().map(|f| group.invert_unchecked(f)).collect();
    let covers = |chosen: &[usize]| {
        window.iter().all(|h| {
            chosen
                .iter()
                .any(|&i| member(&group.compose_unchecked(&inverses[i], h)))
        })
    };
    let mut chosen: Vec<usize> = (0..candidates.len()).collect();
    if covers(&chosen) {
        let mut i = 0;
        while i < chosen.len() {
            let mut trial = chosen.clone();
            trial.remove(i);
            if !trial.is_empty() && covers(&trial) {
                chosen = trial;
            } else {
                i += 1;
            }
        }
        let f = chosen.iter().map(|&i| candidates.elements()[i].clone()).collect();
        return Ok(Verdict::new(Outcome::True, false, Witness::Elements(f), budget));
    }
    if knowledge == SetKnowledge::Exact {
        let mut thick_witnesses = Vec::new();
        for m in n..=(radius / 2).max(n) {
            let complement = |g: &Element| !member(g);
            let v = is_thick_window(group, &complement, m, radius)?;
            match v.witness {
                Witness::Element(t) if v.outcome == Outcome::True => thick_witnesses.push(t),
                _ => {
                    thick_witnesses.clear();
                    break;
                }
            }
        }
        if !thick_witnesses.is_empty() {
            return Ok(Verdict::new(
                Outcome::False,
                false,
                Witness::Elements(thick_witnesses),
                budget,
            )
            .with_note("complement thick at every scale in the window"));
        }
    }
    Ok(Verdict::unknown(budget, format!("B_{n} translates do not cover B_{radius}")))
}

/// Result of a finite-set embedding search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingWitness {
    pub n: u64,
    /// For each served sample `g`, a `t` with `|t| = n` and `F·t ⊆ K(g)`.
    pub witnesses: Vec<(Element, Element)>,
}

/// Least `n` in `range` such that every sample `g` with `|g| ≥ n` admits
/// `t` with `|t| = n` and `F·t ⊆ K(g)`.
pub fn embedding_witness(
    group: &Group,
    finite_set: &[Element],
    range: (u64, u64),
    samples: &[Element],
    variant: KVariant,
) -> Result<EmbeddingWitness> {
    if samples.is_empty() {
        return Err(Error::Empty("embedding samples"));
    }
    for g in finite_set.iter().chain(samples) {
        group.check(g)?;
    }
    let (lo, hi) = range;
    for n in lo.max(1)..=hi {
        let sphere: Vec<Element> = group
            .ball(n, BallVariant::Closed)?
            .iter()
            .filter(|t| group.word_length(t) == n)
            .cloned()
            .collect();
        let mut witnesses = Vec::new();
        let mut ok = true;
        for g in samples.iter().filter(|g| group.word_length(g) >= n) {
            let found = sphere.iter().find(|t| {
                finite_set
                    .iter()
                    .all(|f| group.in_k_set(&group.compose_unchecked(f, t), g, variant))
            });
            match found {
                Some(t) => witnesses.push((g.clone(), t.clone())),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(EmbeddingWitness { n, witnesses });
        }
    }
    Err(Error::Budget(format!("no n in [{lo}, {hi}] embeds F into every sampled K(g)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Element> {
        v.iter().copied().map(Element::Int).collect()
    }

    #[test]
    fn compose_and_invert_examples() {
        let z = Group::integers();
        assert_eq!(z.compose(&Element::Int(3), &Element::Int(-5)).unwrap(), Element::Int(-2));
        let f2 = Group::free(2).unwrap();
        let p = f2.compose(&f2.word("ab").unwrap(), &f2.word("Ba").unwrap()).unwrap();
        assert_eq!(p, f2.word("aa").unwrap());
        let z2 = Group::free_abelian(2).unwrap();
        let v = z2.vector(&[3, -2]).unwrap();
        assert_eq!(z2.invert(&v).unwrap(), z2.vector(&[-3, 2]).unwrap());
    }

    #[test]
    fn mixed_operands_rejected() {
        let z = Group::integers();
        assert!(matches!(
            z.compose(&Element::Int(1), &Element::Word(vec![1])),
            Err(Error::MixedGroups)
        ));
    }

    #[test]
    fn word_length_examples() {
        let z = Group::integers();
        assert_eq!(z.word_length(&Element::Int(5)), 5);
        let z2 = Group::free_abelian(2).unwrap();
        assert_eq!(z2.word_length(&z2.vector(&[3, -2]).unwrap()), 5);
        let f2 = Group::free(2).unwrap();
        assert_eq!(f2.word_length(&f2.word("abA").unwrap()), 3);
        assert_eq!(f2.word_length(&f2.identity()), 0);
    }

    #[test]
    fn gamma_is_symmetric_with_identity() {
        for g in [Group::integers(), Group::free(2).unwrap(), Group::symmetric3()] {
            let gamma = g.gamma();
            assert!(gamma.contains(&g.identity()));
            for s in gamma {
                assert!(gamma.contains(&g.invert_unchecked(s)));
            }
        }
    }

    #[test]
    fn table_lengths_match_product_enumeration() {
        // Oracle: enumerate all products of r letters from Γ, r = 0, 1, 2, ...
        let g = Group::symmetric3();
        let gamma = g.gamma().to_vec();
        let mut reached: Vec<(Element, u64)> = vec![(g.identity(), 0)];
        let mut layer = vec![g.identity()];
        for r in 1..=6u64 {
            let mut next = Vec::new();
            for h in &layer {
                for s in &gamma {
                    next.push(g.compose_unchecked(h, s));
                }
            }
            for x in &next {
                if !reached.iter().any(|(y, _)| y == x) {
                    reached.push((x.clone(), r));
                }
            }
            layer = next;
        }
        assert_eq!(reached.len(), 6);
        for (x, r) in reached {
            assert_eq!(g.word_length(&x), r, "{x}");
        }
    }

    #[test]
    fn ball_examples() {
        let z = Group::integers();
        assert_eq!(
            z.ball(3, BallVariant::Punctured).unwrap().elements(),
            ints(&[-1, 1, -2, 2, -3, 3]).as_slice()
        );
        let z2 = Group::free_abelian(2).unwrap();
        let brute = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() > 0 && a.abs() + b.abs() <= 2)
            .count();
        assert_eq!(brute, 12);
        assert_eq!(z2.ball(2, BallVariant::Punctured).unwrap().len(), brute);
        let f2 = Group::free(2).unwrap();
        let closed_form: u64 = (1..=2).map(|r| 4 * 3u64.pow(r - 1)).sum();
        assert_eq!(closed_form, 16);
        assert_eq!(f2.ball(2, BallVariant::Punctured).unwrap().len() as u64, closed_form);
    }

    #[test]
    fn ball_cap_enforced() {
        let f2 = Group::free(2).unwrap().with_ball_cap(100);
        assert!(matches!(f2.ball(5, BallVariant::Closed), Err(Error::BallCap { .. })));
        let prod = Group::product(vec![Group::free(2).unwrap(), Group::integers()])
            .unwrap()
            .with_ball_cap(50);
        assert!(matches!(prod.ball(4, BallVariant::Closed), Err(Error::BallCap { .. })));
    }

    #[test]
    fn k_set_examples() {
        let z = Group::integers();
        let k = z.k_set(&Element::Int(5), KVariant::Punctured).unwrap();
        let mut got: Vec<i64> = k.elements.iter().filter_map(Element::as_int).collect();
        got.sort();
        assert_eq!(got, vec![1, 2, 3, 4, 6, 7, 8, 9]);
        let k = z.k_set(&Element::Int(5), KVariant::Closed).unwrap();
        let mut got: Vec<i64> = k.elements.iter().filter_map(Element::as_int).collect();
        got.sort();
        assert_eq!(got, (1..=9).collect::<Vec<_>>());

        let f2 = Group::free(2).unwrap();
        let k = f2.k_set(&f2.word("ab").unwrap(), KVariant::Punctured).unwrap();
        let mut expected: Vec<Element> =
            ["aab", "bab", "b", "Bab"].iter().map(|w| f2.word(w).unwrap()).collect();
        expected.sort_by(|a, b| f2.canonical_cmp(a, b));
        assert_eq!(k.elements, expected);
    }

    #[test]
    fn k_set_of_identity_rejected() {
        let z = Group::integers();
        assert!(matches!(z.k_set(&Element::Int(0), KVariant::Closed), Err(Error::IdentityKSet)));
    }

    #[test]
    fn cone_examples() {
        let z = Group::integers();
        let seq = ints(&(1..=20).collect::<Vec<_>>());
        let c = z.cone_approx(&seq, 5, KVariant::Punctured).unwrap();
        assert!(c.stabilized);
        assert_eq!(c.lower, ints(&[1, 2, 3, 4, 5]));

        let alt: Vec<Element> =
            (1..=20).map(|n: i64| Element::Int(if n % 2 == 0 { n } else { -n })).collect();
        let c = z.cone_approx(&alt, 5, KVariant::Punctured).unwrap();
        assert!(c.lower.is_empty());
        assert_eq!(c.upper, ints(&[-1, 1, -2, 2, -3, 3, -4, 4, -5, 5]));
        assert!(!c.stabilized);

        let z2 = Group::free_abelian(2).unwrap();
        let seq: Vec<Element> = (1..=20).map(|n| z2.vector(&[n, 0]).unwrap()).collect();
        let c = z2.cone_approx(&seq, 2, KVariant::Punctured).unwrap();
        // Oracle: |t1 - n| + |t2| <= n - 1 with t1 <= 2 < n reduces to t1 >= |t2| + 1.
        let mut oracle: Vec<Element> = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 2 && *a >= b.abs() + 1)
            .map(|(a, b)| z2.vector(&[a, b]).unwrap())
            .collect();
        oracle.sort_by(|a, b| z2.canonical_cmp(a, b));
        assert_eq!(c.lower, oracle);
        assert_eq!(c.lower, vec![z2.vector(&[1, 0]).unwrap(), z2.vector(&[2, 0]).unwrap()]);
    }

    #[test]
    fn cone_budget_errors() {
        let z = Group::integers();
        assert!(matches!(
            z.cone_approx(&ints(&[1, 2, 3]), 5, KVariant::Punctured),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            z.cone_approx(&ints(&[3, 1, 20]), 1, KVariant::Punctured),
            Err(Error::NotMonotone(1))
        ));
    }

    #[test]
    fn thick_examples() {
        let z = Group::integers();
        let naturals = |g: &Element| g.as_int().unwrap() >= 1;
        let v = is_thick_window(&z, &naturals, 3, 10).unwrap();
        assert_eq!(v.outcome, Outcome::True);
        assert_eq!(v.witness, Witness::Element(Element::Int(4)));

        let seq = ints(&(1..=40).collect::<Vec<_>>());
        let c = z.cone_approx(&seq, 10, KVariant::Punctured).unwrap();
        let lower = c.lower.clone();
        let v = is_thick_window(&z, &|g| lower.contains(g), 2, 10).unwrap();
        assert_eq!(v.outcome, Outcome::True);

        let even = |g: &Element| g.as_int().unwrap() % 2 == 0;
        assert_eq!(is_thick_window(&z, &even, 1, 100).unwrap().outcome, Outcome::Unknown);
    }

    #[test]
    fn syndetic_examples() {
        let z = Group::integers();
        let even = |g: &Element| g.as_int().unwrap() % 2 == 0;
        let v = is_syndetic_window(&z, &even, 1, 50, SetKnowledge::Window).unwrap();
        assert_eq!(v.outcome, Outcome::True);
        assert_eq!(v.witness, Witness::Elements(ints(&[0, 1])));

        let squares = |g: &Element| {
            let a = g.as_int().unwrap().abs();
            let r = (a as f64).sqrt().round() as i64;
            r * r == a
        };
        // Oracle: the gap 81 -> 100 leaves 18 consecutive non-members, more than 2n+1 = 7.
        let gap = (82..100).filter(|&m: &i64| !squares(&Element::Int(m))).count();
        assert_eq!(gap, 18);
        let v = is_syndetic_window(&z, &squares, 3, 100, SetKnowledge::Window).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);

        let v = is_syndetic_window(&z, &even, 1, 50, SetKnowledge::Exact).unwrap();
        assert_ne!(v.outcome, Outcome::False);
        let odd = |g: &Element| g.as_int().unwrap() % 2 != 0;
        let v = is_syndetic_window(&z, &odd, 1, 50, SetKnowledge::Exact).unwrap();
        assert_ne!(v.outcome, Outcome::False);
    }

    #[test]
    fn embedding_witness_examples() {
        let z = Group::integers();
        let samples = ints(&(10..=30).collect::<Vec<_>>());
        let w = embedding_witness(&z, &ints(&[0, 1, 2]), (2, 10), &samples, KVariant::Closed).unwrap();
        // Brute force: t = 2 gives {2,3,4} inside K(g) = [1, 2g-1] for every g >= 10.
        assert_eq!(w.n, 2);
        assert_eq!(w.witnesses.len(), samples.len());

        let all = ints(&(-20..=20).filter(|&g| g != 0).collect::<Vec<_>>());
        let w = embedding_witness(&z, &ints(&[0]), (2, 10), &all, KVariant::Closed).unwrap();
        assert_eq!(w.n, 2);

        let z2 = Group::free_abelian(2).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
        let samples: Vec<Element> = (0..40)
            .map(|_| z2.random_element(&mut rng, 40))
            .filter(|g| (8..=16).contains(&z2.word_length(g)))
            .collect();
        if !samples.is_empty() {
            let f = vec![z2.vector(&[0, 0]).unwrap(), z2.vector(&[1, 0]).unwrap()];
            assert!(embedding_witness(&z2, &f, (2, 8), &samples, KVariant::Closed).is_ok());
        }
        assert!(matches!(
            embedding_witness(&z, &ints(&[0]), (2, 4), &[], KVariant::Closed),
            Err(Error::Empty(_))
        ));
    }
}

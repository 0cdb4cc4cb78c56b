//! Brute-force reference computations.
//!
//! Nothing here calls into the rest of the crate: groups, words, sequences
//! and odometers are re-implemented naively so that agreement with the
//! library is a genuine cross-check.
//!
//! | subcommand | arguments | prints |
//! |---|---|---|
//! | `ball-count` | `<group> <r>` | size of the punctured ball |
//! | `kset` | `<group> <g>` | punctured `K(g)` |
//! | `cone` | `<group> <positive\|negative\|alternating> <R>` | lower/upper cone window and stabilization |
//! | `factor-scan` | `<thue-morse\|fibonacci\|one-dot> <n>` | number of length-`n` factors |
//! | `return-scan` | `<odometer[:b]\|one-dot\|thue-morse> <k> <R>` | returns of the base point to its level-`k` cell |
//!
//! Groups are written `Z`, `Zd`, `Fk`, `Cn` or `S3`. Cone sequences are
//! `g_n = ±n`, `(−1)^n·n` along the first generator, for `n = 1..=2R+8`.

use std::collections::BTreeSet;

use crate::{Error, Result};

const WORD_LIMIT: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum G {
    Z,
    Zd(usize),
    F(usize),
    C(usize),
    S3,
}

/// Elements: integer vectors for `Z`/`Z^d`, letter lists for `F_k`
/// (`+i`/`−i` for the i-th generator and its inverse), a table value for
/// finite groups.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum E {
    V(Vec<i64>),
    W(Vec<i32>),
    P(Vec<usize>),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn group(s: &str) -> Result<G> {
    let num = |t: &str| t.trim_start_matches('^').parse::<usize>().map_err(|_| usage(format!("bad group {s}")));
    match s {
        "Z" => Ok(G::Z),
        "S3" => Ok(G::S3),
        _ if s.starts_with('Z') => Ok(G::Zd(num(&s[1..])?)),
        _ if s.starts_with('F') => Ok(G::F(num(&s[1..])?)),
        _ if s.starts_with('C') => Ok(G::C(num(&s[1..])?)),
        _ => Err(usage(format!("bad group {s}"))),
    }
}

fn reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn letters(g: G) -> Vec<E> {
    match g {
        G::Z => vec![E::V(vec![1]), E::V(vec![-1])],
        G::Zd(d) => (0..d)
            .flat_map(|i| {
                [1, -1].map(|s| {
                    let mut v = vec![0; d];
                    v[i] = s;
                    E::V(v)
                })
            })
            .collect(),
        G::F(k) => (1..=k as i32).flat_map(|i| [E::W(vec![i]), E::W(vec![-i])]).collect(),
        G::C(n) => vec![E::P(vec![1 % n]), E::P(vec![(n - 1) % n])],
        // A transposition and both 3-cycles, as images of 0, 1, 2.
        G::S3 => vec![E::P(vec![1, 0, 2]), E::P(vec![1, 2, 0]), E::P(vec![2, 0, 1])],
    }
}

fn identity(g: G) -> E {
    match g {
        G::Z => E::V(vec![0]),
        G::Zd(d) => E::V(vec![0; d]),
        G::F(_) => E::W(vec![]),
        G::C(_) => E::P(vec![0]),
        G::S3 => E::P(vec![0, 1, 2]),
    }
}

fn mul(g: G, a: &E, b: &E) -> E {
    match (a, b) {
        (E::V(x), E::V(y)) => E::V(x.iter().zip(y).map(|(p, q)| p + q).collect()),
        (E::W(x), E::W(y)) => E::W(reduce(&[x.as_slice(), y.as_slice()].concat())),
        (E::P(x), E::P(y)) => match g {
            G::C(n) => E::P(vec![(x[0] + y[0]) % n]),
            _ => E::P(y.iter().map(|&i| x[i]).collect()),
        },
        _ => unreachable!("mixed element kinds"),
    }
}

fn inv(a: &E) -> E {
    match a {
        E::V(x) => E::V(x.iter().map(|c| -c).collect()),
        E::W(w) => E::W(w.iter().rev().map(|l| -l).collect()),
        E::P(_) => unreachable!("finite inverses are not needed"),
    }
}

/// Word length for the infinite kinds, read off the normal form.
fn len(a: &E) -> u64 {
    match a {
        E::V(x) => x.iter().map(|c| c.unsigned_abs()).sum(),
        E::W(w) => w.len() as u64,
        E::P(_) => unreachable!("finite lengths are not needed"),
    }
}

fn parse_element(g: G, s: &str) -> Result<E> {
    let bad = || usage(format!("bad element {s}"));
    match g {
        G::Z | G::Zd(_) => {
            let v: Vec<i64> = s
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let d = if let G::Zd(d) = g { d } else { 1 };
            if v.len() != d {
                return Err(bad());
            }
            Ok(E::V(v))
        }
        G::F(k) => {
            let mut w = Vec::new();
            for c in s.chars().filter(|&c| c != 'e') {
                let l = match c {
                    'a'..='z' => (c as u8 - b'a') as i32 + 1,
                    'A'..='Z' => -((c as u8 - b'A') as i32 + 1),
                    _ => return Err(bad()),
                };
                if l.unsigned_abs() as usize > k {
                    return Err(bad());
                }
                w.push(l);
            }
            Ok(E::W(reduce(&w)))
        }
        _ => Err(usage("kset needs Z, Zd or Fk")),
    }
}

fn render(a: &E) -> String {
    match a {
        E::V(x) if x.len() == 1 => x[0].to_string(),
        E::V(x) => format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        E::W(w) if w.is_empty() => "e".into(),
        E::W(w) => w
            .iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect(),
        E::P(p) => format!("{p:?}"),
    }
}

/// Display order: vectors lexicographically, words by length then spelling.
fn render_set(set: &BTreeSet<E>) -> String {
    let mut items: Vec<&E> = set.iter().collect();
    items.sort_by_key(|e| match e {
        E::W(w) => (w.len(), render(e), Vec::new()),
        E::V(v) => (0, String::new(), v.clone()),
        E::P(_) => (0, render(e), Vec::new()),
    });
    format!("{{{}}}", items.iter().map(|e| render(e)).collect::<Vec<_>>().join(","))
}

/// `Γ^r`, built by multiplying out every product of `r` letters (identity
/// included).
fn products(g: G, r: u64) -> Result<BTreeSet<E>> {
    let mut gamma = letters(g);
    gamma.push(identity(g));
    if (gamma.len() as u64).checked_pow(r as u32).is_none_or(|n| n > WORD_LIMIT) {
        return Err(Error::Budget(format!("{} words of length {r}", gamma.len())));
    }
    let mut words = vec![identity(g)];
    for _ in 0..r {
        words = words.iter().flat_map(|w| gamma.iter().map(move |s| (w, s))).map(|(w, s)| mul(g, w, s)).collect();
    }
    Ok(words.into_iter().collect())
}

/// The punctured ball of radius `r`: lattice points by their coordinates,
/// words and finite elements by exhaustive products.
fn punctured_ball(g: G, r: u64) -> Result<BTreeSet<E>> {
    let mut set = match g {
        G::Z | G::Zd(_) => {
            let d = if let G::Zd(d) = g { d } else { 1 };
            let r = r as i64;
            let mut out = BTreeSet::new();
            let side = (2 * r + 1) as u64;
            if side.checked_pow(d as u32).is_none_or(|n| n > WORD_LIMIT) {
                return Err(Error::Budget("lattice box too large".into()));
            }
            for idx in 0..side.pow(d as u32) {
                let mut v = Vec::with_capacity(d);
                let mut rest = idx;
                for _ in 0..d {
                    v.push((rest % side) as i64 - r);
                    rest /= side;
                }
                if v.iter().map(|c| c.abs()).sum::<i64>() <= r {
                    out.insert(E::V(v));
                }
            }
            out
        }
        _ => products(g, r)?,
    };
    set.remove(&identity(g));
    Ok(set)
}

/// `h ∈ K(g)` iff `0 < |h g⁻¹| < |g|`.
fn in_k(h: &E, g: &E) -> bool {
    let d = len(&mul_any(h, &inv(g)));
    d > 0 && d < len(g)
}

fn mul_any(a: &E, b: &E) -> E {
    match (a, b) {
        (E::V(_), E::V(_)) => mul(G::Z, a, b),
        _ => mul(G::F(1), a, b),
    }
}

fn kset(g: G, x: &E) -> Result<BTreeSet<E>> {
    let n = len(x);
    if n == 0 {
        return Err(usage("K(e) is undefined"));
    }
    // Every element of length < 2|g| around the origin, filtered by membership.
    Ok(punctured_ball(g, 2 * n)?.into_iter().filter(|h| in_k(h, x)).collect())
}

fn sequence(g: G, kind: &str, r: u64) -> Result<Vec<E>> {
    let first = match g {
        G::Z | G::Zd(_) | G::F(_) => letters(g).remove(0),
        _ => return Err(usage("cones need Z, Zd or Fk")),
    };
    let power = |n: i64| -> E {
        let step = if n >= 0 { first.clone() } else { inv(&first) };
        (0..n.unsigned_abs()).fold(identity(g), |acc, _| mul_any(&acc, &step))
    };
    (1..=(2 * r + 8) as i64)
        .map(|n| match kind {
            "positive" => Ok(power(n)),
            "negative" => Ok(power(-n)),
            "alternating" => Ok(power(if n % 2 == 0 { n } else { -n })),
            _ => Err(usage(format!("unknown sequence {kind}"))),
        })
        .collect()
}

fn cone(g: G, kind: &str, r: u64) -> Result<String> {
    let seq = sequence(g, kind, r)?;
    let tail: Vec<&E> = seq.iter().filter(|x| len(x) > 2 * r).collect();
    let window = punctured_ball(g, r)?;
    let lower: BTreeSet<E> = window.iter().filter(|h| tail.iter().all(|x| in_k(h, x))).cloned().collect();
    let upper: BTreeSet<E> = window.iter().filter(|h| tail.iter().any(|x| in_k(h, x))).cloned().collect();
    Ok(format!(
        "lower={}\nupper={}\nstabilized={}",
        render_set(&lower),
        render_set(&upper),
        lower == upper
    ))
}

fn substitute(rules: &[&[u8]], w: &[u8]) -> Vec<u8> {
    w.iter().flat_map(|&c| rules[c as usize].iter().copied()).collect()
}

/// The one-sided fixed point starting with `0`, at least `n` symbols long.
fn fixed_prefix(rules: &[&[u8]], n: usize) -> Vec<u8> {
    let mut w = vec![0u8];
    while w.len() < n {
        w = substitute(rules, &w);
    }
    w
}

const THUE_MORSE: [&[u8]; 2] = [&[0, 1], &[1, 0]];
const FIBONACCI: [&[u8]; 2] = [&[0, 1], &[0]];

fn factor_scan(name: &str, n: usize) -> Result<usize> {
    let word = match name {
        "thue-morse" => fixed_prefix(&THUE_MORSE, 1 << 16),
        "fibonacci" => fixed_prefix(&FIBONACCI, 1 << 16),
        "one-dot" => {
            let mut w = vec![0u8; 4 * n + 1];
            w[2 * n] = 1;
            w
        }
        _ => return Err(usage(format!("unknown sequence {name}"))),
    };
    if n == 0 || n > word.len() {
        return Err(usage(format!("factor length {n} out of range")));
    }
    Ok(word.windows(n).collect::<BTreeSet<_>>().len())
}

/// `0,±p,…` with signs merged where both `t` and `−t` occur.
fn render_returns(ts: &[i64]) -> String {
    let set: BTreeSet<i64> = ts.iter().copied().collect();
    let mut mags: Vec<u64> = set.iter().map(|t| t.unsigned_abs()).collect();
    mags.sort_unstable();
    mags.dedup();
    mags.iter()
        .map(|&m| {
            let (p, n) = (set.contains(&(m as i64)), set.contains(&-(m as i64)));
            match (m, p, n) {
                (0, _, _) => "0".to_string(),
                (_, true, true) => format!("±{m}"),
                (_, true, false) => m.to_string(),
                _ => format!("-{m}"),
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Odometer returns of the zero point, by stepping a digit register with
/// carries in both directions.
fn odometer_returns(b: u64, k: usize, r: i64) -> Vec<i64> {
    let mut out = vec![0];
    for dir in [1i64, -1] {
        let mut digits = vec![0u64; k];
        for t in 1..=r {
            for d in digits.iter_mut() {
                if dir == 1 {
                    *d += 1;
                    if *d < b {
                        break;
                    }
                    *d = 0;
                } else {
                    if *d > 0 {
                        *d -= 1;
                        break;
                    }
                    *d = b - 1;
                }
            }
            if digits.iter().all(|&d| d == 0) {
                out.push(dir * t);
            }
        }
    }
    out
}

/// Returns of a two-sided sequence `x` (indexed from `−offset`) to the window
/// `[−k, k]`.
fn shift_returns(x: &[u8], offset: i64, k: i64, r: i64) -> Vec<i64> {
    let at = |i: i64| x[(i + offset) as usize];
    (-r..=r).filter(|&t| (-k..=k).all(|i| at(i + t) == at(i))).collect()
}

fn return_scan(system: &str, k: usize, r: i64) -> Result<String> {
    let ki = k as i64;
    let times = match system.split_once(':').map_or((system, "2"), |(a, b)| (a, b)) {
        ("odometer", b) => {
            let b: u64 = b.parse().map_err(|_| usage(format!("bad base in {system}")))?;
            if b < 2 {
                return Err(usage("odometer base must be at least 2"));
            }
            odometer_returns(b, k, r)
        }
        ("one-dot", _) => {
            let half = r + ki;
            let mut x = vec![0u8; (2 * half + 1) as usize];
            x[half as usize] = 1;
            shift_returns(&x, half, ki, r)
        }
        ("thue-morse", _) => {
            // The σ²-fixed point with 0 on both sides of the origin.
            let half = (r + ki + 1) as usize;
            let mut right = vec![0u8];
            while right.len() < half {
                right = substitute(&THUE_MORSE, &substitute(&THUE_MORSE, &right));
            }
            let mut x: Vec<u8> = right[..half].to_vec();
            x.reverse();
            // σ^{2n}(0) ends in 0, so the left half reads the same word backwards.
            x.extend_from_slice(&right[..half]);
            shift_returns(&x, half as i64, ki, r)
        }
        _ => return Err(usage(format!("unknown system {system}"))),
    };
    Ok(render_returns(&times))
}

fn arg<'a>(args: &'a [String], i: usize, what: &str) -> Result<&'a str> {
    args.get(i).map(String::as_str).ok_or_else(|| usage(format!("missing argument <{what}>")))
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| usage(format!("not a number: {s}")))
}

/// Runs one subcommand and returns its printed output.
pub fn run(subcommand: &str, args: &[String]) -> Result<String> {
    match subcommand {
        "ball-count" => {
            let g = group(arg(args, 0, "group")?)?;
            let r: u64 = num(arg(args, 1, "r")?)?;
            Ok(punctured_ball(g, r)?.len().to_string())
        }
        "kset" => {
            let g = group(arg(args, 0, "group")?)?;
            let x = parse_element(g, arg(args, 1, "g")?)?;
            Ok(render_set(&kset(g, &x)?))
        }
        "cone" => {
            let g = group(arg(args, 0, "group")?)?;
            cone(g, arg(args, 1, "sequence")?, num(arg(args, 2, "R")?)?)
        }
        "factor-scan" => Ok(factor_scan(arg(args, 0, "sequence")?, num(arg(args, 1, "n")?)?)?.to_string()),
        "return-scan" => return_scan(arg(args, 0, "system")?, num(arg(args, 1, "k")?)?, num(arg(args, 2, "R")?)?),
        _ => Err(usage(format!("unknown oracle subcommand `{subcommand}`"))),
    }
}

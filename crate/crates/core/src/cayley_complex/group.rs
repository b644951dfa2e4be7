use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group we store as a full multiplication table.
pub const MAX_GROUP_ORDER: usize = 6144;

/// Associativity is checked exhaustively up to this order and sampled above it.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 200;
const SAMPLED_TRIPLES: usize = 100_000;

/// A finite group given by its multiplication table over ids `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    identity: usize,
    inverse: Vec<u16>,
    descriptor: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("descriptor", &self.descriptor)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a row-major table (`table[a * order + b] = a·b`).
    pub fn from_table(order: usize, table: Vec<usize>, descriptor: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("group of order 0".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(Error::SizeLimit(format!("group order {order} above {MAX_GROUP_ORDER}")));
        }
        if table.len() != order * order {
            return Err(Error::DimensionMismatch(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidArgument(format!("table entry {bad} outside 0..{order}")));
        }
        let table: Vec<u16> = table.into_iter().map(|x| x as u16).collect();
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::InvalidArgument("table has no identity".into()))?;
        let inverse = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                    .map(|h| h as u16)
                    .ok_or_else(|| Error::InvalidArgument(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<u16>>>()?;
        let group = Self {
            order,
            table,
            identity,
            inverse,
            descriptor: descriptor.into(),
        };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidArgument(format!(
                    "table is not associative at ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// The cyclic group Z_n under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group of order 0".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::SizeLimit(format!("group order {n} above {MAX_GROUP_ORDER}")));
        }
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_table(n, table, GroupSpec::Cyclic(n).to_string())
    }

    /// PSL_2(q) for an odd prime power q, elements ordered by their canonical matrix encoding.
    pub fn psl2(q: u64) -> Result<Self> {
        let field = Field::new(q)?;
        let q = q as usize;
        let order = q * (q * q - 1) / 2;
        if order > MAX_GROUP_ORDER {
            return Err(Error::SizeLimit(format!(
                "PSL2({q}) has order {order}, above {MAX_GROUP_ORDER}"
            )));
        }
        let encode = |m: [usize; 4]| ((m[0] * q + m[1]) * q + m[2]) * q + m[3];
        let negate = |m: [usize; 4]| m.map(|x| field.neg(x));
        let canonical = |m: [usize; 4]| encode(m).min(encode(negate(m)));
        let mut elements = Vec::with_capacity(order);
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = [a, b, c, d];
                        let det = field.sub(field.mul(a, d), field.mul(b, c));
                        if det == 1 && encode(m) < encode(negate(m)) {
                            elements.push(m);
                        }
                    }
                }
            }
        }
        elements.sort_by_key(|&m| encode(m));
        if elements.len() != order {
            return Err(Error::Invariant(format!(
                "PSL2({q}) enumeration produced {} elements, expected {order}",
                elements.len()
            )));
        }
        let index: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &m)| (encode(m), i)).collect();
        let mut table = vec![0usize; order * order];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                let p = [
                    field.add(field.mul(x[0], y[0]), field.mul(x[1], y[2])),
                    field.add(field.mul(x[0], y[1]), field.mul(x[1], y[3])),
                    field.add(field.mul(x[2], y[0]), field.mul(x[3], y[2])),
                    field.add(field.mul(x[2], y[1]), field.mul(x[3], y[3])),
                ];
                table[i * order + j] = index[&canonical(p)];
            }
        }
        Self::from_table(order, table, GroupSpec::Psl2(q as u64).to_string())
    }

    /// Reads a table file: first line `group <order>`, then `order` lines of `order` ids.
    pub fn from_table_text(text: &str, descriptor: impl Into<String>) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty group table".into()))?;
        let order = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["group", n] => n
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad order in {header:?}")))?,
            _ => return Err(Error::Parse(format!("bad group header {header:?}"))),
        };
        let mut table = Vec::with_capacity(order * order);
        for (r, line) in lines.enumerate() {
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry {t:?} in row {r}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != order {
                return Err(Error::Parse(format!(
                    "row {r} has {} entries, expected {order}",
                    row.len()
                )));
            }
            table.extend(row);
        }
        if table.len() != order * order {
            return Err(Error::Parse(format!("expected {order} table rows")));
        }
        Self::from_table(order, table, descriptor)
    }

    pub fn to_table_text(&self) -> String {
        let mut s = format!("group {}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Whether `gens` generates the whole group.
    pub fn generates(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.order];
        let mut stack = vec![self.identity];
        seen[self.identity] = true;
        let mut count = 1;
        while let Some(g) = stack.pop() {
            for &s in gens {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    count += 1;
                    stack.push(h);
                }
            }
        }
        count == self.order
    }

    /// Conjugacy class label of every element (labels are the smallest member id).
    pub fn conjugacy_classes(&self) -> Vec<usize> {
        let n = self.order;
        let mut label = vec![usize::MAX; n];
        for g in 0..n {
            if label[g] != usize::MAX {
                continue;
            }
            for x in 0..n {
                let c = self.mul(self.mul(x, g), self.inv(x));
                label[c] = g;
            }
        }
        label
    }

    /// Whether the group is abelian.
    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// How a group was (or should be) obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(usize),
    Psl2(u64),
    Table(PathBuf),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Psl2(q) => FiniteGroup::psl2(*q),
            GroupSpec::Table(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
                FiniteGroup::from_table_text(&text, self.to_string())
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Psl2(q) => write!(f, "psl2:{q}"),
            GroupSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `cyclic:N`, `psl2:Q` or `table:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group descriptor {s:?} is not KIND:ARG")))?;
        let number = || {
            arg.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad group parameter in {s:?}")))
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "cyclic" | "z" => Ok(GroupSpec::Cyclic(number()? as usize)),
            "psl2" => Ok(GroupSpec::Psl2(number()?)),
            "table" => Ok(GroupSpec::Table(PathBuf::from(arg))),
            other => Err(Error::Parse(format!("unknown group kind {other:?}"))),
        }
    }
}

/// Arithmetic in GF(p^m) with elements `0..q` encoding polynomials in base p.
struct Field {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

impl Field {
    fn new(q: u64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidQ {
            q,
            reason: reason.into(),
        };
        if q < 3 {
            return Err(invalid("q must be an odd prime power"));
        }
        if q.is_multiple_of(2) {
            return Err(invalid("q must be odd"));
        }
        let p = (3..=q)
            .step_by(2)
            .find(|d| q.is_multiple_of(*d))
            .expect("q is odd and at least 3");
        let mut m = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(invalid("q is not a prime power"));
        }
        if q > 255 {
            return Err(invalid("q too large for a tabulated field"));
        }
        let (p, q, m) = (p as usize, q as usize, m as usize);
        let digits = |x: usize| -> Vec<usize> { (0..m).map(|i| x / p.pow(i as u32) % p).collect() };
        let undigits = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let modulus = irreducible(p, m);
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for x in 0..q {
            let dx = digits(x);
            for y in 0..q {
                let dy = digits(y);
                let sum: Vec<usize> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[x * q + y] = undigits(&sum) as u16;
                // Schoolbook product then reduction by the monic modulus.
                let mut prod = vec![0usize; 2 * m];
                for i in 0..m {
                    for j in 0..m {
                        prod[i + j] = (prod[i + j] + dx[i] * dy[j]) % p;
                    }
                }
                for deg in (m..2 * m).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, &mc) in modulus.iter().enumerate().take(m) {
                            let idx = deg - m + i;
                            prod[idx] = (prod[idx] + p * p - c * mc % p) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                mul[x * q + y] = undigits(&prod[..m]) as u16;
            }
        }
        let neg = (0..q)
            .map(|x| (0..q).find(|&y| add[x * q + y] == 0).expect("additive inverse") as u16)
            .collect();
        Ok(Self { q, add, mul, neg })
    }

    fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.q + y] as usize
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.q + y] as usize
    }

    fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }
}

/// Coefficients (low to high, monic, length m+1) of the smallest irreducible polynomial of degree m over F_p.
fn irreducible(p: usize, m: usize) -> Vec<usize> {
    if m == 1 {
        return vec![0, 1];
    }
    let poly_count = p.pow(m as u32);
    'candidates: for low in 0..poly_count {
        let mut f: Vec<usize> = (0..m).map(|i| low / p.pow(i as u32) % p).collect();
        f.push(1);
        // Trial division by every monic polynomial of degree 1..=m/2.
        for d in 1..=m / 2 {
            for glow in 0..p.pow(d as u32) {
                let mut g: Vec<usize> = (0..d).map(|i| glow / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                    continue 'candidates;
                }
            }
        }
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem(f: &[usize], g: &[usize], p: usize) -> Vec<usize> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    for deg in (dg..r.len()).rev() {
        let c = r[deg];
        if c != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = deg - dg + i;
                r[idx] = (r[idx] + p * p - c * gc % p) % p;
            }
        }
    }
    r.truncate(dg);
    r
}

/// A pair of symmetric generating sets `A`, `B` of equal size Δ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSetPair {
    pub gens_a: Vec<usize>,
    pub gens_b: Vec<usize>,
}

/// Result of a TNC check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tnc {
    Ok,
    /// `a·g = g·b`.
    Violation {
        a: usize,
        b: usize,
        g: usize,
    },
}

/// Exhaustive check of `a·g ≠ g·b` over all `(a, b, g)`.
pub fn check_tnc(group: &FiniteGroup, pair: &GeneratingSetPair) -> Tnc {
    for &a in &pair.gens_a {
        for &b in &pair.gens_b {
            for g in 0..group.order() {
                if group.mul(a, g) == group.mul(g, b) {
                    return Tnc::Violation { a, b, g };
                }
            }
        }
    }
    Tnc::Ok
}

impl GeneratingSetPair {
    pub fn delta(&self) -> usize {
        self.gens_a.len()
    }

    /// Checks sizes, distinctness, symmetry, generation and TNC.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.gens_a.len() != self.gens_b.len() {
            return Err(Error::InvalidArgument(format!(
                "|A| = {} but |B| = {}",
                self.gens_a.len(),
                self.gens_b.len()
            )));
        }
        for (name, set) in [("A", &self.gens_a), ("B", &self.gens_b)] {
            let mut seen = vec![false; n];
            for &x in set {
                if x >= n {
                    return Err(Error::InvalidArgument(format!(
                        "{name} contains {x}, outside the group"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidArgument(format!("{name} repeats element {x}")));
                }
                seen[x] = true;
            }
            if let Some(&x) = set.iter().find(|&&x| !seen[group.inv(x)]) {
                return Err(Error::InvalidArgument(format!(
                    "{name} is not symmetric: missing the inverse of {x}"
                )));
            }
            if !group.generates(set) {
                return Err(Error::InvalidArgument(format!("{name} does not generate the group")));
            }
        }
        match check_tnc(group, self) {
            Tnc::Ok => Ok(()),
            Tnc::Violation { a, b, g } => Err(Error::InvalidArgument(format!(
                "total no-conjugacy fails: a={a}, b={b}, g={g}"
            ))),
        }
    }
}

/// A generating pair together with the number of search attempts used.
#[derive(Clone, Debug)]
pub struct PairSearch {
    pub pair: GeneratingSetPair,
    pub attempts: usize,
}

/// Default bound on random search attempts.
pub const DEFAULT_PAIR_ATTEMPTS: usize = 2000;

/// Randomly searches for a symmetric generating pair with TNC.
///
/// TNC is equivalent to no element of B being conjugate to an element of A, so
/// each attempt splits the inverse-closed conjugacy classes at random into an
/// A side and a B side and samples a symmetric Δ-subset from each.
pub fn find_generating_pair(group: &FiniteGroup, delta: usize, seed: u64, max_attempts: usize) -> Result<PairSearch> {
    let n = group.order();
    if delta == 0 || delta >= n {
        return Err(Error::ExhaustedAttempts {
            attempts: 0,
            reason: format!("Δ = {delta} is not in 1..{n}"),
        });
    }
    let class = group.conjugacy_classes();
    // Merge each class with its inverse class.
    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    for g in 0..n {
        if g == group.identity() {
            continue;
        }
        let key = class[g].min(class[group.inv(g)]);
        blocks.entry(key).or_default().push(g);
    }
    let mut blocks: Vec<Vec<usize>> = {
        let mut keys: Vec<usize> = blocks.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter().map(|k| blocks.remove(&k).unwrap()).collect()
    };
    for b in &mut blocks {
        b.sort_unstable();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.shuffle(&mut rng);
        let split = rng.gen_range(1..blocks.len().max(2));
        let side_a: Vec<usize> = order[..split.min(order.len())]
            .iter()
            .flat_map(|&i| blocks[i].clone())
            .collect();
        let side_b: Vec<usize> = order[split.min(order.len())..]
            .iter()
            .flat_map(|&i| blocks[i].clone())
            .collect();
        let Some(gens_a) = sample_symmetric(group, &side_a, delta, &mut rng) else {
            continue;
        };
        let Some(gens_b) = sample_symmetric(group, &side_b, delta, &mut rng) else {
            continue;
        };
        let pair = GeneratingSetPair { gens_a, gens_b };
        if pair.validate(group).is_ok() {
            return Ok(PairSearch {
                pair,
                attempts: attempt,
            });
        }
    }
    Err(Error::ExhaustedAttempts {
        attempts: max_attempts,
        reason: format!(
            "no symmetric TNC generating pair of size {delta} found in {}",
            group.descriptor()
        ),
    })
}

/// Random symmetric subset of size exactly `delta` drawn from an inverse-closed pool.
fn sample_symmetric<R: Rng>(group: &FiniteGroup, pool: &[usize], delta: usize, rng: &mut R) -> Option<Vec<usize>> {
    let mut units: Vec<Vec<usize>> = pool
        .iter()
        .filter(|&&g| g <= group.inv(g))
        .map(|&g| {
            if g == group.inv(g) {
                vec![g]
            } else {
                vec![g, group.inv(g)]
            }
        })
        .collect();
    units.shuffle(rng);
    let mut chosen = Vec::with_capacity(delta);
    for u in units {
        if chosen.len() + u.len() <= delta {
            chosen.extend(u);
        }
        if chosen.len() == delta {
            chosen.sort_unstable();
            return Some(chosen);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psl2_orders() {
        assert_eq!(FiniteGroup::psl2(3).unwrap().order(), 12);
        assert_eq!(FiniteGroup::psl2(5).unwrap().order(), 60);
        assert_eq!(FiniteGroup::psl2(7).unwrap().order(), 168);
        assert_eq!(FiniteGroup::psl2(9).unwrap().order(), 360);
        let g = FiniteGroup::psl2(5).unwrap();
        let e = g.identity();
        assert_eq!(g.mul(e, e), e);
        assert!(!g.is_abelian());
    }

    #[test]
    fn invalid_q() {
        for q in [2, 4, 6, 15, 21, 1, 0] {
            assert!(matches!(FiniteGroup::psl2(q), Err(Error::InvalidQ { .. })), "q={q}");
        }
        assert_eq!(FiniteGroup::psl2(3).unwrap().order(), 12);
        assert_eq!(
            Error::InvalidQ {
                q: 4,
                reason: String::new()
            }
            .kind(),
            "invalid-q"
        );
    }

    #[test]
    fn field_of_nine_elements_is_a_field() {
        let f = Field::new(9).unwrap();
        for x in 1..9 {
            assert_eq!((1..9).filter(|&y| f.mul(x, y) == 1).count(), 1);
        }
        for x in 0..9 {
            for y in 0..9 {
                for z in 0..9 {
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                }
            }
        }
    }

    #[test]
    fn cyclic_basics() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        let z12 = FiniteGroup::cyclic(12).unwrap();
        assert_eq!(z12.inv(5), 7);
        assert_eq!(z12.identity(), 0);
        assert!(z12.is_abelian());
    }

    #[test]
    fn tnc_examples() {
        let z12 = FiniteGroup::cyclic(12).unwrap();
        let pair = GeneratingSetPair {
            gens_a: vec![1, 11, 5, 7],
            gens_b: vec![2, 10, 3, 9],
        };
        assert_eq!(check_tnc(&z12, &pair), Tnc::Ok);
        pair.validate(&z12).unwrap();
        let bad = GeneratingSetPair {
            gens_a: vec![1, 11],
            gens_b: vec![1, 11],
        };
        assert!(matches!(check_tnc(&z12, &bad), Tnc::Violation { a: 1, b: 1, .. }));
        let empty = GeneratingSetPair {
            gens_a: vec![],
            gens_b: vec![],
        };
        assert_eq!(check_tnc(&z12, &empty), Tnc::Ok);
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["cyclic:12", "psl2:5", "table:groups/a4.txt"] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
        assert!("dihedral:4".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn table_text_round_trip() {
        let g = FiniteGroup::psl2(3).unwrap();
        let back = FiniteGroup::from_table_text(&g.to_table_text(), g.descriptor()).unwrap();
        assert_eq!(back, g);
        assert!(FiniteGroup::from_table_text("group 2\n0 1\n1 1\n", "bad").is_err());
    }
}

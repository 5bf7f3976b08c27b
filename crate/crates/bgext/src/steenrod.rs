//! The mod 2 Steenrod algebra in the admissible basis.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// `C(a, b) mod 2`, extended to negative arguments.
///
/// `C(a,0) = 1`, `C(a,b) = 0` for `b < 0`, Lucas for `a >= b >= 0`, and
/// `C(a,b) = C(b-a-1, b)` for `a < 0 < b`. Remaining cases (`0 <= a < b`) are 0.
pub fn lucas_binom_mod2(a: i64, b: i64) -> bool {
    if b == 0 {
        return true;
    }
    if b < 0 {
        return false;
    }
    if a < 0 {
        return lucas_binom_mod2(b - a - 1, b);
    }
    if a < b {
        return false;
    }
    b & !a == 0
}

/// A monomial `Sq^{i1} ... Sq^{ik}` with every index positive. Empty means `Sq^0 = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// Drops zero indices.
    pub fn new(indices: impl IntoIterator<Item = u32>) -> Self {
        Monomial(indices.into_iter().filter(|&i| i > 0).collect())
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn sq(i: u32) -> Self {
        Self::new([i])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    /// `2 i1 - sum`. Zero for the empty monomial; may be negative if not admissible.
    pub fn excess(&self) -> i64 {
        match self.0.first() {
            None => 0,
            Some(&i1) => 2 * i1 as i64 - self.degree() as i64,
        }
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }
}

/// Degree ascending, then index sequences in descending lexicographic order,
/// so `Sq^5` sorts before `Sq^4 Sq^1`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Sq^0");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq^{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A formal F2 sum of monomials; duplicates cancel.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SteenrodOp {
    terms: BTreeSet<Monomial>,
}

impl SteenrodOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Monomial::one())
    }

    pub fn sq(i: u32) -> Self {
        Self::from(Monomial::sq(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Toggle one monomial.
    pub fn add_monomial(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SteenrodOp) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    /// Degree of a homogeneous nonzero op.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Concatenation product, not reduced.
    pub fn mul(&self, other: &SteenrodOp) -> SteenrodOp {
        let mut out = SteenrodOp::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_monomial(a.concat(b));
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.iter().all(Monomial::is_admissible)
    }

    /// Keep only terms matching `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> SteenrodOp {
        SteenrodOp { terms: self.terms.iter().filter(|m| keep(m)).cloned().collect() }
    }
}

impl From<Monomial> for SteenrodOp {
    fn from(m: Monomial) -> Self {
        SteenrodOp { terms: BTreeSet::from([m]) }
    }
}

impl FromIterator<Monomial> for SteenrodOp {
    fn from_iter<T: IntoIterator<Item = Monomial>>(iter: T) -> Self {
        let mut s = SteenrodOp::zero();
        for m in iter {
            s.add_monomial(m);
        }
        s
    }
}

impl fmt::Display for SteenrodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SteenrodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseOpError {
    #[error("empty input")]
    Empty,
    #[error("bad factor {0:?}, expected Sq^<n>")]
    BadFactor(String),
}

impl FromStr for SteenrodOp {
    type Err = ParseOpError;

    /// Accepts `0`, or `+`-separated monomials of space-separated `Sq^n` factors.
    /// Parsing does not reduce; repeated monomials cancel.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseOpError::Empty);
        }
        if s == "0" {
            return Ok(SteenrodOp::zero());
        }
        let mut out = SteenrodOp::zero();
        for term in s.split('+') {
            let mut idx = Vec::new();
            let factors: Vec<&str> = term.split_whitespace().collect();
            if factors.is_empty() {
                return Err(ParseOpError::BadFactor(term.to_string()));
            }
            for fac in factors {
                let n = fac
                    .strip_prefix("Sq^")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| ParseOpError::BadFactor(fac.to_string()))?;
                idx.push(n);
            }
            out.add_monomial(Monomial::new(idx));
        }
        Ok(out)
    }
}

/// One Adem expansion of `Sq^i Sq^j` for `0 < i < 2j`, as (first, second) index pairs.
pub fn adem_pair(i: u32, j: u32) -> Vec<(u32, u32)> {
    debug_assert!(i > 0 && i < 2 * j);
    (0..=i / 2)
        .filter(|&t| lucas_binom_mod2(j as i64 - t as i64 - 1, i as i64 - 2 * t as i64))
        .map(|t| (i + j - t, t))
        .collect()
}

thread_local! {
    static SQ_TIMES_ADM: RefCell<HashMap<(u32, Monomial), SteenrodOp>> = RefCell::new(HashMap::new());
}

/// `Sq^a * r` for admissible `r`, reduced.
fn sq_times_admissible(a: u32, r: &Monomial) -> SteenrodOp {
    if a == 0 {
        return SteenrodOp::from(r.clone());
    }
    match r.0.first() {
        None => return SteenrodOp::sq(a),
        Some(&r1) if a >= 2 * r1 => {
            let mut v = vec![a];
            v.extend_from_slice(&r.0);
            return SteenrodOp::from(Monomial(v));
        }
        _ => {}
    }
    let key = (a, r.clone());
    if let Some(hit) = SQ_TIMES_ADM.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let r1 = r.0[0];
    let tail = Monomial(r.0[1..].to_vec());
    let mut out = SteenrodOp::zero();
    for (hi, t) in adem_pair(a, r1) {
        for m in sq_times_admissible(t, &tail).terms {
            out.add_assign(&sq_times_admissible(hi, &m));
        }
    }
    SQ_TIMES_ADM.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

pub fn reduce_monomial(m: &Monomial) -> SteenrodOp {
    let mut acc = SteenrodOp::one();
    for &i in m.0.iter().rev() {
        let mut next = SteenrodOp::zero();
        for r in acc.terms() {
            next.add_assign(&sq_times_admissible(i, r));
        }
        acc = next;
    }
    acc
}

/// Rewrite to the admissible basis.
pub fn adem_reduce(op: &SteenrodOp) -> SteenrodOp {
    let mut out = SteenrodOp::zero();
    for m in op.terms() {
        out.add_assign(&reduce_monomial(m));
    }
    out
}

/// `reduce(a * b)`.
pub fn compose(a: &SteenrodOp, b: &SteenrodOp) -> SteenrodOp {
    adem_reduce(&a.mul(b))
}

pub fn excess(m: &Monomial) -> i64 {
    m.excess()
}

/// Admissibles of `degree` with excess at most `excess_cap`, descending lexicographic.
pub fn admissible_basis(degree: u32, excess_cap: u32) -> Vec<Monomial> {
    if degree == 0 {
        return vec![Monomial::one()];
    }
    let mut out = Vec::new();
    // 2 i1 - degree <= cap
    let top = ((degree + excess_cap) / 2).min(degree);
    let mut buf = Vec::new();
    for i1 in (1..=top).rev() {
        buf.push(i1);
        tails(degree - i1, i1 / 2, &mut buf, &mut out);
        buf.pop();
    }
    out
}

/// Admissible tails summing to `rest` whose first index is at most `max`.
fn tails(rest: u32, max: u32, buf: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if rest == 0 {
        out.push(Monomial(buf.clone()));
        return;
    }
    // an admissible sequence led by i has degree < 2i
    for i in (1..=max.min(rest)).rev() {
        if 2 * i <= rest {
            break;
        }
        buf.push(i);
        tails(rest - i, i / 2, buf, out);
        buf.pop();
    }
}

/// `dim F(m)^n`.
pub fn dim_free(m: u32, n: u32) -> usize {
    if n < m {
        return 0;
    }
    admissible_basis(n - m, m).len()
}
